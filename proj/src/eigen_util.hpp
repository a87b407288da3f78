#pragma once

// Internal helpers shared by the numeric translation units.

#include "torsionlab/groupring.hpp"

#include <Eigen/Dense>

namespace torsionlab {

inline Eigen::MatrixXcd eval_at(const LaurentMatrix& m, Complex z) {
    Eigen::MatrixXcd out(m.rows(), m.cols());
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c) out(r, c) = m.at(r, c).eval(z);
    return out;
}

} // namespace torsionlab
