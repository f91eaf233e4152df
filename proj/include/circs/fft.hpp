#pragma once

#include <Eigen/Dense>

namespace circs::fft {

// Complex DFT of arbitrary length (mixed-radix; odd sizes are fine).
// Plans are cached per size and reused, so repeated transforms of the
// same length are cheap and bitwise reproducible.
Eigen::VectorXcd forward(const Eigen::VectorXcd& x);

// Inverse DFT, normalized by 1/n.
Eigen::VectorXcd inverse(const Eigen::VectorXcd& x);

}  // namespace circs::fft
