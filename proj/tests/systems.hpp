#pragma once

// The two worked example systems used throughout the tests.

#include "jsrlab/markov.hpp"
#include "jsrlab/system.hpp"

namespace fixtures {

using jsrlab::Matrix;
using jsrlab::Vector;

/// A1 = I, A2 = rotation by -pi/2, A3 = [[0, -1/2], [1, 0]].
inline jsrlab::MatrixTuple example1() {
  return jsrlab::MatrixTuple({Matrix::Identity(2, 2), (Matrix(2, 2) << 0, 1, -1, 0).finished(),
                              (Matrix(2, 2) << 0, -0.5, 1, 0).finished()});
}

inline jsrlab::MarkovChain example1_chain() {
  Matrix p(3, 3);
  p << 0.5, 0.5, 0, 0, 0, 1, 1, 0, 0;
  return jsrlab::MarkovChain(p, Vector((Vector(3) << 0.5, 0.25, 0.25).finished()));
}

/// Nilpotent pair whose only norm-one products come from rotations of (1,1,2).
inline jsrlab::MatrixTuple example2() {
  return jsrlab::MatrixTuple({(Matrix(3, 3) << 0, 1, 0, 0, 0, 1, 0, 0, 0).finished(),
                              (Matrix(3, 3) << 0, 0, 0, 0, 0, 0, 1, 0, 0).finished()});
}

inline jsrlab::MarkovChain uniform_chain(Eigen::Index n) {
  return jsrlab::MarkovChain(Matrix::Constant(n, n, 1.0 / static_cast<double>(n)),
                             Vector::Constant(n, 1.0 / static_cast<double>(n)));
}

}  // namespace fixtures
