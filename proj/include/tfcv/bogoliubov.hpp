#pragma once

#include "tfcv/gaussian.hpp"

#include <string>

namespace tfcv {

/// Linear map b_j = sum_k (A_jk a_k + B_jk a_k^dag) describing a Gaussian
/// unitary in annihilation-operator form.
struct BogoliubovPair {
  CMat A;
  CMat B;

  std::size_t num_modes() const { return static_cast<std::size_t>(A.rows()); }

  static BogoliubovPair identity(std::size_t n_modes);
  /// Passive transformation a -> U a for unitary U.
  static BogoliubovPair passive(const CMat& unitary);
  /// Per-mode phase shifts a_k -> e^{i theta_k} a_k.
  static BogoliubovPair phases(const std::vector<double>& thetas);
};

struct BogoliubovDiagnostics {
  bool valid = false;
  /// ||A A^dag - B B^dag - I||_max
  double unitarity_residual = 0.0;
  /// ||A B^T - B A^T||_max
  double symmetry_residual = 0.0;
  std::string message;
};

/// Checks A A^dag - B B^dag = I and A B^T = B A^T within tol.
BogoliubovDiagnostics validate_bogoliubov(const BogoliubovPair& pair,
                                          double tol = kSymplecticTol);

/// Composition: applying `first`, then `second`.
BogoliubovPair compose(const BogoliubovPair& first,
                       const BogoliubovPair& second);

/// Real symplectic matrix implementing the same transformation on
/// (q1,p1,q2,p2,...) quadratures.
SymplecticOp to_symplectic(const BogoliubovPair& pair);

/// Inverse of to_symplectic: annihilation-operator form of a symplectic
/// matrix (displacement ignored).
BogoliubovPair from_symplectic(const Mat& s);

}  // namespace tfcv
