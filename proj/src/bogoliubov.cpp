#include "tfcv/bogoliubov.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace tfcv {

namespace {
using Cx = std::complex<double>;
}

BogoliubovPair BogoliubovPair::identity(std::size_t n_modes) {
  return {CMat::Identity(n_modes, n_modes), CMat::Zero(n_modes, n_modes)};
}

BogoliubovPair BogoliubovPair::passive(const CMat& unitary) {
  return {unitary, CMat::Zero(unitary.rows(), unitary.cols())};
}

BogoliubovPair BogoliubovPair::phases(const std::vector<double>& thetas) {
  const std::size_t n = thetas.size();
  CMat a = CMat::Zero(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    a(k, k) = std::exp(Cx(0.0, thetas[k]));
  }
  return {a, CMat::Zero(n, n)};
}

BogoliubovDiagnostics validate_bogoliubov(const BogoliubovPair& pair,
                                          double tol) {
  BogoliubovDiagnostics diag;
  if (pair.A.rows() != pair.A.cols() || pair.B.rows() != pair.B.cols() ||
      pair.A.rows() != pair.B.rows()) {
    throw std::invalid_argument(
        "Bogoliubov pair must hold square matrices of equal shape");
  }
  const std::size_t n = pair.num_modes();
  diag.unitarity_residual = (pair.A * pair.A.adjoint() -
                             pair.B * pair.B.adjoint() - CMat::Identity(n, n))
                                .cwiseAbs()
                                .maxCoeff();
  diag.symmetry_residual =
      (pair.A * pair.B.transpose() - pair.B * pair.A.transpose())
          .cwiseAbs()
          .maxCoeff();
  // The residuals are differences of entries of size ~ ||A||^2, so the
  // achievable accuracy scales with that magnitude.
  const double scale = std::max(
      1.0, std::pow(std::max(pair.A.cwiseAbs().maxCoeff(),
                             pair.B.cwiseAbs().maxCoeff()),
                    2.0));
  diag.valid = diag.unitarity_residual <= tol * scale &&
               diag.symmetry_residual <= tol * scale;
  if (!diag.valid) {
    diag.message = "invalid Bogoliubov pair: |AA^dag - BB^dag - I| = " +
                   std::to_string(diag.unitarity_residual) +
                   ", |AB^T - BA^T| = " +
                   std::to_string(diag.symmetry_residual);
  }
  return diag;
}

BogoliubovPair compose(const BogoliubovPair& first,
                       const BogoliubovPair& second) {
  if (first.num_modes() != second.num_modes()) {
    throw std::invalid_argument("composed pairs must have equal mode counts");
  }
  return {second.A * first.A + second.B * first.B.conjugate(),
          second.A * first.B + second.B * first.A.conjugate()};
}

SymplecticOp to_symplectic(const BogoliubovPair& pair) {
  const auto diag = validate_bogoliubov(pair);
  if (!diag.valid) {
    throw std::invalid_argument(diag.message);
  }
  const std::size_t n = pair.num_modes();
  const CMat sum = pair.A + pair.B;
  const CMat diff = pair.A - pair.B;
  Mat s(2 * n, 2 * n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      s(2 * j, 2 * k) = sum(j, k).real();
      s(2 * j, 2 * k + 1) = -diff(j, k).imag();
      s(2 * j + 1, 2 * k) = sum(j, k).imag();
      s(2 * j + 1, 2 * k + 1) = diff(j, k).real();
    }
  }
  return SymplecticOp(std::move(s));
}

BogoliubovPair from_symplectic(const Mat& s) {
  if (s.rows() != s.cols() || s.rows() % 2 != 0) {
    throw std::invalid_argument("symplectic matrix must be square and even");
  }
  const std::size_t n = static_cast<std::size_t>(s.rows()) / 2;
  CMat a(n, n);
  CMat b(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      const double qq = s(2 * j, 2 * k);
      const double qp = s(2 * j, 2 * k + 1);
      const double pq = s(2 * j + 1, 2 * k);
      const double pp = s(2 * j + 1, 2 * k + 1);
      a(j, k) = 0.5 * Cx(qq + pp, pq - qp);
      b(j, k) = 0.5 * Cx(qq - pp, pq + qp);
    }
  }
  return {std::move(a), std::move(b)};
}

}  // namespace tfcv
