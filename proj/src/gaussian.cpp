#include "tfcv/gaussian.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace tfcv {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) {
    throw std::invalid_argument(msg);
  }
}

std::vector<std::size_t> to_indices(const std::vector<ModeIndex>& modes,
                                    std::size_t n_modes, bool must_be_unique) {
  std::vector<std::size_t> idx;
  idx.reserve(modes.size());
  for (const auto& m : modes) {
    require(m.value < n_modes, "mode index " + std::to_string(m.value) +
                                   " out of range for " +
                                   std::to_string(n_modes) + " modes");
    idx.push_back(m.value);
  }
  if (must_be_unique) {
    auto sorted = idx;
    std::sort(sorted.begin(), sorted.end());
    require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(),
            "repeated mode index");
  }
  return idx;
}

std::vector<double> symplectic_spectrum(const Mat& cov) {
  const std::size_t n = cov.rows() / 2;
  std::vector<double> mags(2 * n);
  Eigen::LLT<Mat> llt(cov);
  if (llt.info() == Eigen::Success) {
    // Stable route for positive-definite covariances: the symplectic
    // eigenvalues are the paired singular values of L^T Omega L.
    const Mat l = llt.matrixL();
    const Mat k = l.transpose() * symplectic_form(n) * l;
    Eigen::JacobiSVD<Mat> svd(k);
    for (std::size_t i = 0; i < 2 * n; ++i) {
      mags[i] = svd.singularValues()(i);
    }
  } else {
    Eigen::EigenSolver<Mat> solver(symplectic_form(n) * cov, false);
    for (std::size_t i = 0; i < 2 * n; ++i) {
      mags[i] = std::abs(solver.eigenvalues()(i));
    }
  }
  std::sort(mags.begin(), mags.end(), std::greater<>());
  std::vector<double> nus(n);
  for (std::size_t k = 0; k < n; ++k) {
    nus[k] = 0.5 * (mags[2 * k] + mags[2 * k + 1]);
  }
  return nus;
}

// Tr(rho_a rho_b) for Gaussian states: the Wigner-overlap integral.
double gaussian_overlap(const GaussianState& a, const GaussianState& b) {
  const Mat sum = a.cov() + b.cov();
  Eigen::LLT<Mat> llt(sum);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("fidelity: covariance sum is not positive definite");
  }
  const Vec delta = b.mean() - a.mean();
  const double quad = delta.dot(llt.solve(delta));
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < sum.rows(); ++i) {
    log_det += 2.0 * std::log(llt.matrixL()(i, i));
  }
  return std::exp(-0.5 * quad - 0.5 * log_det);
}

}  // namespace

Mat symplectic_form(std::size_t n_modes) {
  Mat omega = Mat::Zero(2 * n_modes, 2 * n_modes);
  for (std::size_t k = 0; k < n_modes; ++k) {
    omega(2 * k, 2 * k + 1) = 1.0;
    omega(2 * k + 1, 2 * k) = -1.0;
  }
  return omega;
}

SymplecticOp::SymplecticOp(Mat matrix)
    : SymplecticOp(std::move(matrix), Vec()) {}

SymplecticOp::SymplecticOp(Mat matrix, Vec displacement)
    : matrix_(std::move(matrix)), displacement_(std::move(displacement)) {
  require(matrix_.rows() == matrix_.cols() && matrix_.rows() % 2 == 0 &&
              matrix_.rows() > 0,
          "symplectic matrix must be square with even dimension");
  if (displacement_.size() == 0) {
    displacement_ = Vec::Zero(matrix_.rows());
  }
  require(displacement_.size() == matrix_.rows(),
          "displacement length must match matrix dimension");
  const Mat omega = symplectic_form(num_modes());
  const double residual =
      (matrix_.transpose() * omega * matrix_ - omega).cwiseAbs().maxCoeff();
  const double scale =
      std::max(1.0, std::pow(matrix_.cwiseAbs().maxCoeff(), 2.0));
  if (residual > kSymplecticTol * scale) {
    throw std::invalid_argument("matrix is not symplectic: residual " +
                                std::to_string(residual));
  }
}

SymplecticOp SymplecticOp::identity(std::size_t n_modes) {
  return SymplecticOp(Mat::Identity(2 * n_modes, 2 * n_modes));
}

SymplecticOp SymplecticOp::phase_rotation(double theta) {
  Mat r(2, 2);
  r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return SymplecticOp(r);
}

SymplecticOp SymplecticOp::squeezer(double r) {
  Mat s(2, 2);
  s << std::exp(r), 0.0, 0.0, std::exp(-r);
  return SymplecticOp(s);
}

SymplecticOp SymplecticOp::then(const SymplecticOp& next) const {
  require(num_modes() == next.num_modes(),
          "composed ops must act on the same number of modes");
  return SymplecticOp(next.matrix() * matrix_,
                      next.matrix() * displacement_ + next.displacement());
}

GaussianState::GaussianState(Vec mean, Mat cov)
    : mean_(std::move(mean)), cov_(std::move(cov)) {
  require(cov_.rows() == cov_.cols() && cov_.rows() > 0 && cov_.rows() % 2 == 0,
          "covariance must be square with even dimension");
  require(mean_.size() == cov_.rows(),
          "mean length must match covariance dimension");
  n_modes_ = static_cast<std::size_t>(cov_.rows()) / 2;
  const double asym = (cov_ - cov_.transpose()).cwiseAbs().maxCoeff();
  const double sym_scale = std::max(1.0, cov_.cwiseAbs().maxCoeff());
  if (asym > kStructuralTol * sym_scale) {
    char msg[96];
    std::snprintf(msg, sizeof(msg),
                  "covariance is not symmetric: residual %.3e", asym);
    throw std::invalid_argument(msg);
  }
  cov_ = 0.5 * (cov_ + cov_.transpose());
  const auto nus = symplectic_spectrum(cov_);
  // Roundoff in S V S^T products grows with the covariance scale; widen the
  // guard accordingly so strongly squeezed states are not rejected.
  const double scale = std::max(1.0, 0.01 * cov_.cwiseAbs().maxCoeff());
  if (nus.back() < 0.5 - kSpectralTol * scale) {
    throw std::invalid_argument(
        "covariance violates the uncertainty relation: min symplectic "
        "eigenvalue " +
        std::to_string(nus.back()));
  }
}

std::vector<double> GaussianState::symplectic_eigenvalues() const {
  return symplectic_spectrum(cov_);
}

double GaussianState::purity() const {
  double log_purity = -static_cast<double>(n_modes_) * std::log(2.0);
  Eigen::LLT<Mat> llt(cov_);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("purity: covariance not positive definite");
  }
  for (Eigen::Index i = 0; i < cov_.rows(); ++i) {
    log_purity -= std::log(llt.matrixL()(i, i));
  }
  return std::exp(log_purity);
}

bool GaussianState::is_pure(double tol) const {
  const auto nus = symplectic_eigenvalues();
  return nus.front() <= 0.5 + tol;
}

GaussianState vacuum(std::size_t n_modes) {
  require(n_modes >= 1, "vacuum needs at least one mode");
  return GaussianState(Vec::Zero(2 * n_modes),
                       0.5 * Mat::Identity(2 * n_modes, 2 * n_modes));
}

GaussianState squeezed_vacuum(double r) {
  require(std::isfinite(r), "squeezing parameter must be finite");
  Mat cov(2, 2);
  cov << 0.5 * std::exp(2.0 * r), 0.0, 0.0, 0.5 * std::exp(-2.0 * r);
  return GaussianState(Vec::Zero(2), cov);
}

double db_to_r(double db) {
  require(std::isfinite(db), "squeezing in dB must be finite");
  return db * std::log(10.0) / 20.0;
}

GaussianState apply(const GaussianState& state, const SymplecticOp& op,
                    const std::vector<ModeIndex>& targets) {
  const auto idx = to_indices(targets, state.num_modes(), true);
  require(op.num_modes() == idx.size(),
          "op dimension does not match the number of target modes");
  const std::size_t n = state.num_modes();
  Mat s = Mat::Identity(2 * n, 2 * n);
  Vec d = Vec::Zero(2 * n);
  for (std::size_t a = 0; a < idx.size(); ++a) {
    for (std::size_t u = 0; u < 2; ++u) {
      const std::size_t row = 2 * idx[a] + u;
      s(row, row) = 0.0;
      for (std::size_t b = 0; b < idx.size(); ++b) {
        for (std::size_t v = 0; v < 2; ++v) {
          s(row, 2 * idx[b] + v) = op.matrix()(2 * a + u, 2 * b + v);
        }
      }
      d(row) = op.displacement()(2 * a + u);
    }
  }
  return GaussianState(s * state.mean() + d,
                       s * state.cov() * s.transpose());
}

GaussianState tensor_product(const GaussianState& a, const GaussianState& b) {
  const std::size_t n = a.num_modes() + b.num_modes();
  Vec mean(2 * n);
  mean << a.mean(), b.mean();
  Mat cov = Mat::Zero(2 * n, 2 * n);
  cov.topLeftCorner(2 * a.num_modes(), 2 * a.num_modes()) = a.cov();
  cov.bottomRightCorner(2 * b.num_modes(), 2 * b.num_modes()) = b.cov();
  return GaussianState(std::move(mean), std::move(cov));
}

GaussianState trace_out(const GaussianState& state,
                        const std::vector<ModeIndex>& modes) {
  auto drop = to_indices(modes, state.num_modes(), true);
  require(drop.size() < state.num_modes(), "cannot trace out every mode");
  std::vector<bool> dropped(state.num_modes(), false);
  for (auto i : drop) {
    dropped[i] = true;
  }
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < state.num_modes(); ++i) {
    if (!dropped[i]) {
      keep.push_back(i);
    }
  }
  const std::size_t m = keep.size();
  Vec mean(2 * m);
  Mat cov(2 * m, 2 * m);
  for (std::size_t a = 0; a < m; ++a) {
    mean(2 * a) = state.mean()(2 * keep[a]);
    mean(2 * a + 1) = state.mean()(2 * keep[a] + 1);
    for (std::size_t b = 0; b < m; ++b) {
      cov.block<2, 2>(2 * a, 2 * b) =
          state.cov().block<2, 2>(2 * keep[a], 2 * keep[b]);
    }
  }
  return GaussianState(std::move(mean), std::move(cov));
}

GaussianState lossy_coupling(const GaussianState& state, ModeIndex mode,
                             double delta_eta) {
  require(mode.value < state.num_modes(), "loss mode out of range");
  require(delta_eta >= 0.0 && delta_eta <= 1.0,
          "delta_eta must lie in [0, 1]");
  const double amp = std::sqrt(1.0 - delta_eta);
  const std::size_t n = state.num_modes();
  Vec x = Vec::Ones(2 * n);
  x(2 * mode.value) = amp;
  x(2 * mode.value + 1) = amp;
  Mat cov = x.asDiagonal() * state.cov() * x.asDiagonal();
  cov(2 * mode.value, 2 * mode.value) += 0.5 * delta_eta;
  cov(2 * mode.value + 1, 2 * mode.value + 1) += 0.5 * delta_eta;
  Vec mean = state.mean();
  mean(2 * mode.value) *= amp;
  mean(2 * mode.value + 1) *= amp;
  return GaussianState(std::move(mean), std::move(cov));
}

GaussianState homodyne(const GaussianState& state, ModeIndex mode,
                       double angle, double outcome) {
  require(mode.value < state.num_modes(), "homodyne mode out of range");
  require(std::isfinite(outcome), "homodyne outcome must be finite");
  require(state.num_modes() > 1, "homodyne would remove the last mode");
  const std::size_t n = state.num_modes();
  Vec e = Vec::Zero(2 * n);
  e(2 * mode.value) = std::cos(angle);
  e(2 * mode.value + 1) = std::sin(angle);
  const Vec v = state.cov() * e;
  const double var = e.dot(v);
  // Schur update restricted to the surviving modes; the measured mode is
  // destroyed by the detection.
  Vec mean(2 * (n - 1));
  Mat cov(2 * (n - 1), 2 * (n - 1));
  std::vector<std::size_t> keep;
  keep.reserve(2 * (n - 1));
  for (std::size_t i = 0; i < 2 * n; ++i) {
    if (i / 2 != mode.value) {
      keep.push_back(i);
    }
  }
  // Pseudo-inverse handling: a (near-)deterministic quadrature leaves the
  // rest of the state untouched.
  const double inv_var = var > 1e-300 ? 1.0 / var : 0.0;
  const double shift = (outcome - e.dot(state.mean())) * inv_var;
  for (std::size_t a = 0; a < keep.size(); ++a) {
    mean(a) = state.mean()(keep[a]) + v(keep[a]) * shift;
    for (std::size_t b = 0; b <= a; ++b) {
      const double value =
          state.cov()(keep[a], keep[b]) - v(keep[a]) * v(keep[b]) * inv_var;
      cov(a, b) = value;
      cov(b, a) = value;
    }
  }
  return GaussianState(std::move(mean), std::move(cov));
}

namespace {

// Generalized eigenvalues alpha/beta of a real pencil (A, B) via QZ.
// Near-zero betas mark infinite eigenvalues and are skipped.
std::vector<std::complex<double>> pencil_eigenvalues(const Mat& a,
                                                     const Mat& b) {
  Eigen::RealQZ<Mat> qz(a, b);
  if (qz.info() != Eigen::Success) {
    throw std::runtime_error("fidelity: QZ iteration failed");
  }
  const Mat& s = qz.matrixS();
  const Mat& t = qz.matrixT();
  const double beta_floor = 1e-12 * std::max(1.0, t.cwiseAbs().maxCoeff());
  std::vector<std::complex<double>> out;
  const Eigen::Index n = s.rows();
  Eigen::Index i = 0;
  while (i < n) {
    if (i + 1 < n && std::abs(s(i + 1, i)) > 1e-14 * std::max(1.0, s.cwiseAbs().maxCoeff())) {
      // 2x2 block: complex pair of T_blk^{-1} S_blk.
      if (std::abs(t(i, i)) > beta_floor && std::abs(t(i + 1, i + 1)) > beta_floor) {
        const Mat s2 = s.block<2, 2>(i, i);
        const Mat t2 = t.block<2, 2>(i, i);
        const Mat m = t2.inverse() * s2;
        const double tr = m.trace();
        const double det = m.determinant();
        const std::complex<double> disc =
            std::sqrt(std::complex<double>(tr * tr - 4.0 * det, 0.0));
        out.push_back((tr + disc) / 2.0);
        out.push_back((tr - disc) / 2.0);
      }
      i += 2;
    } else {
      if (std::abs(t(i, i)) > beta_floor) {
        out.emplace_back(s(i, i) / t(i, i), 0.0);
      }
      ++i;
    }
  }
  return out;
}

}  // namespace

double fidelity(const GaussianState& a, const GaussianState& b) {
  require(a.num_modes() == b.num_modes(),
          "fidelity requires equal mode counts");
  const double scale = std::max(
      1.0, std::max(a.cov().cwiseAbs().maxCoeff(),
                    b.cov().cwiseAbs().maxCoeff()));
  if ((a.mean() - b.mean()).cwiseAbs().maxCoeff() <= kStructuralTol * scale &&
      (a.cov() - b.cov()).cwiseAbs().maxCoeff() <= kStructuralTol * scale) {
    return 1.0;
  }
  const double overlap = gaussian_overlap(a, b);
  if (a.is_pure() || b.is_pure()) {
    return std::min(overlap, 1.0);
  }
  // Both states mixed: F = Tr(rho_a rho_b) * prod_k coth(w_k / 4), where
  // e^{±w_k} are the eigenvalue pairs of the product of the Gibbs transfer
  // matrices E(V) = (V + i Omega/2)(V - i Omega/2)^{-1}. The square roots
  // ±e^{±w_k/2} are computed without forming any single-state inverse, as
  // the spectrum of the pencil
  //   [[0, P_a], [P_b, 0]] - mu [[conj(P_b), 0], [0, conj(P_a)]],
  // P_i = V_i + i Omega / 2; pure directions surface as infinite pencil
  // eigenvalues and contribute a factor of one.
  const std::size_t n = a.num_modes();
  const CMat omega_c =
      symplectic_form(n).cast<std::complex<double>>();
  const std::complex<double> half_i(0.0, 0.5);
  const CMat pa = a.cov().cast<std::complex<double>>() + half_i * omega_c;
  const CMat pb = b.cov().cast<std::complex<double>>() + half_i * omega_c;
  CMat lhs = CMat::Zero(4 * n, 4 * n);
  CMat rhs = CMat::Zero(4 * n, 4 * n);
  lhs.topRightCorner(2 * n, 2 * n) = pa;
  lhs.bottomLeftCorner(2 * n, 2 * n) = pb;
  rhs.topLeftCorner(2 * n, 2 * n) = pb.conjugate();
  rhs.bottomRightCorner(2 * n, 2 * n) = pa.conjugate();
  // Real embedding doubles every eigenvalue, so each coth factor below is
  // collected twice and the product ends up squared.
  Mat lhs_r(8 * n, 8 * n);
  Mat rhs_r(8 * n, 8 * n);
  lhs_r << lhs.real(), -lhs.imag(), lhs.imag(), lhs.real();
  rhs_r << rhs.real(), -rhs.imag(), rhs.imag(), rhs.real();

  std::complex<double> squared_factor(1.0, 0.0);
  for (const auto& mu : pencil_eigenvalues(lhs_r, rhs_r)) {
    if (mu.real() > 0.0 && std::abs(mu) > 1.0) {
      squared_factor *= (mu + 1.0) / (mu - 1.0);
    }
  }
  const double f = overlap * std::sqrt(std::abs(squared_factor));
  return std::clamp(f, 0.0, 1.0);
}

}  // namespace tfcv
