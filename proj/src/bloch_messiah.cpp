#include "tfcv/bloch_messiah.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace tfcv {

namespace {

using Cx = std::complex<double>;

constexpr double kClusterTol = 1e-8;
constexpr double kReconstructTol = 1e-10;

/// Takagi factorization M = W diag(d) W^T of a complex symmetric block,
/// via the real symmetric embedding [[Re M, Im M], [Im M, -Re M]] whose
/// spectrum comes in +-d pairs.
void takagi(const CMat& m, CMat& w, Vec& d) {
  const Eigen::Index n = m.rows();
  Mat embed(2 * n, 2 * n);
  const Mat x = m.real();
  const Mat y = m.imag();
  embed << x, y, y, -x;
  Eigen::SelfAdjointEigenSolver<Mat> solver(embed);
  // Walk eigenpairs from the largest eigenvalue down, keeping vectors that
  // are independent as complex vectors; the conjugate partner of an already
  // accepted vector shows up i-parallel and is skipped.
  std::vector<Eigen::Index> order(2 * n);
  for (Eigen::Index i = 0; i < 2 * n; ++i) {
    order[i] = 2 * n - 1 - i;  // SelfAdjointEigenSolver sorts ascending
  }
  w = CMat::Zero(n, n);
  d = Vec::Zero(n);
  Eigen::Index found = 0;
  for (auto idx : order) {
    if (found == n) {
      break;
    }
    Eigen::VectorXcd cand =
        solver.eigenvectors().col(idx).head(n) +
        Cx(0.0, 1.0) * solver.eigenvectors().col(idx).tail(n);
    for (Eigen::Index j = 0; j < found; ++j) {
      cand -= w.col(j).dot(cand) * w.col(j);
    }
    const double norm = cand.norm();
    if (norm < 0.5) {
      continue;
    }
    w.col(found) = cand / norm;
    d(found) = std::max(solver.eigenvalues()(idx), 0.0);
    ++found;
  }
  if (found != n) {
    throw std::runtime_error("Takagi factorization failed to span the block");
  }
}

}  // namespace

BlochMessiahFactors reduce(const BogoliubovPair& pair) {
  const auto diag = validate_bogoliubov(pair);
  if (!diag.valid) {
    throw std::invalid_argument(diag.message);
  }
  const Eigen::Index n = pair.A.rows();

  Eigen::JacobiSVD<CMat> svd(pair.A,
                             Eigen::ComputeFullU | Eigen::ComputeFullV);
  CMat u = svd.matrixU();
  CMat v = svd.matrixV();
  const Vec sigma = svd.singularValues();

  // B expressed in the SVD bases; within each degenerate singular-value
  // block this is complex symmetric, and a Takagi rotation of the shared
  // gauge diagonalizes it without disturbing A.
  const CMat c = u.adjoint() * pair.B * v.conjugate();
  Vec b_diag = Vec::Zero(n);

  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index stop = start + 1;
    while (stop < n && sigma(start) - sigma(stop) < kClusterTol) {
      ++stop;
    }
    const Eigen::Index len = stop - start;
    const CMat block = c.block(start, start, len, len);
    if (block.cwiseAbs().maxCoeff() > 1e-13) {
      CMat w;
      Vec d;
      takagi(block, w, d);
      u.middleCols(start, len) = u.middleCols(start, len) * w;
      v.middleCols(start, len) = v.middleCols(start, len) * w;
      b_diag.segment(start, len) = d;
    }
    start = stop;
  }

  // Fix the residual gauge: a shared sign flip of paired U/V columns, or a
  // full shared phase where the squeezer entry vanishes.
  for (Eigen::Index j = 0; j < n; ++j) {
    Eigen::Index lead = 0;
    while (lead < n - 1 && std::abs(u(lead, j)) < 1e-9) {
      ++lead;
    }
    const Cx entry = u(lead, j);
    if (b_diag(j) < 1e-13) {
      const Cx phase = std::abs(entry) > 0.0 ? entry / std::abs(entry) : Cx(1.0);
      u.col(j) /= phase;
      v.col(j) /= phase;
    } else if (entry.real() < 0.0 ||
               (entry.real() == 0.0 && entry.imag() < 0.0)) {
      u.col(j) = -u.col(j);
      v.col(j) = -v.col(j);
    }
  }

  BlochMessiahFactors factors{std::move(u), std::move(v), sigma,
                              std::move(b_diag)};
  const auto rebuilt = reconstruct(factors);
  const double residual =
      std::max((rebuilt.A - pair.A).cwiseAbs().maxCoeff(),
               (rebuilt.B - pair.B).cwiseAbs().maxCoeff());
  if (residual > kReconstructTol) {
    throw std::runtime_error(
        "Bloch-Messiah reduction failed to reconstruct the pair: residual " +
        std::to_string(residual));
  }
  return factors;
}

BogoliubovPair reconstruct(const BlochMessiahFactors& factors) {
  return {factors.U * factors.A_D.asDiagonal() * factors.V.adjoint(),
          factors.U * factors.B_D.asDiagonal() * factors.V.transpose()};
}

double cz_bs_angle() {
  return std::numbers::pi / 4.0 - 0.5 * std::asin(2.0 / std::sqrt(5.0));
}

double cz_tms_squeezing() { return std::asinh(0.5); }

BogoliubovPair cz_bogoliubov() {
  CMat a(2, 2);
  CMat b(2, 2);
  a << Cx(1.0), Cx(0.0, 0.5), Cx(0.0, 0.5), Cx(1.0);
  b << Cx(0.0), Cx(0.0, 0.5), Cx(0.0, 0.5), Cx(0.0);
  return {std::move(a), std::move(b)};
}

CzSequence cz_sequence() {
  const double phi = cz_bs_angle();
  const double half_pi = std::numbers::pi / 2.0;
  return {PhasePair{0.0, 0.0},
          RamanBS{phi, -half_pi},
          RamanTMS{cz_tms_squeezing(), half_pi},
          RamanBS{phi, -half_pi},
          PhasePair{0.0, 0.0}};
}

BogoliubovPair compose_sequence(const CzSequence& seq) {
  BogoliubovPair total = phase_bogoliubov(seq.pre);
  total = compose(total, bs_bogoliubov(seq.bs_in));
  total = compose(total, tms_bogoliubov(seq.tms));
  total = compose(total, bs_bogoliubov(seq.bs_out));
  return compose(total, phase_bogoliubov(seq.terminal));
}

}  // namespace tfcv
