#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace tfcv {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;

// Structural checks (symmetry, reconstruction residuals).
inline constexpr double kStructuralTol = 1e-12;
// Symplectic-condition checks on transformation matrices.
inline constexpr double kSymplecticTol = 1e-10;
// Spectral checks (symplectic eigenvalues, uncertainty relation).
inline constexpr double kSpectralTol = 1e-9;

/// Index of a mode within a state. Range-checked against the state it
/// addresses at the point of use.
struct ModeIndex {
  std::size_t value = 0;
  ModeIndex() = default;
  ModeIndex(std::size_t v) : value(v) {}  // NOLINT: intentional convenience
};

/// Canonical symplectic form for the (q1,p1,q2,p2,...) quadrature ordering:
/// block-diagonal copies of [[0,1],[-1,0]].
Mat symplectic_form(std::size_t n_modes);

/// Real symplectic transformation on quadratures, with an optional
/// displacement. Acts on means as x -> S x + d and on covariances as
/// S V S^T.
class SymplecticOp {
 public:
  explicit SymplecticOp(Mat matrix);
  SymplecticOp(Mat matrix, Vec displacement);

  std::size_t num_modes() const { return matrix_.rows() / 2; }
  const Mat& matrix() const { return matrix_; }
  const Vec& displacement() const { return displacement_; }

  static SymplecticOp identity(std::size_t n_modes);
  /// Phase-space rotation by theta on a single mode (a -> e^{i theta} a).
  static SymplecticOp phase_rotation(double theta);
  /// Single-mode squeezer diag(e^r, e^-r); r > 0 squeezes p.
  static SymplecticOp squeezer(double r);

  SymplecticOp then(const SymplecticOp& next) const;

 private:
  Mat matrix_;
  Vec displacement_;
};

/// Gaussian state of n modes: mean quadrature vector (length 2n) and
/// symmetric covariance matrix (2n x 2n), in units where the vacuum
/// covariance is I/2 (q = (a + a^dag)/sqrt(2), hbar = 1).
class GaussianState {
 public:
  GaussianState(Vec mean, Mat cov);

  std::size_t num_modes() const { return n_modes_; }
  const Vec& mean() const { return mean_; }
  const Mat& cov() const { return cov_; }

  /// Symplectic eigenvalues, descending. All >= 1/2 for physical states.
  std::vector<double> symplectic_eigenvalues() const;
  /// Tr rho^2 = 1/(2^n sqrt(det V)).
  double purity() const;
  bool is_pure(double tol = 1e-8) const;

 private:
  std::size_t n_modes_;
  Vec mean_;
  Mat cov_;
};

GaussianState vacuum(std::size_t n_modes);

/// Single-mode squeezed vacuum with cov diag(e^{2r}/2, e^{-2r}/2);
/// p-squeezed for r > 0.
GaussianState squeezed_vacuum(double r);

/// Squeezing parameter from decibels: r = dB ln(10)/20.
double db_to_r(double db);

/// Applies op to the listed target modes (distinct, in range); all other
/// modes are untouched.
GaussianState apply(const GaussianState& state, const SymplecticOp& op,
                    const std::vector<ModeIndex>& targets);

GaussianState tensor_product(const GaussianState& a, const GaussianState& b);

/// Discards the listed modes, keeping the principal submatrix of the
/// covariance and subvector of the mean.
GaussianState trace_out(const GaussianState& state,
                        const std::vector<ModeIndex>& modes);

/// Couples the mode to a fresh vacuum through a beam splitter of
/// transmissivity 1 - delta_eta and traces out the auxiliary arm.
GaussianState lossy_coupling(const GaussianState& state, ModeIndex mode,
                             double delta_eta);

/// Conditions on a homodyne measurement of cos(angle) q + sin(angle) p on
/// the given mode yielding `outcome`; the measured mode is removed.
GaussianState homodyne(const GaussianState& state, ModeIndex mode,
                       double angle, double outcome);

/// Uhlmann fidelity [Tr sqrt(sqrt(rho_a) rho_b sqrt(rho_a))]^2 in [0, 1].
double fidelity(const GaussianState& a, const GaussianState& b);

}  // namespace tfcv
