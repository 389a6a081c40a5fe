// Acceptance suite: end-to-end checks of the simulator against its pinned
// quantitative targets, one test per criterion, each printing a summary line.

#include "tfcv/scheduler.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

using namespace tfcv;

namespace {

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

void report(int criterion, const char* name, bool pass, double seconds,
            const std::string& detail) {
  std::printf("ACCEPTANCE %d %-24s %s (%.3f s%s%s)\n", criterion, name,
              pass ? "PASS" : "FAIL", seconds, detail.empty() ? "" : "; ",
              detail.c_str());
}

}  // namespace

TEST(Acceptance, Criterion1GateSynthesis) {
  Stopwatch timer;
  const auto seq = cz_sequence();
  const auto composed = compose_sequence(seq);
  const auto ideal = cz_bogoliubov();
  const double residual =
      std::max((composed.A - ideal.A).cwiseAbs().maxCoeff(),
               (composed.B - ideal.B).cwiseAbs().maxCoeff());
  const double coupling = std::pow(std::sin(seq.bs_in.phi), 2.0);
  const double tms_db = 20.0 * seq.tms.r / std::log(10.0);
  const double elapsed = timer.seconds();

  EXPECT_LT(residual, 1e-10);
  EXPECT_GE(coupling, 0.0520);
  EXPECT_LE(coupling, 0.0536);
  EXPECT_GE(tms_db, 4.15);
  EXPECT_LE(tms_db, 4.21);
  EXPECT_LT(elapsed, 0.1);

  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "residual %.2e, coupling %.4f, squeezing %.3f dB", residual,
                coupling, tms_db);
  report(1, "gate synthesis", !::testing::Test::HasFailure(), elapsed, detail);
}

TEST(Acceptance, Criterion2BlochMessiah) {
  Stopwatch timer;
  const auto f = reduce(cz_bogoliubov());
  EXPECT_NEAR(f.A_D(0), std::sqrt(5.0) / 2.0, 1e-10);
  EXPECT_NEAR(f.A_D(1), std::sqrt(5.0) / 2.0, 1e-10);
  EXPECT_NEAR(f.B_D(0), 0.5, 1e-10);
  EXPECT_NEAR(f.B_D(1), 0.5, 1e-10);

  std::mt19937_64 rng(0xB10C);
  std::uniform_int_distribution<std::size_t> size(2, 4);
  double worst = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const auto pair = testkit::random_pair(rng, size(rng), 8);
    const auto factors = reduce(pair);
    const auto rebuilt = reconstruct(factors);
    worst = std::max(
        worst, std::max((rebuilt.A - pair.A).cwiseAbs().maxCoeff(),
                        (rebuilt.B - pair.B).cwiseAbs().maxCoeff()));
  }
  EXPECT_LT(worst, 1e-10);
  const double elapsed = timer.seconds();
  EXPECT_LT(elapsed, 5.0);

  char detail[120];
  std::snprintf(detail, sizeof(detail),
                "500 random pairs, worst reconstruction %.2e", worst);
  report(2, "Bloch-Messiah", !::testing::Test::HasFailure(), elapsed, detail);
}

TEST(Acceptance, Criterion3TwoQumodeFidelity) {
  Stopwatch timer;
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    for (int j = 0; j < 20; ++j) {
      const double db = 20.0 * i / 19.0;
      const double eta = 0.1 * j / 19.0;
      worst = std::max(worst,
                       std::abs(two_qumode_fidelity_numeric(db, eta) -
                                two_qumode_fidelity_closed_form(db, eta)));
    }
  }
  EXPECT_LT(worst, 1e-9);
  const double infidelity = 1.0 - two_qumode_fidelity_closed_form(17.4, 7e-5);
  EXPECT_GE(infidelity, 0.8e-3);
  EXPECT_LE(infidelity, 1.2e-3);
  const double numeric_infidelity =
      1.0 - two_qumode_fidelity_numeric(17.4, 7e-5);
  EXPECT_NEAR(numeric_infidelity, infidelity, 1e-9);
  const double elapsed = timer.seconds();
  EXPECT_LT(elapsed, 10.0);

  char detail[140];
  std::snprintf(detail, sizeof(detail),
                "20x20 grid worst |dF| %.2e, infidelity(17.4 dB, 7e-5) %.2e",
                worst, infidelity);
  report(3, "two-qumode fidelity", !::testing::Test::HasFailure(), elapsed,
         detail);
}

TEST(Acceptance, Criterion4GateFidelity) {
  Stopwatch timer;
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    for (int j = 0; j < 20; ++j) {
      const double db = 20.0 * i / 19.0;
      const double eta = 0.1 * j / 19.0;
      worst = std::max(worst, std::abs(cz_fidelity_numeric(db, eta) -
                                       cz_fidelity_closed_form(db, eta)));
    }
  }
  EXPECT_LT(worst, 1e-9);
  const double infidelity = 1.0 - cz_fidelity_closed_form(17.4, 1e-5);
  EXPECT_GE(infidelity, 0.8e-3);
  EXPECT_LE(infidelity, 1.2e-3);
  const double numeric_infidelity = 1.0 - cz_fidelity_numeric(17.4, 1e-5);
  EXPECT_NEAR(numeric_infidelity, infidelity, 1e-9);
  const double elapsed = timer.seconds();
  EXPECT_LT(elapsed, 30.0);

  char detail[140];
  std::snprintf(detail, sizeof(detail),
                "20x20 grid worst |dF| %.2e, infidelity(17.4 dB, 1e-5) %.2e",
                worst, infidelity);
  report(4, "gate fidelity", !::testing::Test::HasFailure(), elapsed, detail);
}

TEST(Acceptance, Criterion5NullifierScaling) {
  Stopwatch timer;
  for (double r : {0.5, 1.0, 2.0, 3.0}) {
    const Vec vars = nullifier_variances(two_qumode_cluster(r, 0.0));
    EXPECT_NEAR(vars(0), std::exp(-2.0 * r), 1e-10);
    EXPECT_NEAR(vars(1), std::exp(-2.0 * r), 1e-10);
  }
  double previous = 1e9;
  double at_r5 = 0.0;
  for (double r : {1.0, 2.0, 3.0, 4.0, 5.0}) {
    const double worst =
        nullifier_variances(build_2d_cluster(2, 2, r, 0.0)).maxCoeff();
    EXPECT_LT(worst, previous);
    previous = worst;
    at_r5 = worst;
  }
  EXPECT_LT(at_r5, 1e-4);
  const double elapsed = timer.seconds();
  EXPECT_LT(elapsed, 5.0);

  char detail[120];
  std::snprintf(detail, sizeof(detail),
                "two-qumode variances e^{-2r}, 2x2 lattice at r=5: %.2e",
                at_r5);
  report(5, "nullifier scaling", !::testing::Test::HasFailure(), elapsed,
         detail);
}

TEST(Acceptance, Criterion6ResourceCounts) {
  Stopwatch timer;
  const ArchitectureConstraints roomy{1e-6, 2e10};
  for (std::size_t d = 1; d <= 16; ++d) {
    const Schedule s = compile(d, 4, roomy, 1e-9);
    std::set<int> ids;
    std::set<int> stage_a;
    std::set<int> stage_b;
    std::set<int> stage_c;
    for (const auto& e : s.entries) {
      ids.insert(e.memory_id);
      const std::size_t id = static_cast<std::size_t>(e.memory_id);
      if (id < d) {
        stage_a.insert(e.memory_id);
      } else if (id < 4 * d) {
        stage_b.insert(e.memory_id);
      } else {
        stage_c.insert(e.memory_id);
      }
    }
    EXPECT_EQ(ids.size(), memory_count(d));
    EXPECT_EQ(stage_a.size(), d);
    EXPECT_EQ(stage_b.size(), 3 * d);
    EXPECT_EQ(stage_c.size(), 3 * (d - 1));
    EXPECT_TRUE(validate(s).valid);
  }

  double worst = 0.0;
  for (auto [d, n] : std::vector<std::pair<std::size_t, std::size_t>>{
           {1, 2}, {2, 2}, {2, 3}, {3, 3}}) {
    const Schedule s = compile(d, n, roomy, 1e-9);
    const ProtocolResult replayed = execute(s, db_to_r(10.0), 0.01);
    const ProtocolResult direct = build_2d_cluster(d, n, db_to_r(10.0), 0.01);
    worst = std::max(worst, (replayed.state.cov() - direct.state.cov())
                                .cwiseAbs()
                                .maxCoeff());
  }
  EXPECT_LT(worst, 1e-10);
  const double elapsed = timer.seconds();
  EXPECT_LT(elapsed, 30.0);

  char detail[140];
  std::snprintf(detail, sizeof(detail),
                "7d-3 held for d in [1,16]; replay-vs-direct worst %.2e",
                worst);
  report(6, "resource counts", !::testing::Test::HasFailure(), elapsed,
         detail);
}

TEST(Acceptance, Criterion7PhysicalitySuite) {
  Stopwatch timer;
  std::mt19937_64 rng(0x5EED);
  std::uniform_int_distribution<std::size_t> n_modes_dist(2, 4);
  std::uniform_int_distribution<int> op_kind(0, 3);
  std::uniform_real_distribution<double> angle(-std::numbers::pi,
                                               std::numbers::pi);
  std::uniform_real_distribution<double> squeeze(0.0, 1.2);
  std::uniform_real_distribution<double> loss(0.0, 0.3);
  std::uniform_real_distribution<double> outcome(-1.5, 1.5);

  double worst_nu = 1e9;
  double worst_symplectic = 0.0;
  for (int sequence = 0; sequence < 1000; ++sequence) {
    const std::size_t n_modes = n_modes_dist(rng);
    GaussianState st = vacuum(n_modes);
    std::size_t live = n_modes;
    for (int step = 0; step < 10 && live >= 2; ++step) {
      std::uniform_int_distribution<std::size_t> pick(0, live - 1);
      const std::size_t i = pick(rng);
      std::size_t j = pick(rng);
      while (j == i) {
        j = pick(rng);
      }
      switch (op_kind(rng)) {
        case 0: {
          const auto op =
              to_symplectic(bs_bogoliubov(RamanBS{angle(rng), angle(rng)}));
          worst_symplectic = std::max(
              worst_symplectic,
              (op.matrix().transpose() * symplectic_form(2) * op.matrix() -
               symplectic_form(2))
                  .cwiseAbs()
                  .maxCoeff());
          st = apply(st, op, {ModeIndex{i}, ModeIndex{j}});
          break;
        }
        case 1: {
          const auto op = to_symplectic(
              tms_bogoliubov(RamanTMS{squeeze(rng), angle(rng)}));
          worst_symplectic = std::max(
              worst_symplectic,
              (op.matrix().transpose() * symplectic_form(2) * op.matrix() -
               symplectic_form(2))
                  .cwiseAbs()
                  .maxCoeff());
          st = apply(st, op, {ModeIndex{i}, ModeIndex{j}});
          break;
        }
        case 2:
          st = lossy_coupling(st, ModeIndex{i}, loss(rng));
          break;
        default:
          st = homodyne(st, ModeIndex{i}, angle(rng), outcome(rng));
          --live;
          break;
      }
      worst_nu = std::min(worst_nu, st.symplectic_eigenvalues().back());
    }
  }
  EXPECT_GE(worst_nu, 0.5 - 1e-9);
  EXPECT_LT(worst_symplectic, 1e-10);
  const double elapsed = timer.seconds();
  EXPECT_LT(elapsed, 60.0);

  char detail[140];
  std::snprintf(detail, sizeof(detail),
                "1000 sequences, min nu %.12f, worst symplectic residual %.2e",
                worst_nu, worst_symplectic);
  report(7, "physicality suite", !::testing::Test::HasFailure(), elapsed,
         detail);
}

TEST(Acceptance, Criterion8MeasurementTeleportation) {
  Stopwatch timer;
  const double mq = 0.7;
  const double mp = -0.4;
  const double s1 = 0.3;
  const double s2 = 0.55;

  auto run = [&](double db) {
    const ProtocolResult cluster = two_qumode_cluster(db_to_r(db), 0.0);
    Vec mean(2);
    mean << mq, mp;
    GaussianState st = tensor_product(
        GaussianState(mean, 0.5 * Mat::Identity(2, 2)), cluster.state);
    st = apply(st, to_symplectic(cz_bogoliubov()),
               {ModeIndex{0}, ModeIndex{1}});
    st = homodyne(st, ModeIndex{0}, std::numbers::pi / 2.0, s1);
    st = homodyne(st, ModeIndex{0}, std::numbers::pi / 2.0, s2);
    return st;
  };

  // Expected ideal output: Fourier-rotated input with the outcome-dependent
  // displacement correction (q,p) -> (-p + s1, q - s2).
  Vec target_mean(2);
  target_mean << -mp + s1, mq - s2;
  const GaussianState target(target_mean, 0.5 * Mat::Identity(2, 2));

  const double f20 = fidelity(run(20.0), target);
  EXPECT_GT(f20, 0.99);
  // The map becomes exact in the strong-squeezing limit and degrades at
  // low squeezing, confirming the cluster is doing the work.
  EXPECT_GT(fidelity(run(60.0), target), 0.999999);
  EXPECT_LT(fidelity(run(3.0), target), f20);

  // Oracle cross-check: the Gaussian conditioning behind the teleportation
  // agrees with Monte-Carlo regression on the joint quadratures.
  {
    const ProtocolResult cluster = two_qumode_cluster(db_to_r(20.0), 0.0);
    Vec mean(2);
    mean << mq, mp;
    GaussianState joint = tensor_product(
        GaussianState(mean, 0.5 * Mat::Identity(2, 2)), cluster.state);
    joint = apply(joint, to_symplectic(cz_bogoliubov()),
                  {ModeIndex{0}, ModeIndex{1}});
    const GaussianState cond =
        homodyne(joint, ModeIndex{0}, std::numbers::pi / 2.0, s1);

    std::mt19937_64 rng(0x7E1E);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::LLT<Mat> llt(joint.cov());
    const Mat l = llt.matrixL();
    const int n_samples = 400000;
    double sum_m = 0.0;
    double sum_mm = 0.0;
    Vec sum_r = Vec::Zero(4);
    Vec sum_rm = Vec::Zero(4);
    for (int k = 0; k < n_samples; ++k) {
      Vec z(6);
      for (int c = 0; c < 6; ++c) {
        z(c) = gauss(rng);
      }
      const Vec x = joint.mean() + l * z;
      const double m = x(1);  // p of the input mode
      sum_m += m;
      sum_mm += m * m;
      sum_r += x.tail(4);
      sum_rm += x.tail(4) * m;
    }
    const double mbar = sum_m / n_samples;
    const double vm = sum_mm / n_samples - mbar * mbar;
    const Vec rbar = sum_r / n_samples;
    const Vec crm = sum_rm / n_samples - rbar * mbar;
    const Vec mc_mean = rbar + crm * (s1 - mbar) / vm;
    const double se =
        3.0 * std::sqrt(joint.cov().diagonal().maxCoeff() / n_samples);
    for (int c = 0; c < 4; ++c) {
      EXPECT_NEAR(mc_mean(c), cond.mean()(c), 5.0 * se);
    }
  }

  const double elapsed = timer.seconds();
  EXPECT_LT(elapsed, 5.0);

  char detail[120];
  std::snprintf(detail, sizeof(detail), "output fidelity at 20 dB: %.6f",
                f20);
  report(8, "teleportation", !::testing::Test::HasFailure(), elapsed, detail);
}
