#include "tfcv/cluster.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace tfcv;

namespace {

ProtocolResult squeezed_nodes(double r0, double r1) {
  GaussianState st =
      tensor_product(squeezed_vacuum(r0), squeezed_vacuum(r1));
  ClusterGraph g = ClusterGraph::empty({{0, 0}, {0, 1}});
  return ProtocolResult{std::move(st), std::move(g), {0, 1}, {0, 0}};
}

}  // namespace

TEST(TwoQumodeCluster, NullifiersMatchSqueezing) {
  for (double r : {0.5, 1.0, 2.0}) {
    const auto result = two_qumode_cluster(r, 0.0);
    const Vec vars = nullifier_variances(result);
    ASSERT_EQ(vars.size(), 2);
    EXPECT_NEAR(vars(0), std::exp(-2.0 * r), 1e-12);
    EXPECT_NEAR(vars(1), std::exp(-2.0 * r), 1e-12);
  }
}

TEST(TwoQumodeCluster, RotationIsBookkeptOnReadoutNode) {
  const auto result = two_qumode_cluster(1.0, 0.0);
  EXPECT_EQ(result.quarter_turns[0], 0);
  EXPECT_EQ(result.quarter_turns[1], 1);
  EXPECT_DOUBLE_EQ(result.graph.adjacency(0, 1), 1.0);
}

TEST(TwoQumodeCluster, RejectsBadParameters) {
  EXPECT_THROW(two_qumode_cluster(-1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(two_qumode_cluster(1.0, 1.5), std::invalid_argument);
}

TEST(TwoQumodeFidelity, TrivialLimits) {
  for (double db : {0.0, 5.0, 17.4}) {
    EXPECT_NEAR(two_qumode_fidelity_closed_form(db, 0.0), 1.0, 1e-12);
  }
  for (double eta : {0.0, 0.3, 1.0}) {
    EXPECT_NEAR(two_qumode_fidelity_closed_form(0.0, eta), 1.0, 1e-12);
    EXPECT_NEAR(two_qumode_fidelity_numeric(0.0, eta), 1.0, 1e-9);
  }
}

TEST(TwoQumodeFidelity, FaultToleranceWorkingPoint) {
  const double infidelity = 1.0 - two_qumode_fidelity_closed_form(17.4, 7e-5);
  EXPECT_GE(infidelity, 0.8e-3);
  EXPECT_LE(infidelity, 1.2e-3);
}

TEST(TwoQumodeFidelity, ClosedFormTracksPipeline) {
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      const double db = 20.0 * i / 7.0;
      const double eta = 0.1 * j / 7.0;
      EXPECT_NEAR(two_qumode_fidelity_numeric(db, eta),
                  two_qumode_fidelity_closed_form(db, eta), 1e-9)
          << "at (" << db << ", " << eta << ")";
    }
  }
}

TEST(ApplyCz, LosslessGateEqualsDirectSymplectic) {
  const double r = db_to_r(6.0);
  const auto linked = apply_cz(squeezed_nodes(r, -r), 0, 1, 0.0);

  GaussianState direct =
      tensor_product(squeezed_vacuum(r), squeezed_vacuum(-r));
  direct = apply(direct, to_symplectic(cz_bogoliubov()),
                 {ModeIndex{0}, ModeIndex{1}});
  EXPECT_LT((linked.state.cov() - direct.cov()).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_DOUBLE_EQ(linked.graph.adjacency(0, 1), 1.0);
}

TEST(ApplyCz, SqueezedInputsGiveVanishingNullifiers) {
  const double r = 3.0;
  const auto linked = apply_cz(squeezed_nodes(r, r), 0, 1, 0.0);
  const Vec vars = nullifier_variances(linked);
  // Nullifier p_i - q_j inherits the input p variance e^{-2r}/2.
  EXPECT_NEAR(vars(0), 0.5 * std::exp(-2.0 * r), 1e-12);
  EXPECT_NEAR(vars(1), 0.5 * std::exp(-2.0 * r), 1e-12);
}

TEST(ApplyCz, DisjointGatesCommute) {
  GaussianState st = tensor_product(
      tensor_product(squeezed_vacuum(0.8), squeezed_vacuum(0.8)),
      tensor_product(squeezed_vacuum(0.8), squeezed_vacuum(0.8)));
  ClusterGraph g = ClusterGraph::empty({{0, 0}, {0, 1}, {0, 2}, {0, 3}});
  const ProtocolResult base{st, g, {0, 1, 2, 3}, {0, 0, 0, 0}};
  const double eta = 0.05;
  const auto ab = apply_cz(apply_cz(base, 0, 1, eta), 2, 3, eta);
  const auto ba = apply_cz(apply_cz(base, 2, 3, eta), 0, 1, eta);
  EXPECT_LT((ab.state.cov() - ba.state.cov()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ApplyCz, RejectsBadNodes) {
  const auto base = squeezed_nodes(1.0, 1.0);
  EXPECT_THROW(apply_cz(base, 0, 0, 0.0), std::invalid_argument);
  EXPECT_THROW(apply_cz(base, 0, 5, 0.0), std::invalid_argument);
  EXPECT_THROW(apply_cz(base, 0, 1, -0.2), std::invalid_argument);
}

TEST(CzFidelity, TrivialLimitAndWorkingPoint) {
  for (double db : {0.0, 6.0, 17.4}) {
    EXPECT_NEAR(cz_fidelity_closed_form(db, 0.0), 1.0, 1e-12);
  }
  const double infidelity = 1.0 - cz_fidelity_closed_form(17.4, 1e-5);
  EXPECT_GE(infidelity, 0.8e-3);
  EXPECT_LE(infidelity, 1.2e-3);
}

TEST(CzFidelity, ClosedFormTracksPipeline) {
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      const double db = 20.0 * i / 7.0;
      const double eta = 0.1 * j / 7.0;
      EXPECT_NEAR(cz_fidelity_numeric(db, eta),
                  cz_fidelity_closed_form(db, eta), 1e-9)
          << "at (" << db << ", " << eta << ")";
    }
  }
}

TEST(CzFidelity, MonotoneInLossAndSqueezing) {
  for (double db : {5.0, 12.0}) {
    double previous = 2.0;
    for (double eta : {0.0, 1e-4, 1e-3, 1e-2, 1e-1}) {
      const double f = cz_fidelity_closed_form(db, eta);
      EXPECT_LE(f, previous + 1e-12);
      previous = f;
    }
  }
  for (double eta : {1e-3, 1e-2}) {
    double previous = 2.0;
    for (double db : {1.0, 5.0, 10.0, 15.0, 20.0}) {
      const double f = cz_fidelity_closed_form(db, eta);
      EXPECT_LE(f, previous + 1e-12);
      previous = f;
      const double f2 = two_qumode_fidelity_closed_form(db, eta);
      EXPECT_LE(f2, 1.0);
    }
  }
  for (double db : {5.0, 12.0}) {
    double previous = 2.0;
    for (double eta : {0.0, 1e-4, 1e-3, 1e-2, 1e-1}) {
      const double f = two_qumode_fidelity_closed_form(db, eta);
      EXPECT_LE(f, previous + 1e-12);
      previous = f;
    }
  }
}

TEST(Build2d, MinimalLatticeMatchesDirectConstruction) {
  const double r = 1.1;
  const auto lattice = build_2d_cluster(1, 2, r, 0.0);
  const auto direct = two_qumode_cluster(r, 0.0);
  EXPECT_LT((lattice.state.cov() - direct.state.cov()).cwiseAbs().maxCoeff(),
            1e-10);
  EXPECT_EQ(lattice.graph.size(), 2u);
  EXPECT_DOUBLE_EQ(lattice.graph.adjacency(0, 1), 1.0);
}

TEST(Build2d, GraphIsTheGridLattice) {
  const auto lattice = build_2d_cluster(3, 4, 0.5, 0.0);
  const auto& adj = lattice.graph.adjacency;
  ASSERT_EQ(lattice.graph.size(), 12u);
  auto node = [](int f, int t) { return f * 4 + t; };
  int edges = 0;
  for (int f = 0; f < 3; ++f) {
    for (int t = 0; t < 4; ++t) {
      if (t + 1 < 4) {
        EXPECT_DOUBLE_EQ(adj(node(f, t), node(f, t + 1)), 1.0);
        ++edges;
      }
      if (f + 1 < 3) {
        EXPECT_DOUBLE_EQ(adj(node(f, t), node(f + 1, t)), 1.0);
        ++edges;
      }
    }
  }
  EXPECT_DOUBLE_EQ(adj.sum(), 2.0 * edges);  // no spurious edges
}

TEST(Build2d, NullifiersShrinkWithSqueezing) {
  double previous = 1e9;
  for (double r : {1.0, 2.0, 3.0}) {
    const auto lattice = build_2d_cluster(2, 2, r, 0.0);
    const double worst = nullifier_variances(lattice).maxCoeff();
    EXPECT_LT(worst, previous);
    EXPECT_NEAR(worst, std::exp(-2.0 * r), 1e-9 * std::exp(-2.0 * r) + 1e-12);
    previous = worst;
  }
}

TEST(Build2d, OddTimeBinsGetSqueezedTrailingNode) {
  const auto lattice = build_2d_cluster(2, 3, 2.0, 0.0);
  EXPECT_EQ(lattice.graph.size(), 6u);
  const Vec vars = nullifier_variances(lattice);
  for (Eigen::Index k = 0; k < vars.size(); ++k) {
    EXPECT_LT(vars(k), 2.0 * std::exp(-2.0 * 2.0));
  }
}

TEST(Build2d, EnforcesGuards) {
  EXPECT_THROW(build_2d_cluster(0, 2, 1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(build_2d_cluster(1, 1, 1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(build_2d_cluster(16, 16, 1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(build_2d_cluster(2, 2, 1.0, 2.0), std::invalid_argument);
}

TEST(Nullifiers, VacuumNodesWithEmptyGraph) {
  GaussianState st = vacuum(2);
  ClusterGraph g = ClusterGraph::empty({{0, 0}, {0, 1}});
  const ProtocolResult result{st, g, {0, 1}, {0, 0}};
  const Vec vars = nullifier_variances(result);
  EXPECT_NEAR(vars(0), 0.5, 1e-12);
  EXPECT_NEAR(vars(1), 0.5, 1e-12);
}

TEST(PiPhaseRoute, VacuumIsInvisible) {
  const GaussianState routed = pi_phase_route(vacuum(2), ModeIndex{0});
  EXPECT_TRUE(routed.cov().isApprox(vacuum(2).cov(), 1e-12));
  EXPECT_TRUE(routed.mean().isZero(1e-12));
}

TEST(PiPhaseRoute, NegatesDisplacedMean) {
  Vec mean(4);
  mean << 0.7, -0.2, 0.4, 0.1;
  const GaussianState st(mean, 0.5 * Mat::Identity(4, 4));
  const GaussianState routed = pi_phase_route(st, ModeIndex{0});
  EXPECT_NEAR(routed.mean()(0), -0.7, 1e-12);
  EXPECT_NEAR(routed.mean()(1), 0.2, 1e-12);
  EXPECT_NEAR(routed.mean()(2), 0.4, 1e-12);
  EXPECT_TRUE(routed.cov().isApprox(st.cov(), 1e-12));
}

TEST(PiPhaseRoute, MemoryReturnsDisentangledAndPure) {
  // Full two-mode simulation: the routing interaction against a ground-state
  // memory leaves the memory in a pure state uncorrelated with the field.
  GaussianState joint = tensor_product(squeezed_vacuum(0.9), vacuum(1));
  joint = apply(joint,
                to_symplectic(bs_bogoliubov(RamanBS{std::numbers::pi, 0.0})),
                {ModeIndex{0}, ModeIndex{1}});
  const GaussianState memory = trace_out(joint, {ModeIndex{0}});
  EXPECT_NEAR(memory.purity(), 1.0, 1e-12);
  EXPECT_LT((joint.cov().block<2, 2>(0, 2).cwiseAbs().maxCoeff()), 1e-12);
}
