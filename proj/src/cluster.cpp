#include "tfcv/cluster.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tfcv {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) {
    throw std::invalid_argument(msg);
  }
}

}  // namespace

namespace detail {

Mat quarter_turn_matrix(int turns) {
  Mat r = Mat::Identity(2, 2);
  Mat f(2, 2);
  f << 0.0, -1.0, 1.0, 0.0;
  for (int k = 0; k < ((turns % 4) + 4) % 4; ++k) {
    r = f * r;
  }
  return r;
}

const std::vector<SymplecticOp>& gate_symplectics() {
  static const std::vector<SymplecticOp> gates = [] {
    const CzSequence seq = cz_sequence();
    return std::vector<SymplecticOp>{
        to_symplectic(bs_bogoliubov(seq.bs_in)),
        to_symplectic(tms_bogoliubov(seq.tms)),
        to_symplectic(bs_bogoliubov(seq.bs_out))};
  }();
  return gates;
}

SymplecticOp conjugate_gate(const SymplecticOp& gate, int turns_i,
                            int turns_j) {
  Mat t = Mat::Zero(4, 4);
  t.block<2, 2>(0, 0) = quarter_turn_matrix(turns_i);
  t.block<2, 2>(2, 2) = quarter_turn_matrix(turns_j);
  return SymplecticOp(t.transpose() * gate.matrix() * t);
}

SymplecticOp swap_into_memory() {
  static const SymplecticOp op = to_symplectic(
      bs_bogoliubov(RamanBS{std::numbers::pi / 2.0, std::numbers::pi}));
  return op;
}

SymplecticOp swap_out_of_memory() {
  static const SymplecticOp op =
      to_symplectic(bs_bogoliubov(RamanBS{std::numbers::pi / 2.0, 0.0}));
  return op;
}

}  // namespace detail

ClusterGraph ClusterGraph::empty(std::vector<std::array<int, 2>> labels) {
  ClusterGraph g;
  const std::size_t n = labels.size();
  g.labels = std::move(labels);
  g.adjacency = Mat::Zero(n, n);
  return g;
}

void ClusterGraph::add_edge(std::size_t i, std::size_t j, double weight) {
  if (i >= size() || j >= size() || i == j) {
    throw std::invalid_argument("invalid cluster edge");
  }
  adjacency(i, j) += weight;
  adjacency(j, i) += weight;
}

ProtocolResult two_qumode_cluster(double r, double delta_eta) {
  require(r >= 0.0 && std::isfinite(r), "squeezing must be finite and >= 0");
  require(delta_eta >= 0.0 && delta_eta <= 1.0,
          "delta_eta must lie in [0, 1]");
  // Modes: node 0 (field), node 1 (second plaquette), auxiliary memory.
  GaussianState st = vacuum(3);
  st = apply(st, to_symplectic(tms_bogoliubov(RamanTMS{r, 0.0})),
             {ModeIndex{0}, ModeIndex{2}});
  st = apply(st, detail::swap_out_of_memory(), {ModeIndex{1}, ModeIndex{2}});
  st = lossy_coupling(st, ModeIndex{1}, delta_eta);
  st = trace_out(st, {ModeIndex{2}});

  ClusterGraph g = ClusterGraph::empty({{0, 0}, {0, 1}});
  g.add_edge(0, 1);
  return ProtocolResult{std::move(st), std::move(g), {0, 1}, {0, 1}};
}

double two_qumode_fidelity_closed_form(double db, double delta_eta) {
  require(db >= 0.0, "squeezing in dB must be >= 0");
  require(delta_eta >= 0.0 && delta_eta <= 1.0,
          "delta_eta must lie in [0, 1]");
  const double r = db_to_r(db);
  const double root = std::sqrt(1.0 - delta_eta);
  const double base = root - (root - 1.0) * std::cosh(2.0 * r) + 1.0;
  return 4.0 / std::sqrt(std::pow(base, 4.0));
}

double two_qumode_fidelity_numeric(double db, double delta_eta) {
  const double r = db_to_r(db);
  const GaussianState imperfect = two_qumode_cluster(r, delta_eta).state;
  const GaussianState ideal = two_qumode_cluster(r, 0.0).state;
  return fidelity(imperfect, ideal);
}

ProtocolResult apply_cz(const ProtocolResult& in, std::size_t node_i,
                        std::size_t node_j, double delta_eta) {
  require(node_i < in.graph.size() && node_j < in.graph.size() &&
              node_i != node_j,
          "gate nodes must be distinct and present");
  require(delta_eta >= 0.0 && delta_eta <= 1.0,
          "delta_eta must lie in [0, 1]");
  const ModeIndex mi{in.mode_map[node_i]};
  const ModeIndex mj{in.mode_map[node_j]};
  ProtocolResult out = in;
  GaussianState st = in.state;
  for (const auto& gate : detail::gate_symplectics()) {
    st = lossy_coupling(st, mj, delta_eta);
    st = apply(st,
               detail::conjugate_gate(gate, in.quarter_turns[node_i],
                              in.quarter_turns[node_j]),
               {mi, mj});
    st = lossy_coupling(st, mi, delta_eta);
  }
  out.state = std::move(st);
  out.graph.add_edge(node_i, node_j);
  return out;
}

double cz_fidelity_closed_form(double db, double delta_eta) {
  require(db >= 0.0, "squeezing in dB must be >= 0");
  require(delta_eta >= 0.0 && delta_eta <= 1.0,
          "delta_eta must lie in [0, 1]");
  const double r = db_to_r(db);
  const double t = 1.0 - delta_eta;
  const double sh = std::sinh(2.0 * r);
  const double ch = std::cosh(2.0 * r);
  const double rt = std::sqrt(t);
  auto tp = [&](double e) { return std::pow(t, e); };
  const double d1 =
      -(-2.0 * tp(1.5) + 2.0 * tp(5) + tp(3) + t * t + 2.0 * rt - 1.0) * t -
      (((t * t - 6.0 * t + 2.0 * rt - 2.0) * t + 1.0) * t) * sh +
      (-2.0 * tp(2.5) + 2.0 * tp(6) + tp(4) - delta_eta + 3.0) * ch + 3.0;
  const double d2 =
      -2.0 * tp(1.5) + 2.0 * tp(3.5) - 2.0 * tp(6) - tp(5) - tp(3) + t * t +
      (((t * t - 2.0 * t + 2.0 * rt - 6.0) * t + 1.0) * t * t) * sh +
      (-2.0 * tp(3.5) + 2.0 * tp(6) + tp(5) + t * t + 2.0) * ch + 3.0;
  return 4.0 / std::sqrt(d1 * d2);
}

namespace {

// The uncorrelated squeezed inputs of the gate-fidelity study: the first
// node p-squeezed, the second q-squeezed (the second enters the memories).
ProtocolResult squeezed_pair(double r) {
  GaussianState st =
      tensor_product(squeezed_vacuum(r), squeezed_vacuum(-r));
  ClusterGraph g = ClusterGraph::empty({{0, 0}, {0, 1}});
  return ProtocolResult{std::move(st), std::move(g), {0, 1}, {0, 0}};
}

}  // namespace

double cz_fidelity_numeric(double db, double delta_eta) {
  const double r = db_to_r(db);
  const GaussianState imperfect =
      apply_cz(squeezed_pair(r), 0, 1, delta_eta).state;
  const GaussianState ideal = apply_cz(squeezed_pair(r), 0, 1, 0.0).state;
  return fidelity(imperfect, ideal);
}

ProtocolResult build_2d_cluster(std::size_t d, std::size_t n, double r,
                                double delta_eta) {
  require(d >= 1 && n >= 2, "lattice needs d >= 1 and n >= 2");
  require(2 * d * n <= kMaxLatticeModes,
          "lattice too large for dense simulation (2*d*n <= 256)");
  require(r >= 0.0 && std::isfinite(r), "squeezing must be finite and >= 0");
  require(delta_eta >= 0.0 && delta_eta <= 1.0,
          "delta_eta must lie in [0, 1]");

  std::vector<std::array<int, 2>> labels(d * n);
  std::vector<int> turns(d * n, 0);
  for (std::size_t f = 0; f < d; ++f) {
    for (std::size_t t = 0; t < n; ++t) {
      labels[f * n + t] = {static_cast<int>(f), static_cast<int>(t)};
    }
  }

  // Stage a: per-row two-qumode clusters on time-bin pairs; an odd trailing
  // bin hosts a directly squeezed qumode.
  GaussianState st = vacuum(1);
  bool first = true;
  for (std::size_t f = 0; f < d; ++f) {
    for (std::size_t t = 0; t + 1 < n; t += 2) {
      const GaussianState pair = two_qumode_cluster(r, delta_eta).state;
      st = first ? pair : tensor_product(st, pair);
      first = false;
      turns[f * n + t + 1] = 1;
    }
    if (n % 2 == 1) {
      GaussianState node = squeezed_vacuum(r);
      node = lossy_coupling(node, ModeIndex{0}, delta_eta);
      st = first ? node : tensor_product(st, node);
      first = false;
    }
  }

  ClusterGraph g = ClusterGraph::empty(labels);
  for (std::size_t f = 0; f < d; ++f) {
    for (std::size_t t = 0; t + 1 < n; t += 2) {
      g.add_edge(f * n + t, f * n + t + 1);
    }
  }
  std::vector<std::size_t> mode_map(d * n);
  for (std::size_t k = 0; k < d * n; ++k) {
    mode_map[k] = k;
  }
  ProtocolResult result{std::move(st), std::move(g), std::move(mode_map),
                        std::move(turns)};

  // Stage b: temporal links between neighbouring clusters of each row.
  for (std::size_t f = 0; f < d; ++f) {
    for (std::size_t t = 1; t + 1 < n; t += 2) {
      result = apply_cz(result, f * n + t, f * n + t + 1, delta_eta);
    }
  }
  // Stage c: frequency links, time-major.
  for (std::size_t t = 0; t < n; ++t) {
    for (std::size_t f = 0; f + 1 < d; ++f) {
      result = apply_cz(result, f * n + t, (f + 1) * n + t, delta_eta);
    }
  }
  return result;
}

Vec nullifier_variances(const ProtocolResult& result) {
  const std::size_t n_nodes = result.graph.size();
  const std::size_t n_modes = result.state.num_modes();
  Vec out(n_nodes);
  for (std::size_t i = 0; i < n_nodes; ++i) {
    // Cluster-basis coefficient vector for p_i - sum_j A_ij q_j, pulled back
    // to physical coordinates per node: w_phys = T^T w_cluster.
    Vec w = Vec::Zero(2 * n_modes);
    const Mat ti = detail::quarter_turn_matrix(result.quarter_turns[i]);
    const std::size_t mi = result.mode_map[i];
    w(2 * mi) += ti(1, 0);
    w(2 * mi + 1) += ti(1, 1);
    for (std::size_t j = 0; j < n_nodes; ++j) {
      const double a = result.graph.adjacency(i, j);
      if (a == 0.0) {
        continue;
      }
      const Mat tj = detail::quarter_turn_matrix(result.quarter_turns[j]);
      const std::size_t mj = result.mode_map[j];
      w(2 * mj) -= a * tj(0, 0);
      w(2 * mj + 1) -= a * tj(0, 1);
    }
    out(i) = w.dot(result.state.cov() * w);
  }
  return out;
}

GaussianState pi_phase_route(const GaussianState& state, ModeIndex mode) {
  require(mode.value < state.num_modes(), "mode out of range");
  GaussianState joint = tensor_product(state, vacuum(1));
  const ModeIndex memory{state.num_modes()};
  joint = apply(joint,
                to_symplectic(bs_bogoliubov(RamanBS{std::numbers::pi, 0.0})),
                {mode, memory});
  return trace_out(joint, {memory});
}

}  // namespace tfcv
