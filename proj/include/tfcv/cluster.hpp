#pragma once

#include "tfcv/bloch_messiah.hpp"

#include <array>

namespace tfcv {

/// Weighted adjacency over qumode nodes labeled by (frequency, time-bin)
/// plaquettes. Symmetric with zero diagonal; canonical edges carry weight 1.
struct ClusterGraph {
  std::vector<std::array<int, 2>> labels;  // (freq_index, time_bin) per node
  Mat adjacency;

  static ClusterGraph empty(std::vector<std::array<int, 2>> labels);
  std::size_t size() const { return labels.size(); }
  void add_edge(std::size_t i, std::size_t j, double weight = 1.0);
};

/// State plus graph bookkeeping. quarter_turns records the cluster-basis
/// rotation of each node ((q,p) -> (-p,q) per turn); it is bookkept rather
/// than applied, so nullifiers and gates account for it explicitly.
struct ProtocolResult {
  GaussianState state;
  ClusterGraph graph;
  std::vector<std::size_t> mode_map;  // node -> mode index, bijective
  std::vector<int> quarter_turns;
};

/// Two-qumode cluster: a TMS(r) interaction between a field vacuum and a
/// memory vacuum, followed by memory read-out into a second plaquette with
/// transmissivity 1 - delta_eta. The second node carries the cluster-basis
/// rotation.
ProtocolResult two_qumode_cluster(double r, double delta_eta);

/// Fidelity of the imperfect two-qumode cluster against the lossless
/// reference at the same squeezing, evaluated from the printed closed form.
double two_qumode_fidelity_closed_form(double db, double delta_eta);

/// Same quantity computed through the full Gaussian pipeline.
double two_qumode_fidelity_numeric(double db, double delta_eta);

/// Links two nodes with the memory-synthesized gate sequence. Each of the
/// three interactions is preceded by a lossy transfer of node_j into a
/// memory and followed by a lossy release of node_i. Gates act in the
/// cluster basis of the nodes' bookkept rotations.
ProtocolResult apply_cz(const ProtocolResult& in, std::size_t node_i,
                        std::size_t node_j, double delta_eta);

/// Fidelity of an imperfect memory-chain gate linking two uncorrelated
/// single-mode squeezed states against the lossless gate output, from the
/// printed closed form.
double cz_fidelity_closed_form(double db, double delta_eta);

/// Same quantity through the full Gaussian pipeline.
double cz_fidelity_numeric(double db, double delta_eta);

/// d x n lattice: per-frequency two-qumode clusters (stage a), temporal
/// links (stage b), frequency links (stage c). Guard: 2*d*n <= 256.
ProtocolResult build_2d_cluster(std::size_t d, std::size_t n, double r,
                                double delta_eta);

/// Variance of each nullifier p_i - sum_j A_ij q_j, in the nodes' cluster
/// bases.
Vec nullifier_variances(const ProtocolResult& result);

/// Routes a mode for measurement by a strong double-pass interaction with a
/// ground-state memory: the mode acquires a pi phase (mean negated), the
/// memory returns disentangled.
GaussianState pi_phase_route(const GaussianState& state, ModeIndex mode);

inline constexpr std::size_t kMaxLatticeModes = 256;  // 2 * d * n bound

namespace detail {

/// Physical-to-cluster coordinate map for a node, (q,p) -> (-p,q) per turn.
Mat quarter_turn_matrix(int turns);

/// The three gate symplectics of the memory-synthesized two-qumode gate.
const std::vector<SymplecticOp>& gate_symplectics();

/// Gate expressed in the cluster bases of its two operands.
SymplecticOp conjugate_gate(const SymplecticOp& gate, int turns_i,
                            int turns_j);

/// Full transfer swaps on an ordered (field, memory) pair; control phases
/// chosen so the transferred content keeps its sign in both directions.
SymplecticOp swap_into_memory();
SymplecticOp swap_out_of_memory();

}  // namespace detail

}  // namespace tfcv
