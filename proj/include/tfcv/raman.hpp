#pragma once

#include "tfcv/bogoliubov.hpp"

namespace tfcv {

/// Memory-field beam-splitter interaction. phi is the mixing angle with the
/// interaction time folded in; theta is the control-field phase.
struct RamanBS {
  double phi = 0.0;
  double theta = 0.0;
};

/// Memory-field two-mode squeezing interaction. r >= 0; psi is the
/// control-field phase (a negative squeezing folds into psi -> psi + pi).
struct RamanTMS {
  double r = 0.0;
  double psi = 0.0;

  RamanTMS() = default;
  RamanTMS(double r_in, double psi_in);
};

/// Per-mode phase shifts a_1 -> e^{i theta1} a_1, a_2 -> e^{i theta2} a_2.
struct PhasePair {
  double theta1 = 0.0;
  double theta2 = 0.0;
};

/// A = [[cos phi, e^{-i theta} sin phi], [-e^{i theta} sin phi, cos phi]],
/// B = 0.
BogoliubovPair bs_bogoliubov(const RamanBS& op);

/// A = cosh(r) I, B = e^{i psi} sinh(r) antidiag(1, 1).
BogoliubovPair tms_bogoliubov(const RamanTMS& op);

BogoliubovPair phase_bogoliubov(const PhasePair& phases);

struct CommutedBS {
  RamanBS op;
  PhasePair out;
};

struct CommutedTMS {
  RamanTMS op;
  PhasePair out;
};

/// Rewrites [phases, then real BS(phi)] as [RamanBS(phi, theta1 - theta2),
/// then the same phases].
CommutedBS commute_phases_bs(const PhasePair& phases, double phi);

/// Rewrites [phases, then real TMS(r)] as [RamanTMS(r, -(theta1 + theta2)),
/// then the same phases].
CommutedTMS commute_phases_tms(const PhasePair& phases, double r);

/// One element of a two-mode interaction chain.
struct ChainElement {
  enum class Kind { Phases, BeamSplitter, Squeezer } kind;
  PhasePair phases;  // Kind::Phases
  double phi = 0.0;  // Kind::BeamSplitter (real BS)
  double r = 0.0;    // Kind::Squeezer (real TMS)
};

struct MemoryChain {
  std::vector<ChainElement> ops;  // only BeamSplitter/Squeezer, with the
                                  // control phases below
  std::vector<double> control_phases;  // theta or psi per op
  PhasePair terminal;                  // residual per-mode phases
};

/// Rewrites an arbitrary phases/BS/TMS chain into memory-implementable
/// Raman operations followed by terminal per-mode phases.
MemoryChain rewrite_chain(const std::vector<ChainElement>& chain);

/// Total Bogoliubov transformation of a chain, first element applied first.
BogoliubovPair chain_bogoliubov(const std::vector<ChainElement>& chain);

/// Total Bogoliubov transformation of a rewritten chain, terminal phases
/// included.
BogoliubovPair chain_bogoliubov(const MemoryChain& chain);

}  // namespace tfcv
