#pragma once

#include "tfcv/raman.hpp"

namespace tfcv {

/// Factorization A = U A_D V^dag, B = U B_D V^T with U, V unitary and
/// A_D, B_D non-negative diagonal satisfying A_D^2 - B_D^2 = I.
struct BlochMessiahFactors {
  CMat U;
  CMat V;
  Vec A_D;  // diagonal entries, descending
  Vec B_D;  // diagonal entries, sqrt(A_D^2 - 1)
};

/// Bloch-Messiah reduction of a valid Bogoliubov pair. Throws if the pair is
/// invalid or the factors fail to reconstruct the pair within tolerance.
BlochMessiahFactors reduce(const BogoliubovPair& pair);

BogoliubovPair reconstruct(const BlochMessiahFactors& factors);

/// Mixing angle phi' = pi/4 - (1/2) asin(2/sqrt(5)) of the gate beam
/// splitters; sin^2(phi') is the memory coupling the gate needs.
double cz_bs_angle();

/// Squeezing asinh(1/2) of the gate's two-mode squeezer.
double cz_tms_squeezing();

/// Bogoliubov pair of the two-mode gate e^{i q_1 q_2}: quadrature action
/// q1 -> q1, p1 -> p1 + q2, q2 -> q2, p2 -> p2 + q1.
BogoliubovPair cz_bogoliubov();

/// Memory-implementable synthesis of the gate: beam splitter, two-mode
/// squeezer, beam splitter, with all interleaved phases folded into the
/// control-field parameters. Residual per-mode phases are identity.
struct CzSequence {
  PhasePair pre;
  RamanBS bs_in;
  RamanTMS tms;
  RamanBS bs_out;
  PhasePair terminal;
};

CzSequence cz_sequence();

BogoliubovPair compose_sequence(const CzSequence& seq);

}  // namespace tfcv
