#include "tfcv/raman.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tfcv {

namespace {
using Cx = std::complex<double>;

BogoliubovPair real_bs(double phi) {
  return bs_bogoliubov(RamanBS{phi, 0.0});
}

BogoliubovPair real_tms(double r) {
  return tms_bogoliubov(RamanTMS{r, 0.0});
}
}  // namespace

RamanTMS::RamanTMS(double r_in, double psi_in) : r(r_in), psi(psi_in) {
  if (!std::isfinite(r) || !std::isfinite(psi)) {
    throw std::invalid_argument("TMS parameters must be finite");
  }
  if (r < 0.0) {
    r = -r;
    psi += std::numbers::pi;
  }
}

BogoliubovPair bs_bogoliubov(const RamanBS& op) {
  const double c = std::cos(op.phi);
  const double s = std::sin(op.phi);
  const Cx phase = std::exp(Cx(0.0, op.theta));
  CMat a(2, 2);
  a << Cx(c), std::conj(phase) * s, -phase * s, Cx(c);
  return {std::move(a), CMat::Zero(2, 2)};
}

BogoliubovPair tms_bogoliubov(const RamanTMS& op) {
  const double mu = std::cosh(op.r);
  const double nu = std::sinh(op.r);
  const Cx phase = std::exp(Cx(0.0, op.psi));
  CMat a = mu * CMat::Identity(2, 2);
  CMat b(2, 2);
  b << Cx(0.0), phase * nu, phase * nu, Cx(0.0);
  return {std::move(a), std::move(b)};
}

BogoliubovPair phase_bogoliubov(const PhasePair& phases) {
  return BogoliubovPair::phases({phases.theta1, phases.theta2});
}

CommutedBS commute_phases_bs(const PhasePair& phases, double phi) {
  return {RamanBS{phi, phases.theta1 - phases.theta2}, phases};
}

CommutedTMS commute_phases_tms(const PhasePair& phases, double r) {
  return {RamanTMS{r, -(phases.theta1 + phases.theta2)}, phases};
}

MemoryChain rewrite_chain(const std::vector<ChainElement>& chain) {
  MemoryChain out;
  PhasePair pending{0.0, 0.0};
  for (const auto& elem : chain) {
    switch (elem.kind) {
      case ChainElement::Kind::Phases:
        pending.theta1 += elem.phases.theta1;
        pending.theta2 += elem.phases.theta2;
        break;
      case ChainElement::Kind::BeamSplitter: {
        const auto commuted = commute_phases_bs(pending, elem.phi);
        out.ops.push_back({ChainElement::Kind::BeamSplitter, {}, elem.phi, 0.0});
        out.control_phases.push_back(commuted.op.theta);
        pending = commuted.out;
        break;
      }
      case ChainElement::Kind::Squeezer: {
        const auto commuted = commute_phases_tms(pending, elem.r);
        out.ops.push_back({ChainElement::Kind::Squeezer, {}, 0.0, elem.r});
        out.control_phases.push_back(commuted.op.psi);
        pending = commuted.out;
        break;
      }
    }
  }
  out.terminal = pending;
  return out;
}

BogoliubovPair chain_bogoliubov(const std::vector<ChainElement>& chain) {
  BogoliubovPair total = BogoliubovPair::identity(2);
  for (const auto& elem : chain) {
    switch (elem.kind) {
      case ChainElement::Kind::Phases:
        total = compose(total, phase_bogoliubov(elem.phases));
        break;
      case ChainElement::Kind::BeamSplitter:
        total = compose(total, real_bs(elem.phi));
        break;
      case ChainElement::Kind::Squeezer:
        total = compose(total, real_tms(elem.r));
        break;
    }
  }
  return total;
}

BogoliubovPair chain_bogoliubov(const MemoryChain& chain) {
  BogoliubovPair total = BogoliubovPair::identity(2);
  for (std::size_t i = 0; i < chain.ops.size(); ++i) {
    const auto& elem = chain.ops[i];
    if (elem.kind == ChainElement::Kind::BeamSplitter) {
      total = compose(
          total, bs_bogoliubov(RamanBS{elem.phi, chain.control_phases[i]}));
    } else {
      total = compose(
          total, tms_bogoliubov(RamanTMS{elem.r, chain.control_phases[i]}));
    }
  }
  return compose(total, phase_bogoliubov(chain.terminal));
}

}  // namespace tfcv
