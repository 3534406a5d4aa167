#include "nlfe/planar_stack.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nlfe/constants.hpp"
#include "nlfe/errors.hpp"

namespace nlfe {

PlanarStack::PlanarStack(std::vector<Layer> layers, std::string axis)
    : layers_(std::move(layers)), axis_(std::move(axis)) {
  if (layers_.size() < 2)
    throw std::invalid_argument("a planar stack needs at least two layers");
  if (std::isfinite(layers_.front().thickness) || std::isfinite(layers_.back().thickness))
    throw std::invalid_argument("first and last layers must be semi-infinite");
  for (std::size_t i = 1; i + 1 < layers_.size(); ++i) {
    const double t = layers_[i].thickness;
    if (!(t > 0.0) || !std::isfinite(t))
      throw std::invalid_argument("interior layer thicknesses must be finite and > 0");
  }
}

PlanarStack PlanarStack::single_plate(const MaterialModel& plate) {
  return PlanarStack({{MaterialModel::vacuum(), kSemiInfinite}, {plate, kSemiInfinite}});
}

PlanarStack PlanarStack::double_plate(const MaterialModel& plate, double gap) {
  if (!(gap > 0.0)) throw std::invalid_argument("plate separation must be > 0");
  return PlanarStack({{plate, kSemiInfinite},
                      {MaterialModel::vacuum(), gap},
                      {plate, kSemiInfinite}});
}

std::vector<cdouble> PlanarStack::permittivities(double omega) const {
  std::vector<cdouble> eps;
  eps.reserve(layers_.size());
  for (const auto& l : layers_) eps.push_back(l.material.epsilon(omega));
  return eps;
}

std::vector<double> PlanarStack::scaled_thicknesses(double omega) const {
  std::vector<double> t;
  t.reserve(layers_.size());
  const double k0 = omega / Const::c;
  for (const auto& l : layers_) t.push_back(std::isfinite(l.thickness) ? l.thickness * k0 : kSemiInfinite);
  return t;
}

PlanarStack PlanarStack::reversed() const {
  std::vector<Layer> rev(layers_.rbegin(), layers_.rend());
  return PlanarStack(std::move(rev), axis_);
}

namespace {

cdouble branch_sqrt(cdouble x) {
  cdouble kz = std::sqrt(x);
  if (kz.imag() < 0.0 || (kz.imag() == 0.0 && kz.real() < 0.0)) kz = -kz;
  return kz;
}

}  // namespace

cdouble scaled_kz(cdouble eps, double q) { return branch_sqrt(eps - q * q); }

cdouble scaled_kz(cdouble eps, const TransverseNode& node) {
  if (eps.real() > 0.0) {
    const double line = std::sqrt(eps.real());
    // For a light line L adjacent to the node, eps - q^2 is taken as
    // -+|q - L|(q + L) + i Im eps. This drops the rounding residual
    // Re eps - L^2 (a one-ulp shift of eps) so that the branch point sits
    // exactly on the interval endpoint.
    if (line == node.lo || line == node.hi) {
      const double sum = node.q + line;
      const double diff = line == node.lo ? -node.q_minus_lo * sum : node.hi_minus_q * sum;
      const cdouble rest(diff, eps.imag());
      return branch_sqrt(rest);
    }
  }
  return scaled_kz(eps, node.q);
}

namespace {

// Admittance-like quantity whose continuity ratio gives r: kz for s,
// kz/eps for p.
cdouble admittance(cdouble eps, cdouble kz, Polarization pol) {
  return pol == Polarization::s ? kz : kz / eps;
}

void check_wave(double omega, double k_rho) {
  if (!(omega > 0.0)) throw std::domain_error("omega must be > 0");
  if (!(k_rho >= 0.0)) throw std::domain_error("k_rho must be >= 0");
}

}  // namespace

cdouble scaled_fresnel_reflection(cdouble eps_a, cdouble eps_b, double q,
                                  Polarization pol) {
  return scaled_fresnel_reflection(eps_a, eps_b, TransverseNode(q), pol);
}

cdouble scaled_fresnel_reflection(cdouble eps_a, cdouble eps_b,
                                  const TransverseNode& node, Polarization pol) {
  const cdouble ya = admittance(eps_a, scaled_kz(eps_a, node), pol);
  const cdouble yb = admittance(eps_b, scaled_kz(eps_b, node), pol);
  const cdouble den = ya + yb;
  if (den == cdouble{})
    throw DegenerateInterfaceError("Fresnel denominator vanishes (grazing incidence on identical media)");
  return (ya - yb) / den;
}

cdouble fresnel_reflection(cdouble eps_a, cdouble eps_b, double omega,
                           double k_rho, Polarization pol) {
  check_wave(omega, k_rho);
  return scaled_fresnel_reflection(eps_a, eps_b, k_rho * Const::c / omega, pol);
}

StackAmplitudes scaled_stack_amplitudes(const std::vector<cdouble>& eps,
                                        const std::vector<double>& thickness,
                                        double q, Polarization pol) {
  return scaled_stack_amplitudes(eps, thickness, TransverseNode(q), pol);
}

StackAmplitudes scaled_stack_amplitudes(const std::vector<cdouble>& eps,
                                        const std::vector<double>& thickness,
                                        const TransverseNode& node, Polarization pol) {
  const std::size_t n = eps.size();
  std::vector<cdouble> kz(n), y(n);
  for (std::size_t j = 0; j < n; ++j) {
    kz[j] = scaled_kz(eps[j], node);
    y[j] = admittance(eps[j], kz[j], pol);
  }
  // gamma[j]: reflection at the top interface of layer j+1 seen from j.
  // phase[j]: round trip exp(2 i kz_j t_j) through finite layer j.
  std::vector<cdouble> gamma(n - 1), r(n - 1), phase(n, cdouble{});
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const cdouble den = y[j] + y[j + 1];
    if (den == cdouble{})
      throw DegenerateInterfaceError("Fresnel denominator vanishes inside stack");
    r[j] = (y[j] - y[j + 1]) / den;
  }
  for (std::size_t j = 1; j + 1 < n; ++j) {
    // exp underflows to exactly 0 for thick lossy layers, which reduces the
    // recursion to the single-interface coefficient.
    phase[j] = std::exp(cdouble(0.0, 2.0) * kz[j] * thickness[j]);
  }
  gamma[n - 2] = r[n - 2];
  for (std::size_t jj = n - 1; jj-- > 1;) {
    const std::size_t j = jj - 1;
    const cdouble g = gamma[j + 1] * phase[j + 1];
    gamma[j] = (r[j] + g) / (1.0 + r[j] * g);
  }
  cdouble trans = 1.0;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const cdouble t = 1.0 + r[j];
    cdouble g = 0.0;
    cdouble half_phase = 1.0;
    if (j + 2 < n) {
      g = gamma[j + 1] * phase[j + 1];
      half_phase = std::exp(cdouble(0.0, 1.0) * kz[j + 1] * thickness[j + 1]);
    }
    // Downward amplitude just below interface j|j+1, then carried to the
    // next interface.
    trans *= t / (1.0 + r[j] * g);
    if (j + 2 < n) trans *= half_phase;
  }
  return {gamma[0], trans};
}

StackAmplitudes stack_amplitudes(const PlanarStack& stack, double omega,
                                 double k_rho, Polarization pol) {
  check_wave(omega, k_rho);
  return scaled_stack_amplitudes(stack.permittivities(omega),
                                 stack.scaled_thicknesses(omega),
                                 k_rho * Const::c / omega, pol);
}

cdouble stack_reflection(const PlanarStack& stack, Side side, double omega,
                         double k_rho, Polarization pol) {
  if (side == Side::top) return stack_amplitudes(stack, omega, k_rho, pol).reflection;
  return stack_amplitudes(stack.reversed(), omega, k_rho, pol).reflection;
}

}  // namespace nlfe
