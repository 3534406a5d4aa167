#include "nlfe/thermal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nlfe/constants.hpp"

namespace nlfe {

namespace {

void check_frequency(double omega) {
  if (!(omega > 0.0) || !std::isfinite(omega))
    throw std::domain_error("thermal weight requires omega > 0");
}

void check_temperature(double temperature) {
  if (!(temperature >= 0.0) || !std::isfinite(temperature))
    throw std::domain_error("temperature must be finite and >= 0");
}

}  // namespace

bool ThermalState::all_equal() const {
  return std::all_of(body_temperatures.begin(), body_temperatures.end(),
                     [&](double t) { return t == environment_temperature; });
}

double ThermalState::max_temperature() const {
  double t = environment_temperature;
  for (double tb : body_temperatures) t = std::max(t, tb);
  return t;
}

void ThermalState::validate() const {
  check_temperature(environment_temperature);
  for (double t : body_temperatures) check_temperature(t);
}

double occupation(double omega, double temperature) {
  check_frequency(omega);
  check_temperature(temperature);
  if (temperature == 0.0) return 0.0;
  const double x = Const::hbar * omega / (Const::k_B * temperature);
  if (x > 700.0) return 0.0;
  return 1.0 / std::expm1(x);
}

double bose_prefactor(double omega) {
  check_frequency(omega);
  return Const::hbar / (Const::pi * Const::eps0) * (omega * omega) /
         (Const::c * Const::c);
}

double bose_factor(double omega, double temperature) {
  return bose_prefactor(omega) * (1.0 + occupation(omega, temperature));
}

double bose_difference(double omega, double t_a, double t_b) {
  if (t_a == t_b) {
    check_frequency(omega);
    check_temperature(t_a);
    return 0.0;
  }
  return bose_prefactor(omega) *
         (occupation(omega, t_a) - occupation(omega, t_b));
}

double planck_spectral_bound(double omega, double temperature) {
  const double n = occupation(omega, temperature);
  return Const::hbar * omega * omega * omega /
         (4.0 * Const::pi * Const::pi * Const::c * Const::c) * n;
}

}  // namespace nlfe
