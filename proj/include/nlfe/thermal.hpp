#pragma once

#include <vector>

namespace nlfe {

/// Temperatures of the bodies (index 1..N in the usual notation, stored
/// 0-based here) and of the environment.
struct ThermalState {
  std::vector<double> body_temperatures;
  double environment_temperature = 0.0;

  static ThermalState single(double t_obj, double t_env) {
    return ThermalState{{t_obj}, t_env};
  }
  double object() const { return body_temperatures.at(0); }
  double environment() const { return environment_temperature; }
  bool all_equal() const;
  double max_temperature() const;
  void validate() const;
};

/// Mean photon occupation 1/(exp(hbar w / k T) - 1); zero at T = 0.
double occupation(double omega, double temperature);

/// Prefactor hbar w^2 / (pi eps0 c^2) of the field-fluctuation weight.
double bose_prefactor(double omega);

/// b(w, T) = (hbar/(pi eps0)) (w^2/c^2) [1 - exp(-hbar w / k T)]^-1.
///
/// Only w > 0 is accepted. Written as prefactor * (1 + n(w, T)) so the
/// T = 0 limit (zero-point fluctuations) is exact.
double bose_factor(double omega, double temperature);

/// b(w, T_a) - b(w, T_b), evaluated as prefactor * (n_a - n_b) so that
/// swapping the temperatures negates the result bit-for-bit and equal
/// temperatures give exactly zero.
double bose_difference(double omega, double t_a, double t_b);

/// Per-area blackbody spectral flux hbar w^3 / (4 pi^2 c^2) n(w, T).
double planck_spectral_bound(double omega, double temperature);

}  // namespace nlfe
