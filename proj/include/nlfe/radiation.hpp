#pragma once

#include <string>
#include <utility>
#include <vector>

#include "nlfe/effective_epsilon.hpp"
#include "nlfe/material.hpp"
#include "nlfe/quadrature.hpp"
#include "nlfe/thermal.hpp"

namespace nlfe {

struct SphereSpec {
  double radius = 0.0;  // [m]
  MaterialModel material;
};

/// Point-dipole validity of a sphere: R against the thermal wavelength
/// hbar c/(k_B T_max) and against the smallest skin depth (c/w)/Im sqrt(eps)
/// on the given frequencies. A warning is issued once R exceeds 1/10 of
/// either scale. Throws std::invalid_argument for R <= 0.
struct SphereValidity {
  double thermal_wavelength = 0.0;  // inf if T_max == 0
  double min_skin_depth = 0.0;      // inf for a transparent sphere
  std::vector<std::string> warnings;
};

SphereValidity check_sphere(const SphereSpec& sphere, const ThermalState& thermal,
                            const std::vector<double>& omegas);

struct SphereOptions {
  SphereEquilibrium equilibrium = SphereEquilibrium::none;
  ProfileOptions profile;
};

struct Polarizability {
  cdouble value;  // [m^3]
  double error = 0.0;
  std::vector<std::string> warnings;
};

/// First order in chi3:
///   a~ = (eps - 1)/(eps + 2) R^3 + 3 R^3/(eps + 2)^2 (d_eps_eq + int dw' N_neq).
/// PoleError when eps(w) is 1 or -2.
Polarizability effective_polarizability(const SphereSpec& sphere, double omega,
                                        const ThermalState& thermal,
                                        const std::vector<double>& omega_prime_grid,
                                        const SphereOptions& options = {});

/// Contiguous run of frequency samples where the net flux has the opposite
/// sign of the b-difference, i.e. negative spectral emissivity.
struct SignRegion {
  double omega_from;
  double omega_to;
};

struct RadiationSpectrum {
  std::vector<double> grid_omega;
  std::vector<double> flux_density;  // sphere [W s], plate [W s/m^2]
  /// Plate: blackbody exchange Pl(T_obj) - Pl(T_env). Sphere: the same per
  /// area times 4 pi R^2, as a reference only.
  std::vector<double> bound;
  double total = 0.0;
  double total_error = 0.0;
  std::vector<SignRegion> negative_regions;
  std::vector<std::string> warnings;
};

/// Net emitted spectrum 4 (eps0/(pi^2 c)) w^2 [b(w, T_obj) - b(w, T_env)] Im a~(w)
/// on omega_grid, integrated by the trapezoid rule. The error combines the
/// Richardson estimate over omega_grid with the propagated w' errors.
RadiationSpectrum sphere_radiation(const SphereSpec& sphere, const ThermalState& thermal,
                                   const std::vector<double>& omega_grid,
                                   const std::vector<double>& omega_prime_grid,
                                   const SphereOptions& options = {});

/// Transparent sphere (real eps over the frequency range, no equilibrium
/// term): the double integral
///   H = -162 eps0 R^3/(pi^3 c^2) int dw int dw' w^2 w' Im chi3(w, w')
///       Db(w) Db(w') / ((eps(w) + 2)^2 (eps(w') + 2)^2),  Db = b_obj - b_env,
/// evaluated by nested adaptive quadrature over [omega_min, omega_max] and
/// [omega_prime_min, omega_prime_max]. The integrand is bilinear in Db and
/// is evaluated in that form, so swapping the temperatures leaves every
/// sample unchanged. flux_density holds w-samples of the inner integral on
/// omega_grid; total is the adaptive double integral.
RadiationSpectrum sphere_radiation_transparent(const SphereSpec& sphere, const ThermalState& thermal,
                                               const std::vector<double>& omega_grid,
                                               const std::vector<double>& omega_prime_grid,
                                               const QuadratureSpec& quad = {});

enum class AngularMode { hemispherical, normal };

struct EmissivityOptions {
  AngularMode angular = AngularMode::hemispherical;
  QuadratureSpec quad;
  /// Largest tolerated optical thickness |sqrt(eps)| k0 dz of one slice.
  double max_slice_phase = 0.1;
};

struct Emissivity {
  double value = 0.0;         // from the profile's own slicing, in [0, 1]
  double extrapolated = 0.0;  // Richardson in slice count
  double error = 0.0;         // slice-count estimate plus angular quadrature
  int slices = 0;
  std::vector<std::string> warnings;
};

/// Slab emissivity of vacuum | eps~(z) profile | semi-infinite bulk.
/// Between depth samples the profile is replaced by homogeneous slices
/// holding the mean of the two adjacent samples; the first slice [0, z_0]
/// holds eps~(z_0), and the last sample continues as the bulk. The
/// hemispherical value averages 1 - |r|^2 over propagating directions with
/// the projected solid angle, summed over polarizations with weight 1/2.
/// Throws std::invalid_argument when the bulk does not absorb.
Emissivity slab_emissivity(const EffectiveEpsilonProfile& profile,
                           const EmissivityOptions& options = {});

/// 1 - |r|^2 of a layer stack (top medium first, vacuum expected) at
/// scaled transverse wavenumber q, summed over polarizations with weight 1/2.
double directional_emissivity(const std::vector<cdouble>& eps, const std::vector<double>& thickness,
                              double q);

/// Net plate spectrum e(w) [Pl(w, T_obj) - Pl(w, T_env)]. Samples where e
/// leaves [0, 1] or the flux leaves the Planck bound are reported in
/// `warnings`; they indicate a numerics problem, not physics.
RadiationSpectrum plate_radiation(const std::vector<double>& omega_grid,
                                  const std::vector<double>& emissivity,
                                  const ThermalState& thermal);

/// Same, with one profile per frequency sample (profile.omega is used).
RadiationSpectrum plate_radiation(const std::vector<EffectiveEpsilonProfile>& profiles,
                                  const ThermalState& thermal,
                                  const EmissivityOptions& options = {},
                                  std::vector<Emissivity>* emissivities = nullptr);

}  // namespace nlfe
