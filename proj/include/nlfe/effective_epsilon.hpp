#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "nlfe/greens_planar.hpp"
#include "nlfe/material.hpp"
#include "nlfe/planar_stack.hpp"
#include "nlfe/quadrature.hpp"
#include "nlfe/thermal.hpp"

// Kernels N(z; w, w') whose w'-integral renormalizes the permittivity of a
// chi3 medium, and the resulting effective permittivity profiles.
//
// Frequency convention: every w' integral runs over w' > 0 and the kernels
// are used exactly as written there, i.e. the pairing of +w' and -w' is
// absorbed into the kernel with unit weight. Plate kernels are returned per
// unit chi3 [1/(rad/s) per (m^2/V^2)]; the sphere kernel includes chi3.

namespace nlfe {

enum class KernelGeometry { single_plate, double_plate_delta, neq_plate, neq_sphere };

/// How a sample was made finite.
///   raw_lossless     full coincident trace of a non-absorbing plate,
///   bulk_subtracted  reflection-induced part only (absorbing plate),
///   difference       second plate present minus absent,
///   dust             environment-sourced intensity (nonequilibrium).
enum class Regularization { raw_lossless, bulk_subtracted, difference, dust };

/// Treatment of the divergent bulk term in equilibrium plate kernels.
enum class TraceMode {
  automatic,        // raw if the plate is lossless at w', subtracted otherwise
  raw,              // DivergentError for absorbing plates
  bulk_subtracted,  // scattered part only, for any plate
};

struct KernelValue {
  double value = 0.0;
  double error = 0.0;
  Regularization regularization = Regularization::raw_lossless;
  bool clamped = false;
};

const char* to_string(KernelGeometry g);
const char* to_string(Regularization r);

/// 3 b(w', T) Tr Im G(z, z; w') inside the plate of a vacuum|plate stack.
KernelValue kernel_eq_single_plate(const MaterialModel& plate, double z, double omega_prime,
                                   double temperature, const QuadratureSpec& quad = {},
                                   TraceMode mode = TraceMode::raw);

/// 3 b(w', T) times the plate|gap|plate minus single-plate trace.
KernelValue kernel_eq_double_delta(const MaterialModel& plate, double gap, double z,
                                   double omega_prime, double temperature,
                                   const QuadratureSpec& quad = {});

/// 3 [b(w', T_env) - b(w', T_obj)] times the dust intensity at depth z.
/// Exactly zero for T_env == T_obj.
KernelValue kernel_neq_plate(const PlanarStack& stack, double z, double omega_prime,
                             double t_obj, double t_env, const QuadratureSpec& quad = {});

/// Point-dipole sphere kernel
///   -(3/2pi) (w'/c) chi3(w, w') |3/(eps(w') + 2)|^2 [b(w', T_obj) - b(w', T_env)].
/// Throws PoleError if eps(w') == -2.
cdouble kernel_neq_sphere(const MaterialModel& material, double omega, double omega_prime,
                          double t_obj, double t_env);

/// Kernel sampled on a (z, w') grid, stored z-major.
struct SpectralKernel {
  KernelGeometry geometry = KernelGeometry::single_plate;
  std::vector<double> grid_z;
  std::vector<double> grid_omega_prime;
  std::vector<cdouble> values;
  std::vector<double> errors;
  std::vector<Regularization> regularization;

  std::size_t index(std::size_t iz, std::size_t iw) const { return iz * grid_omega_prime.size() + iw; }
  cdouble at(std::size_t iz, std::size_t iw) const { return values.at(index(iz, iw)); }
  /// Common tag of all samples, or nullopt if they differ.
  std::optional<Regularization> uniform_regularization() const;
};

struct PlateKernelRequest {
  KernelGeometry geometry = KernelGeometry::single_plate;
  MaterialModel plate;
  double gap = 0.0;  // double_plate_delta only
  ThermalState thermal;
  TraceMode mode = TraceMode::automatic;
};

/// Per-unit-chi3 plate kernel on a grid. Depth samples run in parallel.
SpectralKernel sample_plate_kernel(const PlateKernelRequest& request,
                                   const std::vector<double>& grid_z,
                                   const std::vector<double>& grid_omega_prime,
                                   const QuadratureSpec& quad = {}, unsigned threads = 1);

/// Dimensionless form of a plate kernel, value / (3 b(w', 0) w'/c). For the
/// equilibrium kernels this is [b(w', T)/b(w', 0)] Tr Im G c/w'.
double figure_normalization(double kernel_value, double omega_prime);

// ---------------------------------------------------------------------------
// w' grids
// ---------------------------------------------------------------------------

/// Logarithmic grid over [1e-3, 1e3] k_B T_max / hbar. Throws
/// std::invalid_argument when T_max == 0 (no thermal scale exists).
std::vector<double> default_omega_prime_grid(double t_max, int points_per_decade = 24);

/// Inserts nodes around a resonance so that the local spacing stays below
/// (|w' - w0| + gamma)/resolution, out to where that bound reaches the local
/// spacing of the base grid. Nodes outside the base grid range are dropped.
std::vector<double> refine_for_resonance(const std::vector<double>& grid,
                                         const Resonance& resonance, int resolution = 24);

// ---------------------------------------------------------------------------
// Effective permittivity profiles
// ---------------------------------------------------------------------------

/// vacuum | plate, profile at the given depths.
struct PlateGeometry {
  std::vector<double> grid_z;
};

/// plate | gap | plate. Only the equilibrium difference kernel exists for
/// this geometry, so temperatures must be equal.
struct PlatePairGeometry {
  double gap = 0.0;
  std::vector<double> grid_z;
};

/// Equilibrium kernel inside a small sphere.
enum class SphereEquilibrium {
  none,           // eps_eq = eps
  bulk_lossless,  // 3 chi3 b(w', T_obj) sqrt(eps') w'/(2 pi c); divergent if absorbing
};

struct SphereGeometry {
  SphereEquilibrium equilibrium = SphereEquilibrium::none;
};

using ProfileGeometry = std::variant<PlateGeometry, PlatePairGeometry, SphereGeometry>;

struct ProfileOptions {
  QuadratureSpec quad;
  bool include_equilibrium = true;
  bool include_nonequilibrium = true;
  int resonance_resolution = 24;
  unsigned threads = 1;
};

struct EffectiveEpsilonProfile {
  std::vector<double> grid_z;  // empty for a sphere (single value)
  double omega = 0.0;
  std::vector<cdouble> values;
  /// values - base_epsilon, kept separately so that small shifts are not
  /// rounded against the base permittivity.
  std::vector<cdouble> shifts;
  /// Estimated error of each value from the w' quadrature.
  std::vector<double> errors;
  cdouble base_epsilon;
  /// Tag of the equilibrium part (nullopt if not included).
  std::optional<Regularization> equilibrium_regularization;
  std::vector<double> omega_prime_grid;  // after resonance refinement
};

/// eps~(z; w) = eps(w) + int dw' [N_eq + N_neq](z; w, w') as a trapezoid sum
/// over the (refined) w' grid.
EffectiveEpsilonProfile effective_epsilon_profile(const MaterialModel& material,
                                                  const ProfileGeometry& geometry, double omega,
                                                  const std::vector<double>& omega_prime_grid,
                                                  const ThermalState& thermal,
                                                  const ProfileOptions& options = {});

struct ComplexIntegral {
  cdouble value;
  double error = 0.0;
};

/// Trapezoid sum of complex samples y(x) with a Richardson error estimate.
ComplexIntegral integrate_samples(const std::vector<double>& x, const std::vector<cdouble>& y);

/// Permittivity shift of a small sphere, i.e. the w' integral of the
/// selected equilibrium term plus the nonequilibrium sphere kernel over the
/// given grid (no resonance refinement is applied here).
ComplexIntegral sphere_epsilon_shift(const MaterialModel& material, const SphereGeometry& geometry,
                                     double omega, const std::vector<double>& omega_prime_grid,
                                     const ThermalState& thermal, const ProfileOptions& options = {});

/// w'-integral of the sphere kernel alone over the given grid.
ComplexIntegral integrate_sphere_kernel(const MaterialModel& material, double omega,
                                        const std::vector<double>& omega_prime_grid,
                                        double t_obj, double t_env);

}  // namespace nlfe
