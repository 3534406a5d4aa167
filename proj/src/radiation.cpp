#include "nlfe/radiation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "nlfe/constants.hpp"
#include "nlfe/errors.hpp"
#include "nlfe/parallel.hpp"
#include "nlfe/planar_stack.hpp"

namespace nlfe {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

std::string format_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

void check_frequency_grid(const std::vector<double>& grid, const char* name) {
  if (grid.size() < 2) throw std::invalid_argument(std::string(name) + " needs at least two nodes");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || !std::isfinite(grid[i]))
      throw std::invalid_argument(std::string(name) + " must be positive and finite");
    if (i > 0 && !(grid[i] > grid[i - 1]))
      throw std::invalid_argument(std::string(name) + " must be strictly increasing");
  }
}

std::vector<double> refined_grid(const MaterialModel& m, const std::vector<double>& grid, int resolution) {
  if (const auto res = m.chi3_resonance()) return refine_for_resonance(grid, *res, resolution);
  return grid;
}

// Runs of samples where flux and the thermal factor have opposite signs.
std::vector<SignRegion> opposite_sign_runs(const std::vector<double>& omega,
                                           const std::vector<double>& flux,
                                           const std::vector<double>& drive) {
  std::vector<SignRegion> out;
  bool open = false;
  for (std::size_t i = 0; i < omega.size(); ++i) {
    const bool neg = flux[i] * drive[i] < 0.0;
    if (neg && !open) {
      out.push_back({omega[i], omega[i]});
      open = true;
    } else if (neg) {
      out.back().omega_to = omega[i];
    } else {
      open = false;
    }
  }
  return out;
}

double planck_exchange(double omega, const ThermalState& thermal) {
  return planck_spectral_bound(omega, thermal.object()) -
         planck_spectral_bound(omega, thermal.environment());
}

struct AlphaSample {
  cdouble value;
  double error;
};

AlphaSample polarizability_on_grid(const SphereSpec& sphere, double omega, const ThermalState& thermal,
                                   const std::vector<double>& grid, const SphereOptions& options) {
  const cdouble eps = sphere.material.epsilon(omega);
  if (eps == cdouble(1.0, 0.0)) throw PoleError("polarizability expansion undefined for eps(w) = 1");
  if (eps + 2.0 == cdouble{}) throw PoleError("point-dipole resonance eps(w) = -2");
  const double r3 = sphere.radius * sphere.radius * sphere.radius;
  const cdouble slope = 3.0 * r3 / ((eps + 2.0) * (eps + 2.0));
  const cdouble base = (eps - 1.0) / (eps + 2.0) * r3;
  if (sphere.material.is_linear()) return {base, 0.0};
  const ComplexIntegral shift = sphere_epsilon_shift(sphere.material, SphereGeometry{options.equilibrium},
                                                     omega, grid, thermal, options.profile);
  return {base + slope * shift.value, std::abs(slope) * shift.error};
}

// Breakpoints of [a, b] around a chi3 resonance.
std::vector<double> resonance_breaks(double a, double b, const std::optional<Resonance>& res) {
  std::vector<double> pts{a, b};
  if (res) {
    for (double k : {0.0, 1.0, 3.0, 10.0, 30.0, 100.0})
      for (double s : {-1.0, 1.0}) {
        const double p = res->center + s * k * res->width;
        if (p > a && p < b) pts.push_back(p);
      }
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

// Adaptive integral of f over [a, b] split at `breaks`, with f normalized by
// `scale` so that abs_tol is relative to the integrand magnitude.
QuadResult integrate_scaled(const std::function<double(double)>& f, const std::vector<double>& breaks,
                            double scale, const QuadratureSpec& quad) {
  QuadResult out;
  if (scale == 0.0) return out;
  const double a = breaks.front(), len = breaks.back() - a;
  std::vector<Segment> segs;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
    segs.push_back({(breaks[i] - a) / len, (breaks[i + 1] - a) / len,
                    [&, a, len](double x) { return f(a + len * x) / scale; }});
  out = integrate_adaptive(segs, quad);
  out.value *= scale * len;
  out.error *= scale * len;
  return out;
}

}  // namespace

SphereValidity check_sphere(const SphereSpec& sphere, const ThermalState& thermal,
                            const std::vector<double>& omegas) {
  if (!(sphere.radius > 0.0) || !std::isfinite(sphere.radius))
    throw std::invalid_argument("sphere radius must be > 0");
  SphereValidity v;
  const double t = thermal.max_temperature();
  v.thermal_wavelength = t > 0.0 ? Const::hbar * Const::c / (Const::k_B * t) : kInf;
  v.min_skin_depth = kInf;
  for (double w : omegas) {
    const double k = std::sqrt(sphere.material.epsilon(w)).imag();
    if (k > 0.0) v.min_skin_depth = std::min(v.min_skin_depth, Const::c / w / k);
  }
  if (sphere.radius > 0.1 * v.thermal_wavelength)
    v.warnings.push_back("radius " + format_g(sphere.radius) + " m is not small against the thermal wavelength " +
                         format_g(v.thermal_wavelength) + " m");
  if (sphere.radius > 0.1 * v.min_skin_depth)
    v.warnings.push_back("radius " + format_g(sphere.radius) + " m is not small against the skin depth " +
                         format_g(v.min_skin_depth) + " m");
  return v;
}

Polarizability effective_polarizability(const SphereSpec& sphere, double omega, const ThermalState& thermal,
                                        const std::vector<double>& omega_prime_grid,
                                        const SphereOptions& options) {
  if (!(omega > 0.0)) throw std::domain_error("omega must be > 0");
  thermal.validate();
  check_frequency_grid(omega_prime_grid, "omega' grid");
  Polarizability out;
  out.warnings = check_sphere(sphere, thermal, {omega}).warnings;
  const auto grid = refined_grid(sphere.material, omega_prime_grid, options.profile.resonance_resolution);
  const AlphaSample a = polarizability_on_grid(sphere, omega, thermal, grid, options);
  out.value = a.value;
  out.error = a.error;
  return out;
}

RadiationSpectrum sphere_radiation(const SphereSpec& sphere, const ThermalState& thermal,
                                   const std::vector<double>& omega_grid,
                                   const std::vector<double>& omega_prime_grid,
                                   const SphereOptions& options) {
  thermal.validate();
  check_frequency_grid(omega_grid, "omega grid");
  check_frequency_grid(omega_prime_grid, "omega' grid");
  RadiationSpectrum out;
  out.warnings = check_sphere(sphere, thermal, omega_grid).warnings;
  out.grid_omega = omega_grid;
  const auto grid = refined_grid(sphere.material, omega_prime_grid, options.profile.resonance_resolution);

  const std::size_t n = omega_grid.size();
  const double pref = 4.0 * Const::eps0 / (kPi * kPi * Const::c);
  const double area = 4.0 * kPi * sphere.radius * sphere.radius;
  std::vector<double> drive(n), err_density(n);
  out.flux_density.assign(n, 0.0);
  out.bound.assign(n, 0.0);
  parallel_for(n, options.profile.threads, [&](std::size_t i) {
    const double w = omega_grid[i];
    drive[i] = bose_difference(w, thermal.object(), thermal.environment());
    out.bound[i] = area * planck_exchange(w, thermal);
    if (drive[i] == 0.0) return;
    const AlphaSample a = polarizability_on_grid(sphere, w, thermal, grid, options);
    const double k = pref * w * w * drive[i];
    out.flux_density[i] = k * a.value.imag();
    err_density[i] = std::abs(k) * a.error;
  });
  const QuadResult t = trapezoid_with_error(omega_grid, out.flux_density);
  out.total = t.value;
  out.total_error = t.error + trapezoid_samples(omega_grid, err_density);
  out.negative_regions = opposite_sign_runs(omega_grid, out.flux_density, drive);
  return out;
}

RadiationSpectrum sphere_radiation_transparent(const SphereSpec& sphere, const ThermalState& thermal,
                                               const std::vector<double>& omega_grid,
                                               const std::vector<double>& omega_prime_grid,
                                               const QuadratureSpec& quad) {
  thermal.validate();
  quad.validate();
  check_frequency_grid(omega_grid, "omega grid");
  check_frequency_grid(omega_prime_grid, "omega' grid");
  const MaterialModel& m = sphere.material;
  for (const auto* g : {&omega_grid, &omega_prime_grid})
    for (double w : *g)
      if (m.epsilon(w).imag() != 0.0)
        throw std::invalid_argument("transparent-sphere radiation needs real eps over the frequency range");

  RadiationSpectrum out;
  out.warnings = check_sphere(sphere, thermal, omega_grid).warnings;
  out.grid_omega = omega_grid;
  const double t_obj = thermal.object(), t_env = thermal.environment();
  const double r3 = sphere.radius * sphere.radius * sphere.radius;
  const double pref = -162.0 * Const::eps0 * r3 / (kPi * kPi * kPi * Const::c * Const::c);

  // Local-field weight 1/(eps + 2)^2 for real eps.
  const auto local = [&](double w) {
    const double e = m.epsilon(w).real() + 2.0;
    if (e == 0.0) throw PoleError("point-dipole resonance eps(w) = -2");
    return 1.0 / (e * e);
  };
  const auto res = m.chi3_resonance();
  const auto inner_breaks = resonance_breaks(omega_prime_grid.front(), omega_prime_grid.back(), res);
  QuadratureSpec inner_quad = quad;
  inner_quad.rel_tol = 0.1 * quad.rel_tol;

  double worst_inner = 0.0;
  const auto inner = [&](double w) {
    const auto g = [&](double wp) {
      return wp * m.chi3(w, wp).imag() * bose_difference(wp, t_obj, t_env) * local(wp);
    };
    double scale = 0.0;
    for (double p : omega_prime_grid) scale = std::max(scale, std::abs(g(p)));
    for (double p : inner_breaks) scale = std::max(scale, std::abs(g(p)));
    const QuadResult r = integrate_scaled(g, inner_breaks, scale, inner_quad);
    if (r.value != 0.0) worst_inner = std::max(worst_inner, r.error / std::abs(r.value));
    return r.value;
  };
  const auto outer = [&](double w) {
    const double db = bose_difference(w, t_obj, t_env);
    if (db == 0.0) return 0.0;
    return pref * w * w * db * local(w) * inner(w);
  };

  const std::size_t n = omega_grid.size();
  out.flux_density.resize(n);
  out.bound.resize(n);
  std::vector<double> drive(n);
  const double area = 4.0 * kPi * sphere.radius * sphere.radius;
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    out.flux_density[i] = outer(omega_grid[i]);
    out.bound[i] = area * planck_exchange(omega_grid[i], thermal);
    drive[i] = bose_difference(omega_grid[i], t_obj, t_env);
    scale = std::max(scale, std::abs(out.flux_density[i]));
  }
  const QuadResult total = integrate_scaled(outer, {omega_grid.front(), omega_grid.back()}, scale, quad);
  out.total = total.value;
  // The inner relative error carries over to the total when the integrand
  // keeps one sign, which holds for a chi3 of fixed phase.
  out.total_error = total.error + worst_inner * std::abs(total.value);
  out.negative_regions = opposite_sign_runs(omega_grid, out.flux_density, drive);
  return out;
}

double directional_emissivity(const std::vector<cdouble>& eps, const std::vector<double>& thickness,
                              double q) {
  double e = 0.0;
  for (auto pol : {Polarization::s, Polarization::p})
    e += 0.5 * (1.0 - std::norm(scaled_stack_amplitudes(eps, thickness, q, pol).reflection));
  return e;
}

namespace {

struct SlabLayers {
  std::vector<cdouble> eps;
  std::vector<double> thickness;  // scaled by k0
  double max_phase = 0.0;
  bool gain = false;
};

// vacuum | slices | bulk from samples (z_i, v_i).
SlabLayers build_layers(const std::vector<double>& z, const std::vector<cdouble>& v, double k0) {
  SlabLayers s;
  s.eps.push_back(1.0);
  s.thickness.push_back(kSemiInfinite);
  const auto add = [&](cdouble e, double dz) {
    s.eps.push_back(e);
    s.thickness.push_back(k0 * dz);
    s.max_phase = std::max(s.max_phase, std::abs(std::sqrt(e)) * k0 * dz);
    if (e.imag() < 0.0) s.gain = true;
  };
  add(v.front(), z.front());
  for (std::size_t i = 1; i < z.size(); ++i) add(0.5 * (v[i - 1] + v[i]), z[i] - z[i - 1]);
  s.eps.push_back(v.back());
  s.thickness.push_back(kSemiInfinite);
  return s;
}

QuadResult angular_average(const SlabLayers& s, const EmissivityOptions& options) {
  if (options.angular == AngularMode::normal) {
    QuadResult r;
    r.value = directional_emissivity(s.eps, s.thickness, 0.0);
    return r;
  }
  // Projected solid angle in theta: 2 sin cos dtheta = sin(2 theta) dtheta.
  return integrate_adaptive(
      [&](double th) { return directional_emissivity(s.eps, s.thickness, std::sin(th)) * std::sin(2.0 * th); },
      0.0, 0.5 * kPi, options.quad);
}

}  // namespace

Emissivity slab_emissivity(const EffectiveEpsilonProfile& profile, const EmissivityOptions& options) {
  const auto& z = profile.grid_z;
  const auto& v = profile.values;
  if (z.empty() || v.size() != z.size())
    throw std::invalid_argument("emissivity needs a depth profile with one value per depth");
  if (!(profile.omega > 0.0)) throw std::domain_error("profile omega must be > 0");
  for (std::size_t i = 0; i < z.size(); ++i)
    if (!(z[i] > 0.0) || (i > 0 && !(z[i] > z[i - 1])))
      throw std::invalid_argument("profile depths must be positive and increasing");
  if (!(v.back().imag() > 0.0))
    throw std::invalid_argument("semi-infinite bulk must absorb (Im eps > 0) for the emissivity to be defined");
  options.quad.validate();

  const double k0 = profile.omega / Const::c;
  Emissivity out;
  const SlabLayers fine = build_layers(z, v, k0);
  out.slices = static_cast<int>(fine.eps.size()) - 2;
  const QuadResult e = angular_average(fine, options);
  out.value = e.value;
  out.extrapolated = e.value;
  out.error = e.error;

  if (fine.max_phase > options.max_slice_phase)
    out.warnings.push_back("slice optical thickness " + format_g(fine.max_phase) + " rad exceeds " +
                           format_g(options.max_slice_phase) + " rad; refine the depth grid");
  if (fine.gain) out.warnings.push_back("profile has Im eps < 0 (gain) in some slices");

  const bool uniform = std::all_of(v.begin(), v.end(), [&](cdouble x) { return x == v.front(); });
  if (z.size() >= 3 && !uniform) {
    std::vector<double> zc;
    std::vector<cdouble> vc;
    for (std::size_t i = 0; i < z.size(); i += 2) {
      zc.push_back(z[i]);
      vc.push_back(v[i]);
    }
    if (zc.back() != z.back()) {
      zc.push_back(z.back());
      vc.push_back(v.back());
    }
    const QuadResult coarse = angular_average(build_layers(zc, vc, k0), options);
    const double delta = (e.value - coarse.value) / 3.0;
    out.extrapolated = e.value + delta;
    out.error += std::abs(delta);
  }
  return out;
}

RadiationSpectrum plate_radiation(const std::vector<double>& omega_grid, const std::vector<double>& emissivity,
                                  const ThermalState& thermal) {
  thermal.validate();
  check_frequency_grid(omega_grid, "omega grid");
  if (emissivity.size() != omega_grid.size())
    throw std::invalid_argument("one emissivity per frequency sample is required");
  RadiationSpectrum out;
  out.grid_omega = omega_grid;
  const std::size_t n = omega_grid.size();
  out.flux_density.resize(n);
  out.bound.resize(n);
  constexpr double slack = 1e-12;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = omega_grid[i], e = emissivity[i];
    out.bound[i] = planck_exchange(w, thermal);
    out.flux_density[i] = e * out.bound[i];
    if (e < -slack || e > 1.0 + slack)
      out.warnings.push_back("emissivity " + format_g(e) + " outside [0, 1] at w = " + format_g(w) + " rad/s");
    const double f = out.flux_density[i], b = out.bound[i];
    if (f * b < 0.0 || std::abs(f) > std::abs(b) * (1.0 + slack))
      out.warnings.push_back("flux outside the Planck bound at w = " + format_g(w) + " rad/s");
  }
  const QuadResult t = trapezoid_with_error(omega_grid, out.flux_density);
  out.total = t.value;
  out.total_error = t.error;
  out.negative_regions = opposite_sign_runs(omega_grid, out.flux_density, out.bound);
  return out;
}

RadiationSpectrum plate_radiation(const std::vector<EffectiveEpsilonProfile>& profiles,
                                  const ThermalState& thermal, const EmissivityOptions& options,
                                  std::vector<Emissivity>* emissivities) {
  std::vector<double> omega, e;
  std::vector<Emissivity> all;
  for (const auto& p : profiles) {
    all.push_back(slab_emissivity(p, options));
    omega.push_back(p.omega);
    e.push_back(all.back().value);
  }
  RadiationSpectrum out = plate_radiation(omega, e, thermal);
  for (const auto& em : all)
    for (const auto& wmsg : em.warnings)
      if (std::find(out.warnings.begin(), out.warnings.end(), wmsg) == out.warnings.end())
        out.warnings.push_back(wmsg);
  if (emissivities) *emissivities = std::move(all);
  return out;
}

}  // namespace nlfe
