#include "nlfe/effective_epsilon.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "nlfe/constants.hpp"
#include "nlfe/errors.hpp"
#include "nlfe/parallel.hpp"

namespace nlfe {

namespace {

constexpr double kPi = std::numbers::pi;

void check_depth(double z, double omega_prime) {
  if (!(z > 0.0)) throw std::domain_error("depth z must be > 0");
  if (!(omega_prime > 0.0)) throw std::domain_error("omega' must be > 0");
}

void check_grid(const std::vector<double>& grid) {
  if (grid.size() < 2) throw std::invalid_argument("omega' grid needs at least two nodes");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || !std::isfinite(grid[i]))
      throw std::invalid_argument("omega' grid must be positive and finite");
    if (i > 0 && !(grid[i] > grid[i - 1]))
      throw std::invalid_argument("omega' grid must be strictly increasing");
  }
}

// 3 b times a scaled trace (with its error), converted to SI via w'/c.
KernelValue scale_trace(double weight, const TraceResult& t, double omega_prime,
                        Regularization reg) {
  const double k0 = omega_prime / Const::c;
  KernelValue out;
  out.value = 3.0 * weight * t.scaled * k0;
  out.error = std::abs(3.0 * weight * k0) * t.error;
  out.regularization = reg;
  out.clamped = t.clamped;
  return out;
}

}  // namespace

const char* to_string(KernelGeometry g) {
  switch (g) {
    case KernelGeometry::single_plate: return "single_plate";
    case KernelGeometry::double_plate_delta: return "double_plate_delta";
    case KernelGeometry::neq_plate: return "neq_plate";
    case KernelGeometry::neq_sphere: return "neq_sphere";
  }
  return "?";
}

const char* to_string(Regularization r) {
  switch (r) {
    case Regularization::raw_lossless: return "raw_lossless";
    case Regularization::bulk_subtracted: return "bulk_subtracted";
    case Regularization::difference: return "difference";
    case Regularization::dust: return "dust";
  }
  return "?";
}

KernelValue kernel_eq_single_plate(const MaterialModel& plate, double z, double omega_prime,
                                   double temperature, const QuadratureSpec& quad,
                                   TraceMode mode) {
  check_depth(z, omega_prime);
  const double b = bose_factor(omega_prime, temperature);
  const cdouble eps = plate.epsilon(omega_prime);
  const bool absorbing = eps.imag() > 0.0;
  if (mode == TraceMode::raw && absorbing)
    throw DivergentError("coincident trace diverges inside an absorbing plate; request bulk subtraction");
  const auto stack = PlanarStack::single_plate(plate);
  const TraceResult scattered = img_trace_scattered(stack, z, omega_prime, quad);
  if (mode == TraceMode::bulk_subtracted || absorbing)
    return scale_trace(b, scattered, omega_prime, Regularization::bulk_subtracted);

  const auto bulk = img_trace_bulk(eps, omega_prime, quad);
  if (!bulk) throw DivergentError("bulk trace diverges");
  TraceResult total = scattered;
  total.scaled += bulk->scaled;
  total.error += bulk->error;
  return scale_trace(b, total, omega_prime, Regularization::raw_lossless);
}

KernelValue kernel_eq_double_delta(const MaterialModel& plate, double gap, double z,
                                   double omega_prime, double temperature,
                                   const QuadratureSpec& quad) {
  check_depth(z, omega_prime);
  const double b = bose_factor(omega_prime, temperature);
  const TraceResult t = img_trace_double_delta(plate, gap, z, omega_prime, quad);
  return scale_trace(b, t, omega_prime, Regularization::difference);
}

KernelValue kernel_neq_plate(const PlanarStack& stack, double z, double omega_prime,
                             double t_obj, double t_env, const QuadratureSpec& quad) {
  check_depth(z, omega_prime);
  const double db = bose_difference(omega_prime, t_env, t_obj);
  KernelValue out;
  out.regularization = Regularization::dust;
  if (db == 0.0) return out;
  return scale_trace(db, dust_kernel(stack, z, omega_prime, quad), omega_prime,
                     Regularization::dust);
}

cdouble kernel_neq_sphere(const MaterialModel& material, double omega, double omega_prime,
                          double t_obj, double t_env) {
  if (!(omega > 0.0) || !(omega_prime > 0.0)) throw std::domain_error("frequencies must be > 0");
  const cdouble eps = material.epsilon(omega_prime);
  if (eps + 2.0 == cdouble{}) throw PoleError("point-dipole resonance eps(w') = -2");
  const double db = bose_difference(omega_prime, t_obj, t_env);
  if (db == 0.0) return {};
  const double local = std::norm(3.0 / (eps + 2.0));
  return -(3.0 / (2.0 * kPi)) * (omega_prime / Const::c) * material.chi3(omega, omega_prime) *
         local * db;
}

std::optional<Regularization> SpectralKernel::uniform_regularization() const {
  if (regularization.empty()) return std::nullopt;
  for (auto r : regularization)
    if (r != regularization.front()) return std::nullopt;
  return regularization.front();
}

SpectralKernel sample_plate_kernel(const PlateKernelRequest& request,
                                   const std::vector<double>& grid_z,
                                   const std::vector<double>& grid_omega_prime,
                                   const QuadratureSpec& quad, unsigned threads) {
  request.thermal.validate();
  if (request.geometry == KernelGeometry::neq_sphere)
    throw std::invalid_argument("sphere kernels have no depth grid");
  SpectralKernel k;
  k.geometry = request.geometry;
  k.grid_z = grid_z;
  k.grid_omega_prime = grid_omega_prime;
  const std::size_t nw = grid_omega_prime.size();
  const std::size_t n = grid_z.size() * nw;
  k.values.assign(n, cdouble{});
  k.errors.assign(n, 0.0);
  k.regularization.assign(n, Regularization::raw_lossless);
  const auto stack = PlanarStack::single_plate(request.plate);
  const double t_obj = request.thermal.object();
  const double t_env = request.thermal.environment();

  parallel_for(n, threads, [&](std::size_t i) {
    const double z = grid_z[i / nw];
    const double w = grid_omega_prime[i % nw];
    KernelValue v;
    switch (request.geometry) {
      case KernelGeometry::single_plate:
        v = kernel_eq_single_plate(request.plate, z, w, t_obj, quad, request.mode);
        break;
      case KernelGeometry::double_plate_delta:
        v = kernel_eq_double_delta(request.plate, request.gap, z, w, t_obj, quad);
        break;
      case KernelGeometry::neq_plate:
        v = kernel_neq_plate(stack, z, w, t_obj, t_env, quad);
        break;
      case KernelGeometry::neq_sphere:
        break;
    }
    k.values[i] = v.value;
    k.errors[i] = v.error;
    k.regularization[i] = v.regularization;
  });
  return k;
}

double figure_normalization(double kernel_value, double omega_prime) {
  return kernel_value / (3.0 * bose_prefactor(omega_prime) * omega_prime / Const::c);
}

std::vector<double> default_omega_prime_grid(double t_max, int points_per_decade) {
  if (!(t_max > 0.0))
    throw std::invalid_argument("default omega' grid needs a positive temperature scale");
  if (points_per_decade < 1) throw std::invalid_argument("points_per_decade must be >= 1");
  const double scale = Const::k_B * t_max / Const::hbar;
  const int n = 6 * points_per_decade + 1;
  std::vector<double> grid(n);
  for (int i = 0; i < n; ++i)
    grid[i] = scale * std::pow(10.0, -3.0 + 6.0 * i / (n - 1));
  return grid;
}

std::vector<double> refine_for_resonance(const std::vector<double>& grid,
                                         const Resonance& res, int resolution) {
  check_grid(grid);
  if (!(res.width > 0.0)) throw std::invalid_argument("resonance width must be > 0");
  if (resolution < 1) throw std::invalid_argument("resolution must be >= 1");
  const double lo = grid.front(), hi = grid.back();
  // Local base spacing at x, interpolated between neighbouring intervals.
  const auto base_step = [&](double x) {
    const auto it = std::upper_bound(grid.begin(), grid.end(), x);
    if (it == grid.begin()) return grid[1] - grid[0];
    if (it == grid.end()) return grid[grid.size() - 1] - grid[grid.size() - 2];
    return *it - *(it - 1);
  };
  std::vector<double> extra;
  for (int side : {-1, 1}) {
    double offset = 0.0;
    for (;;) {
      const double x = res.center + side * offset;
      if (x <= lo || x >= hi) break;
      extra.push_back(x);
      const double step = (offset + res.width) / resolution;
      if (step >= base_step(x)) break;
      offset += step;
    }
  }
  if (extra.empty()) return grid;
  const double inner_lo = *std::min_element(extra.begin(), extra.end());
  const double inner_hi = *std::max_element(extra.begin(), extra.end());
  std::vector<double> out;
  for (double x : grid)
    if (x < inner_lo || x > inner_hi) out.push_back(x);
  out.insert(out.end(), extra.begin(), extra.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ComplexIntegral integrate_samples(const std::vector<double>& x, const std::vector<cdouble>& y) {
  std::vector<double> re(y.size()), im(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    re[i] = y[i].real();
    im[i] = y[i].imag();
  }
  const QuadResult a = trapezoid_with_error(x, re);
  const QuadResult b = trapezoid_with_error(x, im);
  return {{a.value, b.value}, std::hypot(a.error, b.error)};
}

ComplexIntegral integrate_sphere_kernel(const MaterialModel& material, double omega,
                                        const std::vector<double>& omega_prime_grid,
                                        double t_obj, double t_env) {
  check_grid(omega_prime_grid);
  std::vector<cdouble> y(omega_prime_grid.size());
  for (std::size_t i = 0; i < y.size(); ++i)
    y[i] = kernel_neq_sphere(material, omega, omega_prime_grid[i], t_obj, t_env);
  return integrate_samples(omega_prime_grid, y);
}

ComplexIntegral sphere_epsilon_shift(const MaterialModel& material, const SphereGeometry& geometry,
                                     double omega, const std::vector<double>& grid,
                                     const ThermalState& thermal, const ProfileOptions& options) {
  check_grid(grid);
  const double t_obj = thermal.object(), t_env = thermal.environment();
  std::vector<cdouble> y(grid.size());
  for (std::size_t iw = 0; iw < grid.size(); ++iw) {
    const double w = grid[iw];
    cdouble n = 0.0;
    if (options.include_equilibrium && geometry.equilibrium == SphereEquilibrium::bulk_lossless) {
      const cdouble eps = material.epsilon(w);
      if (eps.imag() > 0.0)
        throw DivergentError("bulk equilibrium kernel diverges inside an absorbing sphere");
      n += 3.0 * material.chi3(omega, w) * bose_factor(w, t_obj) * std::sqrt(eps.real()) * w /
           (2.0 * kPi * Const::c);
    }
    if (options.include_nonequilibrium) n += kernel_neq_sphere(material, omega, w, t_obj, t_env);
    y[iw] = n;
  }
  return integrate_samples(grid, y);
}

namespace {

struct ProfileContext {
  const MaterialModel& material;
  double omega;
  const std::vector<double>& grid;
  const ThermalState& thermal;
  const ProfileOptions& options;
};

// Equilibrium trace mode for a plate over the whole w' grid: subtracted if
// the plate absorbs anywhere on it, so one integral never mixes tags.
TraceMode plate_mode(const MaterialModel& m, const std::vector<double>& grid) {
  for (double w : grid)
    if (m.epsilon(w).imag() > 0.0) return TraceMode::bulk_subtracted;
  return TraceMode::raw;
}

void run_plate(const ProfileContext& c, const PlateGeometry& g, EffectiveEpsilonProfile& out) {
  const std::size_t nz = g.grid_z.size(), nw = c.grid.size();
  const auto stack = PlanarStack::single_plate(c.material);
  const double t_obj = c.thermal.object(), t_env = c.thermal.environment();
  const TraceMode mode = plate_mode(c.material, c.grid);
  if (c.options.include_equilibrium)
    out.equilibrium_regularization =
        mode == TraceMode::raw ? Regularization::raw_lossless : Regularization::bulk_subtracted;
  out.values.assign(nz, out.base_epsilon);
  out.shifts.assign(nz, cdouble{});
  out.errors.assign(nz, 0.0);
  parallel_for(nz, c.options.threads, [&](std::size_t iz) {
    const double z = g.grid_z[iz];
    std::vector<cdouble> y(nw);
    for (std::size_t iw = 0; iw < nw; ++iw) {
      const double w = c.grid[iw];
      const cdouble chi = c.material.chi3(c.omega, w);
      if (chi == cdouble{}) continue;
      double n = 0.0;
      if (c.options.include_equilibrium)
        n += kernel_eq_single_plate(c.material, z, w, t_obj, c.options.quad, mode).value;
      if (c.options.include_nonequilibrium)
        n += kernel_neq_plate(stack, z, w, t_obj, t_env, c.options.quad).value;
      y[iw] = chi * n;
    }
    const ComplexIntegral r = integrate_samples(c.grid, y);
    out.values[iz] = out.base_epsilon + r.value;
    out.shifts[iz] = r.value;
    out.errors[iz] = r.error;
  });
}

void run_pair(const ProfileContext& c, const PlatePairGeometry& g, EffectiveEpsilonProfile& out) {
  if (c.options.include_nonequilibrium && !c.thermal.all_equal())
    throw std::invalid_argument(
        "two-plate profiles support equal temperatures only (no cross-plate nonequilibrium kernel)");
  const std::size_t nz = g.grid_z.size(), nw = c.grid.size();
  const double t = c.thermal.object();
  if (c.options.include_equilibrium) out.equilibrium_regularization = Regularization::difference;
  out.values.assign(nz, out.base_epsilon);
  out.shifts.assign(nz, cdouble{});
  out.errors.assign(nz, 0.0);
  if (!c.options.include_equilibrium) return;
  parallel_for(nz, c.options.threads, [&](std::size_t iz) {
    std::vector<cdouble> y(nw);
    for (std::size_t iw = 0; iw < nw; ++iw) {
      const double w = c.grid[iw];
      const cdouble chi = c.material.chi3(c.omega, w);
      if (chi == cdouble{}) continue;
      y[iw] = chi * kernel_eq_double_delta(c.material, g.gap, g.grid_z[iz], w, t, c.options.quad).value;
    }
    const ComplexIntegral r = integrate_samples(c.grid, y);
    out.values[iz] = out.base_epsilon + r.value;
    out.shifts[iz] = r.value;
    out.errors[iz] = r.error;
  });
}

void run_sphere(const ProfileContext& c, const SphereGeometry& g, EffectiveEpsilonProfile& out) {
  if (c.options.include_equilibrium && g.equilibrium != SphereEquilibrium::none)
    out.equilibrium_regularization = Regularization::raw_lossless;
  const ComplexIntegral r = sphere_epsilon_shift(c.material, g, c.omega, c.grid, c.thermal, c.options);
  out.values = {out.base_epsilon + r.value};
  out.shifts = {r.value};
  out.errors = {r.error};
}

}  // namespace

EffectiveEpsilonProfile effective_epsilon_profile(const MaterialModel& material,
                                                  const ProfileGeometry& geometry, double omega,
                                                  const std::vector<double>& omega_prime_grid,
                                                  const ThermalState& thermal,
                                                  const ProfileOptions& options) {
  if (!(omega > 0.0)) throw std::domain_error("omega must be > 0");
  thermal.validate();
  check_grid(omega_prime_grid);
  options.quad.validate();

  EffectiveEpsilonProfile out;
  out.omega = omega;
  out.base_epsilon = material.epsilon(omega);
  out.omega_prime_grid = omega_prime_grid;
  if (const auto res = material.chi3_resonance())
    out.omega_prime_grid = refine_for_resonance(omega_prime_grid, *res, options.resonance_resolution);

  const ProfileContext ctx{material, omega, out.omega_prime_grid, thermal, options};
  if (const auto* p = std::get_if<PlateGeometry>(&geometry)) {
    out.grid_z = p->grid_z;
    if (material.is_linear()) {
      out.values.assign(p->grid_z.size(), out.base_epsilon);
      out.shifts.assign(p->grid_z.size(), cdouble{});
      out.errors.assign(p->grid_z.size(), 0.0);
      return out;
    }
    run_plate(ctx, *p, out);
  } else if (const auto* pp = std::get_if<PlatePairGeometry>(&geometry)) {
    out.grid_z = pp->grid_z;
    run_pair(ctx, *pp, out);
  } else {
    run_sphere(ctx, std::get<SphereGeometry>(geometry), out);
  }
  return out;
}

}  // namespace nlfe
