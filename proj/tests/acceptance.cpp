// Acceptance report: one PASS/FAIL line per criterion, with the measured
// quantities. Exit status is nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "nlfe/constants.hpp"
#include "nlfe/effective_epsilon.hpp"
#include "nlfe/greens_planar.hpp"
#include "nlfe/radiation.hpp"
#include "nlfe/thermal.hpp"
#include "support/trace_oracle.hpp"

using namespace nlfe;

namespace {

constexpr double kPi = Const::pi;

struct Outcome {
  bool pass;
  std::string detail;
};

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
  return v;
}

double omega_of(double lambda) { return 2.0 * kPi * Const::c / lambda; }

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------------------

Outcome analytic_limits() {
  const auto t0 = std::chrono::steady_clock::now();
  const double w = omega_of(600e-9);
  double worst = 0.0;
  for (double eps : {1.0, 2.25, 4.0, 9.0}) {
    const auto r = img_trace_bulk({eps, 0.0}, w);
    const double ref = std::sqrt(eps) * w / (2.0 * kPi * Const::c);
    worst = std::max(worst, std::abs(r->value - ref) / ref);
  }
  const double t = seconds_since(t0);
  return {worst <= 1e-6 && t < 10.0, "worst relative error " + fmt("%.2e", worst) + ", " + fmt("%.2f s", t)};
}

double normalized_kernel(const SpectralKernel& k, std::size_t i, double w) {
  return figure_normalization(k.values[i].real(), w);
}

Outcome single_plate_figure() {
  const auto t0 = std::chrono::steady_clock::now();
  const double lambda = 600e-9, w = omega_of(lambda), step = 0.005;
  PlateKernelRequest req;
  req.plate = MaterialModel::constant(4.0);
  req.thermal = ThermalState::single(300.0, 300.0);
  const double bulk = 2.0 / (2.0 * kPi);

  const auto zs = linspace(0.2 * lambda, 3.0 * lambda, 561);
  const auto k = sample_plate_kernel(req, zs, {w});
  std::vector<double> up;
  for (std::size_t i = 1; i < zs.size(); ++i) {
    const double a = normalized_kernel(k, i - 1, w) - bulk, b = normalized_kernel(k, i, w) - bulk;
    if (a < 0.0 && b >= 0.0) up.push_back((zs[i - 1] + (zs[i] - zs[i - 1]) * a / (a - b)) / lambda);
  }
  const double period = up.size() > 1 ? (up.back() - up.front()) / (up.size() - 1) : 0.0;

  const auto deep = linspace(3.0 * lambda, 6.0 * lambda, 601);
  const auto kd = sample_plate_kernel(req, deep, {w});
  double envelope = 0.0;
  for (std::size_t i = 0; i < deep.size(); ++i)
    envelope = std::max(envelope, std::abs(normalized_kernel(kd, i, w) - bulk) / bulk);
  const double t = seconds_since(t0);
  const bool ok = std::abs(period - 0.25) <= step && envelope < 0.05 && t < 120.0;
  return {ok, "period " + fmt("%.5f", period) + " lambda0 (grid step " + fmt("%.3f", step) +
                  "), envelope beyond 3 lambda0 " + fmt("%.3f", 100.0 * envelope) + " % of bulk, " +
                  fmt("%.1f s", t)};
}

Outcome double_plate_figures() {
  const double lambda = 600e-9, w = omega_of(lambda), k0 = w / Const::c;

  // Far-separated plates: the difference kernel against 1e-6 of the bulk kernel.
  double worst_ratio = 0.0;
  for (cdouble eps : {cdouble(4.0, 0.0), cdouble(4.0, 1.0)}) {
    const double bulk = std::abs(std::sqrt(eps)) / (2.0 * kPi);
    for (double zl : linspace(0.005, 3.0, 120)) {
      const auto r = img_trace_double_delta(MaterialModel::constant(eps), 1e3 * lambda, zl * lambda, w);
      worst_ratio = std::max(worst_ratio, std::abs(r.scaled) / bulk);
    }
  }
  const bool far_ok = worst_ratio <= 1e-6;

  // Lossy plates at fixed separation: decay of the oscillation envelope.
  const cdouble eps(4.0, 1.0);
  const double delta = 1.0 / (k0 * std::sqrt(eps).imag());
  const auto zs = linspace(0.05 * lambda, 3.0 * lambda, 1181);
  std::vector<double> mag(zs.size());
  for (std::size_t i = 0; i < zs.size(); ++i)
    mag[i] = std::abs(img_trace_double_delta(MaterialModel::constant(eps), lambda, zs[i], w).scaled);
  std::vector<double> xs, ys;
  for (std::size_t i = 1; i + 1 < zs.size(); ++i)
    if (mag[i] > mag[i - 1] && mag[i] >= mag[i + 1]) {
      xs.push_back(zs[i]);
      ys.push_back(std::log(mag[i]));
    }
  double rate = 0.0;
  if (xs.size() >= 3) {
    const double n = xs.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sx += xs[i];
      sy += ys[i];
      sxx += xs[i] * xs[i];
      sxy += xs[i] * ys[i];
    }
    rate = -(n * sxy - sx * sy) / (n * sxx - sx * sx);
  }
  const double expected = 2.0 / delta;
  const double rate_error = std::abs(rate / expected - 1.0);
  const bool decay_ok = rate_error < 0.2;
  return {far_ok && decay_ok,
          "d = 1e3 lambda0: max |difference| / bulk = " + fmt("%.2e", worst_ratio) + " (limit 1e-6, " +
              (far_ok ? "met" : "not met") + "); eps = 4+i envelope decay rate " + fmt("%.4f", rate / expected) +
              " x 2/delta (" + std::to_string(xs.size()) + " maxima, " + (decay_ok ? "within" : "outside") +
              " 20 %)"};
}

Outcome nonequilibrium_plate_figure() {
  const double lambda = 50e-6, w = omega_of(lambda), k0 = w / Const::c;
  const double t_obj = 287.0;
  const cdouble eps(4.0, 1.0);
  const auto lossy = PlanarStack::single_plate(MaterialModel::constant(eps));
  const auto zs = linspace(lambda / 1000.0, 3.0 * lambda, 61);

  bool zero = true, negated = true;
  for (double z : zs) {
    zero = zero && kernel_neq_plate(lossy, z, w, t_obj, t_obj).value == 0.0;
    const double a = kernel_neq_plate(lossy, z, w, t_obj, 100.0).value;
    const double b = kernel_neq_plate(lossy, z, w, 100.0, t_obj).value;
    negated = negated && std::abs(a + b) <= 1e-15 * std::abs(a);
  }
  const double delta = 1.0 / (k0 * std::sqrt(eps).imag());
  const double surface = kernel_neq_plate(lossy, lambda / 1000.0, w, t_obj, 0.0).value;
  const double deep = kernel_neq_plate(lossy, 5.0 * delta, w, t_obj, 0.0).value;
  const double ratio = std::abs(deep / surface);

  const auto clear = PlanarStack::single_plate(MaterialModel::constant(4.0));
  double lo = INFINITY, hi = -INFINITY;
  for (double z : zs) {
    const double v = kernel_neq_plate(clear, z, w, t_obj, 0.0).value;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double variation = (hi - lo) / std::abs(0.5 * (hi + lo));
  const bool ok = zero && negated && ratio < 0.01 && variation < 1e-3;
  return {ok, std::string("zero at T_env = T_obj: ") + (zero ? "yes" : "no") + ", swap negates: " +
                  (negated ? "yes" : "no") + ", |K(5 delta)/K(surface)| = " + fmt("%.2e", ratio) +
                  ", lossless variation " + fmt("%.2e", variation)};
}

// Real eps with a chi3 resonance of negative imaginary part.
SphereSpec transparent_sphere(double chi_scale) {
  const double wt = Const::k_B * 300.0 / Const::hbar;
  const LorentzianChi3 chi{2.0 * wt, 0.1 * wt, {2e-19 * chi_scale, -1e-18 * chi_scale}};
  return {10e-9, MaterialModel(ConstantPermittivity{{2.0, 0.0}}, chi)};
}

struct SphereGrids {
  std::vector<double> omega, omega_prime;
  SphereOptions options;
};

SphereGrids sphere_grids() {
  const double wt = Const::k_B * 300.0 / Const::hbar;
  SphereGrids g{linspace(0.01 * wt, 40.0 * wt, 4001), default_omega_prime_grid(400.0, 40), {}};
  g.options.profile.resonance_resolution = 96;
  return g;
}

Outcome sphere_radiation_paths() {
  const SphereGrids g = sphere_grids();
  const SphereSpec s = transparent_sphere(1.0);
  bool agree = true, positive = true, swap = true;
  double worst_agree = 0.0, worst_swap = 0.0;
  for (auto [a, b] : {std::pair{300.0, 0.0}, std::pair{0.0, 300.0}, std::pair{400.0, 300.0}}) {
    const auto th = ThermalState::single(a, b), sw = ThermalState::single(b, a);
    const auto hp = sphere_radiation(s, th, g.omega, g.omega_prime, g.options);
    const auto hd = sphere_radiation_transparent(s, th, g.omega, g.omega_prime);
    const double ratio = std::abs(hp.total - hd.total) / (2.0 * (hp.total_error + hd.total_error));
    worst_agree = std::max(worst_agree, ratio);
    agree = agree && ratio <= 1.0;
    positive = positive && hp.total > 0.0 && hd.total > 0.0;
    const auto sp = sphere_radiation(s, sw, g.omega, g.omega_prime, g.options);
    const auto sd = sphere_radiation_transparent(s, sw, g.omega, g.omega_prime);
    const double rel =
        std::max(std::abs(sp.total - hp.total) / std::abs(hp.total), std::abs(sd.total - hd.total) / std::abs(hd.total));
    worst_swap = std::max(worst_swap, rel);
    swap = swap && rel <= 1e-12;
  }
  return {agree && positive && swap, "(a) worst |dH| / 2(err_a + err_b) = " + fmt("%.3f", worst_agree) +
                                         ", (b) worst swap change " + fmt("%.1e", worst_swap) + ", (c) H > 0: " +
                                         (positive ? "yes" : "no")};
}

Outcome planck_bound() {
  std::mt19937 rng(4242);
  std::uniform_real_distribution<double> re(-5.0, 12.0), im(0.0, 4.0), u(0.0, 1.0);
  const double wt = Const::k_B * 300.0 / Const::hbar;
  int samples = 0, violations = 0;
  for (int c = 0; c < 50; ++c) {
    EffectiveEpsilonProfile p;
    const int n = 3 + static_cast<int>(30 * u(rng));
    p.grid_z = linspace(0.01e-6, 0.5e-6 + 4e-6 * u(rng), n);
    for (int i = 0; i < n; ++i) p.values.push_back({re(rng), im(rng)});
    p.values.back() += cdouble(0.0, 0.05);
    p.base_epsilon = p.values.back();
    p.shifts.assign(n, cdouble{});
    const int m = 2 + static_cast<int>(20 * u(rng));
    std::vector<double> omegas;
    for (int i = 0; i < m; ++i) omegas.push_back(wt * (0.05 + 10.0 * u(rng)));
    std::sort(omegas.begin(), omegas.end());
    omegas.erase(std::unique(omegas.begin(), omegas.end()), omegas.end());
    std::vector<EffectiveEpsilonProfile> per;
    for (double w : omegas) {
      per.push_back(p);
      per.back().omega = w;
    }
    const double t_env = 400.0 * u(rng);
    const double t_obj = t_env + 1.0 + 400.0 * u(rng);
    std::vector<Emissivity> em;
    const auto h = plate_radiation(per, ThermalState::single(t_obj, t_env), {}, &em);
    for (std::size_t i = 0; i < omegas.size(); ++i) {
      ++samples;
      const bool ok = h.flux_density[i] >= 0.0 && h.flux_density[i] <= h.bound[i] && em[i].value >= 0.0 &&
                      em[i].value <= 1.0;
      if (!ok) ++violations;
    }
  }
  const auto grid = linspace(0.02 * wt, 30.0 * wt, 500);
  const auto bb = plate_radiation(grid, std::vector<double>(grid.size(), 1.0), ThermalState::single(300.0, 20.0));
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    worst = std::max(worst, std::abs(bb.flux_density[i] - bb.bound[i]) / std::abs(bb.bound[i]));
  return {violations == 0 && worst <= 1e-8, std::to_string(samples) + " samples over 50 profiles, " +
                                                std::to_string(violations) + " outside bounds; blackbody deviation " +
                                                fmt("%.1e", worst)};
}

Outcome first_order_linearity() {
  const double lambda = 50e-6, w0 = omega_of(lambda);
  const double t_obj = Const::hbar * w0 / Const::k_B;
  const auto thermal = ThermalState::single(t_obj, 0.5 * t_obj);
  int checked = 0, exact = 0;
  const auto compare = [&](const std::vector<cdouble>& one, const std::vector<cdouble>& two) {
    for (std::size_t i = 0; i < one.size(); ++i) {
      ++checked;
      if (two[i] == 2.0 * one[i]) ++exact;
    }
  };
  const auto lossy = [&](double f) {
    return MaterialModel(ConstantPermittivity{{4.0, 1.0}}, LorentzianChi3{w0, 0.05 * w0, {1e-9 * f, -4e-9 * f}});
  };
  const auto grid = linspace(0.6 * w0, 1.4 * w0, 41);
  const auto zs = linspace(lambda / 200.0, 2.0 * lambda, 15);
  ProfileOptions opt;
  opt.quad.rel_tol = 1e-8;
  compare(effective_epsilon_profile(lossy(1), PlateGeometry{zs}, w0, grid, thermal, opt).shifts,
          effective_epsilon_profile(lossy(2), PlateGeometry{zs}, w0, grid, thermal, opt).shifts);
  const auto eq = ThermalState::single(t_obj, t_obj);
  compare(effective_epsilon_profile(lossy(1), PlatePairGeometry{lambda, zs}, w0, grid, eq, opt).shifts,
          effective_epsilon_profile(lossy(2), PlatePairGeometry{lambda, zs}, w0, grid, eq, opt).shifts);
  compare(effective_epsilon_profile(lossy(1), SphereGeometry{}, w0, grid, thermal, opt).shifts,
          effective_epsilon_profile(lossy(2), SphereGeometry{}, w0, grid, thermal, opt).shifts);

  const SphereGrids g = sphere_grids();
  const auto th = ThermalState::single(400.0, 300.0);
  const auto a1 = sphere_radiation(transparent_sphere(1), th, g.omega, g.omega_prime, g.options);
  const auto a2 = sphere_radiation(transparent_sphere(2), th, g.omega, g.omega_prime, g.options);
  for (std::size_t i = 0; i < a1.flux_density.size(); ++i) {
    ++checked;
    if (a2.flux_density[i] == 2.0 * a1.flux_density[i]) ++exact;
  }
  const auto d1 = sphere_radiation_transparent(transparent_sphere(1), th, g.omega, g.omega_prime);
  const auto d2 = sphere_radiation_transparent(transparent_sphere(2), th, g.omega, g.omega_prime);
  checked += 2;
  exact += (a2.total == 2.0 * a1.total) + (d2.total == 2.0 * d1.total);
  for (double w : {0.5 * w0, w0, 2.0 * w0}) {
    const double i1 = effective_polarizability(transparent_sphere(1), w, th, g.omega_prime, g.options).value.imag();
    const double i2 = effective_polarizability(transparent_sphere(2), w, th, g.omega_prime, g.options).value.imag();
    ++checked;
    exact += i2 == 2.0 * i1;
  }
  return {checked == exact, std::to_string(exact) + " of " + std::to_string(checked) +
                                " chi3-dependent outputs exactly doubled"};
}

Outcome quadrature_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  const double lambda = 600e-9, w = omega_of(lambda), k0 = w / Const::c;
  std::mt19937 rng(8128);
  std::uniform_real_distribution<double> re(1.2, 9.0), im(0.0, 2.0), depth(0.02, 2.0), gap(0.1, 2.0);
  QuadratureSpec quad;
  quad.abs_tol = 1e-30;  // tolerance purely relative
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const cdouble eps(re(rng), i % 3 == 0 ? 0.0 : im(rng));
    const double zl = depth(rng);
    double got = 0.0, ref = 0.0;
    if (i % 2 == 0) {
      const auto plate = PlanarStack::single_plate(MaterialModel::constant(eps));
      got = img_trace_scattered(plate, zl * lambda, w, quad).scaled;
      ref = oracle::scattered_trace({1.0, eps}, {kSemiInfinite, kSemiInfinite}, zl * lambda * k0, 100000);
    } else {
      const double dl = gap(rng);
      got = img_trace_double_delta(MaterialModel::constant(eps), dl * lambda, zl * lambda, w, quad).scaled;
      ref = oracle::double_delta_trace(eps, dl * lambda * k0, zl * lambda * k0, 100000);
    }
    worst = std::max(worst, std::abs(got - ref) / (std::abs(ref) * quad.rel_tol));
  }
  const double t = seconds_since(t0);
  return {worst <= 5.0 && t < 300.0,
          "worst |adaptive - oracle| = " + fmt("%.2f", worst) + " x rel_tol over 20 cases, " + fmt("%.1f s", t)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"1 analytic Green's-function limits", analytic_limits},
      {"2 single lossless plate figure", single_plate_figure},
      {"3 double-plate figures", double_plate_figures},
      {"4 nonequilibrium plate figure", nonequilibrium_plate_figure},
      {"5 sphere radiation", sphere_radiation_paths},
      {"6 Planck bound", planck_bound},
      {"7 first-order linearity", first_order_linearity},
      {"8 quadrature-oracle equivalence", quadrature_oracle},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s criterion %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
