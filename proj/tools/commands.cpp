#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>

#include "nlfe/constants.hpp"
#include "nlfe/effective_epsilon.hpp"
#include "nlfe/errors.hpp"
#include "nlfe/greens_planar.hpp"
#include "nlfe/parallel.hpp"
#include "nlfe/planar_stack.hpp"
#include "nlfe/radiation.hpp"
#include "nlfe/thermal.hpp"

#ifndef NLFE_VERSION
#define NLFE_VERSION "unknown"
#endif

namespace nlfe::cli {

namespace {

constexpr double kPi = Const::pi;

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = i == n - 1 ? b : a + (b - a) * i / (n - 1);
  return v;
}

/// Metadata block: results first, then the config echo after "config:".
void add_header(CsvTable& t, const RunConfig& c, const std::vector<std::string>& results) {
  t.add_metadata(std::string("nlfe ") + NLFE_VERSION);
  t.add_metadata(std::string("command: ") + command_name(c.command));
  for (const auto& r : results) t.add_metadata(r);
  t.add_metadata("config:");
  for (const auto& l : c.echo()) t.add_metadata(l);
}

std::string regularization_label(const SpectralKernel& k) {
  const auto r = k.uniform_regularization();
  return r ? to_string(*r) : "mixed";
}

int clamped_count(const MaterialModel& m, const std::vector<double>& z, double omega_prime) {
  if (m.epsilon(omega_prime).imag() <= 0.0) return 0;
  const double zmin = minimum_depth(omega_prime);
  return static_cast<int>(std::count_if(z.begin(), z.end(), [&](double v) { return v < zmin; }));
}

std::string file_in(const RunConfig& c, const std::string& name) {
  return (std::filesystem::path(c.out_dir) / name).string();
}

ThermalState thermal_of(const RunConfig& c, double t_env) { return ThermalState::single(c.t_obj, t_env); }

void require_object_temperature(const RunConfig& c) {
  if (!(c.t_obj > 0.0)) throw ConfigError("thermal.t_obj must be > 0 to form T_env/T_obj", "thermal.t_obj");
}

SphereOptions sphere_options(const RunConfig& c) {
  SphereOptions o;
  o.equilibrium = c.sphere_equilibrium;
  o.profile.quad = c.quad;
  o.profile.resonance_resolution = c.resonance_resolution;
  o.profile.threads = c.threads;
  return o;
}

double max_temperature(const RunConfig& c) {
  double t = std::max(c.t_obj, c.t_env);
  for (double v : c.t_env_list) t = std::max(t, v);
  return t;
}

std::string region_text(const SignRegion& r) {
  return format_number(r.omega_from) + " .. " + format_number(r.omega_to) + " rad/s";
}

// ---------------------------------------------------------------------------
// figures

NamedTable equilibrium_curve(const RunConfig& c, const PlateKernelRequest& req, const std::string& file,
                             const std::vector<std::string>& extra) {
  const double wp = c.omega_prime();
  const auto grid_z = linspace(c.z_min, c.z_max, c.z_points);
  const auto k = sample_plate_kernel(req, grid_z, {wp}, c.quad, c.threads);
  const cdouble chi = req.plate.chi3(wp, wp);
  CsvTable t({"z_over_lambda0[1]", "re_kernel[1]", "im_kernel[1]"});
  double max_err = 0.0;
  for (std::size_t i = 0; i < grid_z.size(); ++i) {
    const cdouble v = figure_normalization(k.values[i].real(), wp) * chi;
    max_err = std::max(max_err, std::abs(figure_normalization(k.errors[i], wp) * chi));
    t.add_row({grid_z[i] / c.wavelength, v.real(), v.imag()});
  }
  std::vector<std::string> results = extra;
  results.push_back("kernel: chi3(w',w') * kernel / (3 b(w',0) w'/c), w' = " + format_number(wp) + " rad/s");
  results.push_back("max_error[1]: " + format_number(max_err));
  results.push_back("regularization: " + regularization_label(k));
  results.push_back("clamped_samples: " + std::to_string(clamped_count(req.plate, grid_z, wp)));
  add_header(t, c, results);
  return {file, std::move(t)};
}

NamedTable nonequilibrium_curve(const RunConfig& c, double t_env, const std::string& file) {
  const double wp = c.omega_prime();
  const auto grid_z = linspace(c.z_min, c.z_max, c.z_points);
  PlateKernelRequest req;
  req.geometry = KernelGeometry::neq_plate;
  req.plate = c.material();
  req.thermal = thermal_of(c, t_env);
  const auto k = sample_plate_kernel(req, grid_z, {wp}, c.quad, c.threads);
  CsvTable t({"z_over_lambda0[1]", "kernel[1]", "t_env_over_t_obj[1]"});
  double max_err = 0.0;
  for (std::size_t i = 0; i < grid_z.size(); ++i) {
    max_err = std::max(max_err, std::abs(figure_normalization(k.errors[i], wp)));
    t.add_row({grid_z[i] / c.wavelength, figure_normalization(k.values[i].real(), wp), t_env / c.t_obj});
  }
  add_header(t, c,
             {"curve: t_env = " + format_number(t_env) + " K",
              "kernel: kernel per unit chi3 / (3 b(w',0) w'/c), w' = " + format_number(wp) + " rad/s",
              "max_error[1]: " + format_number(max_err), "regularization: " + regularization_label(k),
              "clamped_samples: 0"});
  return {file, std::move(t)};
}

// ---------------------------------------------------------------------------
// selftest

enum class Status { pass, degraded, fail };

struct Check {
  std::string name;
  double value;
  double reference;
  double error;      // achieved relative (or absolute, if reference is 0) error
  double threshold;  // selftest standard
  double contract;   // largest error the requested tolerance allows; 0 for exact checks
};

Status classify(const Check& k) {
  if (!(k.error <= k.threshold)) return k.error <= k.contract ? Status::degraded : Status::fail;
  return Status::pass;
}

double rel_error(double v, double ref) { return ref == 0.0 ? std::abs(v) : std::abs(v - ref) / std::abs(ref); }

/// Scaled scattered trace of a vacuum|plate stack by the plain trapezoid
/// rule: q = sin(t) over the propagating range, q = cosh(u) beyond it.
double trapezoid_scattered_trace(cdouble eps, double zeta, int nodes) {
  const auto g = [&](const TransverseNode& node) {
    const double q = node.q;
    const cdouble kz = scaled_kz(eps, node);
    const cdouble rs = scaled_fresnel_reflection(eps, 1.0, node, Polarization::s);
    const cdouble rp = scaled_fresnel_reflection(eps, 1.0, node, Polarization::p);
    return ((q / kz) * (rs + (q * q - kz * kz) / eps * rp) * std::exp(cdouble(0.0, 2.0) * kz * zeta) /
            (4.0 * kPi))
        .real();
  };
  const double light = std::sqrt(eps.real());
  const auto inner = [&](double t) {
    const double q = std::sin(t);
    return g(TransverseNode(q, 0.0, q, 1.0, 1.0 - q)) * std::cos(t);
  };
  const double umax = std::acosh(1.0 + 40.0 / zeta);
  const auto outer = [&](double u) {
    const double q = std::cosh(u);
    const double s = std::sinh(0.5 * u);
    const double hi = q < light ? light : kSemiInfinite;
    return g(TransverseNode(q, 1.0, 2.0 * s * s, hi, hi - q)) * std::sinh(u);
  };
  return trapezoid_uniform(inner, 0.0, 0.5 * kPi, nodes) + trapezoid_uniform(outer, 0.0, umax, nodes);
}

}  // namespace

RunResult run_figure(const RunConfig& c) {
  RunResult out;
  const MaterialModel m = c.material();
  switch (c.command) {
    case Command::fig1: {
      PlateKernelRequest req;
      req.geometry = KernelGeometry::single_plate;
      req.plate = m;
      req.thermal = thermal_of(c, c.t_obj);
      out.tables.push_back(equilibrium_curve(c, req, "fig1.csv", {"curve: single plate"}));
      break;
    }
    case Command::fig2:
    case Command::fig3:
      for (std::size_t i = 0; i < c.gaps.size(); ++i) {
        PlateKernelRequest req;
        req.geometry = KernelGeometry::double_plate_delta;
        req.plate = m;
        req.gap = c.gaps[i];
        req.thermal = thermal_of(c, c.t_obj);
        const std::string file = std::string(command_name(c.command)) + "_gap" + std::to_string(i + 1) + ".csv";
        out.tables.push_back(equilibrium_curve(
            c, req, file,
            {"curve: gap = " + format_number(c.gaps[i]) + " m = " + format_number(c.gaps[i] / c.wavelength) +
             " lambda0"}));
      }
      break;
    case Command::fig4:
      require_object_temperature(c);
      for (std::size_t i = 0; i < c.t_env_list.size(); ++i)
        out.tables.push_back(nonequilibrium_curve(c, c.t_env_list[i], "fig4_tenv" + std::to_string(i + 1) + ".csv"));
      break;
    default: throw std::logic_error("run_figure called for a non-figure command");
  }
  return out;
}

RunResult run_sphere(const RunConfig& c) {
  const SphereSpec sphere{c.radius, c.material()};
  const ThermalState thermal = thermal_of(c, c.t_env);
  const auto grid = linspace(c.omega_min, c.omega_max, c.omega_points);
  const auto grid_prime = default_omega_prime_grid(max_temperature(c), c.omega_prime_points_per_decade);
  const SphereOptions options = sphere_options(c);

  const RadiationSpectrum s = sphere_radiation(sphere, thermal, grid, grid_prime, options);
  std::vector<double> im_alpha(grid.size());
  parallel_for(grid.size(), c.threads, [&](std::size_t i) {
    im_alpha[i] = effective_polarizability(sphere, grid[i], thermal, grid_prime, options).value.imag();
  });

  CsvTable t({"omega[rad/s]", "im_alpha[m^3]", "flux_density[W*s]", "flux_over_planck[1]"});
  for (std::size_t i = 0; i < grid.size(); ++i)
    t.add_row({grid[i], im_alpha[i], s.flux_density[i], s.bound[i] != 0.0 ? s.flux_density[i] / s.bound[i] : 0.0});

  std::vector<std::string> results{"flux_over_planck: flux / (4 pi R^2 [Pl(w,T_obj) - Pl(w,T_env)])",
                                   "max_error[W]: " + format_number(s.total_error)};
  for (const auto& w : s.warnings) results.push_back("warning: " + w);
  add_header(t, c, results);

  t.add_trailer("total_H[W]: " + format_number(s.total));
  t.add_trailer("total_H_error[W]: " + format_number(s.total_error));
  t.add_trailer("negative_regions: " + std::to_string(s.negative_regions.size()));
  for (const auto& r : s.negative_regions) t.add_trailer("negative_region: " + region_text(r));
  if (c.transparent_check) {
    const RadiationSpectrum d = sphere_radiation_transparent(sphere, thermal, grid, grid_prime, c.quad);
    const double diff = std::abs(d.total - s.total);
    const double limit = 2.0 * (d.total_error + s.total_error);
    t.add_trailer("transparent_total_H[W]: " + format_number(d.total));
    t.add_trailer("transparent_total_H_error[W]: " + format_number(d.total_error));
    t.add_trailer("transparent_agreement: " + std::string(diff <= limit ? "ok" : "mismatch") +
                  " |dH| = " + format_number(diff) + ", limit " + format_number(limit));
  }
  RunResult out;
  out.tables.push_back({"sphere.csv", std::move(t)});
  return out;
}

RunResult run_scan(const RunConfig& c) {
  RunResult out;
  const MaterialModel m = c.material();
  std::size_t negative = 0;
  if (c.scan_target == ScanTarget::sphere) {
    const SphereSpec sphere{c.radius, m};
    const auto grid = linspace(c.omega_min, c.omega_max, c.omega_points);
    const auto grid_prime = default_omega_prime_grid(max_temperature(c), c.omega_prime_points_per_decade);
    const SphereOptions options = sphere_options(c);
    ProfileOptions neq_only = options.profile;
    neq_only.include_equilibrium = false;
    const auto refined = m.chi3_resonance() ? refine_for_resonance(grid_prime, *m.chi3_resonance(),
                                                                   c.resonance_resolution)
                                            : grid_prime;

    CsvTable t({"t_env[K]", "omega[rad/s]", "im_alpha[m^3]", "im_alpha_neq[m^3]", "sign[1]"});
    const double r3 = c.radius * c.radius * c.radius;
    for (double t_env : c.t_env_list) {
      const ThermalState thermal = thermal_of(c, t_env);
      std::vector<double> im(grid.size()), im_neq(grid.size());
      parallel_for(grid.size(), c.threads, [&](std::size_t i) {
        im[i] = effective_polarizability(sphere, grid[i], thermal, grid_prime, options).value.imag();
        const cdouble local = m.epsilon(grid[i]) + 2.0;
        const auto shift = sphere_epsilon_shift(m, SphereGeometry{options.equilibrium}, grid[i], refined, thermal,
                                                neq_only);
        im_neq[i] = (3.0 * r3 / (local * local) * shift.value).imag();
      });
      std::size_t here = 0;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const double sign = im[i] > 0.0 ? 1.0 : im[i] < 0.0 ? -1.0 : 0.0;
        if (im[i] < 0.0) ++here;
        t.add_row({t_env, grid[i], im[i], im_neq[i], sign});
      }
      negative += here;
      t.add_trailer("t_env " + format_number(t_env) + " K: negative_samples = " + std::to_string(here));
    }
    add_header(t, c, {"negative: Im alpha~ < 0 (negative spectral emissivity)"});
    t.add_trailer("negative_samples_total: " + std::to_string(negative));
    out.tables.push_back({"scan.csv", std::move(t)});
  } else {
    require_object_temperature(c);
    const double wp = c.omega_prime();
    const PlanarStack stack = PlanarStack::single_plate(m);
    const double im_chi = m.chi3(wp, wp).imag();
    std::vector<KernelValue> k(c.t_env_list.size());
    parallel_for(k.size(), c.threads, [&](std::size_t i) {
      k[i] = kernel_neq_plate(stack, c.scan_depth, wp, c.t_obj, c.t_env_list[i], c.quad);
    });
    CsvTable t({"t_env[K]", "t_env_over_t_obj[1]", "kernel[1]", "im_chi3_kernel[1]", "sign[1]"});
    double max_err = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i) {
      const double kn = figure_normalization(k[i].value, wp);
      const double v = im_chi * kn;
      max_err = std::max(max_err, std::abs(figure_normalization(k[i].error, wp)));
      if (v < 0.0) ++negative;
      t.add_row({c.t_env_list[i], c.t_env_list[i] / c.t_obj, kn, v, v > 0.0 ? 1.0 : v < 0.0 ? -1.0 : 0.0});
    }
    add_header(t, c,
               {"depth[m]: " + format_number(c.scan_depth),
                "kernel: kernel per unit chi3 / (3 b(w',0) w'/c), w' = " + format_number(wp) + " rad/s",
                "negative: Im chi3 * kernel < 0 (local loss reduced below its linear value)",
                "max_error[1]: " + format_number(max_err)});
    t.add_trailer("negative_samples_total: " + std::to_string(negative));
    out.tables.push_back({"scan.csv", std::move(t)});
  }
  out.exit_code = negative > 0 ? kExitNegativeFound : kExitOk;
  return out;
}

RunResult run_selftest(const RunConfig& c, std::ostream& report) {
  const QuadratureSpec& quad = c.quad;
  const double contract = 5.0 * quad.rel_tol;
  const double omega = 2.0 * kPi * Const::c / 600e-9;
  std::vector<Check> checks;

  const auto bulk = [&](double eps) {
    const auto r = img_trace_bulk({eps, 0.0}, omega, quad);
    const double ref = std::sqrt(eps) / (2.0 * kPi);
    return Check{"bulk_trace eps=" + format_number(eps), r->scaled, ref, rel_error(r->scaled, ref), 1e-9, contract};
  };
  {
    Check v = bulk(1.0);
    v.name = "vacuum_trace";
    checks.push_back(v);
  }
  for (double eps : {2.25, 4.0, 9.0}) checks.push_back(bulk(eps));

  {
    const cdouble eps(4.0, 1.0);
    const cdouble n = std::sqrt(eps);
    const cdouble ref = (1.0 - n) / (1.0 + n);
    const cdouble rs = scaled_fresnel_reflection(1.0, eps, 0.0, Polarization::s);
    const cdouble rp = scaled_fresnel_reflection(1.0, eps, 0.0, Polarization::p);
    checks.push_back({"fresnel_normal_rs", std::abs(rs), std::abs(ref), std::abs(rs - ref) / std::abs(ref), 1e-14, 0});
    checks.push_back({"fresnel_normal_rp", std::abs(rp), std::abs(ref), std::abs(rp + ref) / std::abs(ref), 1e-14, 0});
    const double e = directional_emissivity({1.0, eps}, {kSemiInfinite, kSemiInfinite}, 0.0);
    const double e_ref = 1.0 - std::norm(ref);
    checks.push_back({"normal_emissivity", e, e_ref, rel_error(e, e_ref), 1e-13, 0});
    const double qb = std::sqrt(4.0 / 5.0);
    const double rb = std::abs(scaled_fresnel_reflection(1.0, {4.0, 0.0}, qb, Polarization::p));
    checks.push_back({"brewster_rp", rb, 0.0, rb, 1e-12, 0});
  }
  {
    const MaterialModel lossy = MaterialModel::constant({4.0, 1.0}, {1.0, 0.0});
    const double t = 287.0;
    const KernelValue k = kernel_neq_plate(PlanarStack::single_plate(lossy), 1e-6, omega, t, t, quad);
    checks.push_back({"equilibrium_neq_plate_zero", k.value, 0.0, std::abs(k.value), 0.0, 0});
    const double s = std::abs(kernel_neq_sphere(lossy, omega, omega, t, t));
    checks.push_back({"equilibrium_neq_sphere_zero", s, 0.0, s, 0.0, 0});
    const double b = bose_difference(omega, t, t);
    checks.push_back({"equilibrium_bose_difference_zero", b, 0.0, std::abs(b), 0.0, 0});
  }
  {
    const cdouble eps(4.0, 1.0);
    const double zeta = kPi;  // depth lambda0/2
    const MaterialModel plate = MaterialModel::constant(eps);
    const TraceResult r = img_trace_scattered(PlanarStack::single_plate(plate), zeta * Const::c / omega, omega, quad);
    const double ref = trapezoid_scattered_trace(eps, zeta, 100000);
    const double err = rel_error(r.scaled, ref);
    const double stated = r.error / std::abs(ref);
    checks.push_back({"quadrature_equivalence", r.scaled, ref, std::max(err, stated), 1e-8,
                      std::max(contract, 1e-8)});
  }

  bool failed = false;
  for (const Check& k : checks) {
    const Status st = classify(k);
    failed = failed || st == Status::fail;
    report << (st == Status::pass ? "PASS     " : st == Status::degraded ? "DEGRADED " : "FAIL     ") << k.name
           << "  value=" << format_number(k.value) << " reference=" << format_number(k.reference)
           << " error=" << format_number(k.error) << " threshold=" << format_number(k.threshold) << '\n';
  }
  RunResult out;
  out.exit_code = failed ? kExitSelftest : kExitOk;
  return out;
}

int execute(const RunConfig& config, std::ostream& log) {
  RunResult r;
  switch (config.command) {
    case Command::fig1:
    case Command::fig2:
    case Command::fig3:
    case Command::fig4: r = run_figure(config); break;
    case Command::sphere: r = run_sphere(config); break;
    case Command::scan: r = run_scan(config); break;
    case Command::selftest: return run_selftest(config, log).exit_code;
  }
  if (!r.tables.empty()) std::filesystem::create_directories(config.out_dir);
  for (const auto& t : r.tables) {
    const std::string path = file_in(config, t.file);
    t.table.write_file(path);
    log << "wrote " << path << " (" << t.table.rows() << " rows)\n";
  }
  return r.exit_code;
}

}  // namespace nlfe::cli
