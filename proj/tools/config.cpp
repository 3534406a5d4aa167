#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "nlfe/constants.hpp"

namespace nlfe::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& s) {
  const auto pos = s.find_first_of("#;");
  return pos == std::string::npos ? s : s.substr(0, pos);
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_number(v[i]);
  }
  return out;
}

double thermal_omega(double t) { return Const::k_B * t / Const::hbar; }

}  // namespace

ConfigError::ConfigError(const std::string& what, std::string field, int line)
    : std::runtime_error(what), field_(std::move(field)), line_(line) {}

std::optional<double> parse_double(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) return std::nullopt;
  const char* first = t.data();
  if (*first == '+') ++first;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(first, t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size()) return std::nullopt;
  return v;
}

std::optional<cdouble> parse_complex(const std::string& text) {
  std::string t;
  for (char ch : text)
    if (ch != ' ' && ch != '\t') t += ch;
  if (t.empty()) return std::nullopt;
  if (t.back() != 'i' && t.back() != 'j') {
    const auto re = parse_double(t);
    if (!re) return std::nullopt;
    return cdouble(*re, 0.0);
  }
  t.pop_back();
  // Split at the last sign that is neither leading nor part of an exponent.
  std::size_t split = std::string::npos;
  for (std::size_t i = t.size(); i-- > 1;) {
    if ((t[i] == '+' || t[i] == '-') && t[i - 1] != 'e' && t[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  const auto imag_part = [](std::string s) -> std::optional<double> {
    if (s.empty() || s == "+") return 1.0;
    if (s == "-") return -1.0;
    return parse_double(s);
  };
  if (split == std::string::npos) {
    const auto im = imag_part(t);
    if (!im) return std::nullopt;
    return cdouble(0.0, *im);
  }
  const auto re = parse_double(t.substr(0, split));
  const auto im = imag_part(t.substr(split));
  if (!re || !im) return std::nullopt;
  return cdouble(*re, *im);
}

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific);
  return std::string(buf, res.ptr);
}

std::string format_complex(cdouble v) {
  const bool neg = std::signbit(v.imag());
  return format_number(v.real()) + (neg ? "-" : "+") + format_number(std::abs(v.imag())) + "i";
}

IniDocument IniDocument::parse(std::istream& in, const std::string& source) {
  IniDocument doc;
  doc.source_ = source;
  std::string line, section;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string t = trim(strip_comment(line));
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']' || t.size() < 3)
        throw ConfigError(source + ":" + std::to_string(number) + ": malformed section header", {}, number);
      section = trim(t.substr(1, t.size() - 2));
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError(source + ":" + std::to_string(number) + ": expected 'key = value'", {}, number);
    const std::string key = trim(t.substr(0, eq));
    if (key.empty())
      throw ConfigError(source + ":" + std::to_string(number) + ": empty key", {}, number);
    if (section.empty())
      throw ConfigError(source + ":" + std::to_string(number) + ": key '" + key + "' outside any section", key,
                        number);
    const std::string full = section + "." + key;
    if (doc.entries_.count(full))
      throw ConfigError(source + ":" + std::to_string(number) + ": duplicate key '" + full + "'", full, number);
    doc.entries_[full] = {trim(t.substr(eq + 1)), number};
  }
  return doc;
}

void IniDocument::set(const std::string& key, const std::string& value) { entries_[key] = {value, 0}; }

std::optional<std::string> IniDocument::raw(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  used_.insert(key);
  return it->second.value;
}

int IniDocument::line_of(const std::string& key) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? 0 : it->second.line;
}

void IniDocument::fail(const std::string& key, const std::string& what) const {
  const int line = line_of(key);
  const std::string where = line > 0 ? source_ + ":" + std::to_string(line) + ": " : std::string("option: ");
  throw ConfigError(where + key + ": " + what, key, line);
}

std::optional<double> IniDocument::get_double(const std::string& key) const {
  const auto r = raw(key);
  if (!r) return std::nullopt;
  const auto v = parse_double(*r);
  if (!v || !std::isfinite(*v)) fail(key, "expected a finite number, got '" + *r + "'");
  return v;
}

std::optional<int> IniDocument::get_int(const std::string& key) const {
  const auto r = raw(key);
  if (!r) return std::nullopt;
  int v = 0;
  const std::string t = trim(*r);
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) fail(key, "expected an integer, got '" + *r + "'");
  return v;
}

std::optional<bool> IniDocument::get_bool(const std::string& key) const {
  const auto r = raw(key);
  if (!r) return std::nullopt;
  if (*r == "true" || *r == "1" || *r == "yes") return true;
  if (*r == "false" || *r == "0" || *r == "no") return false;
  fail(key, "expected true or false, got '" + *r + "'");
}

std::optional<cdouble> IniDocument::get_complex(const std::string& key) const {
  const auto r = raw(key);
  if (!r) return std::nullopt;
  const auto v = parse_complex(*r);
  if (!v || !std::isfinite(v->real()) || !std::isfinite(v->imag()))
    fail(key, "expected a complex number like 4+1i, got '" + *r + "'");
  return v;
}

std::optional<std::vector<double>> IniDocument::get_list(const std::string& key) const {
  const auto r = raw(key);
  if (!r) return std::nullopt;
  std::vector<double> out;
  std::stringstream ss(*r);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto v = parse_double(item);
    if (!v || !std::isfinite(*v)) fail(key, "expected a comma-separated list of numbers, got '" + *r + "'");
    out.push_back(*v);
  }
  if (out.empty()) fail(key, "empty list");
  return out;
}

std::optional<std::string> IniDocument::get_string(const std::string& key) const { return raw(key); }

void IniDocument::reject_unused() const {
  for (const auto& [key, entry] : entries_)
    if (!used_.count(key)) fail(key, "unknown key for this command");
}

std::optional<Command> parse_command(const std::string& name) {
  for (Command c : {Command::fig1, Command::fig2, Command::fig3, Command::fig4, Command::sphere, Command::scan,
                    Command::selftest})
    if (name == command_name(c)) return c;
  return std::nullopt;
}

const char* command_name(Command c) {
  switch (c) {
    case Command::fig1: return "fig1";
    case Command::fig2: return "fig2";
    case Command::fig3: return "fig3";
    case Command::fig4: return "fig4";
    case Command::sphere: return "sphere";
    case Command::scan: return "scan";
    case Command::selftest: return "selftest";
  }
  return "?";
}

MaterialModel RunConfig::material() const {
  PermittivityModel eps = ConstantPermittivity{epsilon};
  if (eps_model == "lorentz") eps = lorentz;
  Chi3Model chi = ConstantChi3{chi3};
  if (chi3_model == "lorentzian") chi = chi3_lorentzian;
  return MaterialModel(eps, chi);
}

double RunConfig::omega_prime() const { return 2.0 * Const::pi * Const::c / wavelength; }

std::vector<std::string> RunConfig::echo() const {
  std::vector<std::string> l;
  const auto kv = [&](const char* k, const std::string& v) { l.push_back(std::string(k) + " = " + v); };
  l.push_back("[material]");
  kv("eps_model", eps_model);
  if (eps_model == "lorentz") {
    kv("eps_inf", format_number(lorentz.eps_inf));
    kv("delta_eps", format_number(lorentz.delta_eps));
    kv("resonance", format_number(lorentz.resonance));
    kv("damping", format_number(lorentz.damping));
  } else {
    kv("epsilon", format_complex(epsilon));
  }
  kv("chi3_model", chi3_model);
  if (chi3_model == "lorentzian") {
    kv("chi3_center", format_number(chi3_lorentzian.center));
    kv("chi3_width", format_number(chi3_lorentzian.width));
    kv("chi3_peak", format_complex(chi3_lorentzian.peak));
  } else {
    kv("chi3", format_complex(chi3));
  }
  l.push_back("[grid]");
  switch (command) {
    case Command::fig1:
    case Command::fig2:
    case Command::fig3:
    case Command::fig4:
      kv("wavelength", format_number(wavelength));
      kv("z_min", format_number(z_min));
      kv("z_max", format_number(z_max));
      kv("z_points", std::to_string(z_points));
      break;
    case Command::scan:
      if (scan_target == ScanTarget::plate) {
        kv("wavelength", format_number(wavelength));
        break;
      }
      [[fallthrough]];
    case Command::sphere:
      kv("omega_min", format_number(omega_min));
      kv("omega_max", format_number(omega_max));
      kv("omega_points", std::to_string(omega_points));
      kv("omega_prime_points_per_decade", std::to_string(omega_prime_points_per_decade));
      kv("resonance_resolution", std::to_string(resonance_resolution));
      break;
    case Command::selftest: break;
  }
  l.push_back("[geometry]");
  if (command == Command::fig2 || command == Command::fig3) kv("gaps", join(gaps));
  if (command == Command::sphere || (command == Command::scan && scan_target == ScanTarget::sphere)) {
    kv("radius", format_number(radius));
    kv("sphere_equilibrium", sphere_equilibrium == SphereEquilibrium::none ? "none" : "bulk_lossless");
  }
  l.push_back("[thermal]");
  kv("t_obj", format_number(t_obj));
  if (command == Command::fig4 || command == Command::scan)
    kv("t_env_list", join(t_env_list));
  else
    kv("t_env", format_number(t_env));
  if (command == Command::scan) {
    l.push_back("[scan]");
    kv("target", scan_target == ScanTarget::sphere ? "sphere" : "plate");
    if (scan_target == ScanTarget::plate) kv("depth", format_number(scan_depth));
  }
  l.push_back("[quadrature]");
  kv("rel_tol", format_number(quad.rel_tol));
  kv("abs_tol", format_number(quad.abs_tol));
  kv("cutoff_decades", format_number(quad.evanescent_cutoff_decades));
  kv("max_subdivisions", std::to_string(quad.max_subdivisions));
  l.push_back("[output]");
  kv("threads", std::to_string(threads));
  if (command == Command::sphere) kv("transparent_check", transparent_check ? "true" : "false");
  return l;
}

RunConfig load_config(Command command, const IniDocument& doc) {
  RunConfig c;
  c.command = command;
  const bool fig = command == Command::fig1 || command == Command::fig2 || command == Command::fig3 ||
                   command == Command::fig4;

  // [scan]
  if (command == Command::scan) {
    if (auto v = doc.get_string("scan.target")) {
      if (*v == "sphere")
        c.scan_target = ScanTarget::sphere;
      else if (*v == "plate")
        c.scan_target = ScanTarget::plate;
      else
        throw ConfigError("scan.target must be sphere or plate", "scan.target", doc.line_of("scan.target"));
    }
  }

  // Command defaults that do not depend on other fields.
  switch (command) {
    case Command::fig1:
    case Command::fig2: c.epsilon = {4.0, 0.0}; break;
    case Command::fig3: c.epsilon = {4.0, 1.0}; break;
    case Command::fig4:
      c.epsilon = {4.0, 1.0};
      c.wavelength = 50e-6;
      break;
    case Command::scan:
      if (c.scan_target == ScanTarget::plate) {
        c.epsilon = {4.0, 1.0};
        c.chi3 = {0.0, -1.0};
        c.wavelength = 50e-6;
        break;
      }
      [[fallthrough]];
    case Command::sphere: {
      c.epsilon = {2.0, 0.0};
      c.chi3_model = "lorentzian";
      const double w = thermal_omega(300.0);
      c.chi3_lorentzian = {2.0 * w, 0.1 * w, {2e-19, -1e-18}};
      break;
    }
    case Command::selftest: break;
  }

  if (auto v = doc.get_string("output.dir")) c.out_dir = *v;
  if (auto v = doc.get_int("output.threads")) {
    if (*v < 1) throw ConfigError("output.threads must be >= 1", "output.threads", doc.line_of("output.threads"));
    c.threads = static_cast<unsigned>(*v);
  }
  if (auto v = doc.get_double("quadrature.rel_tol")) c.quad.rel_tol = *v;
  if (auto v = doc.get_double("quadrature.abs_tol")) c.quad.abs_tol = *v;
  if (auto v = doc.get_double("quadrature.cutoff_decades")) c.quad.evanescent_cutoff_decades = *v;
  if (auto v = doc.get_int("quadrature.max_subdivisions")) c.quad.max_subdivisions = *v;
  try {
    c.quad.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("quadrature: ") + e.what(), "quadrature");
  }
  if (command == Command::selftest) {
    doc.reject_unused();
    return c;
  }

  // [material]
  if (auto v = doc.get_string("material.eps_model")) {
    if (*v != "constant" && *v != "lorentz")
      throw ConfigError("material.eps_model must be constant or lorentz", "material.eps_model",
                        doc.line_of("material.eps_model"));
    c.eps_model = *v;
  }
  if (c.eps_model == "constant") {
    if (auto v = doc.get_complex("material.epsilon")) c.epsilon = *v;
  } else {
    const auto need = [&](const char* key) {
      const auto v = doc.get_double(key);
      if (!v) throw ConfigError(std::string(key) + " is required for eps_model = lorentz", key);
      return *v;
    };
    c.lorentz = {need("material.eps_inf"), need("material.delta_eps"), need("material.resonance"),
                 need("material.damping")};
  }
  if (auto v = doc.get_string("material.chi3_model")) {
    if (*v != "constant" && *v != "lorentzian")
      throw ConfigError("material.chi3_model must be constant or lorentzian", "material.chi3_model",
                        doc.line_of("material.chi3_model"));
    c.chi3_model = *v;
  }
  if (c.chi3_model == "constant") {
    if (auto v = doc.get_complex("material.chi3")) c.chi3 = *v;
  } else {
    if (auto v = doc.get_double("material.chi3_center")) c.chi3_lorentzian.center = *v;
    if (auto v = doc.get_double("material.chi3_width")) c.chi3_lorentzian.width = *v;
    if (auto v = doc.get_complex("material.chi3_peak")) c.chi3_lorentzian.peak = *v;
  }
  try {
    (void)c.material();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("material: ") + e.what(), "material");
  }

  const bool sphere_like =
      command == Command::sphere || (command == Command::scan && c.scan_target == ScanTarget::sphere);
  const bool needs_wavelength = fig || (command == Command::scan && c.scan_target == ScanTarget::plate);

  // [grid]
  if (needs_wavelength) {
    if (auto v = doc.get_double("grid.wavelength")) c.wavelength = *v;
    if (!(c.wavelength > 0.0))
      throw ConfigError("grid.wavelength must be > 0", "grid.wavelength", doc.line_of("grid.wavelength"));
  }
  if (fig) {
    const double lam = c.wavelength;
    c.z_min = (command == Command::fig4 ? 1e-3 : 5e-3) * lam;
    c.z_max = (command == Command::fig1 ? 4.0 : command == Command::fig4 ? 2.0 : 3.0) * lam;
    c.z_points = command == Command::fig1 ? 800 : command == Command::fig4 ? 400 : 600;
    if (auto v = doc.get_double("grid.z_min")) c.z_min = *v;
    if (auto v = doc.get_double("grid.z_max")) c.z_max = *v;
    if (auto v = doc.get_int("grid.z_points")) c.z_points = *v;
    if (!(c.z_min > 0.0) || !(c.z_max > c.z_min) || c.z_points < 2)
      throw ConfigError("depth grid needs 0 < z_min < z_max and z_points >= 2", "grid.z_min",
                        doc.line_of("grid.z_min"));
  }

  // [geometry]
  if (command == Command::fig2 || command == Command::fig3) {
    c.gaps = {0.25 * c.wavelength, 0.5 * c.wavelength, 1.0 * c.wavelength, 2.0 * c.wavelength};
    if (auto v = doc.get_list("geometry.gaps")) c.gaps = *v;
    for (double d : c.gaps)
      if (!(d > 0.0)) throw ConfigError("geometry.gaps must be > 0", "geometry.gaps", doc.line_of("geometry.gaps"));
  }
  if (sphere_like) {
    if (auto v = doc.get_double("geometry.radius")) c.radius = *v;
    if (!(c.radius > 0.0))
      throw ConfigError("geometry.radius must be > 0", "geometry.radius", doc.line_of("geometry.radius"));
    if (auto v = doc.get_string("geometry.sphere_equilibrium")) {
      if (*v == "none")
        c.sphere_equilibrium = SphereEquilibrium::none;
      else if (*v == "bulk_lossless")
        c.sphere_equilibrium = SphereEquilibrium::bulk_lossless;
      else
        throw ConfigError("geometry.sphere_equilibrium must be none or bulk_lossless", "geometry.sphere_equilibrium",
                          doc.line_of("geometry.sphere_equilibrium"));
    }
  }

  // [thermal]
  if (command == Command::fig4 || (command == Command::scan && c.scan_target == ScanTarget::plate))
    c.t_obj = Const::hbar * c.omega_prime() / Const::k_B;
  if (command == Command::fig1 || command == Command::fig2 || command == Command::fig3) c.t_env = c.t_obj;
  if (auto v = doc.get_double("thermal.t_obj")) c.t_obj = *v;
  if (command == Command::fig4 || command == Command::scan) {
    if (command == Command::fig4)
      c.t_env_list = {0.0, 0.5 * c.t_obj, c.t_obj, 1.5 * c.t_obj, 2.0 * c.t_obj};
    else
      for (int i = 0; i <= 20; ++i) c.t_env_list.push_back(i * c.t_obj / 10.0);
    if (auto v = doc.get_list("thermal.t_env_list")) c.t_env_list = *v;
  } else if (command != Command::fig1 && command != Command::fig2 && command != Command::fig3) {
    if (auto v = doc.get_double("thermal.t_env")) c.t_env = *v;
  } else {
    // Equilibrium figures: one temperature for every body.
    if (auto v = doc.get_double("thermal.t_env")) c.t_env = *v;
    if (c.t_env != c.t_obj)
      throw ConfigError("equilibrium figures need thermal.t_env == thermal.t_obj", "thermal.t_env",
                        doc.line_of("thermal.t_env"));
  }
  const auto check_t = [&](double t, const char* key) {
    if (!(t >= 0.0) || !std::isfinite(t))
      throw ConfigError(std::string(key) + " must be >= 0", key, doc.line_of(key));
  };
  check_t(c.t_obj, "thermal.t_obj");
  check_t(c.t_env, "thermal.t_env");
  for (double t : c.t_env_list) check_t(t, "thermal.t_env_list");

  if (sphere_like) {
    double t_max = std::max(c.t_obj, c.t_env);
    for (double t : c.t_env_list) t_max = std::max(t_max, t);
    if (t_max <= 0.0 && (!doc.has("grid.omega_min") || !doc.has("grid.omega_max")))
      throw ConfigError("all temperatures are zero; give grid.omega_min and grid.omega_max", "thermal.t_obj");
    const double w = thermal_omega(t_max);
    c.omega_min = 0.01 * w;
    c.omega_max = 40.0 * w;
    c.omega_points = command == Command::scan ? 201 : 2001;
    if (auto v = doc.get_double("grid.omega_min")) c.omega_min = *v;
    if (auto v = doc.get_double("grid.omega_max")) c.omega_max = *v;
    if (auto v = doc.get_int("grid.omega_points")) c.omega_points = *v;
    if (auto v = doc.get_int("grid.omega_prime_points_per_decade")) c.omega_prime_points_per_decade = *v;
    if (auto v = doc.get_int("grid.resonance_resolution")) c.resonance_resolution = *v;
    if (!(c.omega_min > 0.0) || !(c.omega_max > c.omega_min) || c.omega_points < 2)
      throw ConfigError("frequency grid needs 0 < omega_min < omega_max and omega_points >= 2", "grid.omega_min",
                        doc.line_of("grid.omega_min"));
    if (c.omega_prime_points_per_decade < 2 || c.resonance_resolution < 1)
      throw ConfigError("omega' grid resolution too small", "grid.omega_prime_points_per_decade",
                        doc.line_of("grid.omega_prime_points_per_decade"));
  }
  if (command == Command::scan && c.scan_target == ScanTarget::plate) {
    c.scan_depth = 0.01 * c.wavelength;
    if (auto v = doc.get_double("scan.depth")) c.scan_depth = *v;
    if (!(c.scan_depth > 0.0)) throw ConfigError("scan.depth must be > 0", "scan.depth", doc.line_of("scan.depth"));
  }
  if (command == Command::sphere)
    if (auto v = doc.get_bool("output.transparent_check")) c.transparent_check = *v;

  doc.reject_unused();
  return c;
}

}  // namespace nlfe::cli
