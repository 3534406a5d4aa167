#pragma once

#include <istream>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlfe/material.hpp"
#include "nlfe/quadrature.hpp"
#include "nlfe/effective_epsilon.hpp"

namespace nlfe::cli {

/// Invalid configuration. `line` is 0 when the problem is not tied to a line.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, std::string field = {}, int line = 0);
  const std::string& field() const { return field_; }
  int line() const { return line_; }

 private:
  std::string field_;
  int line_;
};

/// `key = value` lines grouped under `[section]` headers. `#` and `;` start
/// comments. Keys are addressed as "section.key".
class IniDocument {
 public:
  static IniDocument parse(std::istream& in, const std::string& source = "<config>");

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  std::optional<std::string> raw(const std::string& key) const;
  int line_of(const std::string& key) const;

  std::optional<double> get_double(const std::string& key) const;
  std::optional<int> get_int(const std::string& key) const;
  std::optional<bool> get_bool(const std::string& key) const;
  std::optional<cdouble> get_complex(const std::string& key) const;
  std::optional<std::vector<double>> get_list(const std::string& key) const;
  std::optional<std::string> get_string(const std::string& key) const;

  /// Throws ConfigError naming the first key never read through a getter.
  void reject_unused() const;

  void set(const std::string& key, const std::string& value);

 private:
  struct Entry {
    std::string value;
    int line;
  };
  std::map<std::string, Entry> entries_;
  mutable std::set<std::string> used_;
  std::string source_;

  [[noreturn]] void fail(const std::string& key, const std::string& what) const;
};

/// Parses "a", "a+bi", "a-bi", "bi", "a+i". Returns nullopt on malformed input.
std::optional<cdouble> parse_complex(const std::string& text);
std::optional<double> parse_double(const std::string& text);

/// Locale-independent shortest round-trip formatting ('e' exponents).
std::string format_number(double v);
std::string format_complex(cdouble v);

enum class Command { fig1, fig2, fig3, fig4, sphere, scan, selftest };

std::optional<Command> parse_command(const std::string& name);
const char* command_name(Command c);

enum class ScanTarget { sphere, plate };

/// Fully resolved run description; every field has a value after loading.
struct RunConfig {
  Command command = Command::selftest;

  // [material]
  std::string eps_model = "constant";  // constant | lorentz
  cdouble epsilon{4.0, 0.0};
  LorentzPermittivity lorentz;
  std::string chi3_model = "constant";  // constant | lorentzian
  cdouble chi3{1.0, 0.0};
  LorentzianChi3 chi3_lorentzian;

  // [grid]
  double wavelength = 600e-9;  // lambda'_0 [m]
  double z_min = 0.0;
  double z_max = 0.0;
  int z_points = 0;
  double omega_min = 0.0;
  double omega_max = 0.0;
  int omega_points = 0;
  int omega_prime_points_per_decade = 40;
  int resonance_resolution = 96;

  // [geometry]
  std::vector<double> gaps;  // [m]
  double radius = 10e-9;
  SphereEquilibrium sphere_equilibrium = SphereEquilibrium::none;

  // [thermal]
  double t_obj = 300.0;
  double t_env = 0.0;
  std::vector<double> t_env_list;

  // [scan]
  ScanTarget scan_target = ScanTarget::sphere;
  double scan_depth = 0.0;

  // [quadrature]
  QuadratureSpec quad;

  // [output]
  std::string out_dir = ".";
  unsigned threads = 1;
  bool transparent_check = false;

  MaterialModel material() const;
  double omega_prime() const;
  /// "section.key = value" for every field relevant to the command.
  std::vector<std::string> echo() const;
};

/// Command defaults overlaid with the document; unknown keys are errors.
RunConfig load_config(Command command, const IniDocument& doc);

}  // namespace nlfe::cli
