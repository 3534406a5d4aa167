#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "config.hpp"
#include "csv.hpp"
#include "doctest.h"

using namespace nlfe;
using namespace nlfe::cli;

namespace {

IniDocument doc_of(const std::string& text) {
  std::istringstream in(text);
  return IniDocument::parse(in, "test.ini");
}

std::string to_text(const CsvTable& t) {
  std::ostringstream s;
  t.write(s);
  return s.str();
}

/// Lines following "# config:" with the comment prefix removed.
std::string config_block(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, out;
  bool on = false;
  while (std::getline(in, line)) {
    if (line.rfind("# ", 0) != 0) {
      if (on) break;
      continue;
    }
    if (on) out += line.substr(2) + "\n";
    if (line == "# config:") on = true;
  }
  return out;
}

std::string body(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line))
    if (line.empty() || line[0] != '#') out += line + "\n";
  return out;
}

std::vector<std::vector<double>> rows_of(const std::string& csv) {
  std::istringstream in(body(csv));
  std::string line;
  std::getline(in, line);  // header
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> r;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) r.push_back(*parse_double(cell));
    rows.push_back(r);
  }
  return rows;
}

int run_tool(const std::string& args) {
  const std::string cmd = std::string(NLFE_TOOL) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string temp_dir(const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() / ("nlfe_cli_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p.string();
}

void write_file(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

}  // namespace

TEST_CASE("complex literals") {
  CHECK(*parse_complex("4") == cdouble(4, 0));
  CHECK(*parse_complex("4+1i") == cdouble(4, 1));
  CHECK(*parse_complex(" 4 - 2.5i ") == cdouble(4, -2.5));
  CHECK(*parse_complex("3i") == cdouble(0, 3));
  CHECK(*parse_complex("-i") == cdouble(0, -1));
  CHECK(*parse_complex("2+i") == cdouble(2, 1));
  CHECK(*parse_complex("1e-3-4e-8i") == cdouble(1e-3, -4e-8));
  CHECK(*parse_complex("-1.5e+2+2E-1j") == cdouble(-150, 0.2));
  CHECK_FALSE(parse_complex("4+x"));
  CHECK_FALSE(parse_complex("i4"));
  CHECK_FALSE(parse_complex(""));
}

TEST_CASE("number formatting round-trips and uses no locale") {
  for (double v : {0.1, 1.0 / 3.0, 6e-7, -2.5e300, 4.9e-324, 287.75537532447345}) {
    const std::string s = format_number(v);
    CHECK(s.find(',') == std::string::npos);
    CHECK(*parse_double(s) == v);
  }
  CHECK(format_complex({4, -1}) == "4e+00-1e+00i");
  CHECK(*parse_complex(format_complex({0.3, -0.0})) == cdouble(0.3, 0.0));
}

TEST_CASE("ini diagnostics name the line and the field") {
  try {
    doc_of("[grid]\nz_points = 10\nbroken line\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 3);
    CHECK(std::string(e.what()).find("test.ini:3") != std::string::npos);
  }
  CHECK_THROWS_AS(doc_of("key = 1\n"), ConfigError);
  CHECK_THROWS_AS(doc_of("[a]\nk = 1\nk = 2\n"), ConfigError);

  try {
    load_config(Command::fig1, doc_of("# comment\n[grid]\nz_points = ten\n"));
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "grid.z_points");
    CHECK(e.line() == 3);
  }
  try {
    load_config(Command::fig1, doc_of("[grid]\nz_pionts = 10 ; typo\n"));
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "grid.z_pionts");
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(load_config(Command::fig2, doc_of("[geometry]\ngaps = 1e-7, -1\n")), ConfigError);
  CHECK_THROWS_AS(load_config(Command::fig1, doc_of("[thermal]\nt_env = 10\n")), ConfigError);
  CHECK_THROWS_AS(load_config(Command::sphere, doc_of("[material]\nepsilon = 2+\n")), ConfigError);
}

TEST_CASE("figure defaults") {
  const IniDocument empty;
  const RunConfig f1 = load_config(Command::fig1, empty);
  CHECK(f1.epsilon == cdouble(4, 0));
  CHECK(f1.wavelength == 600e-9);
  CHECK(f1.z_max >= 3.0 * f1.wavelength);
  const RunConfig f3 = load_config(Command::fig3, empty);
  CHECK(f3.epsilon == cdouble(4, 1));
  CHECK(f3.gaps.size() == 4);
  const RunConfig f4 = load_config(Command::fig4, empty);
  CHECK(f4.wavelength == 50e-6);
  CHECK(f4.t_obj == doctest::Approx(287.755).epsilon(1e-5));
  CHECK(f4.t_env_list.front() == 0.0);
  CHECK(f4.t_env_list.back() == 2.0 * f4.t_obj);
  // Depth grid follows an overridden wavelength.
  const RunConfig f2 = load_config(Command::fig2, doc_of("[grid]\nwavelength = 1e-6\n"));
  CHECK(f2.gaps[2] == 1e-6);
  CHECK(f2.z_max == 3e-6);
}

TEST_CASE("echo reloads to the same configuration") {
  for (Command c : {Command::fig1, Command::fig2, Command::fig3, Command::fig4, Command::sphere, Command::scan}) {
    const RunConfig a = load_config(c, IniDocument{});
    std::string text;
    for (const auto& l : a.echo()) text += l + "\n";
    const RunConfig b = load_config(c, doc_of(text));
    CHECK(b.echo() == a.echo());
  }
  const RunConfig p = load_config(Command::scan, doc_of("[scan]\ntarget = plate\n[material]\nchi3 = -1i\n"));
  std::string text;
  for (const auto& l : p.echo()) text += l + "\n";
  CHECK(load_config(Command::scan, doc_of(text)).echo() == p.echo());
}

TEST_CASE("csv layout") {
  CsvTable t({"x[m]", "y[1]"});
  t.add_metadata("meta");
  t.add_row({1.0, 0.5});
  t.add_trailer("end");
  CHECK_THROWS_AS(t.add_row({1.0}), std::invalid_argument);
  CHECK(to_text(t) == "# meta\nx[m],y[1]\n1e+00,5e-01\n# end\n");
}

TEST_CASE("figure runs are deterministic and self-describing") {
  const IniDocument doc = doc_of("[grid]\nz_points = 40\n[output]\nthreads = 1\n");
  const RunConfig c = load_config(Command::fig3, doc);
  const auto a = run_figure(c);
  const auto b = run_figure(load_config(Command::fig3, doc_of(config_block(to_text(a.tables[0].table)))));
  REQUIRE(a.tables.size() == c.gaps.size());
  for (std::size_t i = 0; i < a.tables.size(); ++i) CHECK(to_text(a.tables[i].table) == to_text(b.tables[i].table));

  // Thread count does not change any byte of the body.
  const RunConfig c4 = load_config(Command::fig3, doc_of("[grid]\nz_points = 40\n[output]\nthreads = 4\n"));
  const auto d = run_figure(c4);
  CHECK(body(to_text(d.tables[1].table)) == body(to_text(a.tables[1].table)));

  const auto rows = rows_of(to_text(a.tables[0].table));
  CHECK(rows.size() == 40);
  for (const auto& r : rows) CHECK(r.size() == 3);
}

TEST_CASE("fig4 curve at T_env = T_obj is identically zero") {
  const RunConfig c = load_config(Command::fig4, doc_of("[grid]\nz_points = 20\n[thermal]\nt_obj = 287\n"
                                                        "t_env_list = 287, 574\n"));
  const auto r = run_figure(c);
  for (const auto& row : rows_of(to_text(r.tables[0].table))) {
    CHECK(row[1] == 0.0);
    CHECK(row[2] == 1.0);
  }
  for (const auto& row : rows_of(to_text(r.tables[1].table))) CHECK(row[1] > 0.0);
}

TEST_CASE("sphere runs: equal temperatures and swapped temperatures") {
  const std::string grid = "[grid]\nomega_points = 201\n";
  const auto eq = run_sphere(load_config(Command::sphere, doc_of(grid + "[thermal]\nt_env = 300\n")));
  for (const auto& row : rows_of(to_text(eq.tables[0].table))) CHECK(row[2] == 0.0);

  const auto fwd = to_text(
      run_sphere(load_config(Command::sphere, doc_of(grid + "[thermal]\nt_obj = 300\nt_env = 0\n"))).tables[0].table);
  const auto rev = to_text(
      run_sphere(load_config(Command::sphere, doc_of(grid + "[thermal]\nt_obj = 0\nt_env = 300\n"))).tables[0].table);
  const auto total = [](const std::string& csv) {
    const auto pos = csv.find("# total_H[W]: ");
    return csv.substr(pos, csv.find('\n', pos) - pos);
  };
  CHECK(total(fwd) == total(rev));
  CHECK(fwd.find("negative_regions: 0") != std::string::npos);
  CHECK(rev.find("negative_regions: 1") != std::string::npos);
}

TEST_CASE("scan: no chi3 means no negative region, doubling doubles the shift") {
  const std::string base = "[grid]\nomega_points = 21\n[thermal]\nt_env_list = 0, 300, 600\n";
  const auto none = run_scan(load_config(Command::scan, doc_of(base + "[material]\nchi3_model = constant\n"
                                                                     "chi3 = 0\n")));
  CHECK(none.exit_code == kExitOk);
  for (const auto& row : rows_of(to_text(none.tables[0].table))) CHECK(row[3] == 0.0);

  const std::string res = "chi3_center = 7.855e13\nchi3_width = 3.9e12\n";
  const auto one = run_scan(load_config(Command::scan, doc_of(base + "[material]\n" + res + "chi3_peak = 2e-19-1e-18i\n")));
  const auto two = run_scan(load_config(Command::scan, doc_of(base + "[material]\n" + res + "chi3_peak = 4e-19-2e-18i\n")));
  CHECK(one.exit_code == kExitNegativeFound);
  const auto r1 = rows_of(to_text(one.tables[0].table));
  const auto r2 = rows_of(to_text(two.tables[0].table));
  REQUIRE(r1.size() == r2.size());
  for (std::size_t i = 0; i < r1.size(); ++i) CHECK(r2[i][3] == 2.0 * r1[i][3]);
}

TEST_CASE("plate scan: kernel changes sign exactly at T_env = T_obj") {
  const auto r = run_scan(load_config(Command::scan, doc_of("[scan]\ntarget = plate\n[material]\nchi3 = -1i\n")));
  for (const auto& row : rows_of(to_text(r.tables[0].table))) {
    const double ratio = row[1];
    if (ratio < 1.0) CHECK(row[2] < 0.0);
    if (ratio == 1.0) CHECK(row[2] == 0.0);
    if (ratio > 1.0) CHECK(row[2] > 0.0);
  }
  CHECK(r.exit_code == kExitNegativeFound);
}

TEST_CASE("selftest passes and reports loose tolerances as degraded") {
  std::ostringstream ok;
  CHECK(run_selftest(load_config(Command::selftest, IniDocument{}), ok).exit_code == kExitOk);
  CHECK(ok.str().find("FAIL") == std::string::npos);
  CHECK(ok.str().find("DEGRADED") == std::string::npos);

  std::ostringstream loose;
  CHECK(run_selftest(load_config(Command::selftest, doc_of("[quadrature]\nrel_tol = 1\n")), loose).exit_code ==
        kExitOk);
  CHECK(loose.str().find("DEGRADED quadrature_equivalence") != std::string::npos);
}

TEST_CASE("exit codes of the executable") {
  const std::string dir = temp_dir("exit");
  CHECK(run_tool("selftest") == 0);
  CHECK(run_tool("fig1 --out " + dir + " --config " + dir + "/missing.ini") != 0);

  write_file(dir + "/bad.ini", "[grid]\nz_points = -3\n");
  CHECK(run_tool("fig1 --out " + dir + " --config " + dir + "/bad.ini") == 1);

  write_file(dir + "/pole.ini", "[material]\nepsilon = -2\n[grid]\nomega_points = 3\n");
  CHECK(run_tool("sphere --out " + dir + " --config " + dir + "/pole.ini") == 2);

  write_file(dir + "/scan.ini", "[grid]\nomega_points = 5\n[thermal]\nt_env_list = 0, 600\n");
  CHECK(run_tool("scan --out " + dir + " --config " + dir + "/scan.ini") == 4);
  write_file(dir + "/small.ini", "[grid]\nz_points = 5\n");
  CHECK(run_tool("fig1 --threads 2 --rel-tol 1e-9 --out " + dir + " --config " + dir + "/small.ini") == 0);
  std::ifstream in(dir + "/fig1.csv");
  std::stringstream s;
  s << in.rdbuf();
  CHECK(s.str().find("rel_tol = 1e-09") != std::string::npos);
  CHECK(s.str().find("threads = 2") != std::string::npos);
}
