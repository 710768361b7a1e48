#include "magrect/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "magrect/analysis.hpp"
#include "magrect/domain.hpp"
#include "magrect/muopt.hpp"
#include "magrect/oscillator1d.hpp"
#include "magrect/report.hpp"

namespace magrect::cli {

namespace {

using ojson = nlohmann::ordered_json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Config {
  std::string format = "csv";
  std::string output = "-";

  std::string a = "1";
  std::string B = "0";
  double theta = 0.5;
  int n = 63;
  double tol = 1e-9;
  double step = 0.02;
  int jobs = 1;
  int resolution = 2048;
  int max_outer = 200;
  std::string betas = "0:50:0.5";
  std::string dump_matrix;
};

void require(bool ok, const std::string& message) {
  if (!ok) throw UsageError(message);
}

std::vector<double> values_of(const std::string& text, const char* flag) {
  try {
    auto v = parse_values(text);
    require(!v.empty(), std::string("--") + flag + ": empty list");
    return v;
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--") + flag + ": " + e.what());
  }
}

std::vector<double> positive_values(const std::string& text, const char* flag) {
  auto v = values_of(text, flag);
  for (double x : v) require(x > 0.0 && std::isfinite(x), std::string("--") + flag + " must be > 0");
  return v;
}

double single_value(const std::string& text, const char* flag) {
  const auto v = values_of(text, flag);
  require(v.size() == 1, std::string("--") + flag + " takes a single value here");
  return v.front();
}

void validate_common(const Config& c) {
  require(c.n >= 3, "--n must be >= 3");
  require(c.tol > 0.0, "--tol must be > 0");
  require(std::isfinite(c.theta), "--theta must be finite");
  require(c.format == "csv" || c.format == "json", "--format must be csv or json");
  require(c.resolution >= 64 && c.resolution % 2 == 0, "--resolution must be even and >= 64");
  require(c.jobs >= 1, "--jobs must be >= 1");
  require(c.step > 0.0 && c.step < 0.5, "--step must lie in (0, 0.5)");
  require(c.max_outer >= 2, "--max-outer must be >= 2");
}

Metadata solver_metadata(std::string_view sub, const Config& c) {
  auto meta = base_metadata(sub);
  meta["theta"] = c.theta;
  meta["n"] = c.n;
  meta["n_fine"] = 2 * c.n + 1;
  meta["tol"] = c.tol;
  return meta;
}

// Single-row CSV for scalar reports.
void write_flat_csv(std::ostream& os, const ojson& doc) {
  for (const auto& [key, value] : doc.at("metadata").items()) {
    os << "# " << key << '=' << (value.is_string() ? value.get<std::string>() : value.dump()) << '\n';
  }
  std::string header;
  std::string row;
  for (const auto& [key, value] : doc.items()) {
    if (key == "schema" || key == "metadata" || value.is_array() || value.is_object()) continue;
    header += (header.empty() ? "" : ",") + key;
    std::string cell;
    if (value.is_number_float()) {
      cell = format_double(value.get<double>());
    } else if (value.is_null()) {
      cell = "nan";
    } else if (value.is_boolean()) {
      cell = value.get<bool>() ? "1" : "0";
    } else {
      cell = value.is_string() ? value.get<std::string>() : value.dump();
    }
    row += (row.empty() ? "" : ",") + cell;
  }
  os << header << '\n' << row << '\n';
}

int cmd_figure1(const Config& c, const std::vector<double>& betas, std::ostream& os,
                std::string_view sub) {
  const auto rows = figure1_data(betas, c.resolution);
  auto meta = base_metadata(sub);
  meta["resolution"] = c.resolution;
  meta["richardson_pair"] = std::to_string(c.resolution / 2) + "/" + std::to_string(c.resolution);
  meta["c"] = c_constant();
  if (c.format == "json") {
    os << figure1_json(rows, meta).dump(2) << '\n';
  } else {
    write_figure1_csv(os, rows, meta);
  }
  return kOk;
}

int cmd_eigen(const Config& c, std::ostream& os) {
  const double a = single_value(c.a, "a");
  require(a > 0.0, "--a must be > 0");
  const double B = single_value(c.B, "B");
  const GridSpec grid(c.n);
  const FieldGauge gauge(B, c.theta);
  if (!c.dump_matrix.empty()) {
    std::ofstream dump(c.dump_matrix);
    require(static_cast<bool>(dump), "cannot open --dump-matrix file " + c.dump_matrix);
    assemble_hamiltonian(grid, gauge, Aspect(a)).write_coordinates(dump);
  }
  SolverOptions so;
  so.tol = c.tol;
  const auto s = lambda1_solve(Aspect(a), gauge, grid, so);

  ojson doc;
  doc["schema"] = kJsonSchema;
  doc["metadata"] = solver_metadata("eigen", c);
  doc["a"] = a;
  doc["B"] = B;
  doc["theta"] = c.theta;
  doc["n"] = c.n;
  doc["lambda_coarse"] = s.coarse;
  doc["lambda_fine"] = s.fine;
  doc["lambda"] = s.lambda;
  doc["residual"] = s.residual;
  doc["iterations"] = s.iterations;
  if (c.format == "json") {
    os << doc.dump(2) << '\n';
  } else {
    write_flat_csv(os, doc);
  }
  return kOk;
}

int cmd_bounds(const Config& c, std::ostream& os) {
  const auto as = positive_values(c.a, "a");
  const auto Bs = values_of(c.B, "B");
  auto meta = base_metadata("bounds");
  meta["resolution"] = c.resolution;
  ojson doc;
  doc["schema"] = kJsonSchema;
  doc["metadata"] = meta;
  ojson rows = ojson::array();
  for (double a : as) {
    for (double B : Bs) {
      const auto lo = lower_bounds(a, B, c.resolution);
      ojson r;
      r["a"] = a;
      r["B"] = B;
      r["lower_dia"] = lo.dia;
      r["lower_landau"] = lo.landau;
      r["lower_strip"] = lo.strip;
      r["upper_quad"] = upper_bound_quadratic(a, B);
      r["upper_nu"] = upper_bound_nu(a, B, c.resolution);
      r["in_thm12_region"] = theorem12_region(Aspect(a), B);
      rows.push_back(r);
    }
  }
  doc["records"] = rows;
  if (c.format == "json") {
    os << doc.dump(2) << '\n';
    return kOk;
  }
  for (const auto& [key, value] : meta.items()) {
    os << "# " << key << '=' << (value.is_string() ? value.get<std::string>() : value.dump()) << '\n';
  }
  os << "a,B,lower_dia,lower_landau,lower_strip,upper_quad,upper_nu,in_thm12_region\n";
  for (const auto& r : rows) {
    os << format_double(r["a"]) << ',' << format_double(r["B"]) << ','
       << format_double(r["lower_dia"]) << ',' << format_double(r["lower_landau"]) << ','
       << format_double(r["lower_strip"]) << ',' << format_double(r["upper_quad"]) << ','
       << format_double(r["upper_nu"]) << ',' << (r["in_thm12_region"].get<bool>() ? 1 : 0)
       << '\n';
  }
  return kOk;
}

int cmd_scan(const Config& c, std::ostream& os) {
  const auto as = positive_values(c.a, "a");
  const auto Bs = values_of(c.B, "B");
  ScanOptions so;
  so.tol = c.tol;
  so.jobs = c.jobs;
  so.nu_resolution = c.resolution;
  const auto records = scan_conjecture(as, Bs, c.theta, GridSpec(c.n), so);
  auto meta = solver_metadata("scan", c);
  meta["nu_resolution"] = c.resolution;
  double worst = 0.0;
  int failed = 0;
  for (const auto& r : records) {
    if (r.ok) worst = std::max(worst, r.residual);
    failed += r.ok ? 0 : 1;
  }
  meta["max_residual"] = worst;
  meta["failed_points"] = failed;
  if (c.format == "json") {
    os << scan_json(records, meta).dump(2) << '\n';
  } else {
    write_scan_csv(os, records, meta);
  }
  return failed == 0 ? kOk : kSolverFailure;
}

int cmd_derivs(const Config& c, std::ostream& os) {
  const double B = single_value(c.B, "B");
  const auto report = derivative_report(B, GridSpec(c.n), c.step, c.tol);
  auto meta = solver_metadata("derivs", c);
  meta["theta"] = 0.5;
  const auto doc = deriv_json(report, meta);
  if (c.format == "json") {
    os << doc.dump(2) << '\n';
  } else {
    write_flat_csv(os, doc);
  }
  return kOk;
}

int cmd_mu(const Config& c, std::ostream& os) {
  const double B = single_value(c.B, "B");
  MuOptions mo;
  mo.max_outer = c.max_outer;
  mo.solver_tol = c.tol;
  mo.concurrent = false;
  const auto result = minimize_J(B, c.theta, GridSpec(c.n), mo);
  auto meta = solver_metadata("mu", c);
  meta.erase("n_fine");  // single grid
  meta["B"] = B;
  meta["objective_tol"] = mo.tol;
  meta["max_outer"] = c.max_outer;
  const auto doc = mu_json(result, meta);
  if (c.format == "json") {
    os << doc.dump(2) << '\n';
  } else {
    write_flat_csv(os, doc);
  }
  return result.converged ? kOk : kSolverFailure;
}

void report_error(std::ostream& err, int status, const std::string& message) {
  ojson e;
  e["error"] = message;
  e["status"] = status;
  err << e.dump() << '\n';
}

}  // namespace

std::vector<double> parse_values(const std::string& text) {
  if (text.empty() || text.back() == ',') throw std::invalid_argument("empty list item");
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  const auto number = [](const std::string& s) {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw std::invalid_argument("bad number '" + s + "'");
    }
  };
  while (std::getline(ss, item, ',')) {
    if (item.empty()) throw std::invalid_argument("empty list item");
    const auto first = item.find(':');
    if (first == std::string::npos) {
      out.push_back(number(item));
      continue;
    }
    const auto second = item.find(':', first + 1);
    if (second == std::string::npos) throw std::invalid_argument("range needs start:stop:step");
    const double start = number(item.substr(0, first));
    const double stop = number(item.substr(first + 1, second - first - 1));
    const double step = number(item.substr(second + 1));
    if (!(step > 0.0) || stop < start) throw std::invalid_argument("range needs step > 0 and stop >= start");
    const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9));
    if (count > 1000000) throw std::invalid_argument("range too long");
    // Multiplication keeps values like 0.55 free of accumulated drift.
    for (long k = 0; k <= count; ++k) {
      const double v = start + static_cast<double>(k) * step;
      out.push_back(std::round(v * 1e12) / 1e12);
    }
  }
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config c;
  CLI::App app{"magrect: lowest magnetic Dirichlet eigenvalue on unit-area rectangles"};
  app.require_subcommand(1);
  app.footer(
      "Value lists accept comma-separated numbers and start:stop:step ranges, e.g. --a 0.5:2:0.05 "
      "or --B 0,0.5,1.");

  const auto add_output = [&c](CLI::App* sub) {
    sub->add_option("--format", c.format, "csv or json")->capture_default_str();
    sub->add_option("--output,-o", c.output, "output file, - for stdout")->capture_default_str();
  };
  const auto add_solver = [&c](CLI::App* sub) {
    sub->add_option("--n", c.n, "coarse interior points per axis (fine grid: 2n+1)")
        ->capture_default_str();
    sub->add_option("--tol", c.tol, "eigen residual tolerance")->capture_default_str();
    sub->add_option("--theta", c.theta, "gauge parameter")->capture_default_str();
  };

  auto* nu_cmd = app.add_subcommand("nu", "nu(beta) with its bounds");
  nu_cmd->add_option("--beta", c.betas, "beta values")->required();
  nu_cmd->add_option("--resolution", c.resolution, "fine 1D intervals")->capture_default_str();
  add_output(nu_cmd);

  auto* fig_cmd = app.add_subcommand("figure1", "nu(beta) with pi^2 + c beta^2 and |beta|");
  fig_cmd->add_option("--betas", c.betas, "beta values")->capture_default_str();
  fig_cmd->add_option("--resolution", c.resolution, "fine 1D intervals")->capture_default_str();
  add_output(fig_cmd);

  auto* eig_cmd = app.add_subcommand("eigen", "extrapolated lambda_1 for one (a, B)");
  eig_cmd->add_option("--a", c.a, "side parameter a > 0")->capture_default_str();
  eig_cmd->add_option("--B", c.B, "field strength")->capture_default_str();
  eig_cmd->add_option("--dump-matrix", c.dump_matrix, "write the coarse matrix as 'row col re im'");
  add_solver(eig_cmd);
  add_output(eig_cmd);

  auto* bnd_cmd = app.add_subcommand("bounds", "analytic lower and upper bounds");
  bnd_cmd->add_option("--a", c.a, "side parameters")->capture_default_str();
  bnd_cmd->add_option("--B", c.B, "field strengths")->capture_default_str();
  bnd_cmd->add_option("--resolution", c.resolution, "fine 1D intervals for nu")->capture_default_str();
  add_output(bnd_cmd);

  auto* scan_cmd = app.add_subcommand("scan", "sweep lambda_1 over (a, B) against the square");
  c.a = "0.5:2:0.05";
  c.B = "0,0.5,1,2,5,10,20";
  scan_cmd->add_option("--a", c.a, "side parameters")->capture_default_str();
  scan_cmd->add_option("--B", c.B, "field strengths")->capture_default_str();
  scan_cmd->add_option("--jobs,-j", c.jobs, "parallel sweep points")->capture_default_str();
  scan_cmd->add_option("--resolution", c.resolution, "fine 1D intervals for nu")->capture_default_str();
  add_solver(scan_cmd);
  add_output(scan_cmd);
  scan_cmd->get_option("--tol")->default_str("1e-07");

  auto* der_cmd = app.add_subcommand("derivs", "perturbation report at the square (theta = 1/2)");
  der_cmd->add_option("--B", c.B, "field strength")->capture_default_str();
  der_cmd->add_option("--step", c.step, "finite-difference step in a")->capture_default_str();
  der_cmd->add_option("--n", c.n, "coarse interior points per axis")->capture_default_str();
  der_cmd->add_option("--tol", c.tol, "eigen residual tolerance")->capture_default_str();
  add_output(der_cmd);
  der_cmd->get_option("--format")->default_str("json");
  der_cmd->get_option("--B")->default_str("0");

  auto* mu_cmd = app.add_subcommand("mu", "alternating minimisation of 2 ||d1 u|| ||d2 u||");
  mu_cmd->add_option("--B", c.B, "field strength")->capture_default_str();
  mu_cmd->add_option("--max-outer", c.max_outer, "outer iterations per restart")->capture_default_str();
  add_solver(mu_cmd);
  add_output(mu_cmd);
  mu_cmd->get_option("--format")->default_str("json");
  mu_cmd->get_option("--B")->default_str("0");

  // Subcommand defaults differ; reset to the single-point defaults unless scanning.
  const bool scanning = !args.empty() && args.front() == "scan";
  if (!scanning) {
    c.a = "1";
    c.B = "0";
  }
  if (!args.empty() && args.front() == "derivs") c.format = "json";
  if (!args.empty() && args.front() == "mu") c.format = "json";
  if (scanning) c.tol = 1e-7;

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    report_error(err, kUsageError, e.what());
    return kUsageError;
  }

  std::ofstream file;
  std::ostream* os = &out;
  try {
    validate_common(c);
    if (c.output != "-") {
      file.open(c.output);
      require(static_cast<bool>(file), "cannot open output file " + c.output);
      os = &file;
    }
    const auto* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    if (name == "nu") return cmd_figure1(c, values_of(c.betas, "beta"), *os, "nu");
    if (name == "figure1") return cmd_figure1(c, values_of(c.betas, "betas"), *os, "figure1");
    if (name == "eigen") return cmd_eigen(c, *os);
    if (name == "bounds") return cmd_bounds(c, *os);
    if (name == "scan") return cmd_scan(c, *os);
    if (name == "derivs") return cmd_derivs(c, *os);
    if (name == "mu") return cmd_mu(c, *os);
    throw UsageError("unknown subcommand " + name);
  } catch (const UsageError& e) {
    report_error(err, kUsageError, e.what());
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    report_error(err, kUsageError, e.what());
    return kUsageError;
  } catch (const ConvergenceError& e) {
    report_error(err, kSolverFailure, e.what());
    return kSolverFailure;
  } catch (const DegenerateEigenvalueError& e) {
    report_error(err, kSolverFailure, e.what());
    return kSolverFailure;
  } catch (const std::exception& e) {
    report_error(err, kSolverFailure, e.what());
    return kSolverFailure;
  }
}

}  // namespace magrect::cli
