#include "magrect/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace magrect {

namespace {

using ojson = nlohmann::ordered_json;

constexpr const char* kFigure1Header = "beta,nu,quad_upper,abs_beta";
constexpr const char* kScanHeader =
    "a,B,theta,n,lambda,lower_dia,lower_landau,lower_strip,upper_quad,upper_nu,margin,in_thm12_region";

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

void write_metadata(std::ostream& out, const Metadata& meta) {
  for (const auto& [key, value] : meta.items()) {
    out << "# " << key << '=' << (value.is_string() ? value.get<std::string>() : value.dump())
        << '\n';
  }
}

// Skips metadata and the header row, checking the header matches.
std::vector<std::vector<std::string>> read_rows(std::istream& in, const char* header) {
  std::string line;
  bool seen_header = false;
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    if (!seen_header) {
      if (line != header) throw std::runtime_error("unexpected CSV header: " + line);
      seen_header = true;
      continue;
    }
    rows.push_back(split(line, ','));
  }
  if (!seen_header) throw std::runtime_error("CSV header missing");
  return rows;
}

ojson number(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

double number_or_nan(const ojson& v) {
  return v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
}

ojson trace_json(const std::vector<double>& trace) {
  ojson out = ojson::array();
  for (double v : trace) out.push_back(number(v));
  return out;
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_double(std::string_view text) {
  const std::string s(text);
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw std::invalid_argument("not a number: '" + s + "'");
  }
  return v;
}

Metadata base_metadata(std::string_view subcommand) {
  Metadata meta;
  meta["tool"] = "magrect";
  meta["version"] = std::string(kToolVersion);
  meta["subcommand"] = std::string(subcommand);
  return meta;
}

std::vector<std::pair<std::string, std::string>> read_csv_metadata(std::istream& in) {
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  while (in.peek() == '#' && std::getline(in, line)) {
    const auto eq = line.find('=');
    if (line.size() < 2 || eq == std::string::npos || line.rfind("# failed:", 0) == 0) continue;
    out.emplace_back(line.substr(2, eq - 2), line.substr(eq + 1));
  }
  return out;
}

void write_figure1_csv(std::ostream& out, const std::vector<NuPoint>& rows, const Metadata& meta) {
  write_metadata(out, meta);
  out << kFigure1Header << '\n';
  for (const auto& r : rows) {
    out << format_double(r.beta) << ',' << format_double(r.nu) << ','
        << format_double(r.upper_check) << ',' << format_double(r.asymptote) << '\n';
  }
}

std::vector<NuPoint> read_figure1_csv(std::istream& in) {
  std::vector<NuPoint> out;
  for (const auto& f : read_rows(in, kFigure1Header)) {
    if (f.size() != 4) throw std::runtime_error("figure1 CSV: expected 4 fields");
    NuPoint p;
    p.beta = parse_double(f[0]);
    p.nu = parse_double(f[1]);
    p.upper_check = parse_double(f[2]);
    p.asymptote = parse_double(f[3]);
    p.lower_check = p.upper_check - c_constant() * p.beta * p.beta;
    out.push_back(p);
  }
  return out;
}

ojson figure1_json(const std::vector<NuPoint>& rows, const Metadata& meta) {
  ojson doc;
  doc["schema"] = kJsonSchema;
  doc["metadata"] = meta;
  ojson list = ojson::array();
  for (const auto& r : rows) {
    ojson row;
    row["beta"] = r.beta;
    row["nu"] = r.nu;
    row["quad_upper"] = r.upper_check;
    row["abs_beta"] = r.asymptote;
    row["within_bounds"] = r.within_bounds();
    list.push_back(row);
  }
  doc["records"] = list;
  return doc;
}

void write_scan_csv(std::ostream& out, const std::vector<ScanRecord>& rows, const Metadata& meta) {
  write_metadata(out, meta);
  for (const auto& r : rows) {
    if (!r.ok) {
      out << "# failed: a=" << format_double(r.a) << " B=" << format_double(r.B) << ": " << r.error
          << '\n';
    }
  }
  out << kScanHeader << '\n';
  for (const auto& r : rows) {
    out << format_double(r.a) << ',' << format_double(r.B) << ',' << format_double(r.theta) << ','
        << r.n << ',' << format_double(r.lambda) << ',' << format_double(r.lower_dia) << ','
        << format_double(r.lower_landau) << ',' << format_double(r.lower_strip) << ','
        << format_double(r.upper_quad) << ',' << format_double(r.upper_nu) << ','
        << format_double(r.margin) << ',' << (r.in_theorem12_region ? 1 : 0) << '\n';
  }
}

std::vector<ScanRecord> read_scan_csv(std::istream& in) {
  std::vector<ScanRecord> out;
  for (const auto& f : read_rows(in, kScanHeader)) {
    if (f.size() != 12) throw std::runtime_error("scan CSV: expected 12 fields");
    ScanRecord r;
    r.a = parse_double(f[0]);
    r.B = parse_double(f[1]);
    r.theta = parse_double(f[2]);
    r.n = std::stoi(f[3]);
    r.lambda = parse_double(f[4]);
    r.lower_dia = parse_double(f[5]);
    r.lower_landau = parse_double(f[6]);
    r.lower_strip = parse_double(f[7]);
    r.upper_quad = parse_double(f[8]);
    r.upper_nu = parse_double(f[9]);
    r.margin = parse_double(f[10]);
    r.in_theorem12_region = f[11] == "1";
    r.ok = !std::isnan(r.lambda);
    out.push_back(r);
  }
  return out;
}

ojson scan_json(const std::vector<ScanRecord>& rows, const Metadata& meta) {
  ojson doc;
  doc["schema"] = kJsonSchema;
  doc["metadata"] = meta;
  ojson list = ojson::array();
  for (const auto& r : rows) {
    ojson row;
    row["a"] = r.a;
    row["B"] = r.B;
    row["theta"] = r.theta;
    row["n"] = r.n;
    row["lambda"] = number(r.lambda);
    row["lower_dia"] = r.lower_dia;
    row["lower_landau"] = r.lower_landau;
    row["lower_strip"] = r.lower_strip;
    row["upper_quad"] = r.upper_quad;
    row["upper_nu"] = r.upper_nu;
    row["margin"] = number(r.margin);
    row["in_thm12_region"] = r.in_theorem12_region;
    row["tol"] = r.tol;
    row["iterations"] = r.iterations;
    row["residual"] = number(r.residual);
    row["ok"] = r.ok;
    if (!r.ok) row["error"] = r.error;
    list.push_back(row);
  }
  doc["records"] = list;
  return doc;
}

std::vector<ScanRecord> scan_from_json(const ojson& doc) {
  if (doc.at("schema").get<int>() != kJsonSchema) throw std::runtime_error("unsupported schema");
  std::vector<ScanRecord> out;
  for (const auto& row : doc.at("records")) {
    ScanRecord r;
    r.a = row.at("a").get<double>();
    r.B = row.at("B").get<double>();
    r.theta = row.at("theta").get<double>();
    r.n = row.at("n").get<int>();
    r.lambda = number_or_nan(row.at("lambda"));
    r.lower_dia = row.at("lower_dia").get<double>();
    r.lower_landau = row.at("lower_landau").get<double>();
    r.lower_strip = row.at("lower_strip").get<double>();
    r.upper_quad = row.at("upper_quad").get<double>();
    r.upper_nu = row.at("upper_nu").get<double>();
    r.margin = number_or_nan(row.at("margin"));
    r.in_theorem12_region = row.at("in_thm12_region").get<bool>();
    r.tol = row.at("tol").get<double>();
    r.iterations = row.at("iterations").get<int>();
    r.residual = number_or_nan(row.at("residual"));
    r.ok = row.at("ok").get<bool>();
    if (row.contains("error")) r.error = row.at("error").get<std::string>();
    out.push_back(r);
  }
  return out;
}

ojson deriv_json(const DerivReport& r, const Metadata& meta) {
  ojson doc;
  doc["schema"] = kJsonSchema;
  doc["metadata"] = meta;
  doc["B"] = r.B;
  doc["step"] = r.step;
  doc["lambda_at_1"] = number(r.lambda_at_1);
  doc["first_derivative_fd"] = number(r.first_derivative_fd);
  doc["half_second_derivative_fd"] = number(r.half_second_derivative_fd);
  doc["fd_truncation_estimate"] = number(r.fd_truncation_estimate);
  doc["half_second_derivative_formula"] = number(r.half_second_derivative_formula);
  doc["udot_norm"] = number(r.udot_norm);
  doc["eigen_gap"] = number(r.eigen_gap);
  doc["simple"] = r.simple;
  doc["routes_agree"] = r.routes_agree;
  doc["warnings"] = r.warnings;
  return doc;
}

ojson mu_json(const MuResult& m, const Metadata& meta) {
  ojson doc;
  doc["schema"] = kJsonSchema;
  doc["metadata"] = meta;
  doc["mu"] = number(m.mu);
  doc["alpha"] = number(m.alpha);
  doc["iterations"] = m.iterations;
  doc["converged"] = m.converged;
  doc["symmetry_residual"] = number(m.symmetry_residual);
  doc["restarts"] = m.restarts;
  doc["restart_spread"] = number(m.restart_spread);
  doc["objective_trace"] = trace_json(m.objective_trace);
  ojson runs = ojson::array();
  for (const auto& r : m.runs) {
    ojson run;
    run["alpha_seed"] = r.alpha_seed;
    run["phase_seed"] = r.phase_seed;
    run["mu"] = number(r.mu);
    run["alpha"] = number(r.alpha);
    run["iterations"] = r.iterations;
    run["converged"] = r.converged;
    run["objective_trace"] = trace_json(r.objective_trace);
    if (!r.error.empty()) run["error"] = r.error;
    runs.push_back(run);
  }
  doc["runs"] = runs;
  return doc;
}

}  // namespace magrect
