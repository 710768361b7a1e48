#include <doctest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <random>
#include <sstream>

#include "magrect/report.hpp"

using namespace magrect;

namespace {

bool same_bits(double x, double y) {
  if (std::isnan(x) && std::isnan(y)) return true;
  return std::memcmp(&x, &y, sizeof x) == 0;
}

ScanRecord random_record(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> e(-30, 30);
  const auto wild = [&] { return std::ldexp(u(rng), e(rng)); };
  ScanRecord r;
  r.a = std::abs(wild()) + 1e-3;
  r.B = wild();
  r.theta = u(rng);
  r.n = 3 + static_cast<int>(std::abs(u(rng)) * 500);
  r.lambda = wild();
  r.lower_dia = wild();
  r.lower_landau = wild();
  r.lower_strip = wild();
  r.upper_quad = wild();
  r.upper_nu = wild();
  r.margin = wild();
  r.in_theorem12_region = u(rng) > 0.0;
  return r;
}

void check_same(const ScanRecord& x, const ScanRecord& y) {
  CHECK(same_bits(x.a, y.a));
  CHECK(same_bits(x.B, y.B));
  CHECK(same_bits(x.theta, y.theta));
  CHECK(x.n == y.n);
  CHECK(same_bits(x.lambda, y.lambda));
  CHECK(same_bits(x.lower_dia, y.lower_dia));
  CHECK(same_bits(x.lower_landau, y.lower_landau));
  CHECK(same_bits(x.lower_strip, y.lower_strip));
  CHECK(same_bits(x.upper_quad, y.upper_quad));
  CHECK(same_bits(x.upper_nu, y.upper_nu));
  CHECK(same_bits(x.margin, y.margin));
  CHECK(x.in_theorem12_region == y.in_theorem12_region);
}

}  // namespace

TEST_CASE("format_double and parse_double round-trip bit for bit") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<std::uint64_t> bits;
  for (int k = 0; k < 2000; ++k) {
    double x = 0.0;
    const std::uint64_t b = bits(rng);
    std::memcpy(&x, &b, sizeof x);
    if (std::isnan(x)) continue;
    CHECK(same_bits(parse_double(format_double(x)), x));
  }
  CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(std::isinf(parse_double("inf")));
  CHECK(std::isnan(parse_double("nan")));
  CHECK(parse_double("0.1") == 0.1);
  CHECK_THROWS_AS((void)parse_double("1.5x"), std::invalid_argument);
  CHECK_THROWS_AS((void)parse_double(""), std::invalid_argument);
}

TEST_CASE("scan CSV round-trip") {
  std::mt19937_64 rng(23);
  std::vector<ScanRecord> rows;
  for (int k = 0; k < 50; ++k) rows.push_back(random_record(rng));
  rows[7].ok = false;
  rows[7].lambda = std::numeric_limits<double>::quiet_NaN();
  rows[7].margin = std::numeric_limits<double>::quiet_NaN();
  rows[7].error = "no convergence";

  auto meta = base_metadata("scan");
  meta["n"] = 63;
  meta["tol"] = 1e-7;
  std::stringstream ss;
  write_scan_csv(ss, rows, meta);
  const std::string text = ss.str();
  CHECK(text.find("# failed: a=") != std::string::npos);

  std::stringstream in1(text);
  const auto md = read_csv_metadata(in1);
  REQUIRE(md.size() == 5);
  CHECK(md[0].first == "tool");
  CHECK(md[2].second == "scan");
  CHECK(md[3].first == "n");

  std::stringstream in2(text);
  const auto back = read_scan_csv(in2);
  REQUIRE(back.size() == rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) check_same(rows[k], back[k]);
  CHECK_FALSE(back[7].ok);
  CHECK(back[8].ok);
}

TEST_CASE("scan JSON round-trip") {
  std::mt19937_64 rng(29);
  std::vector<ScanRecord> rows;
  for (int k = 0; k < 50; ++k) rows.push_back(random_record(rng));
  rows[3].ok = false;
  rows[3].lambda = std::numeric_limits<double>::quiet_NaN();
  rows[3].error = "failed";
  const auto doc = scan_json(rows, base_metadata("scan"));
  CHECK(doc["schema"] == kJsonSchema);
  CHECK(doc["metadata"]["tool"] == "magrect");
  const auto back = scan_from_json(nlohmann::ordered_json::parse(doc.dump()));
  REQUIRE(back.size() == rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) check_same(rows[k], back[k]);
  CHECK_FALSE(back[3].ok);
}

TEST_CASE("figure1 CSV round-trip") {
  std::vector<NuPoint> rows;
  for (double beta : {0.0, 0.5, 1.0 / 3.0, 50.0}) {
    NuPoint p;
    p.beta = beta;
    p.nu = 9.8696044010893586 + beta * beta / 7.0;
    p.lower_check = 9.8696044010893586;
    p.upper_check = p.lower_check + 0.0327 * beta * beta;
    p.asymptote = beta;
    rows.push_back(p);
  }
  std::stringstream ss;
  write_figure1_csv(ss, rows, base_metadata("figure1"));
  CHECK(ss.str().find("beta,nu,quad_upper,abs_beta\n") != std::string::npos);
  const auto back = read_figure1_csv(ss);
  REQUIRE(back.size() == rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    CHECK(same_bits(back[k].beta, rows[k].beta));
    CHECK(same_bits(back[k].nu, rows[k].nu));
    CHECK(same_bits(back[k].upper_check, rows[k].upper_check));
    CHECK(same_bits(back[k].asymptote, rows[k].asymptote));
  }
  const auto doc = figure1_json(rows, base_metadata("figure1"));
  CHECK(doc["records"].size() == rows.size());
  CHECK(doc["records"][1]["nu"].get<double>() == rows[1].nu);
}

TEST_CASE("malformed CSV is rejected") {
  std::stringstream bad_header("# tool=magrect\nbeta,nu\n1,2\n");
  CHECK_THROWS((void)read_figure1_csv(bad_header));
  std::stringstream short_row("beta,nu,quad_upper,abs_beta\n1,2,3\n");
  CHECK_THROWS((void)read_figure1_csv(short_row));
  std::stringstream empty("");
  CHECK_THROWS((void)read_scan_csv(empty));
}

TEST_CASE("derivative and mu documents") {
  DerivReport d;
  d.B = 0.5;
  d.half_second_derivative_formula = 39.47;
  d.warnings = {"gap small"};
  const auto dj = deriv_json(d, base_metadata("derivs"));
  CHECK(dj["schema"] == 1);
  CHECK(dj["B"].get<double>() == 0.5);
  CHECK(dj["warnings"][0] == "gap small");

  MuResult m;
  m.mu = 20.1;
  m.objective_trace = {21.0, 20.2, 20.1};
  m.converged = true;
  const auto mj = mu_json(m, base_metadata("mu"));
  CHECK(mj["mu"].get<double>() == 20.1);
  CHECK(mj["objective_trace"].size() == 3);
  CHECK(mj["converged"] == true);
}
