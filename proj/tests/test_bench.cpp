#include "test_support.hpp"

#include "manitrans/bench.hpp"
#include "manitrans/errors.hpp"

#include <doctest.h>

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

using namespace manitrans;

namespace {

BenchConfig small(Manifold m) {
  BenchConfig c;
  c.manifold = m;
  c.n = 8;
  c.d = 3;
  c.alpha = m == Manifold::so ? 0.8 : 0.5;
  if (m == Manifold::flag) c.d_list = {2, 2};
  if (m == Manifold::gl) c.n = 4;
  c.t_grid = {0.0, 0.5, 2.0};
  c.num_vectors = 4;
  c.repeats = 1;
  return c;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("manifold names") {
  for (auto m : {Manifold::stiefel, Manifold::flag, Manifold::grassmann, Manifold::so, Manifold::gl})
    CHECK(parse_manifold(manifold_name(m)) == m);
  CHECK_THROWS_AS(parse_manifold("torus"), ConfigError);
}

TEST_CASE("config validation") {
  CHECK_NOTHROW(normalized(small(Manifold::stiefel)));
  auto with = [](Manifold m, auto edit) {
    BenchConfig c = small(m);
    edit(c);
    return c;
  };
  CHECK_THROWS_AS(normalized(with(Manifold::flag, [](auto& c) { c.d_list.clear(); })), ConfigError);
  CHECK_THROWS_AS(normalized(with(Manifold::stiefel, [](auto& c) { c.d_list = {1, 2}; })), ConfigError);
  CHECK_THROWS_AS(normalized(with(Manifold::stiefel, [](auto& c) { c.d = 8; })), ConfigError);
  CHECK_THROWS_AS(normalized(with(Manifold::stiefel, [](auto& c) { c.d = 0; })), ConfigError);
  CHECK_THROWS_AS(normalized(with(Manifold::stiefel, [](auto& c) { c.alpha = 0.0; })), ConfigError);
  CHECK_THROWS_AS(normalized(with(Manifold::grassmann, [](auto& c) { c.alpha = 1.0; })), ConfigError);
  CHECK_THROWS_AS(normalized(with(Manifold::flag, [](auto& c) { c.alpha = 0.7; })), ConfigError);
  CHECK_THROWS_AS(normalized(with(Manifold::gl, [](auto& c) { c.beta = -1.0; })), ConfigError);
  CHECK_THROWS_AS(normalized(with(Manifold::stiefel, [](auto& c) { c.t_grid.clear(); })), ConfigError);
  CHECK_THROWS_AS(normalized(with(Manifold::stiefel, [](auto& c) { c.t_grid = {1.0, 1.0}; })), ConfigError);
  CHECK_THROWS_AS(normalized(with(Manifold::stiefel, [](auto& c) { c.t_grid = {-1.0}; })), ConfigError);
  CHECK_THROWS_AS(normalized(with(Manifold::stiefel, [](auto& c) { c.repeats = 0; })), ConfigError);
  CHECK_THROWS_AS(normalized(with(Manifold::stiefel, [](auto& c) { c.num_vectors = 0; })), ConfigError);
  CHECK_THROWS_AS(normalized(with(Manifold::stiefel, [](auto& c) { c.n = 100; }), Index{64}), ConfigError);

  auto flag = normalized(with(Manifold::flag, [](auto& c) { c.d_list = {1, 3, 2}; c.n = 9; }));
  CHECK(flag.d == 6);
  auto gl = normalized(small(Manifold::gl));
  CHECK(gl.d == gl.n);
  CHECK(metric_parameter(gl) == gl.beta);
}

TEST_CASE("format_double round-trips") {
  for (double x : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 5e-324, 123456789.125}) {
    const std::string s = format_double(x);
    double back = 0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    CHECK(back == x);
  }
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(2.0) == "2");
}

TEST_CASE("loglog slope") {
  CHECK(loglog_slope({1, 10, 100}, {3, 30, 300}) == doctest::Approx(1.0));
  CHECK(loglog_slope({2, 4, 8}, {4, 16, 64}) == doctest::Approx(2.0));
  CHECK(loglog_slope({1, 2, 3}, {5, 5, 5}) == doctest::Approx(0.0));
  CHECK_THROWS_AS(loglog_slope({1}, {1}), ValidationError);
  CHECK_THROWS_AS(loglog_slope({1, 2}, {0, 1}), ValidationError);
}

TEST_CASE("cases are tangent and unit speed") {
  for (auto m : {Manifold::stiefel, Manifold::flag, Manifold::grassmann, Manifold::so, Manifold::gl}) {
    const std::string name = manifold_name(m);
    CAPTURE(name);
    const BenchConfig c = normalized(small(m));
    Rng rng(c.seed);
    auto tc = make_case(c, rng);
    CHECK(std::abs(tc.metric(tc.point, tc.xi, tc.xi) - 1.0) <= 1e-12);
    CHECK(tc.tangency(tc.point, tc.xi) <= 1e-12);
    for (const Mat& v : sample_vectors(tc, rng, 6)) {
      const double len = std::sqrt(tc.metric(tc.point, v, v));
      CHECK(std::abs(len - std::round(len)) <= 1e-9);
      CHECK(len >= 1.0 - 1e-9);
      CHECK(len <= 60.0 + 1e-9);
      CHECK(tc.tangency(tc.point, v) <= 1e-12);
    }
  }
}

TEST_CASE("isometry experiment") {
  for (auto m : {Manifold::stiefel, Manifold::flag, Manifold::grassmann, Manifold::so, Manifold::gl}) {
    const std::string name = manifold_name(m);
    CAPTURE(name);
    const BenchConfig c = small(m);
    auto rows = run_isometry(c);
    REQUIRE(rows.size() == c.t_grid.size());
    CHECK(rows[0].max_gram_drift == 0.0);
    for (const auto& r : rows) CHECK(r.max_gram_drift <= 1e-9);

    // same seed, same bytes
    std::ostringstream a, b;
    write_csv(a, rows);
    write_csv(b, run_isometry(c));
    CHECK(a.str() == b.str());
  }
}

TEST_CASE("csv layout") {
  BenchConfig c = small(Manifold::stiefel);
  c.t_grid = {0.25};
  std::ostringstream os;
  write_csv(os, run_timing(c));
  auto ls = lines(os.str());
  REQUIRE(ls.size() == 3);
  CHECK(ls[0] == kCsvVersionLine);
  CHECK(ls[1] == "manifold,n,d,alpha,t,median_seconds,residual_check");
  CHECK(ls[2].rfind("stiefel,8,3,0.5,0.25,", 0) == 0);

  std::ostringstream vs;
  write_csv(vs, run_verify(c));
  auto vl = lines(vs.str());
  REQUIRE(vl.size() == 3);
  CHECK(vl[1] == "manifold,n,d,alpha,t,transport_residual,oracle_error,tangency,pass");
  CHECK(vl[2].substr(vl[2].size() - 4) == "true");
}

TEST_CASE("verification sweep") {
  for (auto m : {Manifold::stiefel, Manifold::flag, Manifold::grassmann, Manifold::so, Manifold::gl}) {
    const std::string name = manifold_name(m);
    CAPTURE(name);
    BenchConfig c = small(m);
    c.t_grid = {0.0, 1.0, 2.0};
    for (const auto& r : run_verify(c)) {
      CHECK(r.pass);
      CHECK(r.oracle_error <= 1e-6);
      CHECK(r.transport_residual <= 1e-5);
    }
  }
  BenchConfig big = small(Manifold::stiefel);
  big.n = 65;
  CHECK_THROWS_AS(run_verify(big), ConfigError);
}
