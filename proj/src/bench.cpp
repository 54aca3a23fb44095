#include "manitrans/bench.hpp"
#include "manitrans/errors.hpp"
#include "manitrans/flag_grassmann.hpp"
#include "manitrans/gl_so.hpp"
#include "manitrans/stiefel.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <memory>
#include <numeric>
#include <ostream>
#include <sstream>

namespace manitrans {

Manifold parse_manifold(const std::string& name) {
  if (name == "stiefel") return Manifold::stiefel;
  if (name == "flag") return Manifold::flag;
  if (name == "grassmann") return Manifold::grassmann;
  if (name == "so") return Manifold::so;
  if (name == "gl") return Manifold::gl;
  throw ConfigError("unknown manifold '" + name + "' (expected stiefel, flag, grassmann, so, gl)");
}

const char* manifold_name(Manifold m) {
  switch (m) {
    case Manifold::stiefel: return "stiefel";
    case Manifold::flag: return "flag";
    case Manifold::grassmann: return "grassmann";
    case Manifold::so: return "so";
    case Manifold::gl: return "gl";
  }
  return "?";
}

BenchConfig normalized(BenchConfig c, std::optional<Index> max_n) {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if (c.manifold == Manifold::flag) {
    if (c.d_list.empty()) fail("flag manifold needs --d-list");
    for (Index di : c.d_list)
      if (di < 1) fail("--d-list entries must be positive");
    c.d = std::accumulate(c.d_list.begin(), c.d_list.end(), Index{0});
  } else if (!c.d_list.empty()) {
    fail("--d-list only applies to the flag manifold");
  }
  if (c.manifold == Manifold::gl) {
    if (c.n < 1) fail("--n must be positive");
    c.d = c.n;
    if (!(c.beta > 0.0) || !std::isfinite(c.beta)) fail("gl needs a positive --beta");
  } else {
    if (c.d < 1 || c.d >= c.n) fail("need 1 <= d < n");
  }
  if (c.manifold == Manifold::flag || c.manifold == Manifold::grassmann) {
    if (c.alpha != 0.5) fail("flag and grassmann transport use the canonical metric, --alpha 0.5");
  } else if (c.manifold != Manifold::gl) {
    if (!(c.alpha > 0.0) || !std::isfinite(c.alpha)) fail("--alpha must be positive");
  }
  if (max_n && c.n > *max_n) {
    std::ostringstream os;
    os << "n = " << c.n << " exceeds the oracle cap " << *max_n << "; use a smaller --n";
    fail(os.str());
  }
  if (c.t_grid.empty()) fail("--t-grid is empty");
  for (std::size_t i = 0; i < c.t_grid.size(); ++i) {
    if (!std::isfinite(c.t_grid[i]) || c.t_grid[i] < 0.0) fail("--t-grid entries must be >= 0");
    if (i > 0 && !(c.t_grid[i] > c.t_grid[i - 1])) fail("--t-grid must be strictly increasing");
  }
  if (c.repeats < 1) fail("--repeats must be at least 1");
  if (c.num_vectors < 1) fail("--vectors must be at least 1");
  return c;
}

double metric_parameter(const BenchConfig& c) {
  return c.manifold == Manifold::gl ? c.beta : c.alpha;
}

namespace {

double rel(double x, const Mat& v) { return x / std::max(1.0, fro(v)); }

TransportCase stiefel_case(const BenchConfig& c, Rng& rng) {
  TransportCase tc;
  const double alpha = c.alpha;
  tc.point = random_stiefel(rng, c.n, c.d);
  const Mat y = tc.point;
  tc.random_direction = [y](Rng& r) { return project_tangent(y, random_normal(r, y.rows(), y.cols())); };
  tc.metric = [alpha](const Mat& p, const Mat& u, const Mat& v) {
    return metric_inner_unchecked(p, u, v, alpha);
  };
  tc.xi = random_tangent(rng, c.n, c.d, [y](const Mat& w) { return project_tangent(y, w); },
                         [y, alpha](const Mat& v) { return metric_inner_unchecked(y, v, v, alpha); });
  auto plan = std::make_shared<StiefelTransportPlan>(y, tc.xi, alpha);
  tc.transport = [plan](const std::vector<Mat>& etas, double t) { return plan->transport(etas, t); };
  tc.transport_fresh = [y, xi = tc.xi, alpha](const Mat& eta, double t) {
    return stiefel_transport(y, xi, eta, alpha, t);
  };
  tc.geodesic = [plan](double t) { return plan->geodesic(t); };
  tc.curve = [plan](double t) { return std::pair{plan->geodesic(t), plan->velocity(t)}; };
  tc.christoffel = [alpha](const Mat& p, const Mat& u, const Mat& v) {
    return stiefel_christoffel(p, u, v, alpha);
  };
  tc.tangency = [](const Mat& p, const Mat& v) { return rel(fro(sym(p.transpose() * v)), v); };
  return tc;
}

TransportCase flag_case(const BenchConfig& c, Rng& rng) {
  TransportCase tc;
  FlagSignature sig(c.d_list, c.n);
  tc.point = random_stiefel(rng, c.n, c.d);
  const Mat y = tc.point;
  auto project = [sig, y](const Mat& w) { return flag_horizontal_project(sig, y, w); };
  tc.random_direction = [project, y](Rng& r) { return project(random_normal(r, y.rows(), y.cols())); };
  tc.metric = [](const Mat& p, const Mat& u, const Mat& v) {
    return metric_inner_unchecked(p, u, v, 0.5);
  };
  tc.xi = random_tangent(rng, c.n, c.d, project,
                         [y](const Mat& v) { return metric_inner_unchecked(y, v, v, 0.5); });
  auto plan = std::make_shared<FlagTransportPlan>(sig, y, tc.xi);
  tc.transport = [plan](const std::vector<Mat>& etas, double t) { return plan->transport(etas, t); };
  tc.transport_fresh = [sig, y, xi = tc.xi](const Mat& eta, double t) {
    return flag_transport_canonical(sig, y, xi, eta, t);
  };
  tc.geodesic = [plan](double t) { return plan->geodesic(t); };
  tc.curve = [plan](double t) { return std::pair{plan->geodesic(t), plan->velocity(t)}; };
  tc.christoffel = [sig](const Mat& p, const Mat& u, const Mat& v) {
    return flag_christoffel(sig, p, u, v, 0.5);
  };
  tc.tangency = [sig](const Mat& p, const Mat& v) {
    const Mat m = p.transpose() * v;
    return rel(fro(sym(m)) + fro(sig.keep_blocks(m)), v);
  };
  return tc;
}

TransportCase grassmann_case(const BenchConfig& c, Rng& rng) {
  TransportCase tc;
  tc.point = random_stiefel(rng, c.n, c.d);
  const Mat y = tc.point;
  auto project = [y](const Mat& w) -> Mat { return w - y * (y.transpose() * w); };
  tc.random_direction = [project, y](Rng& r) { return project(random_normal(r, y.rows(), y.cols())); };
  tc.metric = [](const Mat& p, const Mat& u, const Mat& v) {
    return metric_inner_unchecked(p, u, v, 0.5);
  };
  tc.xi = random_tangent(rng, c.n, c.d, project, [](const Mat& v) { return v.squaredNorm(); });
  // the canonical Stiefel geodesic through a horizontal velocity has A = 0
  auto plan = std::make_shared<StiefelTransportPlan>(y, tc.xi, 0.5);
  tc.transport = [y, xi = tc.xi](const std::vector<Mat>& etas, double t) {
    std::vector<Mat> out;
    out.reserve(etas.size());
    for (const auto& e : etas) out.push_back(grassmann_transport(y, xi, e, t));
    return out;
  };
  tc.transport_fresh = [y, xi = tc.xi](const Mat& eta, double t) {
    return grassmann_transport(y, xi, eta, t);
  };
  tc.geodesic = [y, xi = tc.xi](double t) { return grassmann_geodesic(y, xi, t); };
  tc.curve = [plan](double t) { return std::pair{plan->geodesic(t), plan->velocity(t)}; };
  FlagSignature sig({c.d}, c.n);
  tc.christoffel = [sig](const Mat& p, const Mat& u, const Mat& v) {
    return flag_christoffel(sig, p, u, v, 0.5);
  };
  tc.tangency = [](const Mat& p, const Mat& v) { return rel(fro(p.transpose() * v), v); };
  return tc;
}

TransportCase so_case(const BenchConfig& c, Rng& rng) {
  TransportCase tc;
  auto geom = std::make_shared<SOGeometry>(c.n, c.d, c.alpha);
  tc.point = random_special_orthogonal(rng, c.n);
  const Mat x = tc.point;
  auto project = [x](const Mat& w) -> Mat { return x * skew(x.transpose() * w); };
  tc.random_direction = [project, x](Rng& r) { return project(random_normal(r, x.rows(), x.cols())); };
  tc.metric = [geom](const Mat& p, const Mat& u, const Mat& v) { return geom->inner(p, u, v); };
  tc.xi = random_tangent(rng, c.n, c.n, project,
                         [geom, x](const Mat& v) { return geom->inner(x, v, v); });
  tc.transport = [geom, x, xi = tc.xi](const std::vector<Mat>& etas, double t) {
    std::vector<Mat> out;
    out.reserve(etas.size());
    for (const auto& e : etas) out.push_back(geom->transport(x, xi, e, t));
    return out;
  };
  tc.transport_fresh = [geom, x, xi = tc.xi](const Mat& eta, double t) {
    return geom->transport(x, xi, eta, t);
  };
  tc.geodesic = [geom, x, xi = tc.xi](double t) { return geom->geodesic(x, xi, t); };
  tc.curve = [geom, x, xi = tc.xi](double t) {
    return std::pair{geom->geodesic(x, xi, t), geom->geodesic_velocity(x, xi, t)};
  };
  // integrator stages carry round-off normal parts, so project before the checked call
  tc.christoffel = [geom](const Mat& p, const Mat& u, const Mat& v) {
    return geom->christoffel(p, p * skew(p.transpose() * u), p * skew(p.transpose() * v));
  };
  tc.tangency = [](const Mat& p, const Mat& v) { return rel(fro(sym(p.transpose() * v)), v); };
  return tc;
}

TransportCase gl_case(const BenchConfig& c, Rng& rng) {
  TransportCase tc;
  auto geom = std::make_shared<GLGeometry>(c.n, c.beta);
  tc.point = random_gl_plus(rng, c.n);
  const Mat x = tc.point;
  auto project = [](const Mat& w) { return w; };
  tc.random_direction = [n = c.n](Rng& r) { return random_normal(r, n, n); };
  tc.metric = [geom](const Mat& p, const Mat& u, const Mat& v) { return geom->inner(p, u, v); };
  tc.xi = random_tangent(rng, c.n, c.n, project,
                         [geom, x](const Mat& v) { return geom->inner(x, v, v); });
  tc.transport = [geom, x, xi = tc.xi](const std::vector<Mat>& etas, double t) {
    std::vector<Mat> out;
    out.reserve(etas.size());
    for (const auto& e : etas) out.push_back(geom->transport(x, xi, e, t));
    return out;
  };
  tc.transport_fresh = [geom, x, xi = tc.xi](const Mat& eta, double t) {
    return geom->transport(x, xi, eta, t);
  };
  tc.geodesic = [geom, x, xi = tc.xi](double t) { return geom->geodesic(x, xi, t); };
  tc.curve = [geom, x, xi = tc.xi](double t) {
    return std::pair{geom->geodesic(x, xi, t), geom->geodesic_velocity(x, xi, t)};
  };
  tc.christoffel = [geom](const Mat& p, const Mat& u, const Mat& v) {
    return geom->christoffel(p, u, v);
  };
  tc.tangency = [](const Mat&, const Mat&) { return 0.0; };
  return tc;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

TransportCase make_case(const BenchConfig& config, Rng& rng) {
  switch (config.manifold) {
    case Manifold::stiefel: return stiefel_case(config, rng);
    case Manifold::flag: return flag_case(config, rng);
    case Manifold::grassmann: return grassmann_case(config, rng);
    case Manifold::so: return so_case(config, rng);
    case Manifold::gl: return gl_case(config, rng);
  }
  throw ConfigError("unknown manifold");
}

std::vector<Mat> sample_vectors(const TransportCase& c, Rng& rng, int count) {
  std::uniform_int_distribution<int> len(1, 60);
  std::vector<Mat> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double l = len(rng);
    Mat v = c.random_direction(rng);
    const double nsq = c.metric(c.point, v, v);
    if (!(nsq > 0.0)) throw NumericalError("sample_vectors: zero tangent direction");
    out.push_back(v * (l / std::sqrt(nsq)));
  }
  return out;
}

std::vector<TimingRow> run_timing(const BenchConfig& config_in) {
  const BenchConfig config = normalized(config_in);
  Rng rng(config.seed);
  const TransportCase tc = make_case(config, rng);
  const Mat eta = sample_vectors(tc, rng, 1).front();
  using clock = std::chrono::steady_clock;

  std::vector<TimingRow> rows;
  for (double t : config.t_grid) {
    Mat out = tc.transport_fresh(eta, t);  // warm-up
    std::vector<double> secs;
    for (int r = 0; r < config.repeats; ++r) {
      const auto t0 = clock::now();
      out = tc.transport_fresh(eta, t);
      secs.push_back(std::chrono::duration<double>(clock::now() - t0).count());
    }
    const double tang = tc.tangency(tc.geodesic(t), out);
    if (!(tang <= kTimingTangencyTol)) {
      std::ostringstream os;
      os << "transport output failed the tangency check at t = " << t << " (" << tang << ")";
      throw NumericalError(os.str());
    }
    rows.push_back({config.manifold, config.n, config.d, metric_parameter(config), t,
                    median(secs), tang});
  }
  return rows;
}

std::vector<IsometryRow> run_isometry(const BenchConfig& config_in) {
  const BenchConfig config = normalized(config_in);
  Rng rng(config.seed);
  const TransportCase tc = make_case(config, rng);
  const auto vectors = sample_vectors(tc, rng, config.num_vectors);
  std::vector<IsometryRow> rows;
  for (double t : config.t_grid) {
    const Mat p = tc.geodesic(t);
    const auto moved = tc.transport(vectors, t);
    const double drift = gram_drift(tc.point, vectors, {p}, {moved}, tc.metric).front();
    rows.push_back({config.manifold, config.n, config.d, metric_parameter(config), t, drift,
                    std::log10(drift)});
  }
  return rows;
}

std::vector<VerifyRow> run_verify(const BenchConfig& config_in, const VerifyThresholds& thr) {
  const BenchConfig config = normalized(config_in, Index{64});
  Rng rng(config.seed);
  const TransportCase tc = make_case(config, rng);
  Mat eta = tc.random_direction(rng);
  eta /= std::sqrt(tc.metric(tc.point, eta, eta));

  std::vector<double> grid = config.t_grid;
  const auto oracle = integrate_transport(tc.christoffel, tc.curve, eta, grid);
  std::vector<VerifyRow> rows;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t = grid[i];
    const double t_mid = std::max(t, thr.dt);  // keep the stencil at t >= 0
    std::vector<double> ts{t_mid - thr.dt, t_mid, t_mid + thr.dt};
    const auto deltas = tc.transport({eta}, t).front();
    std::vector<Mat> d3, g3, gd3;
    for (double s : ts) {
      d3.push_back(tc.transport({eta}, s).front());
      auto [g, gd] = tc.curve(s);
      g3.push_back(g);
      gd3.push_back(gd);
    }
    const double res = transport_residual(d3, g3, gd3, tc.christoffel, thr.dt);
    const double err = fro(deltas - oracle[i]);
    const double tang = tc.tangency(tc.geodesic(t), deltas);
    const bool pass = err <= thr.oracle_error && res <= thr.residual && tang <= thr.tangency;
    rows.push_back({config.manifold, config.n, config.d, metric_parameter(config), t, res, err,
                    tang, pass});
  }
  return rows;
}

std::string format_double(double x) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

namespace {

template <class Row, class Fn>
void write_rows(std::ostream& os, const char* header, const std::vector<Row>& rows, Fn fields) {
  os << kCsvVersionLine << '\n' << header << '\n';
  for (const auto& r : rows) {
    os << manifold_name(r.manifold) << ',' << r.n << ',' << r.d << ',' << format_double(r.alpha)
       << ',' << format_double(r.t);
    fields(os, r);
    os << '\n';
  }
}

}  // namespace

void write_csv(std::ostream& os, const std::vector<TimingRow>& rows) {
  write_rows(os, "manifold,n,d,alpha,t,median_seconds,residual_check", rows,
             [](std::ostream& o, const TimingRow& r) {
               o << ',' << format_double(r.median_seconds) << ','
                 << format_double(r.residual_check);
             });
}

void write_csv(std::ostream& os, const std::vector<IsometryRow>& rows) {
  write_rows(os, "manifold,n,d,alpha,t,max_gram_drift,log10_drift", rows,
             [](std::ostream& o, const IsometryRow& r) {
               o << ',' << format_double(r.max_gram_drift) << ','
                 << format_double(r.log10_drift);
             });
}

void write_csv(std::ostream& os, const std::vector<VerifyRow>& rows) {
  write_rows(os, "manifold,n,d,alpha,t,transport_residual,oracle_error,tangency,pass", rows,
             [](std::ostream& o, const VerifyRow& r) {
               o << ',' << format_double(r.transport_residual) << ','
                 << format_double(r.oracle_error) << ',' << format_double(r.tangency) << ','
                 << (r.pass ? "true" : "false");
             });
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw ValidationError("loglog_slope: need matching samples, at least two");
  const std::size_t m = x.size();
  double sx = 0, sy = 0;
  std::vector<double> lx(m), ly(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw ValidationError("loglog_slope: values must be positive");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
    sx += lx[i];
    sy += ly[i];
  }
  sx /= m;
  sy /= m;
  double num = 0, den = 0;
  for (std::size_t i = 0; i < m; ++i) {
    num += (lx[i] - sx) * (ly[i] - sy);
    den += (lx[i] - sx) * (lx[i] - sx);
  }
  if (den == 0.0) throw ValidationError("loglog_slope: x values are all equal");
  return num / den;
}

}  // namespace manitrans
