#include "hammersley/pinning.hpp"

#include <cmath>
#include <limits>
#include <ostream>

namespace hammersley {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::size_t chain_length(const PlanarConfig& c, double n, bool point_to_point) {
  if (!point_to_point) return lis_oracle(c);
  std::vector<Point2> inside;
  for (const auto& p : c.points()) {
    if (p.u() > 0.0 && p.u() < n && p.v() > 0.0 && p.v() < n) inside.push_back(p);
  }
  return lis_oracle(inside);
}

}  // namespace

MeanError summarize(const std::vector<double>& xs) {
  MeanError m;
  double sum = 0.0;
  for (double x : xs) {
    if (std::isnan(x)) continue;
    sum += x;
    ++m.count;
  }
  if (m.count == 0) {
    m.mean = kNaN;
    m.stderr_ = kNaN;
    return m;
  }
  m.mean = sum / double(m.count);
  if (m.count < 2) {
    m.stderr_ = kNaN;
    return m;
  }
  double ss = 0.0;
  for (double x : xs) {
    if (!std::isnan(x)) ss += (x - m.mean) * (x - m.mean);
  }
  m.stderr_ = std::sqrt(ss / double(m.count - 1) / double(m.count));
  return m;
}

AxisPoints coupled_axis_points(double n, double lambda1, std::uint64_t seed, std::uint64_t replica) {
  if (!(n > 0.0)) throw InvalidInput("n must be positive");
  if (!(lambda1 >= 0.0) || !std::isfinite(lambda1)) throw InvalidInput("lambda1 must be finite and >= 0");
  RandomSource rng(seed, Stream::axis, replica);
  std::vector<double> ts;
  const auto layers = static_cast<std::size_t>(std::ceil(lambda1));
  for (std::size_t k = 0; k < layers; ++k) {
    const auto count = rng.poisson(n);
    for (std::uint64_t i = 0; i < count; ++i) {
      double t = 0.0;
      while (!(t > 0.0)) t = rng.uniform(0.0, n);
      const double mark = double(k) + rng.uniform();
      if (mark < lambda1) ts.push_back(t);
    }
  }
  return AxisPoints(std::move(ts));
}

double geodesic_visit_density(const Geodesic& g, double n) {
  std::size_t visits = 0;
  for (const auto& c : g.collected) {
    if (c.u == c.v) ++visits;
  }
  return double(visits) / n;
}

double max_transversal(const PlanarConfig& config, const std::vector<std::size_t>& chain) {
  double out = 0.0;
  for (std::size_t i : chain) out = std::max(out, std::abs(config.points()[i].x));
  return out;
}

PinningResult run_pinning_experiment(const PinningConfig& cfg) {
  if (!(cfg.n > 0.0)) throw InvalidInput("n must be positive");
  if (!(cfg.lambda2 >= 0.0) || !std::isfinite(cfg.lambda2)) throw InvalidInput("lambda2 must be finite and >= 0");
  if (cfg.replicas < 1) throw InvalidInput("replicas must be >= 1");
  if (cfg.lambda1.empty()) throw InvalidInput("at least one lambda1 value is needed");
  const auto d = Domain::triangle(cfg.n);
  const Point2 apex{cfg.n, 0.0};
  PinningResult res;
  for (std::size_t r = 0; r < cfg.replicas; ++r) {
    RandomSource rng(cfg.seed, Stream::interior, r);
    const auto scenery = sample_poisson_in_domain(d, cfg.lambda2, rng);
    const auto base = build_broken_lines(scenery, d);
    const auto h0 = count_lines(base);
    const double transversal = max_transversal(scenery, longest_chain(scenery));
    for (double l1 : cfg.lambda1) {
      const auto ax = coupled_axis_points(cfg.n, l1, cfg.seed, r);
      const auto pts = ax.points();
      const auto all = scenery.with(pts);
      const auto ls = build_broken_lines(all, d);
      PinningRow row;
      row.n = cfg.n;
      row.lambda1 = l1;
      row.lambda2 = cfg.lambda2;
      row.replica = r;
      row.chain = chain_length(all, cfg.n, cfg.point_to_point);
      // Telescoping: the line count gained equals the number of points
      // essential at their insertion, whatever the order.
      row.essential_frac = ax.empty() ? kNaN : double(count_lines(ls) - h0) / double(ax.size());
      row.visit_density = geodesic_visit_density(extract_geodesic(ls, apex), cfg.n);
      row.spanning = -1;
      if (cfg.spanning) {
        AttractorBuilder builder(base, scenery, ax);
        row.spanning = spanning_chain_exists(builder) ? 1 : 0;
      }
      row.max_transversal = transversal;
      res.rows.push_back(row);
    }
  }
  const double scale = cfg.n / std::sqrt(2.0);
  for (std::size_t k = 0; k < cfg.lambda1.size(); ++k) {
    std::vector<double> chain;
    std::vector<double> ess;
    std::vector<double> visit;
    std::vector<double> span;
    for (std::size_t r = 0; r < cfg.replicas; ++r) {
      const auto& row = res.rows[r * cfg.lambda1.size() + k];
      chain.push_back(double(row.chain) / scale);
      ess.push_back(row.essential_frac);
      visit.push_back(row.visit_density);
      span.push_back(row.spanning < 0 ? kNaN : double(row.spanning));
    }
    PinningStats s;
    s.n = cfg.n;
    s.lambda1 = cfg.lambda1[k];
    s.lambda2 = cfg.lambda2;
    s.replicas = cfg.replicas;
    s.chain_per_n = summarize(chain);
    s.essential_fraction = summarize(ess);
    s.visit_density = summarize(visit);
    s.spanning_rate = summarize(span);
    res.stats.push_back(s);
  }
  return res;
}

PinningStats run_pinning_experiment(double n, double lambda1, double lambda2, std::size_t replicas,
                                    std::uint64_t seed) {
  PinningConfig cfg;
  cfg.n = n;
  cfg.lambda1 = {lambda1};
  cfg.lambda2 = lambda2;
  cfg.replicas = replicas;
  cfg.seed = seed;
  return run_pinning_experiment(cfg).stats.front();
}

void write_pinning_csv(std::ostream& os, const std::vector<PinningRow>& rows) {
  os << "n,lambda1,lambda2,replica,chain,essential_frac,visit_density,spanning,max_transversal\n";
  for (const auto& r : rows) {
    os << format_double(r.n) << ',' << format_double(r.lambda1) << ',' << format_double(r.lambda2) << ','
       << r.replica << ',' << r.chain << ',' << (std::isnan(r.essential_frac) ? "nan" : format_double(r.essential_frac))
       << ',' << format_double(r.visit_density) << ',' << (r.spanning < 0 ? "na" : std::to_string(r.spanning))
       << ',' << format_double(r.max_transversal) << '\n';
  }
}

MeanError ulam_chain_per_n(double n, double lambda2, std::size_t replicas, std::uint64_t seed) {
  const auto d = Domain::square(n);
  std::vector<double> xs;
  for (std::size_t r = 0; r < replicas; ++r) {
    RandomSource rng(seed, Stream::interior, r);
    xs.push_back(double(lis_oracle(sample_poisson_in_domain(d, lambda2, rng))) / n);
  }
  return summarize(xs);
}

TransversalFit fit_transversal_exponent(const std::vector<double>& ns, std::size_t replicas, std::uint64_t seed) {
  if (ns.size() < 2) throw InvalidInput("transversal fit needs at least two sizes");
  TransversalFit fit;
  double sx = 0.0;
  double sy = 0.0;
  double sxx = 0.0;
  double sxy = 0.0;
  for (double n : ns) {
    const auto d = Domain::triangle(n);
    std::vector<double> xs;
    for (std::size_t r = 0; r < replicas; ++r) {
      RandomSource rng(seed, Stream::interior, r);
      const auto c = sample_poisson_in_domain(d, 1.0, rng);
      xs.push_back(max_transversal(c, longest_chain(c)));
    }
    fit.n.push_back(n);
    fit.max_abs_x.push_back(summarize(xs));
    const double lx = std::log(n);
    const double ly = std::log(fit.max_abs_x.back().mean);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double k = double(ns.size());
  fit.exponent = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  return fit;
}

}  // namespace hammersley
