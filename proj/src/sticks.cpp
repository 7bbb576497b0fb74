#include "hammersley/sticks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

namespace hammersley {
namespace {

double positive_draw(RandomSource& rng, const std::function<double(double)>& from_uniform) {
  for (;;) {
    const double s = from_uniform(rng.uniform());
    if (s > 0.0 && std::isfinite(s)) return s;
  }
}

double simpson_step(const std::function<double(double)>& f, double a, double fa, double b, double fb, double m,
                    double fm, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw InvalidInput(std::string(what) + " must be positive and finite");
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  if (b < a) return -integrate(f, b, a, tol);
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, a, fa, b, fb, m, fm, whole, tol, 50);
}

DistributionDescriptor DistributionDescriptor::make_pareto(double alpha, double scale) {
  require_positive(alpha, "pareto alpha");
  require_positive(scale, "pareto scale");
  DistributionDescriptor d;
  d.kind_ = pareto;
  d.a_ = alpha;
  d.b_ = scale;
  if (alpha < 1.0) {
    d.tail_ = TailClass{TailClass::power, alpha};
  } else if (alpha == 1.0) {
    d.tail_ = TailClass{TailClass::log_like, scale};
  } else {
    d.tail_ = TailClass{TailClass::bounded_phi, 0.0};
  }
  return d;
}

DistributionDescriptor DistributionDescriptor::make_positive_cauchy(double c) {
  require_positive(c, "cauchy tail coefficient");
  DistributionDescriptor d;
  d.kind_ = positive_cauchy;
  d.a_ = c;
  d.b_ = std::numbers::pi * c / 2.0;  // scale of the underlying Cauchy law
  d.tail_ = TailClass{TailClass::log_like, c};
  return d;
}

DistributionDescriptor DistributionDescriptor::make_exponential(double mean) {
  require_positive(mean, "exponential mean");
  DistributionDescriptor d;
  d.kind_ = exponential;
  d.a_ = mean;
  d.tail_ = TailClass{TailClass::bounded_phi, 0.0};
  return d;
}

DistributionDescriptor DistributionDescriptor::make_deterministic(double length) {
  require_positive(length, "stick length");
  DistributionDescriptor d;
  d.kind_ = deterministic;
  d.a_ = length;
  d.tail_ = TailClass{TailClass::bounded_phi, 0.0};
  return d;
}

DistributionDescriptor DistributionDescriptor::make_custom(std::function<double(RandomSource&)> sampler,
                                                           std::function<double(double)> survival,
                                                           std::optional<TailClass> tail) {
  if (!sampler || !survival) throw InvalidInput("custom distribution needs a sampler and a survival function");
  DistributionDescriptor d;
  d.kind_ = custom;
  d.sampler_ = std::move(sampler);
  d.survival_ = std::move(survival);
  d.tail_ = tail;
  return d;
}

double DistributionDescriptor::sample(RandomSource& rng) const {
  switch (kind_) {
    case pareto:
      return positive_draw(rng, [&](double u) { return b_ * std::pow(1.0 - u, -1.0 / a_); });
    case positive_cauchy:
      return positive_draw(rng, [&](double u) { return b_ * std::tan(std::numbers::pi * u / 2.0); });
    case exponential:
      return positive_draw(rng, [&](double u) { return -a_ * std::log1p(-u); });
    case deterministic:
      return a_;
    case custom: {
      const double s = sampler_(rng);
      if (!(s > 0.0) || !std::isfinite(s)) throw InvalidInput("custom sampler produced a non-positive length");
      return s;
    }
  }
  return 0.0;
}

double DistributionDescriptor::survival(double x) const {
  if (x < 0.0) return 1.0;
  switch (kind_) {
    case pareto:
      return x < b_ ? 1.0 : std::pow(b_ / x, a_);
    case positive_cauchy:
      return x == 0.0 ? 1.0 : 2.0 / std::numbers::pi * std::atan(b_ / x);
    case exponential:
      return std::exp(-x / a_);
    case deterministic:
      return x < a_ ? 1.0 : 0.0;
    case custom:
      return survival_(x);
  }
  return 0.0;
}

std::string DistributionDescriptor::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case pareto: os << "pareto(alpha=" << format_double(a_) << ", scale=" << format_double(b_) << ")"; break;
    case positive_cauchy: os << "positive_cauchy(c=" << format_double(a_) << ")"; break;
    case exponential: os << "exponential(mean=" << format_double(a_) << ")"; break;
    case deterministic: os << "deterministic(length=" << format_double(a_) << ")"; break;
    case custom: os << "custom"; break;
  }
  return os.str();
}

double phi(const DistributionDescriptor& d, double x) {
  if (x < 0.0 || std::isnan(x)) throw InvalidInput("phi: x must be >= 0");
  if (x == 0.0) return 0.0;
  switch (d.kind_) {
    case DistributionDescriptor::pareto: {
      const double a = d.a_;
      const double s = d.b_;
      if (x <= s) return x;
      if (a == 1.0) return s + s * std::log(x / s);
      return s + std::pow(s, a) * (std::pow(x, 1.0 - a) - std::pow(s, 1.0 - a)) / (1.0 - a);
    }
    case DistributionDescriptor::positive_cauchy: {
      const double g = d.b_;
      return 2.0 / std::numbers::pi * (x * std::atan(g / x) + 0.5 * g * std::log1p((x / g) * (x / g)));
    }
    case DistributionDescriptor::exponential:
      return d.a_ * -std::expm1(-x / d.a_);
    case DistributionDescriptor::deterministic:
      return std::min(x, d.a_);
    case DistributionDescriptor::custom: {
      // Doubling pieces keep the adaptive rule honest on long ranges.
      double total = 0.0;
      double lo = 0.0;
      double hi = std::min(x, 1.0);
      while (lo < x) {
        total += integrate(d.survival_, lo, hi, 1e-10);
        lo = hi;
        hi = std::min(x, 2.0 * hi);
      }
      return total;
    }
  }
  return 0.0;
}

CriterionResult percolation_criterion(const DistributionDescriptor& d, double lambda) {
  if (!(lambda > 0.0)) throw InvalidInput("lambda must be positive");
  CriterionResult r;
  const auto& tail = d.tail_class();
  if (!tail) {
    // Diagnostic only: growth of the partial integrals.
    double acc = 0.0;
    double lo = 0.0;
    for (double X = 10.0; X <= 1e5; X *= 10.0) {
      acc += integrate([&](double x) { return std::exp(-lambda * phi(d, x)); }, lo, X, 1e-6);
      lo = X;
      r.partial_integrals.emplace_back(X, acc);
    }
    return r;
  }
  switch (tail->kind) {
    case TailClass::bounded_phi:
      r.decision = Percolation::does_not_percolate;
      break;
    case TailClass::super_log:
      r.decision = Percolation::percolates;
      break;
    case TailClass::power:
      if (tail->parameter < 1.0) {
        r.decision = Percolation::percolates;
      } else if (tail->parameter > 1.0) {
        r.decision = Percolation::does_not_percolate;
      }
      break;
    case TailClass::log_like: {
      const double s = lambda * tail->parameter;
      if (s > 1.0) r.decision = Percolation::percolates;
      if (s < 1.0) r.decision = Percolation::does_not_percolate;
      break;
    }
  }
  return r;
}

Stability is_cluster_stable(const DistributionDescriptor& d) {
  const auto& tail = d.tail_class();
  if (!tail) return Stability::undetermined;
  switch (tail->kind) {
    case TailClass::super_log:
      return Stability::yes;
    case TailClass::power:
      if (tail->parameter < 1.0) return Stability::yes;
      return tail->parameter > 1.0 ? Stability::no : Stability::undetermined;
    case TailClass::log_like:
    case TailClass::bounded_phi:
      return Stability::no;
  }
  return Stability::undetermined;
}

const char* to_string(Percolation p) {
  switch (p) {
    case Percolation::percolates: return "percolates";
    case Percolation::does_not_percolate: return "does_not_percolate";
    case Percolation::undetermined: return "undetermined";
  }
  return "?";
}

const char* to_string(Stability s) {
  switch (s) {
    case Stability::yes: return "yes";
    case Stability::no: return "no";
    case Stability::undetermined: return "undetermined";
  }
  return "?";
}

namespace {

// Poisson seeds by exponential gaps, so a run can stop early and still draw
// exactly what a full sample would.
class SeedStream {
 public:
  SeedStream(double lambda, std::uint64_t seed, std::uint64_t replica)
      : lambda_(lambda), rng_(seed, Stream::stick_seeds, replica) {}
  double next() {
    if (lambda_ <= 0.0) return kInf;
    pos_ += -std::log1p(-rng_.uniform()) / lambda_;
    return pos_;
  }

 private:
  static constexpr double kInf = std::numeric_limits<double>::infinity();
  double lambda_;
  double pos_ = 0.0;
  RandomSource rng_;
};

void check_window(double lambda, double T) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InvalidInput("lambda must be finite and >= 0");
  require_positive(T, "window T");
}

// Right end of the cluster of the first interval; intervals sorted by start.
double first_cluster_end(const std::vector<double>& starts, const std::vector<double>& ends) {
  if (starts.empty()) return 0.0;
  double reach = ends[0];
  for (std::size_t j = 1; j < starts.size() && starts[j] < reach; ++j) reach = std::max(reach, ends[j]);
  return reach;
}

// Reach of the first cluster only, stopping once it dies or passes T.
double first_cluster_reach(double lambda, const DistributionDescriptor& d, double T, std::uint64_t seed,
                           std::uint64_t replica) {
  SeedStream seeds(lambda, seed, replica);
  RandomSource lengths(seed, Stream::stick_lengths, replica);
  const double x0 = seeds.next();
  if (x0 > T) return 0.0;
  double reach = x0 + d.sample(lengths);
  while (reach < T) {
    const double x = seeds.next();
    if (x > T || !(x < reach)) break;
    reach = std::max(reach, x + d.sample(lengths));
  }
  return reach;
}

}  // namespace

StickSample sample_sticks(double lambda, const DistributionDescriptor& d, double T, std::uint64_t seed,
                          std::uint64_t replica) {
  check_window(lambda, T);
  StickSample s;
  SeedStream seeds(lambda, seed, replica);
  RandomSource lengths(seed, Stream::stick_lengths, replica);
  for (double x = seeds.next(); x <= T; x = seeds.next()) {
    s.seeds.push_back(x);
    s.lengths.push_back(d.sample(lengths));
  }
  return s;
}

Model1Result model1(const StickSample& s, double T) {
  Model1Result r;
  if (s.seeds.empty()) return r;
  std::vector<double> ends(s.seeds.size());
  for (std::size_t i = 0; i < ends.size(); ++i) ends[i] = s.seeds[i] + s.lengths[i];
  r.max_covered = first_cluster_end(s.seeds, ends);
  r.spans_window = r.max_covered >= T;
  double reach = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ends.size(); ++i) {
    if (!(s.seeds[i] < reach)) ++r.n_clusters;
    reach = std::max(reach, ends[i]);
  }
  return r;
}

Model1Result simulate_model1(double lambda, const DistributionDescriptor& d, double T, std::uint64_t seed,
                             std::uint64_t replica) {
  return model1(sample_sticks(lambda, d, T, seed, replica), T);
}

namespace {

// Flights of particle i; bounce lengths come from `bounces` in call order.
ParticleRecord fly(const StickSample& s, std::size_t i, const DistributionDescriptor& d, double T,
                   RandomSource& bounces, BonusMode mode) {
  const auto& xs = s.seeds;
  auto passed = [&](double from, double to) {
    return static_cast<int>(std::upper_bound(xs.begin(), xs.end(), to) - std::upper_bound(xs.begin(), xs.end(), from));
  };
  ParticleRecord p;
  p.born = xs[i];
  double pos = xs[i];
  double len = s.lengths[i];
  int counter = 1;
  for (bool first = true;; first = false) {
    const double to = pos + len;
    if (first || mode == BonusMode::every_flight) counter += passed(pos, to);
    if (to >= T) {
      p.flights.push_back({pos, to, counter});
      p.survives = true;
      p.reached = to;
      return p;
    }
    --counter;
    p.flights.push_back({pos, to, counter});
    if (counter <= 0) {
      p.reached = to;
      return p;
    }
    pos = to;
    len = d.sample(bounces);
  }
}

}  // namespace

Model2Result model2(const StickSample& s, const DistributionDescriptor& d, double T, std::uint64_t seed,
                    std::uint64_t replica, BonusMode mode) {
  require_positive(T, "window T");
  Model2Result r;
  RandomSource bounces(seed, Stream::stick_bounces, replica);
  for (std::size_t i = 0; i < s.seeds.size(); ++i) r.particles.push_back(fly(s, i, d, T, bounces, mode));
  if (!r.particles.empty()) {
    r.tagged_survives = r.particles.front().survives;
    std::vector<double> ends;
    for (const auto& p : r.particles) ends.push_back(p.reached);
    r.max_covered = first_cluster_end(s.seeds, ends);
  }
  return r;
}

std::optional<ParticleRecord> tagged_particle(const StickSample& s, const DistributionDescriptor& d, double T,
                                              std::uint64_t seed, std::uint64_t replica, BonusMode mode) {
  require_positive(T, "window T");
  if (s.seeds.empty()) return std::nullopt;
  RandomSource bounces(seed, Stream::stick_bounces, replica);
  return fly(s, 0, d, T, bounces, mode);
}

Model2Result simulate_model2(double lambda, const DistributionDescriptor& d, double T, std::uint64_t seed,
                             std::uint64_t replica, BonusMode mode) {
  return model2(sample_sticks(lambda, d, T, seed, replica), d, T, seed, replica, mode);
}

std::vector<std::pair<double, double>> interval_union(std::vector<std::pair<double, double>> iv) {
  std::sort(iv.begin(), iv.end());
  std::vector<std::pair<double, double>> out;
  for (const auto& i : iv) {
    if (!out.empty() && i.first <= out.back().second) {
      out.back().second = std::max(out.back().second, i.second);
    } else {
      out.push_back(i);
    }
  }
  return out;
}

bool covers(const std::vector<std::pair<double, double>>& outer,
            const std::vector<std::pair<double, double>>& inner) {
  const auto o = interval_union(outer);
  for (const auto& i : interval_union(inner)) {
    auto it = std::upper_bound(o.begin(), o.end(), std::make_pair(i.first, std::numeric_limits<double>::infinity()));
    if (it == o.begin()) return false;
    --it;
    if (!(it->first <= i.first && i.second <= it->second)) return false;
  }
  return true;
}

namespace {

struct Line {
  double a = 0.0, b = 0.0;
  double var_a = 0.0, var_b = 0.0, cov_ab = 0.0, sd_b = 0.0;
};

// y = a + b x with weights w taken as inverse variances.
Line weighted_line(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& w) {
  double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sw += w[k];
    sx += w[k] * x[k];
    sy += w[k] * y[k];
    sxx += w[k] * x[k] * x[k];
    sxy += w[k] * x[k] * y[k];
  }
  const double det = sw * sxx - sx * sx;
  Line l;
  l.b = (sw * sxy - sx * sy) / det;
  l.a = (sy - l.b * sx) / sw;
  l.var_a = sxx / det;
  l.var_b = sw / det;
  l.cov_ab = -sx / det;
  l.sd_b = std::sqrt(l.var_b);
  return l;
}

struct Slope {
  double value = 0.0;
  double error = 0.0;
};

// Weighted least squares of log p(T) against log T over the windows reached.
Slope span_slope(double lambda, const DistributionDescriptor& d, const LambdaSearch& s) {
  const double t_max = *std::max_element(s.windows.begin(), s.windows.end());
  std::vector<double> reach(s.replicas);
  for (std::size_t r = 0; r < s.replicas; ++r) reach[r] = first_cluster_reach(lambda, d, t_max, s.seed, r);
  const double n = double(s.replicas);
  std::vector<double> x, y, w;
  for (double T : s.windows) {
    const auto hits = std::count_if(reach.begin(), reach.end(), [&](double v) { return v >= T; });
    if (hits == 0) continue;
    const double p = std::min(double(hits) / n, 1.0 - 0.5 / n);
    x.push_back(std::log(T));
    y.push_back(std::log(p));
    w.push_back(p * n / (1.0 - p));
  }
  if (x.size() < 2) return {-std::numeric_limits<double>::infinity(), 0.0};
  const auto line = weighted_line(x, y, w);
  return {line.b, line.sd_b};
}

}  // namespace

LambdaEstimate estimate_lambda_c(const DistributionDescriptor& d, const LambdaSearch& s) {
  const auto& tail = d.tail_class();
  if (!tail || tail->kind != TailClass::log_like) throw InvalidInput("no finite critical point");
  if (s.windows.size() < 2 || s.replicas < 2) throw InvalidInput("lambda_c search needs two windows and two replicas");
  if (!(s.min_decay > 0.0 && s.min_decay < s.max_decay)) throw InvalidInput("lambda_c search needs 0 < min_decay < max_decay");
  LambdaEstimate est;
  auto grid = s.grid;
  std::sort(grid.begin(), grid.end());
  std::vector<double> x, y, w;
  for (double lambda : grid) {
    if (!(lambda > 0.0)) throw InvalidInput("lambda grid values must be positive");
    const auto sl = span_slope(lambda, d, s);
    est.probes.emplace_back(lambda, sl.value, sl.error);
    const double theta = -sl.value;
    // Past the band the rest of the grid is costlier and uninformative.
    if (std::isfinite(theta) && theta + s.z * sl.error < s.min_decay) break;
    if (!std::isfinite(theta) || theta < s.min_decay || theta > s.max_decay || theta < s.z * sl.error) continue;
    x.push_back(lambda);
    y.push_back(theta);
    w.push_back(1.0 / (sl.error * sl.error));
  }
  est.fitted = x.size();
  if (x.size() < 2) throw InvalidInput("lambda_c search: fewer than two probes in the decay band; widen the grid");
  const auto line = weighted_line(x, y, w);
  if (!(line.b < 0.0)) throw InvalidInput("lambda_c search: decay does not weaken with lambda");
  // Root of a + b lambda, with a delta-method error.
  est.estimate = -line.a / line.b;
  const double ga = -1.0 / line.b;
  const double gb = line.a / (line.b * line.b);
  const double sd = std::sqrt(ga * ga * line.var_a + gb * gb * line.var_b + 2.0 * ga * gb * line.cov_ab);
  est.ci_low = est.estimate - s.z * sd;
  est.ci_high = est.estimate + s.z * sd;
  return est;
}

void write_stick_csv(std::ostream& os, const std::vector<StickRow>& rows) {
  os << "lambda,T,replica,spans_window,max_covered,tagged_survives\n";
  for (const auto& r : rows) {
    os << format_double(r.lambda) << ',' << format_double(r.T) << ',' << r.replica << ',' << int(r.spans_window)
       << ',' << format_double(r.max_covered) << ',' << int(r.tagged_survives) << '\n';
  }
}

}  // namespace hammersley
