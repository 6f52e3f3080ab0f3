#include "meanstream/verify.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>

#include "meanstream/core.hpp"
#include "meanstream/error.hpp"

namespace meanstream::verify {
namespace {

constexpr double kMeanSlack = 1e-9;
constexpr double kReflexivityTolerance = 1e-10;
constexpr double kSymmetryTolerance = 1e-12;
constexpr double kRepetitionTolerance = 1e-9;
constexpr double kNegligibleTolerance = 1e-9;
constexpr double kHomogeneityTolerance = 1e-9;
constexpr double kStrictSlack = 1e-12;
constexpr std::size_t kBruteForceLimit = 12;

struct Evaluation {
  double value = std::numeric_limits<double>::quiet_NaN();
  std::string error;
  [[nodiscard]] bool ok() const noexcept { return error.empty(); }
};

Evaluation evaluate(const MeanUnderTest& m, std::span<const double> xs) {
  Evaluation out;
  try {
    out.value = m.eval(xs);
    if (!std::isfinite(out.value)) out.error = "non-finite value";
  } catch (const Error& e) {
    out.error = e.what();
  }
  return out;
}

PropertyReport make_report(std::string property, const MeanUnderTest& m, double tolerance) {
  PropertyReport r;
  r.property = std::move(property);
  r.mean = m.name;
  r.tolerance = tolerance;
  return r;
}

void violate(PropertyReport& r, std::vector<std::vector<double>> witness, double lhs, double rhs,
             std::string detail = {}) {
  r.holds = false;
  r.witness = std::move(witness);
  r.lhs = lhs;
  r.rhs = rhs;
  r.detail = std::move(detail);
}

std::vector<double> concat(std::span<const double> a, std::span<const double> b) {
  std::vector<double> out(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

// Calls visit(indices) for every increasing r-subset of {0..n-1}.
template <typename Visit>
void for_each_subset(std::size_t n, std::size_t r, Visit&& visit) {
  if (r > n) return;
  std::vector<std::size_t> idx(r);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  while (true) {
    visit(std::span<const std::size_t>(idx));
    std::size_t i = r;
    while (i > 0 && idx[i - 1] == n - r + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < r; ++j) idx[j] = idx[j - 1] + 1;
  }
}

// Sum over r-subsets of prod x_i^p.
double subset_power_products(std::span<const double> xs, std::size_t r, double p) {
  double total = 0.0;
  for_each_subset(xs.size(), r, [&](std::span<const std::size_t> idx) {
    double prod = 1.0;
    for (std::size_t i : idx) prod *= std::pow(xs[i], p);
    total += prod;
  });
  return total;
}

double exact_binomial(std::size_t n, std::size_t r) {
  if (r > n) return 0.0;
  std::uint64_t c = 1;
  for (std::size_t i = 1; i <= r; ++i) c = c * (n - r + i) / i;
  return static_cast<double>(c);
}

void require_brute_force_size(std::span<const double> xs, const MeanDescriptor& d) {
  if (xs.size() > kBruteForceLimit) {
    throw Error(ErrorCode::TooLarge,
                d.label() + ": direct evaluation is limited to " +
                    std::to_string(kBruteForceLimit) + " elements");
  }
}

double arithmetic(std::span<const double> xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double power_direct(std::span<const double> xs, double p) {
  if (p == 0.0) {
    double log_sum = 0.0;
    for (double x : xs) log_sum += std::log(x);
    return std::exp(log_sum / static_cast<double>(xs.size()));
  }
  double s = 0.0;
  for (double x : xs) s += std::pow(x, p);
  return std::pow(s / static_cast<double>(xs.size()), 1.0 / p);
}

std::uint64_t splitmix(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

double Rng::uniform(double lo, double hi) {
  const double u = static_cast<double>(engine_() >> 11) * 0x1p-53;
  return lo + (hi - lo) * u;
}

std::size_t Rng::below(std::size_t n) {
  if (n <= 1) return 0;
  return static_cast<std::size_t>(engine_() % n);
}

std::uint64_t Rng::split() {
  std::uint64_t s = engine_();
  return splitmix(s);
}

double relative_difference(double a, double b) noexcept {
  if (a == b) return 0.0;
  const double scale = std::max(std::abs(a), std::abs(b));
  return std::abs(a - b) / scale;
}

MeanUnderTest from_descriptor(const MeanDescriptor& descriptor) {
  auto shared = std::make_shared<const MeanDescriptor>(descriptor);
  return {descriptor.label(), descriptor.domain(),
          [shared](std::span<const double> xs) { return evaluate_stream(shared, xs); }};
}

VectorSampler::VectorSampler(const DomainInterval& domain, SamplerConfig config,
                             std::uint64_t seed)
    : config_(config), rng_(seed) {
  const auto box = domain.intersect(DomainInterval::closed(config.lo, config.hi));
  lo_ = box.lo;
  hi_ = box.hi;
  if (!(lo_ < hi_)) {
    throw Error(ErrorCode::DomainError,
                "sampling box is empty for domain " + domain.to_string());
  }
  if (config_.min_len < 1) config_.min_len = 1;
  if (config_.max_len < config_.min_len) config_.max_len = config_.min_len;
}

double VectorSampler::draw_value() { return rng_.uniform(lo_, hi_); }

std::vector<double> VectorSampler::draw(std::size_t n) {
  std::vector<double> xs(n);
  for (double& x : xs) x = draw_value();
  return xs;
}

std::vector<double> VectorSampler::draw() {
  const std::size_t span = config_.max_len - config_.min_len + 1;
  return draw(config_.min_len + rng_.below(span));
}

nlohmann::json PropertyReport::to_json() const {
  auto number = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
  nlohmann::json out{{"property", property}, {"mean", mean},       {"holds", holds},
                     {"lhs", number(lhs)},   {"rhs", number(rhs)}, {"tolerance", tolerance},
                     {"trials", trials}};
  out["witness"] = witness.empty() ? nlohmann::json(nullptr) : nlohmann::json(witness);
  if (!detail.empty()) out["detail"] = detail;
  return out;
}

PropertyReport check_mean_property(const MeanUnderTest& m, VectorSampler& sampler,
                                   std::size_t trials) {
  auto r = make_report("mean_property", m, kMeanSlack);
  for (std::size_t t = 0; t < trials; ++t) {
    const auto xs = sampler.draw();
    ++r.trials;
    const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
    const auto e = evaluate(m, xs);
    if (!e.ok()) {
      violate(r, {xs}, e.value, *lo, e.error);
      return r;
    }
    if (e.value < *lo - kMeanSlack) {
      violate(r, {xs}, e.value, *lo, "below min");
      return r;
    }
    if (e.value > *hi + kMeanSlack) {
      violate(r, {xs}, e.value, *hi, "above max");
      return r;
    }
  }
  return r;
}

std::vector<double> reflexivity_grid(const DomainInterval& domain, std::size_t points) {
  const auto box = domain.intersect(DomainInterval::closed(0.5, 20.0));
  std::vector<double> grid;
  if (!(box.lo < box.hi) || points == 0) return grid;
  for (std::size_t i = 0; i < points; ++i) {
    const double t = points == 1 ? 0.5 : static_cast<double>(i) / static_cast<double>(points - 1);
    grid.push_back(box.lo + (box.hi - box.lo) * t);
  }
  return grid;
}

PropertyReport check_reflexivity(const MeanUnderTest& m, std::span<const double> grid,
                                 std::size_t max_repeat) {
  auto r = make_report("reflexivity", m, kReflexivityTolerance);
  for (double v : grid) {
    for (std::size_t k = 1; k <= max_repeat; ++k) {
      const std::vector<double> xs(k, v);
      ++r.trials;
      const auto e = evaluate(m, xs);
      if (!e.ok() || relative_difference(e.value, v) > kReflexivityTolerance) {
        violate(r, {xs}, e.value, v, e.error);
        return r;
      }
    }
  }
  return r;
}

PropertyReport check_symmetry(const MeanUnderTest& m, VectorSampler& sampler, std::size_t trials) {
  auto r = make_report("symmetry", m, kSymmetryTolerance);
  for (std::size_t t = 0; t < trials; ++t) {
    const auto xs = sampler.draw();
    auto shuffled = xs;
    std::shuffle(shuffled.begin(), shuffled.end(), sampler.rng().engine());
    ++r.trials;
    const auto a = evaluate(m, xs);
    const auto b = evaluate(m, shuffled);
    if (!a.ok() || !b.ok() || relative_difference(a.value, b.value) > kSymmetryTolerance) {
      violate(r, {xs, shuffled}, a.value, b.value, a.ok() ? b.error : a.error);
      return r;
    }
  }
  return r;
}

PropertyReport check_repetition_invariance(const MeanUnderTest& m, VectorSampler& sampler,
                                           std::size_t trials,
                                           std::span<const std::size_t> multiplicities,
                                           std::span<const std::vector<double>> seeds) {
  auto r = make_report("repetition_invariance", m, kRepetitionTolerance);
  auto probe = [&](const std::vector<double>& xs) {
    const auto base = evaluate(m, xs);
    for (std::size_t mult : multiplicities) {
      std::vector<double> repeated;
      repeated.reserve(xs.size() * mult);
      for (double x : xs) repeated.insert(repeated.end(), mult, x);
      ++r.trials;
      const auto rep = evaluate(m, repeated);
      if (!base.ok() || !rep.ok() ||
          relative_difference(base.value, rep.value) > kRepetitionTolerance) {
        violate(r, {xs, repeated}, base.value, rep.value,
                "multiplicity " + std::to_string(mult) +
                    (base.ok() ? (rep.ok() ? "" : ": " + rep.error) : ": " + base.error));
        return false;
      }
    }
    return true;
  };
  for (const auto& xs : seeds) {
    if (!probe(xs)) return r;
  }
  for (std::size_t t = 0; t < trials; ++t) {
    if (!probe(sampler.draw())) return r;
  }
  return r;
}

PropertyReport NegligibleResult::to_report(const std::string& mean) const {
  PropertyReport r;
  r.property = "negligible_element";
  r.mean = mean;
  r.tolerance = kNegligibleTolerance;
  r.trials = trials;
  r.holds = element.has_value();
  if (element) {
    r.lhs = *element;
    r.rhs = *element;
    r.detail = "negligible element " + format_real(*element);
    return r;
  }
  r.detail = "no negligible element among candidates";
  for (const auto& c : candidates) {
    if (c.status == CandidateStatus::rejected) {
      r.witness = {concat(std::vector<double>{c.candidate}, c.witness), c.witness};
      r.lhs = c.with_candidate;
      r.rhs = c.without_candidate;
      break;
    }
  }
  if (r.witness.empty() && !candidates.empty()) {
    r.witness = {{candidates.front().candidate}};
    r.detail = "every candidate lies outside the domain";
  }
  return r;
}

NegligibleResult detect_negligible_element(const MeanUnderTest& m,
                                           std::span<const double> candidates,
                                           VectorSampler& sampler, std::size_t trials) {
  NegligibleResult result;
  for (double e : candidates) {
    CandidateOutcome outcome;
    outcome.candidate = e;
    if (!m.domain.contains(e)) {
      outcome.status = CandidateStatus::out_of_domain;
      result.candidates.push_back(outcome);
      continue;
    }
    outcome.status = CandidateStatus::accepted;
    for (std::size_t t = 0; t < trials; ++t) {
      const auto a = sampler.draw();
      auto with = a;
      with.insert(with.begin() + static_cast<std::ptrdiff_t>(sampler.rng().below(a.size() + 1)), e);
      ++result.trials;
      const auto without_e = evaluate(m, a);
      const auto with_e = evaluate(m, with);
      if (!without_e.ok() || !with_e.ok() ||
          relative_difference(with_e.value, without_e.value) > kNegligibleTolerance) {
        outcome.status = CandidateStatus::rejected;
        outcome.witness = a;
        outcome.with_candidate = with_e.value;
        outcome.without_candidate = without_e.value;
        break;
      }
    }
    if (outcome.status == CandidateStatus::accepted && !result.element) result.element = e;
    result.candidates.push_back(outcome);
  }
  return result;
}

PropertyReport check_homogeneity(const MeanUnderTest& m, VectorSampler& sampler,
                                 std::size_t trials, std::span<const double> lambdas) {
  auto r = make_report("homogeneity", m, kHomogeneityTolerance);
  for (std::size_t t = 0; t < trials; ++t) {
    const auto xs = sampler.draw();
    const auto base = evaluate(m, xs);
    for (double lambda : lambdas) {
      std::vector<double> scaled(xs);
      for (double& x : scaled) x *= lambda;
      if (!std::all_of(scaled.begin(), scaled.end(), [&](double x) { return m.domain.contains(x); })) {
        continue;
      }
      ++r.trials;
      const auto s = evaluate(m, scaled);
      const double expected = lambda * base.value;
      if (!base.ok() || !s.ok() || relative_difference(s.value, expected) > kHomogeneityTolerance) {
        violate(r, {xs, scaled}, s.value, expected,
                "lambda " + format_real(lambda) + (base.ok() ? s.error : base.error));
        return r;
      }
    }
  }
  return r;
}

PropertyReport check_concatenation_betweenness(const MeanUnderTest& m, std::span<const double> x,
                                               std::span<const double> y) {
  auto r = make_report("concatenation_betweenness", m, kStrictSlack);
  const auto mx = evaluate(m, x);
  const auto my = evaluate(m, y);
  const auto joined = concat(x, y);
  const auto mxy = evaluate(m, joined);
  r.trials = 1;
  if (!mx.ok() || !my.ok() || !mxy.ok()) {
    violate(r, {std::vector<double>(x.begin(), x.end()), std::vector<double>(y.begin(), y.end())},
            mxy.value, mx.value, mx.ok() ? (my.ok() ? mxy.error : my.error) : mx.error);
    return r;
  }
  const double low = std::min(mx.value, my.value);
  const double high = std::max(mx.value, my.value);
  if (relative_difference(low, high) <= kStrictSlack) {
    r.detail = "tied means skipped";
    return r;
  }
  const double slack_lo = kStrictSlack * std::max(1.0, std::abs(low));
  const double slack_hi = kStrictSlack * std::max(1.0, std::abs(high));
  if (mxy.value < low - slack_lo) {
    violate(r, {std::vector<double>(x.begin(), x.end()), std::vector<double>(y.begin(), y.end())},
            mxy.value, low, "concatenation below the smaller mean");
  } else if (mxy.value > high + slack_hi) {
    violate(r, {std::vector<double>(x.begin(), x.end()), std::vector<double>(y.begin(), y.end())},
            mxy.value, high, "concatenation above the larger mean");
  }
  return r;
}

PropertyReport check_concatenation_betweenness(const MeanUnderTest& m, VectorSampler& sampler,
                                               std::size_t trials) {
  auto r = make_report("concatenation_betweenness", m, kStrictSlack);
  for (std::size_t t = 0; t < trials; ++t) {
    const auto x = sampler.draw();
    const auto y = sampler.draw();
    auto one = check_concatenation_betweenness(m, x, y);
    ++r.trials;
    if (!one.holds) {
      one.trials = r.trials;
      return one;
    }
  }
  return r;
}

G23Outcome g23_inequality(std::span<const double> xs) noexcept {
  double cubes = 0.0;
  double squares = 0.0;
  for (double x : xs) {
    cubes += x * x * x;
    squares += x * x;
  }
  G23Outcome out;
  out.lhs = std::abs(cubes);
  out.rhs = std::pow(std::abs(squares), 1.5);
  out.holds = out.lhs <= out.rhs * (1.0 + 1e-12);
  return out;
}

PropertyReport check_g23_inequality(std::size_t trials, std::uint64_t seed) {
  PropertyReport r;
  r.property = "g23_inequality";
  r.mean = "sum x^3 vs (sum x^2)^(3/2)";
  r.tolerance = 1e-12;
  Rng rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    std::vector<double> xs(1 + rng.below(32));
    for (double& x : xs) x = rng.below(8) == 0 ? 0.0 : rng.uniform(-10.0, 10.0);
    ++r.trials;
    const auto o = g23_inequality(xs);
    if (!o.holds) {
      violate(r, {xs}, o.lhs, o.rhs);
      return r;
    }
  }
  return r;
}

double oracle_direct(const MeanDescriptor& d, std::span<const double> xs) {
  if (xs.empty()) throw Error(ErrorCode::EmptyState, "empty input");
  for (double x : xs) {
    if (!d.domain().contains(x)) {
      throw Error(ErrorCode::DomainError, format_real(x) + " outside " + d.domain().to_string());
    }
  }
  const std::size_t n = xs.size();
  switch (d.family()) {
    case Family::Power:
      return power_direct(xs, std::get<PowerParams>(d.params()).p);
    case Family::QuasiArithmetic: {
      const auto& f = std::get<QuasiArithmeticParams>(d.params()).f;
      double s = 0.0;
      for (double x : xs) s += f.forward(x);
      return f.inverse(s / static_cast<double>(n));
    }
    case Family::Gini: {
      const auto& g = std::get<GiniParams>(d.params());
      double num = 0.0;
      double den = 0.0;
      for (double x : xs) {
        num += g.p == g.q ? std::pow(x, g.p) * std::log(x) : std::pow(x, g.p);
        den += std::pow(x, g.q);
      }
      return g.p == g.q ? std::exp(num / den) : std::pow(num / den, 1.0 / (g.p - g.q));
    }
    case Family::Bajraktarevic: {
      const auto& pair = std::get<BajraktarevicParams>(d.params()).pair;
      double num = 0.0;
      double den = 0.0;
      for (double x : xs) {
        num += pair.f.eval(x);
        den += pair.g.eval(x);
      }
      return pair.ratio_inverse(num / den);
    }
    case Family::Hamy: {
      require_brute_force_size(xs, d);
      const auto r = static_cast<std::size_t>(std::get<HamyParams>(d.params()).r);
      if (n < r) return arithmetic(xs);
      double total = 0.0;
      for_each_subset(n, r, [&](std::span<const std::size_t> idx) {
        double prod = 1.0;
        for (std::size_t i : idx) prod *= xs[i];
        total += std::pow(prod, 1.0 / static_cast<double>(r));
      });
      return total / exact_binomial(n, r);
    }
    case Family::SymPoly: {
      require_brute_force_size(xs, d);
      const auto r = static_cast<std::size_t>(std::get<SymPolyParams>(d.params()).r);
      if (n < r) return arithmetic(xs);
      return std::pow(subset_power_products(xs, r, 1.0) / exact_binomial(n, r),
                      1.0 / static_cast<double>(r));
    }
    case Family::Biplanar: {
      require_brute_force_size(xs, d);
      const auto& b = std::get<BiplanarParams>(d.params());
      const auto c = static_cast<std::size_t>(b.c);
      const auto dd = static_cast<std::size_t>(b.d);
      if (n < std::max(c, dd)) return power_direct(xs, b.p);
      const double num = exact_binomial(n, dd) * subset_power_products(xs, c, b.p);
      const double den = exact_binomial(n, c) * subset_power_products(xs, dd, b.q);
      return std::pow(num / den, 1.0 / (static_cast<double>(b.c) * b.p -
                                        static_cast<double>(b.d) * b.q));
    }
    case Family::Median: {
      std::vector<double> sorted(xs.begin(), xs.end());
      std::sort(sorted.begin(), sorted.end());
      const bool lower = std::get<MedianParams>(d.params()).kind == MedianKind::lower;
      return sorted[lower ? (n - 1) / 2 : n / 2];
    }
    case Family::PiecewiseH: {
      if (n == 1) return xs[0];
      if (n == 2) return 0.5 * (xs[0] + xs[1]);
      double sq = 0.0;
      double s = 0.0;
      for (double x : xs) {
        sq += x * x;
        s += x;
      }
      return sq / s;
    }
    case Family::CubeOverSquare: {
      double cubes = 0.0;
      double squares = 0.0;
      for (double x : xs) {
        cubes += x * x * x;
        squares += x * x;
      }
      return squares == 0.0 ? 0.0 : cubes / squares;
    }
  }
  throw Error(ErrorCode::InvalidDescriptor, "unknown family");
}

PropertyReport check_oracle_equivalence(const MeanDescriptor& descriptor, VectorSampler& sampler,
                                        std::size_t trials, double tolerance) {
  auto m = from_descriptor(descriptor);
  auto r = make_report("oracle_equivalence", m, tolerance);
  double worst = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto xs = sampler.draw();
    ++r.trials;
    const auto streamed = evaluate(m, xs);
    double direct = std::numeric_limits<double>::quiet_NaN();
    std::string error = streamed.error;
    try {
      direct = oracle_direct(descriptor, xs);
    } catch (const Error& e) {
      error = e.what();
    }
    const double diff = relative_difference(streamed.value, direct);
    if (!error.empty() || !(diff <= tolerance)) {
      violate(r, {xs}, streamed.value, direct, error);
      return r;
    }
    worst = std::max(worst, diff);
  }
  r.detail = "max relative error " + format_real(worst);
  return r;
}

std::vector<PropertyReport> run_suite(const MeanDescriptor& d, std::uint64_t seed) {
  Rng master(seed);
  const auto m = from_descriptor(d);
  SamplerConfig mean_cfg;
  SamplerConfig oracle_cfg;
  oracle_cfg.max_len = kBruteForceLimit;
  auto sampler = [&](SamplerConfig cfg) { return VectorSampler(d.domain(), cfg, master.split()); };

  std::vector<PropertyReport> out;
  {
    auto s = sampler(mean_cfg);
    out.push_back(check_mean_property(m, s, 500));
  }
  out.push_back(check_reflexivity(m, reflexivity_grid(d.domain())));
  {
    auto s = sampler(mean_cfg);
    out.push_back(check_symmetry(m, s, 100));
  }
  {
    auto s = sampler(mean_cfg);
    const std::size_t mults[] = {2, 3};
    out.push_back(check_repetition_invariance(m, s, 100, mults));
  }
  if (d.domain().subset_of(DomainInterval::positive())) {
    auto s = sampler(mean_cfg);
    const double lambdas[] = {0.5, 2.0, 10.0};
    out.push_back(check_homogeneity(m, s, 100, lambdas));
  }
  {
    auto s = sampler(mean_cfg);
    out.push_back(check_concatenation_betweenness(m, s, 200));
  }
  {
    auto s = sampler(mean_cfg);
    const double candidates[] = {0.0, 1.0, -1.0};
    out.push_back(detect_negligible_element(m, candidates, s, 50).to_report(m.name));
  }
  {
    auto s = sampler(oracle_cfg);
    out.push_back(check_oracle_equivalence(d, s, 300));
  }
  return out;
}

}  // namespace meanstream::verify
