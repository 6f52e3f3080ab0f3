#include "meanstream/symfun.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "meanstream/error.hpp"
#include "meanstream/generator.hpp"

namespace meanstream::symfun {
namespace {

// Largest magnitude for which every integer is exactly representable.
constexpr double kExactIntegerLimit = 9007199254740992.0;  // 2^53

// Left-to-right sum of an ascending list. Subset sums, merged blocks and
// exponent_multiple all go through here so equal multisets give equal keys.
double canonical_sum(std::span<const double> sorted_parts) noexcept {
  double acc = 0.0;
  for (double p : sorted_parts) acc += p;
  return acc;
}

struct Block {
  double exponent = 0.0;
  std::vector<double> parts;  // ascending original exponents merged into this block

  bool operator<(const Block& other) const {
    if (exponent != other.exponent) return exponent < other.exponent;
    return parts < other.parts;
  }
};

Block combine(const Block& a, const Block& b) {
  Block out;
  out.parts.reserve(a.parts.size() + b.parts.size());
  std::merge(a.parts.begin(), a.parts.end(), b.parts.begin(), b.parts.end(),
             std::back_inserter(out.parts));
  out.exponent = canonical_sum(out.parts);
  return out;
}

struct IntegerOverflow {};

// 128-bit integer that refuses to wrap.
struct CheckedInt {
  __int128 v = 0;

  friend CheckedInt operator+(CheckedInt a, CheckedInt b) {
    CheckedInt r;
    if (__builtin_add_overflow(a.v, b.v, &r.v)) throw IntegerOverflow{};
    return r;
  }
  friend CheckedInt operator-(CheckedInt a, CheckedInt b) {
    CheckedInt r;
    if (__builtin_sub_overflow(a.v, b.v, &r.v)) throw IntegerOverflow{};
    return r;
  }
  friend CheckedInt operator*(CheckedInt a, CheckedInt b) {
    CheckedInt r;
    if (__builtin_mul_overflow(a.v, b.v, &r.v)) throw IntegerOverflow{};
    return r;
  }
  CheckedInt& operator-=(CheckedInt b) { return *this = *this - b; }
  [[nodiscard]] double to_double() const noexcept { return static_cast<double>(v); }
};

template <typename Num>
class Expander {
 public:
  explicit Expander(std::map<double, Num> base) : base_(std::move(base)) {}

  Num eval(std::vector<Block> blocks) {
    std::sort(blocks.begin(), blocks.end());
    if (blocks.size() == 1) return base_.at(blocks.front().exponent);

    std::vector<double> key;
    key.reserve(blocks.size());
    for (const auto& b : blocks) key.push_back(b.exponent);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    ++expansions_;

    const Block head = blocks.front();
    std::vector<Block> rest(blocks.begin() + 1, blocks.end());
    Num value = eval(rest) * base_.at(head.exponent);
    for (std::size_t i = 0; i < rest.size(); ++i) {
      auto merged = rest;
      merged[i] = combine(rest[i], head);
      value -= eval(std::move(merged));
    }
    memo_.emplace(std::move(key), value);
    return value;
  }

  [[nodiscard]] std::size_t expansions() const noexcept { return expansions_; }

 private:
  std::map<double, Num> base_;
  std::map<std::vector<double>, Num> memo_;
  std::size_t expansions_ = 0;
};

}  // namespace

double exponent_multiple(double p, int m) noexcept {
  double acc = 0.0;
  for (int i = 0; i < m; ++i) acc += p;
  return acc;
}

ExponentMultiset::ExponentMultiset(std::vector<double> exponents)
    : exponents_(std::move(exponents)) {
  if (exponents_.empty()) {
    throw Error(ErrorCode::InvalidDescriptor, "exponent multiset must be nonempty");
  }
  for (double p : exponents_) {
    if (!std::isfinite(p)) throw Error(ErrorCode::InvalidDescriptor, "exponent is not finite");
  }
  std::sort(exponents_.begin(), exponents_.end());
}

void GammaTable::set(double exponent, double value) { values_[exponent] = value; }

bool GammaTable::contains(double exponent) const noexcept {
  return values_.find(exponent) != values_.end();
}

double GammaTable::at(double exponent) const {
  const auto it = values_.find(exponent);
  if (it == values_.end()) {
    throw Error(ErrorCode::MissingGamma, "no power sum for exponent " + format_real(exponent));
  }
  return it->second;
}

GammaTable power_sums(std::span<const double> xs, std::span<const double> exponents) {
  if (xs.empty()) throw Error(ErrorCode::DomainError, "power sums need at least one element");
  for (double x : xs) {
    if (!(x > 0.0) || !std::isfinite(x)) {
      throw Error(ErrorCode::DomainError, "power sums need positive entries, got " + format_real(x));
    }
  }
  GammaTable table(xs.size());
  for (double q : exponents) {
    double sum = 0.0;
    if (q == 0.0) {
      sum = static_cast<double>(xs.size());
    } else {
      for (double x : xs) sum += std::pow(x, q);
    }
    table.set(q, sum);
  }
  return table;
}

std::vector<double> exponent_closure(const ExponentMultiset& ms) {
  const auto exps = ms.exponents();
  if (exps.size() > kMaxExponents) {
    throw Error(ErrorCode::TooLarge, "at most " + std::to_string(kMaxExponents) + " exponents");
  }
  std::set<double> closure;
  std::vector<double> parts;
  const std::size_t subsets = std::size_t{1} << exps.size();
  for (std::size_t mask = 1; mask < subsets; ++mask) {
    parts.clear();
    for (std::size_t i = 0; i < exps.size(); ++i) {
      if (mask & (std::size_t{1} << i)) parts.push_back(exps[i]);
    }
    closure.insert(canonical_sum(parts));
  }
  return {closure.begin(), closure.end()};
}

double gamma_multi(const ExponentMultiset& ms, const GammaTable& table, GammaStats* stats) {
  const auto closure = exponent_closure(ms);
  for (double q : closure) (void)table.at(q);  // fail fast on gaps

  if (stats) *stats = GammaStats{};
  if (table.count() < ms.size()) {
    if (stats) stats->exact_integer = true;
    return 0.0;
  }

  std::vector<Block> blocks;
  blocks.reserve(ms.size());
  for (double p : ms.exponents()) blocks.push_back(Block{p, {p}});

  const bool integral = std::all_of(closure.begin(), closure.end(), [&](double q) {
    const double v = table.at(q);
    return std::abs(v) <= kExactIntegerLimit && std::trunc(v) == v;
  });
  if (integral) {
    std::map<double, CheckedInt> base;
    for (double q : closure) base[q] = CheckedInt{static_cast<__int128>(table.at(q))};
    Expander<CheckedInt> expander(std::move(base));
    try {
      const CheckedInt value = expander.eval(blocks);
      if (stats) *stats = GammaStats{expander.expansions(), true};
      return value.to_double();
    } catch (const IntegerOverflow&) {
      // fall through to binary64
    }
  }

  std::map<double, double> base;
  for (double q : closure) base[q] = table.at(q);
  Expander<double> expander(std::move(base));
  const double value = expander.eval(std::move(blocks));
  if (stats) *stats = GammaStats{expander.expansions(), false};
  return value;
}

double sigma_from_power(int s, double p, const GammaTable& table) {
  if (s < 1) throw Error(ErrorCode::InvalidDescriptor, "sigma degree must be >= 1");
  if (table.count() < static_cast<std::uint64_t>(s)) return 0.0;
  const ExponentMultiset ms(std::vector<double>(static_cast<std::size_t>(s), p));
  return gamma_multi(ms, table) / factorial(s);
}

Binomial binomial(std::uint64_t n, std::uint64_t r) noexcept {
  Binomial out;
  out.precision_warning = n > 1000000 && r >= 8;
  if (r > n) return out;
  const std::uint64_t m = std::min(r, n - r);
  double value = 1.0;
  for (std::uint64_t i = 1; i <= m; ++i) {
    value = value * static_cast<double>(n - m + i) / static_cast<double>(i);
  }
  out.value = value;
  return out;
}

double factorial(int s) noexcept {
  double f = 1.0;
  for (int i = 2; i <= s; ++i) f *= i;
  return f;
}

}  // namespace meanstream::symfun
