#pragma once

// Generalised power sums. For positive x_1..x_n:
//
//   gamma_{p1..ps} = sum over pairwise distinct indices i1..is of x_i1^p1 ... x_is^ps
//   sigma_{s,p}    = gamma_{p,..,p} / s!
//
// Multi-exponent gammas are reduced to single power sums by peeling one
// exponent at a time:
//
//   gamma_{p0,p1..ps} = gamma_{p1..ps} gamma_{p0} - sum_i gamma_{p1,..,pi+p0,..,ps}
//
// so only gamma_q for q in the subset-sum closure of the exponents is needed.
// Both quantities are zero when there are fewer elements than exponents.

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace meanstream::symfun {

/// Largest multiset size accepted by gamma_multi (the closure has 2^s - 1 subsets).
inline constexpr std::size_t kMaxExponents = 12;

/// m-fold left-to-right sum p + p + ... + p. This is the same float path the
/// engine uses for subset sums, so table keys built with it always match.
[[nodiscard]] double exponent_multiple(double p, int m) noexcept;

/// Sorted exponent list; the sorted tuple is the canonical key.
class ExponentMultiset {
 public:
  explicit ExponentMultiset(std::vector<double> exponents);
  [[nodiscard]] std::span<const double> exponents() const noexcept { return exponents_; }
  [[nodiscard]] std::size_t size() const noexcept { return exponents_.size(); }

 private:
  std::vector<double> exponents_;
};

/// Single-exponent power sums gamma_q keyed by exact exponent, plus n.
class GammaTable {
 public:
  explicit GammaTable(std::uint64_t count) : count_(count) {}

  void set(double exponent, double value);
  [[nodiscard]] bool contains(double exponent) const noexcept;
  /// Throws MissingGamma.
  [[nodiscard]] double at(double exponent) const;
  [[nodiscard]] std::uint64_t count() const noexcept { return count_; }
  [[nodiscard]] const std::map<double, double>& values() const noexcept { return values_; }

 private:
  std::uint64_t count_;
  std::map<double, double> values_;
};

/// gamma_q = sum x_i^q for each requested q (gamma_0 = n). Entries must be > 0.
[[nodiscard]] GammaTable power_sums(std::span<const double> xs, std::span<const double> exponents);

/// Canonical subset sums {sum_{i in T} p_i : T nonempty}, sorted and deduplicated.
[[nodiscard]] std::vector<double> exponent_closure(const ExponentMultiset& ms);

struct GammaStats {
  std::size_t expansions = 0;  // distinct multi-exponent multisets expanded
  bool exact_integer = false;  // evaluated in checked 128-bit integer arithmetic
};

/// Distinct-index multi-power sum. Throws MissingGamma if the table does not
/// cover the closure, TooLarge beyond kMaxExponents exponents.
[[nodiscard]] double gamma_multi(const ExponentMultiset& ms, const GammaTable& table,
                                 GammaStats* stats = nullptr);

/// sigma_{s,p}: elementary symmetric polynomial of degree s in the p-th powers.
/// Requires gamma at exponent_multiple(p, m) for m = 1..s.
[[nodiscard]] double sigma_from_power(int s, double p, const GammaTable& table);

struct Binomial {
  double value = 0.0;
  bool precision_warning = false;  // n > 1e6 with r >= 8
};

/// C(n, r) in binary64 via the multiplicative formula.
[[nodiscard]] Binomial binomial(std::uint64_t n, std::uint64_t r) noexcept;

[[nodiscard]] double factorial(int s) noexcept;

}  // namespace meanstream::symfun
