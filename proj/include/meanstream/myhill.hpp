#pragma once

// Approximate Myhill-type equivalence classes of a black-box premean over a
// finite alphabet. Two words are equivalent when the mean agrees on them and on
// every probe-extended pair. Premeans are symmetric, so words are enumerated
// as multisets.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "meanstream/descriptor.hpp"
#include "meanstream/verify.hpp"

namespace meanstream::myhill {

inline constexpr std::size_t kMaxAlphabet = 5;
inline constexpr std::size_t kMaxLength = 10;
inline constexpr std::uint64_t kEvaluationBudget = 10'000'000;

struct Tolerance {
  double atol = 1e-12;
  double rtol = 1e-9;

  /// |a - b| <= atol + rtol * max(|a|, |b|); two NaNs compare equal.
  [[nodiscard]] bool close(double a, double b) const noexcept;
  [[nodiscard]] Tolerance halved() const noexcept { return {atol / 2, rtol / 2}; }
};

struct ClassProfile {
  std::string mean;
  std::vector<double> alphabet;
  std::size_t max_len = 0;
  std::vector<std::vector<double>> probes;
  /// counts[i] is the class count among words of length i + 1.
  std::vector<std::size_t> counts;
  Tolerance tolerance;
  std::uint64_t evaluations = 0;

  [[nodiscard]] nlohmann::json to_json() const;
};

enum class Growth { bounded_linear, superlinear };

[[nodiscard]] std::string_view growth_name(Growth g) noexcept;

struct GrowthReport {
  Growth classification = Growth::bounded_linear;
  double slope = 0.0;
  double intercept = 0.0;
  std::size_t fit_max_len = 0;
  double predicted = 0.0;
  double observed = 0.0;
  std::string fit;

  [[nodiscard]] nlohmann::json to_json() const;
};

/// Every word over the alphabet of length 1..probe_len.
[[nodiscard]] std::vector<std::vector<double>> default_probes(std::span<const double> alphabet,
                                                              std::size_t probe_len = 2);

/// All multisets of size n over the alphabet, each as a nondecreasing vector.
[[nodiscard]] std::vector<std::vector<double>> multisets(std::span<const double> alphabet,
                                                         std::size_t n);

/// Class counts for lengths 1..max_len. Counts come from union-find over the
/// "within tolerance" graph, so they are lower bounds on exact class counts.
/// Throws DomainError for letters outside m.domain, InvalidDescriptor for a bad
/// alphabet or length, BudgetExceeded beyond 1e7 evaluations.
[[nodiscard]] ClassProfile enumerate_classes(const verify::MeanUnderTest& m,
                                             std::span<const double> alphabet,
                                             std::size_t max_len,
                                             std::span<const std::vector<double>> probes,
                                             Tolerance tol = {});

/// Distinct reachable accumulator states per length, states compared
/// componentwise within `tol`.
[[nodiscard]] std::vector<std::size_t> state_counts(const MeanDescriptor& descriptor,
                                                    std::span<const double> alphabet,
                                                    std::size_t max_len, Tolerance tol = {});

/// Heuristic: fits a line to the counts of the shorter lengths and calls growth
/// superlinear when the count at max_len clearly outruns the extrapolation.
/// Throws InsufficientData for max_len < 4.
[[nodiscard]] GrowthReport growth_report(const ClassProfile& profile);

}  // namespace meanstream::myhill
