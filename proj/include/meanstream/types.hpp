#pragma once

#include <compare>
#include <limits>
#include <string>

namespace meanstream {

/// Real interval with optionally infinite, optionally closed endpoints.
struct DomainInterval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool lo_closed = false;
  bool hi_closed = false;

  static DomainInterval real_line() noexcept { return {}; }
  static DomainInterval positive() noexcept {
    return {0.0, std::numeric_limits<double>::infinity(), false, false};
  }
  static DomainInterval closed(double lo, double hi) noexcept { return {lo, hi, true, true}; }

  [[nodiscard]] bool valid() const noexcept { return lo < hi; }
  [[nodiscard]] bool contains(double x) const noexcept;
  /// True when every point of this interval lies in `other`.
  [[nodiscard]] bool subset_of(const DomainInterval& other) const noexcept;
  [[nodiscard]] DomainInterval intersect(const DomainInterval& other) const noexcept;
  [[nodiscard]] std::string to_string() const;

  bool operator==(const DomainInterval&) const = default;
};

/// Position in the chain T1 < T1+ < T2 < T2+ < ...
struct ComplexityType {
  int k = 1;
  bool plus_counter = false;

  [[nodiscard]] constexpr int order_index() const noexcept {
    return plus_counter ? 2 * k - 1 : 2 * k - 2;
  }
  /// "T2", "T3+".
  [[nodiscard]] std::string to_string() const;

  friend constexpr bool operator==(const ComplexityType& a, const ComplexityType& b) noexcept {
    return a.order_index() == b.order_index();
  }
  friend constexpr auto operator<=>(const ComplexityType& a, const ComplexityType& b) noexcept {
    return a.order_index() <=> b.order_index();
  }
};

}  // namespace meanstream
