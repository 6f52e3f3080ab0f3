#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "meanstream/generator.hpp"
#include "meanstream/types.hpp"

namespace meanstream {

enum class Family {
  Power,
  QuasiArithmetic,
  Gini,
  Bajraktarevic,
  Hamy,
  SymPoly,
  Biplanar,
  Median,
  PiecewiseH,
  CubeOverSquare,
};

/// "power", "quasi_arithmetic", "gini", "bajraktarevic", "hamy", "sympoly",
/// "biplanar", "median", "piecewise_h", "cube_over_square".
[[nodiscard]] std::string_view family_name(Family family) noexcept;
/// Accepts the names above; '-' is treated as '_'.
[[nodiscard]] std::optional<Family> family_from_name(std::string_view name);

enum class MedianKind { lower, upper };

struct PowerParams {
  double p = 1.0;
};
struct QuasiArithmeticParams {
  GeneratorFunction f;
};
struct GiniParams {
  double p = 1.0;
  double q = 0.0;
};
struct BajraktarevicParams {
  BajraktarevicPair pair;
};
struct HamyParams {
  int r = 1;
};
struct SymPolyParams {
  int r = 1;
};
struct BiplanarParams {
  double p = 1.0;
  double q = 0.0;
  int c = 1;
  int d = 1;
  // Filled in by the descriptor: sorted union of {p,..,cp} and {q,..,dq}.
  std::vector<double> exponent_set;
  int k = 0;
  // p = 0 needs sum(ln x) for the geometric fallback; held in an extra slot.
  bool log_slot = false;
};
struct MedianParams {
  MedianKind kind = MedianKind::lower;
};
struct NoParams {};

using FamilyParams = std::variant<PowerParams, QuasiArithmeticParams, GiniParams,
                                  BajraktarevicParams, HamyParams, SymPolyParams, BiplanarParams,
                                  MedianParams, NoParams>;

/// Upper bound on the fixed state dimension of any finite-type family.
inline constexpr std::size_t kMaxDimension = 32;

/// Finite encoding of a generating pair (F, G): family + parameters + domain.
/// Immutable after construction; the constructor validates admissibility and
/// throws InvalidDescriptor (or the family-specific code) on failure.
class MeanDescriptor {
 public:
  MeanDescriptor(Family family, FamilyParams params, DomainInterval domain);

  [[nodiscard]] Family family() const noexcept { return family_; }
  [[nodiscard]] const FamilyParams& params() const noexcept { return params_; }
  [[nodiscard]] const DomainInterval& domain() const noexcept { return domain_; }

  /// nullopt for the median, which has no finite type.
  [[nodiscard]] std::optional<ComplexityType> ctype() const noexcept { return ctype_; }
  /// Hamy means: only the upper bound T_r+ is known.
  [[nodiscard]] bool ctype_is_upper_bound() const noexcept { return upper_bound_; }
  /// Number of real slots in the state (0 for the median's unbounded state).
  [[nodiscard]] std::size_t dimension() const noexcept { return dimension_; }
  [[nodiscard]] bool has_counter() const noexcept { return has_counter_; }
  [[nodiscard]] bool unbounded_state() const noexcept { return family_ == Family::Median; }

  /// Canonical identifier binding states to this descriptor.
  [[nodiscard]] const std::string& id() const noexcept { return id_; }
  /// Human-readable label, e.g. "gini(p=2,q=1)".
  [[nodiscard]] const std::string& label() const noexcept { return label_; }
  /// Family parameters without the family tag.
  [[nodiscard]] nlohmann::json params_json() const;
  /// {"family": ..., params...}
  [[nodiscard]] nlohmann::json to_json() const;

  /// F(x) written into `out` (size dimension()). x must be in the domain.
  void encode(double x, std::span<double> out) const;
  /// G(state). `count` is only consulted by counter families.
  [[nodiscard]] double decode(std::span<const double> reals, std::uint64_t count) const;

 private:
  Family family_;
  FamilyParams params_;
  DomainInterval domain_;
  std::optional<ComplexityType> ctype_;
  bool upper_bound_ = false;
  std::size_t dimension_ = 0;
  bool has_counter_ = false;
  std::string id_;
  std::string label_;
};

}  // namespace meanstream
