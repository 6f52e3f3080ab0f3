#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "meanstream/descriptor.hpp"

namespace meanstream {

using DescriptorPtr = std::shared_ptr<const MeanDescriptor>;

class AccumulatorState;

[[nodiscard]] AccumulatorState init(DescriptorPtr descriptor);
[[nodiscard]] AccumulatorState init(const MeanDescriptor& descriptor);
[[nodiscard]] AccumulatorState parse_state(std::string_view text);

/// An element of the freedom space: the semigroup sum of F over the absorbed
/// elements. States can only be obtained from init, absorb, merge or
/// parse_state, so every state is reachable. Values are cheap to copy and
/// carry no shared mutable data.
class AccumulatorState {
 public:
  [[nodiscard]] const MeanDescriptor& descriptor() const noexcept { return *descriptor_; }
  [[nodiscard]] const DescriptorPtr& descriptor_ptr() const noexcept { return descriptor_; }
  [[nodiscard]] const std::string& family_id() const noexcept { return descriptor_->id(); }

  [[nodiscard]] std::span<const double> reals() const noexcept { return reals_; }
  /// Present iff the family's type carries a counter.
  [[nodiscard]] std::optional<std::uint64_t> counter() const noexcept { return counter_; }
  /// Sticky: set once any component became non-finite.
  [[nodiscard]] bool overflow() const noexcept { return overflow_; }
  /// No element absorbed yet.
  [[nodiscard]] bool empty() const noexcept { return counter_ ? *counter_ == 0 : empty_; }

  /// In-place forms of absorb/merge, for hot loops.
  void absorb_in_place(double x);
  void merge_in_place(const AccumulatorState& other);

 private:
  explicit AccumulatorState(DescriptorPtr descriptor);

  friend AccumulatorState init(DescriptorPtr descriptor);
  friend AccumulatorState parse_state(std::string_view text);

  DescriptorPtr descriptor_;
  std::vector<double> reals_;
  std::optional<std::uint64_t> counter_;
  bool overflow_ = false;
  bool empty_ = true;  // sentinel for counterless families
};

/// state + F(x). Throws DomainError when x is outside the domain.
[[nodiscard]] AccumulatorState absorb(const AccumulatorState& state, double x);
/// Semigroup addition. Throws FamilyMismatch.
[[nodiscard]] AccumulatorState merge(const AccumulatorState& a, const AccumulatorState& b);
/// G(state). Throws EmptyState, NumericalFailure.
[[nodiscard]] double finalize(const AccumulatorState& state);

/// finalize(fold(absorb, init, xs)).
[[nodiscard]] double evaluate_stream(const MeanDescriptor& descriptor, std::span<const double> xs);
[[nodiscard]] double evaluate_stream(const DescriptorPtr& descriptor, std::span<const double> xs);

/// JSON state file, reals as hex-float strings (bit-exact round trip).
[[nodiscard]] std::string serialize_state(const AccumulatorState& state);

struct TypeReport {
  std::string family;
  std::string label;
  std::optional<ComplexityType> ctype;  // nullopt: no finite type
  bool upper_bound = false;
  /// k as counted from the defining formula (the exponent set for biplanar).
  int bound_k = 0;
  /// Number of real slots the implementation keeps.
  std::size_t state_dimension = 0;
  bool counter = false;
  std::string note;

  [[nodiscard]] std::string type_string() const;
  /// Chain position T1 < T1+ < T2 < ..., -1 for no finite type.
  [[nodiscard]] int chain_position() const noexcept;
  [[nodiscard]] nlohmann::json to_json() const;
  [[nodiscard]] std::string to_text() const;
};

[[nodiscard]] TypeReport classify(const MeanDescriptor& descriptor);

}  // namespace meanstream
