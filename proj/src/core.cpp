#include "meanstream/core.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "meanstream/error.hpp"

namespace meanstream {

AccumulatorState::AccumulatorState(DescriptorPtr descriptor) : descriptor_(std::move(descriptor)) {
  if (!descriptor_) throw Error(ErrorCode::InvalidDescriptor, "null descriptor");
  reals_.assign(descriptor_->dimension(), 0.0);
  if (descriptor_->has_counter()) counter_ = 0;
}

AccumulatorState init(DescriptorPtr descriptor) { return AccumulatorState(std::move(descriptor)); }

AccumulatorState init(const MeanDescriptor& descriptor) {
  return init(std::make_shared<const MeanDescriptor>(descriptor));
}

void AccumulatorState::absorb_in_place(double x) {
  const MeanDescriptor& d = *descriptor_;
  if (!d.domain().contains(x)) {
    throw Error(ErrorCode::DomainError,
                format_real(x) + " is outside " + d.domain().to_string() + " for " + d.label());
  }
  if (d.unbounded_state()) {
    reals_.insert(std::upper_bound(reals_.begin(), reals_.end(), x), x);
  } else {
    std::array<double, kMaxDimension> encoded{};
    const std::span<double> slots(encoded.data(), reals_.size());
    d.encode(x, slots);
    for (std::size_t i = 0; i < reals_.size(); ++i) {
      reals_[i] += slots[i];
      if (!std::isfinite(reals_[i])) overflow_ = true;
    }
  }
  if (counter_) ++*counter_;
  empty_ = false;
}

void AccumulatorState::merge_in_place(const AccumulatorState& other) {
  if (family_id() != other.family_id()) {
    throw Error(ErrorCode::FamilyMismatch, descriptor_->label() + " vs " + other.descriptor().label());
  }
  if (descriptor_->unbounded_state()) {
    std::vector<double> merged;
    merged.reserve(reals_.size() + other.reals_.size());
    std::merge(reals_.begin(), reals_.end(), other.reals_.begin(), other.reals_.end(),
               std::back_inserter(merged));
    reals_ = std::move(merged);
  } else {
    for (std::size_t i = 0; i < reals_.size(); ++i) {
      reals_[i] += other.reals_[i];
      if (!std::isfinite(reals_[i])) overflow_ = true;
    }
  }
  if (counter_) *counter_ += *other.counter_;
  overflow_ = overflow_ || other.overflow_;
  empty_ = empty_ && other.empty_;
}

AccumulatorState absorb(const AccumulatorState& state, double x) {
  AccumulatorState out = state;
  out.absorb_in_place(x);
  return out;
}

AccumulatorState merge(const AccumulatorState& a, const AccumulatorState& b) {
  AccumulatorState out = a;
  out.merge_in_place(b);
  return out;
}

double finalize(const AccumulatorState& state) {
  if (state.empty()) {
    throw Error(ErrorCode::EmptyState, "no element absorbed into " + state.descriptor().label());
  }
  if (state.overflow()) {
    throw Error(ErrorCode::NumericalFailure, "state overflowed for " + state.descriptor().label());
  }
  const std::uint64_t count =
      state.counter() ? *state.counter() : static_cast<std::uint64_t>(state.reals().size());
  const double value = state.descriptor().decode(state.reals(), count);
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::NumericalFailure,
                "finalizer produced " + format_real(value) + " for " + state.descriptor().label());
  }
  return value;
}

double evaluate_stream(const DescriptorPtr& descriptor, std::span<const double> xs) {
  if (xs.empty()) throw Error(ErrorCode::EmptyState, "empty input stream");
  AccumulatorState state = init(descriptor);
  for (double x : xs) state.absorb_in_place(x);
  return finalize(state);
}

double evaluate_stream(const MeanDescriptor& descriptor, std::span<const double> xs) {
  return evaluate_stream(std::make_shared<const MeanDescriptor>(descriptor), xs);
}

std::string TypeReport::type_string() const {
  return ctype ? ctype->to_string() : std::string("no finite type");
}

int TypeReport::chain_position() const noexcept { return ctype ? ctype->order_index() : -1; }

nlohmann::json TypeReport::to_json() const {
  nlohmann::json out{{"family", family},
                     {"label", label},
                     {"type", type_string()},
                     {"chain_position", chain_position()},
                     {"k", bound_k},
                     {"counter", counter},
                     {"state_dimension", state_dimension},
                     {"upper_bound", upper_bound},
                     {"note", note}};
  if (!ctype) out["k"] = nullptr;
  return out;
}

std::string TypeReport::to_text() const {
  std::string out;
  out += "family: " + label + "\n";
  out += "type: " + type_string() + "\n";
  out += "chain_position: " + std::to_string(chain_position()) + "\n";
  out += "k: " + (ctype ? std::to_string(bound_k) : std::string("unbounded")) + "\n";
  out += "counter: " + std::string(counter ? "yes" : "no") + "\n";
  out += "state_dimension: " +
         (ctype ? std::to_string(state_dimension) : std::string("unbounded")) + "\n";
  out += "upper_bound: " + std::string(upper_bound ? "yes" : "no") + "\n";
  if (!note.empty()) out += "note: " + note + "\n";
  return out;
}

TypeReport classify(const MeanDescriptor& d) {
  TypeReport r;
  r.family = std::string(family_name(d.family()));
  r.label = d.label();
  r.ctype = d.ctype();
  r.upper_bound = d.ctype_is_upper_bound();
  r.bound_k = d.ctype() ? d.ctype()->k : 0;
  r.state_dimension = d.dimension();
  r.counter = d.has_counter();
  switch (d.family()) {
    case Family::Power:
    case Family::QuasiArithmetic:
      r.note = "T1+ consists exactly of the quasi-arithmetic means; no mean is of type T1";
      break;
    case Family::Gini:
    case Family::Bajraktarevic:
      r.note = "repetition invariant, no negligible element";
      break;
    case Family::Hamy:
      r.note = "upper bound; whether the mean lies in T" + std::to_string(r.bound_k) +
               " is an open problem";
      break;
    case Family::SymPoly:
      r.note = "upper bound from the state (power sums 1..r, n)";
      break;
    case Family::Biplanar: {
      const auto& b = std::get<BiplanarParams>(d.params());
      r.note = "k = |{p..cp} u {q..dq}|, at most c + d = " + std::to_string(b.c + b.d);
      if (b.log_slot) r.note += "; one extra slot holds sum(ln x) for the p = 0 fallback";
      break;
    }
    case Family::Median:
      r.note = "no finite type: the state is the full multiset";
      break;
    case Family::PiecewiseH:
      r.note = "not repetition invariant, hence not a Bajraktarevic mean";
      break;
    case Family::CubeOverSquare:
      r.note = "negligible element 0, hence not a Bajraktarevic mean";
      break;
  }
  return r;
}

}  // namespace meanstream
