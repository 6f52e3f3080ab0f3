#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "meanstream/core.hpp"
#include "meanstream/error.hpp"
#include "meanstream/families.hpp"

namespace meanstream {
namespace {

using nlohmann::json;

constexpr int kStateVersion = 1;

std::string hex_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", x);
  return buf;
}

// Offset of a key in the raw text, for error reporting on semantic problems.
std::size_t offset_of(std::string_view text, std::string_view key) {
  const std::string quoted = "\"" + std::string(key) + "\"";
  const auto pos = text.find(quoted);
  return pos == std::string_view::npos ? 0 : pos;
}

}  // namespace

std::string serialize_state(const AccumulatorState& state) {
  const MeanDescriptor& d = state.descriptor();
  json reals = json::array();
  for (double x : state.reals()) reals.push_back(hex_real(x));
  json out;
  out["version"] = kStateVersion;
  out["family"] = std::string(family_name(d.family()));
  out["params"] = d.params_json();
  out["k"] = state.reals().size();
  out["reals"] = std::move(reals);
  out["counter"] = state.counter() ? json(*state.counter()) : json(nullptr);
  out["overflow"] = state.overflow();
  if (!d.has_counter()) out["empty"] = state.empty();
  return out.dump();
}

AccumulatorState parse_state(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(e.byte > 0 ? e.byte - 1 : 0, "malformed state JSON");
  }
  auto fail = [&](std::string_view key, const std::string& message) -> ParseError {
    return ParseError(offset_of(text, key), message);
  };
  if (!doc.is_object()) throw ParseError(0, "state must be a JSON object");

  const auto version = doc.find("version");
  if (version == doc.end() || !version->is_number_integer() || *version != kStateVersion) {
    throw fail("version", "unsupported state version");
  }
  const auto family = doc.find("family");
  const auto params = doc.find("params");
  if (family == doc.end() || !family->is_string()) throw fail("family", "missing family");
  if (params == doc.end() || !params->is_object()) throw fail("params", "missing params object");

  json spec = *params;
  spec["family"] = *family;
  DescriptorPtr descriptor;
  try {
    descriptor = std::make_shared<const MeanDescriptor>(descriptor_from_json(spec));
  } catch (const Error& e) {
    throw fail("params", e.what());
  }

  const auto reals = doc.find("reals");
  if (reals == doc.end() || !reals->is_array()) throw fail("reals", "missing reals array");
  const auto k = doc.find("k");
  if (k == doc.end() || !k->is_number_unsigned() || k->get<std::size_t>() != reals->size()) {
    throw fail("k", "k does not match the number of reals");
  }
  if (!descriptor->unbounded_state() && reals->size() != descriptor->dimension()) {
    throw fail("k", "k does not match the family's state dimension");
  }

  AccumulatorState state = init(descriptor);
  state.reals_.clear();
  for (const auto& item : *reals) {
    if (!item.is_string()) throw fail("reals", "reals must be hex-float strings");
    const auto& s = item.get_ref<const std::string&>();
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) {
      throw fail("reals", "cannot parse real '" + s + "'");
    }
    state.reals_.push_back(v);
  }
  if (descriptor->unbounded_state() &&
      !std::is_sorted(state.reals_.begin(), state.reals_.end())) {
    throw fail("reals", "median state must be sorted");
  }

  const auto counter = doc.find("counter");
  if (counter == doc.end()) throw fail("counter", "missing counter");
  if (descriptor->has_counter()) {
    if (!counter->is_number_unsigned()) throw fail("counter", "counter must be a nonnegative integer");
    state.counter_ = counter->get<std::uint64_t>();
    if (*state.counter_ == 0 && std::any_of(state.reals_.begin(), state.reals_.end(),
                                            [](double v) { return v != 0.0; })) {
      throw fail("counter", "counter 0 with nonzero reals is not a reachable state");
    }
  } else if (!counter->is_null()) {
    throw fail("counter", "this family carries no counter");
  }

  const auto overflow = doc.find("overflow");
  if (overflow == doc.end() || !overflow->is_boolean()) throw fail("overflow", "missing overflow flag");
  state.overflow_ = overflow->get<bool>();

  if (descriptor->unbounded_state()) {
    state.empty_ = state.reals_.empty();
  } else if (!descriptor->has_counter()) {
    const auto empty = doc.find("empty");
    if (empty != doc.end() && !empty->is_boolean()) throw fail("empty", "empty must be a boolean");
    state.empty_ = empty != doc.end() && empty->get<bool>();
    if (state.empty_ && std::any_of(state.reals_.begin(), state.reals_.end(),
                                    [](double v) { return v != 0.0; })) {
      throw fail("empty", "empty state must have all-zero reals");
    }
  }
  return state;
}

}  // namespace meanstream
