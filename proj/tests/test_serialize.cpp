#include <doctest.h>

#include <bit>
#include <random>
#include <vector>

#include "meanstream/core.hpp"
#include "meanstream/error.hpp"
#include "meanstream/families.hpp"

using namespace meanstream;
using nlohmann::json;

namespace {

bool same_bits(const AccumulatorState& a, const AccumulatorState& b) {
  if (a.reals().size() != b.reals().size()) return false;
  for (std::size_t i = 0; i < a.reals().size(); ++i) {
    if (std::bit_cast<std::uint64_t>(a.reals()[i]) != std::bit_cast<std::uint64_t>(b.reals()[i])) return false;
  }
  return a.counter() == b.counter() && a.overflow() == b.overflow() && a.empty() == b.empty() &&
         a.family_id() == b.family_id();
}

std::size_t parse_offset(const std::string& text) {
  try {
    (void)parse_state(text);
  } catch (const ParseError& e) {
    return e.offset();
  }
  FAIL("expected ParseError");
  return 0;
}

std::string gini_state_text() {
  auto s = absorb(absorb(init(gini(2, 1)), 3.0), 4.0);
  return serialize_state(s);
}

}  // namespace

TEST_CASE("gini state round-trips bit-exactly") {
  const auto s = absorb(absorb(init(gini(2, 1)), 3.0), 4.0);
  const auto text = serialize_state(s);
  const auto doc = json::parse(text);
  CHECK(doc["version"] == 1);
  CHECK(doc["family"] == "gini");
  CHECK(doc["k"] == 2);
  CHECK(doc["reals"] == json({"0x1.9p+4", "0x1.cp+2"}));
  CHECK(doc["counter"].is_null());
  CHECK(doc["overflow"] == false);
  CHECK(same_bits(parse_state(text), s));
  CHECK(serialize_state(parse_state(text)) == text);
}

TEST_CASE("empty states round-trip") {
  const auto p = parse_state(serialize_state(init(power_mean(1))));
  CHECK(p.empty());
  CHECK(*p.counter() == 0);
  CHECK_THROWS_AS((void)finalize(p), Error);
  CHECK(parse_state(serialize_state(init(gini(2, 1)))).empty());
  CHECK(parse_state(serialize_state(init(median_mean(MedianKind::upper)))).empty());
  const auto zero = absorb(init(cube_over_square()), 0.0);
  CHECK(!parse_state(serialize_state(zero)).empty());
}

TEST_CASE("random states of every family round-trip bit-exactly") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::vector<MeanDescriptor> ds = {
      power_mean(-2), power_mean(0.3), quasi_arithmetic("exp"), gini(3, 3), bajraktarevic("exp", "power:-1"),
      hamy(4), sympoly(3), biplanar(2, 3, 3, 3), biplanar(0, 2, 3, 1), median_mean(MedianKind::lower),
      piecewise_counterexample(), cube_over_square()};
  for (const auto& d : ds) {
    CAPTURE(d.label());
    const auto box = d.domain().intersect(DomainInterval::closed(0.5, 20.0));
    auto s = init(d);
    for (int i = 0; i < 25; ++i) {
      s.absorb_in_place(box.lo + (box.hi - box.lo) * u(rng));
      const auto back = parse_state(serialize_state(s));
      CHECK(same_bits(back, s));
      CHECK(finalize(back) == finalize(s));
    }
  }
}

TEST_CASE("overflow flag survives serialization") {
  const auto s = absorb(init(power_mean(3)), 1e300);
  const auto back = parse_state(serialize_state(s));
  CHECK(back.overflow());
  CHECK(json::parse(serialize_state(s))["reals"][0] == "inf");
}

TEST_CASE("malformed payloads raise ParseError with an offset") {
  const auto text = gini_state_text();
  const auto truncated = text.substr(0, text.size() / 2);
  CHECK(parse_offset(truncated) <= truncated.size());
  CHECK_THROWS_AS((void)parse_state(""), ParseError);
  CHECK_THROWS_AS((void)parse_state("[1,2]"), ParseError);

  auto doc = json::parse(text);
  auto mutate = [&](auto&& edit) {
    auto copy = doc;
    edit(copy);
    return copy.dump();
  };
  CHECK_THROWS_AS((void)parse_state(mutate([](json& j) { j["version"] = 2; })), ParseError);
  CHECK_THROWS_AS((void)parse_state(mutate([](json& j) { j["k"] = 3; })), ParseError);
  CHECK_THROWS_AS((void)parse_state(mutate([](json& j) { j["reals"][0] = "0x1.9p+4junk"; })), ParseError);
  CHECK_THROWS_AS((void)parse_state(mutate([](json& j) { j["reals"][0] = 25.0; })), ParseError);
  CHECK_THROWS_AS((void)parse_state(mutate([](json& j) { j["counter"] = 2; })), ParseError);
  CHECK_THROWS_AS((void)parse_state(mutate([](json& j) { j.erase("overflow"); })), ParseError);
  CHECK_THROWS_AS((void)parse_state(mutate([](json& j) { j["family"] = "nope"; })), ParseError);
  CHECK_THROWS_AS((void)parse_state(mutate([](json& j) { j["params"]["p"] = "x"; })), ParseError);

  const auto bad = mutate([](json& j) { j["reals"][1] = "abc"; });
  CHECK(parse_offset(bad) == bad.find("\"reals\""));

  const auto power = serialize_state(absorb(init(power_mean(1)), 2.0));
  auto pj = json::parse(power);
  pj["counter"] = 0;
  CHECK_THROWS_AS((void)parse_state(pj.dump()), ParseError);
  pj["counter"] = nullptr;
  CHECK_THROWS_AS((void)parse_state(pj.dump()), ParseError);

  auto median = json::parse(serialize_state(absorb(absorb(init(median_mean(MedianKind::lower)), 2.0), 1.0)));
  std::swap(median["reals"][0], median["reals"][1]);
  CHECK_THROWS_AS((void)parse_state(median.dump()), ParseError);
}

TEST_CASE("parsed states merge with live ones") {
  const auto d = std::make_shared<const MeanDescriptor>(hamy(3));
  auto a = init(d);
  for (double x : {1.0, 2.0, 3.0}) a.absorb_in_place(x);
  auto b = init(d);
  for (double x : {4.0, 5.0}) b.absorb_in_place(x);
  const auto merged = merge(parse_state(serialize_state(a)), b);
  CHECK(finalize(merged) == doctest::Approx(evaluate_stream(d, std::vector<double>{1, 2, 3, 4, 5})).epsilon(1e-12));
}
