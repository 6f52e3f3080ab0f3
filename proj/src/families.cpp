#include "meanstream/families.hpp"

#include <cmath>

#include "meanstream/error.hpp"

namespace meanstream {
namespace {

[[noreturn]] void invalid(const std::string& message) {
  throw Error(ErrorCode::InvalidDescriptor, message);
}

double number_param(const nlohmann::json& spec, const char* key) {
  const auto it = spec.find(key);
  if (it == spec.end()) invalid(std::string("missing parameter '") + key + "'");
  if (it->is_number()) return it->get<double>();
  if (it->is_string()) {
    const auto& text = it->get_ref<const std::string&>();
    std::size_t used = 0;
    try {
      const double v = std::stod(text, &used);
      if (used == text.size()) return v;
    } catch (const std::exception&) {
    }
  }
  invalid(std::string("parameter '") + key + "' must be a number");
}

int int_param(const nlohmann::json& spec, const char* key) {
  const double v = number_param(spec, key);
  if (std::trunc(v) != v || std::abs(v) > 1e9) {
    invalid(std::string("parameter '") + key + "' must be an integer");
  }
  return static_cast<int>(v);
}

std::string string_param(const nlohmann::json& spec, const char* key, const char* fallback) {
  const auto it = spec.find(key);
  if (it == spec.end()) {
    if (fallback) return fallback;
    invalid(std::string("missing parameter '") + key + "'");
  }
  if (!it->is_string()) invalid(std::string("parameter '") + key + "' must be a string");
  return it->get<std::string>();
}

}  // namespace

MeanDescriptor power_mean(double p) {
  return {Family::Power, PowerParams{p}, DomainInterval::positive()};
}

MeanDescriptor quasi_arithmetic(GeneratorFunction f) {
  const DomainInterval domain = f.domain;
  return {Family::QuasiArithmetic, QuasiArithmeticParams{std::move(f)}, domain};
}

MeanDescriptor quasi_arithmetic(std::string_view generator_name) {
  return quasi_arithmetic(make_generator(generator_name));
}

MeanDescriptor gini(double p, double q) {
  return {Family::Gini, GiniParams{p, q}, DomainInterval::positive()};
}

MeanDescriptor bajraktarevic(BajraktarevicPair pair) {
  const DomainInterval domain = pair.domain;
  return {Family::Bajraktarevic, BajraktarevicParams{std::move(pair)}, domain};
}

MeanDescriptor bajraktarevic(std::string_view f, std::string_view g) {
  return bajraktarevic(make_bajraktarevic_pair(f, g));
}

MeanDescriptor hamy(int r) { return {Family::Hamy, HamyParams{r}, DomainInterval::positive()}; }

MeanDescriptor sympoly(int r) {
  return {Family::SymPoly, SymPolyParams{r}, DomainInterval::positive()};
}

MeanDescriptor biplanar(double p, double q, int c, int d) {
  BiplanarParams params;
  params.p = p;
  params.q = q;
  params.c = c;
  params.d = d;
  return {Family::Biplanar, std::move(params), DomainInterval::positive()};
}

MeanDescriptor piecewise_counterexample() {
  return {Family::PiecewiseH, NoParams{}, DomainInterval::closed(3.0, 4.0)};
}

MeanDescriptor cube_over_square() {
  return {Family::CubeOverSquare, NoParams{}, DomainInterval::real_line()};
}

MeanDescriptor median_mean(MedianKind kind) {
  return {Family::Median, MedianParams{kind}, DomainInterval::real_line()};
}

MeanDescriptor descriptor_from_json(const nlohmann::json& spec) {
  if (!spec.is_object()) invalid("family spec must be a JSON object");
  const auto name = string_param(spec, "family", nullptr);
  const auto family = family_from_name(name);
  if (!family) invalid("unknown family '" + name + "'");
  switch (*family) {
    case Family::Power: return power_mean(number_param(spec, "p"));
    case Family::QuasiArithmetic: return quasi_arithmetic(string_param(spec, "f", nullptr));
    case Family::Gini: return gini(number_param(spec, "p"), number_param(spec, "q"));
    case Family::Bajraktarevic:
      return bajraktarevic(string_param(spec, "f", nullptr), string_param(spec, "g", nullptr));
    case Family::Hamy: return hamy(int_param(spec, "r"));
    case Family::SymPoly: return sympoly(int_param(spec, "r"));
    case Family::Biplanar:
      return biplanar(number_param(spec, "p"), number_param(spec, "q"), int_param(spec, "c"),
                      int_param(spec, "d"));
    case Family::Median: {
      const auto kind = string_param(spec, "kind", "lower");
      if (kind != "lower" && kind != "upper") invalid("median kind must be lower or upper");
      return median_mean(kind == "lower" ? MedianKind::lower : MedianKind::upper);
    }
    case Family::PiecewiseH: return piecewise_counterexample();
    case Family::CubeOverSquare: return cube_over_square();
  }
  invalid("unknown family '" + name + "'");
}

}  // namespace meanstream
