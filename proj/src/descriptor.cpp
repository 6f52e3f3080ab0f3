#include "meanstream/descriptor.hpp"

#include <algorithm>
#include <cmath>

#include "meanstream/error.hpp"
#include "meanstream/symfun.hpp"

namespace meanstream {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr int kMaxDegree = static_cast<int>(symfun::kMaxExponents);

[[noreturn]] void invalid(const std::string& message) {
  throw Error(ErrorCode::InvalidDescriptor, message);
}

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) invalid(std::string("parameter ") + name + " must be finite");
}

void require_degree(int r, const char* name) {
  if (r < 1 || r > kMaxDegree) {
    invalid(std::string("parameter ") + name + " must be in [1, " + std::to_string(kMaxDegree) +
            "]");
  }
}

void require_positive_domain(const DomainInterval& domain, std::string_view family) {
  if (!domain.subset_of(DomainInterval::positive())) {
    invalid(std::string(family) + " requires a domain inside (0, inf)");
  }
}

std::string format_int(int v) { return std::to_string(v); }

double binom(std::uint64_t n, int r) {
  return symfun::binomial(n, static_cast<std::uint64_t>(r)).value;
}

std::size_t slot_of(const std::vector<double>& set, double e) {
  return static_cast<std::size_t>(std::lower_bound(set.begin(), set.end(), e) - set.begin());
}

double median_of(std::span<const double> sorted, MedianKind kind) {
  const std::size_t n = sorted.size();
  const std::size_t idx = kind == MedianKind::lower ? (n - 1) / 2 : n / 2;
  return sorted[idx];
}

}  // namespace

std::string_view family_name(Family family) noexcept {
  switch (family) {
    case Family::Power: return "power";
    case Family::QuasiArithmetic: return "quasi_arithmetic";
    case Family::Gini: return "gini";
    case Family::Bajraktarevic: return "bajraktarevic";
    case Family::Hamy: return "hamy";
    case Family::SymPoly: return "sympoly";
    case Family::Biplanar: return "biplanar";
    case Family::Median: return "median";
    case Family::PiecewiseH: return "piecewise_h";
    case Family::CubeOverSquare: return "cube_over_square";
  }
  return "unknown";
}

std::optional<Family> family_from_name(std::string_view name) {
  std::string normalized(name);
  std::replace(normalized.begin(), normalized.end(), '-', '_');
  for (Family f : {Family::Power, Family::QuasiArithmetic, Family::Gini, Family::Bajraktarevic,
                   Family::Hamy, Family::SymPoly, Family::Biplanar, Family::Median,
                   Family::PiecewiseH, Family::CubeOverSquare}) {
    if (family_name(f) == normalized) return f;
  }
  return std::nullopt;
}

MeanDescriptor::MeanDescriptor(Family family, FamilyParams params, DomainInterval domain)
    : family_(family), params_(std::move(params)), domain_(domain) {
  if (!domain_.valid()) invalid("domain must satisfy lo < hi");

  auto expect = [&]<typename P>(std::type_identity<P>) -> P& {
    auto* p = std::get_if<P>(&params_);
    if (!p) invalid("parameter record does not match family " + std::string(family_name(family_)));
    return *p;
  };

  switch (family_) {
    case Family::Power: {
      const auto& p = expect(std::type_identity<PowerParams>{});
      require_finite(p.p, "p");
      require_positive_domain(domain_, "power");
      ctype_ = ComplexityType{1, true};
      dimension_ = 1;
      has_counter_ = true;
      label_ = "power(p=" + format_real(p.p) + ")";
      break;
    }
    case Family::QuasiArithmetic: {
      const auto& p = expect(std::type_identity<QuasiArithmeticParams>{});
      validate_generator(p.f);
      if (!domain_.subset_of(p.f.domain)) invalid("domain exceeds the generator's domain");
      ctype_ = ComplexityType{1, true};
      dimension_ = 1;
      has_counter_ = true;
      label_ = "quasi_arithmetic(f=" + p.f.name + ")";
      break;
    }
    case Family::Gini: {
      const auto& p = expect(std::type_identity<GiniParams>{});
      require_finite(p.p, "p");
      require_finite(p.q, "q");
      require_positive_domain(domain_, "gini");
      ctype_ = ComplexityType{2, false};
      dimension_ = 2;
      label_ = "gini(p=" + format_real(p.p) + ",q=" + format_real(p.q) + ")";
      break;
    }
    case Family::Bajraktarevic: {
      const auto& p = expect(std::type_identity<BajraktarevicParams>{});
      validate_pair(p.pair);
      if (!domain_.subset_of(p.pair.domain)) invalid("domain exceeds the pair's domain");
      ctype_ = ComplexityType{2, false};
      dimension_ = 2;
      label_ = "bajraktarevic(f=" + p.pair.f.name + ",g=" + p.pair.g.name + ")";
      break;
    }
    case Family::Hamy: {
      const auto& p = expect(std::type_identity<HamyParams>{});
      require_degree(p.r, "r");
      require_positive_domain(domain_, "hamy");
      ctype_ = ComplexityType{p.r, true};
      upper_bound_ = true;
      dimension_ = static_cast<std::size_t>(p.r);
      has_counter_ = true;
      label_ = "hamy(r=" + format_int(p.r) + ")";
      break;
    }
    case Family::SymPoly: {
      const auto& p = expect(std::type_identity<SymPolyParams>{});
      require_degree(p.r, "r");
      require_positive_domain(domain_, "sympoly");
      ctype_ = ComplexityType{p.r, true};
      upper_bound_ = true;
      dimension_ = static_cast<std::size_t>(p.r);
      has_counter_ = true;
      label_ = "sympoly(r=" + format_int(p.r) + ")";
      break;
    }
    case Family::Biplanar: {
      auto& p = expect(std::type_identity<BiplanarParams>{});
      require_finite(p.p, "p");
      require_finite(p.q, "q");
      require_degree(p.c, "c");
      require_degree(p.d, "d");
      require_positive_domain(domain_, "biplanar");
      if (static_cast<double>(p.c) * p.p == static_cast<double>(p.d) * p.q) {
        throw Error(ErrorCode::DegenerateExponents, "biplanar requires c*p != d*q");
      }
      p.exponent_set.clear();
      for (int i = 1; i <= p.c; ++i) p.exponent_set.push_back(symfun::exponent_multiple(p.p, i));
      for (int j = 1; j <= p.d; ++j) p.exponent_set.push_back(symfun::exponent_multiple(p.q, j));
      std::sort(p.exponent_set.begin(), p.exponent_set.end());
      p.exponent_set.erase(std::unique(p.exponent_set.begin(), p.exponent_set.end()),
                           p.exponent_set.end());
      p.k = static_cast<int>(p.exponent_set.size());
      p.log_slot = p.p == 0.0;
      ctype_ = ComplexityType{p.k, true};
      dimension_ = p.exponent_set.size() + (p.log_slot ? 1 : 0);
      has_counter_ = true;
      label_ = "biplanar(p=" + format_real(p.p) + ",q=" + format_real(p.q) +
               ",c=" + format_int(p.c) + ",d=" + format_int(p.d) + ")";
      break;
    }
    case Family::Median: {
      const auto& p = expect(std::type_identity<MedianParams>{});
      ctype_.reset();
      dimension_ = 0;
      label_ = std::string("median(kind=") + (p.kind == MedianKind::lower ? "lower" : "upper") + ")";
      break;
    }
    case Family::PiecewiseH: {
      (void)expect(std::type_identity<NoParams>{});
      if (!(domain_ == DomainInterval::closed(3.0, 4.0))) invalid("piecewise_h is fixed to [3, 4]");
      ctype_ = ComplexityType{2, false};
      dimension_ = 2;
      label_ = "piecewise_h()";
      break;
    }
    case Family::CubeOverSquare: {
      (void)expect(std::type_identity<NoParams>{});
      if (!(domain_ == DomainInterval::real_line())) invalid("cube_over_square is defined on R");
      ctype_ = ComplexityType{2, false};
      dimension_ = 2;
      label_ = "cube_over_square()";
      break;
    }
  }
  if (dimension_ > kMaxDimension) invalid("state dimension exceeds " + std::to_string(kMaxDimension));
  id_ = std::string(family_name(family_)) + params_json().dump();
}

nlohmann::json MeanDescriptor::params_json() const {
  using nlohmann::json;
  return std::visit(
      Overloaded{
          [](const PowerParams& p) { return json{{"p", p.p}}; },
          [](const QuasiArithmeticParams& p) { return json{{"f", p.f.name}}; },
          [](const GiniParams& p) { return json{{"p", p.p}, {"q", p.q}}; },
          [](const BajraktarevicParams& p) {
            return json{{"f", p.pair.f.name}, {"g", p.pair.g.name}};
          },
          [](const HamyParams& p) { return json{{"r", p.r}}; },
          [](const SymPolyParams& p) { return json{{"r", p.r}}; },
          [](const BiplanarParams& p) {
            return json{{"p", p.p}, {"q", p.q}, {"c", p.c}, {"d", p.d}};
          },
          [](const MedianParams& p) {
            return json{{"kind", p.kind == MedianKind::lower ? "lower" : "upper"}};
          },
          [](const NoParams&) { return json::object(); },
      },
      params_);
}

nlohmann::json MeanDescriptor::to_json() const {
  nlohmann::json out = params_json();
  out["family"] = std::string(family_name(family_));
  return out;
}

void MeanDescriptor::encode(double x, std::span<double> out) const {
  switch (family_) {
    case Family::Power: {
      const double p = std::get<PowerParams>(params_).p;
      out[0] = p == 0.0 ? std::log(x) : std::pow(x, p);
      return;
    }
    case Family::QuasiArithmetic:
      out[0] = std::get<QuasiArithmeticParams>(params_).f.forward(x);
      return;
    case Family::Gini: {
      const auto& g = std::get<GiniParams>(params_);
      const double xp = std::pow(x, g.p);
      if (g.p == g.q) {
        out[0] = xp * std::log(x);
        out[1] = xp;
      } else {
        out[0] = xp;
        out[1] = std::pow(x, g.q);
      }
      return;
    }
    case Family::Bajraktarevic: {
      const auto& pair = std::get<BajraktarevicParams>(params_).pair;
      out[0] = pair.f.eval(x);
      out[1] = pair.g.eval(x);
      return;
    }
    case Family::Hamy: {
      const int r = std::get<HamyParams>(params_).r;
      const double base = 1.0 / r;
      for (int j = 1; j <= r; ++j) out[j - 1] = std::pow(x, symfun::exponent_multiple(base, j));
      return;
    }
    case Family::SymPoly: {
      const int r = std::get<SymPolyParams>(params_).r;
      for (int j = 1; j <= r; ++j) out[j - 1] = std::pow(x, symfun::exponent_multiple(1.0, j));
      return;
    }
    case Family::Biplanar: {
      const auto& b = std::get<BiplanarParams>(params_);
      for (std::size_t i = 0; i < b.exponent_set.size(); ++i) {
        out[i] = std::pow(x, b.exponent_set[i]);
      }
      if (b.log_slot) out[b.exponent_set.size()] = std::log(x);
      return;
    }
    case Family::PiecewiseH:
      out[0] = x * x;
      out[1] = x;
      return;
    case Family::CubeOverSquare:
      out[0] = x * x * x;
      out[1] = x * x;
      return;
    case Family::Median:
      break;
  }
  throw Error(ErrorCode::InvalidDescriptor, "median has no fixed-dimension encoding");
}

double MeanDescriptor::decode(std::span<const double> reals, std::uint64_t count) const {
  const double n = static_cast<double>(count);
  switch (family_) {
    case Family::Power: {
      const double p = std::get<PowerParams>(params_).p;
      return p == 0.0 ? std::exp(reals[0] / n) : std::pow(reals[0] / n, 1.0 / p);
    }
    case Family::QuasiArithmetic:
      return std::get<QuasiArithmeticParams>(params_).f.inverse(reals[0] / n);
    case Family::Gini: {
      const auto& g = std::get<GiniParams>(params_);
      if (!(reals[1] != 0.0)) throw Error(ErrorCode::NumericalFailure, "zero denominator");
      const double ratio = reals[0] / reals[1];
      return g.p == g.q ? std::exp(ratio) : std::pow(ratio, 1.0 / (g.p - g.q));
    }
    case Family::Bajraktarevic: {
      if (!(reals[1] > 0.0)) throw Error(ErrorCode::NumericalFailure, "nonpositive g-sum");
      return std::get<BajraktarevicParams>(params_).pair.ratio_inverse(reals[0] / reals[1]);
    }
    case Family::Hamy: {
      const int r = std::get<HamyParams>(params_).r;
      if (count < static_cast<std::uint64_t>(r)) return reals[r - 1] / n;
      const double base = 1.0 / r;
      symfun::GammaTable table(count);
      for (int j = 1; j <= r; ++j) table.set(symfun::exponent_multiple(base, j), reals[j - 1]);
      return symfun::sigma_from_power(r, base, table) / binom(count, r);
    }
    case Family::SymPoly: {
      const int r = std::get<SymPolyParams>(params_).r;
      if (count < static_cast<std::uint64_t>(r)) return reals[0] / n;
      symfun::GammaTable table(count);
      for (int j = 1; j <= r; ++j) table.set(symfun::exponent_multiple(1.0, j), reals[j - 1]);
      return std::pow(symfun::sigma_from_power(r, 1.0, table) / binom(count, r), 1.0 / r);
    }
    case Family::Biplanar: {
      const auto& b = std::get<BiplanarParams>(params_);
      if (count < static_cast<std::uint64_t>(std::max(b.c, b.d))) {
        if (b.log_slot) return std::exp(reals[b.exponent_set.size()] / n);
        return std::pow(reals[slot_of(b.exponent_set, b.p)] / n, 1.0 / b.p);
      }
      symfun::GammaTable table(count);
      for (std::size_t i = 0; i < b.exponent_set.size(); ++i) {
        table.set(b.exponent_set[i], reals[i]);
      }
      const double num = binom(count, b.d) * symfun::sigma_from_power(b.c, b.p, table);
      const double den = binom(count, b.c) * symfun::sigma_from_power(b.d, b.q, table);
      if (!(den != 0.0)) throw Error(ErrorCode::NumericalFailure, "zero denominator");
      const double cp = static_cast<double>(b.c) * b.p;
      const double dq = static_cast<double>(b.d) * b.q;
      return std::pow(num / den, 1.0 / (cp - dq));
    }
    case Family::PiecewiseH: {
      const double r = reals[0];
      const double s = reals[1];
      if (s >= 3.0 && s <= 4.0) return s;
      if (s >= 6.0 && s <= 8.0) return s / 2.0;
      if (s >= 9.0) return r / s;
      throw Error(ErrorCode::FinalizeOutsideBranches,
                  "second component " + format_real(s) + " is outside [3,4] u [6,8] u [9,inf)");
    }
    case Family::CubeOverSquare: {
      if (reals[0] == 0.0 && reals[1] == 0.0) return 0.0;
      return reals[0] / reals[1];
    }
    case Family::Median: {
      if (reals.empty()) throw Error(ErrorCode::EmptyState, "median of an empty multiset");
      return median_of(reals, std::get<MedianParams>(params_).kind);
    }
  }
  throw Error(ErrorCode::InvalidDescriptor, "unknown family");
}

}  // namespace meanstream
