#include "meanstream/generator.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <optional>

#include "meanstream/error.hpp"

namespace meanstream {
namespace {

constexpr double kRoundTripTolerance = 1e-10;
constexpr double kBisectionTolerance = 1e-12;
constexpr int kBisectionIterations = 200;

enum class MapKind { Identity, Ln, Exp, Power, Affine, One, XLog };

struct MapSpec {
  MapKind kind = MapKind::Identity;
  double a = 0.0;
  double b = 0.0;
  std::string canonical;
};

std::optional<double> parse_number(std::string_view text) {
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || !std::isfinite(value)) return std::nullopt;
  return value;
}

[[noreturn]] void unknown_map(std::string_view name) {
  throw Error(ErrorCode::InvalidDescriptor, "unknown function name '" + std::string(name) + "'");
}

MapSpec parse_map_spec(std::string_view name) {
  const auto colon = name.find(':');
  const auto head = name.substr(0, colon);
  const auto args = colon == std::string_view::npos ? std::string_view{} : name.substr(colon + 1);
  MapSpec spec;
  if (colon == std::string_view::npos) {
    if (head == "identity") spec.kind = MapKind::Identity;
    else if (head == "ln") spec.kind = MapKind::Ln;
    else if (head == "exp") spec.kind = MapKind::Exp;
    else if (head == "one") spec.kind = MapKind::One;
    else unknown_map(name);
    spec.canonical = std::string(head);
    return spec;
  }
  if (head == "power" || head == "xlog") {
    const auto p = parse_number(args);
    if (!p) unknown_map(name);
    spec.kind = head == "power" ? MapKind::Power : MapKind::XLog;
    spec.a = *p;
    spec.canonical = std::string(head) + ":" + format_real(*p);
    return spec;
  }
  if (head == "affine") {
    const auto comma = args.find(',');
    if (comma == std::string_view::npos) unknown_map(name);
    const auto a = parse_number(args.substr(0, comma));
    const auto b = parse_number(args.substr(comma + 1));
    if (!a || !b) unknown_map(name);
    spec.kind = MapKind::Affine;
    spec.a = *a;
    spec.b = *b;
    spec.canonical = "affine:" + format_real(*a) + "," + format_real(*b);
    return spec;
  }
  unknown_map(name);
}

RealMap build_map(const MapSpec& spec) {
  RealMap m;
  m.name = spec.canonical;
  const double a = spec.a;
  const double b = spec.b;
  switch (spec.kind) {
    case MapKind::Identity:
      m.eval = [](double x) { return x; };
      m.inverse = [](double y) { return y; };
      m.domain = DomainInterval::real_line();
      break;
    case MapKind::Ln:
      m.eval = [](double x) { return std::log(x); };
      m.inverse = [](double y) { return std::exp(y); };
      m.domain = DomainInterval::positive();
      break;
    case MapKind::Exp:
      m.eval = [](double x) { return std::exp(x); };
      m.inverse = [](double y) { return std::log(y); };
      m.domain = DomainInterval::real_line();
      break;
    case MapKind::Power:
      m.eval = [a](double x) { return std::pow(x, a); };
      if (a != 0.0) m.inverse = [a](double y) { return std::pow(y, 1.0 / a); };
      m.domain = DomainInterval::positive();
      break;
    case MapKind::Affine:
      m.eval = [a, b](double x) { return a * x + b; };
      if (a != 0.0) m.inverse = [a, b](double y) { return (y - b) / a; };
      m.domain = DomainInterval::real_line();
      break;
    case MapKind::One:
      m.eval = [](double) { return 1.0; };
      m.domain = DomainInterval::real_line();
      break;
    case MapKind::XLog:
      m.eval = [a](double x) { return std::pow(x, a) * std::log(x); };
      m.domain = DomainInterval::positive();
      break;
  }
  return m;
}

bool rel_close(double a, double b, double tol) noexcept {
  return a == b || std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

// Power exponent of the map when it is x^a (identity counts as a = 1).
std::optional<double> power_exponent(const MapSpec& s) {
  if (s.kind == MapKind::Power) return s.a;
  if (s.kind == MapKind::Identity) return 1.0;
  return std::nullopt;
}

// Returns +1 / -1 for strictly increasing / decreasing samples, 0 otherwise.
int monotone_direction(const std::vector<double>& values) {
  if (values.size() < 2) return 0;
  const int dir = values[1] > values[0] ? 1 : (values[1] < values[0] ? -1 : 0);
  if (dir == 0) return 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (!std::isfinite(values[i]) || !std::isfinite(values[i - 1])) return 0;
    if (dir > 0 ? !(values[i] > values[i - 1]) : !(values[i] < values[i - 1])) return 0;
  }
  return dir;
}

}  // namespace

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), ec == std::errc{} ? ptr : buf.data());
}

RealMap named_map(std::string_view name) { return build_map(parse_map_spec(name)); }

std::vector<double> domain_grid(const DomainInterval& domain, std::size_t points) {
  std::vector<double> grid;
  if (points == 0 || !domain.valid()) return grid;
  grid.reserve(points);
  const bool lo_finite = std::isfinite(domain.lo);
  const bool hi_finite = std::isfinite(domain.hi);

  if (lo_finite && !hi_finite && domain.lo >= 0.0) {
    // Geometric spacing for positive half-lines.
    double a = domain.lo > 0.0 ? domain.lo : 1e-3;
    if (!domain.lo_closed && domain.lo > 0.0) a *= 1.0 + 1e-9;
    const double b = 1e2 * std::max(1.0, a);
    if (points == 1) return {a};
    const double ratio = std::pow(b / a, 1.0 / static_cast<double>(points - 1));
    double x = a;
    for (std::size_t i = 0; i < points; ++i, x *= ratio) grid.push_back(x);
    return grid;
  }

  double a = lo_finite ? domain.lo : (hi_finite ? domain.hi - 40.0 : -20.0);
  double b = hi_finite ? domain.hi : (lo_finite ? domain.lo + 40.0 : 20.0);
  const double inset = (b - a) * 1e-9;
  if (lo_finite && !domain.lo_closed) a += inset;
  if (hi_finite && !domain.hi_closed) b -= inset;
  if (points == 1) return {0.5 * (a + b)};
  for (std::size_t i = 0; i < points; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(points - 1);
    grid.push_back(i + 1 == points ? b : a + (b - a) * t);
  }
  return grid;
}

void validate_generator(const GeneratorFunction& f) {
  if (!f.forward || !f.inverse) {
    throw Error(ErrorCode::GeneratorInvalid, "'" + f.name + "' has no inverse");
  }
  if (!f.domain.valid()) throw Error(ErrorCode::GeneratorInvalid, "empty domain");
  const auto grid = domain_grid(f.domain);
  std::vector<double> values;
  values.reserve(grid.size());
  for (double x : grid) {
    const double y = f.forward(x);
    if (!std::isfinite(y)) {
      throw Error(ErrorCode::GeneratorInvalid,
                  "'" + f.name + "' is not finite at " + format_real(x));
    }
    if (!rel_close(f.inverse(y), x, kRoundTripTolerance)) {
      throw Error(ErrorCode::GeneratorInvalid,
                  "'" + f.name + "' inverse does not round-trip at " + format_real(x));
    }
    values.push_back(y);
  }
  const int dir = monotone_direction(values);
  const int declared = f.monotonicity == Monotonicity::increasing ? 1 : -1;
  if (dir != declared) {
    throw Error(ErrorCode::GeneratorInvalid,
                "'" + f.name + "' is not strictly monotone in the declared direction");
  }
}

GeneratorFunction make_generator(std::string_view name) {
  const RealMap m = named_map(name);
  GeneratorFunction f{m.name, m.eval, m.inverse, m.domain, Monotonicity::increasing};
  if (!f.inverse) {
    throw Error(ErrorCode::GeneratorInvalid, "'" + f.name + "' has no inverse");
  }
  const auto grid = domain_grid(f.domain, 2);
  if (f.forward(grid.back()) < f.forward(grid.front())) {
    f.monotonicity = Monotonicity::decreasing;
  }
  validate_generator(f);
  return f;
}

double bisect_inverse(const RealFn& h, const DomainInterval& domain, double target) {
  if (!std::isfinite(target)) {
    throw Error(ErrorCode::NumericalFailure, "bisection target is not finite");
  }
  const auto seed = domain_grid(domain, 2);
  double a = seed.front();
  double b = seed.back();
  double ha = h(a);
  double hb = h(b);
  const double dir = hb > ha ? 1.0 : -1.0;

  // Widen toward the domain boundary until the target is bracketed.
  auto step_lo = [&](double x) {
    if (std::isfinite(domain.lo)) return domain.lo + 0.5 * (x - domain.lo);
    return x - 2.0 * std::max(1.0, std::abs(x));
  };
  auto step_hi = [&](double x) {
    if (std::isfinite(domain.hi)) return domain.hi - 0.5 * (domain.hi - x);
    return x + 2.0 * std::max(1.0, std::abs(x));
  };
  for (int i = 0; i < kBisectionIterations && dir * (target - ha) < 0.0; ++i) {
    a = step_lo(a);
    ha = h(a);
  }
  for (int i = 0; i < kBisectionIterations && dir * (target - hb) > 0.0; ++i) {
    b = step_hi(b);
    hb = h(b);
  }
  if (dir * (target - ha) < 0.0 || dir * (target - hb) > 0.0 || !std::isfinite(ha) ||
      !std::isfinite(hb)) {
    throw Error(ErrorCode::NumericalFailure,
                "cannot bracket " + format_real(target) + " on " + domain.to_string());
  }

  for (int i = 0; i < kBisectionIterations; ++i) {
    const double m = 0.5 * (a + b);
    if (m == a || m == b || (b - a) <= kBisectionTolerance * std::abs(m)) break;
    const double hm = h(m);
    if (hm == target) return m;
    if (dir * (hm - target) < 0.0) {
      a = m;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

BajraktarevicPair make_bajraktarevic_pair(std::string_view f_name, std::string_view g_name) {
  const MapSpec fs = parse_map_spec(f_name);
  const MapSpec gs = parse_map_spec(g_name);
  BajraktarevicPair pair;
  pair.f = build_map(fs);
  pair.g = build_map(gs);
  pair.domain = pair.f.domain.intersect(pair.g.domain);

  const auto fp = power_exponent(fs);
  const auto gp = power_exponent(gs);
  if (gs.kind == MapKind::One && pair.f.inverse) {
    pair.ratio_inverse = pair.f.inverse;
    pair.closed_form_inverse = true;
  } else if (fp && gp && *fp != *gp) {
    const double e = 1.0 / (*fp - *gp);
    pair.ratio_inverse = [e](double y) { return std::pow(y, e); };
    pair.closed_form_inverse = true;
  } else if (fs.kind == MapKind::XLog && gp && fs.a == *gp) {
    pair.ratio_inverse = [](double y) { return std::exp(y); };
    pair.closed_form_inverse = true;
  } else {
    const RealFn f = pair.f.eval;
    const RealFn g = pair.g.eval;
    const DomainInterval dom = pair.domain;
    pair.ratio_inverse = [f, g, dom](double y) {
      return bisect_inverse([&](double x) { return f(x) / g(x); }, dom, y);
    };
  }
  validate_pair(pair);
  return pair;
}

void validate_pair(const BajraktarevicPair& pair) {
  const std::string label = "(" + pair.f.name + ", " + pair.g.name + ")";
  if (!pair.domain.valid()) throw Error(ErrorCode::PairInvalid, label + " has an empty domain");
  if (!pair.ratio_inverse) throw Error(ErrorCode::PairInvalid, label + " has no ratio inverse");
  const auto grid = domain_grid(pair.domain);
  std::vector<double> ratios;
  ratios.reserve(grid.size());
  for (double x : grid) {
    const double g = pair.g.eval(x);
    if (!(g > 0.0) || !std::isfinite(g)) {
      throw Error(ErrorCode::PairInvalid, label + ": g is not positive at " + format_real(x));
    }
    ratios.push_back(pair.f.eval(x) / g);
  }
  if (monotone_direction(ratios) == 0) {
    throw Error(ErrorCode::PairInvalid, label + ": f/g is not strictly monotone");
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double back = std::numeric_limits<double>::quiet_NaN();
    try {
      back = pair.ratio_inverse(ratios[i]);
    } catch (const Error&) {
    }
    if (!rel_close(back, grid[i], kRoundTripTolerance)) {
      throw Error(ErrorCode::PairInvalid,
                  label + ": ratio inverse does not round-trip at " + format_real(grid[i]));
    }
  }
}

}  // namespace meanstream
