#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "meanstream/types.hpp"

namespace meanstream {

using RealFn = std::function<double(double)>;

enum class Monotonicity { increasing, decreasing };

/// A named real map from the registry. Names are canonical: numeric
/// arguments are re-rendered in shortest round-trip form, so "power:2.0"
/// and "power:2" resolve to the same map.
///
/// Registry: identity, ln, exp, power:<p>, affine:<a>,<b>, one, xlog:<p>.
/// `one` (constant 1) and `xlog:<p>` (x^p ln x) have no inverse and can only
/// be used as Bajraktarevic components.
struct RealMap {
  std::string name;
  RealFn eval;
  RealFn inverse;  // empty when the map is not invertible in closed form
  DomainInterval domain;
};

[[nodiscard]] RealMap named_map(std::string_view name);

/// Strictly monotone continuous bijection with its inverse.
struct GeneratorFunction {
  std::string name;
  RealFn forward;
  RealFn inverse;
  DomainInterval domain;
  Monotonicity monotonicity = Monotonicity::increasing;
};

/// Resolves a registry name and validates it (throws GeneratorInvalid).
[[nodiscard]] GeneratorFunction make_generator(std::string_view name);

/// Grid check: inverse(forward(x)) == x within 1e-10 relative and strict
/// monotonicity in the declared direction on 64 points. Throws GeneratorInvalid.
void validate_generator(const GeneratorFunction& f);

/// Finite sample grid over an interval. Unbounded sides are truncated
/// (geometric spacing up to 100 on (0, inf), [-20, 20] on the real line).
[[nodiscard]] std::vector<double> domain_grid(const DomainInterval& domain,
                                              std::size_t points = 64);

struct BajraktarevicPair {
  RealMap f;
  RealMap g;
  RealFn ratio_inverse;  // inverse of f/g
  DomainInterval domain;
  bool closed_form_inverse = false;
};

/// Builds the pair (f, g). The inverse of f/g is closed form for the
/// recognised shapes (g = one with invertible f, power/power, xlog/power)
/// and a bracketed bisection otherwise. Throws PairInvalid.
[[nodiscard]] BajraktarevicPair make_bajraktarevic_pair(std::string_view f, std::string_view g);

/// g > 0, f/g strictly monotone, ratio_inverse round-trips within 1e-10
/// relative, all on the 64-point grid. Throws PairInvalid.
void validate_pair(const BajraktarevicPair& pair);

/// Solves h(x) = target for strictly monotone h on `domain` by bracketing and
/// bisection (relative tolerance 1e-12 on x, at most 200 iterations).
[[nodiscard]] double bisect_inverse(const RealFn& h, const DomainInterval& domain, double target);

/// Shortest round-trip decimal rendering of a double.
[[nodiscard]] std::string format_real(double x);

}  // namespace meanstream
