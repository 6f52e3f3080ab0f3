#pragma once

#include <string_view>

#include <json.hpp>

#include "meanstream/descriptor.hpp"

namespace meanstream {

/// P_p on (0, inf). State (sum x^p, n), or (sum ln x, n) for p = 0.
[[nodiscard]] MeanDescriptor power_mean(double p);

/// f^{-1}(sum f(x_i) / n) on f's domain. State (sum f, n).
[[nodiscard]] MeanDescriptor quasi_arithmetic(GeneratorFunction f);
[[nodiscard]] MeanDescriptor quasi_arithmetic(std::string_view generator_name);

/// Gini mean on (0, inf). State (sum x^p, sum x^q), or
/// (sum x^p ln x, sum x^p) when p == q. No counter.
[[nodiscard]] MeanDescriptor gini(double p, double q);

/// (f/g)^{-1}(sum f / sum g). State (sum f, sum g). No counter.
[[nodiscard]] MeanDescriptor bajraktarevic(BajraktarevicPair pair);
[[nodiscard]] MeanDescriptor bajraktarevic(std::string_view f, std::string_view g);

/// Hamy mean: average of r-th roots of r-fold products over r-subsets.
/// State (gamma_{1/r}, gamma_{2/r}, .., gamma_{r/r}, n).
[[nodiscard]] MeanDescriptor hamy(int r);

/// Symmetric polynomial mean (e_r / C(n, r))^{1/r}. State (gamma_1..gamma_r, n).
[[nodiscard]] MeanDescriptor sympoly(int r);

/// Biplanar mean. State = gamma at each exponent of {p,..,cp} u {q,..,dq},
/// plus n. Throws DegenerateExponents when cp == dq.
[[nodiscard]] MeanDescriptor biplanar(double p, double q, int c, int d);

/// L_{F,H} on [3, 4] with F(x) = (x^2, x) and the three-branch H.
[[nodiscard]] MeanDescriptor piecewise_counterexample();

/// sum x^3 / sum x^2 on the real line, 0 at the all-zero state.
[[nodiscard]] MeanDescriptor cube_over_square();

/// Lower or upper median. The state is the full sorted multiset.
[[nodiscard]] MeanDescriptor median_mean(MedianKind kind);

/// Builds a descriptor from {"family": "gini", "p": 2, "q": 1} style JSON.
/// Throws InvalidDescriptor on unknown families or missing parameters.
[[nodiscard]] MeanDescriptor descriptor_from_json(const nlohmann::json& spec);

}  // namespace meanstream
