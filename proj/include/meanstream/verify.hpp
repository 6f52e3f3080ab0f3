#pragma once

// Property-based checks for mean axioms. Every check treats the mean as a
// black box (MeanUnderTest), so harness self-tests can feed deliberately
// broken means through the same code path as real descriptors.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "meanstream/descriptor.hpp"
#include "meanstream/types.hpp"

namespace meanstream::verify {

inline constexpr std::uint64_t kDefaultSeed = 20190307;

/// Seeded 64-bit generator. Uniform draws are built from raw bits so a seed
/// reproduces the same vectors on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  double uniform(double lo, double hi);
  /// Uniform integer in [0, n).
  std::size_t below(std::size_t n);
  /// Independent child seed.
  std::uint64_t split();

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
};

struct MeanUnderTest {
  std::string name;
  DomainInterval domain;
  std::function<double(std::span<const double>)> eval;
};

/// Wraps evaluate_stream on a descriptor.
[[nodiscard]] MeanUnderTest from_descriptor(const MeanDescriptor& descriptor);

struct SamplerConfig {
  double lo = 0.5;
  double hi = 20.0;
  std::size_t min_len = 1;
  std::size_t max_len = 16;
};

/// Random vectors from domain ∩ [lo, hi].
class VectorSampler {
 public:
  VectorSampler(const DomainInterval& domain, SamplerConfig config, std::uint64_t seed);

  std::vector<double> draw();
  std::vector<double> draw(std::size_t n);
  double draw_value();

  [[nodiscard]] double lo() const noexcept { return lo_; }
  [[nodiscard]] double hi() const noexcept { return hi_; }
  [[nodiscard]] const SamplerConfig& config() const noexcept { return config_; }
  Rng& rng() noexcept { return rng_; }

 private:
  SamplerConfig config_;
  double lo_;
  double hi_;
  Rng rng_;
};

struct PropertyReport {
  std::string property;
  std::string mean;
  bool holds = true;
  /// Present whenever holds is false.
  std::vector<std::vector<double>> witness;
  double lhs = std::numeric_limits<double>::quiet_NaN();
  double rhs = std::numeric_limits<double>::quiet_NaN();
  double tolerance = 0.0;
  std::size_t trials = 0;
  std::string detail;

  [[nodiscard]] nlohmann::json to_json() const;
};

/// Relative difference |a - b| / max(|a|, |b|), 0 when a == b.
[[nodiscard]] double relative_difference(double a, double b) noexcept;

/// min(x) - 1e-9 <= M(x) <= max(x) + 1e-9 on every trial.
[[nodiscard]] PropertyReport check_mean_property(const MeanUnderTest& m, VectorSampler& sampler,
                                                 std::size_t trials);

/// 16-point grid over domain ∩ [0.5, 20].
[[nodiscard]] std::vector<double> reflexivity_grid(const DomainInterval& domain,
                                                   std::size_t points = 16);

/// M(v, .., v) == v within 1e-10 relative for repetition counts 1..max_repeat.
[[nodiscard]] PropertyReport check_reflexivity(const MeanUnderTest& m, std::span<const double> grid,
                                               std::size_t max_repeat = 8);

/// M(x) == M(shuffled x) within 1e-12 relative.
[[nodiscard]] PropertyReport check_symmetry(const MeanUnderTest& m, VectorSampler& sampler,
                                            std::size_t trials);

/// M(x) == M(x1 x m, .., xn x m) within 1e-9 relative for each multiplicity.
/// `seeds` are tried before the random trials.
[[nodiscard]] PropertyReport check_repetition_invariance(
    const MeanUnderTest& m, VectorSampler& sampler, std::size_t trials,
    std::span<const std::size_t> multiplicities,
    std::span<const std::vector<double>> seeds = {});

enum class CandidateStatus { accepted, rejected, out_of_domain };

struct CandidateOutcome {
  double candidate = 0.0;
  CandidateStatus status = CandidateStatus::rejected;
  std::vector<double> witness;  // the vector a for which M(e, a) != M(a)
  double with_candidate = std::numeric_limits<double>::quiet_NaN();
  double without_candidate = std::numeric_limits<double>::quiet_NaN();
};

struct NegligibleResult {
  std::optional<double> element;
  std::vector<CandidateOutcome> candidates;
  std::size_t trials = 0;

  [[nodiscard]] PropertyReport to_report(const std::string& mean) const;
};

/// For each candidate e inside the domain tests M(e, a) == M(a) (1e-9
/// relative) over random a; returns the first candidate that never fails.
[[nodiscard]] NegligibleResult detect_negligible_element(const MeanUnderTest& m,
                                                         std::span<const double> candidates,
                                                         VectorSampler& sampler,
                                                         std::size_t trials);

/// M(lambda x) == lambda M(x) within 1e-9 relative.
[[nodiscard]] PropertyReport check_homogeneity(const MeanUnderTest& m, VectorSampler& sampler,
                                               std::size_t trials,
                                               std::span<const double> lambdas);

/// For M(x) < M(y): M(x) < M(x, y) < M(y), with 1e-12 relative slack.
/// Pairs with tied means are skipped.
[[nodiscard]] PropertyReport check_concatenation_betweenness(const MeanUnderTest& m,
                                                             VectorSampler& sampler,
                                                             std::size_t trials);
[[nodiscard]] PropertyReport check_concatenation_betweenness(const MeanUnderTest& m,
                                                             std::span<const double> x,
                                                             std::span<const double> y);

/// |sum x^3| <= |sum x^2|^{3/2} on one vector.
struct G23Outcome {
  bool holds = true;
  double lhs = 0.0;
  double rhs = 0.0;
};
[[nodiscard]] G23Outcome g23_inequality(std::span<const double> xs) noexcept;

/// Random real vectors with n <= 32, entries in [-10, 10], some exact zeros.
[[nodiscard]] PropertyReport check_g23_inequality(std::size_t trials, std::uint64_t seed);

/// Direct, non-streaming evaluation of each family's closed-form definition.
/// Symmetric sums are enumerated over index subsets; beyond 12 elements those
/// families throw TooLarge.
[[nodiscard]] double oracle_direct(const MeanDescriptor& descriptor, std::span<const double> xs);

/// evaluate_stream vs oracle_direct within `tolerance` relative.
[[nodiscard]] PropertyReport check_oracle_equivalence(const MeanDescriptor& descriptor,
                                                      VectorSampler& sampler, std::size_t trials,
                                                      double tolerance = 1e-9);

/// The applicable checks for one descriptor, seeded from `seed`.
[[nodiscard]] std::vector<PropertyReport> run_suite(const MeanDescriptor& descriptor,
                                                    std::uint64_t seed);

}  // namespace meanstream::verify
