#include "meanstream/myhill.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "meanstream/core.hpp"
#include "meanstream/error.hpp"

namespace meanstream::myhill {
namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), components_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t i) {
    while (parent_[i] != i) {
      parent_[i] = parent_[parent_[i]];
      i = parent_[i];
    }
    return i;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) {
      parent_[std::max(a, b)] = std::min(a, b);
      --components_;
    }
  }

  [[nodiscard]] std::size_t components() const noexcept { return components_; }

 private:
  std::vector<std::size_t> parent_;
  std::size_t components_;
};

std::size_t count_components(const std::vector<std::vector<double>>& rows, const Tolerance& tol) {
  UnionFind uf(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = i + 1; j < rows.size(); ++j) {
      if (uf.find(i) == uf.find(j)) continue;
      bool same = true;
      for (std::size_t c = 0; c < rows[i].size() && same; ++c) {
        same = tol.close(rows[i][c], rows[j][c]);
      }
      if (same) uf.unite(i, j);
    }
  }
  return uf.components();
}

double binomial_count(std::size_t n, std::size_t r) {
  double c = 1.0;
  for (std::size_t i = 1; i <= r; ++i) c = c * static_cast<double>(n - r + i) / static_cast<double>(i);
  return c;
}

void check_alphabet(std::span<const double> alphabet, std::size_t max_len) {
  if (alphabet.empty() || alphabet.size() > kMaxAlphabet) {
    throw Error(ErrorCode::InvalidDescriptor,
                "alphabet must have 1.." + std::to_string(kMaxAlphabet) + " letters");
  }
  std::vector<double> sorted(alphabet.begin(), alphabet.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(ErrorCode::InvalidDescriptor, "alphabet letters must be distinct");
  }
  if (max_len < 1 || max_len > kMaxLength) {
    throw Error(ErrorCode::InvalidDescriptor,
                "max_len must be in 1.." + std::to_string(kMaxLength));
  }
}

void check_domain(std::span<const double> alphabet, const DomainInterval& domain) {
  for (double a : alphabet) {
    if (!domain.contains(a)) {
      throw Error(ErrorCode::DomainError,
                  "letter " + format_real(a) + " is outside " + domain.to_string());
    }
  }
}

double safe_eval(const verify::MeanUnderTest& m, std::span<const double> xs) {
  try {
    return m.eval(xs);
  } catch (const Error&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

}  // namespace

bool Tolerance::close(double a, double b) const noexcept {
  if (std::isnan(a) || std::isnan(b)) return std::isnan(a) && std::isnan(b);
  if (a == b) return true;
  return std::abs(a - b) <= atol + rtol * std::max(std::abs(a), std::abs(b));
}

std::string_view growth_name(Growth g) noexcept {
  return g == Growth::bounded_linear ? "bounded-linear" : "superlinear";
}

nlohmann::json ClassProfile::to_json() const {
  nlohmann::json lengths = nlohmann::json::array();
  for (std::size_t i = 0; i < counts.size(); ++i) lengths.push_back(i + 1);
  return {{"mean", mean},
          {"alphabet", alphabet},
          {"max_len", max_len},
          {"probe_count", probes.size()},
          {"lengths", lengths},
          {"counts", counts},
          {"value_tolerance", {{"atol", tolerance.atol}, {"rtol", tolerance.rtol}}},
          {"evaluations", evaluations}};
}

nlohmann::json GrowthReport::to_json() const {
  return {{"classification", std::string(growth_name(classification))},
          {"heuristic", true},
          {"slope", slope},
          {"intercept", intercept},
          {"fit_max_len", fit_max_len},
          {"predicted", predicted},
          {"observed", observed},
          {"fit", fit}};
}

std::vector<std::vector<double>> default_probes(std::span<const double> alphabet,
                                                std::size_t probe_len) {
  std::vector<std::vector<double>> out;
  std::vector<std::vector<double>> layer{{}};
  for (std::size_t len = 1; len <= probe_len; ++len) {
    std::vector<std::vector<double>> next;
    for (const auto& word : layer) {
      for (double a : alphabet) {
        auto w = word;
        w.push_back(a);
        next.push_back(std::move(w));
      }
    }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

std::vector<std::vector<double>> multisets(std::span<const double> alphabet, std::size_t n) {
  std::vector<double> letters(alphabet.begin(), alphabet.end());
  std::sort(letters.begin(), letters.end());
  std::vector<std::vector<double>> out;
  if (letters.empty()) return out;
  std::vector<std::size_t> idx(n, 0);
  while (true) {
    std::vector<double> word(n);
    for (std::size_t i = 0; i < n; ++i) word[i] = letters[idx[i]];
    out.push_back(std::move(word));
    std::size_t i = n;
    while (i > 0 && idx[i - 1] == letters.size() - 1) --i;
    if (i == 0) break;
    const std::size_t v = idx[i - 1] + 1;
    for (std::size_t j = i - 1; j < n; ++j) idx[j] = v;
  }
  return out;
}

ClassProfile enumerate_classes(const verify::MeanUnderTest& m, std::span<const double> alphabet,
                               std::size_t max_len, std::span<const std::vector<double>> probes,
                               Tolerance tol) {
  check_alphabet(alphabet, max_len);
  check_domain(alphabet, m.domain);
  for (const auto& p : probes) check_domain(p, m.domain);

  double planned = 0.0;
  for (std::size_t n = 1; n <= max_len; ++n) {
    planned += binomial_count(n + alphabet.size() - 1, n) * static_cast<double>(probes.size() + 1);
  }
  if (planned > static_cast<double>(kEvaluationBudget)) {
    throw Error(ErrorCode::BudgetExceeded,
                "enumeration needs " + format_real(planned) + " evaluations, budget is " +
                    std::to_string(kEvaluationBudget));
  }

  ClassProfile profile;
  profile.mean = m.name;
  profile.alphabet.assign(alphabet.begin(), alphabet.end());
  profile.max_len = max_len;
  profile.probes.assign(probes.begin(), probes.end());
  profile.tolerance = tol;

  std::vector<double> buffer;
  for (std::size_t n = 1; n <= max_len; ++n) {
    const auto words = multisets(alphabet, n);
    std::vector<std::vector<double>> signatures;
    signatures.reserve(words.size());
    for (const auto& w : words) {
      std::vector<double> sig;
      sig.reserve(probes.size() + 1);
      sig.push_back(safe_eval(m, w));
      for (const auto& p : probes) {
        buffer = w;
        buffer.insert(buffer.end(), p.begin(), p.end());
        sig.push_back(safe_eval(m, buffer));
      }
      profile.evaluations += sig.size();
      signatures.push_back(std::move(sig));
    }
    profile.counts.push_back(count_components(signatures, tol));
  }
  return profile;
}

std::vector<std::size_t> state_counts(const MeanDescriptor& descriptor,
                                      std::span<const double> alphabet, std::size_t max_len,
                                      Tolerance tol) {
  check_alphabet(alphabet, max_len);
  check_domain(alphabet, descriptor.domain());
  const auto shared = std::make_shared<const MeanDescriptor>(descriptor);
  std::vector<std::size_t> out;
  for (std::size_t n = 1; n <= max_len; ++n) {
    std::vector<std::vector<double>> states;
    for (const auto& w : multisets(alphabet, n)) {
      auto s = init(shared);
      for (double x : w) s.absorb_in_place(x);
      std::vector<double> row(s.reals().begin(), s.reals().end());
      if (s.counter()) row.push_back(static_cast<double>(*s.counter()));
      states.push_back(std::move(row));
    }
    out.push_back(count_components(states, tol));
  }
  return out;
}

GrowthReport growth_report(const ClassProfile& profile) {
  if (profile.max_len < 4 || profile.counts.size() < profile.max_len) {
    throw Error(ErrorCode::InsufficientData, "growth report needs max_len >= 4");
  }
  GrowthReport r;
  r.fit_max_len = std::max<std::size_t>(2, profile.max_len / 2);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const auto n = static_cast<double>(r.fit_max_len);
  for (std::size_t len = 1; len <= r.fit_max_len; ++len) {
    const auto x = static_cast<double>(len);
    const auto y = static_cast<double>(profile.counts[len - 1]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  r.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  r.intercept = (sy - r.slope * sx) / n;
  r.predicted = r.slope * static_cast<double>(profile.max_len) + r.intercept;
  r.observed = static_cast<double>(profile.counts[profile.max_len - 1]);
  r.classification =
      r.observed > 1.25 * r.predicted + 1.0 ? Growth::superlinear : Growth::bounded_linear;

  std::ostringstream fit;
  fit << "heuristic: least-squares line over lengths 1.." << r.fit_max_len << " (slope "
      << format_real(r.slope) << ", intercept " << format_real(r.intercept) << ") predicts "
      << format_real(r.predicted) << " classes at length " << profile.max_len << ", observed "
      << format_real(r.observed);
  r.fit = fit.str();
  return r;
}

}  // namespace meanstream::myhill
