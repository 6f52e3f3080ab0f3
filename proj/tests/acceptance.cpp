// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "golden_families.hpp"
#include "meanstream/core.hpp"
#include "meanstream/error.hpp"
#include "meanstream/families.hpp"
#include "meanstream/myhill.hpp"
#include "meanstream/symfun.hpp"
#include "meanstream/verify.hpp"
#include "oracle.hpp"

using namespace meanstream;
using V = std::vector<double>;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes.push_back("failed: " + what);
    }
  }
  void info(const std::string& what) { notes.push_back(what); }
};

bool rel_close(double a, double b, double tol) {
  return a == b || std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

std::vector<MeanDescriptor> every_family() {
  return {power_mean(-2), power_mean(0), power_mean(1), power_mean(3),
          quasi_arithmetic("identity"), quasi_arithmetic("ln"), quasi_arithmetic("exp"),
          quasi_arithmetic("power:2"), quasi_arithmetic("affine:2,1"),
          gini(2, 1), gini(3, 3), gini(2, 0),
          bajraktarevic("power:2", "power:1"), bajraktarevic("exp", "power:-1"),
          hamy(1), hamy(2), hamy(3), hamy(4),
          sympoly(1), sympoly(2), sympoly(3), sympoly(4),
          biplanar(2, 3, 3, 3), biplanar(2, 1, 1, 1), biplanar(-1, 0.5, 1, 1),
          median_mean(MedianKind::lower), median_mean(MedianKind::upper),
          piecewise_counterexample(), cube_over_square()};
}

Outcome criterion1() {
  Outcome o;
  const auto h = piecewise_counterexample();
  const double two = evaluate_stream(h, V{3, 4});
  const double four = evaluate_stream(h, V{3, 3, 4, 4});
  o.require(std::abs(two - 3.5) <= 1e-12, "L(3,4) = 3.5, got " + format_real(two));
  o.require(std::abs(four - 25.0 / 7) <= 1e-12, "L(3,3,4,4) = 25/7, got " + format_real(four));
  verify::VectorSampler s(h.domain(), {}, verify::kDefaultSeed);
  const std::size_t two_fold[] = {2};
  const std::vector<V> seeds = {{3, 4}};
  const auto r = verify::check_repetition_invariance(verify::from_descriptor(h), s, 0, two_fold, seeds);
  o.require(!r.holds, "repetition invariance flagged");
  o.require(!r.witness.empty() && r.witness[0] == V{3, 4}, "witness (3,4)");
  o.info("3.5 vs " + format_real(r.rhs));
  return o;
}

Outcome criterion2() {
  Outcome o;
  const double candidates[] = {0.0, 1.0, -1.0, 0.5, 2.0, 10.0};
  verify::VectorSampler real(DomainInterval::real_line(), {}, verify::kDefaultSeed);
  const auto cube =
      verify::detect_negligible_element(verify::from_descriptor(cube_over_square()), candidates, real, 200);
  o.require(cube.element && *cube.element == 0.0, "cube over square has negligible element 0");
  const auto baj_d = bajraktarevic("power:2", "power:1");
  verify::VectorSampler pos(baj_d.domain(), {}, verify::kDefaultSeed + 1);
  const auto baj = verify::detect_negligible_element(verify::from_descriptor(baj_d), candidates, pos, 200);
  o.require(!baj.element, "bajraktarevic (x^2, x) has none");
  return o;
}

Outcome criterion3() {
  Outcome o;
  std::vector<MeanDescriptor> ds = {power_mean(-2), power_mean(0), power_mean(1), power_mean(3)};
  for (const char* f : {"identity", "ln", "exp", "power:2", "power:-1", "power:0.5", "affine:2,1", "affine:-1,3"}) {
    ds.push_back(quasi_arithmetic(f));
  }
  for (auto [p, q] : {std::pair{2.0, 1.0}, {3.0, 3.0}, {2.0, 0.0}}) ds.push_back(gini(p, q));
  ds.push_back(bajraktarevic("power:2", "power:1"));
  ds.push_back(bajraktarevic("exp", "power:-1"));
  for (int r = 1; r <= 4; ++r) {
    ds.push_back(hamy(r));
    ds.push_back(sympoly(r));
  }
  ds.push_back(biplanar(2, 3, 3, 3));
  ds.push_back(biplanar(2, 1, 1, 1));
  ds.push_back(biplanar(-1, 0.5, 1, 1));
  verify::SamplerConfig cfg;
  cfg.max_len = 12;
  verify::Rng seeds(verify::kDefaultSeed);
  double worst = 0;
  std::string worst_label;
  for (const auto& d : ds) {
    verify::VectorSampler s(d.domain(), cfg, seeds.split());
    const auto r = verify::check_oracle_equivalence(d, s, 300, 1e-9);
    o.require(r.holds, d.label() + " " + r.detail);
    const auto pos = r.detail.rfind(' ');
    const double err = pos == std::string::npos ? 0 : std::strtod(r.detail.c_str() + pos + 1, nullptr);
    if (err >= worst) {
      worst = err;
      worst_label = d.label();
    }
  }
  o.info(std::to_string(ds.size()) + " descriptors, max relative error " + format_real(worst) + " (" +
         worst_label + ")");
  return o;
}

Outcome criterion4() {
  Outcome o;
  verify::Rng seeds(verify::kDefaultSeed);
  for (const auto& d : every_family()) {
    const auto m = verify::from_descriptor(d);
    verify::VectorSampler s(d.domain(), {}, seeds.split());
    const auto mean = verify::check_mean_property(m, s, 500);
    if (d.family() == Family::Biplanar) {
      if (!mean.holds) o.info("reported: mean property violated for " + d.label());
    } else {
      o.require(mean.holds, "mean property " + d.label());
    }
    o.require(verify::check_reflexivity(m, verify::reflexivity_grid(d.domain())).holds, "reflexivity " + d.label());
    const auto sym = verify::check_symmetry(m, s, 100);
    o.require(sym.holds, "symmetry " + d.label() + (sym.holds ? "" : ": " + format_real(sym.lhs) + " vs " +
                                                                          format_real(sym.rhs) + " (relative " +
                                                                          format_real(verify::relative_difference(
                                                                              sym.lhs, sym.rhs)) + ")"));

    const std::size_t mults[] = {2, 3};
    const bool invariant_family = d.family() == Family::Power || d.family() == Family::QuasiArithmetic ||
                                  d.family() == Family::Gini || d.family() == Family::Bajraktarevic;
    if (invariant_family) {
      o.require(verify::check_repetition_invariance(m, s, 100, mults).holds, "repetition invariance " + d.label());
    }
  }
  const std::size_t two[] = {2};
  const auto h2 = hamy(2);
  verify::VectorSampler hs(h2.domain(), {}, seeds.split());
  const std::vector<V> hamy_seed = {{4, 9}};
  const auto ha = verify::check_repetition_invariance(verify::from_descriptor(h2), hs, 0, two, hamy_seed);
  o.require(!ha.holds && ha.witness.size() == 2 && ha.witness[1] == V{4, 4, 9, 9},
            "hamy(2) flagged with witness (4,9) vs (4,4,9,9)");
  o.require(rel_close(ha.lhs, 6.0, 1e-12) && rel_close(ha.rhs, 37.0 / 6, 1e-12), "hamy(2) values 6 vs 37/6");
  const auto ph = piecewise_counterexample();
  verify::VectorSampler ps(ph.domain(), {}, seeds.split());
  const std::size_t mults[] = {2, 3};
  o.require(!verify::check_repetition_invariance(verify::from_descriptor(ph), ps, 100, mults).holds,
            "piecewise flagged");
  return o;
}

Outcome criterion5() {
  Outcome o;
  verify::SamplerConfig cfg;
  cfg.max_len = 12;
  verify::VectorSampler s(DomainInterval::positive(), cfg, verify::kDefaultSeed);
  for (int t = 0; t < 100; ++t) {
    const auto xs = s.draw();
    for (int r = 1; r <= 4 && xs.size() >= static_cast<std::size_t>(r); ++r) {
      V powered(xs);
      for (double& x : powered) x = std::pow(x, r);
      const double lhs = std::pow(evaluate_stream(hamy(r), powered), 1.0 / r);
      if (!rel_close(lhs, evaluate_stream(sympoly(r), xs), 1e-10)) {
        o.require(false, "conjugation identity r=" + std::to_string(r));
        return o;
      }
    }
    for (double p : {-2.0, 0.5, 1.0, 3.0}) {
      if (!rel_close(evaluate_stream(gini(p, 0), xs), evaluate_stream(power_mean(p), xs), 1e-10)) {
        o.require(false, "gini(p,0) = power(p) at p=" + format_real(p));
        return o;
      }
    }
    for (auto [p, q] : {std::pair{2.0, 1.0}, {3.0, -1.0}, {0.5, 2.5}}) {
      const double g = evaluate_stream(gini(p, q), xs);
      if (!rel_close(g, evaluate_stream(gini(q, p), xs), 1e-10)) {
        o.require(false, "gini symmetry");
        return o;
      }
      if (!rel_close(g, evaluate_stream(biplanar(p, q, 1, 1), xs), 1e-10)) {
        o.require(false, "biplanar(p,q,1,1) = gini(p,q)");
        return o;
      }
    }
  }
  return o;
}

Outcome criterion6() {
  Outcome o;
  using namespace symfun;
  std::size_t checked = 0;
  for (std::size_t n = 1; n <= 8; ++n) {
    // Every vector up to order: both sides are symmetric in the inputs.
    std::vector<std::int64_t> xi(n, 1);
    while (true) {
      const V xs(xi.begin(), xi.end());
      for (std::size_t s = 1; s <= 4; ++s) {
        std::vector<int> ps(s, 1);
        while (true) {
          const ExponentMultiset ms(V(ps.begin(), ps.end()));
          GammaStats stats;
          const double got = gamma_multi(ms, power_sums(xs, exponent_closure(ms)), &stats);
          const auto want = oracle::gamma_int(xi, ps);
          ++checked;
          if (got != static_cast<double>(want) || !stats.exact_integer) {
            o.require(false, "gamma mismatch at n=" + std::to_string(n));
            return o;
          }
          std::size_t i = s;
          while (i > 0 && ps[i - 1] == 3) --i;
          if (i == 0) break;
          const int v = ps[i - 1] + 1;
          for (std::size_t j = i - 1; j < s; ++j) ps[j] = v;
        }
        V exps;
        for (std::size_t j = 1; j <= s; ++j) exps.push_back(static_cast<double>(j));
        const int si = static_cast<int>(s);
        const double sigma = sigma_from_power(si, 1, power_sums(xs, exps));
        const auto e = oracle::gamma_int(xi, std::vector<int>(s, 1)) / static_cast<std::int64_t>(factorial(si));
        if (sigma != static_cast<double>(e)) {
          o.require(false, "sigma mismatch at n=" + std::to_string(n));
          return o;
        }
      }
      std::size_t i = n;
      while (i > 0 && xi[i - 1] == 6) --i;
      if (i == 0) break;
      const auto v = xi[i - 1] + 1;
      for (std::size_t j = i - 1; j < n; ++j) xi[j] = v;
    }
  }
  const V xs{1, 2, 3};
  const ExponentMultiset pair({1, 1});
  o.require(gamma_multi(pair, power_sums(xs, exponent_closure(pair))) == 22, "gamma_{1,1}(1,2,3) = 22");
  const double one_two[] = {1, 2};
  o.require(sigma_from_power(2, 1, power_sums(xs, one_two)) == 11, "sigma_{2,1}(1,2,3) = 11");
  const double one_two_three[] = {1, 2, 3};
  o.require(sigma_from_power(3, 1, power_sums(xs, one_two_three)) == 6, "sigma_{3,1}(1,2,3) = 6");
  const ExponentMultiset mixed({1, 2});
  o.require(gamma_multi(mixed, power_sums(V{1, 2}, exponent_closure(mixed))) == 6, "gamma_{1,2}(1,2) = 6");
  o.info(std::to_string(checked) + " gamma evaluations");
  return o;
}

Outcome criterion7() {
  Outcome o;
  const auto r = verify::check_g23_inequality(1000, verify::kDefaultSeed);
  o.require(r.holds && r.trials == 1000, "inequality on 1000 vectors");
  return o;
}

Outcome criterion8() {
  Outcome o;
  const V alphabet{0, 1, 2};
  const auto probes = myhill::default_probes(alphabet, 2);
  const auto arith =
      myhill::enumerate_classes(verify::from_descriptor(quasi_arithmetic("identity")), alphabet, 8, probes);
  for (std::size_t n = 1; n <= 8; ++n) {
    o.require(arith.counts[n - 1] == 2 * n + 1, "arithmetic count at n=" + std::to_string(n));
  }
  const auto median_d = median_mean(MedianKind::lower);
  const auto med = myhill::enumerate_classes(verify::from_descriptor(median_d), alphabet, 8, probes);
  for (std::size_t n = 3; n <= 8; ++n) {
    o.require(med.counts[n - 1] > 2 * n + 1, "median count " + std::to_string(med.counts[n - 1]) +
                                                 " exceeds " + std::to_string(2 * n + 1) + " at n=" +
                                                 std::to_string(n));
  }
  o.require(myhill::growth_report(arith).classification == myhill::Growth::bounded_linear,
            "arithmetic growth bounded-linear");
  const auto med_growth = myhill::growth_report(med);
  o.require(med_growth.classification == myhill::Growth::superlinear,
            "median growth superlinear (" + med_growth.fit + ")");
  std::string counts;
  for (auto c : med.counts) counts += (counts.empty() ? "" : ",") + std::to_string(c);
  o.info("median counts with probe length <= 2: " + counts);

  const auto full = myhill::enumerate_classes(verify::from_descriptor(median_d), alphabet, 8,
                                              myhill::default_probes(alphabet, 8));
  std::string full_counts;
  for (auto c : full.counts) full_counts += (full_counts.empty() ? "" : ",") + std::to_string(c);
  o.info("median counts with probe length <= 8: " + full_counts + " -> " +
         std::string(myhill::growth_name(myhill::growth_report(full).classification)));
  return o;
}

Outcome criterion9() {
  Outcome o;
  std::string text;
  for (const auto& flags : kGoldenFamilies) {
    std::vector<std::string> args{"classify"};
    args.insert(args.end(), flags.begin(), flags.end());
    std::istringstream in;
    std::ostringstream out;
    std::ostringstream err;
    o.require(cli::run_cli(args, in, out, err) == 0, "classify " + flags[1]);
    text += out.str() + "\n";
  }
  std::ifstream golden(std::filesystem::path(MEANSTREAM_GOLDEN_DIR) / "classify.txt");
  std::ostringstream expected;
  expected << golden.rdbuf();
  o.require(!expected.str().empty() && text == expected.str(), "output matches tests/golden/classify.txt");

  o.require(classify(power_mean(2)).type_string() == "T1+", "power T1+");
  o.require(classify(quasi_arithmetic("ln")).type_string() == "T1+", "quasi-arithmetic T1+");
  o.require(classify(gini(2, 1)).type_string() == "T2", "gini T2");
  o.require(classify(bajraktarevic("power:2", "power:1")).type_string() == "T2", "bajraktarevic T2");
  for (int r = 1; r <= 4; ++r) {
    const auto want = "T" + std::to_string(r) + "+";
    o.require(classify(hamy(r)).type_string() == want, "hamy " + want);
    o.require(classify(sympoly(r)).type_string() == want, "sympoly " + want);
  }
  o.require(classify(biplanar(2, 3, 3, 3)).type_string() == "T5+", "biplanar(2,3,3,3) T5+");
  o.require(classify(median_mean(MedianKind::lower)).type_string() == "no finite type", "median");
  return o;
}

Outcome criterion10() {
  Outcome o;
  std::mt19937_64 rng(verify::kDefaultSeed);
  for (const auto& d : every_family()) {
    const auto ptr = std::make_shared<const MeanDescriptor>(d);
    const auto box = d.domain().intersect(DomainInterval::closed(0.5, 20.0));
    std::uniform_real_distribution<double> u(box.lo, box.hi);
    bool ok = true;
    bool bits = true;
    for (int trial = 0; trial < 200 && ok && bits; ++trial) {
      const std::size_t n = 1 + rng() % 64;
      V xs(n);
      for (double& x : xs) x = u(rng);
      std::size_t a = rng() % (n + 1);
      std::size_t b = rng() % (n + 1);
      if (a > b) std::swap(a, b);
      std::vector<AccumulatorState> parts;
      for (auto [lo, hi] : {std::pair{std::size_t{0}, a}, {a, b}, {b, n}}) {
        auto s = init(ptr);
        for (std::size_t i = lo; i < hi; ++i) s.absorb_in_place(xs[i]);
        const auto text = serialize_state(s);
        const auto back = parse_state(text);
        for (std::size_t i = 0; i < s.reals().size(); ++i) {
          bits = bits && std::bit_cast<std::uint64_t>(s.reals()[i]) == std::bit_cast<std::uint64_t>(back.reals()[i]);
        }
        bits = bits && back.counter() == s.counter() && serialize_state(back) == text;
        parts.push_back(back);
      }
      std::shuffle(parts.begin(), parts.end(), rng);
      const auto merged = rng() % 2 ? merge(merge(parts[0], parts[1]), parts[2])
                                    : merge(parts[0], merge(parts[1], parts[2]));
      ok = rel_close(finalize(merged), evaluate_stream(ptr, xs), 1e-9);
    }
    o.require(ok, "merge tree agrees with single pass for " + d.label());
    o.require(bits, "bit-exact round trip for " + d.label());
  }
  return o;
}

struct Criterion {
  int id;
  const char* title;
  double limit_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "piecewise counterexample values and repetition witness", 1, criterion1},
      {2, "negligible element detection", 5, criterion2},
      {3, "streaming vs direct oracle", 30, criterion3},
      {4, "axiom suite", 60, criterion4},
      {5, "identities", 60, criterion5},
      {6, "gamma/sigma engine vs brute force", 20, criterion6},
      {7, "cube/square power-sum inequality", 60, criterion7},
      {8, "myhill separation (alphabet {0,1,2}, probes <= 2, max_len 8)", 60, criterion8},
      {9, "classification golden file", 60, criterion9},
      {10, "merge trees and state round trip", 60, criterion10},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.limit_seconds) {
      outcome.require(false, "runtime " + format_real(secs) + " s over the " + format_real(c.limit_seconds) + " s limit");
    }
    std::printf("criterion %2d: %s  %-62s %.3fs\n", c.id, outcome.pass ? "PASS" : "FAIL", c.title, secs);
    for (const auto& note : outcome.notes) std::printf("    %s\n", note.c_str());
    if (!outcome.pass) ++failures;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
