// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.  All tolerances are pinned below.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "hardyseq/discrepancy.hpp"
#include "hardyseq/expsum.hpp"
#include "hardyseq/experiments.hpp"
#include "hardyseq/measures.hpp"
#include "hardyseq/seqgen.hpp"
#include "hardyseq/vaaler.hpp"
#include "oracles.hpp"

using namespace hardyseq;

namespace {

constexpr double kVaalerTol = 1e-9;
constexpr double kVaalerDelta = 1e-6;
constexpr std::int64_t kVaalerGrid = 100000;
constexpr double kEtTol = 1e-12;
constexpr double kSlopeCeiling = 0.99;
constexpr double kPredictMargin = 0.05;
constexpr double kLinkTol = 1e-9;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double limit_s;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome oracle_equivalence() {
  std::mt19937_64 rng(20240601);
  int mismatches = 0, cases = 0;
  for (std::size_t n = 1; n <= 64; ++n) {
    for (int rep = 0; rep < 100; ++rep) {
      const auto e = oracle::random_signs(rng, n);
      ++cases;
      if (!(well_distribution(e) == brute_force_w(e))) ++mismatches;
      if (n >= 2 && !(correlation_measure(e, 2) == brute_force_c(e, 2))) ++mismatches;
    }
  }
  return {mismatches == 0, fmt("%d sequences, N = 1..64, %d mismatches", cases, mismatches)};
}

Outcome vaaler_envelope() {
  bool ok = true;
  double worst = -INFINITY;
  for (const int H : {1, 2, 4, 8, 16, 32, 64}) {
    const auto rep = verify_envelope(H, kVaalerGrid, kVaalerDelta);
    worst = std::max(worst, rep.max_excess);
    ok = ok && rep.max_excess <= kVaalerTol && rep.points_checked > 0;
    ok = ok && build_vaaler(H).b[0] == 1.0 / (H + 1.0);
  }
  return {ok, fmt("max(|chi - A_H| - B_H) = %.3e over H in {1..64}, b_0 = 1/(H+1)", worst)};
}

Outcome erdos_turan() {
  std::mt19937_64 rng(31337);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int violations = 0;
  double tightest = INFINITY;
  for (int set = 0; set < 50; ++set) {
    std::vector<double> xs(1000);
    for (auto& x : xs) x = u(rng);
    const auto p = PointSet::from_1d(xs);
    const double d = discrepancy_1d(p);
    for (const int H : {10, 100, 1000}) {
      const double b = erdos_turan_bound(p, H);
      tightest = std::min(tightest, b - d);
      if (d > b + kEtTol) ++violations;
    }
  }
  return {violations == 0, fmt("50 sets x 3 H, %d violations, min(bound - D) = %.4f", violations, tightest)};
}

Outcome robert() {
  const auto r1 = robert_check(parse_function("x", {.allow_polynomial = true}), 1, 52);
  const auto r2 = robert_check(parse_function("x^0.5"), 1, 2600);
  const bool ok = r1.premise_ok && r1.sum_abs >= 52.0 / 8 && r2.premise_ok && r2.sum_abs >= 2600.0 / 8;
  return {ok, fmt("f=n N=52: %.3f >= 6.5; f=sqrt n N=2600: %.3f >= 325", r1.sum_abs, r2.sum_abs)};
}

Outcome counterexample() {
  const auto floors = fixtures::counterexample_floors();
  const auto grid = parse_grid("2^10..2^17");
  bool ok = floors.size() == 3;
  std::string detail;
  for (const double c : {0.3, 0.5, 0.7}) {
    const double theta = floors.at(c);
    const auto rep = counterexample_run(c, grid, 8192);
    double min_c2 = INFINITY;
    for (const auto& row : rep.rows) {
      ok = ok && row.ratio >= theta && theta > 0.0;
      if (row.N <= 8192) {
        ok = ok && row.c2.has_value();
        if (row.c2) {
          const double r = static_cast<double>(*row.c2) / static_cast<double>(row.N);
          min_c2 = std::min(min_c2, r);
          ok = ok && r >= theta;
        }
      }
    }
    detail += fmt("c=%.1f: min S/N %.4f, min C2/N %.4f, theta %.2f; ", c, rep.min_ratio, min_c2, theta);
  }
  return {ok, detail};
}

Outcome sublinearity() {
  const auto grid = parse_grid("2^10..2^16");
  bool ok = true;
  std::string detail;
  for (const char* text : {"x^1.5", "x^2.5", "x^2*log(x)"}) {
    const auto f = parse_function(text);
    const auto seq = generate_sequence(f, static_cast<std::size_t>(grid.back()));
    const auto w = scan_w(seq.view(), grid);
    const auto c = scan_c(seq.view(), 2, grid);
    const double ws = w.fit->slope, cs = c.fit->slope;
    ok = ok && ws <= kSlopeCeiling && cs <= kSlopeCeiling;
    detail += fmt("%s W %.3f C2 %.3f", text, ws, cs);
    // The predicted-exponent comparison applies to pure powers x^c.
    if (f.terms().size() == 1 && f.leading().log_power == 0) {
      const double pred = predicted_w_exponent(growth_exponent(f)).exponent;
      ok = ok && ws <= pred + kPredictMargin;
      detail += fmt(" (pred %.3f)", pred);
    }
    detail += "; ";
  }
  return {ok, detail};
}

Outcome vandermonde() {
  long long checked = 0, violations = 0;
  for (int s = 2; s <= 4; ++s) {
    std::vector<std::int64_t> d(s), h(s);
    // Strictly increasing d with 0 <= d_1 and d_s <= 6, as bitmasks of {0..6}.
    for (int mask = 0; mask < 128; ++mask) {
      if (__builtin_popcount(mask) != s) continue;
      int k = 0;
      for (int bit = 0; bit < 7; ++bit) {
        if (mask & (1 << bit)) d[k++] = bit;
      }
      long long total = 1;
      for (int j = 0; j < s; ++j) total *= 11;
      for (long long idx = 0; idx < total; ++idx) {
        long long rest = idx;
        bool zero = true;
        for (int j = 0; j < s; ++j) {
          h[j] = rest % 11 - 5;
          rest /= 11;
          zero = zero && h[j] == 0;
        }
        if (zero) continue;
        ++checked;
        if (min_nonvanishing_index(h, d) > s - 1) ++violations;
      }
    }
  }
  return {violations == 0, fmt("%lld (h, d) pairs, %lld with u(h) > s-1", checked, violations)};
}

Outcome precision_kernel() {
  long long checked = 0, misclassified = 0, raised = 0, escalations = 0;
  for (const char* text : {"x^1.5", "x^2.5", "x^0.5", "x^2*log(x)", "x^3.5 + 0.5", "x^0.3*log(x)^2"}) {
    const auto f = parse_function(text);
    for (std::int64_t n = 1; n <= 100000; ++n) {
      try {
        const auto v = eval_frac(f, n);
        const int sign = chi(v);
        ++checked;
        if (sign != oracle::expected_sign(f, n, oracle::four_x_digits(f, n))) ++misclassified;
        if (v.escalated) ++escalations;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::BoundaryUnresolved) throw;
        ++raised;
      }
    }
  }
  // A policy too weak to separate a value from the boundary must raise.
  bool explicit_error = false;
  PrecisionPolicy weak;
  weak.max_bits = 64;
  weak.boundary_tolerance_log2 = -8;
  try {
    chi(eval_frac(parse_function("x^0.5 + 0.0858"), 2, weak));
  } catch (const Error& e) {
    explicit_error = e.kind() == ErrorKind::BoundaryUnresolved;
  }
  return {misclassified == 0 && explicit_error,
          fmt("%lld values, %lld misclassified, %lld escalations, %lld raised; weak policy raises: %s", checked,
              misclassified, escalations, raised, explicit_error ? "yes" : "no")};
}

Outcome discrepancy_link() {
  std::mt19937_64 rng(777);
  const char* corpus[] = {"x^1.5", "x^2.5", "x^0.5", "x^2*log(x)", "x^0.7"};
  int violations = 0;
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const auto f = parse_function(corpus[t % 5]);
    const std::int64_t a = 1 + static_cast<std::int64_t>(rng() % 10);
    const std::int64_t b = static_cast<std::int64_t>(rng() % 21);
    const std::int64_t M = 10 + static_cast<std::int64_t>(rng() % 1991);
    const auto seq = generate_sequence(f, static_cast<std::size_t>(a * M + b));
    const auto u = progression_sum(seq.view(), M, a, b);
    const double bound = 2.0 * static_cast<double>(M) * discrepancy_1d(fractional_points(f, M, a, b));
    worst = std::max(worst, std::abs(static_cast<double>(u)) / bound);
    if (std::abs(static_cast<double>(u)) > bound + kLinkTol) ++violations;
  }
  return {violations == 0, fmt("100 tuples, %d violations, max |U| / (2 M D_M) = %.4f", violations, worst)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "oracle equivalence", 60, oracle_equivalence},
      {2, "Vaaler envelope", 30, vaaler_envelope},
      {3, "Erdos-Turan constant 1", 60, erdos_turan},
      {4, "Robert lower bound", 5, robert},
      {5, "x^c counterexample floor", 300, counterexample},
      {6, "W and C2 sublinearity", 900, sublinearity},
      {7, "Vandermonde u(h) <= s-1", 60, vandermonde},
      {8, "precision kernel", 120, precision_kernel},
      {9, "discrepancy link", 120, discrepancy_link},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = out.pass && secs < c.limit_s;
    if (!pass) ++failed;
    std::printf("criterion %d %s %s: %s [%.1f s / %.0f s]\n", c.id, pass ? "PASS" : "FAIL", c.name,
                out.detail.c_str(), secs, c.limit_s);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
