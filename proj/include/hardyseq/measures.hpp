#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hardyseq {

using Signs = std::span<const std::int8_t>;

// W(E_N) with the lexicographically smallest maximizing (a, b, M).
struct WellDistWitness {
  std::int64_t value = 0;
  std::int64_t a = 1;
  std::int64_t b = 0;
  std::int64_t M = 0;
  std::int64_t signed_sum = 0;

  bool operator==(const WellDistWitness&) const = default;
};

// C_s(E_N) (or a lower bound when exact is false) with the lexicographically
// smallest maximizing (M, d).  When no admissible tuple exists (N < s) the
// value is 0 and d is empty.
struct CorrelationWitness {
  std::int64_t value = 0;
  int s = 2;
  std::int64_t M = 0;
  std::vector<std::int64_t> d;
  bool exact = true;

  bool operator==(const CorrelationWitness&) const = default;
};

struct CorrelationMode {
  enum class Kind { Exact, Capped, Randomized };
  Kind kind = Kind::Exact;
  std::int64_t d_max = 0;      // capped: d_s <= d_max
  std::uint64_t seed = 0;      // randomized
  std::int64_t iterations = 0; // randomized

  // "exact", "capped:D" or "rand:SEED:ITERS".
  static CorrelationMode parse(std::string_view text);
  std::string to_string() const;
};

// U(E_N, M, a, b) = sum_{n=1}^M e_{an+b}; requires 1 <= a+b <= aM+b <= N.
std::int64_t progression_sum(Signs e, std::int64_t M, std::int64_t a, std::int64_t b);

// Exact maximum over all progressions with a <= a_cap (default N).
// O(N * a_cap).
WellDistWitness well_distribution(Signs e, std::optional<std::int64_t> a_cap = std::nullopt,
                                  unsigned threads = 0);

// V(E_N, M, d) = sum_{n=1}^M prod_j e_{n+d_j}; d strictly increasing with
// d_1 >= 0 and M + d_s <= N.  Any s >= 1 is accepted.
std::int64_t correlation_sum(Signs e, std::int64_t M, std::span<const std::int64_t> d);

CorrelationWitness correlation_measure(Signs e, int s, const CorrelationMode& mode = {},
                                       unsigned threads = 0);

// Exhaustive enumeration oracles.  N <= 64 for W; for C, N <= 64 when s = 2
// and N <= 40 when s is 3 or 4.
WellDistWitness brute_force_w(Signs e);
CorrelationWitness brute_force_c(Signs e, int s);

// JSON witness records {measure, value, N, a, b, M | d, exact, runtime_ms}.
// A W record is exact only when it was computed without an a_cap below N.
// A missing runtime is written as null so that records can be byte-stable.
std::string witness_json(const WellDistWitness& w, std::size_t n, std::optional<double> runtime_ms,
                         bool exact = true);
std::string witness_json(const CorrelationWitness& w, std::size_t n,
                         std::optional<double> runtime_ms);

}  // namespace hardyseq
