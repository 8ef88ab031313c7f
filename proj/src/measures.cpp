#include "hardyseq/measures.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <limits>
#include <random>

#include <json.hpp>

#include "hardyseq/error.hpp"
#include "parallel.hpp"

namespace hardyseq {
namespace {

using Index = std::int64_t;

Index length_of(Signs e) { return static_cast<Index>(e.size()); }

// Maximum of |P_j - P_i| over 0 <= i <= start_limit, i < j <= len, where P is
// the prefix sum of term(0..len-1).  Returns -1 when no window exists.
template <class TermFn>
Index interval_value(Index len, Index start_limit, TermFn&& term) {
  start_limit = std::min(start_limit, len - 1);
  if (start_limit < 0) return -1;
  Index p = 0, lo = 0, hi = 0, best = 0;
  for (Index j = 1; j <= len; ++j) {
    if (j - 1 <= start_limit) {
      lo = std::min(lo, p);
      hi = std::max(hi, p);
    }
    p += term(j - 1);
    best = std::max(best, std::max(p - lo, hi - p));
  }
  return best;
}

struct Window {
  Index start = 0;
  Index length = 0;
};

// Among the windows attaining `value`, the one with the smallest length, then
// the smallest start.  scratch is reused across calls.
template <class TermFn>
Window interval_witness(Index len, Index start_limit, Index value, std::vector<Index>& scratch,
                        TermFn&& term) {
  start_limit = std::min(start_limit, len - 1);
  scratch.assign(static_cast<std::size_t>(2 * len + 1), -1);
  auto slot = [&](Index p) -> Index& { return scratch[static_cast<std::size_t>(p + len)]; };
  Window best{0, std::numeric_limits<Index>::max()};
  Index p = 0;
  for (Index j = 1; j <= len; ++j) {
    if (j - 1 <= start_limit) slot(p) = j - 1;
    p += term(j - 1);
    for (const Index target : {p - value, p + value}) {
      if (target < -len || target > len) continue;
      const Index i = slot(target);
      if (i < 0) continue;
      const Index m = j - i;
      if (m < best.length || (m == best.length && i < best.start)) best = {i, m};
    }
  }
  return best;
}

bool better_correlation(const CorrelationWitness& x, const CorrelationWitness& y) {
  if (x.value != y.value) return x.value > y.value;
  if (x.M != y.M) return x.M < y.M;
  return x.d < y.d;
}

void check_correlation_order(int s) {
  if (s < 2) throw Error(ErrorKind::InvalidArgument, "correlation order must be >= 2");
}

// Scans every offset pattern 0 = delta_1 < ... < delta_s = D with
// D in [d_lo, d_hi] and records the best tuple.  start_cap bounds d_1 by
// start_cap - D (capped mode) or is unbounded.
class PatternScan {
 public:
  PatternScan(Signs e, int s, std::optional<Index> start_cap)
      : e_(e), s_(s), start_cap_(start_cap) {}

  CorrelationWitness run(Index d_lo, Index d_hi, unsigned threads) {
    CorrelationWitness best;
    best.s = s_;
    if (d_hi < d_lo) return best;
    const std::size_t count = static_cast<std::size_t>(d_hi - d_lo + 1);
    std::vector<CorrelationWitness> partial(detail::chunk_count(count, threads), best);
    detail::parallel_chunks(count, threads, [&](std::size_t w, std::size_t begin, std::size_t end) {
      std::vector<Index> scratch;
      std::vector<Index> offsets(static_cast<std::size_t>(s_), 0);
      for (std::size_t k = begin; k < end; ++k) {
        const Index D = d_lo + static_cast<Index>(k);
        offsets.back() = D;
        enumerate_middle(offsets, 1, 1, D, partial[w], scratch);
      }
    });
    for (const auto& p : partial) {
      if (p.M > 0 && (best.M == 0 || better_correlation(p, best))) best = p;
    }
    return best;
  }

  // Best tuple for one offset pattern (offsets[0] == 0).
  void evaluate(const std::vector<Index>& offsets, CorrelationWitness& best,
                std::vector<Index>& scratch) const {
    const Index n = length_of(e_);
    const Index D = offsets.back();
    const Index len = n - D;
    if (len < 1) return;
    const Index limit = start_cap_ ? *start_cap_ - D : len - 1;
    const std::int8_t* data = e_.data();
    Index value;
    auto pair_term = [data, D](Index m) { return Index{data[m] * data[m + D]}; };
    auto general_term = [data, &offsets](Index m) {
      int prod = 1;
      for (const Index off : offsets) prod *= data[m + off];
      return Index{prod};
    };
    value = s_ == 2 ? interval_value(len, limit, pair_term)
                    : interval_value(len, limit, general_term);
    if (value < 0 || value < best.value) return;
    const Window w = s_ == 2 ? interval_witness(len, limit, value, scratch, pair_term)
                             : interval_witness(len, limit, value, scratch, general_term);
    CorrelationWitness cand;
    cand.value = value;
    cand.s = s_;
    cand.M = w.length;
    cand.d.resize(offsets.size());
    for (std::size_t j = 0; j < offsets.size(); ++j) cand.d[j] = w.start + offsets[j];
    cand.exact = best.exact;
    if (best.M == 0 || better_correlation(cand, best)) best = std::move(cand);
  }

 private:
  void enumerate_middle(std::vector<Index>& offsets, std::size_t slot, Index lo, Index D,
                        CorrelationWitness& best, std::vector<Index>& scratch) const {
    if (slot + 1 == offsets.size()) {
      evaluate(offsets, best, scratch);
      return;
    }
    const Index remaining = static_cast<Index>(offsets.size() - 1 - slot);
    for (Index v = lo; v <= D - remaining; ++v) {
      offsets[slot] = v;
      enumerate_middle(offsets, slot + 1, v + 1, D, best, scratch);
    }
  }

  Signs e_;
  int s_;
  std::optional<Index> start_cap_;
};

CorrelationWitness randomized_search(Signs e, int s, std::uint64_t seed, Index iterations) {
  const Index n = length_of(e);
  const Index d_cap = n - 1;
  PatternScan scan(e, s, std::nullopt);
  CorrelationWitness best;
  best.s = s;
  best.exact = false;
  std::mt19937_64 rng(seed);
  auto uniform = [&rng](Index lo, Index hi) {  // inclusive
    return lo + static_cast<Index>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
  };
  auto random_pattern = [&] {
    std::vector<Index> picks;
    while (static_cast<int>(picks.size()) < s - 1) {
      const Index v = uniform(1, d_cap);
      if (std::find(picks.begin(), picks.end(), v) == picks.end()) picks.push_back(v);
    }
    std::sort(picks.begin(), picks.end());
    picks.insert(picks.begin(), 0);
    return picks;
  };
  auto score = [&](const std::vector<Index>& offsets, std::vector<Index>& scratch) {
    CorrelationWitness w;
    w.s = s;
    w.exact = false;
    scan.evaluate(offsets, w, scratch);
    return w;
  };

  std::vector<Index> scratch;
  std::vector<Index> current = random_pattern();
  CorrelationWitness current_score = score(current, scratch);
  best = current_score;
  Index stale = 0;
  for (Index it = 0; it < iterations; ++it) {
    std::vector<Index> proposal;
    if (stale > 64) {
      proposal = random_pattern();
      stale = 0;
    } else {
      proposal = current;
      const auto j = static_cast<std::size_t>(uniform(1, s - 1));
      const Index lo = proposal[j - 1] + 1;
      const Index hi = j + 1 < proposal.size() ? proposal[j + 1] - 1 : d_cap;
      if (hi < lo) {
        ++stale;
        continue;
      }
      proposal[j] = uniform(lo, hi);
    }
    CorrelationWitness ps = score(proposal, scratch);
    if (ps.value >= current_score.value) {
      if (ps.value == current_score.value) ++stale; else stale = 0;
      current = std::move(proposal);
      current_score = ps;
    } else {
      ++stale;
    }
    if (better_correlation(current_score, best)) best = current_score;
  }
  return best;
}

}  // namespace

CorrelationMode CorrelationMode::parse(std::string_view text) {
  auto to_int = [&](std::string_view part) {
    std::int64_t v = 0;
    const auto res = std::from_chars(part.data(), part.data() + part.size(), v);
    if (res.ec != std::errc{} || res.ptr != part.data() + part.size()) {
      throw Error(ErrorKind::InvalidArgument, "bad correlation mode: " + std::string(text));
    }
    return v;
  };
  CorrelationMode mode;
  if (text == "exact") return mode;
  if (text.starts_with("capped:")) {
    mode.kind = Kind::Capped;
    mode.d_max = to_int(text.substr(7));
    if (mode.d_max < 1) throw Error(ErrorKind::InvalidArgument, "capped mode needs D >= 1");
    return mode;
  }
  if (text.starts_with("rand:")) {
    const auto rest = text.substr(5);
    const auto colon = rest.find(':');
    if (colon == std::string_view::npos) {
      throw Error(ErrorKind::InvalidArgument, "randomized mode is rand:SEED:ITERS");
    }
    mode.kind = Kind::Randomized;
    mode.seed = static_cast<std::uint64_t>(to_int(rest.substr(0, colon)));
    mode.iterations = to_int(rest.substr(colon + 1));
    if (mode.iterations < 0) throw Error(ErrorKind::InvalidArgument, "negative iteration count");
    return mode;
  }
  throw Error(ErrorKind::InvalidArgument, "bad correlation mode: " + std::string(text));
}

std::string CorrelationMode::to_string() const {
  switch (kind) {
    case Kind::Exact: return "exact";
    case Kind::Capped: return "capped:" + std::to_string(d_max);
    case Kind::Randomized:
      return "rand:" + std::to_string(seed) + ":" + std::to_string(iterations);
  }
  return "exact";
}

std::int64_t progression_sum(Signs e, std::int64_t M, std::int64_t a, std::int64_t b) {
  const Index n = length_of(e);
  if (a < 1 || M < 1 || a + b < 1 || a * M + b > n) {
    throw Error(ErrorKind::Constraint, "progression requires 1 <= a+b <= aM+b <= N");
  }
  Index sum = 0;
  for (Index k = 1; k <= M; ++k) sum += e[static_cast<std::size_t>(a * k + b - 1)];
  return sum;
}

WellDistWitness well_distribution(Signs e, std::optional<std::int64_t> a_cap, unsigned threads) {
  const Index n = length_of(e);
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "empty sequence");
  // For a >= N every progression has a single term, which a = 1 already covers.
  const Index cap = std::clamp<Index>(a_cap.value_or(n), 1, n);
  const auto count = static_cast<std::size_t>(cap);
  std::vector<WellDistWitness> partial(detail::chunk_count(count, threads));
  detail::parallel_chunks(count, threads, [&](std::size_t w, std::size_t begin, std::size_t end) {
    WellDistWitness best;
    best.value = -1;
    for (std::size_t k = begin; k < end; ++k) {
      const Index a = static_cast<Index>(k) + 1;
      Index best_range = -1, best_start = 0, best_len = 0, best_signed = 0;
      for (Index r = 1; r <= std::min(a, n); ++r) {
        Index p = 0, lo = 0, hi = 0, first_lo = 0, first_hi = 0, idx = 0;
        for (Index pos = r; pos <= n; pos += a) {
          ++idx;
          p += e[static_cast<std::size_t>(pos - 1)];
          if (p < lo) { lo = p; first_lo = idx; }
          if (p > hi) { hi = p; first_hi = idx; }
        }
        const Index range = hi - lo;
        if (range < best_range) continue;
        const Index i = std::min(first_lo, first_hi);
        const Index start = r + i * a;
        if (range > best_range || start < best_start) {
          best_range = range;
          best_start = start;
          best_len = std::abs(first_hi - first_lo);
          best_signed = first_lo < first_hi ? range : -range;
        }
      }
      if (best_range > best.value) {
        best = {best_range, a, best_start - a, best_len, best_signed};
      }
    }
    partial[w] = best;
  });
  WellDistWitness best = partial.front();
  for (const auto& p : partial) {
    if (p.value > best.value) best = p;
  }
  return best;
}

std::int64_t correlation_sum(Signs e, std::int64_t M, std::span<const std::int64_t> d) {
  const Index n = length_of(e);
  if (d.empty() || M < 1 || d.front() < 0 || M + d.back() > n) {
    throw Error(ErrorKind::Constraint, "correlation requires 0 <= d_1 and M + d_s <= N");
  }
  for (std::size_t j = 1; j < d.size(); ++j) {
    if (d[j] <= d[j - 1]) throw Error(ErrorKind::Constraint, "d must be strictly increasing");
  }
  Index sum = 0;
  for (Index k = 1; k <= M; ++k) {
    int prod = 1;
    for (const Index dj : d) prod *= e[static_cast<std::size_t>(k + dj - 1)];
    sum += prod;
  }
  return sum;
}

CorrelationWitness correlation_measure(Signs e, int s, const CorrelationMode& mode,
                                       unsigned threads) {
  check_correlation_order(s);
  const Index n = length_of(e);
  CorrelationWitness empty;
  empty.s = s;
  empty.exact = mode.kind == CorrelationMode::Kind::Exact;
  if (n < s) return empty;

  switch (mode.kind) {
    case CorrelationMode::Kind::Exact: {
      if (s >= 3 && n > 256) {
        throw Error(ErrorKind::SizeGuard, "exact correlation of order >= 3 requires N <= 256");
      }
      auto w = PatternScan(e, s, std::nullopt).run(s - 1, n - 1, threads);
      w.exact = true;
      return w;
    }
    case CorrelationMode::Kind::Capped: {
      auto w = PatternScan(e, s, mode.d_max).run(s - 1, std::min(mode.d_max, n - 1), threads);
      w.exact = false;
      return w;
    }
    case CorrelationMode::Kind::Randomized:
      return randomized_search(e, s, mode.seed, mode.iterations);
  }
  return empty;
}

WellDistWitness brute_force_w(Signs e) {
  const Index n = length_of(e);
  if (n < 1 || n > 64) throw Error(ErrorKind::SizeGuard, "brute_force_w requires 1 <= N <= 64");
  WellDistWitness best;
  best.value = -1;
  for (Index a = 1; a <= n; ++a) {
    for (Index b = 1 - a; a + b <= n; ++b) {
      Index sum = 0, m = 0;
      for (Index pos = a + b; pos <= n; pos += a) {
        sum += e[static_cast<std::size_t>(pos - 1)];
        ++m;
        if (std::abs(sum) > best.value) best = {std::abs(sum), a, b, m, sum};
      }
    }
  }
  return best;
}

CorrelationWitness brute_force_c(Signs e, int s) {
  check_correlation_order(s);
  const Index n = length_of(e);
  if (s > 4 || (s == 2 && n > 64) || (s > 2 && n > 40)) {
    throw Error(ErrorKind::SizeGuard, "brute_force_c requires s <= 4 and N <= 64 (s = 2) or 40");
  }
  CorrelationWitness best;
  best.s = s;
  std::vector<Index> d(static_cast<std::size_t>(s));
  auto visit = [&]() {
    Index sum = 0;
    for (Index m = 1; m + d.back() <= n; ++m) {
      int prod = 1;
      for (const Index dj : d) prod *= e[static_cast<std::size_t>(m + dj - 1)];
      sum += prod;
      CorrelationWitness cand{std::abs(sum), s, m, d, true};
      if (best.M == 0 || better_correlation(cand, best)) best = cand;
    }
  };
  auto rec = [&](auto&& self, std::size_t slot, Index lo) -> void {
    if (slot == d.size()) {
      visit();
      return;
    }
    for (Index v = lo; v <= n - 1; ++v) {
      d[slot] = v;
      self(self, slot + 1, v + 1);
    }
  };
  rec(rec, 0, 0);
  return best;
}

std::string witness_json(const WellDistWitness& w, std::size_t n, std::optional<double> runtime_ms,
                         bool exact) {
  nlohmann::ordered_json j;
  j["measure"] = "W";
  j["value"] = w.value;
  j["N"] = n;
  j["a"] = w.a;
  j["b"] = w.b;
  j["M"] = w.M;
  j["exact"] = exact;
  if (runtime_ms) {
    j["runtime_ms"] = *runtime_ms;
  } else {
    j["runtime_ms"] = nullptr;
  }
  return j.dump();
}

std::string witness_json(const CorrelationWitness& w, std::size_t n, std::optional<double> runtime_ms) {
  nlohmann::ordered_json j;
  j["measure"] = "C" + std::to_string(w.s);
  j["value"] = w.value;
  j["N"] = n;
  j["M"] = w.M;
  j["d"] = w.d;
  j["exact"] = w.exact;
  if (runtime_ms) {
    j["runtime_ms"] = *runtime_ms;
  } else {
    j["runtime_ms"] = nullptr;
  }
  return j.dump();
}

}  // namespace hardyseq
