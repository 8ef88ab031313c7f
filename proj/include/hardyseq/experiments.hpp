#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hardyseq/hfunc.hpp"
#include "hardyseq/measures.hpp"

namespace hardyseq {

// value ~ exp(intercept) * N^slope by least squares on (log N, log value).
struct ScalingFit {
  std::vector<std::int64_t> Ns;
  std::vector<double> values;
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;  // max |log value - fitted| over the points
};

// Needs >= 4 points with N >= 1 and value > 0.
ScalingFit fit_exponent(const std::vector<std::int64_t>& Ns, const std::vector<double>& values);

// "A..B" doubles from A up to B; "A,B,C" lists values.  Tokens may be
// written 2^k.
std::vector<std::int64_t> parse_grid(std::string_view text);

struct ScanRow {
  std::int64_t N = 0;
  double value = 0.0;
  std::optional<double> slope_running;  // fit over rows up to this one (>= 2 points)
  std::string witness_json;
};

struct ScanResult {
  std::string measure;  // "W" or "C<s>"
  std::string function_text;
  std::vector<ScanRow> rows;
  std::optional<ScalingFit> fit;  // present with >= 4 rows
  bool in_regime = true;          // C scans: 2 <= s < beta + 1
};

struct ScanOptions {
  unsigned threads = 0;
  // Wall-clock times in the witnesses; off by default so that repeated
  // scans produce identical bytes.
  bool record_runtime = false;
};

// W over prefixes of one sequence; a_cap defaults to each N (exact W).
ScanResult scan_w(const SubpolyFunction& f, const std::vector<std::int64_t>& grid,
                  std::optional<std::int64_t> a_cap = std::nullopt, const ScanOptions& opt = {});
ScanResult scan_w(Signs e, const std::vector<std::int64_t>& grid,
                  std::optional<std::int64_t> a_cap = std::nullopt, const ScanOptions& opt = {});

ScanResult scan_c(const SubpolyFunction& f, int s, const std::vector<std::int64_t>& grid,
                  const CorrelationMode& mode = {}, const ScanOptions& opt = {});
ScanResult scan_c(Signs e, int s, const std::vector<std::int64_t>& grid,
                  const CorrelationMode& mode = {}, const ScanOptions& opt = {});

// CSV with columns N,value,slope_running,witness_json.
void write_scan_csv(std::ostream& out, const ScanResult& r);

struct CounterexampleRow {
  std::int64_t N = 0;
  std::int64_t S = 0;  // sum_{n=1}^{N-1} e_n e_{n+1}
  double ratio = 0.0;  // S / N
  std::optional<std::int64_t> c2;  // exact C_2(E_N) when N <= exact_limit
};

struct CounterexampleReport {
  double c = 0.0;
  bool in_theorem = false;  // 0 < c < 1
  std::vector<CounterexampleRow> rows;
  double min_ratio = 0.0;
};

// f(x) = x^c; E is generated once at the largest N and prefixes are used.
CounterexampleReport counterexample_run(double c, const std::vector<std::int64_t>& grid,
                                        std::int64_t exact_limit = 0, unsigned threads = 0);

void write_counterexample_csv(std::ostream& out, const CounterexampleReport& r);

}  // namespace hardyseq
