#include "hardyseq/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "hardyseq/error.hpp"
#include "hardyseq/seqgen.hpp"

namespace hardyseq {
namespace {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw Error(ErrorKind::InvalidArgument, "fit needs at least two distinct N");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

std::int64_t parse_token(std::string_view t) {
  auto to_int = [&](std::string_view s) {
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      throw Error(ErrorKind::Syntax, "bad grid value '" + std::string(t) + "'");
    }
    return std::stoll(std::string(s));
  };
  const auto caret = t.find('^');
  if (caret == std::string_view::npos) return to_int(t);
  const std::int64_t base = to_int(t.substr(0, caret));
  const std::int64_t exp = to_int(t.substr(caret + 1));
  std::int64_t v = 1;
  for (std::int64_t i = 0; i < exp; ++i) {
    if (__builtin_mul_overflow(v, base, &v)) throw Error(ErrorKind::Overflow, "grid value overflows");
  }
  return v;
}

std::int64_t largest(const std::vector<std::int64_t>& grid) {
  if (grid.empty()) throw Error(ErrorKind::InvalidArgument, "N grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < 1 || (i > 0 && grid[i] <= grid[i - 1])) {
      throw Error(ErrorKind::InvalidArgument, "N grid must be positive and strictly increasing");
    }
  }
  return grid.back();
}

void attach_fits(ScanResult& r) {
  std::vector<double> x, y;
  for (auto& row : r.rows) {
    if (row.value > 0.0) {
      x.push_back(std::log(static_cast<double>(row.N)));
      y.push_back(std::log(row.value));
    }
    if (x.size() >= 2) row.slope_running = least_squares(x, y).slope;
  }
  if (r.rows.size() >= 4) {
    std::vector<std::int64_t> ns;
    std::vector<double> vs;
    for (const auto& row : r.rows) {
      ns.push_back(row.N);
      vs.push_back(row.value);
    }
    r.fit = fit_exponent(ns, vs);
  }
}

std::optional<double> elapsed_ms(std::chrono::steady_clock::time_point since, bool record) {
  if (!record) return std::nullopt;
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

}  // namespace

ScalingFit fit_exponent(const std::vector<std::int64_t>& Ns, const std::vector<double>& values) {
  if (Ns.size() != values.size()) throw Error(ErrorKind::InvalidArgument, "fit inputs differ in length");
  if (Ns.size() < 4) throw Error(ErrorKind::InvalidArgument, "fit needs at least 4 points");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < Ns.size(); ++i) {
    if (Ns[i] < 1) throw Error(ErrorKind::InvalidArgument, "fit needs N >= 1");
    if (!(values[i] > 0.0)) throw Error(ErrorKind::Domain, "fit needs positive values");
    x.push_back(std::log(static_cast<double>(Ns[i])));
    y.push_back(std::log(values[i]));
  }
  const LineFit line = least_squares(x, y);
  ScalingFit fit{Ns, values, line.slope, line.intercept, 0.0};
  for (std::size_t i = 0; i < x.size(); ++i) {
    fit.max_residual = std::max(fit.max_residual, std::fabs(y[i] - (line.intercept + line.slope * x[i])));
  }
  return fit;
}

std::vector<std::int64_t> parse_grid(std::string_view text) {
  std::vector<std::int64_t> out;
  const auto dots = text.find("..");
  if (dots != std::string_view::npos) {
    const std::int64_t lo = parse_token(text.substr(0, dots));
    const std::int64_t hi = parse_token(text.substr(dots + 2));
    if (lo < 1 || hi < lo) throw Error(ErrorKind::Syntax, "grid range needs 1 <= A <= B");
    for (std::int64_t v = lo; v <= hi; v *= 2) {
      out.push_back(v);
      if (v > hi / 2) break;
    }
  } else {
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const auto comma = text.find(',', pos);
      const auto tok = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
      out.push_back(parse_token(tok));
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
  }
  largest(out);
  return out;
}

ScanResult scan_w(const SubpolyFunction& f, const std::vector<std::int64_t>& grid,
                  std::optional<std::int64_t> a_cap, const ScanOptions& opt) {
  const auto seq = generate_sequence(f, static_cast<std::size_t>(largest(grid)), {}, opt.threads);
  ScanResult r = scan_w(seq.view(), grid, a_cap, opt);
  r.function_text = f.to_string();
  return r;
}

ScanResult scan_w(Signs e, const std::vector<std::int64_t>& grid, std::optional<std::int64_t> a_cap,
                  const ScanOptions& opt) {
  if (largest(grid) > static_cast<std::int64_t>(e.size())) {
    throw Error(ErrorKind::InvalidArgument, "grid exceeds the sequence length");
  }
  ScanResult r;
  r.measure = "W";
  for (const auto n : grid) {
    const auto start = std::chrono::steady_clock::now();
    const auto prefix = e.first(static_cast<std::size_t>(n));
    const auto w = well_distribution(prefix, a_cap, opt.threads);
    const bool exact = !a_cap || *a_cap >= n;
    r.rows.push_back({n, static_cast<double>(w.value), std::nullopt,
                      witness_json(w, prefix.size(), elapsed_ms(start, opt.record_runtime), exact)});
  }
  attach_fits(r);
  return r;
}

ScanResult scan_c(const SubpolyFunction& f, int s, const std::vector<std::int64_t>& grid,
                  const CorrelationMode& mode, const ScanOptions& opt) {
  const auto seq = generate_sequence(f, static_cast<std::size_t>(largest(grid)), {}, opt.threads);
  ScanResult r = scan_c(seq.view(), s, grid, mode, opt);
  r.function_text = f.to_string();
  r.in_regime = s >= 2 && static_cast<double>(s) < growth_exponent(f).beta + 1.0;
  return r;
}

ScanResult scan_c(Signs e, int s, const std::vector<std::int64_t>& grid, const CorrelationMode& mode,
                  const ScanOptions& opt) {
  if (largest(grid) > static_cast<std::int64_t>(e.size())) {
    throw Error(ErrorKind::InvalidArgument, "grid exceeds the sequence length");
  }
  ScanResult r;
  r.measure = "C" + std::to_string(s);
  for (const auto n : grid) {
    const auto start = std::chrono::steady_clock::now();
    const auto prefix = e.first(static_cast<std::size_t>(n));
    const auto c = correlation_measure(prefix, s, mode, opt.threads);
    r.rows.push_back({n, static_cast<double>(c.value), std::nullopt,
                      witness_json(c, prefix.size(), elapsed_ms(start, opt.record_runtime))});
  }
  attach_fits(r);
  return r;
}

namespace {

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

void write_scan_csv(std::ostream& out, const ScanResult& r) {
  out << "N,value,slope_running,witness_json\n";
  for (const auto& row : r.rows) {
    out << row.N << ',' << row.value << ',';
    if (row.slope_running) {
      std::ostringstream s;
      s << std::setprecision(6) << std::fixed << *row.slope_running;
      out << s.str();
    }
    out << ',' << csv_quote(row.witness_json) << '\n';
  }
}

CounterexampleReport counterexample_run(double c, const std::vector<std::int64_t>& grid,
                                        std::int64_t exact_limit, unsigned threads) {
  if (!(c > 0.0)) throw Error(ErrorKind::InvalidArgument, "exponent c must be positive");
  char buf[32];
  const auto end = std::to_chars(buf, buf + sizeof buf, c).ptr;
  const auto f = parse_function("x^" + std::string(buf, end), {.allow_polynomial = true});
  const auto seq = generate_sequence(f, static_cast<std::size_t>(largest(grid)), {}, threads);
  const auto e = seq.view();

  CounterexampleReport rep;
  rep.c = c;
  rep.in_theorem = c < 1.0;
  rep.min_ratio = INFINITY;
  std::int64_t running = 0;
  std::int64_t upto = 1;  // running = sum_{n < upto} e_n e_{n+1}
  for (const auto n : grid) {
    for (; upto < n; ++upto) running += e[upto - 1] * e[upto];
    CounterexampleRow row;
    row.N = n;
    row.S = running;
    row.ratio = static_cast<double>(running) / static_cast<double>(n);
    if (n <= exact_limit && n >= 2) {
      row.c2 = correlation_measure(e.first(static_cast<std::size_t>(n)), 2, {}, threads).value;
    }
    rep.min_ratio = std::min(rep.min_ratio, row.ratio);
    rep.rows.push_back(row);
  }
  return rep;
}

void write_counterexample_csv(std::ostream& out, const CounterexampleReport& r) {
  out << "N,S,ratio,C2\n";
  for (const auto& row : r.rows) {
    out << row.N << ',' << row.S << ',' << std::setprecision(9) << row.ratio << ',';
    if (row.c2) out << *row.c2;
    out << '\n';
  }
}

}  // namespace hardyseq
