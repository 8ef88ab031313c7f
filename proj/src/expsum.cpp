#include "hardyseq/expsum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "parallel.hpp"

namespace hardyseq {
namespace {

constexpr double kPhaseTolerance = 0x1p-30;

void check_phase(const Phase& p) {
  if (p.err >= kPhaseTolerance) {
    throw Error(ErrorKind::BoundaryUnresolved, "phase precision exceeds 2^-30");
  }
}

}  // namespace

std::complex<double> unit_phase(double t) {
  t -= std::floor(t);
  const double angle = 2.0 * std::numbers::pi * t;
  return {std::cos(angle), std::sin(angle)};
}

std::complex<double> exponential_sum(std::span<const double> phases, std::int64_t h) {
  ComplexAccumulator acc;
  const double hd = static_cast<double>(h);
  for (const double x : phases) {
    // Reduce x first so that h * x stays well inside double precision.
    const double reduced = x - std::floor(x);
    acc.add(unit_phase(hd * reduced));
  }
  return acc.value();
}

std::complex<double> weyl_sum(const SubpolyFunction& f, std::int64_t h, std::int64_t n1,
                              std::int64_t n2, unsigned threads) {
  if (h == 0) throw Error(ErrorKind::InvalidArgument, "weyl_sum needs h != 0");
  if (n2 < n1) return {0.0, 0.0};
  const SubpolyFunction phase = scale(f, mpq_class(static_cast<long>(h)));
  const auto count = static_cast<std::size_t>(n2 - n1 + 1);
  std::vector<ComplexAccumulator> partial(detail::chunk_count(count, threads));
  detail::parallel_chunks(count, threads, [&](std::size_t w, std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      const Phase p = eval_phase(phase, n1 + static_cast<std::int64_t>(k));
      check_phase(p);
      partial[w].add(unit_phase(p.frac));
    }
  });
  ComplexAccumulator total;
  for (const auto& p : partial) total.add(p);
  return total.value();
}

std::complex<double> multi_phase_sum(const PhaseSpec& spec, std::int64_t M) {
  if (spec.h.size() != spec.d.size() || spec.h.empty()) {
    throw Error(ErrorKind::InvalidArgument, "h and d must have the same nonzero length");
  }
  if (spec.d.front() < 0) throw Error(ErrorKind::Constraint, "d_1 must be >= 0");
  for (std::size_t j = 1; j < spec.d.size(); ++j) {
    if (spec.d[j] <= spec.d[j - 1]) throw Error(ErrorKind::Constraint, "d must be strictly increasing");
  }
  if (std::all_of(spec.h.begin(), spec.h.end(), [](auto v) { return v == 0; })) {
    throw Error(ErrorKind::InvalidArgument, "h must not be the zero vector");
  }
  std::vector<std::pair<SubpolyFunction, std::int64_t>> parts;
  for (std::size_t j = 0; j < spec.h.size(); ++j) {
    if (spec.h[j] != 0) parts.emplace_back(scale(spec.f, mpq_class(static_cast<long>(spec.h[j]))), spec.d[j]);
  }
  ComplexAccumulator acc;
  for (std::int64_t n = 1; n <= M; ++n) {
    double phase = 0.0;
    double err = 0.0;
    for (const auto& [g, shift] : parts) {
      const Phase p = eval_phase(g, n + shift);
      phase += p.frac;
      err += p.err;
    }
    if (err >= kPhaseTolerance) {
      throw Error(ErrorKind::BoundaryUnresolved, "phase precision exceeds 2^-30");
    }
    acc.add(unit_phase(phase));
  }
  return acc.value();
}

std::int64_t linear_form(std::span<const std::int64_t> h, std::span<const std::int64_t> d,
                         unsigned k) {
  if (h.size() != d.size()) throw Error(ErrorKind::InvalidArgument, "h and d lengths differ");
  std::int64_t total = 0;
  for (std::size_t j = 0; j < h.size(); ++j) {
    std::int64_t power = 1;
    for (unsigned i = 0; i < k; ++i) {
      if (__builtin_mul_overflow(power, d[j], &power)) {
        throw Error(ErrorKind::Overflow, "L_k(h) overflows int64");
      }
    }
    std::int64_t term = 0;
    if (__builtin_mul_overflow(power, h[j], &term) || __builtin_add_overflow(total, term, &total)) {
      throw Error(ErrorKind::Overflow, "L_k(h) overflows int64");
    }
  }
  return total;
}

int min_nonvanishing_index(std::span<const std::int64_t> h, std::span<const std::int64_t> d) {
  const auto s = static_cast<unsigned>(h.size());
  for (unsigned k = 0; k < s; ++k) {
    if (linear_form(h, d, k) != 0) return static_cast<int>(k);
  }
  // Unreachable for nonzero h and distinct d: the Vandermonde system would
  // have a nontrivial kernel.
  throw Error(ErrorKind::InvalidArgument,
              "L_0..L_{s-1} all vanish: h is zero or d has repeated entries");
}

double falling_factorial(double beta, int u) {
  double out = 1.0;
  for (int i = 0; i < u; ++i) out *= beta - i;
  return out;
}

LambdaAlpha lambda_alpha(const SubpolyFunction& f, std::int64_t h, std::int64_t a, double p_q,
                         int r, double eps) {
  if (r < 1) throw Error(ErrorKind::InvalidArgument, "r must be >= 1");
  if (!(eps > 0.0 && eps < 0.125)) throw Error(ErrorKind::InvalidArgument, "eps must lie in (0, 1/8)");
  if (h == 0 || a < 1 || !(p_q > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "lambda_alpha needs h != 0, a >= 1, P_q > 0");
  }
  const double beta = growth_exponent(f).beta;
  const double ap = static_cast<double>(a) * p_q;
  LambdaAlpha out;
  out.lambda_r = std::fabs(static_cast<double>(h)) * std::pow(ap, beta - eps) * std::pow(p_q, -r);
  out.alpha_r = std::pow(ap, 2.0 * eps);
  return out;
}

double kusmin_landau_bound(double lambda) {
  if (!(lambda > 0.0 && lambda <= 0.5)) {
    throw Error(ErrorKind::InvalidArgument, "Kusmin-Landau needs 0 < lambda <= 1/2");
  }
  return 1.0 / lambda;
}

BoundInputs make_bound_inputs(double lambda_r, double alpha_r, int r, double X, double X1) {
  if (r < 1 || r > 62) throw Error(ErrorKind::InvalidArgument, "r out of range");
  return {lambda_r, alpha_r, r, std::int64_t{1} << (r - 1), X, X1};
}

double vdc_bound(const BoundInputs& in) {
  if (in.r < 2) throw Error(ErrorKind::InvalidArgument, "the r-th derivative bound needs r >= 2");
  if (!(in.X >= 2.0)) throw Error(ErrorKind::InvalidArgument, "the r-th derivative bound needs X >= 2");
  const double R = static_cast<double>(in.bigR);
  const double r = in.r;
  const double log_x = std::log(in.X);
  const double first = std::pow(in.alpha_r * in.lambda_r, 1.0 / (2.0 * R - 2.0));
  const double second = std::pow(in.lambda_r * std::pow(in.X, r), -1.0 / R) *
                        std::pow(log_x, (r - 1.0) / R);
  const double third = std::pow(in.alpha_r * std::pow(log_x, r - 1.0) / in.X, 1.0 / R);
  return in.X * (first + second + third);
}

bool check_bound_inputs(const SubpolyFunction& phase, const BoundInputs& in, int samples) {
  const SubpolyFunction dr = derivative(phase, static_cast<unsigned>(in.r));
  double previous = 0.0;
  int direction = 0;
  for (int i = 0; i < samples; ++i) {
    const double x = in.X1 + in.X * (static_cast<double>(i) + 0.5) / samples;
    const double v = dr(x);
    const double mag = std::fabs(v);
    // Relative slack for double rounding of the derivative.
    const double slack = 1e-12 * mag;
    if (mag + slack < in.lambda_r || mag - slack > in.alpha_r * in.lambda_r) return false;
    if (i > 0) {
      const int step = (v > previous) - (v < previous);
      if (step != 0) {
        if (direction != 0 && step != direction) return false;
        direction = step;
      }
    }
    previous = v;
  }
  return true;
}

WExponent predicted_w_exponent(const GrowthInfo& g) {
  const double beta = g.beta;
  if (!(beta > 0.0)) throw Error(ErrorKind::InvalidArgument, "growth exponent must be positive");
  if (beta <= 0.5) return {1.0 - std::min(0.2, beta), "small"};
  if (beta < 1.0) return {(1.0 + beta) / 2.0, "medium"};
  const double R = static_cast<double>(g.bigR);
  return {1.0 - (g.r - beta) / (2.0 * R - 1.0), "large"};
}

RobertReport robert_check(const SubpolyFunction& f, std::int64_t h, std::int64_t n) {
  RobertReport rep;
  rep.lower_bound = static_cast<double>(n) / 8.0;
  if (h == 0 || n < 4) return rep;
  bool shape_ok = true;
  double previous = 0.0;
  ComplexAccumulator acc;
  for (std::int64_t k = 1; k <= n; ++k) {
    const double v = f(static_cast<double>(k));
    if (!(v > 0.0) || (k > 1 && v < previous)) shape_ok = false;
    previous = v;
    if (v > 0.0) acc.add(unit_phase(static_cast<double>(h) / v));
  }
  const double at_quarter = f(static_cast<double>(n / 4));
  rep.premise_ok = shape_ok && at_quarter >= 4.0 * std::numbers::pi * std::fabs(static_cast<double>(h));
  rep.sum_abs = std::abs(acc.value());
  rep.holds = rep.premise_ok && rep.sum_abs >= rep.lower_bound;
  return rep;
}

}  // namespace hardyseq
