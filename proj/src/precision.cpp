// Certified evaluation of {f(n)} for the power/log term family.
//
// Terms whose value at an integer argument is rational (integer powers,
// small-denominator powers of perfect powers, log factors at x = 1) are
// summed exactly in GMP.  The rest are evaluated in MPFR with round-to-nearest
// and a first-order error bound with generous slack; fractional parts are
// then exact in MPFR because the working precision covers the integer part.

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <optional>

#include "hardyseq/hfunc.hpp"

namespace hardyseq {
namespace {

class Mpfr {
 public:
  explicit Mpfr(mpfr_prec_t bits) { mpfr_init2(v_, bits); }
  ~Mpfr() { mpfr_clear(v_); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;

  mpfr_ptr get() noexcept { return v_; }
  mpfr_srcptr get() const noexcept { return v_; }

 private:
  mpfr_t v_;
};

constexpr unsigned kGuardBits = 64;
constexpr unsigned long kMaxExactDenominator = 64;

// Integer q-th root of x if x is a perfect q-th power.
std::optional<std::int64_t> exact_root(std::int64_t x, unsigned long q) {
  if (q == 1) return x;
  const long double guess = std::pow(static_cast<long double>(x), 1.0L / q);
  const auto center = static_cast<std::int64_t>(std::llround(guess));
  for (std::int64_t r = std::max<std::int64_t>(1, center - 1); r <= center + 1; ++r) {
    __int128 acc = 1;
    bool overflow = false;
    for (unsigned long i = 0; i < q && !overflow; ++i) {
      acc *= r;
      overflow = acc > static_cast<__int128>(x);
    }
    if (!overflow && acc == x) return r;
  }
  return std::nullopt;
}

std::optional<mpq_class> exact_term_value(const Term& t, std::int64_t x) {
  if (t.log_power > 0) {
    if (x == 1) return mpq_class(0);
    return std::nullopt;
  }
  const unsigned long den = t.power.get_den().get_ui();
  if (!t.power.get_den().fits_ulong_p() || den > kMaxExactDenominator) return std::nullopt;
  const auto root = exact_root(x, den);
  if (!root) return std::nullopt;
  const mpz_class& num = t.power.get_num();
  if (!num.fits_slong_p()) return std::nullopt;
  const long p = num.get_si();
  mpz_class base(static_cast<long>(*root));
  mpz_class pw;
  mpz_pow_ui(pw.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(std::labs(p)));
  mpq_class value = p >= 0 ? mpq_class(pw) : mpq_class(mpz_class(1), pw);
  value.canonicalize();
  return mpq_class(value * t.coeff);
}

struct Split {
  mpq_class exact_part = 0;
  std::vector<const Term*> inexact;
};

Split split_terms(const SubpolyFunction& f, std::int64_t x) {
  Split s;
  for (const auto& t : f.terms()) {
    if (auto v = exact_term_value(t, x)) {
      s.exact_part += *v;
    } else {
      s.inexact.push_back(&t);
    }
  }
  return s;
}

// log2 of a magnitude bound on the partial sums.
double log2_magnitude(const Split& s, std::int64_t x) {
  const double lx = std::log2(static_cast<double>(x));
  const double lnx = std::log(static_cast<double>(x));
  double best = 1.0;
  if (s.exact_part != 0) best = std::max(best, std::log2(std::fabs(s.exact_part.get_d())) + 1.0);
  for (const Term* t : s.inexact) {
    double l = std::log2(std::fabs(t->coeff.get_d())) + t->power.get_d() * lx;
    if (t->log_power > 0) l += t->log_power * std::log2(lnx);
    best = std::max(best, l);
  }
  return best + std::log2(static_cast<double>(s.inexact.size() + 1));
}

unsigned initial_bits(const Split& s, std::int64_t x) {
  return kGuardBits + static_cast<unsigned>(std::ceil(log2_magnitude(s, x)));
}

// Evaluates the sum at `bits` into frac (in [0,1)) and returns the absolute
// error bound.
double evaluate_frac(const Split& s, std::int64_t x, mpfr_prec_t bits, Mpfr& frac) {
  Mpfr sum(bits), arg(bits), power(bits), term(bits), tmp(bits), logx(bits);
  mpfr_set_si(arg.get(), x, MPFR_RNDN);
  mpfr_log(logx.get(), arg.get(), MPFR_RNDN);
  mpfr_set_q(sum.get(), s.exact_part.get_mpq_t(), MPFR_RNDN);

  const double u = std::ldexp(1.0, -static_cast<int>(bits));
  const double lnx = std::log(static_cast<double>(x));
  double abs_total = std::fabs(s.exact_part.get_d());
  double err = 0.0;
  for (const Term* t : s.inexact) {
    mpfr_set_q(tmp.get(), t->power.get_mpq_t(), MPFR_RNDN);
    mpfr_pow(power.get(), arg.get(), tmp.get(), MPFR_RNDN);
    if (t->log_power > 0) {
      mpfr_pow_ui(tmp.get(), logx.get(), t->log_power, MPFR_RNDN);
      mpfr_mul(power.get(), power.get(), tmp.get(), MPFR_RNDN);
    }
    mpfr_set_q(tmp.get(), t->coeff.get_mpq_t(), MPFR_RNDN);
    mpfr_mul(term.get(), power.get(), tmp.get(), MPFR_RNDN);
    mpfr_add(sum.get(), sum.get(), term.get(), MPFR_RNDN);

    // power conversion (|c| ln x), pow, log^k, pow_ui, two products, coeff.
    const double magnitude = std::fabs(mpfr_get_d(term.get(), MPFR_RNDU));
    const double rel = (std::fabs(t->power.get_d()) * lnx + t->log_power + 6.0) * u;
    err += magnitude * rel;
    abs_total += magnitude;
  }
  // Rounding of the exact part and of every addition.
  err += (static_cast<double>(s.inexact.size()) + 2.0) * u * abs_total;
  err *= 1.0625;

  mpfr_frac(frac.get(), sum.get(), MPFR_RNDN);
  if (mpfr_sgn(frac.get()) < 0) mpfr_add_ui(frac.get(), frac.get(), 1, MPFR_RNDN);
  return err;
}

double to_double_below_one(mpfr_srcptr v, double& conversion_err) {
  double d = mpfr_get_d(v, MPFR_RNDN);
  if (d >= 1.0) d = std::nextafter(1.0, 0.0);
  Mpfr diff(mpfr_get_prec(v));
  mpfr_sub_d(diff.get(), v, d, MPFR_RNDN);
  conversion_err = std::fabs(mpfr_get_d(diff.get(), MPFR_RNDU)) * (1.0 + 1e-12);
  return d;
}

double boundary_distance(mpfr_srcptr frac) {
  Mpfr t(mpfr_get_prec(frac));
  double dist = mpfr_get_d(frac, MPFR_RNDN);
  mpfr_ui_sub(t.get(), 1, frac, MPFR_RNDN);
  dist = std::min(dist, mpfr_get_d(t.get(), MPFR_RNDN));
  mpfr_sub_d(t.get(), frac, 0.5, MPFR_RNDN);
  dist = std::min(dist, std::fabs(mpfr_get_d(t.get(), MPFR_RNDN)));
  return dist;
}

FractionalValue exact_value(const mpq_class& value, int tolerance_log2) {
  mpz_class floor_part;
  mpz_fdiv_q(floor_part.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
  mpq_class frac = value - mpq_class(floor_part);
  FractionalValue v;
  v.exact = true;
  v.frac = std::min(frac.get_d(), std::nextafter(1.0, 0.0));
  mpq_class diff = frac - mpq_class(v.frac);
  v.err = std::fabs(diff.get_d()) * (1.0 + 1e-12);
  const mpq_class half(1, 2);
  v.half = frac < half ? +1 : -1;
  mpq_class d_half = frac - half;
  if (d_half < 0) d_half = -d_half;
  const double dist = std::min({frac.get_d(), d_half.get_d(), mpq_class(1 - frac).get_d()});
  v.escalated = dist <= std::ldexp(1.0, tolerance_log2);
  return v;
}

std::int64_t checked_argument(const SubpolyFunction& f, std::int64_t n) {
  const std::int64_t x = f.argument(n);
  if (static_cast<double>(x) < f.domain_start()) {
    throw Error(ErrorKind::Domain, "argument " + std::to_string(x) +
                                       " is below the domain start of " + f.to_string());
  }
  return x;
}

}  // namespace

FractionalValue eval_frac(const SubpolyFunction& f, std::int64_t n,
                          const PrecisionPolicy& policy) {
  const std::int64_t x = checked_argument(f, n);
  const Split split = split_terms(f, x);
  if (split.inexact.empty()) return exact_value(split.exact_part, policy.boundary_tolerance_log2);

  const unsigned start = initial_bits(split, x);
  unsigned bits = start;
  int tol_log2 = policy.boundary_tolerance_log2;
  for (;;) {
    Mpfr frac(bits);
    const double err = evaluate_frac(split, x, bits, frac);
    const double dist = boundary_distance(frac.get());
    const bool near = dist <= err + std::ldexp(1.0, tol_log2);
    if (!near) {
      FractionalValue v;
      double conversion = 0.0;
      v.frac = to_double_below_one(frac.get(), conversion);
      v.err = err + conversion;
      v.half = mpfr_cmp_d(frac.get(), 0.5) < 0 ? +1 : -1;
      v.bits = bits;
      v.escalated = bits > start;
      return v;
    }
    if (bits >= policy.max_bits) {
      throw Error(ErrorKind::BoundaryUnresolved,
                  "f(" + std::to_string(x) + ") for f = " + f.to_string() +
                      " stays within tolerance of 0 or 1/2 mod 1 at " +
                      std::to_string(bits) + " bits (n = " + std::to_string(n) + ")");
    }
    const unsigned next = std::min(2 * bits, policy.max_bits);
    tol_log2 -= static_cast<int>(next - bits);
    bits = next;
  }
}

Phase eval_phase(const SubpolyFunction& f, std::int64_t n) {
  const std::int64_t x = checked_argument(f, n);
  const Split split = split_terms(f, x);
  Phase p;
  if (split.inexact.empty()) {
    const FractionalValue v = exact_value(split.exact_part, -48);
    p.frac = v.frac;
    p.err = v.err;
    return p;
  }
  const unsigned bits = initial_bits(split, x);
  Mpfr frac(bits);
  const double err = evaluate_frac(split, x, bits, frac);
  double conversion = 0.0;
  p.frac = to_double_below_one(frac.get(), conversion);
  p.err = err + conversion;
  return p;
}

}  // namespace hardyseq
