#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "hardyseq/error.hpp"

namespace hardyseq {

// One summand coeff * x^power * log(x)^log_power.  Coefficients and powers
// are kept as exact rationals so that decimal input survives scaling and
// differentiation without rounding.
struct Term {
  mpq_class coeff;
  mpq_class power;
  unsigned log_power = 0;

  bool operator==(const Term&) const = default;
};

// x -> a*x + b, applied to the argument before the terms are evaluated.
struct Affine {
  std::int64_t a = 1;
  std::int64_t b = 0;

  bool operator==(const Affine&) const = default;
};

// A finite sum of power/log terms composed with an affine substitution.
//
// Terms are stored canonically: sorted by (power, log_power) descending,
// like terms merged, zero coefficients dropped.  The first term is the
// leading term.  Functions produced by `derivative` may carry negative powers
// or be identically zero; everything coming out of `parse_function` has at
// least one term and nonnegative powers.
class SubpolyFunction {
 public:
  SubpolyFunction() = default;
  explicit SubpolyFunction(std::vector<Term> terms, Affine affine = {});

  const std::vector<Term>& terms() const noexcept { return terms_; }
  const Affine& affine() const noexcept { return affine_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  const Term& leading() const;

  // Smallest raw argument (before the affine map) from which every term is
  // defined and the function is monotone.
  double domain_start() const noexcept { return domain_start_; }

  // True when every term has an integer power and no log factor.
  bool is_polynomial() const;

  // Raw argument a*x + b; throws Overflow if it leaves int64.
  std::int64_t argument(std::int64_t x) const;

  // Double-precision value at parameter x (affine map applied).  Intended for
  // derivative bounds and diagnostics, never for fractional parts.
  double operator()(double x) const;

  std::string to_string() const;

  bool operator==(const SubpolyFunction& other) const {
    return terms_ == other.terms_ && affine_ == other.affine_;
  }

 private:
  std::vector<Term> terms_;
  Affine affine_;
  double domain_start_ = 1.0;
};

struct ParseOptions {
  bool allow_polynomial = false;
};

SubpolyFunction parse_function(std::string_view text, ParseOptions options = {});

SubpolyFunction affine_substitute(const SubpolyFunction& f, std::int64_t a,
                                  std::int64_t b);

// j-th derivative with respect to the parameter of the composite, i.e.
// d^j/dx^j f(a x + b) = a^j f^(j)(a x + b).
SubpolyFunction derivative(const SubpolyFunction& f, unsigned j);

// k * f, exact in the coefficients.
SubpolyFunction scale(const SubpolyFunction& f, const mpq_class& k);

struct PrecisionPolicy {
  unsigned max_bits = 4096;
  // Distances to {0, 1/2, 1} at or below err + 2^boundary_tolerance_log2
  // count as near the boundary.  The tolerance tightens by one bit for every
  // bit of working precision added during escalation.
  int boundary_tolerance_log2 = -48;

  bool operator==(const PrecisionPolicy&) const = default;
};

// {f(n)} with a certified absolute error bound.
struct FractionalValue {
  double frac = 0.0;
  double err = 0.0;
  bool near_boundary = false;
  // The value was resolved symbolically as an exact rational.
  bool exact = false;
  // Which half of [0,1) the high-precision value lies in: +1 for [0,1/2),
  // -1 for [1/2,1).  Decided at working precision, not from the rounded
  // double.
  int half = +1;
  // Working precision of the accepted evaluation (0 for exact values).
  unsigned bits = 0;
  // The evaluation needed a boundary escalation (precision doubling or
  // symbolic resolution of a value sitting on the boundary).
  bool escalated = false;

  static FractionalValue from_exact(double frac);
};

FractionalValue eval_frac(const SubpolyFunction& f, std::int64_t n,
                          const PrecisionPolicy& policy = {});

// {f(n)} at fixed precision without boundary handling, for phases of
// exponential sums.  err is the certified absolute bound.
struct Phase {
  double frac = 0.0;
  double err = 0.0;
};
Phase eval_phase(const SubpolyFunction& f, std::int64_t n);

struct GrowthInfo {
  double beta = 0.0;
  int ell = 0;
  int r = 1;
  std::int64_t bigR = 1;
};

GrowthInfo growth_exponent(const SubpolyFunction& f);

// The unique ell with x^ell < f < x^(ell+1); throws NotSubpolynomialType for
// a leading term c*x^m with integer m and no log factor.
int classify_type(const SubpolyFunction& f);

// Exact decimal rendering of a rational whose denominator is of the form
// 2^i 5^j; other rationals are printed as p/q.
std::string decimal_string(const mpq_class& q);

}  // namespace hardyseq
