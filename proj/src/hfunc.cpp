#include "hardyseq/hfunc.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>

namespace hardyseq {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Syntax: return "Syntax";
    case ErrorKind::PolynomialRejected: return "PolynomialRejected";
    case ErrorKind::NotSubpolynomialType: return "NotSubpolynomialType";
    case ErrorKind::Domain: return "Domain";
    case ErrorKind::BoundaryUnresolved: return "BoundaryUnresolved";
    case ErrorKind::Constraint: return "Constraint";
    case ErrorKind::SizeGuard: return "SizeGuard";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Overflow: return "Overflow";
  }
  return "Unknown";
}

namespace {

bool is_integer(const mpq_class& q) { return q.get_den() == 1; }

std::vector<Term> canonicalize(std::vector<Term> terms) {
  for (auto& t : terms) {
    t.coeff.canonicalize();
    t.power.canonicalize();
  }
  std::sort(terms.begin(), terms.end(), [](const Term& x, const Term& y) {
    if (x.power != y.power) return x.power > y.power;
    return x.log_power > y.log_power;
  });
  std::vector<Term> out;
  for (auto& t : terms) {
    if (!out.empty() && out.back().power == t.power &&
        out.back().log_power == t.log_power) {
      out.back().coeff += t.coeff;
    } else {
      out.push_back(std::move(t));
    }
  }
  std::erase_if(out, [](const Term& t) { return t.coeff == 0; });
  return out;
}

std::vector<Term> differentiate(const std::vector<Term>& terms) {
  std::vector<Term> out;
  for (const auto& t : terms) {
    mpq_class lowered = t.power - 1;
    if (t.power != 0) out.push_back({t.coeff * t.power, lowered, t.log_power});
    if (t.log_power > 0) {
      out.push_back({t.coeff * t.log_power, lowered, t.log_power - 1});
    }
  }
  return canonicalize(std::move(out));
}

long double eval_terms(const std::vector<Term>& terms, long double x) {
  const long double lx = std::log(x);
  long double sum = 0.0L;
  for (const auto& t : terms) {
    long double v = static_cast<long double>(t.coeff.get_d()) *
                    std::pow(x, static_cast<long double>(t.power.get_d()));
    if (t.log_power > 0) v *= std::pow(lx, static_cast<long double>(t.log_power));
    sum += v;
  }
  return sum;
}

int sign_of(long double v) { return (v > 0) - (v < 0); }

// Past the last strict sign change of f' on the grid 2^j the derivative keeps
// its asymptotic sign.  Zeros (e.g. log factors at x = 1) are tolerated.
double monotone_start(const std::vector<Term>& terms) {
  const auto d = differentiate(terms);
  if (d.empty()) return 1.0;
  constexpr int kTop = 62;
  const int asymptotic = sign_of(eval_terms(d, std::ldexp(1.0L, kTop)));
  int last_bad = -1;
  for (int j = 0; j < kTop; ++j) {
    const int s = sign_of(eval_terms(d, std::ldexp(1.0L, j)));
    if (s != 0 && s != asymptotic) last_bad = j;
  }
  return last_bad < 0 ? 1.0 : std::ldexp(1.0, last_bad + 1);
}

void strip_trailing_zeros(std::string& digits) {
  const auto dot = digits.find('.');
  if (dot == std::string::npos) return;
  while (!digits.empty() && digits.back() == '0') digits.pop_back();
  if (!digits.empty() && digits.back() == '.') digits.pop_back();
}

// Recursive-descent parser over the term grammar, extended with constant
// terms, a leading sign and an optional "@ A*x+B" affine suffix.
class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  std::vector<Term> parse_sum() {
    std::vector<Term> terms;
    skip_ws();
    int sign = 1;
    if (peek() == '-' || peek() == '+') {
      sign = get() == '-' ? -1 : 1;
    }
    terms.push_back(parse_term(sign));
    for (;;) {
      skip_ws();
      const char c = peek();
      if (c != '+' && c != '-') break;
      get();
      terms.push_back(parse_term(c == '-' ? -1 : 1));
    }
    return terms;
  }

  Affine parse_affine_suffix() {
    skip_ws();
    Affine affine;
    if (peek() != '@') return affine;
    get();
    skip_ws();
    int sign = 1;
    if (peek() == '-' || peek() == '+') sign = get() == '-' ? -1 : 1;
    skip_ws();
    std::int64_t a = 1;
    if (peek() != 'x') {
      a = parse_int();
      expect('*');
    }
    expect('x');
    a *= sign;
    skip_ws();
    std::int64_t b = 0;
    if (peek() == '+' || peek() == '-') {
      const int bs = get() == '-' ? -1 : 1;
      b = bs * parse_int();
    }
    affine = {a, b};
    return affine;
  }

  void finish() {
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
  }

 private:
  Term parse_term(int sign) {
    Term term{mpq_class(sign), mpq_class(0), 0};
    bool have_coeff = false, have_x = false, have_log = false;
    for (;;) {
      skip_ws();
      if (text_.substr(pos_, 6) == "log(x)") {
        if (have_log) fail("repeated log(x) factor");
        pos_ += 6;
        have_log = true;
        term.log_power = 1;
        skip_ws();
        if (peek() == '^') {
          get();
          const auto k = parse_int();
          if (k < 0) fail("log power must be nonnegative");
          term.log_power = static_cast<unsigned>(k);
        }
      } else if (peek() == 'x') {
        if (have_x) fail("repeated x factor");
        get();
        have_x = true;
        term.power = 1;
        skip_ws();
        if (peek() == '^') {
          get();
          term.power = parse_real();
          if (term.power < 0) fail("negative powers are not admitted");
        }
      } else if (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.') {
        if (have_coeff) fail("repeated coefficient");
        have_coeff = true;
        term.coeff *= parse_real();
      } else {
        fail("expected coefficient, x or log(x)");
      }
      skip_ws();
      if (peek() != '*') break;
      get();
    }
    return term;
  }

  // Decimal with optional exponent, converted exactly to a rational.
  mpq_class parse_real() {
    skip_ws();
    bool negative = false;
    if (peek() == '-' || peek() == '+') negative = get() == '-';
    std::string digits;
    long frac_digits = 0;
    bool seen_dot = false;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        digits.push_back(c);
        if (seen_dot) ++frac_digits;
        ++pos_;
      } else if (c == '.' && !seen_dot) {
        seen_dot = true;
        ++pos_;
      } else {
        break;
      }
    }
    if (digits.empty()) fail("expected a number");
    long exponent = 0;
    if (peek() == 'e' || peek() == 'E') {
      get();
      int es = 1;
      if (peek() == '-' || peek() == '+') es = get() == '-' ? -1 : 1;
      exponent = es * parse_int();
    }
    mpz_class num(digits, 10);
    const long shift = exponent - frac_digits;
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(shift)));
    mpq_class q = shift >= 0 ? mpq_class(num * scale) : mpq_class(num, scale);
    q.canonicalize();
    return negative ? mpq_class(-q) : q;
  }

  std::int64_t parse_int() {
    skip_ws();
    bool negative = false;
    if (peek() == '-' || peek() == '+') negative = get() == '-';
    const auto start = pos_;
    std::int64_t v = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      if (v > (std::numeric_limits<std::int64_t>::max() - 9) / 10) fail("integer too large");
      v = v * 10 + (text_[pos_++] - '0');
    }
    if (pos_ == start) fail("expected an integer");
    return negative ? -v : v;
  }

  void expect(char c) {
    skip_ws();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    get();
  }
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  char get() { return text_[pos_++]; }
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorKind::Syntax,
                "parse error at offset " + std::to_string(pos_) + ": " + msg);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

std::string term_to_string(const Term& t, bool first) {
  std::string out;
  mpq_class c = t.coeff;
  if (c < 0) {
    out += first ? "-" : " - ";
    c = -c;
  } else if (!first) {
    out += " + ";
  }
  std::vector<std::string> factors;
  const bool has_x = t.power != 0;
  const bool has_log = t.log_power > 0;
  if (c != 1 || (!has_x && !has_log)) factors.push_back(decimal_string(c));
  if (has_x) {
    factors.push_back(t.power == 1 ? "x" : "x^" + decimal_string(t.power));
  }
  if (has_log) {
    factors.push_back(t.log_power == 1 ? "log(x)"
                                       : "log(x)^" + std::to_string(t.log_power));
  }
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (i) out += "*";
    out += factors[i];
  }
  return out;
}

}  // namespace

std::string decimal_string(const mpq_class& q_in) {
  mpq_class q = q_in;
  q.canonicalize();
  mpz_class den = q.get_den();
  unsigned twos = 0, fives = 0;
  while (mpz_divisible_ui_p(den.get_mpz_t(), 2)) { den /= 2; ++twos; }
  while (mpz_divisible_ui_p(den.get_mpz_t(), 5)) { den /= 5; ++fives; }
  if (den != 1) return q.get_str();
  const unsigned places = std::max(twos, fives);
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, places);
  mpz_class scaled = q.get_num() * scale / q.get_den();
  const bool negative = scaled < 0;
  if (negative) scaled = -scaled;
  std::string digits = scaled.get_str();
  if (places > 0) {
    if (digits.size() <= places) digits.insert(0, places + 1 - digits.size(), '0');
    digits.insert(digits.size() - places, ".");
    strip_trailing_zeros(digits);
  }
  return negative ? "-" + digits : digits;
}

SubpolyFunction::SubpolyFunction(std::vector<Term> terms, Affine affine)
    : terms_(canonicalize(std::move(terms))), affine_(affine) {
  if (affine_.a < 1) throw Error(ErrorKind::Domain, "affine factor a must be >= 1");
  domain_start_ = monotone_start(terms_);
}

const Term& SubpolyFunction::leading() const {
  if (terms_.empty()) throw Error(ErrorKind::InvalidArgument, "zero function has no leading term");
  return terms_.front();
}

bool SubpolyFunction::is_polynomial() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) {
    return is_integer(t.power) && t.log_power == 0;
  });
}

std::int64_t SubpolyFunction::argument(std::int64_t x) const {
  std::int64_t ax = 0, out = 0;
  if (__builtin_mul_overflow(affine_.a, x, &ax) ||
      __builtin_add_overflow(ax, affine_.b, &out)) {
    throw Error(ErrorKind::Overflow, "affine argument overflows int64");
  }
  return out;
}

double SubpolyFunction::operator()(double x) const {
  const long double arg = static_cast<long double>(affine_.a) * x + affine_.b;
  return static_cast<double>(eval_terms(terms_, arg));
}

std::string SubpolyFunction::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < terms_.size(); ++i) out += term_to_string(terms_[i], i == 0);
  if (affine_ != Affine{}) {
    out += " @ ";
    if (affine_.a != 1) out += std::to_string(affine_.a) + "*";
    out += "x";
    if (affine_.b > 0) out += "+" + std::to_string(affine_.b);
    if (affine_.b < 0) out += "-" + std::to_string(-affine_.b);
  }
  return out;
}

SubpolyFunction parse_function(std::string_view text, ParseOptions options) {
  Parser parser(text);
  auto terms = parser.parse_sum();
  const Affine affine = parser.parse_affine_suffix();
  parser.finish();
  SubpolyFunction f(std::move(terms), affine);
  if (f.is_zero()) throw Error(ErrorKind::InvalidArgument, "function is identically zero");
  if (f.is_polynomial() && !options.allow_polynomial) {
    throw Error(ErrorKind::PolynomialRejected,
                "polynomial functions are rejected (use allow-polynomial)");
  }
  return f;
}

SubpolyFunction affine_substitute(const SubpolyFunction& f, std::int64_t a, std::int64_t b) {
  if (a < 1) throw Error(ErrorKind::Domain, "affine factor a must be >= 1");
  if (static_cast<long double>(a) * f.domain_start() + b < 1.0L) {
    throw Error(ErrorKind::Domain, "a*domain_start + b must be >= 1");
  }
  const Affine& in = f.affine();
  std::int64_t na = 0, ab = 0, nb = 0;
  if (__builtin_mul_overflow(in.a, a, &na) || __builtin_mul_overflow(in.a, b, &ab) ||
      __builtin_add_overflow(ab, in.b, &nb)) {
    throw Error(ErrorKind::Overflow, "affine composition overflows int64");
  }
  return SubpolyFunction(f.terms(), Affine{na, nb});
}

SubpolyFunction derivative(const SubpolyFunction& f, unsigned j) {
  if (j > 16) throw Error(ErrorKind::InvalidArgument, "derivative order is limited to 16");
  std::vector<Term> terms = f.terms();
  for (unsigned i = 0; i < j; ++i) terms = differentiate(terms);
  mpz_class chain;
  mpz_pow_ui(chain.get_mpz_t(), mpz_class(static_cast<long>(f.affine().a)).get_mpz_t(), j);
  for (auto& t : terms) t.coeff *= chain;
  return SubpolyFunction(std::move(terms), f.affine());
}

SubpolyFunction scale(const SubpolyFunction& f, const mpq_class& k) {
  std::vector<Term> terms = f.terms();
  for (auto& t : terms) t.coeff *= k;
  return SubpolyFunction(std::move(terms), f.affine());
}

GrowthInfo growth_exponent(const SubpolyFunction& f) {
  const Term& lead = f.leading();
  GrowthInfo g;
  g.beta = lead.power.get_d();
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), lead.power.get_num_mpz_t(), lead.power.get_den_mpz_t());
  g.ell = static_cast<int>(fl.get_si());
  // r = ceil(beta + 1/2), computed exactly.
  const mpq_class shifted = lead.power + mpq_class(1, 2);
  mpz_class ce;
  mpz_cdiv_q(ce.get_mpz_t(), shifted.get_num_mpz_t(), shifted.get_den_mpz_t());
  g.r = std::max(1, static_cast<int>(ce.get_si()));
  g.bigR = std::int64_t{1} << (g.r - 1);
  return g;
}

int classify_type(const SubpolyFunction& f) {
  const Term& lead = f.leading();
  if (is_integer(lead.power) && lead.log_power == 0) {
    throw Error(ErrorKind::NotSubpolynomialType,
                "leading term is an integer monomial; no type x^{l+} exists");
  }
  return growth_exponent(f).ell;
}

FractionalValue FractionalValue::from_exact(double frac) {
  FractionalValue v;
  v.frac = frac;
  v.exact = true;
  v.half = frac < 0.5 ? +1 : -1;
  return v;
}

}  // namespace hardyseq
