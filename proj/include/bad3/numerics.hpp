#pragma once

// Exact scalar arithmetic: arbitrary-precision rationals, weight vectors,
// and exact comparison of rational powers x^(l/m) and radical expressions
// a + b*sqrt(rho) against rationals and against each other.
//
// Every inequality on a core path is decided by cross-powering integers.
// An adaptive-precision interval comparator exists for sums of rational
// powers (fractional exponents with root index > 2), with an inclusive-<=
// convention when the precision cap is reached; callers can tell from the
// `exact` flag whether the fallback fired.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bad3 {

using Rational = mpq_class;
using BigInt = mpz_class;

enum class Ord { LT = -1, EQ = 0, GT = 1 };

inline Ord ord_of_int(int c) { return c < 0 ? Ord::LT : (c > 0 ? Ord::GT : Ord::EQ); }
inline Ord invert(Ord o) { return ord_of_int(-static_cast<int>(o)); }
inline bool is_le(Ord o) { return o != Ord::GT; }
inline bool is_ge(Ord o) { return o != Ord::LT; }

// Construction helpers. mpq_class(n, d) does not canonicalize on its own,
// so raw two-argument construction goes through here.
Rational rat(long num, long den = 1);
Rational rat_of(const BigInt& num, const BigInt& den);

// Serialization: always "num/den" ("-3/7", "5/1"). Input also accepts a bare
// integer "5".
std::string rat_str(const Rational& r);
Rational rat_parse(const std::string& s);

inline int sgn(const Rational& r) { return sgn(r.get_num()); }
Rational rat_abs(const Rational& r);
BigInt rat_floor(const Rational& r);
BigInt rat_ceil(const Rational& r);
Rational rat_pow_ui(const Rational& x, unsigned long e);
// x^e for integer e (negative allowed, x != 0).
Rational rat_pow_si(const Rational& x, long e);

// Weight pair (lambda, mu), lambda >= mu >= 0, lambda + mu = 1.
// lambda = l/m in lowest terms; m is the shared root index used by all
// exact power comparisons involving q^lambda and q^mu.
struct Weights {
  Rational lambda;
  Rational mu;
  unsigned long l = 1;
  unsigned long m = 2;

  explicit Weights(const Rational& lambda_value);
  bool equal_weights() const { return lambda == mu; }
};

// a + b*sqrt(rho), rho >= 0. No squarefree reduction; evaluation is exact.
struct RadicalExpr {
  Rational a;
  Rational b;
  Rational rho;
};

// Exact ordering of x^(l/m) vs y for x, y >= 0 and exponent l/m >= 0.
// Decided as x^l vs y^m (so x^0 = 1, including at x = 0). Throws
// std::domain_error on negative inputs.
Ord cmp_pow(const Rational& x, const Rational& exponent, const Rational& y);

// Exact ordering of a + b*sqrt(rho) vs y (sign analysis + one squaring).
Ord cmp_radical(const RadicalExpr& e, const Rational& y);

// (a + b*sqrt(rho))^m, expanded back into A + B*sqrt(rho).
RadicalExpr radical_pow_ui(const RadicalExpr& e, unsigned long m);

struct CmpResult {
  Ord ord;
  bool exact;  // false: interval fallback hit its cap; ord==LT then means "<=".
};

// Ordering of x^exponent vs a + b*sqrt(rho). The exact route raises both
// sides to the m-th power once the radical side is known nonnegative; the
// interval fallback only runs for exponents beyond the work cap.
CmpResult cmp_mixed(const Rational& x, const Rational& exponent, const RadicalExpr& e);

// One term coeff * base^exp, base >= 0, exp >= 0 (coeff any sign).
struct PowTerm {
  Rational coeff;
  Rational base;
  Rational exp;
};

// Ordering of sum(terms) vs y. Exact whenever every irrational-looking term
// is in fact a perfect root; otherwise adaptive dyadic intervals, doubling
// precision up to a cap.
CmpResult cmp_power_sum(const std::vector<PowTerm>& terms, const Rational& y);

// base^exp with base >= 0, exp >= 0: closed under products and rational
// roots, exactly comparable to rationals and to each other by
// cross-powering. Used for heights of the form (q^l * A^m)^(1/m) and the
// Dani conversion constants.
struct PowExpr {
  Rational base;
  Rational exp;

  static PowExpr from_rational(const Rational& v);
  bool is_zero() const { return sgn(base) == 0 && sgn(exp) > 0; }
};

Ord cmp(const PowExpr& a, const PowExpr& b);
Ord cmp(const PowExpr& a, const Rational& y);
PowExpr pow_min(const PowExpr& a, const PowExpr& b);
PowExpr pow_mul(const PowExpr& a, const PowExpr& b);
// (value)^e for rational e >= 0.
PowExpr pow_raise(const PowExpr& a, const Rational& e);
std::string powexpr_str(const PowExpr& a);
double powexpr_approx(const PowExpr& a);

// Exponent split into (numerator, denominator) as machine words; throws if
// the exponent does not fit (the artifact never needs exponents that big).
std::pair<unsigned long, unsigned long> exponent_parts(const Rational& exponent);

}  // namespace bad3
