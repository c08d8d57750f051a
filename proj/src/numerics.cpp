#include "bad3/numerics.hpp"

#include <algorithm>

namespace bad3 {

namespace {

constexpr unsigned long kPowWorkCap = 512;   // exponent size beyond which cmp_mixed refuses the closed form
constexpr unsigned long kPrecStart = 64;
constexpr unsigned long kPrecCap = 4096;

}  // namespace

Rational rat(long num, long den) {
  if (den == 0) throw std::domain_error("rat: zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Rational rat_of(const BigInt& num, const BigInt& den) {
  if (sgn(den) == 0) throw std::domain_error("rat_of: zero denominator");
  Rational r(num);
  r /= Rational(den);
  return r;
}

std::string rat_str(const Rational& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Rational rat_parse(const std::string& s) {
  auto bad = [&]() { return std::invalid_argument("rat_parse: malformed rational '" + s + "'"); };
  std::string t;
  for (char c : s)
    if (!isspace(static_cast<unsigned char>(c))) t += c;
  if (t.empty()) throw bad();
  std::string num = t, den = "1";
  if (auto slash = t.find('/'); slash != std::string::npos) {
    num = t.substr(0, slash);
    den = t.substr(slash + 1);
    if (num.empty() || den.empty() || den.find('/') != std::string::npos) throw bad();
  }
  BigInt n, d;
  if (n.set_str(num, 10) != 0 || d.set_str(den, 10) != 0) throw bad();
  if (sgn(d) <= 0) throw bad();
  return rat_of(n, d);
}

Rational rat_abs(const Rational& r) { return sgn(r) < 0 ? Rational(-r) : r; }

BigInt rat_floor(const Rational& r) {
  BigInt q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
  return q;
}

BigInt rat_ceil(const Rational& r) {
  BigInt q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
  return q;
}

Rational rat_pow_ui(const Rational& x, unsigned long e) {
  BigInt n, d;
  mpz_pow_ui(n.get_mpz_t(), x.get_num().get_mpz_t(), e);
  mpz_pow_ui(d.get_mpz_t(), x.get_den().get_mpz_t(), e);
  Rational r(n);
  r /= Rational(d);
  return r;
}

Rational rat_pow_si(const Rational& x, long e) {
  if (e >= 0) return rat_pow_ui(x, static_cast<unsigned long>(e));
  if (sgn(x) == 0) throw std::domain_error("rat_pow_si: zero base, negative exponent");
  return 1 / rat_pow_ui(x, static_cast<unsigned long>(-e));
}

std::pair<unsigned long, unsigned long> exponent_parts(const Rational& exponent) {
  if (sgn(exponent) < 0) throw std::domain_error("exponent_parts: negative exponent");
  if (!exponent.get_num().fits_ulong_p() || !exponent.get_den().fits_ulong_p())
    throw std::domain_error("exponent_parts: exponent out of range");
  return {exponent.get_num().get_ui(), exponent.get_den().get_ui()};
}

Weights::Weights(const Rational& lambda_value) : lambda(lambda_value), mu(1 - lambda_value) {
  if (sgn(mu) < 0 || lambda < mu)
    throw std::domain_error("Weights: need lambda >= mu >= 0 with lambda + mu = 1");
  auto [ln, lm] = exponent_parts(lambda);
  l = ln;
  m = lm;
}

Ord cmp_pow(const Rational& x, const Rational& exponent, const Rational& y) {
  if (sgn(x) < 0 || sgn(y) < 0) throw std::domain_error("cmp_pow: negative base or comparand");
  auto [l, m] = exponent_parts(exponent);
  return ord_of_int(cmp(rat_pow_ui(x, l), rat_pow_ui(y, m)));
}

Ord cmp_radical(const RadicalExpr& e, const Rational& y) {
  if (sgn(e.rho) < 0) throw std::domain_error("cmp_radical: negative radicand");
  Rational t = y - e.a;  // compare b*sqrt(rho) vs t
  int sb = sgn(e.rho) == 0 ? 0 : sgn(e.b);
  int st = sgn(t);
  if (sb == 0) return ord_of_int(-st);
  Rational sq = e.b * e.b * e.rho;
  if (sb > 0) {
    if (st <= 0) return Ord::GT;
    return ord_of_int(cmp(sq, Rational(t * t)));
  }
  if (st >= 0) return Ord::LT;
  return ord_of_int(-cmp(sq, Rational(t * t)));
}

RadicalExpr radical_pow_ui(const RadicalExpr& e, unsigned long m) {
  Rational a(1), b(0);
  for (unsigned long i = 0; i < m; ++i) {
    Rational na = a * e.a + b * e.b * e.rho;
    Rational nb = a * e.b + b * e.a;
    a = na;
    b = nb;
  }
  return {a, b, e.rho};
}

namespace {

// Dyadic enclosure [lo, lo + 2^-prec] of x^(l/m), x >= 0, as exact rationals.
// Uses floor((x^l * 2^(prec*m))^(1/m)) = mpz_root(floor(x^l * 2^(prec*m)), m).
struct Enclosure {
  Rational lo, hi;
};

Enclosure enclose_pow(const Rational& x, unsigned long l, unsigned long m, unsigned long prec) {
  Rational xl = rat_pow_ui(x, l);
  BigInt scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 2, prec * m);
  BigInt scaled = rat_floor(Rational(xl * Rational(scale)));
  BigInt root;
  mpz_root(root.get_mpz_t(), scaled.get_mpz_t(), m);
  BigInt denom;
  mpz_ui_pow_ui(denom.get_mpz_t(), 2, prec);
  Rational lo = rat_of(root, denom);
  Rational hi = rat_of(root + 1, denom);
  return {lo, hi};
}

// x^(l/m) as an exact rational if x^l is a perfect m-th power.
bool exact_pow(const Rational& x, unsigned long l, unsigned long m, Rational* out) {
  Rational xl = rat_pow_ui(x, l);
  BigInt rn, rd;
  bool en = mpz_root(rn.get_mpz_t(), xl.get_num().get_mpz_t(), m) != 0;
  bool ed = mpz_root(rd.get_mpz_t(), xl.get_den().get_mpz_t(), m) != 0;
  if (!en || !ed) return false;
  *out = rat_of(rn, rd);
  return true;
}

}  // namespace

CmpResult cmp_mixed(const Rational& x, const Rational& exponent, const RadicalExpr& e) {
  if (sgn(x) < 0) throw std::domain_error("cmp_mixed: negative base");
  Ord rad_sign = cmp_radical(e, Rational(0));
  if (rad_sign == Ord::LT) return {Ord::GT, true};  // lhs >= 0 > rhs
  auto [l, m] = exponent_parts(exponent);
  if (l <= kPowWorkCap && m <= kPowWorkCap) {
    // Both sides nonnegative: compare m-th powers, x^l vs (a + b*sqrt(rho))^m.
    Rational lhs = rat_pow_ui(x, l);
    RadicalExpr rm = radical_pow_ui(e, m);
    return {invert(cmp_radical(rm, lhs)), true};
  }
  // Interval refinement; undecided at the cap collapses to inclusive <=.
  for (unsigned long prec = kPrecStart; prec <= kPrecCap; prec *= 2) {
    Enclosure lhs = enclose_pow(x, l, m, prec);
    Enclosure root = enclose_pow(e.rho, 1, 2, prec);
    Rational rlo = e.a, rhi = e.a;
    if (sgn(e.b) >= 0) {
      rlo += e.b * root.lo;
      rhi += e.b * root.hi;
    } else {
      rlo += e.b * root.hi;
      rhi += e.b * root.lo;
    }
    if (lhs.hi < rlo) return {Ord::LT, true};
    if (lhs.lo > rhi) return {Ord::GT, true};
  }
  return {Ord::LT, false};
}

CmpResult cmp_power_sum(const std::vector<PowTerm>& terms, const Rational& y) {
  Rational exact_sum(0);
  std::vector<PowTerm> rest;
  for (const auto& t : terms) {
    if (sgn(t.base) < 0) throw std::domain_error("cmp_power_sum: negative base");
    auto [l, m] = exponent_parts(t.exp);
    Rational value;
    if (m == 1 || exact_pow(t.base, l, m, &value)) {
      if (m == 1) value = rat_pow_ui(t.base, l);
      exact_sum += t.coeff * value;
    } else {
      rest.push_back(t);
    }
  }
  if (rest.empty()) return {ord_of_int(cmp(exact_sum, y)), true};
  for (unsigned long prec = kPrecStart; prec <= kPrecCap; prec *= 2) {
    Rational lo = exact_sum, hi = exact_sum;
    for (const auto& t : rest) {
      auto [l, m] = exponent_parts(t.exp);
      Enclosure en = enclose_pow(t.base, l, m, prec);
      if (sgn(t.coeff) >= 0) {
        lo += t.coeff * en.lo;
        hi += t.coeff * en.hi;
      } else {
        lo += t.coeff * en.hi;
        hi += t.coeff * en.lo;
      }
    }
    if (hi < y) return {Ord::LT, true};
    if (lo > y) return {Ord::GT, true};
  }
  return {Ord::LT, false};
}

PowExpr PowExpr::from_rational(const Rational& v) {
  if (sgn(v) < 0) throw std::domain_error("PowExpr: negative value");
  return {v, Rational(1)};
}

Ord cmp(const PowExpr& a, const PowExpr& b) {
  auto [la, ma] = exponent_parts(a.exp);
  auto [lb, mb] = exponent_parts(b.exp);
  // Raise both values to the power ma*mb (both nonnegative, strictly monotone).
  Rational lhs = rat_pow_ui(a.base, la * mb);
  Rational rhs = rat_pow_ui(b.base, lb * ma);
  return ord_of_int(cmp(lhs, rhs));
}

Ord cmp(const PowExpr& a, const Rational& y) {
  if (sgn(y) < 0) return Ord::GT;
  return cmp_pow(a.base, a.exp, y);
}

PowExpr pow_min(const PowExpr& a, const PowExpr& b) { return cmp(a, b) == Ord::GT ? b : a; }

PowExpr pow_mul(const PowExpr& a, const PowExpr& b) {
  auto [la, ma] = exponent_parts(a.exp);
  auto [lb, mb] = exponent_parts(b.exp);
  unsigned long w = ma * mb;
  Rational base = rat_pow_ui(a.base, la * mb) * rat_pow_ui(b.base, lb * ma);
  Rational exp = rat(1, static_cast<long>(w));
  return {base, exp};
}

PowExpr pow_raise(const PowExpr& a, const Rational& e) {
  if (sgn(e) < 0) throw std::domain_error("pow_raise: negative exponent");
  return {a.base, Rational(a.exp * e)};
}

std::string powexpr_str(const PowExpr& a) {
  auto [l, m] = exponent_parts(a.exp);
  Rational value;
  if (exact_pow(a.base, l, m, &value)) return rat_str(value);
  return "(" + rat_str(a.base) + ")^(" + std::to_string(l) + "/" + std::to_string(m) + ")";
}

double powexpr_approx(const PowExpr& a) {
  auto [l, m] = exponent_parts(a.exp);
  Enclosure en = enclose_pow(a.base, l, m, 64);
  return en.lo.get_d();
}

}  // namespace bad3
