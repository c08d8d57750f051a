#include "bad3/diophantine.hpp"

#include <algorithm>
#include <tuple>

namespace bad3 {

namespace {

BigInt bigint_pow(const BigInt& x, unsigned long e) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), x.get_mpz_t(), e);
  return r;
}

// floor(x^(1/n)) for x >= 0: integer k <= x^(1/n) iff k^n <= floor(x).
BigInt floor_root(const Rational& x, unsigned long n) {
  if (sgn(x) < 0) throw std::domain_error("floor_root: negative");
  BigInt fl = rat_floor(x);
  BigInt r;
  mpz_root(r.get_mpz_t(), fl.get_mpz_t(), n);
  return r;
}

// Solutions b of b*r = -a*p (mod q) form b0 + step*Z; no solution -> false.
struct BResidue {
  BigInt b0;
  BigInt step;
};

bool solve_b_residue(const BigInt& a, const BigInt& p, const BigInt& r, const BigInt& q, BResidue* out) {
  BigInt rq = r % q;
  if (sgn(rq) < 0) rq += q;
  BigInt target = (-(a * p)) % q;
  if (sgn(target) < 0) target += q;
  BigInt g;
  mpz_gcd(g.get_mpz_t(), rq.get_mpz_t(), q.get_mpz_t());  // gcd(0, q) = q
  if (!mpz_divisible_p(target.get_mpz_t(), g.get_mpz_t())) return false;
  BigInt qq = q / g;
  if (qq == 1) {
    out->b0 = 0;
    out->step = 1;
    return true;
  }
  BigInt rr = rq / g, tt = (target / g) % qq, inv;
  if (mpz_invert(inv.get_mpz_t(), rr.get_mpz_t(), qq.get_mpz_t()) == 0)
    throw std::logic_error("solve_b_residue: inverse must exist");
  out->b0 = (tt * inv) % qq;
  out->step = qq;
  return true;
}

BigInt ceil_div(const BigInt& a, const BigInt& b) {
  BigInt q;
  mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

// Smallest solution >= lo of the residue class.
BigInt first_solution_at_least(const BResidue& res, const BigInt& lo) {
  return res.b0 + res.step * ceil_div(BigInt(lo - res.b0), res.step);
}

// Nearest solution to rational t (either neighbor may be the true nearest).
std::vector<BigInt> solutions_near(const BResidue& res, const Rational& t) {
  BigInt k = rat_floor(Rational((t - Rational(res.b0)) / Rational(res.step) + rat(1, 2)));
  BigInt b = res.b0 + res.step * k;
  return {b - res.step, b, b + res.step};
}

// |t| <= q^(u/m) exactly (t rational).
bool abs_le_pow(const Rational& t, const BigInt& q, unsigned long u, unsigned long m) {
  return rat_pow_ui(rat_abs(t), m) <= Rational(bigint_pow(q, u));
}

// |t| <= q^(u/m) + sqrt(rho) exactly. Fast paths: |t| <= q^(u/m) certainly
// fits, |t| > q^(u/m) + ceil(sqrt(rho)) certainly does not; only the band in
// between needs the radical comparison.
bool abs_le_pow_plus_sqrt(const Rational& t, const BigInt& q, unsigned long u, unsigned long m,
                          const Rational& rho) {
  Rational at = rat_abs(t);
  Rational atm = rat_pow_ui(at, m);
  Rational qu = Rational(bigint_pow(q, u));
  if (atm <= qu) return true;
  BigInt s;  // ceil(sqrt(rho)) via isqrt of ceil(rho)
  BigInt rc = rat_ceil(rho);
  mpz_sqrt(s.get_mpz_t(), rc.get_mpz_t());
  Rational slack = at - Rational(s + 1);
  if (sgn(slack) > 0 && rat_pow_ui(slack, m) > qu) return false;
  // q^(u/m) >= |t| - sqrt(rho)
  CmpResult c = cmp_mixed(Rational(q), rat_of(BigInt(u), BigInt(m)), RadicalExpr{at, rat(-1), rho});
  return c.ord != Ord::LT;
}

// q^power * |val|^m < eps^m  <=>  |val| < eps / q^(power/m), strict.
bool within_width(const Rational& val, const BigInt& q, unsigned long power, unsigned long m,
                  const Rational& eps) {
  return Rational(bigint_pow(q, power)) * rat_pow_ui(rat_abs(val), m) < rat_pow_ui(eps, m);
}

void require_dim3(const Point& x, const char* what) {
  if (x.size() != 3) throw std::domain_error(std::string(what) + ": need dimension 3");
}

}  // namespace

bool IntVec::operator<(const IntVec& o) const {
  return std::tie(q, r, p) < std::tie(o.q, o.r, o.p);
}

void StageParams::validate() const {
  if (sgn(rho0) <= 0 || rho0 > 1) throw std::domain_error("StageParams: rho0 must be in (0,1]");
  if (kappa <= 1) throw std::domain_error("StageParams: kappa must be > 1");
  if (sgn(beta) <= 0 || beta >= 1) throw std::domain_error("StageParams: beta must be in (0,1)");
  if (sgn(gamma) <= 0) throw std::domain_error("StageParams: gamma must be > 0");
  if (sgn(epsilon) <= 0) throw std::domain_error("StageParams: epsilon must be > 0");
  if (q_max < 1) throw std::domain_error("StageParams: q_max must be >= 1");
  if (k_max < 1) throw std::domain_error("StageParams: k_max must be >= 1");
  if (R * beta <= 1) throw std::domain_error("StageParams: need R > 1/beta");
  if (mode == StageMode::desk) return;
  if (R < 4 / beta) throw std::domain_error("StageParams: paper mode needs R >= 4/beta");
  Rational k4 = rat_pow_ui(kappa, 4);
  if (R < 10000000 * k4) throw std::domain_error("StageParams: paper mode needs R >= 10^7 kappa^4");
  if (epsilon > rat(1, 100) / (kappa * kappa) / rat_pow_ui(R, 10) * rho0)
    throw std::domain_error("StageParams: paper mode needs epsilon <= 10^-2 kappa^-2 R^-10 rho0");
  // (R^gamma - 1)^-1 <= (beta^2/2)^gamma  <=>  R^gamma - (2/beta^2)^gamma >= 1
  std::vector<PowTerm> terms = {{rat(1), R, gamma}, {rat(-1), Rational(2 / (beta * beta)), gamma}};
  CmpResult c = cmp_power_sum(terms, rat(1));
  if (!c.exact) throw std::domain_error("StageParams: geometric budget bound undecided");
  if (c.ord == Ord::LT)
    throw std::domain_error("StageParams: paper mode needs (R^gamma - 1)^-1 <= (beta^2/2)^gamma");
}

Rational StageParams::H(long n) const {
  if (n < 0) throw std::domain_error("StageParams::H: negative stage");
  return 3 * epsilon * kappa / rho0 * rat_pow_ui(R, static_cast<unsigned long>(n));
}

bool initial_ball_in_kappa_box(const Ball& b0, const StageParams& sp) {
  for (const auto& c : b0.center)
    if (rat_abs(c) + b0.radius > sp.kappa - 1) return false;
  return true;
}

bool delta_contains(const IntVec& v, const Rational& eps, const Weights& w, const Point& x) {
  require_dim3(x, "delta_contains");
  Rational pq = rat_of(v.p, v.q), rq = rat_of(v.r, v.q);
  Rational f = x[0] - pq - x[2] * (x[1] - rq);
  Rational g = x[1] - rq;
  return within_width(f, v.q, w.m + w.l, w.m, eps) && within_width(g, v.q, 2 * w.m - w.l, w.m, eps);
}

std::function<bool(const Point&)> target_oracle(const Rational& eps, const Weights& w, long q_bound) {
  if (sgn(eps) <= 0) throw std::domain_error("target_oracle: eps must be > 0");
  return [eps, w, q_bound](const Point& x) {
    require_dim3(x, "target_oracle");
    for (long qi = 1; qi <= q_bound; ++qi) {
      BigInt q(qi);
      Rational qy = Rational(q) * x[1];
      // |qy - r| < eps/q^mu <= eps forces the r range; likewise for p.
      for (BigInt r = rat_ceil(Rational(qy - eps)); r <= rat_floor(Rational(qy + eps)); ++r) {
        Rational t = Rational(q) * x[0] - x[2] * (qy - Rational(r));
        for (BigInt p = rat_ceil(Rational(t - eps)); p <= rat_floor(Rational(t + eps)); ++p) {
          if (delta_contains(IntVec{p, r, q}, eps, w, x)) return false;
        }
      }
    }
    return true;
  };
}

Witness minkowski_witness(const Rational& z, const IntVec& v, const Weights& w) {
  if (sgn(v.q) <= 0) throw std::domain_error("minkowski_witness: q must be >= 1");
  BigInt a_bound = floor_root(Rational(bigint_pow(v.q, w.l)), w.m);  // floor(q^lambda)
  for (BigInt A(0); A <= a_bound; ++A) {
    for (int side = 0; side < (A == 0 ? 1 : 2); ++side) {
      BigInt a = side == 0 ? A : BigInt(-A);
      BResidue res;
      if (!solve_b_residue(a, v.p, v.r, v.q, &res)) continue;
      // candidates closest to -z*a, nearer first, positive side on ties
      std::vector<BigInt> cands = solutions_near(res, Rational(-z * Rational(a)));
      std::sort(cands.begin(), cands.end(), [&](const BigInt& x, const BigInt& y) {
        Rational dx = rat_abs(Rational(Rational(x) + z * Rational(a)));
        Rational dy = rat_abs(Rational(Rational(y) + z * Rational(a)));
        if (dx != dy) return dx < dy;
        return x > y;
      });
      for (const BigInt& b : cands) {
        if (sgn(a) == 0 && sgn(b) == 0) continue;
        if (!abs_le_pow(Rational(Rational(b) + z * Rational(a)), v.q, w.m - w.l, w.m)) continue;
        BigInt num = a * v.p + b * v.r;
        if (!mpz_divisible_p(num.get_mpz_t(), v.q.get_mpz_t())) throw std::logic_error("bad residue");
        return Witness{a, b, BigInt(-num / v.q)};
      }
    }
  }
  throw std::runtime_error("minkowski_witness: witness search exhausted");
}

std::vector<Witness> witness_set(const Ball& B, const IntVec& v, const Weights& w) {
  require_dim3(B.center, "witness_set");
  const Rational z = B.z();
  const Rational rho = B.radius;
  BigInt a_bound = floor_root(Rational(bigint_pow(v.q, w.l)), w.m);
  // bracket for the b window around -z*a: q^mu + sqrt(rho) in [Fmu + s, Fmu + s + 2]
  BigInt fmu = floor_root(Rational(bigint_pow(v.q, w.m - w.l)), w.m);
  BigInt s = floor_root(rho, 2);
  std::vector<Witness> out;
  for (BigInt a = -a_bound; a <= a_bound; ++a) {
    BResidue res;
    if (!solve_b_residue(a, v.p, v.r, v.q, &res)) continue;
    Rational c0 = -z * Rational(a);
    auto fits = [&](const BigInt& b) {
      return abs_le_pow_plus_sqrt(Rational(Rational(b) + z * Rational(a)), v.q, w.m - w.l, w.m, rho);
    };
    BigInt hi = rat_floor(c0) + fmu + s + 3;
    while (!fits(hi) && hi >= rat_floor(c0) - fmu - s - 3) --hi;
    BigInt lo = rat_ceil(c0) - fmu - s - 3;
    while (!fits(lo) && lo <= hi) ++lo;
    for (BigInt b = first_solution_at_least(res, lo); b <= hi; b += res.step) {
      if (sgn(a) == 0 && sgn(b) == 0) continue;
      if (!fits(b)) continue;  // window bracket is a superset
      BigInt num = a * v.p + b * v.r;
      out.push_back(Witness{a, b, BigInt(-num / v.q)});
    }
  }
  return out;
}

namespace {

struct MinmaxScan {
  bool found = false;
  bool aborted = false;  // value provably below the abort floor
  Rational best;
  Witness argmin{};
};

// min over the witness set of max{|a|, |b + za|}, scanning |a| upward with an
// early exit; with an abort floor the scan stops as soon as the minimum is
// provably below it.
MinmaxScan scan_minmax(const Ball& B, const IntVec& v, const Weights& w,
                       const Rational* abort_floor) {
  const Rational z = B.z();
  const Rational rho = B.radius;
  BigInt a_bound = floor_root(Rational(bigint_pow(v.q, w.l)), w.m);
  MinmaxScan out;
  for (BigInt A(0); A <= a_bound; ++A) {
    if (out.found && Rational(A) > out.best) break;  // max >= |a| can no longer improve
    for (int side = 0; side < (A == 0 ? 1 : 2); ++side) {
      BigInt a = side == 0 ? BigInt(-A) : A;
      if (A == 0) a = 0;
      BResidue res;
      if (!solve_b_residue(a, v.p, v.r, v.q, &res)) continue;
      for (const BigInt& b : solutions_near(res, Rational(-z * Rational(a)))) {
        if (sgn(a) == 0 && sgn(b) == 0) continue;
        Rational t = Rational(b) + z * Rational(a);
        Rational mm = std::max(Rational(A), rat_abs(t));
        if (out.found && mm >= out.best) continue;
        if (!abs_le_pow_plus_sqrt(t, v.q, w.m - w.l, w.m, rho)) continue;
        out.found = true;
        out.best = mm;
        BigInt num = a * v.p + b * v.r;
        out.argmin = Witness{a, b, BigInt(-num / v.q)};
        if (abort_floor && Rational(v.q) * out.best < *abort_floor) {
          out.aborted = true;
          return out;
        }
      }
    }
  }
  return out;
}

}  // namespace

std::optional<Rational> height_unless_below(const Ball& B, const IntVec& v, const Weights& w,
                                            const Rational& floor_bound) {
  require_dim3(B.center, "height_unless_below");
  MinmaxScan scan = scan_minmax(B, v, w, &floor_bound);
  if (scan.aborted) return std::nullopt;
  if (!scan.found) throw std::runtime_error("height_unless_below: witness search exhausted");
  Rational h = Rational(v.q) * scan.best;
  if (h < floor_bound) return std::nullopt;
  return h;
}

SelectedWitness select_witness(const Ball& B, const IntVec& v, const Weights& w) {
  require_dim3(B.center, "select_witness");
  const Rational z = B.z();
  const Rational rho = B.radius;
  BigInt a_bound = floor_root(Rational(bigint_pow(v.q, w.l)), w.m);
  auto in_cap = [&](const Rational& t) {
    return abs_le_pow_plus_sqrt(t, v.q, w.m - w.l, w.m, rho);
  };

  // Pass 1: the optimal value M = min over the witness set of max{|a|, |b+za|}.
  MinmaxScan scan = scan_minmax(B, v, w, nullptr);
  if (!scan.found) throw std::runtime_error("select_witness: witness search exhausted");
  Rational best = scan.best;
  Witness fallback = scan.argmin;

  // Pass 2: lexicographically smallest (|a|, a, b, c) attaining M.
  constexpr long kLexScanCap = 100000;
  for (BigInt A(0); A <= a_bound && Rational(A) <= best; ++A) {
    for (int side = 0; side < (A == 0 ? 1 : 2); ++side) {
      BigInt a = side == 0 ? BigInt(-A) : A;
      if (A == 0) a = 0;
      BResidue res;
      if (!solve_b_residue(a, v.p, v.r, v.q, &res)) continue;
      Rational c0 = -z * Rational(a);
      if (Rational(A) == best) {
        // any solution with |b + za| <= M ties at M; smallest such b wins
        BigInt lo = rat_ceil(Rational(c0 - best));
        BigInt b = first_solution_at_least(res, lo);
        long scanned = 0;
        for (; Rational(b) <= c0 + best && scanned < kLexScanCap; b += res.step, ++scanned) {
          if (sgn(a) == 0 && sgn(b) == 0) continue;
          Rational t = Rational(b) + z * Rational(a);
          if (!in_cap(t)) continue;
          BigInt num = a * v.p + b * v.r;
          return SelectedWitness{Witness{a, b, BigInt(-num / v.q)}, best, Rational(Rational(v.q) * best)};
        }
        if (scanned >= kLexScanCap) return SelectedWitness{fallback, best, Rational(Rational(v.q) * best)};
      } else {
        // |a| < M: must hit |b + za| = M exactly
        for (int dir = -1; dir <= 1; dir += 2) {
          Rational bb = c0 + dir * best;
          if (bb.get_den() != 1) continue;
          BigInt b = bb.get_num();
          BigInt rem = (b - res.b0) % res.step;
          if (sgn(rem) != 0) continue;
          if (sgn(a) == 0 && sgn(b) == 0) continue;
          Rational t = Rational(b) + z * Rational(a);
          if (!in_cap(t)) continue;
          BigInt num = a * v.p + b * v.r;
          return SelectedWitness{Witness{a, b, BigInt(-num / v.q)}, best, Rational(Rational(v.q) * best)};
        }
      }
    }
  }
  return SelectedWitness{fallback, best, Rational(Rational(v.q) * best)};
}

Rational height_of(const Ball& B, const IntVec& v, const Weights& w) {
  return select_witness(B, v, w).height;
}

std::optional<long> stage_of_ball(const Ball& B, const StageParams& sp) {
  const Rational& rho = B.radius;
  if (rho > sp.rho0) return std::nullopt;
  if (rho == sp.rho0) return 0;
  Rational top = sp.rho0;
  long n = 0;
  while (rho <= top / sp.R) {
    top /= sp.R;
    ++n;
  }
  if (n == 0) return std::nullopt;                 // between beta-free level 0 and stage 1
  if (rho > sp.beta * top) return n;               // beta R^-n rho0 < rho <= R^-n rho0
  return std::nullopt;                             // gap below stage n
}

namespace {

// Integer q-window of the stage-n family: [ceil(H_n^{1/(1+lambda)}), floor(2 H_{n+1})].
struct QWindow {
  BigInt lo;
  BigInt hi;  // un-truncated
};

QWindow family_q_window(long n, const StageParams& sp) {
  const Weights& w = sp.weights;
  Rational H = sp.H(n);
  Rational Hm = rat_pow_ui(H, w.m);
  BigInt lo = floor_root(Hm, w.m + w.l);
  if (rat_pow_ui(Rational(lo), w.m + w.l) < Hm) ++lo;
  if (lo < 1) lo = 1;
  BigInt hi = rat_floor(Rational(2 * sp.H(n + 1)));
  return {lo, hi};
}

// (p, r) box: |p| <= q(kappa-1) + kappa*eps, |r| <= q(kappa-1) + eps.
struct PRBox {
  BigInt p_lo, p_hi, r_lo, r_hi;
};

PRBox kappa_box(const BigInt& q, const StageParams& sp) {
  Rational base = Rational(q) * (sp.kappa - 1);
  BigInt pb = rat_floor(Rational(base + sp.kappa * sp.epsilon));
  BigInt rb = rat_floor(Rational(base + sp.epsilon));
  return {-pb, pb, -rb, rb};
}

VFamily collect_family(const Ball& B, long n, const StageParams& sp,
                       const std::function<PRBox(const BigInt&)>& box_fn) {
  QWindow qw = family_q_window(n, sp);
  VFamily fam;
  fam.truncated = qw.hi > sp.q_max;
  BigInt q_hi = fam.truncated ? BigInt(sp.q_max) : qw.hi;
  Rational H = sp.H(n), H2 = 2 * sp.H(n + 1);
  for (BigInt q = qw.lo; q <= q_hi; ++q) {
    PRBox box = box_fn(q);
    PRBox clip = kappa_box(q, sp);
    BigInt r_lo = std::max(box.r_lo, clip.r_lo), r_hi = std::min(box.r_hi, clip.r_hi);
    BigInt p_lo = std::max(box.p_lo, clip.p_lo), p_hi = std::min(box.p_hi, clip.p_hi);
    for (BigInt r = r_lo; r <= r_hi; ++r) {
      for (BigInt p = p_lo; p <= p_hi; ++p) {
        IntVec v{p, r, q};
        auto h = height_unless_below(B, v, sp.weights, H);
        if (h && *h <= H2) fam.vs.push_back(v);
      }
    }
  }
  return fam;
}

}  // namespace

VFamily v_family(const Ball& B, long n, const StageParams& sp) {
  require_dim3(B.center, "v_family");
  return collect_family(B, n, sp, [&](const BigInt& q) { return kappa_box(q, sp); });
}

VFamily v_family_near(const Ball& B, long n, const StageParams& sp, const Ball& window) {
  require_dim3(B.center, "v_family_near");
  require_dim3(window.center, "v_family_near");
  const Rational cx = window.center[0], cy = window.center[1], cz = window.center[2];
  const Rational rho = window.radius, eps = sp.epsilon;
  Rational zmax = rat_abs(cz) + rho;
  return collect_family(B, n, sp, [&](const BigInt& q) {
    // danger zone meets `window` forces |r/q - cy| <= rho + eps and
    // |p/q - cx| <= rho + zmax*eps + eps
    Rational rw = rho + eps;
    Rational pw = rho + zmax * eps + eps;
    PRBox box;
    box.r_lo = rat_ceil(Rational(Rational(q) * (cy - rw)));
    box.r_hi = rat_floor(Rational(Rational(q) * (cy + rw)));
    box.p_lo = rat_ceil(Rational(Rational(q) * (cx - pw)));
    box.p_hi = rat_floor(Rational(Rational(q) * (cx + pw)));
    return box;
  });
}

std::string family_report(const Ball& B, long n, const StageParams& sp) {
  VFamily fam = v_family(B, n, sp);
  std::string out;
  for (const auto& v : fam.vs) {
    SelectedWitness sw = select_witness(B, v, sp.weights);
    int cls = 0;
    for (int k = 1; k <= n + 1 && cls == 0; ++k)
      if (v_class(B, n, k, sp, v)) cls = k;
    out += "v=(" + v.p.get_str() + "," + v.r.get_str() + "," + v.q.get_str() + ") w=(" +
           sw.w.a.get_str() + "," + sw.w.b.get_str() + "," + sw.w.c.get_str() + ") H=" +
           rat_str(sw.height) + " k=" + std::to_string(cls) + "\n";
  }
  if (fam.truncated) out += "truncated: q window exceeded q_max\n";
  return out;
}

std::optional<ClassWindow> class_q_window(long n, int k, const StageParams& sp) {
  if (k < 1) return std::nullopt;
  const Weights& w = sp.weights;
  unsigned long mw = w.m + w.l;
  Rational Hm = rat_pow_ui(sp.H(n), w.m);
  unsigned long j_lo = k == 1 ? 0 : static_cast<unsigned long>(2 * k + 4);
  unsigned long j_hi = k == 1 ? 8 : static_cast<unsigned long>(2 * k + 6);
  // lo = ceil(H^{1/(1+lambda)} R^{j_lo}), hi = floor(H^{1/(1+lambda)} R^{j_hi})
  Rational X_lo = Hm * rat_pow_ui(rat_pow_ui(sp.R, j_lo), mw);
  Rational X_hi = Hm * rat_pow_ui(rat_pow_ui(sp.R, j_hi), mw);
  BigInt lo = floor_root(X_lo, mw);
  if (rat_pow_ui(Rational(lo), mw) < X_lo) ++lo;
  BigInt hi = floor_root(X_hi, mw);
  // clip to the family window q <= 2 H_{n+1} and to [1, q_max]
  BigInt fam_hi = rat_floor(Rational(2 * sp.H(n + 1)));
  hi = std::min(hi, fam_hi);
  if (lo < 1) lo = 1;
  ClassWindow cw;
  cw.truncated = hi > sp.q_max;
  cw.lo = lo;
  cw.hi = cw.truncated ? BigInt(sp.q_max) : hi;
  if (cw.lo > cw.hi) return std::nullopt;
  return cw;
}

bool v_class(const Ball& B, long n, int k, const StageParams& sp, const IntVec& v) {
  if (k < 1) return false;
  const Weights& w = sp.weights;
  unsigned long mw = w.m + w.l;
  Rational Hm = rat_pow_ui(sp.H(n), w.m);
  unsigned long j_lo = k == 1 ? 0 : static_cast<unsigned long>(2 * k + 4);
  unsigned long j_hi = k == 1 ? 8 : static_cast<unsigned long>(2 * k + 6);
  // q >= H^{1/(1+lambda)} R^{j_lo}  <=>  q^{m+l} >= H^m R^{j_lo (m+l)}
  if (rat_pow_ui(Rational(v.q), mw) < Hm * rat_pow_ui(rat_pow_ui(sp.R, j_lo), mw)) return false;
  if (rat_pow_ui(Rational(v.q), mw) > Hm * rat_pow_ui(rat_pow_ui(sp.R, j_hi), mw)) return false;
  // family membership
  PRBox clip = kappa_box(v.q, sp);
  if (v.p < clip.p_lo || v.p > clip.p_hi || v.r < clip.r_lo || v.r > clip.r_hi) return false;
  Rational h = height_of(B, v, w);
  return h >= sp.H(n) && h <= 2 * sp.H(n + 1);
}

Hyperplane plane_of(const Ball& B, const IntVec& v, const Weights& w) {
  SelectedWitness sw = select_witness(B, v, w);
  return make_hyperplane({Rational(sw.w.a), Rational(sw.w.b), rat(0)}, Rational(sw.w.c));
}

bool delta_avoids_ball_certified(const Ball& B, const IntVec& v, const Rational& eps,
                                 const Weights& w) {
  require_dim3(B.center, "delta_avoids_ball_certified");
  const Rational cx = B.center[0], cy = B.center[1], cz = B.center[2], rho = B.radius;
  Rational pq = rat_of(v.p, v.q), rq = rat_of(v.r, v.q);

  // second form: min over B of |y - r/q| = |cy - r/q| - rho
  Rational dy = rat_abs(Rational(cy - rq)) - rho;
  if (sgn(dy) >= 0 &&
      Rational(bigint_pow(v.q, 2 * w.m - w.l)) * rat_pow_ui(dy, w.m) >= rat_pow_ui(eps, w.m))
    return true;

  // first form: |x - p/q - z(y - r/q)| >= D - rho*sqrt(1 + zmax^2) over B
  Rational m1 = cx - pq - (cz - rho) * (cy - rq);
  Rational m2 = cx - pq - (cz + rho) * (cy - rq);
  Rational lo = std::min(m1, m2), hi = std::max(m1, m2);
  Rational d(0);
  if (sgn(lo) > 0)
    d = lo;
  else if (sgn(hi) < 0)
    d = -hi;
  if (sgn(d) > 0) {
    Rational zmax = std::max(rat_abs(Rational(cz - rho)), rat_abs(Rational(cz + rho)));
    Rational A = 1 + zmax * zmax;
    // D - rho*sqrt(A) >= eps/q^(1+lambda) = (eps^m / q^(m+l))^(1/m)
    Rational X = rat_pow_ui(eps, w.m) / Rational(bigint_pow(v.q, w.m + w.l));
    CmpResult c = cmp_mixed(X, rat_of(BigInt(1), BigInt(w.m)), RadicalExpr{d, -rho, A});
    if (c.exact && c.ord != Ord::GT) return true;
  }
  return false;
}

std::optional<Point> delta_ball_common_point(const Ball& B, const IntVec& v, const Rational& eps,
                                             const Weights& w, int grid) {
  require_dim3(B.center, "delta_ball_common_point");
  Rational pq = rat_of(v.p, v.q), rq = rat_of(v.r, v.q);
  auto good = [&](const Point& x) { return point_in_ball(x, B) && delta_contains(v, eps, w, x); };
  // anchor of the danger zone at the ball's z level, then dragged toward the center
  Point anchor = {pq, rq, B.center[2]};
  for (int j = 0; j <= grid; ++j) {
    Rational t = rat(j, grid);
    Point x = {anchor[0] + t * (B.center[0] - anchor[0]), anchor[1] + t * (B.center[1] - anchor[1]),
               B.center[2]};
    if (good(x)) return x;
  }
  for (int i = -grid; i <= grid; ++i) {
    for (int j = -grid; j <= grid; ++j) {
      Point x = {B.center[0] + rat(i, 2 * grid) * B.radius, B.center[1] + rat(j, 2 * grid) * B.radius,
                 B.center[2]};
      if (good(x)) return x;
    }
  }
  return std::nullopt;
}

long separation_exponent(int k) { return k == 1 ? 8 : 2; }

SepResult separation_bound_check(const Ball& B, const Ball& B1, const IntVec& v1, const Ball& B2,
                                 const IntVec& v2, const StageParams& sp, int k) {
  auto n_opt = stage_of_ball(B, sp);
  if (!n_opt) return {SepStatus::hypotheses_unmet, "B lies in no stage family"};
  long n = *n_opt;
  const Ball* balls[2] = {&B1, &B2};
  const IntVec* vecs[2] = {&v1, &v2};
  for (int j = 0; j < 2; ++j) {
    auto nj = stage_of_ball(*balls[j], sp);
    if (!nj || *nj != n + k)
      return {SepStatus::hypotheses_unmet, "inner ball not in stage n+k"};
    if (!ball_contains_ball(B, *balls[j]))
      return {SepStatus::hypotheses_unmet, "inner ball not contained in B"};
    if (!v_class(*balls[j], n + k, k, sp, *vecs[j]))
      return {SepStatus::hypotheses_unmet, "vector not in class k of its ball"};
    if (!delta_ball_common_point(B, *vecs[j], sp.epsilon, sp.weights)) {
      if (delta_avoids_ball_certified(B, *vecs[j], sp.epsilon, sp.weights))
        return {SepStatus::hypotheses_unmet, "danger zone provably misses B"};
      return {SepStatus::hypotheses_unmet, "no common point found (undecided)"};
    }
  }
  SelectedWitness w1 = select_witness(B1, v1, sp.weights);
  SelectedWitness w2 = select_witness(B2, v2, sp.weights);
  Rational rk = rat_pow_ui(sp.R, static_cast<unsigned long>(k + 1));
  Rational rd = rat_pow_ui(sp.R, static_cast<unsigned long>(separation_exponent(k)));
  Rational q1(v1.q), q2(v2.q);
  Rational dot12(v1.p * w2.w.a + v1.r * w2.w.b + v1.q * w2.w.c);
  Rational dot21(v2.p * w1.w.a + v2.r * w1.w.b + v2.q * w1.w.c);
  Rational bound12 = 6 * sp.epsilon * rd + 72 * sp.epsilon * sp.kappa * sp.kappa * (q1 / q2) * rk;
  Rational bound21 = 6 * sp.epsilon * rd + 72 * sp.epsilon * sp.kappa * sp.kappa * (q2 / q1) * rk;
  if (rat_abs(dot12) > bound12) return {SepStatus::bound_violated, "|v1.w2| exceeds its bound"};
  if (rat_abs(dot21) > bound21) return {SepStatus::bound_violated, "|v2.w1| exceeds its bound"};
  return {SepStatus::ok, ""};
}

}  // namespace bad3
