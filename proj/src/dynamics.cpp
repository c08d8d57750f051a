#include "bad3/dynamics.hpp"

#include <algorithm>
#include <sstream>

namespace bad3 {

Mat3 mat_identity() {
  Mat3 m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m[i][j] = rat(i == j ? 1 : 0);
  return m;
}

Mat3 mat_mul(const Mat3& a, const Mat3& b) {
  Mat3 c;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Rational s(0);
      for (int k = 0; k < 3; ++k) s += a[i][k] * b[k][j];
      c[i][j] = s;
    }
  return c;
}

Vec3 mat_vec(const Mat3& m, const Vec3& v) {
  Vec3 w;
  for (int i = 0; i < 3; ++i) {
    Rational s(0);
    for (int k = 0; k < 3; ++k) s += m[i][k] * v[k];
    w[i] = s;
  }
  return w;
}

Rational mat_det(const Mat3& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

Mat3 mat_inverse(const Mat3& m) {
  Rational det = mat_det(m);
  if (sgn(det) == 0) throw std::domain_error("mat_inverse: singular matrix");
  Mat3 adj;
  adj[0][0] = m[1][1] * m[2][2] - m[1][2] * m[2][1];
  adj[0][1] = m[0][2] * m[2][1] - m[0][1] * m[2][2];
  adj[0][2] = m[0][1] * m[1][2] - m[0][2] * m[1][1];
  adj[1][0] = m[1][2] * m[2][0] - m[1][0] * m[2][2];
  adj[1][1] = m[0][0] * m[2][2] - m[0][2] * m[2][0];
  adj[1][2] = m[0][2] * m[1][0] - m[0][0] * m[1][2];
  adj[2][0] = m[1][0] * m[2][1] - m[1][1] * m[2][0];
  adj[2][1] = m[0][1] * m[2][0] - m[0][0] * m[2][1];
  adj[2][2] = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) adj[i][j] /= det;
  return adj;
}

bool is_unimodular(const Mat3& m) {
  Rational d = mat_det(m);
  return d == 1 || d == -1;
}

Mat3 flow_matrix(const Weights& w, const FlowTime& ft) {
  if (ft.m != w.m) throw std::domain_error("flow_matrix: root index mismatch with the weights");
  if (sgn(ft.sigma) <= 0 || ft.sigma > 1) throw std::domain_error("flow_matrix: sigma must be in (0,1]");
  Mat3 g = mat_identity();
  g[0][0] = rat_pow_si(ft.sigma, -static_cast<long>(w.l));
  g[1][1] = rat_pow_si(ft.sigma, -static_cast<long>(w.m - w.l));
  g[2][2] = rat_pow_ui(ft.sigma, w.m);
  return g;
}

Mat3 flow_apply(const Weights& w, const FlowTime& ft, const Mat3& basis) {
  return mat_mul(flow_matrix(w, ft), basis);
}

Mat3 unipotent(const Rational& x, const Rational& y, const Rational& z) {
  Mat3 u = mat_identity();
  u[0][1] = z;
  u[0][2] = x;
  u[1][2] = y;
  return u;
}

Mat3 unipotent_inverse(const Rational& x, const Rational& y, const Rational& z) {
  Mat3 u = mat_identity();
  u[0][1] = -z;
  u[0][2] = z * y - x;
  u[1][2] = -y;
  return u;
}

namespace {

using BigVec3 = std::array<BigInt, 3>;
using BigMat3 = std::array<std::array<BigInt, 3>, 3>;

Rational col_dot(const Mat3& m, int a, int b) {
  Rational s(0);
  for (int i = 0; i < 3; ++i) s += m[i][a] * m[i][b];
  return s;
}

Rational sup_norm_col(const Mat3& m, int c) {
  Rational s = rat_abs(m[0][c]);
  for (int i = 1; i < 3; ++i) s = std::max(s, rat_abs(m[i][c]));
  return s;
}

void col_axpy(Mat3& m, BigMat3& U, int dst, int src, const BigInt& q) {
  // column dst -= q * column src (same op mirrored on U)
  for (int i = 0; i < 3; ++i) m[i][dst] -= Rational(q) * m[i][src];
  for (int i = 0; i < 3; ++i) U[i][dst] -= q * U[i][src];
}

void col_swap(Mat3& m, BigMat3& U, int a, int b) {
  for (int i = 0; i < 3; ++i) std::swap(m[i][a], m[i][b]);
  for (int i = 0; i < 3; ++i) std::swap(U[i][a], U[i][b]);
}

BigInt round_rat(const Rational& x) { return rat_floor(Rational(x + rat(1, 2))); }

// Exact Lovasz reduction (delta = 3/4) of the basis columns; U tracks the
// unimodular column transform so that reduced = basis * U.
void lovasz_reduce(Mat3& m, BigMat3& U) {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) U[i][j] = i == j ? 1 : 0;
  auto gso = [&](Rational B[3], Rational mu[3][3]) {
    // Gram-Schmidt norms and coefficients over the columns
    Rational d0 = col_dot(m, 0, 0);
    B[0] = d0;
    mu[1][0] = col_dot(m, 1, 0) / d0;
    B[1] = col_dot(m, 1, 1) - mu[1][0] * mu[1][0] * d0;
    mu[2][0] = col_dot(m, 2, 0) / d0;
    mu[2][1] = (col_dot(m, 2, 1) - mu[2][0] * mu[1][0] * d0) / B[1];
    B[2] = col_dot(m, 2, 2) - mu[2][0] * mu[2][0] * d0 - mu[2][1] * mu[2][1] * B[1];
  };
  int k = 1;
  int guard = 0;
  while (k < 3) {
    if (++guard > 10000) throw std::logic_error("lovasz_reduce: no convergence");
    Rational B[3];
    Rational mu[3][3];
    gso(B, mu);
    for (int j = k - 1; j >= 0; --j) {
      BigInt q = round_rat(mu[k][j]);
      if (sgn(q) != 0) {
        col_axpy(m, U, k, j, q);
        gso(B, mu);
      }
    }
    if (B[k] >= (rat(3, 4) - mu[k][k - 1] * mu[k][k - 1]) * B[k - 1]) {
      ++k;
    } else {
      col_swap(m, U, k, k - 1);
      k = std::max(1, k - 1);
    }
  }
}

BigVec3 big_mat_vec(const BigMat3& U, const BigVec3& n) {
  BigVec3 w;
  for (int i = 0; i < 3; ++i) {
    BigInt s(0);
    for (int k = 0; k < 3; ++k) s += U[i][k] * n[k];
    w[i] = s;
  }
  return w;
}

void canonical_sign(BigVec3& n) {
  for (int i = 0; i < 3; ++i) {
    if (sgn(n[i]) == 0) continue;
    if (sgn(n[i]) < 0)
      for (int j = 0; j < 3; ++j) n[j] = -n[j];
    return;
  }
}

}  // namespace

SystoleResult systole(const Mat3& basis) {
  if (!is_unimodular(basis)) throw std::domain_error("systole: basis must be unimodular");
  Mat3 red = basis;
  BigMat3 U;
  lovasz_reduce(red, U);

  Rational bound = sup_norm_col(red, 0);
  for (int c = 1; c < 3; ++c) bound = std::min(bound, sup_norm_col(red, c));
  Mat3 inv = mat_inverse(red);
  long N[3];
  for (int i = 0; i < 3; ++i) {
    Rational s(0);
    for (int j = 0; j < 3; ++j) s += rat_abs(inv[i][j]);
    BigInt ni = rat_floor(Rational(s * bound));
    if (!ni.fits_slong_p() || ni.get_si() > 1000000)
      throw std::logic_error("systole: enumeration box unexpectedly large");
    N[i] = ni.get_si();
  }

  bool found = false;
  Rational best;
  BigVec3 best_n{};
  BigVec3 n{};
  for (long n0 = -N[0]; n0 <= N[0]; ++n0) {
    for (long n1 = -N[1]; n1 <= N[1]; ++n1) {
      for (long n2 = -N[2]; n2 <= N[2]; ++n2) {
        if (n0 == 0 && n1 == 0 && n2 == 0) continue;
        // skip the negated half: first nonzero coordinate positive
        if (n0 < 0 || (n0 == 0 && (n1 < 0 || (n1 == 0 && n2 < 0)))) continue;
        n = {BigInt(n0), BigInt(n1), BigInt(n2)};
        Rational norm(0);
        for (int i = 0; i < 3; ++i) {
          Rational w = red[i][0] * Rational(n[0]) + red[i][1] * Rational(n[1]) + red[i][2] * Rational(n[2]);
          norm = std::max(norm, rat_abs(w));
        }
        if (!found || norm < best) {
          found = true;
          best = norm;
          best_n = n;
        }
      }
    }
  }
  if (!found) throw std::logic_error("systole: empty enumeration box");
  BigVec3 orig = big_mat_vec(U, best_n);
  canonical_sign(orig);
  return SystoleResult{best, orig};
}

std::vector<ProfileRow> trajectory_profile(const Rational& x, const Rational& y, const Rational& z,
                                           const Weights& w, const std::vector<FlowTime>& grid) {
  Mat3 uinv = unipotent_inverse(x, y, z);
  std::vector<ProfileRow> rows;
  rows.reserve(grid.size());
  for (size_t j = 0; j < grid.size(); ++j) {
    Mat3 basis = flow_apply(w, grid[j], uinv);
    rows.push_back(ProfileRow{static_cast<int>(j), grid[j], systole(basis)});
  }
  return rows;
}

std::string profile_to_csv(const std::vector<ProfileRow>& rows, bool with_float) {
  std::ostringstream out;
  out << "t_index,sigma,m,systole,argmin_p,argmin_r,argmin_q";
  if (with_float) out << ",systole_float";
  out << "\n";
  for (const auto& r : rows) {
    out << r.index << "," << rat_str(r.t.sigma) << "," << r.t.m << "," << rat_str(r.sys.value) << ","
        << r.sys.argmin[0].get_str() << "," << r.sys.argmin[1].get_str() << ","
        << r.sys.argmin[2].get_str();
    if (with_float) out << "," << r.sys.value.get_d();
    out << "\n";
  }
  return out.str();
}

std::vector<FlowTime> halving_grid(const Weights& w, unsigned long target_exp) {
  std::vector<FlowTime> grid;
  unsigned long jmax = (target_exp + w.m - 1) / w.m;
  for (unsigned long j = 0; j <= jmax; ++j)
    grid.push_back(FlowTime{rat_pow_ui(rat(1, 2), j), w.m});
  return grid;
}

PowExpr dani_delta_to_eps(const Rational& delta, const Weights& w) {
  if (sgn(delta) < 0) throw std::domain_error("dani_delta_to_eps: negative delta");
  // 2^-lambda * delta^(1+lambda) = (2^-l * delta^(m+l))^(1/m)
  Rational base = rat_pow_ui(rat(1, 2), w.l) * rat_pow_ui(delta, w.m + w.l);
  return PowExpr{base, rat_of(BigInt(1), BigInt(w.m))};
}

PowExpr dani_eps_to_delta(const PowExpr& eps, const Weights& w) {
  // min{eps^(1/(1+mu)), 1} with 1/(1+mu) = m/(2m-l). The exponent uses the
  // smaller weight: a unit vector with all flow-side coordinates below delta
  // forces the approximation form below max{delta^(1+lambda), delta^(1+mu)}
  // = delta^(1+mu) for delta <= 1, so only delta = eps^(1/(1+mu)) closes the
  // implication for lambda > mu (at equal weights both read eps^(2/3)).
  PowExpr root = pow_raise(eps, rat_of(BigInt(w.m), BigInt(2 * w.m - w.l)));
  return pow_min(root, PowExpr::from_rational(rat(1)));
}

PowExpr badness_constant(const Rational& x, const Rational& y, const Rational& z, const Weights& w,
                         long Q) {
  if (Q < 1) throw std::domain_error("badness_constant: Q must be >= 1");
  bool found = false;
  Rational best;  // best value^m; the returned value is best^(1/m)
  for (long qi = 1; qi <= Q; ++qi) {
    BigInt q(qi);
    Rational ql = Rational(q);
    Rational qx = ql * x, qy = ql * y;
    Rational pow_l = rat_pow_ui(ql, w.l);         // q^l
    Rational pow_ml = rat_pow_ui(ql, w.m - w.l);  // q^(m-l)
    auto consider_r = [&](const BigInt& r) {
      // returns false once this side of the r scan cannot improve
      Rational g = rat_abs(Rational(qy - Rational(r)));
      Rational gterm = pow_ml * rat_pow_ui(g, w.m);  // (q^mu g)^m
      if (found && gterm >= best) return false;
      Rational t = qx - z * (qy - Rational(r));
      for (const BigInt& p : {rat_floor(t), rat_ceil(t)}) {
        Rational f = rat_abs(Rational(t - Rational(p)));
        Rational fterm = pow_l * rat_pow_ui(f, w.m);  // (q^lambda f)^m
        Rational cand = std::max(fterm, gterm);
        if (!found || cand < best) {
          found = true;
          best = cand;
        }
      }
      return true;
    };
    for (BigInt r = rat_floor(qy);; --r)
      if (!consider_r(r)) break;
    for (BigInt r = rat_floor(qy) + 1;; ++r)
      if (!consider_r(r)) break;
    if (found && sgn(best) == 0) break;  // exact hit, nothing below zero
  }
  if (!found) throw std::logic_error("badness_constant: no candidate considered");
  return PowExpr{best, rat_of(BigInt(1), BigInt(w.m))};
}

DaniReport dani_check(const Rational& x, const Rational& y, const Rational& z, const Weights& w,
                      long Q, const std::vector<FlowTime>& grid) {
  if (grid.empty() || grid.front().sigma != 1)
    throw std::domain_error("dani_check: grid must start at sigma = 1");
  DaniReport rep;
  std::vector<Rational> E;  // e^-t per grid point, strictly decreasing
  for (const auto& ft : grid) {
    E.push_back(rat_pow_ui(ft.sigma, ft.m));
    if (E.size() >= 2 && E[E.size() - 1] >= E[E.size() - 2])
      throw std::domain_error("dani_check: grid times must strictly increase");
  }
  auto rows = trajectory_profile(x, y, z, w, grid);
  for (const auto& r : rows) rep.systoles.push_back(r.sys.value);
  rep.delta_hat = rep.systoles[0];
  for (const auto& s : rep.systoles) rep.delta_hat = std::min(rep.delta_hat, s);
  rep.eps_hat = badness_constant(x, y, z, w, Q);

  // dynamics -> badness, weakened by one grid step: only vectors with
  // q <= delta_hat / (2 E_J) are reached by a grid time with E_j q <= delta/2
  Rational r_min = E.size() >= 2 ? Rational(E[1] / E[0]) : rat(1);
  for (size_t j = 2; j < E.size(); ++j) r_min = std::min(r_min, Rational(E[j] / E[j - 1]));
  BigInt q_claim = rat_floor(Rational(rep.delta_hat / (2 * E.back())));
  rep.Q_claim = q_claim.fits_slong_p() ? std::min<long>(q_claim.get_si(), Q) : Q;
  if (rep.Q_claim >= 1) {
    PowExpr eps_claim = badness_constant(x, y, z, w, rep.Q_claim);
    PowExpr conv = dani_delta_to_eps(Rational(rep.delta_hat * r_min), w);
    rep.dyn_to_dio_ok = cmp(eps_claim, conv) != Ord::LT;
  }

  // badness -> dynamics: at grid times where every violating q stays <= Q
  rep.delta_bound = dani_eps_to_delta(rep.eps_hat, w);
  for (size_t j = 0; j < E.size(); ++j) {
    // claim j iff (Q+1) E_j >= delta_bound
    if (cmp(rep.delta_bound, Rational(rat(Q + 1) * E[j])) == Ord::GT) continue;
    rep.claimed_grid.push_back(static_cast<int>(j));
    if (cmp(rep.delta_bound, rep.systoles[j]) == Ord::GT) rep.dio_to_dyn_ok = false;
  }
  return rep;
}

std::string dani_report_text(const DaniReport& r) {
  std::ostringstream out;
  out << "delta_hat: " << rat_str(r.delta_hat) << "\n";
  out << "eps_hat: " << powexpr_str(r.eps_hat) << "\n";
  out << "q_claim: " << r.Q_claim << "\n";
  out << "dyn_to_dio: " << (r.dyn_to_dio_ok ? "ok" : "violated") << "\n";
  out << "delta_bound: " << powexpr_str(r.delta_bound) << "\n";
  out << "claimed_grid_times: " << r.claimed_grid.size() << "\n";
  out << "dio_to_dyn: " << (r.dio_to_dyn_ok ? "ok" : "violated") << "\n";
  out << "verdict: " << (r.ok() ? "consistent" : "inconsistent") << "\n";
  return out.str();
}

}  // namespace bad3
