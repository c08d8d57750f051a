#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "bad3/dynamics.hpp"
#include "oracles.hpp"

using namespace bad3;

namespace {

Mat3 random_unimodular(std::mt19937_64& eng, const Weights& w) {
  auto small = [&](long lim, long den) { return rat(static_cast<long>(eng() % (2 * lim + 1)) - lim, den); };
  Mat3 m = unipotent(small(8, 4), small(8, 4), small(8, 4));
  FlowTime ft{rat(1 + static_cast<long>(eng() % 3), 4), w.m};  // sigma in {1/4, 2/4, 3/4}
  m = flow_apply(w, ft, m);
  m = mat_mul(m, unipotent(small(6, 8), small(6, 8), small(6, 8)));
  return m;
}

}  // namespace

TEST_CASE("matrix helpers") {
  Mat3 u = unipotent(rat(1, 3), rat(-2, 5), rat(7));
  CHECK(mat_det(u) == 1);
  Mat3 ui = unipotent_inverse(rat(1, 3), rat(-2, 5), rat(7));
  CHECK(mat_mul(u, ui) == mat_identity());
  CHECK(mat_mul(ui, u) == mat_identity());
  CHECK(mat_inverse(u) == ui);
  CHECK(unipotent(rat(0), rat(0), rat(0)) == mat_identity());
}

TEST_CASE("inverse shear action on integer vectors") {
  // u^-1 (p, r, q) = (p - qx - z(r - qy), r - qy, q)
  Rational x = rat(1, 3), y = rat(1, 2), z = rat(2, 7);
  Mat3 ui = unipotent_inverse(x, y, z);
  Vec3 v = {rat(2), rat(3), rat(6)};
  Vec3 im = mat_vec(ui, v);
  CHECK(im[0] == rat(2) - rat(6) * x - z * (rat(3) - rat(6) * y));
  CHECK(im[1] == rat(3) - rat(6) * y);
  CHECK(im[2] == rat(6));
}

TEST_CASE("flow matrices") {
  Weights w(rat(1, 2));
  CHECK(flow_apply(w, FlowTime{rat(1), 2}, mat_identity()) == mat_identity());  // t = 0
  Mat3 g = flow_matrix(w, FlowTime{rat(1, 2), 2});
  CHECK(g[0][0] == rat(2));
  CHECK(g[1][1] == rat(2));
  CHECK(g[2][2] == rat(1, 4));
  CHECK_THROWS_AS(flow_matrix(w, FlowTime{rat(1, 2), 3}), std::domain_error);  // m mismatch
  CHECK_THROWS_AS(flow_matrix(w, FlowTime{rat(2), 2}), std::domain_error);     // sigma > 1
}

TEST_CASE("flow preserves the determinant") {
  std::mt19937_64 eng(41);
  Weights w(rat(2, 3));
  for (int i = 0; i < 50; ++i) {
    Mat3 m = random_unimodular(eng, w);
    Rational d = mat_det(m);
    Mat3 n = flow_apply(w, FlowTime{rat(1, 2), w.m}, m);
    CHECK(mat_det(n) == d);
    CHECK(is_unimodular(n));
  }
}

TEST_CASE("systole basics") {
  SystoleResult id = systole(mat_identity());
  CHECK(id.value == rat(1));
  Weights w(rat(1, 2));
  Mat3 g = flow_apply(w, FlowTime{rat(1, 2), 2}, mat_identity());  // diag(2, 2, 1/4)
  SystoleResult s = systole(g);
  CHECK(s.value == rat(1, 4));
  CHECK(s.argmin == std::array<BigInt, 3>{BigInt(0), BigInt(0), BigInt(1)});
  Mat3 stretched = mat_identity();
  stretched[0][0] = rat(2);  // det 2: not unimodular
  CHECK_THROWS_AS(systole(stretched), std::domain_error);
}

TEST_CASE("systole matches the bruteforce oracle on random unimodular bases") {
  std::mt19937_64 eng(43);
  std::vector<Weights> ws = {Weights(rat(1, 2)), Weights(rat(2, 3)), Weights(rat(3, 5))};
  int checked = 0;
  for (int i = 0; i < 400 && checked < 100; ++i) {
    const Weights& w = ws[i % ws.size()];
    Mat3 m = random_unimodular(eng, w);
    SystoleResult mine = systole(m);
    CHECK(mine.value <= rat(1));  // Minkowski bound for the unit cube
    // the returned witness really attains the value
    Vec3 im = mat_vec(m, {Rational(mine.argmin[0]), Rational(mine.argmin[1]), Rational(mine.argmin[2])});
    Rational norm = std::max(rat_abs(im[0]), std::max(rat_abs(im[1]), rat_abs(im[2])));
    CHECK(norm == mine.value);
    try {
      SystoleResult oracle = bad3_test::systole_bruteforce(m);
      CHECK(mine.value == oracle.value);
      ++checked;
    } catch (const std::runtime_error&) {
      // bases too skewed for the plain box oracle are still value-checked above
    }
  }
  CHECK(checked == 100);
}

TEST_CASE("trajectory of an exact rational point decays") {
  Weights w(rat(2, 3));
  auto grid = halving_grid(w, 20);
  auto rows = trajectory_profile(rat(1, 3), rat(1, 2), rat(0), w, grid);
  CHECK(rows.front().sys.value == rat(1));  // t = 0: unimodular shear of Z^3
  // v = (2,3,6) collapses to (0, 0, 6 sigma^m): crosses below 10^-3
  CHECK(rows.back().sys.value < rat(1, 1000));
  CHECK(rows.back().sys.value <= 6 * rat_pow_ui(rows.back().t.sigma, w.m));
}

TEST_CASE("trajectory of the origin tracks e^-t") {
  Weights w(rat(1, 2));
  auto grid = halving_grid(w, 12);
  auto rows = trajectory_profile(rat(0), rat(0), rat(0), w, grid);
  for (const auto& r : rows) {
    Rational em = rat_pow_ui(r.t.sigma, w.m);
    if (r.t.sigma < 1) CHECK(r.sys.value == em);
  }
  CHECK(rows[0].sys.value == rat(1));
}

TEST_CASE("profile csv shape") {
  Weights w(rat(1, 2));
  auto rows = trajectory_profile(rat(0), rat(0), rat(0), w, halving_grid(w, 4));
  std::string csv = profile_to_csv(rows);
  CHECK(csv.find("t_index,sigma,m,systole,argmin_p,argmin_r,argmin_q\n") == 0);
  CHECK(csv.find("1/4") != std::string::npos);
  std::string csv_f = profile_to_csv(rows, true);
  CHECK(csv_f.find("systole_float") != std::string::npos);
}

TEST_CASE("conversion constants") {
  Weights w12(rat(1, 2));
  CHECK(cmp(dani_delta_to_eps(rat(1), w12), PowExpr{rat(1, 2), rat(1, 2)}) == Ord::EQ);  // 2^(-1/2)
  // eps = 1 gives delta = 1 for any weights
  CHECK(cmp(dani_eps_to_delta(PowExpr::from_rational(rat(1)), w12), rat(1)) == Ord::EQ);
  CHECK(cmp(dani_eps_to_delta(PowExpr::from_rational(rat(1)), Weights(rat(4, 5))), rat(1)) == Ord::EQ);
  // eps = 1/32, mu = 1/3: delta = (1/32)^(3/4) = 2^(-15/4)
  Weights w23(rat(2, 3));
  PowExpr d = dani_eps_to_delta(PowExpr::from_rational(rat(1, 32)), w23);
  CHECK(cmp(d, PowExpr{rat_pow_ui(rat(1, 2), 15), rat(1, 4)}) == Ord::EQ);
  // equal weights agree with eps^(2/3)
  PowExpr d2 = dani_eps_to_delta(PowExpr::from_rational(rat(1, 64)), w12);
  CHECK(cmp(d2, PowExpr{rat_pow_ui(rat(1, 2), 12), rat(1, 3)}) == Ord::EQ);
  // round trip stays on the conversion curve: eps(delta(eps0)) <= eps0
  PowExpr back = dani_delta_to_eps(rat(1, 4), w12);
  CHECK(cmp(back, rat(1)) == Ord::LT);
}

TEST_CASE("badness constant") {
  Weights w12(rat(1, 2));
  // exact hit at q = 6
  CHECK(badness_constant(rat(1, 3), rat(1, 2), rat(0), w12, 6).is_zero());
  CHECK_FALSE(badness_constant(rat(1, 3), rat(1, 2), rat(0), w12, 5).is_zero());
  // Q = 1 closed form: nearest-integer check
  PowExpr b = badness_constant(rat(3, 10), rat(2, 5), rat(0), w12, 1);
  CHECK(cmp(b, rat(2, 5)) == Ord::EQ);  // max{3/10, 2/5} = 2/5
  // integer-z slice equality via the (p, r) -> (p - zr, r) bijection
  std::mt19937_64 eng(47);
  for (int i = 0; i < 40; ++i) {
    Rational x = rat(static_cast<long>(eng() % 65) - 32, 1 + (eng() % 40));
    Rational y = rat(static_cast<long>(eng() % 65) - 32, 1 + (eng() % 40));
    long z = static_cast<long>(eng() % 5) - 2;
    PowExpr lhs = badness_constant(x, y, rat(z), w12, 120);
    PowExpr rhs = badness_constant(Rational(x - rat(z) * y), y, rat(0), w12, 120);
    CHECK(cmp(lhs, rhs) == Ord::EQ);
  }
}

TEST_CASE("correspondence checker") {
  Weights w(rat(1, 2));
  auto grid = halving_grid(w, 20);
  SUBCASE("origin: both sides exactly zero or vacuous") {
    DaniReport r = dani_check(rat(0), rat(0), rat(0), w, 50, grid);
    CHECK(r.eps_hat.is_zero());
    CHECK(r.Q_claim == 0);  // exact hit excluded from the claims by truncation accounting
    CHECK(r.ok());
  }
  SUBCASE("rational point") {
    DaniReport r = dani_check(rat(1, 3), rat(1, 2), rat(2, 7), w, 50, grid);
    CHECK(r.ok());
    CHECK(r.delta_hat > 0);
  }
  SUBCASE("golden-like point") {
    BigInt five_shifted = BigInt(5) << 80;
    BigInt root;
    mpz_sqrt(root.get_mpz_t(), five_shifted.get_mpz_t());
    Rational golden = rat_of(root - (BigInt(1) << 40), BigInt(1) << 41);
    DaniReport r = dani_check(golden, golden, rat(0), w, 100, grid);
    CHECK(r.ok());
    CHECK_FALSE(r.eps_hat.is_zero());
    CHECK(r.Q_claim >= 1);  // bounded-looking orbit claims a real q range
    std::string text = dani_report_text(r);
    CHECK(text.find("verdict: consistent") != std::string::npos);
  }
}
