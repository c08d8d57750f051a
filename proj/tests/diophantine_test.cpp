#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "bad3/diophantine.hpp"

using namespace bad3;

namespace {

Ball ball3(Rational x, Rational y, Rational z, Rational rho) {
  return Ball{{std::move(x), std::move(y), std::move(z)}, std::move(rho)};
}

StageParams desk_params(Rational lambda = rat(1, 2), Rational eps = rat(1, 1024)) {
  StageParams sp{rat(1), rat(2), rat(8), std::move(eps), rat(1, 2), rat(1), Weights(std::move(lambda))};
  sp.mode = StageMode::desk;
  sp.q_max = 1000;
  sp.k_max = 6;
  return sp;
}

bool valid_witness(const Witness& w, const IntVec& v) {
  if (sgn(w.a) == 0 && sgn(w.b) == 0) return false;
  return w.a * v.p + w.b * v.r + w.c * v.q == 0;
}

// Full-window enumeration of the witness set, no modular shortcut: the
// independent oracle for select_witness optimality.
Rational bruteforce_minmax(const Ball& B, const IntVec& v, const Weights& w) {
  Rational z = B.z();
  long q = v.q.get_si();
  long a_max = 1;
  while (rat_pow_ui(rat(a_max + 1), w.m) <= rat_pow_ui(Rational(v.q), w.l)) ++a_max;
  bool found = false;
  Rational best;
  long b_span = 4 * q + 8;
  for (long a = -a_max; a <= a_max; ++a) {
    for (long b = -b_span; b <= b_span; ++b) {
      if (a == 0 && b == 0) continue;
      BigInt num = BigInt(a) * v.p + BigInt(b) * v.r;
      if (!mpz_divisible_p(num.get_mpz_t(), v.q.get_mpz_t())) continue;
      Rational t = rat(b) + z * rat(a);
      // |b + za| <= q^mu + sqrt(rho): (|t| - sqrt(rho))^... via cmp_mixed
      CmpResult c = cmp_mixed(Rational(v.q), rat_of(BigInt(w.m - w.l), BigInt(w.m)),
                              RadicalExpr{rat_abs(t), rat(-1), B.radius});
      if (c.ord == Ord::LT) continue;
      Rational mm = std::max(rat_abs(rat(a)), rat_abs(t));
      if (!found || mm < best) {
        found = true;
        best = mm;
      }
    }
  }
  REQUIRE(found);
  return best;
}

}  // namespace

TEST_CASE("danger zone membership") {
  Weights w23(rat(2, 3));
  IntVec v{BigInt(0), BigInt(0), BigInt(1)};
  CHECK(delta_contains(v, rat(1, 10), w23, {rat(1, 100), rat(1, 50), rat(1, 2)}));
  CHECK_FALSE(delta_contains(v, rat(1, 10), w23, {rat(1, 2), rat(0), rat(0)}));
  // exact rational data point is inside for every eps
  Weights w12(rat(1, 2));
  IntVec v2{BigInt(3), BigInt(2), BigInt(7)};
  for (long e = 1; e < 12; e += 5)
    CHECK(delta_contains(v2, rat(1, 1L << e), w12, {rat(3, 7), rat(2, 7), rat(9, 4)}));
}

TEST_CASE("safe-set oracle") {
  Weights w(rat(1, 2));
  auto oracle = target_oracle(rat(1, 8), w, 100);
  // rational point with small denominator is an exact hit
  CHECK_FALSE(oracle({rat(1, 3), rat(1, 2), rat(0)}));
  // q_bound = 1 reduces to the nearest-integer check
  auto o1 = target_oracle(rat(1, 10), w, 1);
  CHECK(o1({rat(1, 2), rat(1, 2), rat(0)}));
  CHECK_FALSE(o1({rat(1, 50), rat(1, 50), rat(0)}));
}

TEST_CASE("safe-set oracle agrees with an independent full enumeration") {
  Weights w(rat(1, 2));
  Rational eps = rat(1, 8);
  // golden-ratio-like coordinate truncated to 40 bits
  BigInt five_shifted = BigInt(5) << 80;
  BigInt root;
  mpz_sqrt(root.get_mpz_t(), five_shifted.get_mpz_t());
  Rational golden = rat_of(root - (BigInt(1) << 40), BigInt(1) << 41);
  std::vector<Point> points = {{golden, golden, rat(0)},
                               {golden, rat(1, 3), rat(1, 2)},
                               {rat(22, 71), golden, rat(-1)}};
  auto oracle = target_oracle(eps, w, 100);
  for (const auto& x : points) {
    bool brute = true;
    for (long q = 1; q <= 100 && brute; ++q)
      for (long r = -2 * q; r <= 2 * q && brute; ++r)
        for (long p = -2 * q; p <= 2 * q && brute; ++p)
          if (delta_contains(IntVec{BigInt(p), BigInt(r), BigInt(q)}, eps, w, x)) brute = false;
    CHECK(oracle(x) == brute);
  }
}

TEST_CASE("integral witness search") {
  Weights w12(rat(1, 2));
  SUBCASE("q = 1 forces c = 0") {
    Witness wit = minkowski_witness(rat(0), {BigInt(0), BigInt(0), BigInt(1)}, w12);
    CHECK(valid_witness(wit, {BigInt(0), BigInt(0), BigInt(1)}));
    CHECK(rat_abs(Rational(wit.a)) <= 1);
    CHECK(rat_abs(Rational(wit.b)) <= 1);
    CHECK(wit.c == 0);
  }
  SUBCASE("pinned instance (1,1,2)") {
    IntVec v{BigInt(1), BigInt(1), BigInt(2)};
    Witness wit = minkowski_witness(rat(0), v, w12);
    CHECK(valid_witness(wit, v));
    CHECK(wit == Witness{BigInt(1), BigInt(1), BigInt(-1)});
  }
  SUBCASE("weighted instance with shear") {
    Weights w23(rat(2, 3));
    IntVec v{BigInt(3), BigInt(1), BigInt(5)};
    Witness wit = minkowski_witness(rat(1), v, w23);
    CHECK(valid_witness(wit, v));
    // |a| <= 5^(2/3), |b + a| <= 5^(1/3)
    CHECK(rat_pow_ui(rat_abs(Rational(wit.a)), 3) <= rat(25));
    CHECK(rat_pow_ui(rat_abs(Rational(wit.b + wit.a)), 3) <= rat(5));
  }
}

TEST_CASE("witness existence across a z grid") {
  Weights w(rat(3, 5));
  std::mt19937_64 eng(17);
  for (int i = 0; i < 400; ++i) {
    long q = 1 + static_cast<long>(eng() % 200);
    long p = static_cast<long>(eng() % (4 * q + 1)) - 2 * q;
    long r = static_cast<long>(eng() % (4 * q + 1)) - 2 * q;
    Rational z = rat(static_cast<long>(eng() % 41) - 20, 10);
    IntVec v{BigInt(p), BigInt(r), BigInt(q)};
    Witness wit = minkowski_witness(z, v, w);
    CHECK(valid_witness(wit, v));
    CHECK(rat_pow_ui(rat_abs(Rational(wit.a)), w.m) <= rat_pow_ui(Rational(v.q), w.l));
    CHECK(rat_pow_ui(rat_abs(Rational(Rational(wit.b) + z * Rational(wit.a))), w.m) <=
          rat_pow_ui(Rational(v.q), w.m - w.l));
  }
}

TEST_CASE("witness set at the origin") {
  Weights w(rat(1, 2));
  Ball B = ball3(rat(0), rat(0), rat(0), rat(1, 4));
  IntVec v{BigInt(0), BigInt(0), BigInt(1)};
  auto ws = witness_set(B, v, w);
  CHECK(ws.size() == 8);  // (a,b) in {-1,0,1}^2 minus origin, c = 0
  for (const auto& wit : ws) {
    CHECK(valid_witness(wit, v));
    CHECK(wit.c == 0);
  }
  // contains the guaranteed witness (looser bound)
  Witness mk = minkowski_witness(B.z(), v, w);
  CHECK(std::find(ws.begin(), ws.end(), mk) != ws.end());
  // shrinking the radius can only shrink the set
  Ball smaller = ball3(rat(0), rat(0), rat(0), rat(1, 16));
  auto ws2 = witness_set(smaller, v, w);
  CHECK(ws2.size() <= ws.size());
  for (const auto& wit : ws2) CHECK(std::find(ws.begin(), ws.end(), wit) != ws.end());
}

TEST_CASE("selected witness and height") {
  Weights w(rat(1, 2));
  Ball B = ball3(rat(0), rat(0), rat(0), rat(1, 4));
  SelectedWitness sw = select_witness(B, {BigInt(0), BigInt(0), BigInt(1)}, w);
  CHECK(sw.height == rat(1));
  CHECK(sw.minmax == rat(1));
  CHECK(sw.w == Witness{BigInt(0), BigInt(-1), BigInt(0)});  // lex smallest (|a|, a, b, c)
  // height bounds: q <= H <= q^(1+lambda)
  CHECK(sw.height >= 1);
  CHECK(cmp_pow(rat(1), rat(3, 2), sw.height) != Ord::LT);
  // doubled q with p = r = 0: c forced to 0, H = 2 * minmax
  SelectedWitness sw2 = select_witness(B, {BigInt(0), BigInt(0), BigInt(2)}, w);
  CHECK(sw2.w.c == 0);
  CHECK(sw2.height == 2 * sw2.minmax);
  CHECK(sw2.height == rat(2));
}

TEST_CASE("selected witness attains the bruteforce optimum") {
  std::mt19937_64 eng(23);
  std::vector<Weights> weights = {Weights(rat(1, 2)), Weights(rat(2, 3)), Weights(rat(3, 5))};
  for (int i = 0; i < 250; ++i) {
    const Weights& w = weights[i % weights.size()];
    long q = 1 + static_cast<long>(eng() % 40);
    long p = static_cast<long>(eng() % (4 * q + 1)) - 2 * q;
    long r = static_cast<long>(eng() % (4 * q + 1)) - 2 * q;
    Ball B = ball3(rat(static_cast<long>(eng() % 17) - 8, 8), rat(static_cast<long>(eng() % 17) - 8, 8),
                   rat(static_cast<long>(eng() % 17) - 8, 8), rat(1 + static_cast<long>(eng() % 8), 8));
    IntVec v{BigInt(p), BigInt(r), BigInt(q)};
    SelectedWitness sw = select_witness(B, v, w);
    CHECK(valid_witness(sw.w, v));
    CHECK(sw.minmax == bruteforce_minmax(B, v, w));
    CHECK(sw.height == Rational(v.q) * sw.minmax);
    // height bounds, exact
    CHECK(sw.height >= Rational(v.q));
    CHECK(cmp_pow(Rational(v.q), Rational(1 + w.lambda), sw.height) != Ord::LT);
  }
}

TEST_CASE("stage classification") {
  StageParams sp = desk_params();
  CHECK(stage_of_ball(ball3(rat(0), rat(0), rat(0), rat(1, 10)), sp) == 1);   // 1/16 < 1/10 <= 1/8
  CHECK_FALSE(stage_of_ball(ball3(rat(0), rat(0), rat(0), rat(1, 20)), sp).has_value());  // gap
  CHECK(stage_of_ball(ball3(rat(0), rat(0), rat(0), rat(1, 64)), sp) == 2);   // boundary inclusive
  CHECK(stage_of_ball(ball3(rat(0), rat(0), rat(0), rat(1)), sp) == 0);
  CHECK_FALSE(stage_of_ball(ball3(rat(0), rat(0), rat(0), rat(1, 2)), sp).has_value());
}

TEST_CASE("stage family windows") {
  // 2 H_{n+1} < 1 gives an empty family
  StageParams tight = desk_params(rat(1, 2), rat(1, 4096));
  Ball B = ball3(rat(1, 7), rat(2, 7), rat(0), rat(1, 10));
  CHECK(v_family(B, 1, tight).vs.empty());

  // desk stage with a populated window partitions into classes
  StageParams sp = desk_params();  // H_2 = 3/8, H_3 = 3: stage-2 window q in [1, 6]
  Ball B2 = ball3(rat(1, 3), rat(2, 7), rat(1, 5), rat(1, 80));
  REQUIRE(stage_of_ball(B2, sp) == 2);
  VFamily fam = v_family(B2, 2, sp);
  CHECK_FALSE(fam.truncated);
  CHECK_FALSE(fam.vs.empty());
  for (const auto& v : fam.vs) {
    CHECK(v.q <= 6);
    bool in_some_class = false;
    for (int k = 1; k <= 2 && !in_some_class; ++k)
      in_some_class = v_class(B2, 2, k, sp, v);
    CHECK(in_some_class);  // class partition covers the family
  }
}

TEST_CASE("near-window family is sound for intersection tests") {
  StageParams sp = desk_params();
  Ball B = ball3(rat(2, 7), rat(1, 3), rat(-1, 5), rat(1, 80));
  REQUIRE(stage_of_ball(B, sp) == 2);
  VFamily full = v_family(B, 2, sp);
  VFamily near = v_family_near(B, 2, sp, B);
  std::set<IntVec> near_set(near.vs.begin(), near.vs.end());
  for (const auto& v : near.vs) CHECK(std::find(full.vs.begin(), full.vs.end(), v) != full.vs.end());
  for (const auto& v : full.vs) {
    if (near_set.count(v)) continue;
    // anything outside the near window provably misses B
    CHECK_FALSE(delta_ball_common_point(B, v, sp.epsilon, sp.weights).has_value());
  }
}

TEST_CASE("hand-built family window arithmetic") {
  // H_n = 1, lambda = 1/2, R = 8: window [1, 2 H_{n+1}] = [1, 16], all class 1
  StageParams sp = desk_params();
  sp.epsilon = rat(1, 48);  // H_1 = 3 * (1/48) * 2 * 8 = 1
  REQUIRE(sp.H(1) == rat(1));
  auto cw = class_q_window(1, 1, sp);
  REQUIRE(cw.has_value());
  CHECK(cw->lo == 1);
  CHECK(cw->hi == 16);
  CHECK_FALSE(cw->truncated);
}

TEST_CASE("family enumeration report") {
  StageParams sp = desk_params();
  Ball B = ball3(rat(1, 3), rat(2, 7), rat(1, 5), rat(1, 80));
  REQUIRE(stage_of_ball(B, sp) == 2);
  std::string rep = family_report(B, 2, sp);
  CHECK(rep.find("v=(") != std::string::npos);
  CHECK(rep.find(" w=(") != std::string::npos);
  CHECK(rep.find(" H=") != std::string::npos);
  CHECK(rep.find(" k=") != std::string::npos);
  CHECK(rep.find("truncated") == std::string::npos);
}

TEST_CASE("vertical plane from the witness") {
  Weights w(rat(1, 2));
  CHECK(make_hyperplane({rat(1), rat(0), rat(0)}, rat(0)) ==
        make_hyperplane({rat(-3), rat(0), rat(0)}, rat(0)));
  Ball B = ball3(rat(1, 2), rat(1, 2), rat(0), rat(1, 16));
  Hyperplane pl = plane_of(B, {BigInt(1), BigInt(1), BigInt(2)}, w);
  CHECK(pl == make_hyperplane({rat(1), rat(1), rat(0)}, rat(-1)));  // x + y - 1 = 0
  CHECK(pl.normal[2] == 0);  // always vertical
}

TEST_CASE("certified avoidance versus explicit common points") {
  StageParams sp = desk_params();
  std::mt19937_64 eng(29);
  int certified = 0, met = 0;
  for (int i = 0; i < 400; ++i) {
    IntVec v{BigInt(static_cast<long>(eng() % 9) - 4), BigInt(static_cast<long>(eng() % 9) - 4),
             BigInt(1 + static_cast<long>(eng() % 6))};
    Ball B = ball3(rat(static_cast<long>(eng() % 33) - 16, 32), rat(static_cast<long>(eng() % 33) - 16, 32),
                   rat(static_cast<long>(eng() % 9) - 4, 8), rat(1 + static_cast<long>(eng() % 8), 64));
    if (i % 2 == 0) {
      // park the ball on the anchor so the zones genuinely overlap
      B.center[0] = rat_of(v.p, v.q) + rat(static_cast<long>(eng() % 3) - 1, 4096);
      B.center[1] = rat_of(v.r, v.q) + rat(static_cast<long>(eng() % 3) - 1, 4096);
    }
    bool avoid = delta_avoids_ball_certified(B, v, rat(1, 64), sp.weights);
    auto common = delta_ball_common_point(B, v, rat(1, 64), sp.weights);
    if (avoid) {
      ++certified;
      CHECK_FALSE(common.has_value());
    }
    if (common) {
      ++met;
      CHECK(point_in_ball(*common, B));
      CHECK(delta_contains(v, rat(1, 64), sp.weights, *common));
    }
  }
  CHECK(certified > 20);
  CHECK(met > 20);
}

TEST_CASE("separation bound check") {
  CHECK(separation_exponent(1) == 8);
  CHECK(separation_exponent(2) == 2);
  CHECK(separation_exponent(3) == 2);
  StageParams sp = desk_params();
  // hypotheses unmet: inner balls at the wrong stage
  Ball B = ball3(rat(0), rat(0), rat(0), rat(1, 10));
  Ball inner = ball3(rat(0), rat(0), rat(0), rat(1, 10));
  IntVec v{BigInt(0), BigInt(0), BigInt(1)};
  auto r = separation_bound_check(B, inner, v, inner, v, sp, 1);
  CHECK(r.status == SepStatus::hypotheses_unmet);
}

TEST_CASE("paper mode constant validation") {
  Rational R = rat(200000000);  // >= max{4/beta, 10^7 kappa^4} for beta=1/2, kappa=2
  Rational eps_cap = rat(1, 100) / rat(4) / rat_pow_ui(R, 10);
  StageParams sp{rat(1), rat(2), R, Rational(eps_cap / 2), rat(1, 2), rat(1), Weights(rat(1, 2))};
  sp.mode = StageMode::paper;
  CHECK_NOTHROW(sp.validate());
  StageParams bad = sp;
  bad.epsilon = Rational(eps_cap * 2);
  CHECK_THROWS_AS(bad.validate(), std::domain_error);
  StageParams small_R = sp;
  small_R.R = rat(1000);
  CHECK_THROWS_AS(small_R.validate(), std::domain_error);
  // desk mode only needs R > 1/beta and eps > 0
  StageParams desk = desk_params();
  CHECK_NOTHROW(desk.validate());
  desk.R = rat(3, 2);
  CHECK_THROWS_AS(desk.validate(), std::domain_error);
}
