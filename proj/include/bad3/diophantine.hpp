#pragma once

// Danger zones, integral witnesses, heights, stage families and separation
// bounds for weighted approximation in R^3 with weights (lambda, mu).
//
// A point (x,y,z) is inside the danger zone of v = (p,r,q) when
//   |x - p/q - z(y - r/q)| < eps / q^(1+lambda)  and
//   |y - r/q|             < eps / q^(1+mu);
// every inequality below is decided exactly by cross-powering with the
// shared root index m of lambda = l/m.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bad3/geometry.hpp"
#include "bad3/numerics.hpp"

namespace bad3 {

// v = (p, r, q) with q >= 1.
struct IntVec {
  BigInt p;
  BigInt r;
  BigInt q;

  bool operator==(const IntVec& o) const { return p == o.p && r == o.r && q == o.q; }
  bool operator<(const IntVec& o) const;
};

// (a, b, c) with (a,b) != (0,0) and a*p + b*r + c*q = 0 for its IntVec.
struct Witness {
  BigInt a;
  BigInt b;
  BigInt c;

  bool operator==(const Witness& o) const { return a == o.a && b == o.b && c == o.c; }
};

enum class StageMode { paper, desk };

struct StageParams {
  Rational rho0;     // in (0, 1]
  Rational kappa;    // > 1
  Rational R;
  Rational epsilon;
  Rational beta;
  Rational gamma;
  Weights weights;
  StageMode mode = StageMode::desk;
  long q_max = 1000;
  int k_max = 6;

  // Paper mode enforces R >= max{4/beta, 10^7 kappa^4},
  // eps <= 10^-2 kappa^-2 R^-10 rho0 and (R^gamma - 1)^-1 <= (beta^2/2)^gamma;
  // desk mode only R > 1/beta and eps > 0.
  void validate() const;

  // H_n = 3 eps kappa rho0^-1 R^n.
  Rational H(long n) const;
};

// Every coordinate of b0 bounded by kappa - 1 in absolute value.
bool initial_ball_in_kappa_box(const Ball& b0, const StageParams& sp);

// Exact danger-zone membership.
bool delta_contains(const IntVec& v, const Rational& eps, const Weights& w, const Point& x);

// Finite truncation of the safe-set membership test: true iff x avoids the
// danger zone of every v with 1 <= q <= q_bound (the (p,r) ranges that could
// capture x are forced and finite).
std::function<bool(const Point&)> target_oracle(const Rational& eps, const Weights& w, long q_bound);

// Integral witness with a*p + b*r + c*q = 0, |a| <= q^lambda, |b + z a| <= q^mu,
// found by scanning a in the window and solving the divisibility constraint
// for b. Existence is guaranteed; exhaustion throws std::runtime_error.
Witness minkowski_witness(const Rational& z, const IntVec& v, const Weights& w);

// The complete set {(a,b,c) : (a,b) != (0,0), ap+br+cq = 0, |a| <= q^lambda,
// |b + z_B a| <= q^mu + radius(B)^(1/2)}.
std::vector<Witness> witness_set(const Ball& B, const IntVec& v, const Weights& w);

struct SelectedWitness {
  Witness w;
  Rational minmax;  // max{|a|, |b + z_B a|}
  Rational height;  // q * minmax
};

// Witness minimizing max{|a|, |b + z_B a|} over the witness set, ties broken
// lexicographically by (|a|, a, b, c).
SelectedWitness select_witness(const Ball& B, const IntVec& v, const Weights& w);
Rational height_of(const Ball& B, const IntVec& v, const Weights& w);

// Exact height, except nullopt as soon as the scan proves H < floor_bound
// (family filters can then discard v without finishing the scan).
std::optional<Rational> height_unless_below(const Ball& B, const IntVec& v, const Weights& w,
                                            const Rational& floor_bound);

// Stage n >= 1 with beta R^-n rho0 < radius <= R^-n rho0; 0 iff radius = rho0
// (the family at level 0 is the single initial ball); nullopt in the gaps.
std::optional<long> stage_of_ball(const Ball& B, const StageParams& sp);

struct VFamily {
  std::vector<IntVec> vs;
  bool truncated = false;  // q-window exceeded q_max
};

// All v with H_n <= H_B(v) <= 2 H_{n+1}, q in [H_n^{1/(1+lambda)}, 2H_{n+1}],
// (p, r) confined to the kappa-box inflated by the danger-zone widths.
VFamily v_family(const Ball& B, long n, const StageParams& sp);

// Subfamily of v_family whose danger zone can meet `window` (much smaller
// (p,r) ranges; sound for intersection tests against `window`).
VFamily v_family_near(const Ball& B, long n, const StageParams& sp, const Ball& window);

// Membership in the k-th q-class of the stage-n family:
// k = 1: H_n^{1/(1+lambda)}       <= q <= H_n^{1/(1+lambda)} R^8
// k >= 2: H_n^{1/(1+lambda)} R^{2k+4} <= q <= H_n^{1/(1+lambda)} R^{2k+6},
// intersected with family membership.
bool v_class(const Ball& B, long n, int k, const StageParams& sp, const IntVec& v);

// Line-delimited enumeration report of the stage-n family: one record per
// vector with its selected witness, exact height and q-class.
std::string family_report(const Ball& B, long n, const StageParams& sp);

// Exact q-class window [lo, hi] clipped to [1, q_max]; nullopt when empty.
struct ClassWindow {
  BigInt lo;
  BigInt hi;
  bool truncated = false;
};
std::optional<ClassWindow> class_q_window(long n, int k, const StageParams& sp);

// Vertical plane a x + b y + c = 0 from the selected witness.
Hyperplane plane_of(const Ball& B, const IntVec& v, const Weights& w);

// Certified emptiness of (danger zone of v) ∩ B via exact minimization of
// the two defining forms over the ball (z handled by a monotone envelope).
// true is a proof of emptiness; false is inconclusive.
bool delta_avoids_ball_certified(const Ball& B, const IntVec& v, const Rational& eps, const Weights& w);

// Explicit common point of the danger zone and B, if the search finds one
// (anchor point first, then a grid); a returned point is exact evidence.
std::optional<Point> delta_ball_common_point(const Ball& B, const IntVec& v, const Rational& eps,
                                             const Weights& w, int grid = 8);

enum class SepStatus { ok, hypotheses_unmet, bound_violated };

struct SepResult {
  SepStatus status;
  std::string detail;
};

// Checks |v1.w2| <= 6 eps R^{d_k} + 72 eps kappa^2 (q1/q2) R^{k+1} and the
// symmetric bound, with d_1 = 8 and d_k = 2 for k >= 2, after verifying the
// stage/containment/class/intersection hypotheses.
SepResult separation_bound_check(const Ball& B, const Ball& B1, const IntVec& v1, const Ball& B2,
                                 const IntVec& v2, const StageParams& sp, int k);

long separation_exponent(int k);  // d_k

}  // namespace bad3
