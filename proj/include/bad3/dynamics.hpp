#pragma once

// Diagonal flows on unimodular 3-lattices with exact rational arithmetic:
// flow/unipotent matrices, exact sup-norm systole via basis reduction plus
// complete box enumeration, finite-horizon trajectory profiles, weighted
// badness constants, and the correspondence checker tying the two sides
// together with explicit conversion constants.
//
// Times are restricted to e^-t = sigma^m with sigma rational, so that
// g_t = diag(sigma^-l, sigma^-(m-l), sigma^m) is an exact rational matrix
// for lambda = l/m.

#include <array>
#include <vector>

#include "bad3/numerics.hpp"

namespace bad3 {

using Vec3 = std::array<Rational, 3>;
using Mat3 = std::array<std::array<Rational, 3>, 3>;  // row-major; columns generate the lattice

Mat3 mat_identity();
Mat3 mat_mul(const Mat3& a, const Mat3& b);
Vec3 mat_vec(const Mat3& m, const Vec3& v);
Rational mat_det(const Mat3& m);
Mat3 mat_inverse(const Mat3& m);
bool is_unimodular(const Mat3& m);  // |det| = 1

struct FlowTime {
  Rational sigma;   // in (0, 1]
  unsigned long m;  // shared root index; e^-t = sigma^m
};

// diag(sigma^-l, sigma^-(m-l), sigma^m), the flow at e^-t = sigma^m.
Mat3 flow_matrix(const Weights& w, const FlowTime& ft);
Mat3 flow_apply(const Weights& w, const FlowTime& ft, const Mat3& basis);

// Upper-triangular shear with rows (1 z x; 0 1 y; 0 0 1) and its inverse.
Mat3 unipotent(const Rational& x, const Rational& y, const Rational& z);
Mat3 unipotent_inverse(const Rational& x, const Rational& y, const Rational& z);

struct SystoleResult {
  Rational value;                 // min over nonzero integer n of ||basis n||_inf
  std::array<BigInt, 3> argmin;   // canonical integer witness (first nonzero > 0)
};

// Exact systole: exact Lovasz-reduction of the basis (lattice unchanged),
// then complete enumeration of the box derived from the inverse basis acting
// on the sup-norm ball of the best column bound. Requires |det| = 1.
SystoleResult systole(const Mat3& basis);

struct ProfileRow {
  int index;
  FlowTime t;
  SystoleResult sys;
};

// Systole of g_t u^-1 Z^3 along the time grid.
std::vector<ProfileRow> trajectory_profile(const Rational& x, const Rational& y, const Rational& z,
                                           const Weights& w, const std::vector<FlowTime>& grid);

// CSV: t_index, sigma, m, systole, argmin_p, argmin_r, argmin_q
// (+ systole_float when with_float).
std::string profile_to_csv(const std::vector<ProfileRow>& rows, bool with_float = false);

// sigma = 2^-j for j = 0 .. ceil(target_exp / m): grid of exact times with
// e^-t descending to <= 2^-target_exp.
std::vector<FlowTime> halving_grid(const Weights& w, unsigned long target_exp);

// Conversion constants of the correspondence: eps = 2^-lambda delta^(1+lambda)
// and delta = min{eps^(1/(1+mu)), 1}, kept exact as power expressions.
PowExpr dani_delta_to_eps(const Rational& delta, const Weights& w);
PowExpr dani_eps_to_delta(const PowExpr& eps, const Weights& w);

// Exact minimum over 1 <= q <= Q and the forced (p, r) windows of
// max{q^lambda |qx - p - z(qy - r)|, q^mu |qy - r|}; z = 0 gives the
// finite-Q badness constant of (x, y).
PowExpr badness_constant(const Rational& x, const Rational& y, const Rational& z, const Weights& w,
                         long Q);

struct DaniReport {
  std::vector<Rational> systoles;  // one per grid time
  Rational delta_hat;              // min systole over the grid
  PowExpr eps_hat;                 // badness constant at Q
  // dynamics -> badness: eps over q <= Q_claim dominates the conversion of
  // delta_hat weakened by one grid step
  long Q_claim = 0;
  bool dyn_to_dio_ok = true;       // vacuously true when Q_claim < 1
  // badness -> dynamics: systole >= min{eps^(1/(1+lambda)), 1} at every grid
  // time whose violating vectors would all have q <= Q
  PowExpr delta_bound;
  std::vector<int> claimed_grid;
  bool dio_to_dyn_ok = true;
  bool ok() const { return dyn_to_dio_ok && dio_to_dyn_ok; }
};

DaniReport dani_check(const Rational& x, const Rational& y, const Rational& z, const Weights& w,
                      long Q, const std::vector<FlowTime>& grid);

// Line-delimited key: value record.
std::string dani_report_text(const DaniReport& r);

}  // namespace bad3
