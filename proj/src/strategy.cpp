#include "bad3/strategy.hpp"

#include <algorithm>

namespace bad3 {

namespace {

Hyperplane default_plane() { return make_hyperplane({rat(1), rat(0), rat(0)}, rat(0)); }

bool independent(const IntVec& a, const IntVec& b) {
  return a.r * b.q != a.q * b.r || a.q * b.p != a.p * b.q || a.p * b.r != a.r * b.p;
}

// Largest sixteenth-scaling of `target - center` keeping a radius-r ball at
// the scaled point inside B.
Point pull_inside(const Ball& B, const Point& target, const Rational& r) {
  Point step = sub(target, B.center);
  Rational len2 = norm_sq(step);
  Rational slack = B.radius - r;
  if (sgn(slack) < 0) throw std::domain_error("pull_inside: inner radius too large");
  if (len2 <= slack * slack) return target;
  for (long j = 16; j >= 0; --j) {
    Rational s = rat(j, 16);
    if (s * s * len2 <= slack * slack) {
      Point out = B.center;
      for (size_t i = 0; i < out.size(); ++i) out[i] += s * step[i];
      return out;
    }
  }
  return B.center;
}

}  // namespace

WinningAlice::WinningAlice(StageParams sp, bool allow_equal_weights) : sp_(std::move(sp)) {
  sp_.validate();
  if (sp_.weights.equal_weights() && !allow_equal_weights)
    throw std::domain_error("WinningAlice: equal weights need the explicit override");
}

bool WinningAlice::is_safe_stage_ball(const Ball& B, long n) {
  if (n == 0) return b0_ && B == *b0_;
  bool parented = false;
  for (const auto& [stage, ball] : safe_balls_) {
    if (stage == n - 1 && ball_contains_ball(ball, B)) {
      parented = true;
      break;
    }
  }
  if (!parented) return false;
  VFamily fam = v_family_near(B, n, sp_, B);
  last_family_truncated_ = fam.truncated;
  for (const auto& v : fam.vs) {
    if (!delta_avoids_ball_certified(B, v, sp_.epsilon, sp_.weights)) return false;
  }
  return true;
}

Hyperplane WinningAlice::cover_plane(const Ball& B, long n, int k, bool* truncated) {
  if (truncated) *truncated = false;
  auto window = class_q_window(n + k, k, sp_);
  if (!window) return default_plane();
  if (truncated) *truncated = window->truncated;

  const Rational cx = B.center[0], cy = B.center[1], cz = B.center[2];
  const Rational rho = B.radius, eps = sp_.epsilon;
  Rational zmax = rat_abs(cz) + rho;
  Rational rw = rho + eps;
  Rational pw = rho + zmax * eps + eps;
  Rational inner_radius = rat_pow_ui(1 / sp_.R, static_cast<unsigned long>(n + k)) * sp_.rho0;

  struct Candidate {
    IntVec v;
    Ball rep;
  };
  std::vector<Candidate> found;
  bool span2 = false;

  for (BigInt q = window->lo; q <= window->hi && !span2; ++q) {
    BigInt r_lo = rat_ceil(Rational(Rational(q) * (cy - rw)));
    BigInt r_hi = rat_floor(Rational(Rational(q) * (cy + rw)));
    for (BigInt r = r_lo; r <= r_hi && !span2; ++r) {
      BigInt p_lo = rat_ceil(Rational(Rational(q) * (cx - pw)));
      BigInt p_hi = rat_floor(Rational(Rational(q) * (cx + pw)));
      for (BigInt p = p_lo; p <= p_hi && !span2; ++p) {
        IntVec v{p, r, q};
        auto common = delta_ball_common_point(B, v, eps, sp_.weights, 4);
        if (!common) continue;
        Ball rep{pull_inside(B, *common, inner_radius), inner_radius};
        if (!v_class(rep, n + k, k, sp_, v)) continue;
        found.push_back({v, rep});
        if (k != 1) {
          span2 = true;  // representative pairs share the plane; first one serves
        } else if (found.size() > 1 && independent(found.front().v, v)) {
          span2 = true;
        }
      }
    }
  }

  if (found.empty()) return default_plane();  // vacuous: any plane covers nothing
  if (k == 1 && !span2) {
    // all candidate vectors parallel: tilted plane through the anchor of the
    // smallest-q one, with slope z_B
    const IntVec& v0 = found.front().v;
    Rational p0q0 = rat_of(v0.p, v0.q), r0q0 = rat_of(v0.r, v0.q);
    return make_hyperplane({rat(1), Rational(-cz), rat(0)}, Rational(cz * r0q0 - p0q0));
  }
  return plane_of(found.front().rep, found.front().v, sp_.weights);
}

AliceMove WinningAlice::emit_family(const Ball& B, long n, const GameParams& params, json* entry) {
  AliceMove mv;
  mv.truncated = true;  // the infinite family is always cut at k_max
  bool trimmed = false;
  json planes_log = json::array();
  for (int k = 1; k <= sp_.k_max; ++k) {
    bool trunc = false;
    Hyperplane plane = cover_plane(B, n, k, &trunc);
    Rational width = 2 * rat_pow_ui(1 / sp_.R, static_cast<unsigned long>(n + k)) * sp_.rho0;
    std::vector<Slab> tentative = mv.slabs;
    tentative.push_back(Slab{plane, width});
    if (!potential_budget_ok(tentative, params.beta, params.gamma, B.radius)) {
      trimmed = true;
      break;
    }
    planes_.insert_or_assign({n, k}, plane);
    mv.slabs = std::move(tentative);
    json pl{{"k", k}, {"truncated_search", trunc}};
    json coeffs = json::array();
    for (const auto& c : plane.normal) coeffs.push_back(rat_str(c));
    coeffs.push_back(rat_str(plane.offset));
    pl["plane"] = coeffs;
    planes_log.push_back(pl);
  }
  if (trimmed && sp_.mode == StageMode::paper)
    throw std::logic_error("emit_family: paper-mode constants must cover the full family");
  if (entry) {
    (*entry)["planes"] = planes_log;
    (*entry)["budget_trimmed"] = trimmed;
  }
  return mv;
}

AliceMove WinningAlice::move(const Ball& current, const GameParams& params, int round) {
  if (round == 0) {
    if (current.center.size() != 3) throw std::domain_error("WinningAlice: dimension must be 3");
    if (current.radius != sp_.rho0)
      throw std::domain_error("WinningAlice: initial radius must equal rho0");
    if (!initial_ball_in_kappa_box(current, sp_))
      throw std::domain_error("WinningAlice: initial ball breaks the kappa box");
    b0_ = current;
  }
  json entry{{"round", round}};
  auto stage = stage_of_ball(current, sp_);
  AliceMove mv;
  if (!stage) {
    entry["stage"] = nullptr;  // radius gap: arbitrary (empty) move
    log_.push_back(entry);
    return mv;
  }
  long n = *stage;
  entry["stage"] = n;
  bool first_visit = false;
  if (!first_round_in_stage_.count(n)) {
    first_round_in_stage_[n] = round;
    first_visit = true;
    if (max_stage_seen_ >= 0 && n > max_stage_seen_ + 1) {
      json skipped = json::array();
      for (long s = max_stage_seen_ + 1; s < n; ++s) skipped.push_back(s);
      entry["skipped_stages"] = skipped;
    }
    max_stage_seen_ = std::max(max_stage_seen_, n);
  }
  last_family_truncated_ = false;
  bool safe = is_safe_stage_ball(current, n);
  entry["safe"] = safe;
  entry["family_truncated"] = last_family_truncated_;
  if (safe) safe_balls_.push_back({n, current});
  if (safe && first_visit) {
    condition_rounds_[n] = round;
    mv = emit_family(current, n, params, &entry);
    entry["emitted"] = static_cast<int>(mv.slabs.size());
  } else {
    entry["emitted"] = 0;
  }
  log_.push_back(entry);
  return mv;
}

}  // namespace bad3
