#include "bad3/suites.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

namespace bad3 {

namespace {

constexpr size_t kMaxNotes = 20;

struct Outcome {
  bool ok = true;
  bool finding = false;
  bool counted = true;
  std::string note;
};

// Deterministic fan-out: outcomes are a pure function of the index, merged
// in index order.
SuiteResult run_indexed(const std::string& name, long n, const std::function<Outcome(long)>& body) {
  SuiteResult res;
  res.name = name;
  std::vector<Outcome> out(static_cast<size_t>(n));
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::thread> pool;
  std::atomic<long> next{0};
  for (unsigned t = 0; t < workers; ++t) {
    pool.emplace_back([&]() {
      for (long i = next.fetch_add(1); i < n; i = next.fetch_add(1)) out[static_cast<size_t>(i)] = body(i);
    });
  }
  for (auto& th : pool) th.join();
  for (long i = 0; i < n; ++i) {
    const Outcome& o = out[static_cast<size_t>(i)];
    if (!o.counted) continue;
    ++res.checked;
    if (o.finding) ++res.findings;
    if (!o.ok) ++res.failures;
    if (!o.note.empty() && res.notes.size() < kMaxNotes)
      res.notes.push_back("[" + std::to_string(i) + "] " + o.note);
  }
  return res;
}

std::mt19937_64 engine_for(const RunConfig& cfg, long i, uint64_t salt) {
  return std::mt19937_64(cfg.seed * 0x9e3779b97f4a7c15ULL + salt * 0x100000001b3ULL +
                         static_cast<uint64_t>(i));
}

Rational rand_rat(std::mt19937_64& eng, long num_lim, long den_lim) {
  return rat(static_cast<long>(eng() % (2 * num_lim + 1)) - num_lim, 1 + (eng() % den_lim));
}

const std::vector<Rational>& lambda_pool() {
  static const std::vector<Rational> pool = {rat(1, 2), rat(2, 3), rat(3, 5)};
  return pool;
}

StageParams desk_stage(const RunConfig& cfg, const Rational& lambda, const Rational& eps) {
  StageParams sp{rat(1), rat(2), rat(8), eps, rat(1, 2), rat(1), Weights(lambda)};
  sp.mode = StageMode::desk;
  sp.q_max = cfg.q_max;
  sp.k_max = cfg.k_max;
  return sp;
}

// largest q with q^(1+lambda) <= bound (0 when none)
BigInt q_cap_for_power(const Rational& bound, const Weights& w) {
  if (sgn(bound) <= 0) return BigInt(0);
  Rational bm = rat_pow_ui(bound, w.m);
  BigInt fl = rat_floor(bm);
  BigInt root;
  mpz_root(root.get_mpz_t(), fl.get_mpz_t(), w.m + w.l);
  return root;
}

}  // namespace

std::vector<std::string> suite_names() {
  return {"height", "witness", "partition", "separation", "budget", "avoidance",
          "cover",  "dani",    "slice",     "systole",    "endtoend"};
}

// ---- height: q <= H_B(v) <= q^(1+lambda) ----

SuiteResult suite_height(const RunConfig& cfg, long pairs) {
  return run_indexed("height", pairs, [&cfg](long i) {
    auto eng = engine_for(cfg, i, 1);
    Weights w(lambda_pool()[static_cast<size_t>(i) % lambda_pool().size()]);
    long q = 1 + static_cast<long>(eng() % 500);
    long p = static_cast<long>(eng() % (4 * q + 1)) - 2 * q;
    long r = static_cast<long>(eng() % (4 * q + 1)) - 2 * q;
    Ball B{{rand_rat(eng, 64, 64), rand_rat(eng, 64, 64), rand_rat(eng, 64, 64)},
           rat(1 + static_cast<long>(eng() % 63), 64)};
    IntVec v{BigInt(p), BigInt(r), BigInt(q)};
    SelectedWitness sw = select_witness(B, v, w);
    Outcome o;
    o.ok = sw.height >= Rational(v.q) && cmp_pow(Rational(v.q), Rational(1 + w.lambda), sw.height) != Ord::LT;
    if (!o.ok) o.note = "height bound broken at q=" + std::to_string(q);
    return o;
  });
}

// ---- witness: existence + validity + full-scan agreement ----

SuiteResult suite_witness(const RunConfig& cfg, long instances) {
  Weights w(cfg.lambda);
  return run_indexed("witness", instances, [&cfg, w](long i) {
    auto eng = engine_for(cfg, i, 2);
    Rational z = rat(static_cast<long>(i % 41) - 20, 10);  // the grid -2, -19/10, ..., 2
    long q = 1 + static_cast<long>(eng() % 200);
    long p = static_cast<long>(eng() % (4 * q + 1)) - 2 * q;
    long r = static_cast<long>(eng() % (4 * q + 1)) - 2 * q;
    IntVec v{BigInt(p), BigInt(r), BigInt(q)};
    Outcome o;
    Witness wit = minkowski_witness(z, v, w);
    Rational ql = rat_pow_ui(Rational(v.q), w.l);
    Rational qml = rat_pow_ui(Rational(v.q), w.m - w.l);
    bool valid = !(sgn(wit.a) == 0 && sgn(wit.b) == 0) &&
                 wit.a * v.p + wit.b * v.r + wit.c * v.q == 0 &&
                 rat_pow_ui(rat_abs(Rational(wit.a)), w.m) <= ql &&
                 rat_pow_ui(rat_abs(Rational(Rational(wit.b) + z * Rational(wit.a))), w.m) <= qml;
    // independent full scan: any valid triple will do
    bool oracle_found = false;
    for (long a = -q; a <= q && !oracle_found; ++a) {
      if (rat_pow_ui(rat_abs(rat(a)), w.m) > ql) continue;
      BigInt blo = rat_ceil(Rational(-z * rat(a) - rat(q)));
      BigInt bhi = rat_floor(Rational(-z * rat(a) + rat(q)));
      for (BigInt b = blo; b <= bhi && !oracle_found; ++b) {
        if (a == 0 && sgn(b) == 0) continue;
        if (rat_pow_ui(rat_abs(Rational(Rational(b) + z * rat(a))), w.m) > qml) continue;
        BigInt num = BigInt(a) * v.p + b * v.r;
        if (!mpz_divisible_p(num.get_mpz_t(), v.q.get_mpz_t())) continue;
        oracle_found = true;
      }
    }
    o.ok = valid && oracle_found;
    if (!o.ok) o.note = std::string(valid ? "oracle" : "returned witness") + " failed at q=" + std::to_string(q);
    return o;
  });
}

// ---- partition: family = union of its classes ----

SuiteResult suite_partition(const RunConfig& cfg, long instances) {
  return run_indexed("partition", instances, [&cfg](long i) {
    auto eng = engine_for(cfg, i, 3);
    Rational lambda = lambda_pool()[static_cast<size_t>(i) % lambda_pool().size()];
    bool deep = i % 50 == 49;  // a couple of stage-3 windows, the rest stage-2
    Rational eps = deep ? rat(1, 1024) : (i % 3 == 1 ? rat(1, 256) : rat(1, 1024));
    StageParams sp = desk_stage(cfg, lambda, eps);
    long n = deep ? 3 : 2;
    Rational top = rat_pow_ui(1 / sp.R, static_cast<unsigned long>(n)) * sp.rho0;
    long j = 1 + static_cast<long>(eng() % 33);
    Ball B{{rand_rat(eng, 32, 64), rand_rat(eng, 32, 64), rand_rat(eng, 32, 64)},
           Rational(top * (sp.beta + (1 - sp.beta) * rat(j, 33)))};
    Outcome o;
    if (stage_of_ball(B, sp) != n) {
      o.ok = false;
      o.note = "generator produced a ball outside its stage";
      return o;
    }
    VFamily fam = v_family(B, n, sp);
    if (fam.vs.empty()) {
      o.ok = false;
      o.note = "generator produced an empty family";
      return o;
    }
    for (const auto& v : fam.vs) {
      bool covered = false;
      for (int k = 1; k <= n && !covered; ++k) covered = v_class(B, n, k, sp, v);
      bool beyond = false;
      for (int k = static_cast<int>(n) + 1; k <= n + 2 && !beyond; ++k) beyond = v_class(B, n, k, sp, v);
      if (!covered || beyond) {
        o.ok = false;
        o.note = "class partition broken at q=" + v.q.get_str();
        return o;
      }
    }
    return o;
  });
}

// ---- separation: both inner-product bounds on hypothesis-true instances ----

SuiteResult suite_separation(const RunConfig& cfg, long target) {
  // catalog of instances: stage-1 ball around a half-integer anchor shared by
  // the non-reduced multiples (1,1,2)*t, plus shifted anchor pairs
  struct Instance {
    StageParams sp;
    Ball B, B1, B2;
    IntVec v1, v2;
  };
  std::vector<Instance> instances;
  std::vector<Rational> zs = {rat(0), rat(1, 4), rat(-1, 4), rat(1, 2), rat(-1, 2)};
  std::vector<std::pair<Rational, Rational>> centers = {
      {rat(1, 2), rat(1, 2)}, {rat(-1, 2), rat(1, 2)}, {rat(1, 2), rat(-1, 2)}, {rat(-1, 2), rat(-1, 2)}};
  for (const Rational& lambda : lambda_pool()) {
    StageParams sp = desk_stage(cfg, lambda, rat(1, 1024));
    for (const Rational& z : zs) {
      for (const auto& [cx, cy] : centers) {
        Ball B{{cx, cy, z}, rat(1, 9)};
        // candidate vectors anchored at (cx, cy) with q in the stage-2 class-1 window
        std::vector<IntVec> cands;
        for (long q = 1; q <= 6; ++q) {
          Rational pq = cx * rat(q), rq = cy * rat(q);
          if (pq.get_den() != 1 || rq.get_den() != 1) continue;
          IntVec v{pq.get_num(), rq.get_num(), BigInt(q)};
          Ball Bv{{cx, cy, z}, rat(1, 100)};
          if (v_class(Bv, 2, 1, sp, v)) cands.push_back(v);
        }
        for (size_t a = 0; a < cands.size(); ++a)
          for (size_t b = a; b < cands.size(); ++b) {
            instances.push_back(Instance{sp, B, Ball{{cx, cy, z}, rat(1, 100)},
                                         Ball{{cx, cy, z}, rat(1, 100)}, cands[a], cands[b]});
            if (static_cast<long>(instances.size()) >= target * 3) goto done;
          }
      }
    }
  }
done:
  SuiteResult res;
  res.name = "separation";
  for (const auto& inst : instances) {
    if (res.checked >= target) break;
    SepResult r = separation_bound_check(inst.B, inst.B1, inst.v1, inst.B2, inst.v2, inst.sp, 1);
    if (r.status == SepStatus::hypotheses_unmet) {
      if (res.notes.size() < kMaxNotes) res.notes.push_back("skipped: " + r.detail);
      continue;
    }
    ++res.checked;
    if (r.status == SepStatus::bound_violated) {
      ++res.failures;
      if (res.notes.size() < kMaxNotes) res.notes.push_back("violated: " + r.detail);
    }
  }
  if (res.checked < target) {
    ++res.failures;
    res.notes.push_back("generator exhausted before reaching the target count");
  }
  return res;
}

// ---- budget: per-round exact budget in real games + symbolic chain ----

SuiteResult suite_budget(const RunConfig& cfg, long games) {
  SuiteResult res = run_indexed("budget", games, [&cfg](long i) {
    RunConfig game_cfg = cfg;
    game_cfg.seed = cfg.seed + static_cast<uint64_t>(i);
    game_cfg.bob = i % 4 == 3 ? "greedy" : "random";
    game_cfg.greedy_q_cap = 4 + (i % 8) * 8;
    game_cfg.rounds = std::min(cfg.rounds, 12);
    PlayResult pr = run_play(game_cfg);
    Outcome o;
    if (!verify_transcript(pr.transcript).empty()) {
      o.ok = false;
      o.note = "transcript failed verification";
      return o;
    }
    for (const auto& rec : pr.transcript.rounds) {
      if (!potential_budget_ok(rec.alice.slabs, game_cfg.beta, game_cfg.gamma, rec.bob.radius)) {
        o.ok = false;
        o.note = "budget exceeded";
        return o;
      }
    }
    return o;
  });
  // symbolic closed-form chain for a paper-mode parameter set built from the
  // configured beta and gamma: sum_k (2 R^-(n+k) rho0)^gamma
  //   <= (2 R^-n rho0)^gamma (R^gamma - 1)^-1 <= (beta^2 R^-n rho0)^gamma
  //   <= (beta rho_i)^gamma for rho_i > beta R^-n rho0
  Rational R = std::max(Rational(4 / cfg.beta), Rational(10000000 * rat_pow_ui(cfg.kappa, 4))) * 2;
  StageParams sp{rat(1), cfg.kappa, R,
                 Rational(rat(1, 200) / (cfg.kappa * cfg.kappa) / rat_pow_ui(R, 10)),
                 cfg.beta, cfg.gamma, Weights(cfg.lambda)};
  sp.mode = StageMode::paper;
  sp.validate();  // includes (R^gamma - 1)^-1 <= (beta^2/2)^gamma, exactly
  for (long n : {0L, 5L, 17L}) {
    Rational base = rat_pow_si(sp.R, -n) * sp.rho0;
    std::vector<PowTerm> lhs;
    for (int k = 1; k <= sp.k_max; ++k)
      lhs.push_back({rat(1), Rational(2 * base * rat_pow_si(sp.R, -k)), sp.gamma});
    lhs.push_back({rat(-1), Rational(sp.beta * sp.beta * base), sp.gamma});
    CmpResult c = cmp_power_sum(lhs, rat(0));
    ++res.checked;
    if (!c.exact || c.ord == Ord::GT) {
      ++res.failures;
      res.notes.push_back("symbolic chain failed at stage " + std::to_string(n));
    }
  }
  return res;
}

// ---- avoidance: safe balls vs every low-q danger zone (empirical) ----

SuiteResult suite_avoidance(const RunConfig& cfg, long games) {
  SuiteResult res;
  res.name = "avoidance";
  for (long g = 0; g < games; ++g) {
    StageParams sp = cfg.stage_params();
    WinningAlice alice(sp, cfg.allow_equal_weights);
    RandomBob bob(cfg.initial_ball(), cfg.seed + 77 * static_cast<uint64_t>(g) + 5);
    GameParams gp = cfg.game_params();
    GameTranscript t = referee_potential(alice, bob, gp);
    for (const auto& entry : alice.log()) {
      if (entry["stage"].is_null() || !entry["safe"].get<bool>()) continue;
      long n = entry["stage"].get<long>();
      int round = entry["round"].get<int>();
      const Ball& B = t.rounds.at(static_cast<size_t>(round)).bob;
      // all v with q^(1+lambda) <= 2 H_{n+1} (q <= q_max), (p, r) forced near B
      BigInt qcap = q_cap_for_power(Rational(2 * sp.H(n + 1)), sp.weights);
      if (qcap > sp.q_max) qcap = sp.q_max;
      const Rational cx = B.center[0], cy = B.center[1];
      Rational zmax = rat_abs(B.center[2]) + B.radius;
      Rational rw = B.radius + sp.epsilon;
      Rational pw = B.radius + zmax * sp.epsilon + sp.epsilon;
      for (BigInt q(1); q <= qcap; ++q) {
        ++res.checked;  // one avoidance claim per (safe ball, q); empty windows are vacuous
        for (BigInt r = rat_ceil(Rational(Rational(q) * (cy - rw)));
             r <= rat_floor(Rational(Rational(q) * (cy + rw))); ++r) {
          for (BigInt p = rat_ceil(Rational(Rational(q) * (cx - pw)));
               p <= rat_floor(Rational(Rational(q) * (cx + pw))); ++p) {
            IntVec v{p, r, q};
            if (delta_avoids_ball_certified(B, v, sp.epsilon, sp.weights)) continue;
            bool met = delta_ball_common_point(B, v, sp.epsilon, sp.weights).has_value();
            ++res.findings;
            if (res.notes.size() < kMaxNotes)
              res.notes.push_back((met ? "danger zone meets safe ball" : "emptiness undecided") +
                                  std::string(" at stage ") + std::to_string(n));
          }
        }
      }
    }
  }
  return res;
}

// ---- cover: danger zones below a safe ball inside the emitted slab ----

SuiteResult suite_cover(const RunConfig& cfg, long instances) {
  return run_indexed("cover", instances, [&cfg](long i) {
    auto eng = engine_for(cfg, i, 6);
    // the cover construction assumes lambda strictly above mu
    Rational lambda = i % 2 == 0 ? rat(2, 3) : rat(3, 5);
    StageParams sp = desk_stage(cfg, lambda, rat(1, 1024));
    WinningAlice alice(sp, false);
    Ball B{{rand_rat(eng, 16, 32), rand_rat(eng, 16, 32), rand_rat(eng, 8, 16)}, rat(1, 9)};
    long n = 1;
    Outcome o;
    o.counted = false;
    Hyperplane L = alice.cover_plane(B, n, 1);
    Slab cover{L, Rational(rat_pow_ui(1 / sp.R, static_cast<unsigned long>(n + 1)) * sp.rho0)};
    auto window = class_q_window(n + 1, 1, sp);
    if (!window) return o;
    Rational inner = rat_pow_ui(1 / sp.R, static_cast<unsigned long>(n + 1)) * sp.rho0;
    for (BigInt q = window->lo; q <= window->hi; ++q) {
      for (BigInt r = rat_ceil(Rational(Rational(q) * (B.center[1] - B.radius)));
           r <= rat_floor(Rational(Rational(q) * (B.center[1] + B.radius))); ++r) {
        for (BigInt p = rat_ceil(Rational(Rational(q) * (B.center[0] - B.radius)));
             p <= rat_floor(Rational(Rational(q) * (B.center[0] + B.radius))); ++p) {
          IntVec v{p, r, q};
          Point anchor = {rat_of(p, q), rat_of(r, q), B.center[2]};
          if (!point_in_ball(anchor, Ball{B.center, Rational(B.radius - inner)})) continue;
          Ball Bp{anchor, inner};
          if (!v_class(Bp, n + 1, 1, sp, v)) continue;
          o.counted = true;
          // exact sample points of the danger zone inside B'
          Rational fw = sp.epsilon / rat_pow_ui(Rational(q), sp.weights.m) / 2;  // < eps/q^(1+lambda)
          Rational gw = sp.epsilon / rat_pow_ui(Rational(q), sp.weights.m) / 2;
          for (long dx = -1; dx <= 1; ++dx) {
            for (long dy = -1; dy <= 1; ++dy) {
              for (long dz = -1; dz <= 1; dz += 2) {
                Point x = {anchor[0] + rat(dx) * fw, anchor[1] + rat(dy) * gw,
                           anchor[2] + rat(dz) * inner / 2};
                x[0] += x[2] * (x[1] - anchor[1]);  // keep the sheared form small
                if (!point_in_ball(x, Bp)) continue;
                if (!delta_contains(v, sp.epsilon, sp.weights, x)) continue;
                if (!point_in_slab(x, cover)) {
                  // at desk constants coverage is empirical: report a
                  // finding rather than a failure
                  o.ok = cfg.mode == StageMode::paper ? false : true;
                  o.finding = true;
                  o.note = "sampled danger point escapes the cover slab at q=" + q.get_str();
                  return o;
                }
              }
            }
          }
        }
      }
    }
    return o;
  });
}

// ---- dani: truncated correspondence on rational and near-irrational points ----

SuiteResult suite_dani(const RunConfig& cfg, long points) {
  Weights w(cfg.lambda);
  auto grid = halving_grid(w, cfg.grid_exp);
  return run_indexed("dani", points, [&cfg, w, grid](long i) {
    auto eng = engine_for(cfg, i, 7);
    auto surd_trunc = [&](long radicand) {
      BigInt shifted = BigInt(radicand) << 80;
      BigInt root;
      mpz_sqrt(root.get_mpz_t(), shifted.get_mpz_t());
      return rat_of(root - (BigInt(1) << 40), BigInt(1) << 41);  // (sqrt(d)-1)/2 to 40 bits
    };
    Rational x, y, z;
    switch (i % 5) {
      case 0:  // exact rational hit material
        x = rand_rat(eng, 30, 37);
        y = rand_rat(eng, 30, 37);
        z = rand_rat(eng, 4, 4);
        break;
      case 1:
        x = surd_trunc(5);
        y = surd_trunc(5);
        z = rat(0);
        break;
      case 2:
        x = surd_trunc(2);
        y = surd_trunc(3);
        z = rat(static_cast<long>(i % 3) - 1, 2);
        break;
      case 3:
        x = surd_trunc(5);
        y = rand_rat(eng, 20, 23);
        z = rat(1, 2);
        break;
      default:
        x = Rational(surd_trunc(7) + rand_rat(eng, 3, 11));
        y = surd_trunc(13);
        z = rand_rat(eng, 2, 3);
        break;
    }
    DaniReport r = dani_check(x, y, z, w, cfg.Q, grid);
    Outcome o;
    o.ok = r.ok();
    if (!o.ok) o.note = "correspondence implication failed";
    return o;
  });
}

// ---- slice: badness(x, y, z) = badness(x - z y, y, 0) for integer z ----

SuiteResult suite_slice(const RunConfig& cfg, long points) {
  Weights w(cfg.lambda);
  return run_indexed("slice", points, [&cfg, w](long i) {
    auto eng = engine_for(cfg, i, 8);
    Rational x = rand_rat(eng, 40, 50);
    Rational y = rand_rat(eng, 40, 50);
    Outcome o;
    for (long z = -2; z <= 2; ++z) {
      PowExpr lhs = badness_constant(x, y, rat(z), w, 500);
      PowExpr rhs = badness_constant(Rational(x - rat(z) * y), y, rat(0), w, 500);
      if (cmp(lhs, rhs) != Ord::EQ) {
        o.ok = false;
        o.note = "slice equality broken at z=" + std::to_string(z);
        return o;
      }
    }
    return o;
  });
}

// ---- systole: reduction path against the plain box reference ----

SystoleResult systole_box_reference(const Mat3& basis, long cap) {
  // scale to a common denominator: the enumeration then runs on integers
  BigInt D(1);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      mpz_lcm(D.get_mpz_t(), D.get_mpz_t(), basis[i][j].get_den().get_mpz_t());
  BigInt W[3][3];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Rational scaled = basis[i][j] * Rational(D);
      if (scaled.get_den() != 1) throw std::logic_error("systole_box_reference: bad scaling");
      W[i][j] = scaled.get_num();
    }
  auto scaled_norm = [&](const BigInt& a, const BigInt& b, const BigInt& c) {
    BigInt s = abs(W[0][0] * a + W[0][1] * b + W[0][2] * c);
    for (int i = 1; i < 3; ++i) {
      BigInt t = abs(W[i][0] * a + W[i][1] * b + W[i][2] * c);
      if (t > s) s = t;
    }
    return s;
  };
  bool have_bound = false;
  BigInt bound;  // best sup norm times D so far
  for (long a = -1; a <= 1; ++a)
    for (long b = -1; b <= 1; ++b)
      for (long c = -1; c <= 1; ++c) {
        if (a == 0 && b == 0 && c == 0) continue;
        BigInt s = scaled_norm(BigInt(a), BigInt(b), BigInt(c));
        if (!have_bound || s < bound) {
          have_bound = true;
          bound = s;
        }
      }
  Mat3 inv = mat_inverse(basis);
  Rational bound_rat = rat_of(bound, D);
  long N[3];
  long volume = 1;
  for (int i = 0; i < 3; ++i) {
    Rational s(0);
    for (int j = 0; j < 3; ++j) s += rat_abs(inv[i][j]);
    BigInt ni = rat_floor(Rational(s * bound_rat));
    if (!ni.fits_slong_p()) throw std::runtime_error("systole_box_reference: box too large");
    N[i] = ni.get_si();
    volume *= 2 * N[i] + 1;
    if (volume > cap) throw std::runtime_error("systole_box_reference: box too large");
  }
  bool found = false;
  BigInt best;
  std::array<BigInt, 3> best_n{};
  BigInt w0, w1, w2, t0, t1, t2, m;
  for (long a = 0; a <= N[0]; ++a) {  // half space: first nonzero positive
    long b_lo = a == 0 ? 0 : -N[1];
    for (long b = b_lo; b <= N[1]; ++b) {
      long c_lo = (a == 0 && b == 0) ? 1 : -N[2];
      // incremental: w = a col0 + b col1 + c col2, stepping c
      for (int i = 0; i < 3; ++i) {
        BigInt base = W[i][0] * a + W[i][1] * b + W[i][2] * c_lo;
        (i == 0 ? w0 : i == 1 ? w1 : w2) = base;
      }
      for (long c = c_lo; c <= N[2]; ++c) {
        mpz_abs(t0.get_mpz_t(), w0.get_mpz_t());
        mpz_abs(t1.get_mpz_t(), w1.get_mpz_t());
        mpz_abs(t2.get_mpz_t(), w2.get_mpz_t());
        m = t0 >= t1 ? (t0 >= t2 ? t0 : t2) : (t1 >= t2 ? t1 : t2);
        if (!found || m < best) {
          found = true;
          best = m;
          best_n = {BigInt(a), BigInt(b), BigInt(c)};
        }
        w0 += W[0][2];
        w1 += W[1][2];
        w2 += W[2][2];
      }
    }
  }
  if (!found) throw std::runtime_error("systole_box_reference: empty box");
  return SystoleResult{rat_of(best, D), best_n};
}

SuiteResult suite_systole(const RunConfig& cfg, long bases) {
  SuiteResult res = run_indexed("systole", bases, [&cfg](long i) {
    Weights w(lambda_pool()[static_cast<size_t>(i) % lambda_pool().size()]);
    Outcome o;
    for (int attempt = 0; attempt < 64; ++attempt) {
      auto eng = engine_for(cfg, i, 9 + 1000 * static_cast<uint64_t>(attempt));
      auto small = [&](long lim, long den) {
        return rat(static_cast<long>(eng() % (2 * lim + 1)) - lim, den);
      };
      Mat3 m = unipotent(small(8, 4), small(8, 4), small(8, 4));
      m = flow_apply(w, FlowTime{rat(1 + static_cast<long>(eng() % 3), 4), w.m}, m);
      m = mat_mul(m, unipotent(small(6, 8), small(6, 8), small(6, 8)));
      SystoleResult mine = systole(m);
      if (mine.value > 1) {
        o.ok = false;
        o.note = "systole above the unit-cube bound";
        return o;
      }
      Vec3 im = mat_vec(m, {Rational(mine.argmin[0]), Rational(mine.argmin[1]), Rational(mine.argmin[2])});
      Rational norm = std::max(rat_abs(im[0]), std::max(rat_abs(im[1]), rat_abs(im[2])));
      if (norm != mine.value) {
        o.ok = false;
        o.note = "returned witness does not attain the value";
        return o;
      }
      try {
        SystoleResult ref = systole_box_reference(m);
        o.ok = mine.value == ref.value;
        if (!o.ok) o.note = "reduction path disagrees with the box reference";
        return o;
      } catch (const std::runtime_error&) {
        continue;  // box infeasible for the reference: redraw the instance
      }
    }
    o.ok = false;
    o.note = "no reference-checkable instance after 64 draws";
    return o;
  });
  // pinned instances
  res.checked += 2;
  SystoleResult z3 = systole(mat_identity());
  if (z3.value != rat(1)) {
    ++res.failures;
    res.notes.push_back("Z^3 systole is not 1");
  }
  Weights w12(rat(1, 2));
  SystoleResult d = systole(flow_apply(w12, FlowTime{rat(1, 2), 2}, mat_identity()));
  if (d.value != rat(1, 4) || d.argmin != std::array<BigInt, 3>{BigInt(0), BigInt(0), BigInt(1)}) {
    ++res.failures;
    res.notes.push_back("diag(2,2,1/4) instance broken");
  }
  return res;
}

// ---- endtoend: completed games end certified ----

SuiteResult suite_endtoend(const RunConfig& cfg, long games) {
  return run_indexed("endtoend", games, [&cfg, games](long i) {
    RunConfig game_cfg = cfg;
    if (i < games / 2) {
      game_cfg.bob = "random";
      game_cfg.seed = cfg.seed + static_cast<uint64_t>(i);
    } else {
      game_cfg.bob = "greedy";
      static const long caps[] = {4, 8, 12, 16, 24, 32, 48, 64, 96, 128};
      game_cfg.greedy_q_cap = caps[i % 10];
    }
    PlayResult pr = run_play(game_cfg);
    Outcome o;
    o.ok = pr.certified && !pr.transcript.forfeit && verify_transcript(pr.transcript).empty();
    if (!o.ok)
      o.note = game_cfg.bob + " game not certified (" +
               pr.transcript.evidence.value("verdict_reason", std::string("?")) + ")";
    return o;
  });
}

SuiteResult run_suite(const std::string& name, const RunConfig& cfg) {
  if (name == "height") return suite_height(cfg, 10000);
  if (name == "witness") return suite_witness(cfg, 10250);
  if (name == "partition") return suite_partition(cfg, 100);
  if (name == "separation") return suite_separation(cfg, 50);
  if (name == "budget") return suite_budget(cfg, 200);
  if (name == "avoidance") return suite_avoidance(cfg, 3);
  if (name == "cover") return suite_cover(cfg, 40);
  if (name == "dani") return suite_dani(cfg, 50);
  if (name == "slice") return suite_slice(cfg, 50);
  if (name == "systole") return suite_systole(cfg, 1000);
  if (name == "endtoend") return suite_endtoend(cfg, 20);
  throw std::invalid_argument("unknown suite '" + name + "'");
}

std::string suite_report_line(const SuiteResult& r) {
  std::ostringstream out;
  out << (r.pass() ? "PASS" : "FAIL") << " " << r.name << " checked=" << r.checked
      << " failures=" << r.failures << " findings=" << r.findings;
  return out.str();
}

}  // namespace bad3
