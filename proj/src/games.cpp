#include "bad3/games.hpp"

#include <algorithm>

namespace bad3 {

std::string to_string(GameKind k) {
  switch (k) {
    case GameKind::schmidt: return "schmidt";
    case GameKind::absolute: return "absolute";
    case GameKind::potential: return "potential";
  }
  throw std::logic_error("unreachable");
}

GameKind game_kind_from_string(const std::string& s) {
  if (s == "schmidt") return GameKind::schmidt;
  if (s == "absolute") return GameKind::absolute;
  if (s == "potential") return GameKind::potential;
  throw std::invalid_argument("unknown game kind '" + s + "'");
}

void GameParams::validate() const {
  if (dimension < 1) throw std::domain_error("GameParams: dimension must be >= 1");
  if (max_rounds < 1) throw std::domain_error("GameParams: max_rounds must be >= 1");
  if (sgn(shrink_cap) <= 0 || shrink_cap >= 1)
    throw std::domain_error("GameParams: shrink_cap must be in (0,1)");
  switch (kind) {
    case GameKind::schmidt:
      if (sgn(alpha) <= 0 || alpha >= 1) throw std::domain_error("GameParams: alpha must be in (0,1)");
      if (sgn(beta) <= 0 || beta >= 1) throw std::domain_error("GameParams: beta must be in (0,1)");
      break;
    case GameKind::absolute:
      if (sgn(beta) <= 0 || beta >= rat(1, 3))
        throw std::domain_error("GameParams: absolute game needs beta in (0,1/3)");
      if (beta > shrink_cap) throw std::domain_error("GameParams: beta must be <= shrink_cap");
      break;
    case GameKind::potential:
      if (sgn(beta) <= 0 || beta >= 1) throw std::domain_error("GameParams: beta must be in (0,1)");
      if (sgn(gamma) <= 0) throw std::domain_error("GameParams: gamma must be > 0");
      if (beta > shrink_cap) throw std::domain_error("GameParams: beta must be <= shrink_cap");
      break;
  }
}

bool potential_budget_ok(const std::vector<Slab>& slabs, const Rational& beta, const Rational& gamma,
                         const Rational& rho) {
  Rational cap = beta * rho;
  if (gamma.get_den() == 1) {
    unsigned long g = gamma.get_num().get_ui();
    Rational sum(0);
    for (const auto& s : slabs) sum += rat_pow_ui(s.width, g);
    return sum <= rat_pow_ui(cap, g);
  }
  std::vector<PowTerm> terms;
  terms.reserve(slabs.size() + 1);
  for (const auto& s : slabs) terms.push_back({rat(1), s.width, gamma});
  terms.push_back({rat(-1), cap, gamma});
  CmpResult c = cmp_power_sum(terms, rat(0));
  return is_le(c.ord);  // undecided-at-cap counts as within budget
}

std::optional<std::string> alice_move_illegal(const GameParams& params, const Ball& current,
                                              const AliceMove& mv) {
  switch (params.kind) {
    case GameKind::schmidt: {
      if (!mv.ball) return "schmidt: Alice must move a ball";
      if (mv.ball->center.size() != current.center.size()) return "schmidt: dimension mismatch";
      if (mv.ball->radius != params.alpha * current.radius)
        return "schmidt: Alice radius must equal alpha*rho";
      Rational allow = (1 - params.alpha) * current.radius;
      if (norm_sq(sub(mv.ball->center, current.center)) > allow * allow)
        return "schmidt: Alice center drifted beyond (1-alpha)*rho";
      return std::nullopt;
    }
    case GameKind::absolute: {
      if (mv.ball || mv.slabs.size() != 1) return "absolute: Alice must delete exactly one slab";
      const Slab& s = mv.slabs[0];
      if (s.plane.normal.size() != current.center.size()) return "absolute: dimension mismatch";
      if (sgn(s.width) < 0) return "absolute: negative width";
      if (s.width > params.beta * current.radius) return "absolute: width exceeds beta*rho";
      return std::nullopt;
    }
    case GameKind::potential: {
      if (mv.ball) return "potential: Alice moves slabs only";
      for (const auto& s : mv.slabs) {
        if (s.plane.normal.size() != current.center.size()) return "potential: dimension mismatch";
        if (sgn(s.width) < 0) return "potential: negative width";
      }
      if (!potential_budget_ok(mv.slabs, params.beta, params.gamma, current.radius))
        return "potential: family exceeds the gamma-budget";
      return std::nullopt;
    }
  }
  throw std::logic_error("unreachable");
}

std::optional<std::string> bob_move_illegal(const GameParams& params, const Ball& current,
                                            const AliceMove& last_alice, const Ball& next) {
  if (next.center.size() != current.center.size()) return "bob: dimension mismatch";
  if (sgn(next.radius) <= 0) return "bob: radius must be positive";
  switch (params.kind) {
    case GameKind::schmidt: {
      if (!last_alice.ball) return "schmidt: missing Alice ball";
      const Ball& a = *last_alice.ball;
      if (next.radius != params.beta * a.radius) return "schmidt: Bob radius must equal beta*rho'";
      Rational allow = (1 - params.beta) * a.radius;
      if (norm_sq(sub(next.center, a.center)) > allow * allow)
        return "schmidt: Bob center drifted beyond (1-beta)*rho'";
      return std::nullopt;
    }
    case GameKind::absolute: {
      if (!ball_contains_ball(current, next)) return "absolute: Bob escaped the previous ball";
      if (next.radius < params.beta * current.radius) return "absolute: Bob radius below beta*rho";
      if (next.radius > params.shrink_cap * current.radius)
        return "absolute: Bob radius above shrink_cap*rho";
      if (last_alice.slabs.size() == 1 && !ball_avoids_slab(next, last_alice.slabs[0]))
        return "absolute: Bob touches the deleted slab";
      return std::nullopt;
    }
    case GameKind::potential: {
      if (!ball_contains_ball(current, next)) return "potential: Bob escaped the previous ball";
      if (next.radius < params.beta * current.radius) return "potential: Bob radius below beta*rho";
      if (next.radius > params.shrink_cap * current.radius)
        return "potential: Bob radius above shrink_cap*rho";
      return std::nullopt;
    }
  }
  throw std::logic_error("unreachable");
}

namespace {

GameTranscript run_game(AlicePlayer& alice, BobPlayer& bob, const GameParams& params,
                        const TargetOracle& oracle) {
  params.validate();
  GameTranscript t;
  t.params = params;
  Ball current = bob.initial_ball(params);
  if (current.center.size() != static_cast<size_t>(params.dimension) || sgn(current.radius) <= 0)
    throw std::domain_error("run_game: malformed initial ball");
  for (int i = 0; i < params.max_rounds; ++i) {
    AliceMove mv = alice.move(current, params, i);
    if (auto why = alice_move_illegal(params, current, mv)) {
      t.forfeit = Violation{i, "alice", *why};
      break;
    }
    auto next = bob.next_ball(current, mv, params, i);
    if (!next) {
      t.evidence["bob_stuck_round"] = i;
      t.rounds.push_back({current, mv});
      break;
    }
    if (auto why = bob_move_illegal(params, current, mv, *next)) {
      t.forfeit = Violation{i, "bob", *why};
      break;
    }
    t.rounds.push_back({current, mv});
    current = *next;
  }
  t.final_ball = current;

  bool certified = false;
  std::string reason = "none";
  if (oracle && oracle(t.final_ball.center)) {
    certified = true;
    reason = "target_oracle";
  }
  if (!certified && params.kind == GameKind::potential) {
    for (size_t i = 0; i < t.rounds.size() && !certified; ++i) {
      for (size_t k = 0; k < t.rounds[i].alice.slabs.size(); ++k) {
        if (point_in_slab(t.final_ball.center, t.rounds[i].alice.slabs[k])) {
          certified = true;
          reason = "slab";
          t.evidence["slab_hit"] = {{"round", i}, {"index", k}};
          break;
        }
      }
    }
  }
  t.verdict = certified ? Verdict::alice_certified : Verdict::undetermined;
  t.evidence["verdict_reason"] = reason;
  return t;
}

void require_kind(const GameParams& params, GameKind k, const char* who) {
  if (params.kind != k) throw std::domain_error(std::string(who) + ": wrong game kind");
}

}  // namespace

GameTranscript referee_schmidt(AlicePlayer& alice, BobPlayer& bob, const GameParams& params,
                               const TargetOracle& oracle) {
  require_kind(params, GameKind::schmidt, "referee_schmidt");
  return run_game(alice, bob, params, oracle);
}

GameTranscript referee_absolute(AlicePlayer& alice, BobPlayer& bob, const GameParams& params,
                                const TargetOracle& oracle) {
  require_kind(params, GameKind::absolute, "referee_absolute");
  return run_game(alice, bob, params, oracle);
}

GameTranscript referee_potential(AlicePlayer& alice, BobPlayer& bob, const GameParams& params,
                                 const TargetOracle& oracle) {
  require_kind(params, GameKind::potential, "referee_potential");
  return run_game(alice, bob, params, oracle);
}

std::vector<Violation> verify_transcript(const GameTranscript& t) {
  std::vector<Violation> out;
  for (size_t i = 0; i < t.rounds.size(); ++i) {
    const Ball& current = t.rounds[i].bob;
    if (auto why = alice_move_illegal(t.params, current, t.rounds[i].alice))
      out.push_back(Violation{static_cast<int>(i), "alice", *why});
    const Ball& next = i + 1 < t.rounds.size() ? t.rounds[i + 1].bob : t.final_ball;
    if (t.evidence.contains("bob_stuck_round") &&
        t.evidence["bob_stuck_round"].get<size_t>() == i)
      continue;  // no Bob move this round
    if (auto why = bob_move_illegal(t.params, current, t.rounds[i].alice, next))
      out.push_back(Violation{static_cast<int>(i), "bob", *why});
  }
  return out;
}

// ---- serialization ----

json ball_to_json(const Ball& b) {
  json c = json::array();
  for (const auto& x : b.center) c.push_back(rat_str(x));
  return json{{"center", c}, {"radius", rat_str(b.radius)}};
}

Ball ball_from_json(const json& j) {
  Ball b;
  for (const auto& c : j.at("center")) b.center.push_back(rat_parse(c.get<std::string>()));
  b.radius = rat_parse(j.at("radius").get<std::string>());
  return b;
}

namespace {

json slab_to_json(const Slab& s) {
  json n = json::array();
  for (const auto& x : s.plane.normal) n.push_back(rat_str(x));
  return json{{"normal", n}, {"offset", rat_str(s.plane.offset)}, {"width", rat_str(s.width)}};
}

Slab slab_from_json(const json& j) {
  std::vector<Rational> n;
  for (const auto& c : j.at("normal")) n.push_back(rat_parse(c.get<std::string>()));
  return Slab{make_hyperplane(std::move(n), rat_parse(j.at("offset").get<std::string>())),
              rat_parse(j.at("width").get<std::string>())};
}

json alice_move_to_json(const AliceMove& mv) {
  json j = json::object();
  if (mv.ball) j["ball"] = ball_to_json(*mv.ball);
  json slabs = json::array();
  for (const auto& s : mv.slabs) slabs.push_back(slab_to_json(s));
  j["slabs"] = slabs;
  j["truncated"] = mv.truncated;
  return j;
}

AliceMove alice_move_from_json(const json& j) {
  AliceMove mv;
  if (j.contains("ball")) mv.ball = ball_from_json(j["ball"]);
  for (const auto& s : j.at("slabs")) mv.slabs.push_back(slab_from_json(s));
  mv.truncated = j.value("truncated", false);
  return mv;
}

json params_to_json(const GameParams& p) {
  return json{{"kind", to_string(p.kind)},     {"alpha", rat_str(p.alpha)},
              {"beta", rat_str(p.beta)},       {"gamma", rat_str(p.gamma)},
              {"dimension", p.dimension},      {"max_rounds", p.max_rounds},
              {"shrink_cap", rat_str(p.shrink_cap)}};
}

GameParams params_from_json(const json& j) {
  GameParams p;
  p.kind = game_kind_from_string(j.at("kind").get<std::string>());
  p.alpha = rat_parse(j.at("alpha").get<std::string>());
  p.beta = rat_parse(j.at("beta").get<std::string>());
  p.gamma = rat_parse(j.at("gamma").get<std::string>());
  p.dimension = j.at("dimension").get<int>();
  p.max_rounds = j.at("max_rounds").get<int>();
  p.shrink_cap = rat_parse(j.at("shrink_cap").get<std::string>());
  return p;
}

}  // namespace

std::string transcript_to_jsonl(const GameTranscript& t) {
  std::string out;
  for (size_t i = 0; i < t.rounds.size(); ++i) {
    json bob{{"round", i}, {"mover", "bob"}, {"move", ball_to_json(t.rounds[i].bob)}};
    out += bob.dump();
    out += "\n";
    json alice{{"round", i}, {"mover", "alice"}, {"move", alice_move_to_json(t.rounds[i].alice)}};
    out += alice.dump();
    out += "\n";
  }
  json last{{"final_ball", ball_to_json(t.final_ball)},
            {"verdict", t.verdict == Verdict::alice_certified ? "alice_certified" : "undetermined"},
            {"evidence", t.evidence},
            {"params", params_to_json(t.params)}};
  if (t.forfeit)
    last["forfeit"] = json{{"round", t.forfeit->round}, {"mover", t.forfeit->mover}, {"rule", t.forfeit->rule}};
  out += last.dump();
  out += "\n";
  return out;
}

GameTranscript transcript_from_jsonl(const std::string& text) {
  GameTranscript t;
  std::vector<json> lines;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    std::string line = text.substr(pos, nl - pos);
    pos = nl + 1;
    if (!line.empty()) lines.push_back(json::parse(line));
  }
  if (lines.empty()) throw std::invalid_argument("transcript_from_jsonl: empty transcript");
  json last = lines.back();
  lines.pop_back();
  t.params = params_from_json(last.at("params"));
  t.final_ball = ball_from_json(last.at("final_ball"));
  t.verdict = last.at("verdict").get<std::string>() == "alice_certified" ? Verdict::alice_certified
                                                                         : Verdict::undetermined;
  t.evidence = last.value("evidence", json::object());
  if (last.contains("forfeit"))
    t.forfeit = Violation{last["forfeit"].at("round").get<int>(),
                          last["forfeit"].at("mover").get<std::string>(),
                          last["forfeit"].at("rule").get<std::string>()};
  RoundRecord rec;
  bool have_bob = false;
  for (const auto& l : lines) {
    if (l.at("mover") == "bob") {
      rec.bob = ball_from_json(l.at("move"));
      have_bob = true;
    } else {
      if (!have_bob) throw std::invalid_argument("transcript_from_jsonl: alice before bob");
      rec.alice = alice_move_from_json(l.at("move"));
      t.rounds.push_back(rec);
      rec = RoundRecord{};
      have_bob = false;
    }
  }
  return t;
}

// ---- built-in players ----

AliceMove CenterAlice::move(const Ball& current, const GameParams& params, int) {
  AliceMove mv;
  mv.ball = Ball{current.center, Rational(params.alpha * current.radius)};
  return mv;
}

AliceMove CenterSlabAlice::move(const Ball& current, const GameParams& params, int) {
  std::vector<Rational> normal(current.center.size(), rat(0));
  normal[0] = rat(1);
  Rational offset = -current.center[0];
  AliceMove mv;
  mv.slabs.push_back(Slab{make_hyperplane(std::move(normal), std::move(offset)),
                          Rational(params.beta * current.radius)});
  return mv;
}

AliceMove EmptyAlice::move(const Ball&, const GameParams&, int) { return AliceMove{}; }

CenterBob::CenterBob(Ball initial) : initial_(std::move(initial)) {}

Ball CenterBob::initial_ball(const GameParams&) { return initial_; }

std::optional<Ball> CenterBob::next_ball(const Ball&, const AliceMove& alice, const GameParams& params,
                                         int) {
  if (!alice.ball) return std::nullopt;
  return Ball{alice.ball->center, Rational(params.beta * alice.ball->radius)};
}

DodgeBob::DodgeBob(Ball initial) : initial_(std::move(initial)) {}

Ball DodgeBob::initial_ball(const GameParams&) { return initial_; }

std::optional<Ball> DodgeBob::next_ball(const Ball& current, const AliceMove& alice,
                                        const GameParams& params, int) {
  if (alice.slabs.size() != 1) return std::nullopt;
  const Hyperplane& plane = alice.slabs[0].plane;
  // exact unit normal needs ||n||^2 to be a perfect rational square
  Rational nn = norm_sq(plane.normal);
  if (!mpz_perfect_square_p(nn.get_num().get_mpz_t()) ||
      !mpz_perfect_square_p(nn.get_den().get_mpz_t()))
    return std::nullopt;
  BigInt rn, rd;
  mpz_sqrt(rn.get_mpz_t(), nn.get_num().get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), nn.get_den().get_mpz_t());
  Rational norm = rat_of(rn, rd);
  Rational side = dot(current.center, plane.normal) + plane.offset;
  Rational dir = sgn(side) >= 0 ? rat(1) : rat(-1);
  Rational shift = 2 * params.beta * current.radius;  // clearance shift; legal for beta < 1/3
  Ball next{current.center, Rational(params.beta * current.radius)};
  for (size_t i = 0; i < next.center.size(); ++i)
    next.center[i] += dir * shift * plane.normal[i] / norm;
  if (bob_move_illegal(params, current, alice, next)) return std::nullopt;
  return next;
}

RandomBob::RandomBob(Ball initial, uint64_t seed, int grid)
    : initial_(std::move(initial)), eng_(seed), grid_(grid) {}

Ball RandomBob::initial_ball(const GameParams&) { return initial_; }

std::optional<Ball> RandomBob::next_ball(const Ball& current, const AliceMove& alice,
                                         const GameParams& params, int) {
  const bool schmidt = params.kind == GameKind::schmidt;
  const Ball& base = schmidt ? *alice.ball : current;
  Rational shrink = params.beta * base.radius;
  Rational allow = schmidt ? Rational((1 - params.beta) * base.radius)
                           : Rational(current.radius - shrink);
  const size_t d = base.center.size();
  for (int grid = grid_; grid <= 64; grid *= 2) {
    std::vector<Ball> legal;
    std::vector<long> off(d, -grid);
    while (true) {
      Rational nsq(0);
      for (size_t i = 0; i < d; ++i) nsq += rat(off[i]) * rat(off[i]);
      if (nsq <= rat(grid) * rat(grid)) {
        Ball cand{base.center, shrink};
        for (size_t i = 0; i < d; ++i) cand.center[i] += rat(off[i], grid) * allow;
        if (!bob_move_illegal(params, current, alice, cand)) legal.push_back(std::move(cand));
      }
      size_t j = 0;
      while (j < d && ++off[j] > grid) off[j++] = -grid;
      if (j == d) break;
    }
    if (!legal.empty()) return legal[eng_() % legal.size()];
  }
  return std::nullopt;  // resign: no legal grid move found
}

GreedyBob::GreedyBob(Ball initial, Rational eps, Weights w, long q_cap)
    : initial_(std::move(initial)), eps_(std::move(eps)), weights_(std::move(w)), q_cap_(q_cap) {}

Ball GreedyBob::initial_ball(const GameParams&) { return initial_; }

std::optional<Ball> GreedyBob::next_ball(const Ball& current, const AliceMove& alice,
                                         const GameParams& params, int) {
  if (current.center.size() != 3) return std::nullopt;
  const Rational cx = current.center[0], cy = current.center[1], cz = current.center[2];
  // nearest danger-zone anchor (p/q, r/q, cz) by squared distance, ties to
  // smaller q (wider zones are easier to stay inside)
  bool found = false;
  Rational best_d2;
  Point target = current.center;
  for (long q = 1; q <= q_cap_; ++q) {
    Rational qy = rat(q) * cy;
    for (BigInt r : {rat_floor(qy), rat_ceil(qy)}) {
      Rational t = rat(q) * cx - cz * (qy - Rational(r));
      for (BigInt p : {rat_floor(t), rat_ceil(t)}) {
        Point anchor = {rat_of(p, BigInt(q)), rat_of(r, BigInt(q)), cz};
        Rational d2 = norm_sq(sub(anchor, current.center));
        if (!found || d2 < best_d2) {
          found = true;
          best_d2 = d2;
          target = anchor;
        }
      }
    }
  }
  Rational radius = params.beta * current.radius;
  Rational allow = current.radius - radius;  // keep the move inside the current ball
  Point step = sub(target, current.center);
  Rational len2 = norm_sq(step);
  Ball next{current.center, radius};
  if (len2 <= allow * allow) {
    next.center = target;
  } else if (sgn(len2) > 0) {
    // largest sixteenth-step toward the anchor that stays legal
    for (long j = 16; j >= 1; --j) {
      Rational s = rat(j, 16);
      if (s * s * len2 <= allow * allow) {
        for (size_t i = 0; i < 3; ++i) next.center[i] = current.center[i] + s * step[i];
        break;
      }
    }
  }
  if (bob_move_illegal(params, current, alice, next)) return std::nullopt;
  return next;
}

ReplayBob::ReplayBob(GameTranscript source) : source_(std::move(source)) {}

Ball ReplayBob::initial_ball(const GameParams&) {
  if (source_.rounds.empty()) return source_.final_ball;
  return source_.rounds[0].bob;
}

std::optional<Ball> ReplayBob::next_ball(const Ball&, const AliceMove&, const GameParams&, int round) {
  size_t next = static_cast<size_t>(round) + 1;
  if (next < source_.rounds.size()) return source_.rounds[next].bob;
  if (next == source_.rounds.size()) return source_.final_ball;
  return std::nullopt;
}

}  // namespace bad3
