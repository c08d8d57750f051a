#pragma once

// Referees for three nested-ball games with pluggable players, exact
// legality enforcement, replayable transcripts and finite-horizon verdicts.
//
//   schmidt:   Alice picks a ball of radius alpha*rho inside Bob's, Bob a
//              ball of radius beta*rho' inside Alice's.
//   absolute:  Alice deletes one hyperplane neighborhood of width <= beta*rho,
//              Bob stays inside the previous ball and clear of it.
//   potential: Alice declares a finite slab family under the budget
//              sum width^gamma <= (beta*rho)^gamma, Bob only stays inside.
//
// A verdict is certified at the horizon, never a statement about the
// infinite game.

#include <json.hpp>

#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "bad3/diophantine.hpp"
#include "bad3/geometry.hpp"

namespace bad3 {

using json = nlohmann::json;

enum class GameKind { schmidt, absolute, potential };

std::string to_string(GameKind k);
GameKind game_kind_from_string(const std::string& s);

struct GameParams {
  GameKind kind = GameKind::potential;
  Rational alpha = rat(1, 2);        // schmidt
  Rational beta = rat(1, 2);
  Rational gamma = rat(1);           // potential
  int dimension = 3;
  int max_rounds = 10;
  Rational shrink_cap = rat(99, 100);  // radius ratio cap forcing rho_i -> 0

  void validate() const;
};

struct AliceMove {
  std::optional<Ball> ball;   // schmidt
  std::vector<Slab> slabs;    // absolute: exactly one; potential: any finite list
  bool truncated = false;     // potential: family cut at k_max or at the budget
};

struct Violation {
  int round;
  std::string mover;  // "alice" | "bob"
  std::string rule;
};

enum class Verdict { alice_certified, undetermined };

struct RoundRecord {
  Ball bob;
  AliceMove alice;
};

struct GameTranscript {
  GameParams params;
  std::vector<RoundRecord> rounds;  // rounds[i] = (B_i, A_i)
  Ball final_ball;
  Verdict verdict = Verdict::undetermined;
  json evidence = json::object();
  std::optional<Violation> forfeit;
};

class AlicePlayer {
 public:
  virtual ~AlicePlayer() = default;
  virtual AliceMove move(const Ball& current, const GameParams& params, int round) = 0;
};

class BobPlayer {
 public:
  virtual ~BobPlayer() = default;
  virtual Ball initial_ball(const GameParams& params) = 0;
  // nullopt = explicit resignation
  virtual std::optional<Ball> next_ball(const Ball& current, const AliceMove& alice,
                                        const GameParams& params, int round) = 0;
};

using TargetOracle = std::function<bool(const Point&)>;

// Legality predicates, shared by the referees and verify_transcript.
// nullopt = legal, otherwise the violated rule.
std::optional<std::string> alice_move_illegal(const GameParams& params, const Ball& current,
                                              const AliceMove& mv);
std::optional<std::string> bob_move_illegal(const GameParams& params, const Ball& current,
                                            const AliceMove& last_alice, const Ball& next);

// Exact budget test sum_k width_k^gamma <= (beta*rho)^gamma. For fractional
// gamma an undecided comparison at the precision cap counts as within budget
// (inclusive-<= convention).
bool potential_budget_ok(const std::vector<Slab>& slabs, const Rational& beta, const Rational& gamma,
                         const Rational& rho);

GameTranscript referee_schmidt(AlicePlayer& alice, BobPlayer& bob, const GameParams& params,
                               const TargetOracle& oracle = nullptr);
GameTranscript referee_absolute(AlicePlayer& alice, BobPlayer& bob, const GameParams& params,
                                const TargetOracle& oracle = nullptr);
GameTranscript referee_potential(AlicePlayer& alice, BobPlayer& bob, const GameParams& params,
                                 const TargetOracle& oracle = nullptr);

// Replays every legality predicate; empty for referee-produced transcripts.
std::vector<Violation> verify_transcript(const GameTranscript& t);

std::string transcript_to_jsonl(const GameTranscript& t);
GameTranscript transcript_from_jsonl(const std::string& text);

json ball_to_json(const Ball& b);
Ball ball_from_json(const json& j);

// ---- built-in players ----

// Schmidt: stays at the center of the allowed region.
class CenterAlice : public AlicePlayer {
 public:
  AliceMove move(const Ball& current, const GameParams& params, int round) override;
};

// Absolute: cuts the slab through Bob's center with width beta*rho, normal e1.
class CenterSlabAlice : public AlicePlayer {
 public:
  AliceMove move(const Ball& current, const GameParams& params, int round) override;
};

// Potential: declares nothing every round (zero budget).
class EmptyAlice : public AlicePlayer {
 public:
  AliceMove move(const Ball& current, const GameParams& params, int round) override;
};

// Schmidt Bob: concentric play.
class CenterBob : public BobPlayer {
 public:
  explicit CenterBob(Ball initial);
  Ball initial_ball(const GameParams& params) override;
  std::optional<Ball> next_ball(const Ball& current, const AliceMove& alice, const GameParams& params,
                                int round) override;

 private:
  Ball initial_;
};

// Absolute Bob: shifts 2*beta*rho along the slab normal, radius beta*rho.
class DodgeBob : public BobPlayer {
 public:
  explicit DodgeBob(Ball initial);
  Ball initial_ball(const GameParams& params) override;
  std::optional<Ball> next_ball(const Ball& current, const AliceMove& alice, const GameParams& params,
                                int round) override;

 private:
  Ball initial_;
};

// Uniformly random legal ball: center drawn on a rational grid inside the
// legal region, radius beta*rho. Deterministic for a fixed seed.
class RandomBob : public BobPlayer {
 public:
  RandomBob(Ball initial, uint64_t seed, int grid = 4);
  Ball initial_ball(const GameParams& params) override;
  std::optional<Ball> next_ball(const Ball& current, const AliceMove& alice, const GameParams& params,
                                int round) override;

 private:
  Ball initial_;
  std::mt19937_64 eng_;
  int grid_;
};

// Steers toward the nearest danger-zone anchor (p/q, r/q, z) it can find by
// bounded enumeration, trying to defeat Alice. Deterministic.
class GreedyBob : public BobPlayer {
 public:
  GreedyBob(Ball initial, Rational eps, Weights w, long q_cap);
  Ball initial_ball(const GameParams& params) override;
  std::optional<Ball> next_ball(const Ball& current, const AliceMove& alice, const GameParams& params,
                                int round) override;

 private:
  Ball initial_;
  Rational eps_;
  Weights weights_;
  long q_cap_;
};

// Replays the Bob side of a recorded transcript.
class ReplayBob : public BobPlayer {
 public:
  explicit ReplayBob(GameTranscript source);
  Ball initial_ball(const GameParams& params) override;
  std::optional<Ball> next_ball(const Ball& current, const AliceMove& alice, const GameParams& params,
                                int round) override;

 private:
  GameTranscript source_;
};

}  // namespace bad3
