#pragma once

// Run configuration: a documented key = value file mapped onto game and
// stage parameters, plus the play runner used by both the CLI and the
// acceptance suite. All randomness is seeded from the config; reruns are
// byte-identical.

#include <cstdint>
#include <memory>
#include <string>

#include "bad3/strategy.hpp"

namespace bad3 {

struct RunConfig {
  // weights
  Rational lambda = rat(2, 3);
  // game
  Rational beta = rat(1, 2);
  Rational gamma = rat(1);
  int rounds = 15;
  Rational shrink_cap = rat(99, 100);
  int k_max = 6;
  // stage machinery
  StageMode mode = StageMode::desk;
  Rational R = rat(8);
  Rational epsilon = rat(1, 1024);
  Rational kappa = rat(2);
  Rational rho0 = rat(1);
  long q_max = 1000;
  // initial ball
  Point b0_center = {rat(0), rat(0), rat(0)};
  // players / reproducibility
  std::string bob = "random";  // random | greedy | replay
  uint64_t seed = 1;
  long greedy_q_cap = 32;
  std::string replay_file;
  // dynamics-side knobs
  long Q = 200;
  unsigned long grid_exp = 20;
  bool allow_equal_weights = false;
  bool with_float = false;

  StageParams stage_params() const;
  GameParams game_params() const;
  Ball initial_ball() const;
  // Throws with the offending field name on any invariant violation;
  // paper-mode constant inequalities are re-verified exactly here.
  void validate() const;
};

RunConfig config_from_text(const std::string& text);
RunConfig config_from_file(const std::string& path);

struct PlayResult {
  GameTranscript transcript;
  std::string jsonl;        // serialized transcript, strategy log merged in
  bool certified = false;
};

std::unique_ptr<BobPlayer> make_bob(const RunConfig& cfg);

// One potential game: the winning strategy against the configured Bob, with
// the finite-truncation safe-set oracle deciding the horizon verdict.
PlayResult run_play(const RunConfig& cfg);

// Paper-mode runs are legal but empty at small stages: the first stage whose
// vector-family window reaches q = 1, and the first whose window exceeds
// q_max (enumeration truncated from there on).
struct StageCoverage {
  long first_nonempty = -1;
  long first_truncated = -1;
};
StageCoverage stage_coverage(const StageParams& sp, long max_stage = 400);

}  // namespace bad3
