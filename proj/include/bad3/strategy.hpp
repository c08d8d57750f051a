#pragma once

// Alice's strategy for the potential game with the weighted
// badly-approximable target: track which of Bob's balls are stage-n "safe"
// balls (inside a safe parent and clear of every danger zone of their
// vector family), and on the first visit to each stage emit the family of
// vertical-plane slabs of widths 2 R^-(n+k) rho0 that trap any later escape
// into a danger zone.

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "bad3/diophantine.hpp"
#include "bad3/games.hpp"

namespace bad3 {

class WinningAlice : public AlicePlayer {
 public:
  // Weights with lambda == mu are rejected unless explicitly allowed (that
  // case is handled by a different argument and is not covered here).
  explicit WinningAlice(StageParams sp, bool allow_equal_weights = false);

  AliceMove move(const Ball& current, const GameParams& params, int round) override;

  // Stage-n safety: contained in a recorded safe stage-(n-1) ball and
  // provably clear of the danger zone of every member of its vector family.
  // A q_max-truncated family enumeration is surfaced in the round log.
  bool is_safe_stage_ball(const Ball& B, long n);

  // The cover plane for escapes into stage n+k below a safe stage-n ball:
  // common witness plane of a found representative pair, the anchored tilted
  // plane when the candidate vectors are all parallel (k = 1), or x = 0 when
  // no candidate exists (vacuous).
  Hyperplane cover_plane(const Ball& B, long n, int k, bool* truncated = nullptr);

  const StageParams& stage_params() const { return sp_; }
  const json& log() const { return log_; }
  const std::map<long, int>& condition_rounds() const { return condition_rounds_; }
  const std::map<std::pair<long, int>, Hyperplane>& planes() const { return planes_; }

 private:
  AliceMove emit_family(const Ball& B, long n, const GameParams& params, json* entry);

  StageParams sp_;
  std::optional<Ball> b0_;
  std::map<long, int> first_round_in_stage_;
  std::map<long, int> condition_rounds_;                    // stage -> round where it fired
  std::vector<std::pair<long, Ball>> safe_balls_;           // (stage, ball), along Bob's chain
  std::map<std::pair<long, int>, Hyperplane> planes_;       // (stage, k) -> emitted plane
  long max_stage_seen_ = -1;
  bool last_family_truncated_ = false;
  json log_ = json::array();
};

}  // namespace bad3
