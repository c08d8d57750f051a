#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "bad3/config.hpp"

using namespace bad3;

TEST_CASE("config parsing") {
  RunConfig cfg = config_from_text(R"(
# comment
lambda = 3/5
beta = 1/2
gamma = 1
rounds = 9
mode = desk
R = 8
epsilon = 1/512
kappa = 3
rho0 = 1
q_max = 500
b0_center = 0, 1/8, -1/8
bob = greedy
seed = 42
greedy_q_cap = 12
)");
  CHECK(cfg.lambda == rat(3, 5));
  CHECK(cfg.rounds == 9);
  CHECK(cfg.b0_center[1] == rat(1, 8));
  CHECK(cfg.bob == "greedy");
  CHECK(cfg.seed == 42);
}

TEST_CASE("config errors name the offending field") {
  CHECK_THROWS_WITH_AS(config_from_text("lambda = x\n"), doctest::Contains("lambda"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(config_from_text("rounds = five\n"), doctest::Contains("rounds"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(config_from_text("nonsense = 1\n"), doctest::Contains("nonsense"),
                       std::invalid_argument);
  // beta >= 1 rejected at load via the game validation
  CHECK_THROWS_AS(config_from_text("beta = 1\n"), std::domain_error);
  // initial ball must respect the kappa box
  CHECK_THROWS_WITH_AS(config_from_text("b0_center = 5, 0, 0\n"), doctest::Contains("b0_center"),
                       std::invalid_argument);
  // paper-mode inequalities re-verified exactly at load
  CHECK_THROWS_AS(config_from_text("mode = paper\n"), std::domain_error);
}

TEST_CASE("play runs are byte-identical for identical configs and seeds") {
  RunConfig cfg;
  cfg.rounds = 6;
  cfg.seed = 7;
  PlayResult a = run_play(cfg);
  PlayResult b = run_play(cfg);
  CHECK(a.jsonl == b.jsonl);
  RunConfig other = cfg;
  other.seed = 8;
  CHECK(run_play(other).jsonl != a.jsonl);
}

TEST_CASE("replay reproduces the transcript file byte for byte") {
  RunConfig cfg;
  cfg.rounds = 6;
  cfg.seed = 11;
  PlayResult original = run_play(cfg);
  std::string path = "replay_roundtrip.jsonl";
  {
    std::ofstream out(path, std::ios::binary);
    out << original.jsonl;
  }
  RunConfig replay_cfg = cfg;
  replay_cfg.bob = "replay";
  replay_cfg.replay_file = path;
  PlayResult replayed = run_play(replay_cfg);
  CHECK(replayed.jsonl == original.jsonl);
  std::remove(path.c_str());
}

TEST_CASE("paper-mode stage coverage") {
  RunConfig cfg;
  cfg.mode = StageMode::paper;
  cfg.R = rat(200000000);
  cfg.epsilon = Rational(rat(1, 200) / (cfg.kappa * cfg.kappa) / rat_pow_ui(cfg.R, 10));
  StageCoverage cov = stage_coverage(cfg.stage_params());
  CHECK(cov.first_nonempty >= 8);   // families stay empty at desk-reachable stages
  CHECK(cov.first_truncated >= cov.first_nonempty);
}
