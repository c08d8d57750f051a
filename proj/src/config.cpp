#include "bad3/config.hpp"

#include <fstream>
#include <sstream>

namespace bad3 {

namespace {

long parse_long(const std::string& key, const std::string& value) {
  try {
    size_t used = 0;
    long v = std::stol(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config field '" + key + "': bad integer '" + value + "'");
  }
}

Rational parse_rat_field(const std::string& key, const std::string& value) {
  try {
    return rat_parse(value);
  } catch (const std::exception&) {
    throw std::invalid_argument("config field '" + key + "': bad rational '" + value + "'");
  }
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

StageParams RunConfig::stage_params() const {
  StageParams sp{rho0, kappa, R, epsilon, beta, gamma, Weights(lambda)};
  sp.mode = mode;
  sp.q_max = q_max;
  sp.k_max = k_max;
  return sp;
}

GameParams RunConfig::game_params() const {
  GameParams gp;
  gp.kind = GameKind::potential;
  gp.beta = beta;
  gp.gamma = gamma;
  gp.dimension = 3;
  gp.max_rounds = rounds;
  gp.shrink_cap = shrink_cap;
  return gp;
}

Ball RunConfig::initial_ball() const { return Ball{b0_center, rho0}; }

void RunConfig::validate() const {
  StageParams sp = stage_params();  // Weights ctor validates lambda
  sp.validate();
  game_params().validate();
  if (b0_center.size() != 3) throw std::invalid_argument("config field 'b0_center': need 3 coordinates");
  if (!initial_ball_in_kappa_box(initial_ball(), sp))
    throw std::invalid_argument("config field 'b0_center': initial ball breaks the kappa box");
  if (bob != "random" && bob != "greedy" && bob != "replay")
    throw std::invalid_argument("config field 'bob': must be random, greedy or replay");
  if (bob == "replay" && replay_file.empty())
    throw std::invalid_argument("config field 'replay_file': required for bob = replay");
  if (Q < 1) throw std::invalid_argument("config field 'Q': must be >= 1");
  if (greedy_q_cap < 1) throw std::invalid_argument("config field 'greedy_q_cap': must be >= 1");
}

RunConfig config_from_text(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("config: missing '=' in line '" + line + "'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key == "lambda") cfg.lambda = parse_rat_field(key, value);
    else if (key == "beta") cfg.beta = parse_rat_field(key, value);
    else if (key == "gamma") cfg.gamma = parse_rat_field(key, value);
    else if (key == "rounds") cfg.rounds = static_cast<int>(parse_long(key, value));
    else if (key == "shrink_cap") cfg.shrink_cap = parse_rat_field(key, value);
    else if (key == "k_max") cfg.k_max = static_cast<int>(parse_long(key, value));
    else if (key == "mode") {
      if (value == "desk") cfg.mode = StageMode::desk;
      else if (value == "paper") cfg.mode = StageMode::paper;
      else throw std::invalid_argument("config field 'mode': must be desk or paper");
    } else if (key == "R") cfg.R = parse_rat_field(key, value);
    else if (key == "epsilon") cfg.epsilon = parse_rat_field(key, value);
    else if (key == "kappa") cfg.kappa = parse_rat_field(key, value);
    else if (key == "rho0") cfg.rho0 = parse_rat_field(key, value);
    else if (key == "q_max") cfg.q_max = parse_long(key, value);
    else if (key == "b0_center") {
      cfg.b0_center.clear();
      std::istringstream cs(value);
      std::string coord;
      while (std::getline(cs, coord, ',')) cfg.b0_center.push_back(parse_rat_field(key, trim(coord)));
    } else if (key == "bob") cfg.bob = value;
    else if (key == "seed") cfg.seed = static_cast<uint64_t>(parse_long(key, value));
    else if (key == "greedy_q_cap") cfg.greedy_q_cap = parse_long(key, value);
    else if (key == "replay_file") cfg.replay_file = value;
    else if (key == "Q") cfg.Q = parse_long(key, value);
    else if (key == "grid_exp") cfg.grid_exp = static_cast<unsigned long>(parse_long(key, value));
    else if (key == "allow_equal_weights") cfg.allow_equal_weights = (value == "true" || value == "1");
    else if (key == "with_float") cfg.with_float = (value == "true" || value == "1");
    else throw std::invalid_argument("config: unknown key '" + key + "'");
  }
  cfg.validate();
  return cfg;
}

RunConfig config_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return config_from_text(buf.str());
}

namespace {

GameTranscript load_replay_source(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open replay file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return transcript_from_jsonl(buf.str());
}

}  // namespace

std::unique_ptr<BobPlayer> make_bob(const RunConfig& cfg) {
  Ball b0 = cfg.initial_ball();
  if (cfg.bob == "random") return std::make_unique<RandomBob>(b0, cfg.seed);
  if (cfg.bob == "greedy")
    return std::make_unique<GreedyBob>(b0, cfg.epsilon, Weights(cfg.lambda), cfg.greedy_q_cap);
  return std::make_unique<ReplayBob>(load_replay_source(cfg.replay_file));
}

PlayResult run_play(const RunConfig& cfg) {
  cfg.validate();
  StageParams sp = cfg.stage_params();
  GameParams gp = cfg.game_params();
  WinningAlice alice(sp, cfg.allow_equal_weights);
  auto bob = make_bob(cfg);
  auto oracle = target_oracle(sp.epsilon, sp.weights, sp.q_max);
  GameTranscript t = referee_potential(alice, *bob, gp, oracle);
  t.evidence["strategy"] = alice.log();
  t.evidence["seed"] = cfg.seed;
  t.evidence["bob"] = cfg.bob;
  if (cfg.bob == "replay") {
    // a replayed game reproduces the source file byte for byte, including
    // the recorded provenance of the original run
    GameTranscript src = load_replay_source(cfg.replay_file);
    if (src.evidence.contains("seed")) t.evidence["seed"] = src.evidence["seed"];
    if (src.evidence.contains("bob")) t.evidence["bob"] = src.evidence["bob"];
  }
  PlayResult res;
  res.certified = t.verdict == Verdict::alice_certified;
  res.jsonl = transcript_to_jsonl(t);
  res.transcript = std::move(t);
  return res;
}

StageCoverage stage_coverage(const StageParams& sp, long max_stage) {
  StageCoverage cov;
  for (long n = 0; n <= max_stage; ++n) {
    Rational top = 2 * sp.H(n + 1);
    if (cov.first_nonempty < 0 && top >= 1) cov.first_nonempty = n;
    if (cov.first_truncated < 0 && top > sp.q_max) {
      cov.first_truncated = n;
      break;
    }
  }
  return cov;
}

}  // namespace bad3
