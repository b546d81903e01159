#pragma once

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "typeprior/game.hpp"
#include "typeprior/hba.hpp"
#include "typeprior/metrics.hpp"
#include "typeprior/opponents.hpp"
#include "typeprior/priors.hpp"
#include "typeprior/type_pool.hpp"

namespace typeprior {

// Seed scheme: master -> (game, play) -> named substreams. Every prior method
// of a play shares the play seed, so pools and opponent streams are paired.
inline std::uint64_t play_seed(std::uint64_t master, int game_id, int play) {
  return derive_seed(derive_seed(master, static_cast<std::uint64_t>(game_id)), static_cast<std::uint64_t>(play));
}

struct PlayRecord {
  int game_id = 0;
  std::uint64_t seed = 0;
  TypeKind kind = TypeKind::lft;
  OpponentKind opponent = OpponentKind::rt;
  PriorMethod prior = PriorMethod::uniform;
  int horizon = 1;
  std::string pool_hash;
  std::vector<double> prior_vector;
  std::vector<JointAction> rounds;
  std::vector<double> true_posterior;  // after each round; RT plays only
  std::vector<TimeSlice> slices;
  std::string error;  // empty on success

  bool ok() const noexcept { return error.empty(); }
};

// Optional per-round trace: round, posterior vector, chosen action, E values.
inline void write_trace_line(std::ostream& os, std::size_t round, const std::vector<double>& posterior,
                             const Decision& d) {
  os << round << ',';
  for (std::size_t k = 0; k < posterior.size(); ++k) os << (k ? ";" : "") << detail::format_double(posterior[k]);
  os << ',' << d.action << ',' << detail::format_double(d.values[0]) << ',' << detail::format_double(d.values[1])
     << '\n';
}

// One play: HBA in the row seat, the chosen controller in the column seat.
inline PlayRecord run_play(const Game& g, const TypeSet& ts, const PriorSpec& prior, OpponentKind opponent,
                           int horizon, std::size_t rounds, std::uint64_t seed, const MetricsConfig& metrics = {},
                           std::ostream* trace = nullptr) {
  if (prior.probabilities.size() != ts.size()) throw std::invalid_argument("prior is not defined over the type set");
  PlayRecord rec;
  rec.game_id = g.id();
  rec.seed = seed;
  rec.kind = ts.members.empty() ? TypeKind::lft : ts.members.front().kind();
  rec.opponent = opponent;
  rec.prior = prior.method;
  rec.horizon = horizon;
  rec.pool_hash = type_set_hash(ts);
  rec.prior_vector = prior.probabilities;

  HbaAgent hba(g, ts, prior.probabilities, PlannerConfig{horizon, TieBreak::lexicographic},
               derive_seed(seed, "ties"), CollapsePolicy::floor_all);
  Opponent opp = Opponent::make(opponent, g, ts);
  Rng opp_rng(derive_seed(seed, "opponent"));
  rec.rounds.reserve(rounds);
  if (opponent == OpponentKind::rt) rec.true_posterior.reserve(rounds);
  for (std::size_t t = 0; t < rounds; ++t) {
    const Decision d = hba.decide();
    if (trace != nullptr) write_trace_line(*trace, t, hba.posterior(), d);
    const JointAction ja{d.action, sample_action(opp.act(), opp_rng.uniform())};
    hba.observe(ja);
    opp.observe(ja);
    rec.rounds.push_back(ja);
    if (opponent == OpponentKind::rt) rec.true_posterior.push_back(hba.posterior()[ts.true_index]);
  }
  rec.slices = slice_play(g, rec.rounds, metrics);
  return rec;
}

enum class GameFilter { all, no_conflict, conflict, ids };

struct ExperimentConfig {
  TypeKind kind = TypeKind::lft;
  OpponentKind opponent = OpponentKind::rt;
  std::vector<int> horizons{1, 2, 3};
  std::vector<PriorMethod> priors{kAllPriorMethods.begin(), kAllPriorMethods.end()};
  GameFilter filter = GameFilter::all;
  std::vector<int> game_ids;  // GameFilter::ids
  int max_games = 0;          // 0 = no limit
  int plays = 10;
  std::size_t rounds = 0;  // 0 = default for the opponent
  std::size_t types = 10;
  MetricsConfig metrics;
  ValueConfig values;  // horizon is overwritten by the play's horizon
  EvoConfig evolution;
  std::uint64_t seed = 1;
  std::string output = "results";
  int workers = 0;  // 0 = TYPEPRIOR_WORKERS or hardware concurrency
  bool save_pools = true;

  std::size_t effective_rounds() const {
    if (rounds > 0) return rounds;
    return opponent == OpponentKind::rt ? 100 : 1000;
  }

  void validate() const {
    if (types < 2) throw std::invalid_argument("type sets need at least two types");
    if (plays < 1) throw std::invalid_argument("plays must be positive");
    if (effective_rounds() < static_cast<std::size_t>(metrics.slices))
      throw std::invalid_argument("rounds must be at least the slice count");
    if (horizons.empty() || priors.empty()) throw std::invalid_argument("need at least one horizon and prior");
    for (int h : horizons)
      if (h < 1) throw std::invalid_argument("horizon must be positive");
    evolution.validate();
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

template <typename T, typename F>
std::string join(const std::vector<T>& v, F f, const char* sep = ",") {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + f(v[i]);
  return out;
}

inline std::string format_fixed(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

}  // namespace detail

inline std::string to_string(GameFilter f) {
  switch (f) {
    case GameFilter::all: return "all";
    case GameFilter::no_conflict: return "no-conflict";
    case GameFilter::conflict: return "conflict";
    case GameFilter::ids: return "ids";
  }
  return "?";
}

// Applies one `key = value` setting.
inline void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  auto ints = [&](const std::string& v) {
    std::vector<int> out;
    for (const auto& tok : detail::split(v, ',')) out.push_back(std::stoi(tok));
    return out;
  };
  if (key == "types" || key == "type_kind" || key == "kind") {
    cfg.kind = parse_type_kind(value);
  } else if (key == "opponent") {
    cfg.opponent = parse_opponent(value);
  } else if (key == "horizon" || key == "horizons") {
    cfg.horizons = ints(value);
  } else if (key == "priors") {
    cfg.priors.clear();
    if (value == "all") {
      cfg.priors.assign(kAllPriorMethods.begin(), kAllPriorMethods.end());
    } else {
      for (const auto& tok : detail::split(value, ',')) cfg.priors.push_back(parse_prior_method(tok));
    }
  } else if (key == "games") {
    if (value == "all") {
      cfg.filter = GameFilter::all;
    } else if (value == "no-conflict") {
      cfg.filter = GameFilter::no_conflict;
    } else if (value == "conflict") {
      cfg.filter = GameFilter::conflict;
    } else {
      cfg.filter = GameFilter::ids;
      cfg.game_ids = ints(value);
    }
  } else if (key == "max_games") {
    cfg.max_games = std::stoi(value);
  } else if (key == "plays") {
    cfg.plays = std::stoi(value);
  } else if (key == "rounds") {
    cfg.rounds = std::stoul(value);
  } else if (key == "type_count") {
    cfg.types = std::stoul(value);
  } else if (key == "slices") {
    cfg.metrics.slices = std::stoi(value);
  } else if (key == "blocks") {
    cfg.metrics.blocks = std::stoi(value);
  } else if (key == "epsilon") {
    cfg.metrics.epsilon = std::stod(value);
  } else if (key == "value_rounds") {
    cfg.values.rounds = std::stoi(value);
  } else if (key == "value_samples") {
    cfg.values.samples = std::stoi(value);
  } else if (key == "evo_pool") {
    cfg.evolution.pool_size = std::stoul(value);
  } else if (key == "evo_generations") {
    cfg.evolution.generations = std::stoul(value);
  } else if (key == "evo_rounds") {
    cfg.evolution.eval_rounds = std::stoul(value);
  } else if (key == "evo_dissimilarity") {
    cfg.evolution.dissimilarity_weight = std::stod(value);
  } else if (key == "seed") {
    cfg.seed = std::stoull(value);
  } else if (key == "output") {
    cfg.output = value;
  } else if (key == "workers") {
    cfg.workers = std::stoi(value);
  } else if (key == "save_pools") {
    cfg.save_pools = value == "1" || value == "true";
  } else {
    throw std::invalid_argument("unknown config key '" + key + "'");
  }
}

// Flat `key = value` text; '#' starts a comment.
inline ExperimentConfig parse_config(std::istream& is) {
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    apply_setting(cfg, detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
  }
  cfg.validate();
  return cfg;
}

inline ExperimentConfig load_config(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw std::runtime_error("cannot open config " + p.string());
  return parse_config(in);
}

inline std::string config_text(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << "types = " << to_string(cfg.kind) << "\n";
  os << "opponent = " << to_string(cfg.opponent) << "\n";
  os << "horizons = " << detail::join(cfg.horizons, [](int h) { return std::to_string(h); }) << "\n";
  os << "priors = " << detail::join(cfg.priors, [](PriorMethod m) { return to_string(m); }) << "\n";
  if (cfg.filter == GameFilter::ids) {
    os << "games = " << detail::join(cfg.game_ids, [](int g) { return std::to_string(g); }) << "\n";
  } else {
    os << "games = " << to_string(cfg.filter) << "\n";
  }
  os << "max_games = " << cfg.max_games << "\n";
  os << "plays = " << cfg.plays << "\n";
  os << "rounds = " << cfg.effective_rounds() << "\n";
  os << "type_count = " << cfg.types << "\n";
  os << "slices = " << cfg.metrics.slices << "\n";
  os << "blocks = " << cfg.metrics.blocks << "\n";
  os << "epsilon = " << detail::format_fixed(cfg.metrics.epsilon) << "\n";
  os << "value_rounds = " << cfg.values.rounds << "\n";
  os << "value_samples = " << cfg.values.samples << "\n";
  os << "evo_pool = " << cfg.evolution.pool_size << "\n";
  os << "evo_generations = " << cfg.evolution.generations << "\n";
  os << "evo_rounds = " << cfg.evolution.eval_rounds << "\n";
  os << "evo_dissimilarity = " << detail::format_fixed(cfg.evolution.dissimilarity_weight) << "\n";
  os << "seed = " << cfg.seed << "\n";
  return os.str();
}

// Games a suite iterates, after the class/id filter and, for fictitious
// opponents, removal of games where player 2 has a dominant action.
inline std::vector<Game> select_games(const ExperimentConfig& cfg) {
  std::vector<Game> out;
  for (const Game& g : enumerate_games()) {
    if (cfg.filter == GameFilter::no_conflict && g.game_class() != GameClass::no_conflict) continue;
    if (cfg.filter == GameFilter::conflict && g.game_class() != GameClass::conflict) continue;
    if (cfg.filter == GameFilter::ids &&
        std::find(cfg.game_ids.begin(), cfg.game_ids.end(), g.id()) == cfg.game_ids.end())
      continue;
    if (cfg.opponent != OpponentKind::rt && has_dominant_action(g, Seat::col)) continue;
    out.push_back(g);
    if (cfg.max_games > 0 && static_cast<int>(out.size()) >= cfg.max_games) break;
  }
  return out;
}

inline int worker_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("TYPEPRIOR_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// Runs fn(i) for i in [0, n) on a pool of workers.
template <typename F>
void parallel_for(std::size_t n, int workers, F&& fn) {
  const int w = std::max(1, std::min<int>(workers, static_cast<int>(n)));
  if (w <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(w));
  for (int k = 0; k < w; ++k) {
    pool.emplace_back([&]() {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

struct SuiteResults {
  ExperimentConfig config;
  std::vector<PlayRecord> records;  // sorted by (game, play, horizon, prior order)
  std::map<std::string, std::string> pools;  // hash -> serialized pool
};

// Runs every (game, play, horizon) job and each prior method inside it.
inline SuiteResults run_suite_records(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto games = select_games(cfg);
  struct Job {
    std::size_t game;
    int play;
    int horizon;
  };
  std::vector<Job> jobs;
  for (std::size_t gi = 0; gi < games.size(); ++gi)
    for (int p = 0; p < cfg.plays; ++p)
      for (int h : cfg.horizons) jobs.push_back({gi, p, h});

  std::vector<std::vector<PlayRecord>> out(jobs.size());
  std::vector<std::pair<std::string, std::string>> pools(jobs.size());
  const std::size_t rounds = cfg.effective_rounds();
  parallel_for(jobs.size(), worker_count(cfg.workers), [&](std::size_t i) {
    const Job& job = jobs[i];
    const Game& g = games[job.game];
    const std::uint64_t seed = play_seed(cfg.seed, g.id(), job.play);
    TypeSet ts;
    try {
      ts = sample_type_set(cfg.kind, g, cfg.types, derive_seed(seed, "types"), cfg.evolution);
    } catch (const std::exception& e) {
      for (PriorMethod m : cfg.priors) {
        PlayRecord r;
        r.game_id = g.id();
        r.seed = seed;
        r.kind = cfg.kind;
        r.opponent = cfg.opponent;
        r.prior = m;
        r.horizon = job.horizon;
        r.error = e.what();
        out[i].push_back(std::move(r));
      }
      return;
    }
    std::ostringstream pool_text;
    write_type_set(pool_text, ts, g.id());
    pools[i] = {type_set_hash(ts), pool_text.str()};
    PriorEngine engine;
    PriorConfig pc;
    pc.values = cfg.values;
    pc.values.horizon = job.horizon;
    pc.seed = derive_seed(seed, "prior");
    for (PriorMethod m : cfg.priors) {
      try {
        const PriorSpec spec = engine.compute(m, g, ts, pc);
        out[i].push_back(run_play(g, ts, spec, cfg.opponent, job.horizon, rounds, seed, cfg.metrics));
      } catch (const std::exception& e) {
        PlayRecord r;
        r.game_id = g.id();
        r.seed = seed;
        r.kind = cfg.kind;
        r.opponent = cfg.opponent;
        r.prior = m;
        r.horizon = job.horizon;
        r.pool_hash = type_set_hash(ts);
        r.error = e.what();
        out[i].push_back(std::move(r));
      }
    }
  });

  SuiteResults res;
  res.config = cfg;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    for (auto& r : out[i]) res.records.push_back(std::move(r));
    if (!pools[i].first.empty()) res.pools.insert(pools[i]);
  }
  return res;
}

// Metrics CSV: game_id,seed,opponent,prior,h,slice,criterion,value
inline void write_metrics_csv(std::ostream& os, const std::vector<PlayRecord>& records) {
  os << "game_id,seed,opponent,prior,h,slice,criterion,value\n";
  for (const auto& r : records) {
    if (!r.ok()) continue;
    for (const auto& s : r.slices) {
      for (Criterion c : kAllCriteria) {
        os << r.game_id << ',' << r.seed << ',' << to_string(r.opponent) << ',' << to_string(r.prior) << ','
           << r.horizon << ',' << s.index << ',' << to_string(c) << ',' << detail::format_fixed(s.value(c)) << '\n';
      }
    }
  }
}

// Per-play summary: provenance and status.
inline void write_plays_csv(std::ostream& os, const std::vector<PlayRecord>& records) {
  os << "game_id,seed,type_kind,opponent,prior,h,pool_hash,status,prior_vector,true_posterior_final\n";
  for (const auto& r : records) {
    os << r.game_id << ',' << r.seed << ',' << to_string(r.kind) << ',' << to_string(r.opponent) << ','
       << to_string(r.prior) << ',' << r.horizon << ',' << r.pool_hash << ','
       << (r.ok() ? std::string("ok") : "error: " + r.error) << ','
       << detail::join(r.prior_vector, [](double x) { return detail::format_fixed(x); }, ";") << ','
       << (r.true_posterior.empty() ? std::string("") : detail::format_fixed(r.true_posterior.back())) << '\n';
  }
}

}  // namespace typeprior
