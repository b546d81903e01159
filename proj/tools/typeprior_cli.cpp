#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "typeprior/typeprior.hpp"

using namespace typeprior;

namespace {

// Writes to the named file, or stdout for "" / "-".
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw std::runtime_error("cannot write " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

void enumerate_games_cmd(const std::string& out_path) {
  Output out(out_path);
  auto& os = out.stream();
  os << "id,r00_p1,r00_p2,r01_p1,r01_p2,r10_p1,r10_p2,r11_p1,r11_p2,class,p2_has_dominant\n";
  for (const Game& g : enumerate_games()) {
    os << g.id();
    for (int v : g.encoding()) os << ',' << v;
    os << ',' << (g.game_class() == GameClass::no_conflict ? "NoConflict" : "Conflict") << ','
       << (has_dominant_action(g, Seat::col) ? 1 : 0) << '\n';
  }
}

TypeSet load_types(const std::string& path, int expected_game) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open type pool " + path);
  LoadedTypeSet loaded = read_type_set(in);
  if (expected_game > 0 && loaded.game_id != 0 && loaded.game_id != expected_game)
    throw std::runtime_error("type pool was generated for game " + std::to_string(loaded.game_id));
  return loaded.types;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Prior beliefs for ad hoc coordination in repeated 2x2 games"};
  app.require_subcommand(1);

  std::string out_path;
  auto* enumerate = app.add_subcommand("enumerate-games", "List the 78 canonical games as CSV");
  enumerate->add_option("--out", out_path, "Output file (default stdout)");

  std::string kind = "CDT";
  int game_id = 1;
  std::size_t n = 10;
  std::uint64_t seed = 1;
  auto* gen = app.add_subcommand("gen-types", "Generate a type pool for the column player");
  gen->add_option("--kind", kind, "LFT, CDT or CNN")->required();
  gen->add_option("--game", game_id, "Game id")->required();
  gen->add_option("--n", n, "Number of types");
  gen->add_option("--seed", seed, "Seed");
  gen->add_option("--out", out_path, "Output file (default stdout)");

  std::string method = "Uniform";
  std::string types_path;
  ValueConfig values;
  auto* prior = app.add_subcommand("compute-prior", "Compute a prior over a type pool");
  prior->add_option("--method", method, "Prior method")->required();
  prior->add_option("--game", game_id, "Game id")->required();
  prior->add_option("--types", types_path, "Type pool file")->required();
  prior->add_option("--seed", seed, "Seed for value estimation and the random prior");
  prior->add_option("--horizon", values.horizon, "Planning horizon used by value estimation");
  prior->add_option("--value-rounds", values.rounds, "Rounds per value estimate");
  prior->add_option("--value-samples", values.samples, "Samples per value estimate");
  prior->add_option("--out", out_path, "Output file (default stdout)");

  std::string opponent = "RT";
  int horizon = 1;
  std::size_t rounds = 100;
  std::string trace_path;
  auto* play = app.add_subcommand("play", "Run one play and print its slice metrics");
  play->add_option("--game", game_id, "Game id")->required();
  play->add_option("--types", types_path, "Type pool file (default: generate)");
  play->add_option("--kind", kind, "Type kind when generating");
  play->add_option("--n", n, "Number of types when generating");
  play->add_option("--method", method, "Prior method");
  play->add_option("--opponent", opponent, "RT, FP or CFP");
  play->add_option("--horizon", horizon, "Planning horizon");
  play->add_option("--rounds", rounds, "Rounds");
  play->add_option("--seed", seed, "Seed");
  play->add_option("--trace", trace_path, "Per-round trace file");
  play->add_option("--out", out_path, "Output file (default stdout)");

  std::string config_path;
  std::string output_dir;
  int workers = 0;
  bool full_rounds = false;
  auto* run = app.add_subcommand("run", "Run an experiment suite from a key = value config");
  run->add_option("--config", config_path, "Config file")->required();
  run->add_option("--output", output_dir, "Output directory (overrides the config)");
  run->add_option("--workers", workers, "Worker threads (overrides TYPEPRIOR_WORKERS)");
  run->add_flag("--full-rounds", full_rounds, "Use 10000 rounds against fictitious players");

  std::string in_dir;
  auto* report = app.add_subcommand("report", "Rebuild significance matrices from a suite directory");
  report->add_option("--in", in_dir, "Suite output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*enumerate) {
      enumerate_games_cmd(out_path);
    } else if (*gen) {
      const Game g = game_by_id(game_id);
      const TypeSet ts = sample_type_set(parse_type_kind(kind), g, n, seed);
      Output out(out_path);
      write_type_set(out.stream(), ts, g.id());
    } else if (*prior) {
      const Game g = game_by_id(game_id);
      const TypeSet ts = load_types(types_path, game_id);
      PriorConfig pc;
      pc.values = values;
      pc.seed = seed;
      const PriorSpec spec = compute_prior(parse_prior_method(method), g, ts, pc);
      Output out(out_path);
      auto& os = out.stream();
      os << "type,probability\n";
      for (std::size_t k = 0; k < spec.probabilities.size(); ++k) os << k << ',' << fmt(spec.probabilities[k]) << '\n';
      if (spec.loss_bound) os << "# loss_bound " << fmt(*spec.loss_bound) << '\n';
    } else if (*play) {
      const Game g = game_by_id(game_id);
      const TypeSet ts = types_path.empty() ? sample_type_set(parse_type_kind(kind), g, n, derive_seed(seed, "types"))
                                            : load_types(types_path, game_id);
      PriorConfig pc;
      pc.values.horizon = horizon;
      pc.seed = derive_seed(seed, "prior");
      const PriorSpec spec = compute_prior(parse_prior_method(method), g, ts, pc);
      std::unique_ptr<std::ofstream> trace;
      if (!trace_path.empty()) {
        trace = std::make_unique<std::ofstream>(trace_path);
        *trace << "round,posterior,action,e0,e1\n";
      }
      MetricsConfig mc;
      mc.slices = static_cast<int>(std::min<std::size_t>(20, rounds));
      const PlayRecord rec =
          run_play(g, ts, spec, parse_opponent(opponent), horizon, rounds, seed, mc, trace.get());
      Output out(out_path);
      auto& os = out.stream();
      os << "slice";
      for (Criterion c : kAllCriteria) os << ',' << to_string(c);
      os << '\n';
      for (const auto& s : rec.slices) {
        os << s.index;
        for (Criterion c : kAllCriteria) os << ',' << fmt(s.value(c));
        os << '\n';
      }
    } else if (*run) {
      ExperimentConfig cfg = load_config(config_path);
      if (!output_dir.empty()) cfg.output = output_dir;
      if (workers > 0) cfg.workers = workers;
      if (full_rounds && cfg.opponent != OpponentKind::rt) cfg.rounds = 10000;
      const SuiteResults res = run_suite(cfg);
      std::size_t failed = 0;
      for (const auto& r : res.records) failed += r.ok() ? 0 : 1;
      std::cout << res.records.size() << " plays written to " << cfg.output << " (" << failed << " failed)\n";
    } else if (*report) {
      for (const auto& p : write_report(in_dir)) std::cout << p.string() << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
