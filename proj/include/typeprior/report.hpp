#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "typeprior/experiment.hpp"
#include "typeprior/metrics.hpp"
#include "typeprior/priors.hpp"
#include "typeprior/stats.hpp"

namespace typeprior {

// Slice values of one play: values[slice][criterion index].
using PlaySlices = std::vector<std::array<double, kAllCriteria.size()>>;

struct PlayKey {
  int game_id = 0;
  std::uint64_t seed = 0;
  auto operator<=>(const PlayKey&) const = default;
};

// All slice values of a suite, grouped by horizon and prior.
struct SliceTable {
  std::map<int, std::map<PriorMethod, std::map<PlayKey, PlaySlices>>> by_horizon;

  void add(int horizon, PriorMethod m, PlayKey key, int slice, Criterion c, double v) {
    auto& play = by_horizon[horizon][m][key];
    if (play.size() <= static_cast<std::size_t>(slice)) play.resize(static_cast<std::size_t>(slice) + 1);
    play[static_cast<std::size_t>(slice)][criterion_index(c)] = v;
  }

  static std::size_t criterion_index(Criterion c) {
    for (std::size_t i = 0; i < kAllCriteria.size(); ++i)
      if (kAllCriteria[i] == c) return i;
    throw std::invalid_argument("unknown criterion");
  }
};

inline SliceTable slice_table(const std::vector<PlayRecord>& records) {
  SliceTable t;
  for (const auto& r : records) {
    if (!r.ok()) continue;
    for (const auto& s : r.slices)
      for (Criterion c : kAllCriteria) t.add(r.horizon, r.prior, {r.game_id, r.seed}, s.index, c, s.value(c));
  }
  return t;
}

inline SliceTable read_metrics_csv(std::istream& is) {
  SliceTable t;
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("empty metrics file");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto f = detail::split(line, ',');
    if (f.size() != 8) throw std::runtime_error("malformed metrics row: " + line);
    t.add(std::stoi(f[4]), parse_prior_method(f[3]), {std::stoi(f[0]), std::stoull(f[1])}, std::stoi(f[5]),
          parse_criterion(f[6]), std::stod(f[7]));
  }
  return t;
}

struct SignificanceMatrix {
  std::vector<PriorMethod> priors;  // rows; the baseline is excluded
  std::vector<std::vector<double>> higher;     // right-sided, prior above baseline
  std::vector<std::vector<double>> lower;      // right-sided, baseline above prior
  std::vector<std::vector<double>> two_sided;  // [prior][criterion], percent of slices

  double at(const std::vector<std::vector<double>>& m, PriorMethod p, Criterion c) const {
    for (std::size_t i = 0; i < priors.size(); ++i)
      if (priors[i] == p) return m[i][SliceTable::criterion_index(c)];
    throw std::out_of_range("prior not in matrix");
  }
};

// Plays present for both the prior and the baseline, restricted to `games`
// when it is non-empty. Pairing is by (game, seed).
inline SignificanceMatrix significance_matrix(const std::map<PriorMethod, std::map<PlayKey, PlaySlices>>& by_prior,
                                              const std::set<int>& games = {},
                                              PriorMethod baseline = PriorMethod::uniform) {
  SignificanceMatrix out;
  const auto base_it = by_prior.find(baseline);
  if (base_it == by_prior.end()) throw std::invalid_argument("baseline prior missing from results");
  for (const auto& [method, plays] : by_prior) {
    if (method == baseline) continue;
    std::vector<const PlaySlices*> xs, bs;
    for (const auto& [key, slices] : plays) {
      if (!games.empty() && !games.contains(key.game_id)) continue;
      const auto b = base_it->second.find(key);
      if (b == base_it->second.end()) continue;
      xs.push_back(&slices);
      bs.push_back(&b->second);
    }
    std::vector<double> hi, lo, two;
    for (std::size_t ci = 0; ci < kAllCriteria.size(); ++ci) {
      if (xs.size() < 2) {
        hi.push_back(0.0);
        lo.push_back(0.0);
        two.push_back(0.0);
        continue;
      }
      SliceValues x(xs.size()), b(xs.size());
      for (std::size_t k = 0; k < xs.size(); ++k) {
        for (const auto& s : *xs[k]) x[k].push_back(s[ci]);
        for (const auto& s : *bs[k]) b[k].push_back(s[ci]);
      }
      hi.push_back(significant_slice_percentage(x, b, TestSide::right));
      lo.push_back(significant_slice_percentage(b, x, TestSide::right));
      two.push_back(significant_slice_percentage(x, b, TestSide::two));
    }
    out.priors.push_back(method);
    out.higher.push_back(std::move(hi));
    out.lower.push_back(std::move(lo));
    out.two_sided.push_back(std::move(two));
  }
  return out;
}

inline void write_matrix_csv(std::ostream& os, const SignificanceMatrix& m,
                             const std::vector<std::vector<double>>& values) {
  os << "prior";
  for (Criterion c : kAllCriteria) os << ',' << to_string(c);
  os << '\n';
  for (std::size_t i = 0; i < m.priors.size(); ++i) {
    os << to_string(m.priors[i]);
    for (double v : values[i]) os << ',' << detail::format_fixed(v);
    os << '\n';
  }
}

// Mean value of one criterion per slice and prior.
inline void write_curve_csv(std::ostream& os, const std::map<PriorMethod, std::map<PlayKey, PlaySlices>>& by_prior,
                            Criterion c, const std::set<int>& games = {}) {
  const std::size_t ci = SliceTable::criterion_index(c);
  os << "prior,slice,mean,plays\n";
  for (const auto& [method, plays] : by_prior) {
    std::vector<double> sum;
    std::size_t n = 0;
    for (const auto& [key, slices] : plays) {
      if (!games.empty() && !games.contains(key.game_id)) continue;
      if (sum.size() < slices.size()) sum.resize(slices.size(), 0.0);
      for (std::size_t s = 0; s < slices.size(); ++s) sum[s] += slices[s][ci];
      ++n;
    }
    for (std::size_t s = 0; s < sum.size(); ++s)
      os << to_string(method) << ',' << s << ',' << detail::format_fixed(sum[s] / static_cast<double>(n)) << ','
         << n << '\n';
  }
}

inline std::string read_manifest_value(const std::filesystem::path& manifest, const std::string& key) {
  std::ifstream in(manifest);
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq != std::string::npos && detail::trim(line.substr(0, eq)) == key) return detail::trim(line.substr(eq + 1));
  }
  return "";
}

// Writes significance matrices and payoff curves for every horizon and game
// class found in `dir`/metrics.csv. Returns the files written.
inline std::vector<std::filesystem::path> write_report(const std::filesystem::path& dir) {
  std::ifstream in(dir / "metrics.csv");
  if (!in) throw std::runtime_error("no metrics.csv in " + dir.string());
  const SliceTable table = read_metrics_csv(in);
  std::string prefix = read_manifest_value(dir / "manifest.txt", "types");
  const std::string opp = read_manifest_value(dir / "manifest.txt", "opponent");
  prefix = (prefix.empty() ? std::string("suite") : prefix) + (opp.empty() ? "" : "_" + opp);

  std::set<int> nc, conflict;
  for (const auto& [h, by_prior] : table.by_horizon)
    for (const auto& [m, plays] : by_prior)
      for (const auto& [key, s] : plays)
        (game_by_id(key.game_id).game_class() == GameClass::no_conflict ? nc : conflict).insert(key.game_id);

  std::vector<std::filesystem::path> written;
  auto emit = [&](const std::string& name, auto&& body) {
    const auto p = dir / name;
    std::ofstream out(p);
    body(out);
    written.push_back(p);
  };
  for (const auto& [h, by_prior] : table.by_horizon) {
    const std::vector<std::pair<std::string, const std::set<int>*>> classes{{"no-conflict", &nc},
                                                                             {"conflict", &conflict}};
    for (const auto& [cls, games] : classes) {
      if (games->empty()) continue;
      const std::string stem = prefix + "_" + cls + "_h" + std::to_string(h);
      if (by_prior.contains(PriorMethod::uniform)) {
        const auto m = significance_matrix(by_prior, *games);
        emit("significance_" + stem + "_higher.csv", [&](std::ostream& os) { write_matrix_csv(os, m, m.higher); });
        emit("significance_" + stem + "_lower.csv", [&](std::ostream& os) { write_matrix_csv(os, m, m.lower); });
        emit("significance_" + stem + "_two_sided.csv",
             [&](std::ostream& os) { write_matrix_csv(os, m, m.two_sided); });
      }
      emit("curve_" + stem + "_payoff_p1.csv",
           [&](std::ostream& os) { write_curve_csv(os, by_prior, Criterion::payoff_p1, *games); });
      emit("curve_" + stem + "_payoff_p2.csv",
           [&](std::ostream& os) { write_curve_csv(os, by_prior, Criterion::payoff_p2, *games); });
    }
  }
  return written;
}

// Runs a suite and writes manifest, pools, play summary, metrics and report.
inline SuiteResults run_suite(const ExperimentConfig& cfg) {
  SuiteResults res = run_suite_records(cfg);
  const std::filesystem::path dir(cfg.output);
  std::filesystem::create_directories(dir);
  {
    std::ofstream m(dir / "manifest.txt");
    m << config_text(cfg);
  }
  if (cfg.save_pools) {
    std::filesystem::create_directories(dir / "pools");
    for (const auto& [hash, text] : res.pools) std::ofstream(dir / "pools" / (hash + ".txt")) << text;
  }
  {
    std::ofstream p(dir / "plays.csv");
    write_plays_csv(p, res.records);
  }
  {
    std::ofstream m(dir / "metrics.csv");
    write_metrics_csv(m, res.records);
  }
  write_report(dir);
  return res;
}

}  // namespace typeprior
