#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "typeprior/game.hpp"
#include "typeprior/hba.hpp"
#include "typeprior/rng.hpp"
#include "typeprior/simplex.hpp"
#include "typeprior/type_pool.hpp"

namespace typeprior {

enum class PriorMethod {
  uniform,
  random,
  utility,
  stackelberg,
  welfare,
  fairness,
  lp_utility,
  lp_stackelberg,
  lp_welfare,
  lp_fairness,
};

inline constexpr std::array<PriorMethod, 10> kAllPriorMethods{
    PriorMethod::uniform,    PriorMethod::random,     PriorMethod::utility,        PriorMethod::stackelberg,
    PriorMethod::welfare,    PriorMethod::fairness,   PriorMethod::lp_utility,     PriorMethod::lp_stackelberg,
    PriorMethod::lp_welfare, PriorMethod::lp_fairness};

inline std::string to_string(PriorMethod m) {
  switch (m) {
    case PriorMethod::uniform: return "Uniform";
    case PriorMethod::random: return "Random";
    case PriorMethod::utility: return "Utility";
    case PriorMethod::stackelberg: return "Stackelberg";
    case PriorMethod::welfare: return "Welfare";
    case PriorMethod::fairness: return "Fairness";
    case PriorMethod::lp_utility: return "LP-Utility";
    case PriorMethod::lp_stackelberg: return "LP-Stackelberg";
    case PriorMethod::lp_welfare: return "LP-Welfare";
    case PriorMethod::lp_fairness: return "LP-Fairness";
  }
  return "?";
}

// Case-insensitive; '-' and '_' are ignored, so "lp_utility" names LP-Utility.
inline PriorMethod parse_prior_method(const std::string& s) {
  auto fold = [](const std::string& x) {
    std::string out;
    for (char c : x)
      if (c != '-' && c != '_') out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    return out;
  };
  const std::string key = fold(s);
  for (PriorMethod m : kAllPriorMethods)
    if (fold(to_string(m)) == key) return m;
  throw std::invalid_argument("unknown prior method '" + s + "'");
}

inline bool is_value_method(PriorMethod m) {
  return m == PriorMethod::utility || m == PriorMethod::stackelberg || m == PriorMethod::welfare ||
         m == PriorMethod::fairness;
}

inline bool is_lp_method(PriorMethod m) {
  return m == PriorMethod::lp_utility || m == PriorMethod::lp_stackelberg || m == PriorMethod::lp_welfare ||
         m == PriorMethod::lp_fairness;
}

inline constexpr int kDefaultBooster = 10;
inline constexpr double kDefaultEpsilonFloor = 1e-4;
inline constexpr double kRandomPriorMass = 1e-4;

struct PriorSpec {
  PriorMethod method = PriorMethod::uniform;
  std::vector<double> probabilities;
  int booster = kDefaultBooster;
  double epsilon_floor = kDefaultEpsilonFloor;
  std::optional<double> loss_bound;  // LP methods only
};

// Estimated cumulative payoffs of HBA (player i) and the other player (j)
// when the other player's true type is j and HBA plans against type j'.
class ValueMatrix {
 public:
  ValueMatrix() = default;
  explicit ValueMatrix(std::size_t n) : n_(n), own_(n * n, 0.0), other_(n * n, 0.0) {}

  std::size_t size() const noexcept { return n_; }

  double& hba(std::size_t truth, std::size_t assumed) { return own_[truth * n_ + assumed]; }
  double& opponent(std::size_t truth, std::size_t assumed) { return other_[truth * n_ + assumed]; }
  double hba(std::size_t truth, std::size_t assumed) const { return own_[truth * n_ + assumed]; }
  double opponent(std::size_t truth, std::size_t assumed) const { return other_[truth * n_ + assumed]; }

  // Diagonal values: HBA planning against the true type.
  double hba(std::size_t truth) const { return hba(truth, truth); }
  double opponent(std::size_t truth) const { return opponent(truth, truth); }

 private:
  std::size_t n_ = 0;
  std::vector<double> own_;
  std::vector<double> other_;
};

struct ValueEstimate {
  double hba = 0.0;
  double opponent = 0.0;
};

// Mean cumulative payoffs over `samples` rollouts of `rounds` rounds in which
// HBA holds a point-mass belief on `assumed` while the column player actually
// follows `truth`. Rollouts that never meet a stochastic action are identical,
// so only one is run in that case.
inline ValueEstimate estimate_values(const Game& g, const PolicyType& truth, const PolicyType& assumed, int rounds,
                                     int horizon, int samples, std::uint64_t seed) {
  if (rounds < 1 || samples < 1) throw std::invalid_argument("value estimation needs rounds >= 1 and samples >= 1");
  const std::vector<PolicyType> model{assumed};
  const std::vector<double> point{1.0};
  const Planner planner(g.matrix(Seat::row), model);
  ValueEstimate total;
  int done = 0;
  for (int s = 0; s < samples; ++s) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(s)));
    std::vector<TypeState> model_state{assumed.start(Seat::col)};
    TypeState truth_state = truth.start(Seat::col);
    bool stochastic = false;
    for (int t = 0; t < rounds; ++t) {
      const auto e = planner.expected_payoffs(point, model_state, horizon);
      const int ai = choose_action(e, TieBreak::lexicographic);
      const ActionDist d = truth.act(truth_state);
      if (d[0] != 0.0 && d[1] != 0.0) stochastic = true;
      const JointAction ja{ai, sample_action(d, rng.uniform())};
      total.hba += g.payoff(Seat::row, ja);
      total.opponent += g.payoff(Seat::col, ja);
      assumed.observe(model_state[0], ja);
      truth.observe(truth_state, ja);
    }
    ++done;
    if (!stochastic) break;
  }
  total.hba /= done;
  total.opponent /= done;
  return total;
}

inline double estimate_value(const Game& g, const PolicyType& truth, const PolicyType& assumed, Seat player,
                             int rounds, int horizon, int samples, std::uint64_t seed) {
  const auto v = estimate_values(g, truth, assumed, rounds, horizon, samples, seed);
  return player == Seat::row ? v.hba : v.opponent;
}

struct ValueConfig {
  int rounds = 20;
  int samples = 20;
  int horizon = 1;
};

inline ValueMatrix compute_value_matrix(const Game& g, const TypeSet& ts, const ValueConfig& cfg, std::uint64_t seed) {
  const std::size_t n = ts.size();
  ValueMatrix v(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t jp = 0; jp < n; ++jp) {
      const auto e = estimate_values(g, ts.members[j], ts.members[jp], cfg.rounds, cfg.horizon, cfg.samples,
                                     derive_seed(seed, j * n + jp));
      v.hba(j, jp) = e.hba;
      v.opponent(j, jp) = e.opponent;
    }
  }
  return v;
}

inline PriorSpec uniform_prior(std::size_t n) {
  if (n < 1) throw std::invalid_argument("prior over an empty type set");
  PriorSpec p;
  p.method = PriorMethod::uniform;
  p.probabilities.assign(n, 1.0 / static_cast<double>(n));
  return p;
}

// floor(n/2) randomly chosen types get mass .0001; the rest share the remainder.
inline PriorSpec random_prior(std::size_t n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("prior over an empty type set");
  std::vector<std::size_t> idx(n);
  for (std::size_t k = 0; k < n; ++k) idx[k] = k;
  Rng rng(seed);
  rng.shuffle(idx);
  const std::size_t low = n / 2;
  const double rest = (1.0 - kRandomPriorMass * static_cast<double>(low)) / static_cast<double>(n - low);
  PriorSpec p;
  p.method = PriorMethod::random;
  p.probabilities.assign(n, rest);
  for (std::size_t k = 0; k < low; ++k) p.probabilities[idx[k]] = kRandomPriorMass;
  return p;
}

// Value heuristic of one (truth, assumed) cell under a value method family.
inline double psi(PriorMethod m, double u_hba, double u_opp) {
  switch (m) {
    case PriorMethod::utility:
    case PriorMethod::lp_utility: return u_hba;
    case PriorMethod::stackelberg:
    case PriorMethod::lp_stackelberg: return u_opp;
    case PriorMethod::welfare:
    case PriorMethod::lp_welfare: return u_hba + u_opp;
    case PriorMethod::fairness:
    case PriorMethod::lp_fairness: return u_hba * u_opp;
    default: throw std::invalid_argument("no value heuristic for " + to_string(m));
  }
}

// P(theta) proportional to psi(theta)^b, computed in log space.
inline PriorSpec value_prior_from_psi(PriorMethod m, const std::vector<double>& psis, int booster = kDefaultBooster) {
  if (psis.empty()) throw std::invalid_argument("prior over an empty type set");
  if (booster < 1) throw std::invalid_argument("booster must be a positive integer");
  std::vector<double> logw(psis.size());
  for (std::size_t k = 0; k < psis.size(); ++k) {
    if (!(psis[k] > 0.0)) throw std::domain_error("value heuristic must be positive");
    logw[k] = booster * std::log(psis[k]);
  }
  const double top = *std::max_element(logw.begin(), logw.end());
  double norm = 0;
  for (auto& x : logw) norm += (x = std::exp(x - top));
  PriorSpec p;
  p.method = m;
  p.booster = booster;
  p.probabilities = std::move(logw);
  for (auto& x : p.probabilities) x /= norm;
  return p;
}

inline PriorSpec value_prior(PriorMethod m, const ValueMatrix& v, int booster = kDefaultBooster) {
  if (!is_value_method(m)) throw std::invalid_argument(to_string(m) + " is not a value prior");
  std::vector<double> psis(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) psis[j] = psi(m, v.hba(j), v.opponent(j));
  return value_prior_from_psi(m, psis, booster);
}

// Loss matrix A[j][j']: value lost when HBA plans against j' but faces j.
inline std::vector<std::vector<double>> loss_matrix(PriorMethod m, const ValueMatrix& v) {
  if (!is_lp_method(m)) throw std::invalid_argument(to_string(m) + " is not an LP prior");
  const std::size_t n = v.size();
  std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
  for (std::size_t j = 0; j < n; ++j) {
    const double own = psi(m, v.hba(j), v.opponent(j));
    for (std::size_t jp = 0; jp < n; ++jp) a[j][jp] = own - psi(m, v.hba(j, jp), v.opponent(j, jp));
  }
  return a;
}

struct LpPriorSolution {
  std::vector<double> p;
  double loss = 0.0;
};

// Minimizes the worst-case expected loss max_j sum_j' A[j][j'] p_j' over the
// simplex with p >= floor. Among optimal priors it returns the one whose
// smallest entry is largest.
inline LpPriorSolution solve_loss_lp(const std::vector<std::vector<double>>& a, double floor = kDefaultEpsilonFloor) {
  const std::size_t n = a.size();
  if (n < 1) throw std::invalid_argument("empty loss matrix");
  for (const auto& r : a)
    if (r.size() != n) throw std::invalid_argument("loss matrix must be square");
  if (!(floor >= 0.0) || floor * static_cast<double>(n) >= 1.0)
    throw std::invalid_argument("epsilon floor times type count must stay below 1");
  const double free_mass = 1.0 - floor * static_cast<double>(n);
  double scale = 1.0;
  for (const auto& r : a)
    for (double x : r) scale = std::max(scale, std::abs(x));

  // Stage 1 over (l+, l-, q_1..q_n) with p = floor + q.
  LinearProgram lp;
  lp.c.assign(n + 2, 0.0);
  lp.c[0] = 1.0;
  lp.c[1] = -1.0;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> row(n + 2, 0.0);
    row[0] = -1.0;
    row[1] = 1.0;
    double shift = 0;
    for (std::size_t jp = 0; jp < n; ++jp) {
      row[2 + jp] = a[j][jp];
      shift += a[j][jp] * floor;
    }
    lp.a_ub.push_back(std::move(row));
    lp.b_ub.push_back(-shift);
  }
  std::vector<double> sum_row(n + 2, 1.0);
  sum_row[0] = sum_row[1] = 0.0;
  lp.a_eq.push_back(sum_row);
  lp.b_eq.push_back(free_mass);
  const LpResult first = solve_lp(lp);
  if (first.status != LpStatus::optimal) throw std::runtime_error("loss LP is " + to_string(first.status));
  const double best_loss = first.objective;

  // Stage 2 over (q_1..q_n, t): maximize t with q_j >= t while keeping every
  // row loss within tolerance of the optimum.
  LinearProgram spread;
  spread.c.assign(n + 1, 0.0);
  spread.c[n] = -1.0;
  const double slack = 1e-12 * scale;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> row(n + 1, 0.0);
    double shift = 0;
    for (std::size_t jp = 0; jp < n; ++jp) {
      row[jp] = a[j][jp];
      shift += a[j][jp] * floor;
    }
    spread.a_ub.push_back(std::move(row));
    spread.b_ub.push_back(best_loss + slack - shift);
  }
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> row(n + 1, 0.0);
    row[j] = -1.0;
    row[n] = 1.0;
    spread.a_ub.push_back(std::move(row));
    spread.b_ub.push_back(0.0);
  }
  std::vector<double> sum_q(n + 1, 1.0);
  sum_q[n] = 0.0;
  spread.a_eq.push_back(sum_q);
  spread.b_eq.push_back(free_mass);
  const LpResult second = solve_lp(spread);

  std::vector<double> q(n);
  if (second.status == LpStatus::optimal) {
    for (std::size_t j = 0; j < n; ++j) q[j] = second.x[j];
  } else {
    for (std::size_t j = 0; j < n; ++j) q[j] = first.x[2 + j];
  }
  LpPriorSolution out;
  out.p.resize(n);
  double sum = 0;
  for (std::size_t j = 0; j < n; ++j) sum += (out.p[j] = floor + std::max(0.0, q[j]));
  for (auto& x : out.p) x /= sum;
  // Report the worst-case loss of the prior actually returned.
  out.loss = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n; ++j) {
    double row = 0;
    for (std::size_t jp = 0; jp < n; ++jp) row += a[j][jp] * out.p[jp];
    out.loss = std::max(out.loss, row);
  }
  return out;
}

inline PriorSpec lp_prior(PriorMethod m, const ValueMatrix& v, double floor = kDefaultEpsilonFloor) {
  const auto sol = solve_loss_lp(loss_matrix(m, v), floor);
  PriorSpec p;
  p.method = m;
  p.epsilon_floor = floor;
  p.probabilities = sol.p;
  p.loss_bound = sol.loss;
  return p;
}

struct PriorConfig {
  int booster = kDefaultBooster;
  double epsilon_floor = kDefaultEpsilonFloor;
  ValueConfig values;
  std::uint64_t seed = 1;
};

// Computes priors for type sets, caching value matrices per
// (game, type set, seed). Safe to share between threads.
class PriorEngine {
 public:
  const ValueMatrix& values(const Game& g, const TypeSet& ts, const PriorConfig& cfg) {
    const auto key = std::make_tuple(g.id(), type_set_hash(ts), cfg.seed, cfg.values.rounds, cfg.values.samples,
                                     cfg.values.horizon);
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = cache_.find(key);
      if (it != cache_.end()) return it->second;
    }
    ValueMatrix v = compute_value_matrix(g, ts, cfg.values, derive_seed(cfg.seed, "values"));
    std::lock_guard<std::mutex> lock(mu_);
    return cache_.emplace(key, std::move(v)).first->second;
  }

  PriorSpec compute(PriorMethod m, const Game& g, const TypeSet& ts, const PriorConfig& cfg) {
    switch (m) {
      case PriorMethod::uniform: return uniform_prior(ts.size());
      case PriorMethod::random: return random_prior(ts.size(), derive_seed(cfg.seed, "random-prior"));
      default: break;
    }
    const ValueMatrix& v = values(g, ts, cfg);
    if (is_value_method(m)) return value_prior(m, v, cfg.booster);
    return lp_prior(m, v, cfg.epsilon_floor);
  }

  std::size_t cached() const {
    std::lock_guard<std::mutex> lock(mu_);
    return cache_.size();
  }

 private:
  using Key = std::tuple<int, std::string, std::uint64_t, int, int, int>;
  mutable std::mutex mu_;
  std::map<Key, ValueMatrix> cache_;
};

inline PriorSpec compute_prior(PriorMethod m, const Game& g, const TypeSet& ts, const PriorConfig& cfg) {
  PriorEngine engine;
  return engine.compute(m, g, ts, cfg);
}

}  // namespace typeprior
