#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "typeprior/game.hpp"

namespace typeprior {

enum class Criterion {
  convergence_p1,
  convergence_p2,
  payoff_p1,
  payoff_p2,
  welfare,
  fairness,
  nash,
  pareto,
  welfare_optimum,
  fairness_optimum,
};

inline constexpr std::array<Criterion, 10> kAllCriteria{
    Criterion::convergence_p1, Criterion::convergence_p2, Criterion::payoff_p1, Criterion::payoff_p2,
    Criterion::welfare,        Criterion::fairness,       Criterion::nash,      Criterion::pareto,
    Criterion::welfare_optimum, Criterion::fairness_optimum};

inline std::string to_string(Criterion c) {
  switch (c) {
    case Criterion::convergence_p1: return "conv_p1";
    case Criterion::convergence_p2: return "conv_p2";
    case Criterion::payoff_p1: return "payoff_p1";
    case Criterion::payoff_p2: return "payoff_p2";
    case Criterion::welfare: return "welfare";
    case Criterion::fairness: return "fairness";
    case Criterion::nash: return "nash";
    case Criterion::pareto: return "pareto";
    case Criterion::welfare_optimum: return "welfare_opt";
    case Criterion::fairness_optimum: return "fairness_opt";
  }
  return "?";
}

inline Criterion parse_criterion(const std::string& s) {
  for (Criterion c : kAllCriteria)
    if (to_string(c) == s) return c;
  throw std::invalid_argument("unknown criterion '" + s + "'");
}

struct MetricsConfig {
  int slices = 20;
  int blocks = 5;           // sub-blocks used by the convergence test
  double tolerance = 0.05;  // convergence tolerance on action probabilities
  double epsilon = 0.1;     // solution-check tolerance
};

// Converged iff the action-0 frequency of every sub-block is within `tol` of
// the first sub-block's.
inline bool convergence(std::span<const int> actions, int blocks = 5, double tol = 0.05) {
  if (blocks < 1) throw std::invalid_argument("convergence needs at least one block");
  const std::size_t n = actions.size();
  if (n == 0) return true;
  const std::size_t b = std::min<std::size_t>(static_cast<std::size_t>(blocks), n);
  auto freq = [&](std::size_t k) {
    const std::size_t lo = k * n / b;
    const std::size_t hi = (k + 1) * n / b;
    double zeros = 0;
    for (std::size_t t = lo; t < hi; ++t) zeros += actions[t] == 0 ? 1.0 : 0.0;
    return zeros / static_cast<double>(hi - lo);
  };
  const double first = freq(0);
  for (std::size_t k = 1; k < b; ++k)
    if (std::abs(freq(k) - first) > tol + 1e-12) return false;
  return true;
}

struct PayoffMetrics {
  double avg_p1 = 0;
  double avg_p2 = 0;
  double welfare = 0;   // mean per-round payoff sum
  double fairness = 0;  // mean per-round payoff product
};

inline PayoffMetrics payoff_metrics(const Game& g, std::span<const JointAction> rounds) {
  PayoffMetrics m;
  if (rounds.empty()) throw std::invalid_argument("payoff metrics of an empty slice");
  for (const auto& ja : rounds) {
    const double u1 = g.payoff(Seat::row, ja);
    const double u2 = g.payoff(Seat::col, ja);
    m.avg_p1 += u1;
    m.avg_p2 += u2;
    m.welfare += u1 + u2;
    m.fairness += u1 * u2;
  }
  const double n = static_cast<double>(rounds.size());
  m.avg_p1 /= n;
  m.avg_p2 /= n;
  m.welfare /= n;
  m.fairness /= n;
  return m;
}

struct SolutionFlags {
  bool nash = false;
  bool pareto = false;
  bool welfare_optimum = false;
  bool fairness_optimum = false;
};

// Stage-game solution tests for the product of the two mixed strategies.
inline SolutionFlags solution_checks(const Game& g, MixedStrategy row, MixedStrategy col, double eps = 0.1) {
  double v1 = 0, v2 = 0, vprod = 0;
  double best_sum = 0, best_prod = 0;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const double w = row.prob(a) * col.prob(b);
      const double u1 = g.payoff(Seat::row, a, b);
      const double u2 = g.payoff(Seat::col, a, b);
      v1 += w * u1;
      v2 += w * u2;
      vprod += w * u1 * u2;
      best_sum = std::max(best_sum, u1 + u2);
      best_prod = std::max(best_prod, u1 * u2);
    }
  }
  SolutionFlags f;
  double gain1 = 0, gain2 = 0;
  for (int a = 0; a < 2; ++a) {
    const double dev1 = col.prob(0) * g.payoff(Seat::row, a, 0) + col.prob(1) * g.payoff(Seat::row, a, 1);
    const double dev2 = row.prob(0) * g.payoff(Seat::col, 0, a) + row.prob(1) * g.payoff(Seat::col, 1, a);
    gain1 = std::max(gain1, dev1 - v1);
    gain2 = std::max(gain2, dev2 - v2);
  }
  f.nash = gain1 <= eps && gain2 <= eps;
  f.pareto = true;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const double x1 = g.payoff(Seat::row, a, b);
      const double x2 = g.payoff(Seat::col, a, b);
      if (x1 >= v1 && x2 >= v2 && (x1 > v1 + eps || x2 > v2 + eps)) f.pareto = false;
    }
  }
  f.welfare_optimum = v1 + v2 >= best_sum - eps;
  f.fairness_optimum = vprod >= best_prod - eps;
  return f;
}

struct TimeSlice {
  int index = 0;
  std::size_t start = 0;
  std::size_t end = 0;
  MixedStrategy row;  // empirical action frequencies
  MixedStrategy col;
  PayoffMetrics payoffs;
  bool converged_p1 = false;
  bool converged_p2 = false;
  SolutionFlags solutions;

  double value(Criterion c) const {
    switch (c) {
      case Criterion::convergence_p1: return converged_p1 ? 1.0 : 0.0;
      case Criterion::convergence_p2: return converged_p2 ? 1.0 : 0.0;
      case Criterion::payoff_p1: return payoffs.avg_p1;
      case Criterion::payoff_p2: return payoffs.avg_p2;
      case Criterion::welfare: return payoffs.welfare;
      case Criterion::fairness: return payoffs.fairness;
      case Criterion::nash: return solutions.nash ? 1.0 : 0.0;
      case Criterion::pareto: return solutions.pareto ? 1.0 : 0.0;
      case Criterion::welfare_optimum: return solutions.welfare_optimum ? 1.0 : 0.0;
      case Criterion::fairness_optimum: return solutions.fairness_optimum ? 1.0 : 0.0;
    }
    return 0.0;
  }
};

// Splits a play into equal consecutive slices and measures every criterion.
inline std::vector<TimeSlice> slice_play(const Game& g, std::span<const JointAction> rounds,
                                         const MetricsConfig& cfg = {}) {
  if (cfg.slices < 1 || rounds.size() < static_cast<std::size_t>(cfg.slices))
    throw std::invalid_argument("need at least one round per slice");
  const std::size_t n = rounds.size();
  const std::size_t s = static_cast<std::size_t>(cfg.slices);
  std::vector<TimeSlice> out;
  out.reserve(s);
  for (std::size_t k = 0; k < s; ++k) {
    TimeSlice ts;
    ts.index = static_cast<int>(k);
    ts.start = k * n / s;
    ts.end = (k + 1) * n / s;
    const auto part = rounds.subspan(ts.start, ts.end - ts.start);
    std::vector<int> r, c;
    r.reserve(part.size());
    c.reserve(part.size());
    for (const auto& ja : part) {
      r.push_back(ja.row);
      c.push_back(ja.col);
    }
    const double len = static_cast<double>(part.size());
    ts.row.p0 = static_cast<double>(std::count(r.begin(), r.end(), 0)) / len;
    ts.col.p0 = static_cast<double>(std::count(c.begin(), c.end(), 0)) / len;
    ts.payoffs = payoff_metrics(g, part);
    ts.converged_p1 = convergence(r, cfg.blocks, cfg.tolerance);
    ts.converged_p2 = convergence(c, cfg.blocks, cfg.tolerance);
    ts.solutions = solution_checks(g, ts.row, ts.col, cfg.epsilon);
    out.push_back(ts);
  }
  return out;
}

}  // namespace typeprior
