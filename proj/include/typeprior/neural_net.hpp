#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <stdexcept>

#include "typeprior/history.hpp"
#include "typeprior/rng.hpp"

namespace typeprior {

// 4-5-1 fully connected feed-forward net, sigmoid at every node. Inputs are
// the last two actions of both players encoded as -1 (action 0), +1
// (action 1) or 0 (not yet played). The output is the probability of
// playing action 0.
class NeuralNet {
 public:
  static constexpr std::size_t kInputs = 4;
  static constexpr std::size_t kHidden = 5;
  static constexpr std::size_t kWeights = kHidden * (kInputs + 1) + kHidden + 1;
  // Keeps the output strictly inside (0, 1) in double precision.
  static constexpr double kWeightBound = 5.0;

  using Weights = std::array<double, kWeights>;

  NeuralNet() { w_.fill(0.0); }

  explicit NeuralNet(std::span<const double> weights) {
    if (weights.size() != kWeights) throw std::invalid_argument("neural net genome needs 31 weights");
    for (std::size_t i = 0; i < kWeights; ++i) {
      if (!std::isfinite(weights[i])) throw std::invalid_argument("neural net weight is not finite");
      w_[i] = std::clamp(weights[i], -kWeightBound, kWeightBound);
    }
  }

  static double sigmoid(double x) noexcept { return 1.0 / (1.0 + std::exp(-x)); }

  double output(const std::array<double, kInputs>& x) const noexcept {
    double out = w_[kWeights - 1];
    for (std::size_t h = 0; h < kHidden; ++h) {
      const double* row = &w_[h * (kInputs + 1)];
      double a = row[kInputs];
      for (std::size_t k = 0; k < kInputs; ++k) a += row[k] * x[k];
      out += w_[kHidden * (kInputs + 1) + h] * sigmoid(a);
    }
    return sigmoid(out);
  }

  static std::array<double, kInputs> inputs(const TypeState& s) noexcept {
    auto enc = [](int a) { return a < 0 ? 0.0 : (a == 0 ? -1.0 : 1.0); };
    const Seat them = other(s.seat);
    return {enc(s.recent_action(s.seat, 0)), enc(s.recent_action(them, 0)), enc(s.recent_action(s.seat, 1)),
            enc(s.recent_action(them, 1))};
  }

  ActionDist act(const TypeState& s) const noexcept { return from_p0(output(inputs(s))); }

  const Weights& weights() const noexcept { return w_; }

  static NeuralNet random(Rng& rng, double scale = 2.0) {
    Weights w{};
    for (auto& x : w) x = rng.uniform(-scale, scale);
    return NeuralNet(w);
  }

  // One-point crossover on the weight string.
  static NeuralNet crossover(const NeuralNet& a, const NeuralNet& b, std::size_t cut) {
    Weights w = a.w_;
    for (std::size_t i = std::min(cut, kWeights); i < kWeights; ++i) w[i] = b.w_[i];
    return NeuralNet(w);
  }

  // Each weight receives uniform noise in [-step, step] with probability `rate`.
  NeuralNet mutated(Rng& rng, double rate, double step = 0.5) const {
    Weights w = w_;
    for (auto& x : w)
      if (rng.bernoulli(rate)) x += rng.uniform(-step, step);
    return NeuralNet(w);
  }

  friend bool operator==(const NeuralNet& a, const NeuralNet& b) { return a.w_ == b.w_; }

 private:
  Weights w_;
};

}  // namespace typeprior
