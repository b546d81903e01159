#pragma once

#include <array>
#include <span>
#include <stdexcept>
#include <vector>

#include "typeprior/history.hpp"
#include "typeprior/rng.hpp"

namespace typeprior {

inline constexpr int kTreeInputs = 3;

// Deterministic decision tree over the other player's last three actions.
//
// Stored as preorder codes. A test code c < 6 asks "did the other player play
// action c % 2 exactly c / 2 + 1 rounds ago?" and is followed by its true
// subtree, then its false subtree. Before the start of play every test is
// false. Codes 6 and 7 are leaves playing action 0 and 1.
class DecisionTree {
 public:
  static constexpr int kLeaf0 = 6;
  static constexpr int kLeaf1 = 7;

  DecisionTree() : DecisionTree(std::vector<int>{kLeaf0}) {}

  explicit DecisionTree(std::vector<int> codes) : codes_(std::move(codes)) {
    std::size_t end = 0;
    if (codes_.empty() || !scan(0, end) || end != codes_.size())
      throw std::invalid_argument("malformed decision tree genome");
    codes_ = rebuild_repaired();
    index_skips();
  }

  static bool is_test(int code) noexcept { return code >= 0 && code < 6; }
  static int slot_of(int code) noexcept { return code / 2; }
  static int value_of(int code) noexcept { return code % 2; }

  int decide(const TypeState& s) const noexcept {
    std::size_t i = 0;
    const Seat them = other(s.seat);
    while (is_test(codes_[i])) {
      const bool hit = s.recent_action(them, slot_of(codes_[i])) == value_of(codes_[i]);
      i = hit ? i + 1 : else_branch_[i];
    }
    return codes_[i] - kLeaf0;
  }

  ActionDist act(const TypeState& s) const noexcept { return degenerate(decide(s)); }

  const std::vector<int>& genome() const noexcept { return codes_; }
  std::size_t size() const noexcept { return codes_.size(); }

  int depth() const { return depth_from(0); }

  // One past the end of the subtree rooted at preorder index i.
  std::size_t subtree_end(std::size_t i) const {
    if (!is_test(codes_[i])) return i + 1;
    return subtree_end(else_branch_[i]);
  }

  static DecisionTree random(Rng& rng, double leaf_prob = 0.3) {
    std::vector<int> out;
    grow(rng, 0, 0u, leaf_prob, out);
    return DecisionTree(std::move(out));
  }

  // Subtree rooted at `at` replaced by the donor's subtree rooted at `from`.
  DecisionTree spliced(std::size_t at, const DecisionTree& donor, std::size_t from) const {
    std::vector<int> out(codes_.begin(), codes_.begin() + static_cast<std::ptrdiff_t>(at));
    out.insert(out.end(), donor.codes_.begin() + static_cast<std::ptrdiff_t>(from),
               donor.codes_.begin() + static_cast<std::ptrdiff_t>(donor.subtree_end(from)));
    out.insert(out.end(), codes_.begin() + static_cast<std::ptrdiff_t>(subtree_end(at)), codes_.end());
    return DecisionTree(std::move(out));
  }

  // Each node mutates with probability `rate`: it either regrows its whole
  // subtree or flips in place (leaf action, or tested value).
  DecisionTree mutated(Rng& rng, double rate) const {
    std::vector<int> out;
    std::size_t i = 0;
    mutate_from(rng, rate, i, 0, 0u, out);
    return DecisionTree(std::move(out));
  }

  friend bool operator==(const DecisionTree& a, const DecisionTree& b) { return a.codes_ == b.codes_; }

 private:
  bool scan(std::size_t i, std::size_t& end) const {
    if (i >= codes_.size()) return false;
    const int c = codes_[i];
    if (c == kLeaf0 || c == kLeaf1) {
      end = i + 1;
      return true;
    }
    if (!is_test(c)) return false;
    std::size_t mid = 0;
    return scan(i + 1, mid) && scan(mid, end);
  }

  void index_skips() {
    else_branch_.assign(codes_.size(), 0);
    // Walk once; a test's false branch starts where its true subtree ends.
    std::vector<std::size_t> ends(codes_.size() + 1, 0);
    for (std::size_t k = codes_.size(); k-- > 0;) {
      if (!is_test(codes_[k])) {
        ends[k] = k + 1;
      } else {
        const std::size_t true_end = ends[k + 1];
        else_branch_[k] = true_end;
        ends[k] = ends[true_end];
      }
    }
  }

  int depth_from(std::size_t i) const {
    if (!is_test(codes_[i])) return 0;
    const std::size_t f = else_branch_[i];
    return 1 + std::max(depth_from(i + 1), depth_from(f));
  }

  // Possible values per slot as a bitmask over {none, 0, 1}.
  static constexpr unsigned kNone = 1u, kZero = 2u, kOne = 4u, kAny = 7u;

  static void grow(Rng& rng, int depth, unsigned used, double leaf_prob, std::vector<int>& out) {
    std::array<int, kTreeInputs> free{};
    int nfree = 0;
    for (int k = 0; k < kTreeInputs; ++k)
      if (!(used & (1u << k))) free[static_cast<std::size_t>(nfree++)] = k;
    if (nfree == 0 || depth >= kTreeInputs || rng.bernoulli(leaf_prob)) {
      out.push_back(kLeaf0 + static_cast<int>(rng.below(2)));
      return;
    }
    const int slot = free[rng.below(static_cast<std::size_t>(nfree))];
    const int value = static_cast<int>(rng.below(2));
    out.push_back(2 * slot + value);
    grow(rng, depth + 1, used | (1u << slot), leaf_prob, out);
    grow(rng, depth + 1, used | (1u << slot), leaf_prob, out);
  }

  void mutate_from(Rng& rng, double rate, std::size_t& i, int depth, unsigned used, std::vector<int>& out) const {
    const int c = codes_[i];
    const bool hit = rng.bernoulli(rate);
    if (!is_test(c)) {
      if (hit && rng.bernoulli(0.5)) {
        grow(rng, depth, used, 0.3, out);
      } else {
        out.push_back(hit ? (c == kLeaf0 ? kLeaf1 : kLeaf0) : c);
      }
      ++i;
      return;
    }
    if (hit && rng.bernoulli(0.5)) {
      grow(rng, depth, used, 0.3, out);
      i = subtree_end(i);
      return;
    }
    out.push_back(hit ? (c ^ 1) : c);
    ++i;
    const unsigned next = used | (1u << slot_of(c));
    mutate_from(rng, rate, i, depth + 1, next, out);
    mutate_from(rng, rate, i, depth + 1, next, out);
  }

  // Drops tests whose outcome is implied by an earlier test on the same slot,
  // so every root-to-leaf path tests each slot at most once.
  std::vector<int> rebuild_repaired() const {
    std::vector<int> out;
    std::array<unsigned, kTreeInputs> possible{kAny, kAny, kAny};
    std::array<bool, kTreeInputs> tested{};
    copy_repaired(0, possible, tested, out);
    return out;
  }

  std::size_t end_raw(std::size_t i) const {
    if (!is_test(codes_[i])) return i + 1;
    return end_raw(end_raw(i + 1));
  }

  void copy_repaired(std::size_t i, std::array<unsigned, kTreeInputs> possible, std::array<bool, kTreeInputs> tested,
                     std::vector<int>& out) const {
    const int c = codes_[i];
    if (!is_test(c)) {
      out.push_back(c);
      return;
    }
    const auto slot = static_cast<std::size_t>(slot_of(c));
    const unsigned bit = value_of(c) == 0 ? kZero : kOne;
    const std::size_t true_root = i + 1;
    const std::size_t false_root = end_raw(true_root);
    if (tested[slot]) {
      // Decided by the path when the bit is the only possibility; otherwise
      // fall through to the false branch.
      copy_repaired(possible[slot] == bit ? true_root : false_root, possible, tested, out);
      return;
    }
    out.push_back(c);
    tested[slot] = true;
    auto on_true = possible;
    on_true[slot] &= bit;
    copy_repaired(true_root, on_true, tested, out);
    auto on_false = possible;
    on_false[slot] &= ~bit;
    copy_repaired(false_root, on_false, tested, out);
  }

  std::vector<int> codes_;
  std::vector<std::size_t> else_branch_;
};

}  // namespace typeprior
