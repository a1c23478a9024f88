#pragma once

#include <cstdint>
#include <thread>
#include <vector>

#include "fairdiv/budget.hpp"
#include "fairdiv/instance.hpp"

namespace fairdiv {

/// Walks the assignment vectors in ascending order (good 0 is the least
/// significant digit), keeping per-agent bundle masks and utilities up to
/// date incrementally. Amortized O(1) per step.
class AssignmentCursor {
 public:
  AssignmentCursor(const Instance& inst, std::uint64_t start_index)
      : inst_(&inst),
        digits_(inst.m, 0),
        masks_(inst.n, 0),
        utilities_(inst.n, 0),
        index_(start_index) {
    std::uint64_t rest = start_index;
    for (int j = 0; j < inst.m; ++j) {
      digits_[j] = static_cast<std::uint8_t>(rest % inst.n);
      rest /= inst.n;
      masks_[digits_[j]] |= std::uint32_t{1} << j;
      utilities_[digits_[j]] += inst.values[digits_[j]][j];
    }
  }

  /// Advances to the next assignment; false on wrap-around past the last one.
  bool advance() {
    int j = 0;
    while (j < inst_->m) {
      const std::uint32_t bit = std::uint32_t{1} << j;
      const int from = digits_[j];
      masks_[from] &= ~bit;
      utilities_[from] -= inst_->values[from][j];
      if (++digits_[j] < inst_->n) {
        const int to = digits_[j];
        masks_[to] |= bit;
        utilities_[to] += inst_->values[to][j];
        ++index_;
        return true;
      }
      digits_[j] = 0;
      masks_[0] |= bit;
      utilities_[0] += inst_->values[0][j];
      ++j;
    }
    index_ = 0;
    return false;
  }

  std::uint64_t index() const { return index_; }
  std::uint32_t mask(int agent) const { return masks_[agent]; }
  Value utility(int agent) const { return utilities_[agent]; }
  int agents() const { return inst_->n; }

  Allocation allocation() const {
    Allocation alloc;
    alloc.bundles.reserve(masks_.size());
    for (std::uint32_t m : masks_) alloc.bundles.emplace_back(m);
    return alloc;
  }

  /// True iff the current mask tuple is lexicographically smaller than `other`.
  bool masks_less(const std::vector<std::uint32_t>& other) const {
    return masks_ < other;
  }
  const std::vector<std::uint32_t>& masks() const { return masks_; }

 private:
  const Instance* inst_;
  std::vector<std::uint8_t> digits_;
  std::vector<std::uint32_t> masks_;
  std::vector<Value> utilities_;
  std::uint64_t index_;
};

/// Splits the assignment space into contiguous chunks, folds each chunk into a
/// State, and merges the per-chunk states in ascending chunk order, which keeps
/// every reduction deterministic regardless of the job count.
///
/// State requirements: default-constructible, movable.
/// absorb(State&, const AssignmentCursor&) -> bool; returning false stops the
/// chunk early (used by first-witness searches).
/// merge(State&, State&&) folds the next chunk into the accumulator.
template <typename State, typename Absorb, typename Merge>
State scan_assignments(const Instance& inst, std::uint64_t total, int jobs,
                       Absorb absorb, Merge merge) {
  if (jobs < 1) jobs = 1;
  const auto hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw > 0 && jobs > hw) jobs = hw;
  if (static_cast<std::uint64_t>(jobs) > total) jobs = static_cast<int>(total);
  if (jobs <= 1 || total < 4096) {
    State state{};
    AssignmentCursor cursor(inst, 0);
    for (std::uint64_t i = 0; i < total; ++i, cursor.advance()) {
      if (!absorb(state, cursor)) break;
    }
    return state;
  }

  std::vector<State> partial(jobs);
  std::vector<std::thread> workers;
  workers.reserve(jobs);
  const std::uint64_t chunk = total / jobs;
  for (int w = 0; w < jobs; ++w) {
    const std::uint64_t lo = chunk * w;
    const std::uint64_t hi = (w + 1 == jobs) ? total : chunk * (w + 1);
    workers.emplace_back([&, w, lo, hi]() {
      State state{};
      AssignmentCursor cursor(inst, lo);
      for (std::uint64_t i = lo; i < hi; ++i, cursor.advance()) {
        if (!absorb(state, cursor)) break;
      }
      partial[w] = std::move(state);
    });
  }
  for (auto& worker : workers) worker.join();
  State state = std::move(partial[0]);
  for (int w = 1; w < jobs; ++w) merge(state, std::move(partial[w]));
  return state;
}

}  // namespace fairdiv
