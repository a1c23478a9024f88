#pragma once

#include <span>
#include <string>
#include <string_view>

#include "fairdiv/budget.hpp"
#include "fairdiv/instance.hpp"

namespace fairdiv {

/// Names one of the built-in allocators, optionally wrapped by the two-phase
/// "modified" stabilizer. The wrapper nests exactly once.
struct AllocatorId {
  enum class Kind { draft, leximin, mnw, rank_leximin };

  Kind kind = Kind::leximin;
  bool modified = false;

  /// Accepts "draft", "leximin", "mnw", "rank-leximin", "modified:<inner>".
  /// Throws std::invalid_argument listing the valid names otherwise.
  static AllocatorId parse(std::string_view name);

  std::string to_string() const;

  friend bool operator==(const AllocatorId&, const AllocatorId&) = default;
};

/// Round-robin picking: each acting agent takes their highest-valued
/// remaining good, ties broken by lowest good index. `order` is the turn
/// sequence (one entry per good); empty means agents 0,1,...,n-1 repeating.
Allocation draft_allocate(const Instance& inst, std::span<const int> order = {});

/// Maximizes the ascending sorted utility vector lexicographically; ties
/// resolved by the smallest bundle-mask tuple.
Allocation leximin_allocate(const Instance& inst, const ScanOptions& opts = {});

/// Maximum Nash welfare: maximizes the number of agents with positive
/// utility, then the exact product of the positive utilities, then the
/// mask-tuple tie-break.
Allocation mnw_allocate(const Instance& inst, const ScanOptions& opts = {});

/// Two-phase stabilizer for n = 2: if agent 0 values some good strictly above
/// T/2, that good (lowest index if several) goes to agent 0 and everything
/// else to agent 1; otherwise delegates to `inner` unchanged.
Allocation modified_wrap(const AllocatorId& inner, const Instance& inst,
                         const ScanOptions& opts = {});

/// True iff the instance would be handled by the wrapper's first phase.
bool modified_phase_one(const Instance& inst);

Allocation run_allocator(const AllocatorId& id, const Instance& inst,
                         const ScanOptions& opts = {});

}  // namespace fairdiv
