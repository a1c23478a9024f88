#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fairdiv/allocators.hpp"
#include "fairdiv/budget.hpp"
#include "fairdiv/instance.hpp"
#include "fairdiv/rational.hpp"

namespace fairdiv {

/// Which misreports of one agent to generate: every valuation row at L1
/// distance <= alpha with the same total and the same weak order over single
/// goods (ties preserved both ways), every entry at least positivity_floor.
/// The true row always qualifies. `preserve_singleton_order = false` drops
/// the order condition, widening the neighborhood.
struct NeighborSpec {
  int agent = 0;
  Value alpha = 1;
  enum class Mode { exhaustive, sample } mode = Mode::exhaustive;
  std::uint64_t sample_count = 0;
  std::uint64_t seed = 0;
  Value positivity_floor = 1;
  bool preserve_singleton_order = true;
};

/// Neighbor rows in ascending lexicographic order (exhaustive mode) or a
/// seeded, deduplicated sample containing the true row.
std::vector<std::vector<Value>> enumerate_neighbors(const Instance& inst,
                                                    const NeighborSpec& spec,
                                                    const Budgets& budgets = {});

/// True iff the two rows induce the same weak order over all 2^m bundles.
bool is_ordinally_equivalent(std::span<const Value> a, std::span<const Value> b,
                             const Budgets& budgets = {});

struct EquivalentReports {
  std::vector<std::vector<Value>> rows;  // first entry is always the true row
  std::uint64_t attempted = 0;           // rejection-sampling draws made
};

/// Up to `count` rows ordinally equivalent to the agent's true row (same
/// total), found by seeded rejection sampling. May return fewer than
/// requested; equiv(v) cannot be enumerated, so this is a falsifier's sample,
/// not a cover.
EquivalentReports generate_equivalent(const Instance& inst, int agent,
                                      std::uint64_t count, std::uint64_t seed,
                                      const Budgets& budgets = {});

/// One misreport together with what it produced. `true_utility` is always
/// measured under the audited agent's true valuation.
struct NeighborOutcome {
  std::vector<Value> report;
  Value true_utility = 0;
  Allocation allocation;
};

struct StabilityReport {
  AllocatorId allocator;
  int agent = 0;
  Value alpha = 0;
  Value truthful_utility = 0;
  Allocation truthful_allocation;
  std::uint64_t neighbor_count = 0;

  /// Every neighbor leaves the agent's true utility unchanged.
  bool exact_stable = false;

  /// Set when utilities move through zero (truthful utility zero with a
  /// positive neighbor outcome, or the reverse): no finite epsilon exists.
  bool unbounded = false;

  /// min/max over neighbors of true-utility(misreport)/true-utility(truth);
  /// absent when unbounded or when the truthful utility is zero.
  std::optional<Rational> worst_low_ratio;
  std::optional<Rational> worst_high_ratio;
  /// max(worst_high_ratio, 1/worst_low_ratio); 1 means exactly stable.
  std::optional<Rational> epsilon;

  std::optional<NeighborOutcome> low_witness;
  std::optional<NeighborOutcome> high_witness;

  /// Per-neighbor outcomes in generation order; filled only on request.
  std::vector<NeighborOutcome> outcomes;
};

/// Runs the allocator on the truthful profile and on every profile with the
/// audited agent's row replaced by a neighbor.
StabilityReport audit_stability(const AllocatorId& allocator, const Instance& inst,
                                const NeighborSpec& spec, const ScanOptions& opts = {},
                                bool collect_outcomes = false);

struct EquivStabilityResult {
  bool stable = true;
  std::uint64_t draws = 0;       // sampled equivalent reports (incl. identity)
  std::uint64_t attempted = 0;   // rejection-sampling attempts behind them
  Value truthful_utility = 0;
  // Filled when stable == false:
  std::vector<Value> witness_report;
  Value witness_utility = 0;
};

/// Checks that the agent's true utility is identical across sampled
/// ordinally equivalent reports.
EquivStabilityResult check_equiv_stability(const AllocatorId& allocator,
                                           const Instance& inst, int agent,
                                           std::uint64_t count, std::uint64_t seed,
                                           const ScanOptions& opts = {});

std::string to_json(const StabilityReport& report);

}  // namespace fairdiv
