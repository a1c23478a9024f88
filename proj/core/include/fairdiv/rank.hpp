#pragma once

#include <cstdint>
#include <vector>

#include "fairdiv/budget.hpp"
#include "fairdiv/instance.hpp"

namespace fairdiv {

/// All 2^|Q| subset values of a ground set Q for one agent, sorted ascending.
/// The rank of a bundle S ⊆ Q is the number of subsets of Q worth at most
/// v(S), i.e. the inclusive upper-bound position of v(S) in sorted_values.
struct RankTable {
  int agent = 0;
  Bundle ground;
  std::vector<Value> sorted_values;
};

RankTable build_rank_table(const Instance& inst, int agent, Bundle ground,
                           const Budgets& budgets = {});

/// Number of subsets of the table's ground set with value <= the given value.
std::int64_t rank_of_value(const RankTable& table, Value value);

/// Rank of a bundle s ⊆ ground. Throws std::invalid_argument if s is not
/// contained in the ground set.
std::int64_t rank_of(const RankTable& table, const Instance& inst, Bundle s);

/// Per-agent ranks of an allocation's bundles over the full good set, plus
/// the agent ordering sorted by rank ascending (agent index breaks ties).
struct RankVector {
  std::vector<std::int64_t> ranks;  // ranks[i] = r_i(A_i), in [1, 2^m]
  std::vector<int> order;           // permutation of agents, rank-ascending

  /// Ranks read out along `order`, the sequence the comparator walks.
  std::vector<std::int64_t> sorted_ranks() const;
};

/// Tables must hold one full-ground-set table per agent, indexed by agent.
RankVector rank_vector(const Instance& inst, const Allocation& alloc,
                       const std::vector<RankTable>& tables);

std::vector<RankTable> build_full_tables(const Instance& inst,
                                         const Budgets& budgets = {});

enum class RankOrdering { precedes, equivalent, follows };

/// Position-by-position comparison of the rank-sorted agent sequences; the
/// first unequal rank decides. `precedes` means p comes before t, i.e. t is
/// the better allocation.
RankOrdering rank_leximin_cmp(const Allocation& p, const Allocation& t,
                              const Instance& inst,
                              const std::vector<RankTable>& tables);

/// Maximal allocation under rank_leximin_cmp; comparator ties are resolved by
/// the lexicographically smallest bundle-mask tuple, a valuation-independent
/// rule, so ordinally equivalent inputs produce identical outputs.
Allocation rank_leximin_allocate(const Instance& inst, const ScanOptions& opts = {});

}  // namespace fairdiv
