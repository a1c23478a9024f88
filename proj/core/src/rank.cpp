#include "fairdiv/rank.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "fairdiv/scan.hpp"

namespace fairdiv {

RankTable build_rank_table(const Instance& inst, int agent, Bundle ground,
                           const Budgets& budgets) {
  if (agent < 0 || agent >= inst.n) {
    throw std::out_of_range("build_rank_table: agent " + std::to_string(agent));
  }
  if (!ground.subset_of(Bundle::full(inst.m))) {
    throw std::out_of_range("build_rank_table: ground set outside the instance");
  }
  const int q = ground.size();
  const std::uint64_t entries = std::uint64_t{1} << q;
  if (entries > budgets.rank_entries) {
    throw BudgetError("rank table needs 2^" + std::to_string(q) + " entries, budget is " +
                          std::to_string(budgets.rank_entries),
                      entries, budgets.rank_entries);
  }

  std::vector<Value> members;
  members.reserve(q);
  for (int good : ground.goods()) members.push_back(inst.values[agent][good]);

  RankTable table{agent, ground, subset_sums(members)};
  std::sort(table.sorted_values.begin(), table.sorted_values.end());
  return table;
}

std::int64_t rank_of_value(const RankTable& table, Value value) {
  const auto end = std::upper_bound(table.sorted_values.begin(),
                                    table.sorted_values.end(), value);
  return end - table.sorted_values.begin();
}

std::int64_t rank_of(const RankTable& table, const Instance& inst, Bundle s) {
  if (!s.subset_of(table.ground)) {
    throw std::invalid_argument("rank_of: bundle not contained in the ground set");
  }
  return rank_of_value(table, bundle_value(inst, table.agent, s));
}

std::vector<std::int64_t> RankVector::sorted_ranks() const {
  std::vector<std::int64_t> out;
  out.reserve(order.size());
  for (int agent : order) out.push_back(ranks[agent]);
  return out;
}

RankVector rank_vector(const Instance& inst, const Allocation& alloc,
                       const std::vector<RankTable>& tables) {
  RankVector rv;
  rv.ranks.reserve(inst.n);
  for (int i = 0; i < inst.n; ++i) {
    rv.ranks.push_back(rank_of(tables[i], inst, alloc.bundles[i]));
  }
  rv.order.resize(inst.n);
  std::iota(rv.order.begin(), rv.order.end(), 0);
  std::sort(rv.order.begin(), rv.order.end(), [&](int a, int b) {
    if (rv.ranks[a] != rv.ranks[b]) return rv.ranks[a] < rv.ranks[b];
    return a < b;
  });
  return rv;
}

std::vector<RankTable> build_full_tables(const Instance& inst, const Budgets& budgets) {
  std::vector<RankTable> tables;
  tables.reserve(inst.n);
  for (int i = 0; i < inst.n; ++i) {
    tables.push_back(build_rank_table(inst, i, Bundle::full(inst.m), budgets));
  }
  return tables;
}

RankOrdering rank_leximin_cmp(const Allocation& p, const Allocation& t,
                              const Instance& inst,
                              const std::vector<RankTable>& tables) {
  const std::vector<std::int64_t> rp = rank_vector(inst, p, tables).sorted_ranks();
  const std::vector<std::int64_t> rt = rank_vector(inst, t, tables).sorted_ranks();
  for (int i = 0; i < inst.n; ++i) {
    if (rp[i] != rt[i]) {
      return rp[i] < rt[i] ? RankOrdering::precedes : RankOrdering::follows;
    }
  }
  return RankOrdering::equivalent;
}

namespace {

struct BestRankState {
  std::vector<std::int64_t> best;  // sorted rank vector, empty until first absorb
  std::vector<std::uint32_t> masks;
  std::vector<std::int64_t> scratch;
};

void sorted_ranks_of(const AssignmentCursor& cursor,
                     const std::vector<RankTable>& tables,
                     std::vector<std::int64_t>& out) {
  const int n = cursor.agents();
  out.clear();
  for (int i = 0; i < n; ++i) {
    const std::int64_t r = rank_of_value(tables[i], cursor.utility(i));
    out.insert(std::upper_bound(out.begin(), out.end(), r), r);
  }
}

}  // namespace

Allocation rank_leximin_allocate(const Instance& inst, const ScanOptions& opts) {
  const std::uint64_t total = allocation_count(inst, opts.budgets);
  const std::vector<RankTable> tables = build_full_tables(inst, opts.budgets);

  auto absorb = [&tables](BestRankState& state, const AssignmentCursor& cursor) {
    sorted_ranks_of(cursor, tables, state.scratch);
    if (state.best.empty() || state.scratch > state.best ||
        (state.scratch == state.best && cursor.masks_less(state.masks))) {
      state.best = state.scratch;
      state.masks = cursor.masks();
    }
    return true;
  };
  auto merge = [](BestRankState& into, BestRankState&& from) {
    if (from.best.empty()) return;
    if (into.best.empty() || from.best > into.best ||
        (from.best == into.best && from.masks < into.masks)) {
      into.best = std::move(from.best);
      into.masks = std::move(from.masks);
    }
  };

  const BestRankState best =
      scan_assignments<BestRankState>(inst, total, opts.jobs, absorb, merge);
  Allocation alloc;
  alloc.bundles.reserve(inst.n);
  for (std::uint32_t mask : best.masks) alloc.bundles.emplace_back(mask);
  return alloc;
}

}  // namespace fairdiv
