#include "fairdiv/fairness.hpp"

#include <algorithm>
#include <limits>
#include <nlohmann/json.hpp>

#include "fairdiv/rank.hpp"
#include "fairdiv/scan.hpp"

namespace fairdiv {

namespace {
using nlohmann::ordered_json;

// Least/most valued good of `agent` inside bundle b. b must be nonempty.
std::pair<Value, int> min_good(const Instance& inst, int agent, Bundle b) {
  Value best = std::numeric_limits<Value>::max();
  int good = -1;
  for (int g : b.goods()) {
    if (inst.values[agent][g] < best) {
      best = inst.values[agent][g];
      good = g;
    }
  }
  return {best, good};
}

std::pair<Value, int> max_good(const Instance& inst, int agent, Bundle b) {
  Value best = -1;
  int good = -1;
  for (int g : b.goods()) {
    if (inst.values[agent][g] > best) {
      best = inst.values[agent][g];
      good = g;
    }
  }
  return {best, good};
}

FairnessVerdict check_envy_up_to(const Instance& inst, const Allocation& alloc,
                                 FairnessProperty property) {
  FairnessVerdict verdict;
  verdict.property = property;
  for (int i = 0; i < inst.n; ++i) {
    const Value own = bundle_value(inst, i, alloc.bundles[i]);
    for (int j = 0; j < inst.n; ++j) {
      if (i == j || alloc.bundles[j].empty()) continue;
      const auto [removed, good] = property == FairnessProperty::ef1
                                       ? max_good(inst, i, alloc.bundles[j])
                                       : min_good(inst, i, alloc.bundles[j]);
      const Value envied = bundle_value(inst, i, alloc.bundles[j]) - removed;
      if (own < envied) {
        verdict.holds = false;
        verdict.pair = PairWitness{i, j, own, envied, good};
        return verdict;
      }
    }
  }
  return verdict;
}

}  // namespace

std::string property_name(FairnessProperty p) {
  switch (p) {
    case FairnessProperty::ef1: return "EF1";
    case FairnessProperty::efx: return "EFX";
    case FairnessProperty::pmms: return "PMMS";
    case FairnessProperty::pmms_rank: return "PMMS-rank";
    case FairnessProperty::beta_po: return "beta-PO";
  }
  return "?";
}

FairnessVerdict check_ef1(const Instance& inst, const Allocation& alloc) {
  return check_envy_up_to(inst, alloc, FairnessProperty::ef1);
}

FairnessVerdict check_efx(const Instance& inst, const Allocation& alloc) {
  return check_envy_up_to(inst, alloc, FairnessProperty::efx);
}

Value pair_maximin_value(const Instance& inst, int agent, Bundle combined,
                         const Budgets& budgets) {
  if (combined.size() > budgets.pair_goods) {
    throw BudgetError("pair maximin over " + std::to_string(combined.size()) +
                          " goods exceeds the budget of " +
                          std::to_string(budgets.pair_goods),
                      std::uint64_t{1} << combined.size(),
                      std::uint64_t{1} << budgets.pair_goods);
  }
  const Value whole = bundle_value(inst, agent, combined);
  Value best = 0;
  // Walk every submask of `combined`; the complement is the other side.
  std::uint32_t sub = combined.mask;
  while (true) {
    const Value part = row_value(inst.values[agent], Bundle(sub));
    best = std::max(best, std::min(part, whole - part));
    if (sub == 0) break;
    sub = (sub - 1) & combined.mask;
  }
  return best;
}

FairnessVerdict check_pmms_definition(const Instance& inst, const Allocation& alloc,
                                      const Budgets& budgets) {
  FairnessVerdict verdict;
  verdict.property = FairnessProperty::pmms;
  for (int i = 0; i < inst.n; ++i) {
    const Value own = bundle_value(inst, i, alloc.bundles[i]);
    for (int j = 0; j < inst.n; ++j) {
      if (i == j) continue;
      const Bundle combined = alloc.bundles[i].unite(alloc.bundles[j]);
      const Value share = pair_maximin_value(inst, i, combined, budgets);
      if (own < share) {
        verdict.holds = false;
        verdict.pair = PairWitness{i, j, own, share, std::nullopt};
        return verdict;
      }
    }
  }
  return verdict;
}

FairnessVerdict check_pmms_rank(const Instance& inst, const Allocation& alloc,
                                const Budgets& budgets) {
  FairnessVerdict verdict;
  verdict.property = FairnessProperty::pmms_rank;
  Budgets table_budgets = budgets;
  table_budgets.rank_entries =
      std::max(table_budgets.rank_entries, std::uint64_t{1} << budgets.pair_goods);
  for (int i = 0; i < inst.n; ++i) {
    for (int j = i + 1; j < inst.n; ++j) {
      const Bundle combined = alloc.bundles[i].unite(alloc.bundles[j]);
      if (combined.size() > budgets.pair_goods) {
        throw BudgetError("pair rank check over " + std::to_string(combined.size()) +
                              " goods exceeds the budget of " +
                              std::to_string(budgets.pair_goods),
                          std::uint64_t{1} << combined.size(),
                          std::uint64_t{1} << budgets.pair_goods);
      }
      const std::int64_t half = std::int64_t{1} << (combined.size() - 1);
      const RankTable ti = build_rank_table(inst, i, combined, table_budgets);
      const std::int64_t ri = rank_of(ti, inst, alloc.bundles[i]);
      if (ri < half) {
        verdict.holds = false;
        verdict.pair = PairWitness{i, j, ri, half, std::nullopt};
        return verdict;
      }
      const RankTable tj = build_rank_table(inst, j, combined, table_budgets);
      const std::int64_t rj = rank_of(tj, inst, alloc.bundles[j]);
      if (rj < half) {
        verdict.holds = false;
        verdict.pair = PairWitness{j, i, rj, half, std::nullopt};
        return verdict;
      }
    }
  }
  return verdict;
}

namespace {

struct FirstDominating {
  bool found = false;
  std::uint64_t index = 0;
  std::vector<std::uint32_t> masks;
};

}  // namespace

FairnessVerdict check_beta_po(const Instance& inst, const Allocation& alloc,
                              const Rational& beta, const ScanOptions& opts) {
  if (beta < Rational(1)) throw std::invalid_argument("check_beta_po: beta must be >= 1");
  FairnessVerdict verdict;
  verdict.property = FairnessProperty::beta_po;
  verdict.beta = beta;

  std::vector<Value> current(inst.n);
  for (int i = 0; i < inst.n; ++i) current[i] = bundle_value(inst, i, alloc.bundles[i]);

  const std::uint64_t total = allocation_count(inst, opts.budgets);
  const std::int64_t bn = beta.num();
  const std::int64_t bd = beta.den();

  auto dominates = [&](const AssignmentCursor& cursor) {
    bool factor_hit = false;
    for (int i = 0; i < inst.n; ++i) {
      const Value u = cursor.utility(i);
      if (u < current[i]) return false;
      // Strict improvement reaching beta times the current utility.
      if (u > current[i] &&
          static_cast<__int128>(u) * bd >= static_cast<__int128>(bn) * current[i]) {
        factor_hit = true;
      }
    }
    return factor_hit;
  };

  auto absorb = [&](FirstDominating& state, const AssignmentCursor& cursor) {
    if (dominates(cursor)) {
      state.found = true;
      state.index = cursor.index();
      state.masks = cursor.masks();
      return false;  // stop this chunk, earliest hit found
    }
    return true;
  };
  auto merge = [](FirstDominating& into, FirstDominating&& from) {
    if (from.found && (!into.found || from.index < into.index)) into = std::move(from);
  };

  const FirstDominating hit =
      scan_assignments<FirstDominating>(inst, total, opts.jobs, absorb, merge);
  if (!hit.found) return verdict;

  verdict.holds = false;
  DominationWitness witness;
  witness.allocation.bundles.reserve(inst.n);
  for (std::uint32_t mask : hit.masks) witness.allocation.bundles.emplace_back(mask);
  std::optional<Rational> factor;
  for (int i = 0; i < inst.n; ++i) {
    const Value u = bundle_value(inst, i, witness.allocation.bundles[i]);
    if (u <= current[i]) continue;
    if (current[i] == 0) {
      factor.reset();  // improvement from zero: unbounded
      break;
    }
    const Rational r(u, current[i]);
    if (!factor || r > *factor) factor = r;
  }
  witness.factor = factor;
  verdict.domination = std::move(witness);
  return verdict;
}

namespace {

ordered_json rational_json(const Rational& r) {
  return ordered_json{{"num", r.num()}, {"den", r.den()}, {"decimal", r.to_decimal()}};
}

}  // namespace

std::string to_json(const FairnessVerdict& verdict) {
  ordered_json doc;
  doc["property"] = property_name(verdict.property);
  if (verdict.beta) doc["beta"] = rational_json(*verdict.beta);
  doc["holds"] = verdict.holds;
  if (verdict.pair) {
    ordered_json w;
    w["agent"] = verdict.pair->agent;
    w["other"] = verdict.pair->other;
    const bool rank_based = verdict.property == FairnessProperty::pmms_rank;
    w[rank_based ? "rank" : "own_value"] = verdict.pair->own;
    w[rank_based ? "required_rank" : "required_value"] = verdict.pair->required;
    if (verdict.pair->good) w["removed_good"] = *verdict.pair->good;
    doc["witness"] = std::move(w);
  }
  if (verdict.domination) {
    ordered_json w;
    w["allocation"] = ordered_json::parse(allocation_to_json(verdict.domination->allocation));
    if (verdict.domination->factor) {
      w["factor"] = rational_json(*verdict.domination->factor);
    } else {
      w["factor"] = "unbounded";
    }
    doc["witness"] = std::move(w);
  }
  return doc.dump();
}

}  // namespace fairdiv
