#include "fairdiv/allocators.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>

#include "fairdiv/rank.hpp"
#include "fairdiv/scan.hpp"

namespace fairdiv {

namespace {
using boost::multiprecision::cpp_int;
}

AllocatorId AllocatorId::parse(std::string_view name) {
  AllocatorId id;
  std::string_view inner = name;
  if (name.starts_with("modified:")) {
    id.modified = true;
    inner = name.substr(9);
    if (inner.starts_with("modified")) {
      throw std::invalid_argument("allocator: the modified wrapper nests exactly once");
    }
  }
  if (inner == "draft") {
    id.kind = Kind::draft;
  } else if (inner == "leximin") {
    id.kind = Kind::leximin;
  } else if (inner == "mnw") {
    id.kind = Kind::mnw;
  } else if (inner == "rank-leximin") {
    id.kind = Kind::rank_leximin;
  } else {
    throw std::invalid_argument(
        "unknown allocator \"" + std::string(name) +
        "\"; valid: draft, leximin, mnw, rank-leximin, modified:<inner>");
  }
  return id;
}

std::string AllocatorId::to_string() const {
  std::string inner;
  switch (kind) {
    case Kind::draft: inner = "draft"; break;
    case Kind::leximin: inner = "leximin"; break;
    case Kind::mnw: inner = "mnw"; break;
    case Kind::rank_leximin: inner = "rank-leximin"; break;
  }
  return modified ? "modified:" + inner : inner;
}

Allocation draft_allocate(const Instance& inst, std::span<const int> order) {
  std::vector<int> turns;
  if (order.empty()) {
    turns.reserve(inst.m);
    for (int t = 0; t < inst.m; ++t) turns.push_back(t % inst.n);
  } else {
    if (static_cast<int>(order.size()) != inst.m) {
      throw std::invalid_argument("draft: order must have one turn per good");
    }
    turns.assign(order.begin(), order.end());
    for (int agent : turns) {
      if (agent < 0 || agent >= inst.n) {
        throw std::out_of_range("draft: agent " + std::to_string(agent) + " in order");
      }
    }
  }

  Allocation alloc;
  alloc.bundles.assign(inst.n, Bundle{});
  std::uint32_t remaining = Bundle::full(inst.m).mask;
  for (int agent : turns) {
    int pick = -1;
    Value best = -1;
    for (std::uint32_t rest = remaining; rest != 0; rest &= rest - 1) {
      const int good = std::countr_zero(rest);
      if (inst.values[agent][good] > best) {
        best = inst.values[agent][good];
        pick = good;
      }
    }
    alloc.bundles[agent] = alloc.bundles[agent].with(pick);
    remaining &= ~(std::uint32_t{1} << pick);
  }
  return alloc;
}

namespace {

struct BestLeximinState {
  std::vector<Value> best;  // ascending sorted utilities; empty until first absorb
  std::vector<std::uint32_t> masks;
  std::vector<Value> scratch;
};

struct BestNashState {
  bool any = false;
  int positive = -1;
  cpp_int product;
  std::vector<std::uint32_t> masks;
};

}  // namespace

Allocation leximin_allocate(const Instance& inst, const ScanOptions& opts) {
  const std::uint64_t total = allocation_count(inst, opts.budgets);

  auto absorb = [&inst](BestLeximinState& state, const AssignmentCursor& cursor) {
    state.scratch.clear();
    for (int i = 0; i < inst.n; ++i) {
      const Value u = cursor.utility(i);
      state.scratch.insert(
          std::upper_bound(state.scratch.begin(), state.scratch.end(), u), u);
    }
    if (state.best.empty() || state.scratch > state.best ||
        (state.scratch == state.best && cursor.masks_less(state.masks))) {
      state.best = state.scratch;
      state.masks = cursor.masks();
    }
    return true;
  };
  auto merge = [](BestLeximinState& into, BestLeximinState&& from) {
    if (from.best.empty()) return;
    if (into.best.empty() || from.best > into.best ||
        (from.best == into.best && from.masks < into.masks)) {
      into.best = std::move(from.best);
      into.masks = std::move(from.masks);
    }
  };

  const BestLeximinState best =
      scan_assignments<BestLeximinState>(inst, total, opts.jobs, absorb, merge);
  Allocation alloc;
  for (std::uint32_t mask : best.masks) alloc.bundles.emplace_back(mask);
  return alloc;
}

Allocation mnw_allocate(const Instance& inst, const ScanOptions& opts) {
  const std::uint64_t total = allocation_count(inst, opts.budgets);

  auto absorb = [&inst](BestNashState& state, const AssignmentCursor& cursor) {
    int positive = 0;
    cpp_int product = 1;
    for (int i = 0; i < inst.n; ++i) {
      const Value u = cursor.utility(i);
      if (u > 0) {
        ++positive;
        product *= u;
      }
    }
    const bool better =
        !state.any || positive > state.positive ||
        (positive == state.positive &&
         (product > state.product ||
          (product == state.product && cursor.masks_less(state.masks))));
    if (better) {
      state.any = true;
      state.positive = positive;
      state.product = std::move(product);
      state.masks = cursor.masks();
    }
    return true;
  };
  auto merge = [](BestNashState& into, BestNashState&& from) {
    if (!from.any) return;
    const bool better =
        !into.any || from.positive > into.positive ||
        (from.positive == into.positive &&
         (from.product > into.product ||
          (from.product == into.product && from.masks < into.masks)));
    if (better) into = std::move(from);
  };

  const BestNashState best =
      scan_assignments<BestNashState>(inst, total, opts.jobs, absorb, merge);
  Allocation alloc;
  for (std::uint32_t mask : best.masks) alloc.bundles.emplace_back(mask);
  return alloc;
}

bool modified_phase_one(const Instance& inst) {
  for (int g = 0; g < inst.m; ++g) {
    if (2 * inst.values[0][g] > inst.total) return true;
  }
  return false;
}

Allocation modified_wrap(const AllocatorId& inner, const Instance& inst,
                         const ScanOptions& opts) {
  if (inst.n != 2) {
    throw std::invalid_argument("modified wrapper requires exactly 2 agents");
  }
  if (inner.modified) {
    throw std::invalid_argument("modified wrapper nests exactly once");
  }
  // At most one good can exceed T/2, but scan by index anyway.
  for (int g = 0; g < inst.m; ++g) {
    if (2 * inst.values[0][g] > inst.total) {
      const Bundle high = Bundle::single(g);
      return Allocation{{high, Bundle(Bundle::full(inst.m).mask & ~high.mask)}};
    }
  }
  return run_allocator(inner, inst, opts);
}

Allocation run_allocator(const AllocatorId& id, const Instance& inst,
                         const ScanOptions& opts) {
  if (id.modified) {
    AllocatorId inner = id;
    inner.modified = false;
    return modified_wrap(inner, inst, opts);
  }
  switch (id.kind) {
    case AllocatorId::Kind::draft: return draft_allocate(inst);
    case AllocatorId::Kind::leximin: return leximin_allocate(inst, opts);
    case AllocatorId::Kind::mnw: return mnw_allocate(inst, opts);
    case AllocatorId::Kind::rank_leximin: return rank_leximin_allocate(inst, opts);
  }
  throw std::logic_error("run_allocator: unreachable");
}

}  // namespace fairdiv
