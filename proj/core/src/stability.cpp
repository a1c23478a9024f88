#include "fairdiv/stability.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>
#include <numeric>
#include <set>
#include <stdexcept>

#include "fairdiv/gen.hpp"

namespace fairdiv {

namespace {

using nlohmann::ordered_json;

Value l1_distance(std::span<const Value> a, std::span<const Value> b) {
  Value d = 0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    d += a[j] > b[j] ? a[j] - b[j] : b[j] - a[j];
  }
  return d;
}

int sign_of(Value a, Value b) { return a < b ? -1 : a > b ? 1 : 0; }

bool same_singleton_order(std::span<const Value> truth, std::span<const Value> report) {
  for (std::size_t j = 0; j < truth.size(); ++j) {
    for (std::size_t k = j + 1; k < truth.size(); ++k) {
      if (sign_of(truth[j], truth[k]) != sign_of(report[j], report[k])) return false;
    }
  }
  return true;
}

// Depth-first enumeration of neighbor rows in ascending lexicographic order.
class NeighborSearch {
 public:
  NeighborSearch(std::span<const Value> truth, const NeighborSpec& spec,
                 Value total, std::uint64_t budget)
      : truth_(truth),
        spec_(spec),
        total_(total),
        budget_(budget),
        m_(static_cast<int>(truth.size())) {
    suffix_true_.assign(m_ + 1, 0);
    for (int j = m_ - 1; j >= 0; --j) suffix_true_[j] = suffix_true_[j + 1] + truth_[j];
    row_.assign(m_, 0);
    descend(0, 0, 0);
  }

  std::vector<std::vector<Value>> take() { return std::move(found_); }

 private:
  void descend(int j, Value sum, Value used_l1) {
    const Value slack = spec_.alpha - used_l1;
    if (j == m_) {
      accept();
      return;
    }
    if (j == m_ - 1) {
      // Last entry is forced by the total.
      const Value forced = total_ - sum;
      const Value dev = forced > truth_[j] ? forced - truth_[j] : truth_[j] - forced;
      if (forced >= spec_.positivity_floor && dev <= slack && prefix_ok(j, forced)) {
        row_[j] = forced;
        accept();
      }
      return;
    }
    const Value tail_floor = spec_.positivity_floor * (m_ - 1 - j);
    Value lo = truth_[j] - slack;
    if (lo < spec_.positivity_floor) lo = spec_.positivity_floor;
    Value hi = truth_[j] + slack;
    if (hi > total_ - sum - tail_floor) hi = total_ - sum - tail_floor;
    for (Value candidate = lo; candidate <= hi; ++candidate) {
      const Value dev = candidate > truth_[j] ? candidate - truth_[j] : truth_[j] - candidate;
      // The remaining entries must absorb the sum imbalance within the L1 slack.
      const Value rest_target = total_ - sum - candidate;
      const Value rest_true = suffix_true_[j + 1];
      const Value imbalance =
          rest_target > rest_true ? rest_target - rest_true : rest_true - rest_target;
      if (imbalance > slack - dev) continue;
      if (!prefix_ok(j, candidate)) continue;
      row_[j] = candidate;
      descend(j + 1, sum + candidate, used_l1 + dev);
    }
  }

  bool prefix_ok(int j, Value candidate) const {
    if (!spec_.preserve_singleton_order) return true;
    for (int k = 0; k < j; ++k) {
      if (sign_of(truth_[k], truth_[j]) != sign_of(row_[k], candidate)) return false;
    }
    return true;
  }

  void accept() {
    if (found_.size() == budget_) {
      throw BudgetError("exhaustive neighborhood exceeds the budget of " +
                            std::to_string(budget_) + " rows; use sample mode",
                        budget_ + 1, budget_);
    }
    found_.push_back(row_);
  }

  std::span<const Value> truth_;
  NeighborSpec spec_;
  Value total_;
  std::uint64_t budget_;
  int m_;
  std::vector<Value> suffix_true_;
  std::vector<Value> row_;
  std::vector<std::vector<Value>> found_;
};

std::vector<std::vector<Value>> sample_neighbors(const Instance& inst,
                                                 const NeighborSpec& spec) {
  const std::vector<Value>& truth = inst.values[spec.agent];
  std::set<std::vector<Value>> rows;
  rows.insert(truth);

  std::mt19937_64 rng(spec.seed);
  // Unit moves beyond the row's diameter cannot produce new rows.
  const std::uint64_t max_moves =
      static_cast<std::uint64_t>(std::min<Value>(spec.alpha / 2, inst.total));
  const std::uint64_t attempts = 64 * std::max<std::uint64_t>(spec.sample_count, 1);
  for (std::uint64_t t = 0; t < attempts && rows.size() < spec.sample_count; ++t) {
    std::vector<Value> row = truth;
    const std::uint64_t moves = uniform_below(rng, max_moves + 1);
    for (std::uint64_t k = 0; k < moves; ++k) {
      const int src = static_cast<int>(uniform_below(rng, inst.m));
      const int dst = static_cast<int>(uniform_below(rng, inst.m));
      row[src] -= 1;
      row[dst] += 1;
    }
    bool ok = true;
    for (Value v : row) ok = ok && v >= spec.positivity_floor;
    ok = ok && l1_distance(truth, row) <= spec.alpha;
    ok = ok && (!spec.preserve_singleton_order || same_singleton_order(truth, row));
    if (ok) rows.insert(std::move(row));
  }
  return {rows.begin(), rows.end()};
}

}  // namespace

std::vector<std::vector<Value>> enumerate_neighbors(const Instance& inst,
                                                    const NeighborSpec& spec,
                                                    const Budgets& budgets) {
  if (spec.agent < 0 || spec.agent >= inst.n) {
    throw std::out_of_range("enumerate_neighbors: agent " + std::to_string(spec.agent));
  }
  if (spec.alpha < 1) throw std::invalid_argument("enumerate_neighbors: alpha must be >= 1");
  if (spec.positivity_floor < 1) {
    throw std::invalid_argument("enumerate_neighbors: positivity floor must be >= 1");
  }
  if (spec.mode == NeighborSpec::Mode::sample) {
    if (spec.sample_count < 1) {
      throw std::invalid_argument("enumerate_neighbors: sample count must be >= 1");
    }
    return sample_neighbors(inst, spec);
  }
  // Equal-sum rows with a positive floor sit within L1 distance 2(T - m) of
  // each other; clamping alpha there keeps the bound arithmetic in range.
  NeighborSpec clamped = spec;
  clamped.alpha = std::min<Value>(spec.alpha, 2 * inst.total);
  NeighborSearch search(inst.values[spec.agent], clamped, inst.total, budgets.neighbors);
  return search.take();
}

bool is_ordinally_equivalent(std::span<const Value> a, std::span<const Value> b,
                             const Budgets& budgets) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("is_ordinally_equivalent: row lengths differ");
  }
  const int m = static_cast<int>(a.size());
  if (m > budgets.bundle_order_goods) {
    throw BudgetError("bundle-order comparison over " + std::to_string(m) +
                          " goods exceeds the budget of " +
                          std::to_string(budgets.bundle_order_goods),
                      std::uint64_t{1} << m,
                      std::uint64_t{1} << budgets.bundle_order_goods);
  }
  const std::vector<Value> sums_a = subset_sums(a);
  const std::vector<Value> sums_b = subset_sums(b);

  std::vector<std::uint32_t> perm(sums_a.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::sort(perm.begin(), perm.end(), [&](std::uint32_t x, std::uint32_t y) {
    if (sums_a[x] != sums_a[y]) return sums_a[x] < sums_a[y];
    return sums_b[x] < sums_b[y];
  });
  // Same weak order iff ties sit in the same blocks and blocks stay ordered.
  for (std::size_t i = 0; i + 1 < perm.size(); ++i) {
    const bool tie_a = sums_a[perm[i]] == sums_a[perm[i + 1]];
    const bool tie_b = sums_b[perm[i]] == sums_b[perm[i + 1]];
    if (tie_a != tie_b) return false;
    if (!tie_a && sums_b[perm[i]] > sums_b[perm[i + 1]]) return false;
  }
  return true;
}

EquivalentReports generate_equivalent(const Instance& inst, int agent,
                                      std::uint64_t count, std::uint64_t seed,
                                      const Budgets& budgets) {
  if (agent < 0 || agent >= inst.n) {
    throw std::out_of_range("generate_equivalent: agent " + std::to_string(agent));
  }
  const std::vector<Value>& truth = inst.values[agent];
  EquivalentReports result;
  result.rows.push_back(truth);
  if (count <= 1) return result;

  std::set<std::vector<Value>> seen;
  seen.insert(truth);
  std::mt19937_64 rng(seed);
  const Value radius = std::max<Value>(2, inst.total / 6);
  const std::uint64_t attempts = 128 * count;
  for (std::uint64_t t = 0; t < attempts && result.rows.size() < count; ++t) {
    ++result.attempted;
    std::vector<Value> row = truth;
    const std::uint64_t moves = 1 + uniform_below(rng, static_cast<std::uint64_t>(radius));
    for (std::uint64_t k = 0; k < moves; ++k) {
      const int src = static_cast<int>(uniform_below(rng, inst.m));
      const int dst = static_cast<int>(uniform_below(rng, inst.m));
      row[src] -= 1;
      row[dst] += 1;
    }
    bool ok = true;
    for (Value v : row) ok = ok && v >= 1;
    if (!ok || seen.contains(row)) continue;
    if (!is_ordinally_equivalent(truth, row, budgets)) continue;
    seen.insert(row);
    result.rows.push_back(std::move(row));
  }
  return result;
}

StabilityReport audit_stability(const AllocatorId& allocator, const Instance& inst,
                                const NeighborSpec& spec, const ScanOptions& opts,
                                bool collect_outcomes) {
  StabilityReport report;
  report.allocator = allocator;
  report.agent = spec.agent;
  report.alpha = spec.alpha;

  report.truthful_allocation = run_allocator(allocator, inst, opts);
  const Value u0 = bundle_value(inst, spec.agent, report.truthful_allocation.bundles[spec.agent]);
  report.truthful_utility = u0;

  const std::vector<std::vector<Value>> neighbors =
      enumerate_neighbors(inst, spec, opts.budgets);
  report.neighbor_count = neighbors.size();

  bool all_equal = true;
  Value min_u = 0, max_u = 0;
  bool first = true;
  for (const std::vector<Value>& row : neighbors) {
    Allocation outcome_alloc;
    if (row == inst.values[spec.agent]) {
      outcome_alloc = report.truthful_allocation;
    } else {
      outcome_alloc = run_allocator(allocator, inst.with_row(spec.agent, row), opts);
    }
    // Utility under the TRUE valuation, whatever was reported.
    const Value u = bundle_value(inst, spec.agent, outcome_alloc.bundles[spec.agent]);
    all_equal = all_equal && u == u0;
    NeighborOutcome outcome{row, u, std::move(outcome_alloc)};
    if (first || u < min_u) {
      min_u = u;
      report.low_witness = outcome;
    }
    if (first || u > max_u) {
      max_u = u;
      report.high_witness = outcome;
    }
    first = false;
    if (collect_outcomes) report.outcomes.push_back(std::move(outcome));
  }

  report.exact_stable = all_equal;
  if (u0 > 0) {
    report.worst_low_ratio = Rational(min_u, u0);
    report.worst_high_ratio = Rational(max_u, u0);
    if (min_u == 0) {
      report.unbounded = true;
    } else {
      const Rational inv_low = report.worst_low_ratio->reciprocal();
      report.epsilon = std::max(*report.worst_high_ratio, inv_low);
    }
  } else {
    // Ratios are undefined from a zero truthful utility; equality-based
    // stability still applies.
    report.unbounded = !all_equal;
    if (all_equal) report.epsilon = Rational(1);
  }
  return report;
}

EquivStabilityResult check_equiv_stability(const AllocatorId& allocator,
                                           const Instance& inst, int agent,
                                           std::uint64_t count, std::uint64_t seed,
                                           const ScanOptions& opts) {
  EquivStabilityResult result;
  const Allocation truthful = run_allocator(allocator, inst, opts);
  result.truthful_utility = bundle_value(inst, agent, truthful.bundles[agent]);

  EquivalentReports reports = generate_equivalent(inst, agent, count, seed, opts.budgets);
  result.draws = reports.rows.size();
  result.attempted = reports.attempted;
  for (const std::vector<Value>& row : reports.rows) {
    const Allocation alloc = row == inst.values[agent]
                                 ? truthful
                                 : run_allocator(allocator, inst.with_row(agent, row), opts);
    const Value u = bundle_value(inst, agent, alloc.bundles[agent]);
    if (u != result.truthful_utility) {
      result.stable = false;
      result.witness_report = row;
      result.witness_utility = u;
      break;
    }
  }
  return result;
}

namespace {

ordered_json rational_json(const Rational& r) {
  return ordered_json{{"num", r.num()}, {"den", r.den()}, {"decimal", r.to_decimal()}};
}

ordered_json optional_rational_json(const std::optional<Rational>& r) {
  if (!r) return nullptr;
  return rational_json(*r);
}

ordered_json outcome_json(const NeighborOutcome& outcome) {
  ordered_json doc;
  doc["report"] = outcome.report;
  doc["true_utility"] = outcome.true_utility;
  doc["allocation"] = ordered_json::parse(allocation_to_json(outcome.allocation));
  return doc;
}

}  // namespace

std::string to_json(const StabilityReport& report) {
  ordered_json doc;
  doc["allocator"] = report.allocator.to_string();
  doc["agent"] = report.agent;
  doc["alpha"] = report.alpha;
  doc["truthful_utility"] = report.truthful_utility;
  doc["truthful_allocation"] =
      ordered_json::parse(allocation_to_json(report.truthful_allocation));
  doc["neighbor_count"] = report.neighbor_count;
  doc["exact_stable"] = report.exact_stable;
  doc["unbounded"] = report.unbounded;
  doc["worst_low_ratio"] = optional_rational_json(report.worst_low_ratio);
  doc["worst_high_ratio"] = optional_rational_json(report.worst_high_ratio);
  doc["epsilon"] = optional_rational_json(report.epsilon);
  ordered_json witnesses;
  witnesses["low"] = report.low_witness ? outcome_json(*report.low_witness)
                                        : ordered_json(nullptr);
  witnesses["high"] = report.high_witness ? outcome_json(*report.high_witness)
                                          : ordered_json(nullptr);
  doc["witnesses"] = std::move(witnesses);
  return doc.dump();
}

}  // namespace fairdiv
