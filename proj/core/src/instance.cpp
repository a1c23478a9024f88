#include "fairdiv/instance.hpp"

#include <cstdlib>
#include <nlohmann/json.hpp>

namespace fairdiv {

namespace {
using nlohmann::json;
}

std::vector<int> Bundle::goods() const {
  std::vector<int> out;
  for (std::uint32_t m = mask; m != 0; m &= m - 1) {
    out.push_back(std::countr_zero(m));
  }
  return out;
}

Instance Instance::from_values(std::vector<std::vector<Value>> values,
                               std::vector<std::string> names) {
  Instance inst;
  inst.n = static_cast<int>(values.size());
  inst.m = values.empty() ? 0 : static_cast<int>(values.front().size());
  inst.values = std::move(values);
  inst.names = std::move(names);
  inst.total = 0;
  if (inst.n > 0) {
    for (Value v : inst.values.front()) inst.total += v;
  }
  return inst;
}

ValidationReport validate(const Instance& inst) {
  ValidationReport report;
  if (inst.n < 2) {
    report.add("agents", "need at least 2 agents, got " + std::to_string(inst.n));
  }
  if (inst.m < 1) {
    report.add("goods", "need at least 1 good, got " + std::to_string(inst.m));
  }
  if (inst.m > 30) {
    report.add("goods", "at most 30 goods supported, got " + std::to_string(inst.m));
  }
  for (int i = 0; i < static_cast<int>(inst.values.size()); ++i) {
    if (static_cast<int>(inst.values[i].size()) != inst.m) {
      report.add("shape", "agent " + std::to_string(i) + " has " +
                              std::to_string(inst.values[i].size()) + " entries, expected " +
                              std::to_string(inst.m));
    }
  }
  if (!report.ok) return report;

  for (int i = 0; i < inst.n; ++i) {
    Value sum = 0;
    for (int j = 0; j < inst.m; ++j) {
      const Value v = inst.values[i][j];
      if (v < 1) {
        report.add("positivity", "agent " + std::to_string(i) + ", good " +
                                     std::to_string(j) + ": value " + std::to_string(v) +
                                     " must be >= 1");
      }
      sum += v;
    }
    if (sum != inst.total) {
      report.add("row-sum", "agent " + std::to_string(i) + " sums to " +
                                std::to_string(sum) + ", expected " +
                                std::to_string(inst.total));
    }
  }
  if (inst.total < inst.m) {
    report.add("total", "total " + std::to_string(inst.total) +
                            " below goods count " + std::to_string(inst.m));
  }
  if (!inst.names.empty() && static_cast<int>(inst.names.size()) != inst.m) {
    report.add("names", "names has " + std::to_string(inst.names.size()) +
                            " entries, expected " + std::to_string(inst.m));
  }
  return report;
}

Instance parse_instance(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("instance: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("values")) {
    throw ParseError("instance: expected an object with a \"values\" field");
  }
  const json& rows = doc["values"];
  if (!rows.is_array()) throw ParseError("instance: \"values\" must be an array of rows");

  std::vector<std::vector<Value>> values;
  values.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const json& row = rows[i];
    if (!row.is_array()) {
      throw ParseError("instance: values[" + std::to_string(i) + "] must be an array");
    }
    std::vector<Value> parsed;
    parsed.reserve(row.size());
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (!row[j].is_number_integer()) {
        throw ParseError("instance: values[" + std::to_string(i) + "][" +
                         std::to_string(j) + "] must be an integer");
      }
      parsed.push_back(row[j].get<Value>());
    }
    values.push_back(std::move(parsed));
  }

  std::vector<std::string> names;
  if (doc.contains("names")) {
    const json& labels = doc["names"];
    if (!labels.is_array()) throw ParseError("instance: \"names\" must be an array");
    for (const json& label : labels) {
      if (!label.is_string()) throw ParseError("instance: names entries must be strings");
      names.push_back(label.get<std::string>());
    }
  }

  Instance inst = Instance::from_values(std::move(values), std::move(names));
  ValidationReport report = validate(inst);
  if (!report.ok) {
    std::string what = "invalid instance:";
    for (const auto& [rule, message] : report.violations) {
      what += " [" + rule + "] " + message + ";";
    }
    throw ValidationError(std::move(what), std::move(report));
  }
  return inst;
}

std::string serialize(const Instance& inst) {
  json doc;
  doc["values"] = inst.values;
  if (!inst.names.empty()) doc["names"] = inst.names;
  return doc.dump();
}

Value bundle_value(const Instance& inst, int agent, Bundle b) {
  if (agent < 0 || agent >= inst.n) {
    throw std::out_of_range("bundle_value: agent " + std::to_string(agent));
  }
  if (!b.subset_of(Bundle::full(inst.m))) {
    throw std::out_of_range("bundle_value: bundle has goods outside the instance");
  }
  return row_value(inst.values[agent], b);
}

Value row_value(std::span<const Value> row, Bundle b) {
  Value sum = 0;
  for (std::uint32_t m = b.mask; m != 0; m &= m - 1) {
    sum += row[std::countr_zero(m)];
  }
  return sum;
}

std::vector<Value> subset_sums(std::span<const Value> row) {
  const std::size_t m = row.size();
  std::vector<Value> sums(std::size_t{1} << m, 0);
  for (std::uint32_t mask = 1; mask < sums.size(); ++mask) {
    const int low = std::countr_zero(mask);
    sums[mask] = sums[mask & (mask - 1)] + row[low];
  }
  return sums;
}

std::uint64_t allocation_count(const Instance& inst, const Budgets& budgets) {
  __int128 count = 1;
  for (int j = 0; j < inst.m; ++j) {
    count *= inst.n;
    if (count > static_cast<__int128>(budgets.assignments)) {
      throw BudgetError("allocation enumeration needs " + std::to_string(inst.n) + "^" +
                            std::to_string(inst.m) + " assignments, budget is " +
                            std::to_string(budgets.assignments),
                        count > static_cast<__int128>(UINT64_MAX)
                            ? UINT64_MAX
                            : static_cast<std::uint64_t>(count),
                        budgets.assignments);
    }
  }
  return static_cast<std::uint64_t>(count);
}

AllocationEnumerator::AllocationEnumerator(const Instance& inst, const Budgets& budgets)
    : inst_(&inst), digits_(inst.m, 0), count_(allocation_count(inst, budgets)) {}

bool AllocationEnumerator::next(Allocation& out) {
  if (produced_ == count_) return false;
  if (produced_ > 0) {
    int j = 0;
    while (true) {
      if (++digits_[j] < inst_->n) break;
      digits_[j] = 0;
      ++j;
    }
  }
  ++produced_;
  out.bundles.assign(inst_->n, Bundle{});
  for (int j = 0; j < inst_->m; ++j) {
    out.bundles[digits_[j]].mask |= std::uint32_t{1} << j;
  }
  return true;
}

Allocation parse_allocation(const std::string& text, const Instance& inst) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("allocation: ") + e.what());
  }
  if (!doc.is_array()) throw ParseError("allocation: expected a list of good-index lists");
  if (static_cast<int>(doc.size()) != inst.n) {
    throw ParseError("allocation: has " + std::to_string(doc.size()) +
                     " bundles, instance has " + std::to_string(inst.n) + " agents");
  }
  Allocation alloc;
  alloc.bundles.assign(inst.n, Bundle{});
  std::uint32_t seen = 0;
  for (int i = 0; i < inst.n; ++i) {
    if (!doc[i].is_array()) throw ParseError("allocation: bundle " + std::to_string(i) +
                                             " must be a list of good indices");
    for (const json& entry : doc[i]) {
      if (!entry.is_number_integer()) {
        throw ParseError("allocation: good indices must be integers");
      }
      const auto good = entry.get<std::int64_t>();
      if (good < 0 || good >= inst.m) {
        throw ParseError("allocation: good index " + std::to_string(good) +
                         " out of range [0, " + std::to_string(inst.m) + ")");
      }
      const std::uint32_t bit = std::uint32_t{1} << good;
      if (seen & bit) {
        throw ParseError("allocation: good " + std::to_string(good) + " assigned twice");
      }
      seen |= bit;
      alloc.bundles[i].mask |= bit;
    }
  }
  if (seen != Bundle::full(inst.m).mask) {
    throw ParseError("allocation: not all goods are assigned");
  }
  return alloc;
}

std::string allocation_to_json(const Allocation& alloc) {
  json doc = json::array();
  for (const Bundle& b : alloc.bundles) doc.push_back(b.goods());
  return doc.dump();
}

Budgets budgets_from_env() {
  Budgets budgets;
  if (const char* raw = std::getenv("FAIRDIV_BUDGET")) {
    char* end = nullptr;
    const unsigned long long parsed = std::strtoull(raw, &end, 10);
    if (end != raw && *end == '\0' && parsed > 0) {
      budgets.assignments = parsed;
      budgets.neighbors = parsed;
    }
  }
  return budgets;
}

}  // namespace fairdiv
