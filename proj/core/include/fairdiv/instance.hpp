#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fairdiv/budget.hpp"

namespace fairdiv {

using Value = std::int64_t;

/// A subset of the goods, one bit per good index (bit j == good j).
struct Bundle {
  std::uint32_t mask = 0;

  constexpr Bundle() = default;
  constexpr explicit Bundle(std::uint32_t m) : mask(m) {}

  static Bundle full(int goods) {
    return Bundle(goods >= 32 ? ~std::uint32_t{0}
                              : (std::uint32_t{1} << goods) - 1);
  }
  static Bundle single(int good) { return Bundle(std::uint32_t{1} << good); }

  bool contains(int good) const { return (mask >> good) & 1u; }
  bool subset_of(Bundle other) const { return (mask & ~other.mask) == 0; }
  bool empty() const { return mask == 0; }
  int size() const { return std::popcount(mask); }

  Bundle with(int good) const { return Bundle(mask | (std::uint32_t{1} << good)); }
  Bundle without(int good) const { return Bundle(mask & ~(std::uint32_t{1} << good)); }
  Bundle unite(Bundle other) const { return Bundle(mask | other.mask); }

  std::vector<int> goods() const;

  friend bool operator==(Bundle a, Bundle b) { return a.mask == b.mask; }
  friend auto operator<=>(Bundle a, Bundle b) { return a.mask <=> b.mask; }
};

/// An ordered partition of all goods into one bundle per agent.
/// Empty bundles are allowed.
struct Allocation {
  std::vector<Bundle> bundles;

  friend bool operator==(const Allocation&, const Allocation&) = default;

  /// Lexicographic order on the tuple of bundle masks, agent 0 first.
  /// This is the deterministic tie-break shared by all allocators.
  friend bool operator<(const Allocation& a, const Allocation& b) {
    return a.bundles < b.bundles;
  }
};

struct ValidationReport {
  bool ok = true;
  std::vector<std::pair<std::string, std::string>> violations;  // (rule, message)

  void add(std::string rule, std::string message) {
    ok = false;
    violations.emplace_back(std::move(rule), std::move(message));
  }
};

/// n agents, m goods, additive integer valuations with a common row total T.
struct Instance {
  int n = 0;
  int m = 0;
  std::vector<std::vector<Value>> values;  // n rows of m entries
  Value total = 0;                         // common row sum
  std::vector<std::string> names;          // optional good labels, size m or empty

  static Instance from_values(std::vector<std::vector<Value>> values,
                              std::vector<std::string> names = {});

  const std::vector<Value>& row(int agent) const { return values[agent]; }

  Instance with_row(int agent, std::vector<Value> replacement) const {
    Instance copy = *this;
    copy.values[agent] = std::move(replacement);
    return copy;
  }
};

class ParseError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string what, ValidationReport report)
      : std::runtime_error(std::move(what)), report_(std::move(report)) {}
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

/// Checks every model invariant; returns a report instead of throwing.
ValidationReport validate(const Instance& inst);

/// Parses the JSON instance document {"values": [[int,...],...], "names"?: [...]},
/// then validates. Throws ParseError on malformed input, ValidationError (with
/// the report attached) on a well-formed but invalid instance.
Instance parse_instance(const std::string& text);

/// Inverse of parse_instance on valid instances.
std::string serialize(const Instance& inst);

Value bundle_value(const Instance& inst, int agent, Bundle b);

/// Sum of an arbitrary valuation row over a bundle.
Value row_value(std::span<const Value> row, Bundle b);

/// All 2^m subset sums of a valuation row, indexed by bundle mask.
std::vector<Value> subset_sums(std::span<const Value> row);

/// n^m; throws BudgetError if it exceeds the assignment budget.
std::uint64_t allocation_count(const Instance& inst, const Budgets& budgets = {});

/// Streams the n^m ordered partitions in ascending assignment-vector order
/// (good 0 is the least significant digit, agent indices are the digits).
class AllocationEnumerator {
 public:
  explicit AllocationEnumerator(const Instance& inst, const Budgets& budgets = {});

  /// Fills `out` with the next allocation; false once the space is exhausted.
  bool next(Allocation& out);

  std::uint64_t count() const { return count_; }

 private:
  const Instance* inst_;
  std::vector<std::uint8_t> digits_;
  std::uint64_t count_;
  std::uint64_t produced_ = 0;
};

/// Allocation <-> JSON list of good-index lists, e.g. [[0,2],[1]].
Allocation parse_allocation(const std::string& text, const Instance& inst);
std::string allocation_to_json(const Allocation& alloc);

}  // namespace fairdiv
