#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace fairdiv {

/// Work limits for the exhaustive-search paths. Everything in this library is
/// exponential somewhere; the budgets turn "would run for a week" into a
/// refusal that names the required budget.
struct Budgets {
  std::uint64_t assignments = 100'000'000;        // allocation enumeration (n^m)
  std::uint64_t rank_entries = std::uint64_t{1} << 24;  // per rank table (2^|Q|)
  int pair_goods = 22;                            // |A_i ∪ A_j| for pair maximin
  int bundle_order_goods = 20;                    // m for bundle-order comparison
  std::uint64_t neighbors = 1'000'000;            // exhaustive neighborhood size
};

class BudgetError : public std::runtime_error {
 public:
  BudgetError(std::string what, std::uint64_t required, std::uint64_t allowed)
      : std::runtime_error(std::move(what)), required_(required), allowed_(allowed) {}

  std::uint64_t required() const { return required_; }
  std::uint64_t allowed() const { return allowed_; }

 private:
  std::uint64_t required_;
  std::uint64_t allowed_;
};

/// Default budgets, with the stream-enumeration limits (assignments and
/// neighbors) overridden by the FAIRDIV_BUDGET environment variable when set.
Budgets budgets_from_env();

/// Options threaded through the enumeration-backed operations.
struct ScanOptions {
  Budgets budgets{};
  int jobs = 1;
};

}  // namespace fairdiv
