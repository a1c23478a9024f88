#pragma once

#include <optional>
#include <string>

#include "fairdiv/budget.hpp"
#include "fairdiv/instance.hpp"
#include "fairdiv/rational.hpp"

namespace fairdiv {

enum class FairnessProperty { ef1, efx, pmms, pmms_rank, beta_po };

std::string property_name(FairnessProperty p);

/// Violating agent pair. `own` and `required` are values for the
/// definition-based checks and ranks for the rank-based PMMS check;
/// `good` is the removed good for EF1/EFX.
struct PairWitness {
  int agent = 0;
  int other = 0;
  std::int64_t own = 0;
  std::int64_t required = 0;
  std::optional<int> good;
};

/// An allocation that Pareto-dominates the checked one. `factor` is the
/// largest utility ratio achieved by a strictly improving agent; absent when
/// that agent starts from utility zero (unbounded improvement).
struct DominationWitness {
  Allocation allocation;
  std::optional<Rational> factor;
};

struct FairnessVerdict {
  FairnessProperty property = FairnessProperty::ef1;
  bool holds = true;
  std::optional<PairWitness> pair;
  std::optional<DominationWitness> domination;
  std::optional<Rational> beta;  // set for beta_po verdicts
};

std::string to_json(const FairnessVerdict& verdict);

/// Envy-free up to one good: removing the good the envier values most from
/// the envied bundle must close the envy. Empty envied bundles pass vacuously.
FairnessVerdict check_ef1(const Instance& inst, const Allocation& alloc);

/// Envy-free up to any positively valued good: removing the good the envier
/// values least must already close the envy.
FairnessVerdict check_efx(const Instance& inst, const Allocation& alloc);

/// max over 2-partitions (B1, B2) of `combined` of min{v(B1), v(B2)},
/// from `agent`'s perspective.
Value pair_maximin_value(const Instance& inst, int agent, Bundle combined,
                         const Budgets& budgets = {});

/// Definition-based PMMS: every agent values their bundle at least at the
/// pair-maximin value of the combined bundle, against every other agent.
FairnessVerdict check_pmms_definition(const Instance& inst, const Allocation& alloc,
                                      const Budgets& budgets = {});

/// Rank-characterization PMMS: for every pair, both bundles rank above half
/// the subset lattice of the combined bundle. Agrees with
/// check_pmms_definition on every input.
FairnessVerdict check_pmms_rank(const Instance& inst, const Allocation& alloc,
                                const Budgets& budgets = {});

/// beta-Pareto optimality over the full allocation space. A violation is an
/// allocation that leaves no agent worse off and improves some agent to at
/// least beta times their current utility (strictly above it); beta = 1 is
/// exact Pareto optimality. All comparisons are exact cross-multiplications.
FairnessVerdict check_beta_po(const Instance& inst, const Allocation& alloc,
                              const Rational& beta, const ScanOptions& opts = {});

}  // namespace fairdiv
