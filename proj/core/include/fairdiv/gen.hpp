#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "fairdiv/instance.hpp"

namespace fairdiv {

/// Unbiased draw from [0, bound). Uses rejection on raw engine output so the
/// sequence is identical across standard-library implementations.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);

/// Positive integers summing to `total`, uniform over compositions.
/// Requires total >= m.
std::vector<Value> random_row(std::mt19937_64& rng, int m, Value total);

Instance random_instance(std::mt19937_64& rng, int n, int m, Value total);

/// All agents share one random valuation row.
Instance random_identical_instance(std::mt19937_64& rng, int n, int m, Value total);

}  // namespace fairdiv
