#include "fairdiv/gen.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace fairdiv {

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("uniform_below: bound must be positive");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t draw;
  do {
    draw = rng();
  } while (draw >= limit);
  return draw % bound;
}

std::vector<Value> random_row(std::mt19937_64& rng, int m, Value total) {
  if (total < m) throw std::invalid_argument("random_row: total below goods count");
  // m-1 distinct cut points in [1, total-1]; gaps are the values.
  std::vector<Value> cuts(static_cast<std::size_t>(total) - 1);
  std::iota(cuts.begin(), cuts.end(), Value{1});
  for (int k = 0; k < m - 1; ++k) {
    const auto pick = k + static_cast<std::size_t>(uniform_below(rng, cuts.size() - k));
    std::swap(cuts[k], cuts[pick]);
  }
  cuts.resize(m - 1);
  std::sort(cuts.begin(), cuts.end());

  std::vector<Value> row;
  row.reserve(m);
  Value prev = 0;
  for (Value cut : cuts) {
    row.push_back(cut - prev);
    prev = cut;
  }
  row.push_back(total - prev);
  return row;
}

Instance random_instance(std::mt19937_64& rng, int n, int m, Value total) {
  std::vector<std::vector<Value>> values;
  values.reserve(n);
  for (int i = 0; i < n; ++i) values.push_back(random_row(rng, m, total));
  return Instance::from_values(std::move(values));
}

Instance random_identical_instance(std::mt19937_64& rng, int n, int m, Value total) {
  const std::vector<Value> row = random_row(rng, m, total);
  return Instance::from_values(std::vector<std::vector<Value>>(n, row));
}

}  // namespace fairdiv
