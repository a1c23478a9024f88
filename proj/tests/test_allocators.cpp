#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <random>

#include "fairdiv/allocators.hpp"
#include "fairdiv/fairness.hpp"
#include "fairdiv/gen.hpp"
#include "fairdiv/stability.hpp"

using namespace fairdiv;

namespace {

const Instance kTable1a =
    Instance::from_values({{104, 273, 186, 437}, {162, 250, 240, 348}});
const Instance kTable2a = Instance::from_values({{999, 1}, {998, 2}});
const Instance kTable2b = Instance::from_values({{997, 3}, {998, 2}});
const Instance kTable3a = Instance::from_values({{3, 2, 2, 2}, {3, 2, 2, 2}});

}  // namespace

TEST_CASE("allocator names parse and print") {
  CHECK(AllocatorId::parse("draft").kind == AllocatorId::Kind::draft);
  CHECK(AllocatorId::parse("rank-leximin").to_string() == "rank-leximin");
  CHECK(AllocatorId::parse("modified:leximin").modified);
  CHECK(AllocatorId::parse("modified:leximin").to_string() == "modified:leximin");
  CHECK_THROWS_AS(AllocatorId::parse("nash"), std::invalid_argument);
  CHECK_THROWS_AS(AllocatorId::parse("modified:modified:mnw"), std::invalid_argument);
  try {
    AllocatorId::parse("nash");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("rank-leximin") != std::string::npos);
  }
}

TEST_CASE("draft picks the favourite remaining good each turn") {
  CHECK(draft_allocate(kTable1a) ==
        Allocation{{Bundle(0b1100), Bundle(0b0011)}});  // ({g4,g3},{g2,g1})
  CHECK(draft_allocate(kTable2a) == Allocation{{Bundle(0b01), Bundle(0b10)}});

  const Instance identical = Instance::from_values({{5, 5}, {5, 5}});
  CHECK(draft_allocate(identical) == Allocation{{Bundle(0b01), Bundle(0b10)}});

  // Explicit turn order.
  const std::array<int, 4> order{1, 0, 1, 0};
  const Allocation flipped = draft_allocate(kTable1a, order);
  CHECK(flipped.bundles[1].contains(3));  // agent B opens and takes g4

  const std::array<int, 2> bad{0, 9};
  CHECK_THROWS_AS(draft_allocate(kTable2a, bad), std::out_of_range);
  const std::array<int, 3> wrong_len{0, 1, 0};
  CHECK_THROWS_AS(draft_allocate(kTable2a, wrong_len), std::invalid_argument);
}

TEST_CASE("leximin maximizes the sorted utility vector") {
  CHECK(leximin_allocate(kTable2a) == Allocation{{Bundle(0b01), Bundle(0b10)}});
  CHECK(leximin_allocate(kTable2b) == Allocation{{Bundle(0b10), Bundle(0b01)}});

  const Instance identical = Instance::from_values({{2, 2}, {2, 2}});
  CHECK(leximin_allocate(identical) == Allocation{{Bundle(0b01), Bundle(0b10)}});
}

TEST_CASE("maximum Nash welfare outputs") {
  CHECK(mnw_allocate(kTable1a) == Allocation{{Bundle(0b1010), Bundle(0b0101)}});

  const Instance mistaken =
      Instance::from_values({{105, 271, 186, 438}, {162, 250, 240, 348}});
  CHECK(mnw_allocate(mistaken) == Allocation{{Bundle(0b1000), Bundle(0b0111)}});

  CHECK(mnw_allocate(kTable2a) == Allocation{{Bundle(0b01), Bundle(0b10)}});
}

TEST_CASE("modified wrapper: phase one hands over the dominant good") {
  const AllocatorId leximin = AllocatorId::parse("leximin");

  CHECK(modified_phase_one(kTable2a));
  CHECK(modified_wrap(leximin, kTable2a) == Allocation{{Bundle(0b01), Bundle(0b10)}});

  CHECK(modified_phase_one(kTable2b));
  CHECK(modified_wrap(leximin, kTable2b) == Allocation{{Bundle(0b01), Bundle(0b10)}});
  // Plain leximin flips the bundles on the misreport; the wrapper repairs it,
  // so agent A's true utility is unchanged between the two profiles.
  CHECK(bundle_value(kTable2a, 0, modified_wrap(leximin, kTable2b).bundles[0]) ==
        bundle_value(kTable2a, 0, modified_wrap(leximin, kTable2a).bundles[0]));

  // No good above T/2 = 4.5: delegate to the inner allocator.
  CHECK_FALSE(modified_phase_one(kTable3a));
  CHECK(modified_wrap(leximin, kTable3a) == leximin_allocate(kTable3a));

  const Instance three = Instance::from_values({{5, 5}, {5, 5}, {5, 5}});
  CHECK_THROWS_AS(modified_wrap(leximin, three), std::invalid_argument);
}

TEST_CASE("run_allocator dispatches by id") {
  CHECK(run_allocator(AllocatorId::parse("draft"), kTable2a) == draft_allocate(kTable2a));
  CHECK(run_allocator(AllocatorId::parse("modified:leximin"), kTable2a) ==
        modified_wrap(AllocatorId::parse("leximin"), kTable2a));
}

TEST_CASE("leximin output is PMMS and PO for two agents") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 25; ++trial) {
    const int m = 2 + static_cast<int>(uniform_below(rng, 4));
    const Instance inst = random_instance(rng, 2, m, 12 + static_cast<Value>(uniform_below(rng, 40)));
    const Allocation alloc = leximin_allocate(inst);
    CHECK(check_pmms_definition(inst, alloc).holds);
    CHECK(check_beta_po(inst, alloc, Rational(1)).holds);
  }
}

TEST_CASE("MNW output is EF1 and PO") {
  std::mt19937_64 rng(73);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(uniform_below(rng, 2));
    const int m = 2 + static_cast<int>(uniform_below(rng, 5));
    const Instance inst = random_instance(rng, n, m, 12 + static_cast<Value>(uniform_below(rng, 40)));
    const Allocation alloc = mnw_allocate(inst);
    CHECK(check_ef1(inst, alloc).holds);
    CHECK(check_beta_po(inst, alloc, Rational(1)).holds);
  }
}

TEST_CASE("draft output is EF1") {
  std::mt19937_64 rng(79);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 2 + static_cast<int>(uniform_below(rng, 3));
    const int m = 1 + static_cast<int>(uniform_below(rng, 6));
    const Instance inst = random_instance(rng, n, m, 10 + static_cast<Value>(uniform_below(rng, 40)));
    CHECK(check_ef1(inst, draft_allocate(inst)).holds);
  }
}

TEST_CASE("draft is invariant under order-preserving misreports") {
  std::mt19937_64 rng(83);
  for (int trial = 0; trial < 10; ++trial) {
    const int m = 2 + static_cast<int>(uniform_below(rng, 3));
    const Instance inst = random_instance(rng, 2, m, 10 + static_cast<Value>(uniform_below(rng, 20)));
    const Allocation truthful = draft_allocate(inst);
    for (int agent = 0; agent < 2; ++agent) {
      NeighborSpec spec;
      spec.agent = agent;
      spec.alpha = 3;
      for (const std::vector<Value>& row : enumerate_neighbors(inst, spec)) {
        CHECK(draft_allocate(inst.with_row(agent, row)) == truthful);
      }
    }
  }
}

TEST_CASE("modified wrapper preserves PMMS and phase-one outputs are PO") {
  std::mt19937_64 rng(89);
  const AllocatorId leximin = AllocatorId::parse("leximin");
  int phase_one_seen = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const int m = 2 + static_cast<int>(uniform_below(rng, 4));
    const Instance inst = random_instance(rng, 2, m, 12 + static_cast<Value>(uniform_below(rng, 40)));
    const Allocation alloc = modified_wrap(leximin, inst);
    CHECK(check_pmms_definition(inst, alloc).holds);
    if (modified_phase_one(inst)) {
      ++phase_one_seen;
      CHECK(check_beta_po(inst, alloc, Rational(1)).holds);
    }
  }
  CHECK(phase_one_seen > 0);
}
