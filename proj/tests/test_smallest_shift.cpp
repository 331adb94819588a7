#include "doctest.h"
#include "gapidx/smallest_shift.hpp"
#include "oracles.hpp"

using namespace gapidx;

namespace {

std::shared_ptr<const SetCollection> shared(std::vector<std::vector<Element>> raw, Element u) {
  return std::make_shared<const SetCollection>(ingest_collection(raw, u));
}

}  // namespace

TEST_CASE("threshold and table shape") {
  SmallestShiftIndex idx(shared({{1, 2, 3, 4}, {5, 6, 7, 8}, {9}}, 9));
  CHECK(idx.threshold() == 3);
  CHECK(idx.large_sets() == std::vector<SetId>{0, 1});
  CHECK(idx.is_large(0));
  CHECK_FALSE(idx.is_large(2));
  for (std::size_t x = 0; x < 2; ++x) CHECK(idx.table_entry(x, x) == 0);
  CHECK(idx.table_entry(0, 1) == 1);
  CHECK(idx.table_entry(1, 0) == std::nullopt);
}

TEST_CASE("small examples") {
  SmallestShiftIndex idx(shared({{5, 10}, {7}, {9}, {3}}, 10));
  CHECK(idx.query(0, 1) == 2);
  CHECK(idx.query(2, 3) == std::nullopt);
  CHECK(idx.query(3, 2) == 6);
}

TEST_CASE("oracle equivalence and counters") {
  Rng rng(79);
  for (int trial = 0; trial < 60; ++trial) {
    const auto k = static_cast<std::size_t>(rng.uniform(1, 8));
    const Element u = rng.uniform(1, 500);
    oracle::Sets raw;
    for (std::size_t x = 0; x < k; ++x) {
      const Element cap = rng.coin() ? 4 : 80;
      raw.push_back(oracle::random_set(rng, static_cast<std::size_t>(rng.uniform(1, std::min(cap, u))), u));
    }
    auto sets = shared(raw, u);
    SmallestShiftIndex idx(sets);
    const std::uint64_t n = sets->total_size();
    CHECK(idx.build_comparisons() <= kShiftBuildFactor * n * ceil_sqrt(n));
    for (SetId i = 0; i < k; ++i) {
      for (SetId j = 0; j < k; ++j) {
        ShiftQueryStats st;
        REQUIRE(idx.query(i, j, &st) == oracle::smallest_shift(raw[i], raw[j]));
        if (idx.is_large(i) && idx.is_large(j)) {
          CHECK(st.probes == 0);
          CHECK(st.table_lookups == 1);
        } else {
          CHECK(st.probes <= std::min({raw[i].size(), raw[j].size(), idx.threshold()}));
        }
      }
    }
  }
}
