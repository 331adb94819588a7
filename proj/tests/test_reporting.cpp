#include "doctest.h"
#include "gapidx/reporting.hpp"
#include "oracles.hpp"

using namespace gapidx;

namespace {

DyadicSubset block(Element lo, Element hi) { return {0, 0, 0, 1, 1, lo, hi}; }

oracle::Pairs as_pairs(const std::vector<ShiftCertificate>& v) {
  oracle::Pairs out;
  for (const auto& c : v) out.emplace_back(c.a, c.b);
  return out;
}

std::vector<Element> elements_of(const IntSet& s) {
  return {s.elements().begin(), s.elements().end()};
}

}  // namespace

TEST_CASE("matching pairs examples") {
  const std::vector<DyadicSubset> a{block(1, 4)};
  const std::vector<DyadicSubset> b{block(5, 6), block(7, 8)};
  CHECK(matching_pairs(a, b, 3).size() == 2);
  const std::vector<DyadicSubset> a2{block(1, 2)};
  const std::vector<DyadicSubset> b2{block(9, 9)};
  CHECK(matching_pairs(a2, b2, 1).empty());
}

TEST_CASE("matching pairs equal the quadratic interval check") {
  Rng rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const IntSet sa(0, oracle::random_set(rng, static_cast<std::size_t>(rng.uniform(1, 40)), 100));
    const IntSet sb(1, oracle::random_set(rng, static_cast<std::size_t>(rng.uniform(1, 40)), 100));
    const auto ca = cover_value_range(sa, rng.uniform(0, 50), rng.uniform(50, 101));
    const auto cb = cover_value_range(sb, rng.uniform(0, 50), rng.uniform(50, 101));
    const Element s = rng.uniform(-60, 60);
    std::vector<MatchPair> want;
    for (std::size_t x = 0; x < ca.size(); ++x) {
      for (std::size_t y = 0; y < cb.size(); ++y) {
        if (ca[x].min + s <= cb[y].max && cb[y].min <= ca[x].max + s) want.push_back({x, y});
      }
    }
    const auto got = matching_pairs(ca, cb, s);
    REQUIRE(got == want);
    CHECK(got.size() <= 2 * ca.size() + cb.size());
  }
}

TEST_CASE("augmented instance layout and accounting") {
  auto one = ingest_collection({{1, 2, 3, 4, 5, 6, 7, 8}}, 8);
  AugmentedInstance a(one, BackendConfig{});
  CHECK(a.sets().size() == 16);
  CHECK(a.total_elements() == 8 + 32);
  CHECK(a.total_elements() == a.element_bound());

  auto two = ingest_collection({{1, 2, 3, 4}, {5, 6, 7, 8}}, 8);
  AugmentedInstance b(two, BackendConfig{});
  CHECK(b.sets().size() == 2 + 7 + 7);

  // Not a power of two: the count falls strictly below the bound.
  auto five = ingest_collection({{1, 2, 3, 4, 5}}, 8);
  AugmentedInstance c(five, BackendConfig{});
  CHECK(c.total_elements() == 5 + 5 + 4 + 4);
  CHECK(c.total_elements() < c.element_bound());

  for (const auto& d : dyadic_subsets(two[1])) {
    const IntSet& s = b.sets()[b.block_id(d)];
    CHECK(s.min() == d.min);
    CHECK(s.max() == d.max);
    CHECK(s.size() == d.size());
  }
}

TEST_CASE("report examples") {
  auto sets = ingest_collection({{1, 2, 5}, {3, 4, 7}}, 8);
  AugmentedInstance a(sets, BackendConfig{});
  const auto got = a.report({0, 1, 2});
  CHECK(as_pairs(got) == oracle::Pairs{{1, 3}, {2, 4}, {5, 7}});
  CHECK(a.report({0, 1, 100}).empty());
}

TEST_CASE("report equals brute force, respects the call budget and splits cleanly") {
  Rng rng(29);
  std::uint64_t worst_ratio_calls = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const auto k = static_cast<std::size_t>(rng.uniform(1, 5));
    const Element u = rng.uniform(1, 120);
    auto sets = ingest_collection(oracle::random_sets(rng, k, 40, u), u);
    const BackendConfig config{static_cast<BackendKind>(rng.uniform(0, 2)), 0.5};
    AugmentedInstance a(sets, config);
    for (int x = 0; x < 40; ++x) {
      const ShiftQuery q{static_cast<SetId>(rng.uniform(0, static_cast<Element>(k) - 1)),
                         static_cast<SetId>(rng.uniform(0, static_cast<Element>(k) - 1)),
                         rng.uniform(-u / 2, u / 2)};
      const auto x_set = elements_of(sets[q.i]);
      const auto y_set = elements_of(sets[q.j]);
      const auto want = oracle::shift_pairs(x_set, y_set, q.s);
      ReportStats st;
      bool straddles = false;
      auto observer = [&](const SplitEvent& e) {
        // No solution may pair a value below the certificate with one above.
        for (const auto& lo : e.a_below) {
          for (Element v : lo.view(sets[q.i])) {
            if (std::binary_search(y_set.begin(), y_set.end(), v + q.s) && v + q.s > e.certificate.b) {
              straddles = true;
            }
          }
        }
        for (const auto& hi : e.a_above) {
          for (Element v : hi.view(sets[q.i])) {
            if (std::binary_search(y_set.begin(), y_set.end(), v + q.s) && v + q.s < e.certificate.b) {
              straddles = true;
            }
          }
        }
      };
      const auto got = a.report(q, &st, observer);
      REQUIRE(as_pairs(got) == want);
      CHECK_FALSE(straddles);
      const auto budget = report_call_budget(want.size(), sets.total_size());
      CHECK(st.base.exists_calls <= budget);
      worst_ratio_calls = std::max(worst_ratio_calls, st.base.exists_calls);
    }
  }
  MESSAGE("largest exists-call count seen: " << worst_ratio_calls);
}

TEST_CASE("3SUM reporting") {
  const std::vector<Element> a{1, 2, 3, 4};
  ThreeSumReporter r(a, BackendConfig{});
  CHECK(r.report(5) == std::vector<std::pair<Element, Element>>{{1, 4}, {2, 3}});
  const std::vector<Element> two{2};
  ThreeSumReporter s(two, BackendConfig{});
  CHECK(s.report(4) == std::vector<std::pair<Element, Element>>{{2, 2}});

  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Element> v;
    const auto n = rng.uniform(1, 40);
    for (Element x = 0; x < n; ++x) v.push_back(rng.uniform(-50, 50));
    ThreeSumReporter idx(v, BackendConfig{BackendKind::kSmallUniverse, 0.5});
    for (Element c = -101; c <= 101; ++c) {
      const auto want = oracle::three_sum_pairs(v, c);
      const auto got = idx.report(c);
      REQUIRE(got.size() == want.size());
      for (std::size_t y = 0; y < got.size(); ++y) CHECK(got[y] == want[y]);
    }
  }
}
