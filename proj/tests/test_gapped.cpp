#include <sstream>

#include "doctest.h"
#include "gapidx/gapped.hpp"
#include "oracles.hpp"

using namespace gapidx;

namespace {

oracle::Pairs as_pairs(const std::vector<ShiftCertificate>& v) {
  oracle::Pairs out;
  for (const auto& c : v) out.emplace_back(c.a, c.b);
  return out;
}

std::vector<Element> elements_of(const IntSet& s) {
  return {s.elements().begin(), s.elements().end()};
}

std::vector<Element> centers(const CoverPlan& p) {
  std::vector<Element> out;
  for (const auto& q : p.approx) out.push_back(q.center);
  return out;
}

}  // namespace

TEST_CASE("planner: single point") {
  auto p = plan_cover(7, 7);
  CHECK(p.point_shifts == std::vector<Element>{7});
  CHECK(p.approx.empty());
  CHECK_THROWS_AS(plan_cover(8, 7), std::invalid_argument);
}

TEST_CASE("planner: [10, 20]") {
  auto p = plan_cover(10, 20);
  CHECK(p.point_shifts == std::vector<Element>{10, 11, 12, 20, 19, 18});
  CHECK(p.forward_approx == 2);
  CHECK(centers(p) == std::vector<Element>{12, 14, 18, 16});
  for (const auto& q : p.approx) {
    CHECK(q.level == 1);
    CHECK(q.uncertain_lo() >= 10);
    CHECK(q.uncertain_hi() <= 20);
  }
  std::ostringstream text;
  write_plan(text, p);
  CHECK(text.str().find("approx level=1 center=12") != std::string::npos);
}

TEST_CASE("planner: tiny intervals stay inside") {
  for (Element a = 0; a <= 6; ++a) {
    for (Element b = a; b <= a + 4; ++b) {
      auto p = plan_cover(a, b);
      for (Element s : p.point_shifts) {
        CHECK(s >= a);
        CHECK(s <= b);
      }
    }
  }
}

TEST_CASE("planner: exhaustive coverage and containment up to 256") {
  std::size_t worst_phases = 0;
  for (Element a = 0; a <= 256; ++a) {
    for (Element b = a; b <= 256; ++b) {
      const auto p = plan_cover(a, b);
      std::vector<char> covered(static_cast<std::size_t>(b - a + 1), 0);
      auto mark = [&](Element lo, Element hi) {
        for (Element x = std::max(lo, a); x <= std::min(hi, b); ++x) {
          covered[static_cast<std::size_t>(x - a)] = 1;
        }
      };
      for (Element s : p.point_shifts) {
        REQUIRE(s >= a);
        REQUIRE(s <= b);
        mark(s, s);
      }
      for (const auto& q : p.approx) {
        const Element half = Element{1} << (q.level - 1);
        REQUIRE(q.center % (2 * half) == 0);
        REQUIRE(q.center >= 2 * half);
        // Uncertain zone (center - 2^l, center + 2^l), as integers.
        REQUIRE(q.center - 2 * half + 1 >= a);
        REQUIRE(q.center + 2 * half - 1 <= b);
        mark(q.center - half, q.center + half);
      }
      for (char c : covered) REQUIRE(c == 1);
      const std::size_t limit = 3 * (ceil_log2(static_cast<std::uint64_t>(b - a + 2)) + 1);
      REQUIRE(p.forward_approx <= limit);
      REQUIRE(p.backward_approx <= limit);
      REQUIRE(p.forward_phases <= ceil_log2(static_cast<std::uint64_t>(b - a + 2)) + 1);
      REQUIRE(p.base_query_count() <= 6 * limit + 6);
      worst_phases = std::max(worst_phases, std::max(p.forward_phases, p.backward_phases));
    }
  }
  MESSAGE("most phases in one direction: " << worst_phases);
}

TEST_CASE("levels and quotients") {
  auto sets = ingest_collection({{4, 5}, {1, 8}}, 8);
  GappedIndex g(sets, BackendConfig{});
  CHECK(g.level_count() == 3);
  const LevelIndex& l2 = g.level(2);
  CHECK(l2.quotient(4) == l2.quotient(5));
  CHECK(l2.quotients()[0].size() == 1);
  const auto values = l2.values(0, l2.quotient(4));
  CHECK(std::vector<Element>(values.begin(), values.end()) == std::vector<Element>{4, 5});
  CHECK(g.total_elements() <= g.element_bound());
  for (unsigned l = 1; l <= g.level_count(); ++l) {
    for (const auto& s : sets) {
      std::vector<Element> all;
      for (Element q : g.level(l).quotients()[s.id()].elements()) {
        for (Element v : g.level(l).values(s.id(), q)) all.push_back(v);
      }
      CHECK(all == elements_of(s));
    }
  }
}

TEST_CASE("approximate queries") {
  auto sets = ingest_collection({{4}, {9}, {20}}, 32);
  GappedIndex g(sets, BackendConfig{});
  CHECK(g.approx_exists(0, 1, {1, 4}));
  CHECK_FALSE(g.approx_exists(0, 2, {1, 4}));
  CHECK_THROWS_AS(g.approx_exists(0, 1, {1, 3}), std::invalid_argument);
  CHECK_THROWS_AS(g.approx_exists(0, 1, {1, 0}), std::invalid_argument);
  CHECK_THROWS_AS(g.approx_exists(0, 1, {9, 512}), std::invalid_argument);
}

TEST_CASE("approximate queries: sandwich property") {
  Rng rng(37);
  for (int trial = 0; trial < 40; ++trial) {
    const Element u = rng.uniform(2, 200);
    auto sets = ingest_collection(oracle::random_sets(rng, 3, 12, u), u);
    GappedIndex g(sets, BackendConfig{static_cast<BackendKind>(rng.uniform(0, 2)), 0.5});
    for (int x = 0; x < 40; ++x) {
      const auto i = static_cast<SetId>(rng.uniform(0, 2));
      const auto j = static_cast<SetId>(rng.uniform(0, 2));
      const auto level = static_cast<unsigned>(rng.uniform(1, static_cast<Element>(g.level_count())));
      const Element width = Element{1} << level;
      const ApproxQuery q{level, width * rng.uniform(1, std::max<Element>(1, u / width))};
      const auto near = oracle::gapped_pairs(elements_of(sets[i]), elements_of(sets[j]),
                                             q.covered_lo(), q.covered_hi());
      const auto loose = oracle::gapped_pairs(elements_of(sets[i]), elements_of(sets[j]),
                                              q.uncertain_lo(), q.uncertain_hi());
      const bool yes = g.approx_exists(i, j, q);
      if (!near.empty()) CHECK(yes);
      if (yes) CHECK_FALSE(loose.empty());
      // Every pair in the covered window, nothing outside the uncertain one.
      const auto reported = as_pairs(g.approx_report(i, j, q));
      CHECK(std::includes(reported.begin(), reported.end(), near.begin(), near.end()));
      CHECK(std::includes(loose.begin(), loose.end(), reported.begin(), reported.end()));
    }
  }
}

TEST_CASE("gapped existence and reporting examples") {
  auto sets = ingest_collection({{1}, {5}}, 8);
  GappedIndex g(sets, BackendConfig{});
  auto hit = g.exists(0, 1, 3, 5);
  REQUIRE(hit);
  CHECK(*hit == ShiftCertificate{1, 5});
  CHECK_FALSE(g.exists(0, 1, 5, 9));
  CHECK_THROWS_AS(g.exists(0, 1, 4, 3), std::invalid_argument);
  CHECK_THROWS_AS(g.exists(0, 1, -1, 3), std::invalid_argument);

  auto two = ingest_collection({{1, 2}, {4, 5}}, 8);
  GappedIndex h(two, BackendConfig{});
  CHECK(as_pairs(h.report(0, 1, 2, 3)) == oracle::Pairs{{1, 4}, {2, 4}, {2, 5}});
  CHECK(h.report(0, 1, 0, 0).empty());
}

TEST_CASE("gapped queries equal brute force on random instances") {
  Rng rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    const Element u = rng.uniform(1, 300);
    const auto k = static_cast<std::size_t>(rng.uniform(1, 4));
    auto sets = ingest_collection(oracle::random_sets(rng, k, 25, u), u);
    GappedIndex g(sets, BackendConfig{static_cast<BackendKind>(rng.uniform(0, 2)), 0.5});
    for (int x = 0; x < 30; ++x) {
      const auto i = static_cast<SetId>(rng.uniform(0, static_cast<Element>(k) - 1));
      const auto j = static_cast<SetId>(rng.uniform(0, static_cast<Element>(k) - 1));
      const Element alpha = rng.uniform(0, u);
      const Element beta = alpha + rng.uniform(0, rng.coin() ? 6 : u);
      const auto want = oracle::gapped_pairs(elements_of(sets[i]), elements_of(sets[j]), alpha, beta);
      GappedStats st;
      const auto got = g.report(i, j, alpha, beta, &st);
      REQUIRE(as_pairs(got) == want);
      const auto plan = g.plan_for(alpha, beta);
      if (plan) CHECK(st.max_multiplicity <= plan->size());
      auto hit = g.exists(i, j, alpha, beta);
      REQUIRE(hit.has_value() == !want.empty());
      if (hit) {
        CHECK(hit->b - hit->a >= alpha);
        CHECK(hit->b - hit->a <= beta);
        CHECK(sets[i].contains(hit->a));
        CHECK(sets[j].contains(hit->b));
      }
    }
  }
}
