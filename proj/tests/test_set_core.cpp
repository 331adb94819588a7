#include <sstream>

#include "doctest.h"
#include "gapidx/set_core.hpp"
#include "oracles.hpp"

using namespace gapidx;

namespace {

IntSet make_set(std::vector<Element> v) { return IntSet(0, std::move(v)); }

std::vector<Element> range_set(Element m) {
  std::vector<Element> v;
  for (Element x = 1; x <= m; ++x) v.push_back(2 * x);
  return v;
}

// Ranks covered by a cover, in order, each once.
std::vector<std::size_t> covered_ranks(const std::vector<DyadicSubset>& cover) {
  std::vector<std::size_t> out;
  for (const auto& d : cover) {
    for (std::size_t r = d.first_rank; r <= d.last_rank; ++r) out.push_back(r);
  }
  return out;
}

}  // namespace

TEST_CASE("ingest sorts, dedupes and counts") {
  auto c = ingest_collection({{3, 1, 3}}, 5);
  REQUIRE(c.size() == 1);
  CHECK(c[0].elements().size() == 2);
  CHECK(c[0].min() == 1);
  CHECK(c[0].max() == 3);
  CHECK(c.total_size() == 2);

  auto d = ingest_collection({{1}, {2, 4}}, 4);
  CHECK(d.size() == 2);
  CHECK(d.total_size() == 3);
}

TEST_CASE("ingest rejects bad input") {
  CHECK_THROWS_AS(ingest_collection({{6}}, 5), FormatError);
  CHECK_THROWS_AS(ingest_collection({{1}, {}}, 5), FormatError);
  CHECK_THROWS_AS(ingest_collection({{0}}, 5), FormatError);
  CHECK_THROWS_AS(ingest_collection({{1}}, (Element{1} << 40) + 1), GuardError);
  try {
    ingest_collection({{1}, {2, 7}}, 5);
  } catch (const FormatError& e) {
    const std::string msg = e.what();
    CHECK(msg.find('2') != std::string::npos);
    CHECK(msg.find('7') != std::string::npos);
  }
}

TEST_CASE("collection text format round-trips and is strict") {
  std::istringstream in("10 2\n1 5 3\n7\n");
  auto c = parse_collection(in);
  CHECK(c.universe() == 10);
  CHECK(c.size() == 2);
  std::ostringstream out;
  write_collection(out, c);
  std::istringstream again(out.str());
  CHECK(parse_collection(again) == c);

  std::istringstream short_input("10 3\n1\n2\n");
  CHECK_THROWS_AS(parse_collection(short_input), FormatError);
  std::istringstream junk("10 1\n1 x\n");
  CHECK_THROWS_AS(parse_collection(junk), FormatError);
  std::istringstream trailing("10 1\n1\n2\n");
  CHECK_THROWS_AS(parse_collection(trailing), FormatError);
}

TEST_CASE("dyadic subset counts") {
  CHECK(dyadic_subsets(make_set(range_set(8))).size() == 15);
  auto one = dyadic_subsets(make_set({4}));
  REQUIRE(one.size() == 1);
  CHECK(one[0].level == 0);
  CHECK(one[0].min == 4);

  auto five = dyadic_subsets(make_set(range_set(5)));
  CHECK(five.size() == 8);
  std::size_t level1 = 0;
  for (const auto& d : five) {
    if (d.level == 1) {
      ++level1;
      CHECK(d.last_rank <= 4);
    }
    if (d.level == 2) {
      CHECK(d.first_rank == 1);
      CHECK(d.last_rank == 4);
    }
  }
  CHECK(level1 == 2);
}

TEST_CASE("dyadic subsets: element bound, min/max, disjoint per level") {
  for (Element m = 1; m <= 64; ++m) {
    const IntSet s = make_set(range_set(m));
    const auto subsets = dyadic_subsets(s);
    std::size_t total = 0;
    std::vector<std::vector<int>> used(8, std::vector<int>(static_cast<std::size_t>(m) + 1, 0));
    for (const auto& d : subsets) {
      total += d.size();
      const auto view = d.view(s);
      CHECK(view.front() == d.min);
      CHECK(view.back() == d.max);
      CHECK(d.first_rank == d.block * (std::size_t{1} << d.level) + 1);
      for (std::size_t r = d.first_rank; r <= d.last_rank; ++r) ++used[d.level][r];
    }
    CHECK(total == dyadic_element_count(static_cast<std::size_t>(m)));
    CHECK(subsets.size() == dyadic_subset_count(static_cast<std::size_t>(m)));
    CHECK(total <= static_cast<std::size_t>(m) * (floor_log2(static_cast<std::uint64_t>(m)) + 1));
    for (const auto& level : used) {
      for (int c : level) CHECK(c <= 1);
    }
  }
}

TEST_CASE("rank cover examples") {
  const IntSet s = make_set(range_set(8));
  auto all = cover_rank_range(s, 1, 8);
  REQUIRE(all.size() == 1);
  CHECK(all[0].level == 3);

  auto mid = cover_rank_range(s, 2, 7);
  REQUIRE(mid.size() == 4);
  CHECK(mid[0].first_rank == 2);
  CHECK(mid[0].last_rank == 2);
  CHECK(mid[1].first_rank == 3);
  CHECK(mid[1].last_rank == 4);
  CHECK(mid[2].first_rank == 5);
  CHECK(mid[2].last_rank == 6);
  CHECK(mid[3].first_rank == 7);

  CHECK(cover_rank_range(s, 5, 5).size() == 1);
  CHECK_THROWS_AS(cover_rank_range(s, 0, 3), std::invalid_argument);
  CHECK_THROWS_AS(cover_rank_range(s, 4, 3), std::invalid_argument);
  CHECK_THROWS_AS(cover_rank_range(s, 1, 9), std::invalid_argument);
}

TEST_CASE("rank cover exhaustive for m <= 64") {
  for (Element m = 1; m <= 64; ++m) {
    const IntSet s = make_set(range_set(m));
    const std::size_t bound = 2 * ceil_log2(static_cast<std::uint64_t>(m)) + 1;
    for (std::size_t lo = 1; lo <= static_cast<std::size_t>(m); ++lo) {
      for (std::size_t hi = lo; hi <= static_cast<std::size_t>(m); ++hi) {
        const auto cover = cover_rank_range(s, lo, hi);
        const auto ranks = covered_ranks(cover);
        bool exact = ranks.size() == hi - lo + 1;
        for (std::size_t x = 0; exact && x < ranks.size(); ++x) exact = ranks[x] == lo + x;
        REQUIRE(exact);
        REQUIRE(cover.size() <= bound);
      }
    }
  }
}

TEST_CASE("value cover examples") {
  const IntSet s = make_set({2, 4, 6, 8});
  auto c = cover_value_range(s, 3, 7);
  const auto ranks = covered_ranks(c);
  CHECK(ranks == std::vector<std::size_t>{2, 3});

  const IntSet t = make_set({2, 4});
  CHECK(cover_value_range(t, 5, 9).empty());
  auto whole = cover_value_range(t, 1, 9);
  REQUIRE(whole.size() == 1);
  CHECK(whole[0].size() == 2);
  CHECK(cover_value_range(t, 9, 1).empty());
}

TEST_CASE("value cover matches a scan on every range") {
  Rng rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const auto m = static_cast<std::size_t>(rng.uniform(1, 64));
    const IntSet s = make_set(oracle::random_set(rng, m, 200));
    const std::size_t bound = 2 * ceil_log2(m) + 1;
    for (Element a = 0; a <= 201; a += 3) {
      for (Element b = a; b <= 201; b += 5) {
        std::vector<Element> want;
        for (Element x : s.elements()) {
          if (x >= a && x <= b) want.push_back(x);
        }
        std::vector<Element> got;
        const auto cover = cover_value_range(s, a, b);
        for (const auto& d : cover) {
          for (Element x : d.view(s)) got.push_back(x);
        }
        REQUIRE(got == want);
        REQUIRE(cover.size() <= bound);
      }
    }
  }
}

TEST_CASE("dyadic intervals") {
  CHECK(dyadic_intervals(4).size() == 7);
  auto one = dyadic_intervals(1);
  REQUIRE(one.size() == 1);
  CHECK(one[0].lo == 1);
  CHECK(one[0].hi == 1);
  auto six = dyadic_intervals(6);
  CHECK(six.size() == 10);
  for (const auto& iv : six) {
    CHECK(iv.hi <= 6);
    CHECK(iv.hi - iv.lo + 1 == (std::size_t{1} << iv.level));
    CHECK(iv.lo == 1 + iv.block * (std::size_t{1} << iv.level));
  }
}

TEST_CASE("position cover is exact and small") {
  for (std::size_t lo = 1; lo <= 70; ++lo) {
    for (std::size_t hi = lo; hi <= 70; ++hi) {
      const auto cover = cover_positions(lo, hi);
      std::size_t next = lo;
      for (const auto& iv : cover) {
        REQUIRE(iv.lo == next);
        REQUIRE(iv.lo == 1 + iv.block * (std::size_t{1} << iv.level));
        next = iv.hi + 1;
      }
      REQUIRE(next == hi + 1);
      REQUIRE(cover.size() <= 2 * ceil_log2(hi) + 1);
    }
  }
}

TEST_CASE("integer helpers") {
  CHECK(floor_log2(1) == 0);
  CHECK(floor_log2(8) == 3);
  CHECK(floor_log2(9) == 3);
  CHECK(ceil_log2(1) == 0);
  CHECK(ceil_log2(8) == 3);
  CHECK(ceil_log2(9) == 4);
  CHECK(ceil_sqrt(9) == 3);
  CHECK(ceil_sqrt(10) == 4);
  CHECK(ceil_sqrt(0) == 0);
  CHECK(floor_div(-3, 2) == -2);
  CHECK(floor_div(3, 2) == 1);
  Rng a(5);
  Rng b(5);
  for (int x = 0; x < 100; ++x) {
    const Element v = a.uniform(-3, 3);
    CHECK(v == b.uniform(-3, 3));
    CHECK(v >= -3);
    CHECK(v <= 3);
  }
}
