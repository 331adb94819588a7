#include "doctest.h"
#include "gapidx/persist.hpp"
#include "oracles.hpp"

using namespace gapidx;

namespace {

SetCollection sample_sets() { return ingest_collection({{1, 4, 9, 12}, {2, 5, 13}, {7}}, 16); }

void check_round_trip(const Artifact& a) {
  const std::string bytes = a.serialize();
  const Artifact b = Artifact::deserialize(bytes);
  CHECK(b.serialize() == bytes);
  CHECK(b.manifest().counters == a.manifest().counters);
  CHECK(b.manifest().source_digest == a.manifest().source_digest);
  CHECK(b.kind() == a.kind());
}

}  // namespace

TEST_CASE("artifact kinds") {
  for (auto k : {ArtifactKind::kSsi, ArtifactKind::kGappedSet, ArtifactKind::kGappedString,
                 ArtifactKind::kJumbled, ArtifactKind::kSmallestShift}) {
    CHECK(parse_artifact_kind(to_string(k)) == k);
  }
  CHECK_THROWS_AS(parse_artifact_kind("tree"), std::invalid_argument);
}

TEST_CASE("every kind round-trips bit for bit") {
  BackendConfig config{BackendKind::kSmallUniverse, 0.25, 99};
  check_round_trip(Artifact::from_sets(ArtifactKind::kSsi, sample_sets(), config, true));
  check_round_trip(Artifact::from_sets(ArtifactKind::kGappedSet, sample_sets(), config));
  check_round_trip(Artifact::from_sets(ArtifactKind::kSmallestShift, sample_sets(), config));
  check_round_trip(Artifact::from_text("mississippi", config));
  check_round_trip(Artifact::from_jumbled("acaacabd", Alphabet("abcd"), config));
}

TEST_CASE("loaded structures answer like fresh ones") {
  const BackendConfig config{};
  auto fresh = Artifact::from_text("abracadabra", config);
  auto loaded = Artifact::deserialize(fresh.serialize());
  for (Element beta = 0; beta <= 11; ++beta) {
    CHECK(fresh.text_index()->report("a", "a", 0, beta) ==
          loaded.text_index()->report("a", "a", 0, beta));
  }
  auto sets = Artifact::from_sets(ArtifactKind::kSsi, sample_sets(), config);
  auto again = Artifact::deserialize(sets.serialize());
  for (Element s = -16; s <= 16; ++s) {
    CHECK(sets.ssi()->report({0, 1, s}) == again.ssi()->report({0, 1, s}));
  }
}

TEST_CASE("manifest counters") {
  auto a = Artifact::from_text("banana", BackendConfig{});
  CHECK(a.manifest().counter("n") == 6);
  CHECK(a.manifest().counter("set_elements") == 16);
  CHECK(a.manifest().counter("set_elements") <= a.manifest().counter("set_element_bound"));
  CHECK_THROWS_AS(a.manifest().counter("missing"), std::out_of_range);
  auto s = Artifact::from_sets(ArtifactKind::kSmallestShift, sample_sets(), BackendConfig{});
  CHECK(s.manifest().counter("build_comparisons") <= s.manifest().counter("comparison_bound"));
}

TEST_CASE("corruption is detected") {
  const std::string bytes = Artifact::from_text("banana", BackendConfig{}).serialize();
  for (std::size_t at = 0; at < bytes.size(); at += 7) {
    std::string bad = bytes;
    bad[at] = static_cast<char>(bad[at] ^ 0x20);
    CHECK_THROWS_AS(Artifact::deserialize(bad), FormatError);
  }
  CHECK_THROWS_AS(Artifact::deserialize(bytes.substr(0, bytes.size() - 3)), FormatError);
  CHECK_THROWS_AS(Artifact::deserialize("GAPIDX"), FormatError);
  try {
    std::string bad = bytes;
    bad[bytes.size() / 2] = static_cast<char>(bad[bytes.size() / 2] ^ 1);
    Artifact::deserialize(bad);
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).find("digest mismatch") != std::string::npos);
  }
}
