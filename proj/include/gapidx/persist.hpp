#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gapidx/gapped.hpp"
#include "gapidx/jumbled.hpp"
#include "gapidx/reporting.hpp"
#include "gapidx/set_core.hpp"
#include "gapidx/smallest_shift.hpp"
#include "gapidx/ssi.hpp"
#include "gapidx/text_index.hpp"

namespace gapidx {

enum class ArtifactKind { kSsi, kGappedSet, kGappedString, kJumbled, kSmallestShift };

std::string to_string(ArtifactKind kind);
// "ssi", "gapped-set", "gapped-string", "jumbled", "smallest-shift".
ArtifactKind parse_artifact_kind(std::string_view name);

inline constexpr std::uint32_t kFormatVersion = 1;
inline constexpr std::string_view kMagic{"GAPIDX\0\0", 8};

struct IndexManifest {
  std::uint32_t version = kFormatVersion;
  ArtifactKind kind = ArtifactKind::kSsi;
  BackendConfig config;
  bool count_queries = false;
  // FNV-1a of the canonical source bytes.
  std::uint64_t source_digest = 0;
  // Element and space accounting, in a fixed order per kind.
  std::vector<std::pair<std::string, std::uint64_t>> counters;

  std::uint64_t counter(std::string_view name) const;
};

std::size_t gapped_backend_bytes(const GappedIndex& index);

// A built index of one kind together with its manifest. The container
// stores sources (sets, text, suffix array, set tables); derived
// structures are rebuilt on load from the stored configuration.
class Artifact {
 public:
  // kSsi, kGappedSet or kSmallestShift.
  static Artifact from_sets(ArtifactKind kind, SetCollection sets, const BackendConfig& config,
                            bool count_queries = false);
  static Artifact from_text(std::string text, const BackendConfig& config,
                            bool count_queries = false);
  static Artifact from_jumbled(std::string text, Alphabet alphabet, const BackendConfig& config,
                               bool count_queries = false);

  const IndexManifest& manifest() const { return manifest_; }
  ArtifactKind kind() const { return manifest_.kind; }

  // Null unless the artifact has that kind.
  const SetCollection* collection() const { return sets_.get(); }
  const AugmentedInstance* ssi() const { return ssi_.get(); }
  const GappedIndex* gapped_sets() const { return gapped_.get(); }
  const GappedStringIndex* text_index() const { return text_.get(); }
  const JumbledIndex* jumbled() const { return jumbled_.get(); }
  const SmallestShiftIndex* smallest_shift() const { return shift_.get(); }

  std::string serialize() const;
  // Throws FormatError on bad magic, unknown version, truncation or a
  // digest mismatch.
  static Artifact deserialize(std::string_view bytes);

  void save(const std::string& path) const;
  static Artifact load(const std::string& path);

 private:
  Artifact() = default;
  void build_sets(SetCollection sets);
  void compute_counters();

  IndexManifest manifest_;
  std::shared_ptr<const SetCollection> sets_;
  std::unique_ptr<AugmentedInstance> ssi_;
  std::unique_ptr<GappedIndex> gapped_;
  std::unique_ptr<GappedStringIndex> text_;
  std::unique_ptr<JumbledIndex> jumbled_;
  std::unique_ptr<SmallestShiftIndex> shift_;
};

}  // namespace gapidx
