#include "gapidx/persist.hpp"

#include <array>
#include <bit>
#include <fstream>
#include <iterator>
#include <sstream>
#include <stdexcept>

namespace gapidx {

namespace {

constexpr std::array<std::string_view, 5> kKindNames{"ssi", "gapped-set", "gapped-string",
                                                     "jumbled", "smallest-shift"};

class ByteWriter {
 public:
  void u8(std::uint8_t v) { out_.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t v) {
    for (int b = 0; b < 4; ++b) u8(static_cast<std::uint8_t>(v >> (8 * b)));
  }
  void u64(std::uint64_t v) {
    for (int b = 0; b < 8; ++b) u8(static_cast<std::uint8_t>(v >> (8 * b)));
  }
  void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void bytes(std::string_view s) {
    u64(s.size());
    out_.append(s);
  }
  void raw(std::string_view s) { out_.append(s); }

  std::string& str() { return out_; }

 private:
  std::string out_;
};

class ByteReader {
 public:
  explicit ByteReader(std::string_view in) : in_(in) {}

  std::uint8_t u8() {
    need(1);
    return static_cast<std::uint8_t>(in_[pos_++]);
  }
  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (int b = 0; b < 4; ++b) v |= static_cast<std::uint32_t>(u8()) << (8 * b);
    return v;
  }
  std::uint64_t u64() {
    std::uint64_t v = 0;
    for (int b = 0; b < 8; ++b) v |= static_cast<std::uint64_t>(u8()) << (8 * b);
    return v;
  }
  std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string bytes() {
    const std::uint64_t n = u64();
    need(n);
    std::string s(in_.substr(pos_, n));
    pos_ += n;
    return s;
  }
  // Element count prefix, checked against the bytes left.
  std::size_t count(std::size_t width) {
    const std::uint64_t n = u64();
    if (width != 0 && n > (in_.size() - pos_) / width) throw FormatError("truncated index file");
    return n;
  }
  bool done() const { return pos_ == in_.size(); }

 private:
  void need(std::uint64_t n) const {
    if (n > in_.size() - pos_) throw FormatError("truncated index file");
  }

  std::string_view in_;
  std::size_t pos_ = 0;
};

std::string collection_text(const SetCollection& sets) {
  std::ostringstream out;
  write_collection(out, sets);
  return out.str();
}

std::uint64_t text_digest(const std::string& text) { return fnv1a(text); }

std::uint64_t jumbled_digest(const std::string& text, const Alphabet& alphabet) {
  return fnv1a(alphabet.letters(), fnv1a(text));
}

}  // namespace

std::string to_string(ArtifactKind kind) {
  return std::string(kKindNames.at(static_cast<std::size_t>(kind)));
}

ArtifactKind parse_artifact_kind(std::string_view name) {
  for (std::size_t x = 0; x < kKindNames.size(); ++x) {
    if (kKindNames[x] == name) return static_cast<ArtifactKind>(x);
  }
  throw std::invalid_argument("unknown index kind '" + std::string(name) + "'");
}

std::uint64_t IndexManifest::counter(std::string_view name) const {
  for (const auto& [key, value] : counters) {
    if (key == name) return value;
  }
  throw std::out_of_range("no counter '" + std::string(name) + "'");
}

std::size_t gapped_backend_bytes(const GappedIndex& index) {
  std::size_t bytes = index.exact().backend().memory_bytes();
  for (unsigned l = 1; l <= index.level_count(); ++l) {
    bytes += index.level(l).index().backend().memory_bytes();
  }
  return bytes;
}

void Artifact::build_sets(SetCollection sets) {
  sets_ = std::make_shared<const SetCollection>(std::move(sets));
  switch (manifest_.kind) {
    case ArtifactKind::kSsi:
      ssi_ = std::make_unique<AugmentedInstance>(*sets_, manifest_.config);
      break;
    case ArtifactKind::kGappedSet:
      gapped_ = std::make_unique<GappedIndex>(*sets_, manifest_.config);
      break;
    case ArtifactKind::kSmallestShift:
      shift_ = std::make_unique<SmallestShiftIndex>(sets_);
      break;
    default:
      throw std::invalid_argument(to_string(manifest_.kind) + " is not built from sets");
  }
  manifest_.source_digest = fnv1a(collection_text(*sets_));
}

Artifact Artifact::from_sets(ArtifactKind kind, SetCollection sets, const BackendConfig& config,
                             bool count_queries) {
  Artifact a;
  a.manifest_.kind = kind;
  a.manifest_.config = config;
  a.manifest_.count_queries = count_queries;
  a.build_sets(std::move(sets));
  a.compute_counters();
  return a;
}

Artifact Artifact::from_text(std::string text, const BackendConfig& config, bool count_queries) {
  Artifact a;
  a.manifest_.kind = ArtifactKind::kGappedString;
  a.manifest_.config = config;
  a.manifest_.count_queries = count_queries;
  a.manifest_.source_digest = text_digest(text);
  a.text_ = std::make_unique<GappedStringIndex>(std::move(text), config);
  a.compute_counters();
  return a;
}

Artifact Artifact::from_jumbled(std::string text, Alphabet alphabet, const BackendConfig& config,
                                bool count_queries) {
  Artifact a;
  a.manifest_.kind = ArtifactKind::kJumbled;
  a.manifest_.config = config;
  a.manifest_.count_queries = count_queries;
  a.manifest_.source_digest = jumbled_digest(text, alphabet);
  a.jumbled_ = std::make_unique<JumbledIndex>(std::move(text), std::move(alphabet), config);
  a.compute_counters();
  return a;
}

void Artifact::compute_counters() {
  auto& c = manifest_.counters;
  c.clear();
  auto add = [&c](std::string name, std::uint64_t v) { c.emplace_back(std::move(name), v); };
  switch (manifest_.kind) {
    case ArtifactKind::kSsi:
      add("k", sets_->size());
      add("N", sets_->total_size());
      add("u", static_cast<std::uint64_t>(sets_->universe()));
      add("augmented_elements", ssi_->total_elements());
      add("augmented_bound", ssi_->element_bound());
      add("backend_bytes", ssi_->backend().memory_bytes());
      add("table_entries", ssi_->backend().table_entries());
      break;
    case ArtifactKind::kGappedSet:
      add("k", sets_->size());
      add("N", sets_->total_size());
      add("u", static_cast<std::uint64_t>(sets_->universe()));
      add("levels", gapped_->level_count());
      add("gapped_elements", gapped_->total_elements());
      add("gapped_bound", gapped_->element_bound());
      add("backend_bytes", gapped_backend_bytes(*gapped_));
      break;
    case ArtifactKind::kGappedString:
      add("n", text_->text().size());
      add("sets", text_->sets().size());
      add("set_elements", text_->set_elements());
      add("set_element_bound", text_->set_element_bound());
      add("gapped_elements", text_->gapped().total_elements());
      add("backend_bytes", gapped_backend_bytes(text_->gapped()));
      break;
    case ArtifactKind::kJumbled:
      add("n", jumbled_->text().size());
      add("sigma", jumbled_->alphabet().size());
      add("merged_universe", static_cast<std::uint64_t>(jumbled_->merged_universe()));
      add("augmented_elements", jumbled_->reporter().index().total_elements());
      add("backend_bytes", jumbled_->reporter().index().backend().memory_bytes());
      break;
    case ArtifactKind::kSmallestShift: {
      add("k", sets_->size());
      add("N", sets_->total_size());
      add("threshold", shift_->threshold());
      add("large_sets", shift_->large_sets().size());
      add("build_comparisons", shift_->build_comparisons());
      add("comparison_bound", kShiftBuildFactor * sets_->total_size() * shift_->threshold());
      add("table_bytes", shift_->memory_bytes());
      break;
    }
  }
}

std::string Artifact::serialize() const {
  ByteWriter w;
  w.raw(kMagic);
  w.u32(manifest_.version);
  w.u8(static_cast<std::uint8_t>(manifest_.kind));
  w.u8(static_cast<std::uint8_t>(manifest_.config.kind));
  w.f64(manifest_.config.delta);
  w.u64(manifest_.config.seed);
  w.u64(manifest_.config.mem_budget_bytes);
  w.u8(manifest_.count_queries ? 1 : 0);
  w.u64(manifest_.source_digest);
  w.u64(manifest_.counters.size());
  for (const auto& [name, value] : manifest_.counters) {
    w.bytes(name);
    w.u64(value);
  }
  switch (manifest_.kind) {
    case ArtifactKind::kSsi:
    case ArtifactKind::kGappedSet:
    case ArtifactKind::kSmallestShift:
      w.i64(sets_->universe());
      w.u64(sets_->size());
      for (const auto& s : *sets_) {
        w.u64(s.size());
        for (Element e : s.elements()) w.i64(e);
      }
      break;
    case ArtifactKind::kGappedString: {
      w.bytes(text_->text());
      const auto sa = text_->suffix_array().positions();
      w.u64(sa.size());
      for (std::uint32_t p : sa) w.u32(p);
      w.u64(text_->sets().size());
      for (const auto& s : text_->sets()) {
        w.u64(s.size());
        for (Element e : s.elements()) w.u32(static_cast<std::uint32_t>(e));
      }
      break;
    }
    case ArtifactKind::kJumbled:
      w.bytes(jumbled_->text());
      w.bytes(jumbled_->alphabet().letters());
      break;
  }
  w.u64(fnv1a(w.str()));
  return std::move(w.str());
}

Artifact Artifact::deserialize(std::string_view bytes) {
  if (bytes.size() < kMagic.size() + 8 || bytes.substr(0, kMagic.size()) != kMagic) {
    throw FormatError("not an index file (bad magic)");
  }
  const std::string_view body = bytes.substr(0, bytes.size() - 8);
  ByteReader tail(bytes.substr(bytes.size() - 8));
  if (tail.u64() != fnv1a(body)) throw FormatError("digest mismatch: index file is corrupt");

  ByteReader r(body.substr(kMagic.size()));
  Artifact a;
  IndexManifest& m = a.manifest_;
  m.version = r.u32();
  if (m.version != kFormatVersion) {
    throw FormatError("unsupported index format version " + std::to_string(m.version));
  }
  const std::uint8_t kind = r.u8();
  if (kind >= kKindNames.size()) throw FormatError("unknown index kind code");
  m.kind = static_cast<ArtifactKind>(kind);
  const std::uint8_t backend = r.u8();
  if (backend > static_cast<std::uint8_t>(BackendKind::kSmallUniverse)) {
    throw FormatError("unknown backend code");
  }
  m.config.kind = static_cast<BackendKind>(backend);
  m.config.delta = r.f64();
  m.config.seed = r.u64();
  m.config.mem_budget_bytes = r.u64();
  m.count_queries = r.u8() != 0;
  const std::uint64_t digest = r.u64();
  std::vector<std::pair<std::string, std::uint64_t>> stored;
  const std::size_t counters = r.count(16);
  for (std::size_t x = 0; x < counters; ++x) {
    std::string name = r.bytes();
    stored.emplace_back(std::move(name), r.u64());
  }

  switch (m.kind) {
    case ArtifactKind::kSsi:
    case ArtifactKind::kGappedSet:
    case ArtifactKind::kSmallestShift: {
      const Element universe = r.i64();
      const std::size_t k = r.count(8);
      std::vector<std::vector<Element>> raw(k);
      for (auto& s : raw) {
        s.resize(r.count(8));
        for (Element& e : s) e = r.i64();
      }
      a.build_sets(ingest_collection(raw, universe));
      break;
    }
    case ArtifactKind::kGappedString: {
      std::string text = r.bytes();
      std::vector<std::uint32_t> sa(r.count(4));
      for (auto& p : sa) p = r.u32();
      std::vector<std::vector<Element>> tables(r.count(8));
      for (auto& s : tables) {
        s.resize(r.count(4));
        for (Element& e : s) e = r.u32();
      }
      m.source_digest = text_digest(text);
      SuffixArray suffixes(text, std::move(sa));
      a.text_ = std::make_unique<GappedStringIndex>(std::move(text), std::move(suffixes), m.config);
      const auto& sets = a.text_->sets();
      bool same = tables.size() == sets.size();
      for (std::size_t x = 0; same && x < tables.size(); ++x) {
        const auto e = sets[static_cast<SetId>(x)].elements();
        same = std::equal(e.begin(), e.end(), tables[x].begin(), tables[x].end());
      }
      if (!same) throw FormatError("stored set tables disagree with the suffix array");
      break;
    }
    case ArtifactKind::kJumbled: {
      std::string text = r.bytes();
      Alphabet alphabet(r.bytes());
      m.source_digest = jumbled_digest(text, alphabet);
      a.jumbled_ = std::make_unique<JumbledIndex>(std::move(text), std::move(alphabet), m.config);
      break;
    }
  }
  if (!r.done()) throw FormatError("trailing bytes after index payload");
  if (m.source_digest != digest) throw FormatError("digest mismatch: source does not match");
  a.compute_counters();
  if (m.counters != stored) throw FormatError("stored accounting counters do not match rebuild");
  return a;
}

void Artifact::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  const std::string bytes = serialize();
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("failed writing " + path);
}

Artifact Artifact::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return deserialize(bytes);
}

}  // namespace gapidx
