#include "gapidx/ssi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

namespace gapidx {

std::string to_string(BackendKind kind) {
  switch (kind) {
    case BackendKind::kLinearScan:
      return "linear-scan";
    case BackendKind::kFullTabulation:
      return "full-tabulation";
    case BackendKind::kSmallUniverse:
      return "small-universe";
  }
  return "unknown";
}

BackendKind parse_backend_kind(std::string_view name) {
  if (name == "linear" || name == "linear-scan") return BackendKind::kLinearScan;
  if (name == "full" || name == "full-tabulation") return BackendKind::kFullTabulation;
  if (name == "small" || name == "small-universe") return BackendKind::kSmallUniverse;
  throw FormatError("unknown backend '" + std::string(name) + "'");
}

std::size_t small_universe_threshold(std::size_t total, double delta) {
  if (delta < 0.0 || delta > 1.0) throw std::invalid_argument("delta must lie in [0, 1]");
  if (total <= 1) return 1;
  const double p = std::pow(static_cast<double>(total), delta);
  auto t = static_cast<std::size_t>(std::ceil(p - 1e-9 * p));
  return std::max<std::size_t>(t, 1);
}

namespace {

constexpr std::size_t kNodeOverhead = 2 * sizeof(void*);

struct MemberKey {
  SetId set;
  Element value;
  bool operator==(const MemberKey&) const = default;
};

struct TableKey {
  std::uint64_t pair;
  Element shift;
  bool operator==(const TableKey&) const = default;
};

struct SeededHash {
  std::uint64_t seed;
  std::size_t operator()(const MemberKey& k) const {
    return mix64(seed ^ mix64(static_cast<std::uint64_t>(k.value)) ^ (std::uint64_t{k.set} << 1));
  }
  std::size_t operator()(const TableKey& k) const {
    return mix64(seed ^ mix64(static_cast<std::uint64_t>(k.shift)) ^ (k.pair * 0x9e3779b97f4a7c15ULL));
  }
};

template <typename Container>
std::size_t hashed_bytes(const Container& c) {
  return c.size() * (sizeof(typename Container::value_type) + kNodeOverhead) +
         c.bucket_count() * sizeof(void*);
}

// Per-set dictionaries, stored as one hash set keyed by (set, value).
class MembershipIndex {
 public:
  MembershipIndex(const SetCollection& sets, std::uint64_t seed) : members_(0, SeededHash{seed}) {
    members_.reserve(sets.total_size());
    for (const auto& s : sets) {
      for (Element v : s.elements()) members_.insert({s.id(), v});
    }
  }

  bool contains(SetId set, Element v) const { return members_.count({set, v}) != 0; }
  std::size_t bytes() const { return hashed_bytes(members_); }

 private:
  std::unordered_set<MemberKey, SeededHash> members_;
};

// Probes each element of the smaller set against the other's dictionary in
// ascending order, so the first hit carries the smallest a.
std::optional<ShiftCertificate> probe_smaller(const SetCollection& sets,
                                              const MembershipIndex& dict, const ShiftQuery& q,
                                              QueryStats* stats) {
  const IntSet& si = sets[q.i];
  const IntSet& sj = sets[q.j];
  std::uint64_t probes = 0;
  std::optional<ShiftCertificate> found;
  if (si.size() <= sj.size()) {
    for (Element a : si.elements()) {
      ++probes;
      if (dict.contains(q.j, a + q.s)) {
        found = ShiftCertificate{a, a + q.s};
        break;
      }
    }
  } else {
    for (Element b : sj.elements()) {
      ++probes;
      if (dict.contains(q.i, b - q.s)) {
        found = ShiftCertificate{b - q.s, b};
        break;
      }
    }
  }
  if (stats) stats->probes += probes;
  return found;
}

// (shift, smallest a) for every shift realized between a and b.
std::vector<std::pair<Element, Element>> min_a_per_shift(std::span<const Element> a,
                                                         std::span<const Element> b) {
  std::vector<std::pair<Element, Element>> out;
  const Element lo = b.front() - a.back();
  const Element hi = b.back() - a.front();
  const auto range = static_cast<std::uint64_t>(hi - lo) + 1;
  const std::uint64_t products = std::uint64_t{a.size()} * b.size();
  if (range <= 2 * products && range <= (std::uint64_t{1} << 28)) {
    constexpr Element kNone = std::numeric_limits<Element>::min();
    std::vector<Element> best(range, kNone);
    for (Element x : a) {
      for (Element y : b) {
        Element& slot = best[static_cast<std::size_t>(y - x - lo)];
        if (slot == kNone) slot = x;
      }
    }
    for (std::size_t d = 0; d < best.size(); ++d) {
      if (best[d] != kNone) out.emplace_back(lo + static_cast<Element>(d), best[d]);
    }
    return out;
  }
  out.reserve(products);
  for (Element x : a) {
    for (Element y : b) out.emplace_back(y - x, x);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [](const auto& p, const auto& q) { return p.first == q.first; }),
            out.end());
  return out;
}

// Dictionary from (set pair, shift) to the smallest witness a. Open
// addressing with linear probing; the load factor stays at or below 1/2.
class ShiftTable {
 public:
  explicit ShiftTable(std::uint64_t seed) : hash_{seed} {}

  void add_pair(std::uint64_t pair, std::span<const Element> a, std::span<const Element> b) {
    for (const auto& [shift, x] : min_a_per_shift(a, b)) insert(pair, shift, x);
  }

  std::optional<Element> find(std::uint64_t pair, Element shift) const {
    if (slots_.empty()) return std::nullopt;
    for (std::size_t h = slot_of(pair, shift);; h = (h + 1) & mask_) {
      const Slot& s = slots_[h];
      if (s.pair == kEmpty) return std::nullopt;
      if (s.pair == pair && s.shift == shift) return s.a;
    }
  }

  std::size_t size() const { return size_; }
  std::size_t bytes() const { return slots_.size() * sizeof(Slot); }

 private:
  static constexpr std::uint64_t kEmpty = std::numeric_limits<std::uint64_t>::max();

  struct Slot {
    std::uint64_t pair = kEmpty;
    Element shift = 0;
    Element a = 0;
  };

  std::size_t slot_of(std::uint64_t pair, Element shift) const {
    return hash_(TableKey{pair, shift}) & mask_;
  }

  // Keeps the first value stored for a key.
  void insert(std::uint64_t pair, Element shift, Element a) {
    if (2 * (size_ + 1) > slots_.size()) grow();
    for (std::size_t h = slot_of(pair, shift);; h = (h + 1) & mask_) {
      Slot& s = slots_[h];
      if (s.pair == kEmpty) {
        s = {pair, shift, a};
        ++size_;
        return;
      }
      if (s.pair == pair && s.shift == shift) return;
    }
  }

  void grow() {
    std::vector<Slot> old = std::move(slots_);
    slots_.assign(std::max<std::size_t>(16, 2 * old.size()), Slot{});
    mask_ = slots_.size() - 1;
    for (const Slot& s : old) {
      if (s.pair == kEmpty) continue;
      std::size_t h = slot_of(s.pair, s.shift);
      while (slots_[h].pair != kEmpty) h = (h + 1) & mask_;
      slots_[h] = s;
    }
  }

  SeededHash hash_;
  std::vector<Slot> slots_;
  std::size_t mask_ = 0;
  std::size_t size_ = 0;
};

// Worst case: capacity doubles once past load 1/2, so up to four slots per entry.
constexpr std::uint64_t kTableEntryBytes = 4 * (sizeof(TableKey) + sizeof(Element));

std::uint64_t pair_entry_bound(const IntSet& a, const IntSet& b) {
  const auto shifts = static_cast<std::uint64_t>((b.max() - a.min()) - (b.min() - a.max())) + 1;
  return std::min<std::uint64_t>(std::uint64_t{a.size()} * b.size(), shifts);
}

std::vector<SetId> large_sets(const SetCollection& sets, double delta) {
  const std::size_t threshold = small_universe_threshold(sets.total_size(), delta);
  std::vector<SetId> out;
  for (const auto& s : sets) {
    if (s.size() > threshold) out.push_back(s.id());
  }
  return out;
}

void check_budget(const SetCollection& sets, const BackendConfig& config) {
  const std::uint64_t entries = estimated_table_entries(sets, config);
  const std::uint64_t bytes = entries * kTableEntryBytes;
  if (bytes > config.mem_budget_bytes) {
    throw GuardError(to_string(config.kind) + " table needs up to " + std::to_string(bytes) +
                     " bytes, budget is " + std::to_string(config.mem_budget_bytes));
  }
}

class LinearScanBackend final : public SsiBackend {
 public:
  LinearScanBackend(std::shared_ptr<const SetCollection> sets, const BackendConfig& config)
      : SsiBackend(std::move(sets)), dict_(*sets_, config.seed) {}

  BackendKind kind() const override { return BackendKind::kLinearScan; }

  std::optional<ShiftCertificate> exists(const ShiftQuery& q, QueryStats* stats) const override {
    if (stats) ++stats->exists_calls;
    return probe_smaller(*sets_, dict_, q, stats);
  }

  std::size_t memory_bytes() const override { return dict_.bytes(); }

 private:
  MembershipIndex dict_;
};

class FullTabulationBackend final : public SsiBackend {
 public:
  FullTabulationBackend(std::shared_ptr<const SetCollection> sets, const BackendConfig& config)
      : SsiBackend(std::move(sets)), table_(config.seed) {
    check_budget(*sets_, config);
    const std::size_t k = sets_->size();
    for (SetId i = 0; i < k; ++i) {
      for (SetId j = 0; j < k; ++j) {
        table_.add_pair(std::uint64_t{i} * k + j, (*sets_)[i].elements(), (*sets_)[j].elements());
      }
    }
  }

  BackendKind kind() const override { return BackendKind::kFullTabulation; }

  std::optional<ShiftCertificate> exists(const ShiftQuery& q, QueryStats* stats) const override {
    if (stats) {
      ++stats->exists_calls;
      ++stats->table_lookups;
    }
    auto a = table_.find(std::uint64_t{q.i} * sets_->size() + q.j, q.s);
    if (!a) return std::nullopt;
    return ShiftCertificate{*a, *a + q.s};
  }

  std::size_t memory_bytes() const override { return table_.bytes(); }
  std::size_t table_entries() const override { return table_.size(); }

 private:
  ShiftTable table_;
};

class SmallUniverseBackend final : public SsiBackend {
 public:
  SmallUniverseBackend(std::shared_ptr<const SetCollection> sets, const BackendConfig& config)
      : SsiBackend(std::move(sets)), dict_(*sets_, config.seed), table_(config.seed) {
    check_budget(*sets_, config);
    large_ = large_sets(*sets_, config.delta);
    slot_.assign(sets_->size(), kSmall);
    for (std::size_t x = 0; x < large_.size(); ++x) slot_[large_[x]] = static_cast<std::uint32_t>(x);
    const std::size_t l = large_.size();
    for (std::size_t x = 0; x < l; ++x) {
      for (std::size_t y = 0; y < l; ++y) {
        table_.add_pair(x * l + y, (*sets_)[large_[x]].elements(), (*sets_)[large_[y]].elements());
      }
    }
  }

  BackendKind kind() const override { return BackendKind::kSmallUniverse; }

  std::optional<ShiftCertificate> exists(const ShiftQuery& q, QueryStats* stats) const override {
    if (stats) ++stats->exists_calls;
    const std::uint32_t x = slot_[q.i];
    const std::uint32_t y = slot_[q.j];
    if (x != kSmall && y != kSmall) {
      if (stats) ++stats->table_lookups;
      auto a = table_.find(std::uint64_t{x} * large_.size() + y, q.s);
      if (!a) return std::nullopt;
      return ShiftCertificate{*a, *a + q.s};
    }
    return probe_smaller(*sets_, dict_, q, stats);
  }

  std::size_t memory_bytes() const override { return dict_.bytes() + table_.bytes(); }
  std::size_t table_entries() const override { return table_.size(); }

 private:
  static constexpr std::uint32_t kSmall = std::numeric_limits<std::uint32_t>::max();
  MembershipIndex dict_;
  ShiftTable table_;
  std::vector<SetId> large_;
  std::vector<std::uint32_t> slot_;
};

}  // namespace

std::uint64_t estimated_table_entries(const SetCollection& sets, const BackendConfig& config) {
  std::vector<SetId> tabulated;
  switch (config.kind) {
    case BackendKind::kLinearScan:
      return 0;
    case BackendKind::kFullTabulation:
      for (const auto& s : sets) tabulated.push_back(s.id());
      break;
    case BackendKind::kSmallUniverse:
      tabulated = large_sets(sets, config.delta);
      break;
  }
  std::uint64_t total = 0;
  for (SetId x : tabulated) {
    for (SetId y : tabulated) total += pair_entry_bound(sets[x], sets[y]);
  }
  return total;
}

std::unique_ptr<SsiBackend> build_backend(std::shared_ptr<const SetCollection> sets,
                                          const BackendConfig& config) {
  switch (config.kind) {
    case BackendKind::kLinearScan:
      return std::make_unique<LinearScanBackend>(std::move(sets), config);
    case BackendKind::kFullTabulation:
      return std::make_unique<FullTabulationBackend>(std::move(sets), config);
    case BackendKind::kSmallUniverse:
      return std::make_unique<SmallUniverseBackend>(std::move(sets), config);
  }
  throw std::invalid_argument("unknown backend kind");
}

std::vector<ShiftCertificate> brute_force_ssi(const SetCollection& sets, const ShiftQuery& q) {
  std::vector<ShiftCertificate> out;
  for (Element a : sets.at(q.i).elements()) {
    for (Element b : sets.at(q.j).elements()) {
      if (a + q.s == b) out.push_back({a, b});
    }
  }
  return out;
}

// --- 3SUM Indexing -> Shifted Set Intersection -----------------------------

ThreeSumAsSsi::ThreeSumAsSsi(std::span<const Element> values) {
  if (values.empty()) throw std::invalid_argument("3SUM instance must be nonempty");
  std::vector<Element> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  lo_ = v.front();
  hi_ = v.back();
  std::vector<Element> shifted;
  std::vector<Element> reflected;
  shifted.reserve(v.size());
  reflected.reserve(v.size());
  for (Element x : v) shifted.push_back(x - lo_ + 1);
  for (auto it = v.rbegin(); it != v.rend(); ++it) reflected.push_back(hi_ + 1 - *it);
  const Element universe = hi_ - lo_ + 1;
  std::vector<std::vector<Element>> sets;
  sets.push_back(std::move(shifted));
  sets.push_back(std::move(reflected));
  sets_ = std::make_shared<const SetCollection>(std::move(sets), universe);
}

ShiftQuery ThreeSumAsSsi::map_query(Element c) const { return {1, 0, c - lo_ - hi_}; }

std::pair<Element, Element> ThreeSumAsSsi::decode(const ShiftCertificate& cert) const {
  return {cert.b + lo_ - 1, hi_ + 1 - cert.a};
}

ThreeSumAsSsi reduce_3sum_to_ssi(std::span<const Element> values) { return ThreeSumAsSsi(values); }

// --- Shifted Set Intersection -> 3SUM Indexing -----------------------------

SsiToThreeSumMap::SsiToThreeSumMap(std::size_t k, Element u) : k_(k), u_(u) {
  const __int128 span = static_cast<__int128>(k) * (k + 2) * 2 * u + u;
  if (span >= (static_cast<__int128>(1) << 62)) {
    unsigned bits = 0;
    for (__int128 x = span; x > 0; x >>= 1) ++bits;
    throw GuardError("SSI to 3SUM reduction needs " + std::to_string(bits + 1) +
                     "-bit integers; limit is 63");
  }
}

Element SsiToThreeSumMap::encode_a(SetId j, Element e) const {
  return e + static_cast<Element>(j + 1) * static_cast<Element>(k_ + 1) * 2 * u_;
}

Element SsiToThreeSumMap::encode_b(SetId i, Element e) const {
  return -e + static_cast<Element>(i + 1) * 2 * u_;
}

Element SsiToThreeSumMap::encode_query(const ShiftQuery& q) const {
  const auto j = static_cast<Element>(q.j + 1);
  const auto i = static_cast<Element>(q.i + 1);
  return q.s + (j * static_cast<Element>(k_ + 1) + i) * 2 * u_;
}

DecodedElement SsiToThreeSumMap::decode_a(Element a) const {
  const Element block = static_cast<Element>(k_ + 1) * 2 * u_;
  const Element j = floor_div(a - 1, block);
  const Element e = a - j * block;
  if (j < 1 || j > static_cast<Element>(k_) || e < 1 || e > u_) {
    throw std::invalid_argument("value " + std::to_string(a) + " is not an encoded A element");
  }
  return {static_cast<SetId>(j - 1), e};
}

DecodedElement SsiToThreeSumMap::decode_b(Element b) const {
  const Element i = floor_div(b + u_, 2 * u_);
  const Element e = i * 2 * u_ - b;
  if (i < 1 || i > static_cast<Element>(k_) || e < 1 || e > u_) {
    throw std::invalid_argument("value " + std::to_string(b) + " is not an encoded B element");
  }
  return {static_cast<SetId>(i - 1), e};
}

std::optional<ShiftCertificate> SsiToThreeSumMap::decode(const ShiftQuery& q, Element a,
                                                         Element b) const {
  const DecodedElement da = decode_a(a);
  const DecodedElement db = decode_b(b);
  if (da.set != q.j || db.set != q.i || db.value + q.s != da.value) return std::nullopt;
  return ShiftCertificate{db.value, da.value};
}

std::pair<ThreeSumInstance, SsiToThreeSumMap> reduce_ssi_to_3sum(const SetCollection& sets) {
  SsiToThreeSumMap map(sets.size(), sets.universe());
  ThreeSumInstance inst;
  inst.a.reserve(sets.total_size());
  inst.b.reserve(sets.total_size());
  for (const auto& s : sets) {
    for (Element e : s.elements()) {
      inst.a.push_back(map.encode_a(s.id(), e));
      inst.b.push_back(map.encode_b(s.id(), e));
    }
  }
  std::sort(inst.a.begin(), inst.a.end());
  std::sort(inst.b.begin(), inst.b.end());
  inst.universe = std::max(inst.a.back(), inst.b.back());
  return {std::move(inst), map};
}

MergedThreeSum merge_two_set_3sum(std::span<const Element> a, std::span<const Element> b,
                                  Element universe) {
  if (universe < 1 || universe > kMaxInternalUniverse / 4) {
    throw GuardError("merged 3SUM universe " + std::to_string(universe) + " overflows");
  }
  MergedThreeSum out;
  out.universe = universe;
  out.elements.reserve(a.size() + b.size());
  for (Element x : a) {
    if (x < 1 || x > universe) throw std::invalid_argument("A element outside [1, u']");
    out.elements.push_back(x);
  }
  for (Element y : b) {
    if (y < 1 || y > universe) throw std::invalid_argument("B element outside [1, u']");
    out.elements.push_back(y + 2 * universe);
  }
  std::sort(out.elements.begin(), out.elements.end());
  out.elements.erase(std::unique(out.elements.begin(), out.elements.end()), out.elements.end());
  return out;
}

ThreeSumIndex::ThreeSumIndex(std::span<const Element> values, const BackendConfig& config)
    : reduction_(values), backend_(build_backend(reduction_.shared_collection(), config)) {}

std::optional<std::pair<Element, Element>> ThreeSumIndex::find(Element c,
                                                               QueryStats* stats) const {
  auto cert = backend_->exists(reduction_.map_query(c), stats);
  if (!cert) return std::nullopt;
  return reduction_.decode(*cert);
}

}  // namespace gapidx
