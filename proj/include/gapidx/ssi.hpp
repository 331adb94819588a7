#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gapidx/common.hpp"
#include "gapidx/set_core.hpp"

namespace gapidx {

// Is there a in S_i and b in S_j with a + s = b? Set ids are 0-based.
struct ShiftQuery {
  SetId i = 0;
  SetId j = 0;
  Element s = 0;
};

// Witness (a, b) with a in S_i, b in S_j and a + s = b.
struct ShiftCertificate {
  Element a = 0;
  Element b = 0;

  friend auto operator<=>(const ShiftCertificate&, const ShiftCertificate&) = default;
};

enum class BackendKind { kLinearScan, kFullTabulation, kSmallUniverse };

std::string to_string(BackendKind kind);
// Accepts "linear", "full", "small" and the long names printed by to_string.
BackendKind parse_backend_kind(std::string_view name);

struct BackendConfig {
  BackendKind kind = BackendKind::kLinearScan;
  // Only read by kSmallUniverse: sets with more than ceil(N^delta) elements
  // are large.
  double delta = 0.5;
  std::uint64_t seed = 0x5eed;
  std::uint64_t mem_budget_bytes = std::uint64_t{1} << 31;
};

// Per-query instrumentation. Callers own it, so queries stay const and
// concurrent queries never share counters.
struct QueryStats {
  std::uint64_t exists_calls = 0;
  // Dictionary membership probes.
  std::uint64_t probes = 0;
  std::uint64_t table_lookups = 0;

  QueryStats& operator+=(const QueryStats& o) {
    exists_calls += o.exists_calls;
    probes += o.probes;
    table_lookups += o.table_lookups;
    return *this;
  }
};

// Certificate-returning existence structure over a fixed collection.
// Every backend returns the certificate with the smallest a.
class SsiBackend {
 public:
  explicit SsiBackend(std::shared_ptr<const SetCollection> sets) : sets_(std::move(sets)) {}
  virtual ~SsiBackend() = default;

  virtual BackendKind kind() const = 0;
  virtual std::optional<ShiftCertificate> exists(const ShiftQuery& q,
                                                 QueryStats* stats = nullptr) const = 0;
  // Accounted size of the query structures (dictionaries and tables).
  virtual std::size_t memory_bytes() const = 0;
  // Stored (set pair, shift) certificates.
  virtual std::size_t table_entries() const { return 0; }

  const SetCollection& sets() const { return *sets_; }
  std::shared_ptr<const SetCollection> shared_sets() const { return sets_; }

 protected:
  std::shared_ptr<const SetCollection> sets_;
};

// Throws GuardError when a tabulating backend would exceed
// config.mem_budget_bytes.
std::unique_ptr<SsiBackend> build_backend(std::shared_ptr<const SetCollection> sets,
                                          const BackendConfig& config);

// ceil(N^delta), computed without floating point drift at exact powers.
std::size_t small_universe_threshold(std::size_t total, double delta);

// Worst-case table entries a tabulating build would store: the sum over
// tabulated set pairs of min(|S_i| |S_j|, number of possible shifts).
std::uint64_t estimated_table_entries(const SetCollection& sets, const BackendConfig& config);

// Every (a, b) in S_i x S_j with a + s = b, sorted by a.
std::vector<ShiftCertificate> brute_force_ssi(const SetCollection& sets, const ShiftQuery& q);

// 3SUM Indexing as Shifted Set Intersection. S_1 holds A shifted into
// [1, u] and S_2 holds A reflected; a query c becomes (S_2, S_1, c - lo - hi).
class ThreeSumAsSsi {
 public:
  explicit ThreeSumAsSsi(std::span<const Element> values);

  const SetCollection& collection() const { return *sets_; }
  std::shared_ptr<const SetCollection> shared_collection() const { return sets_; }

  ShiftQuery map_query(Element c) const;
  // Returns (x, y) with x + y = c: x from the shifted copy, y from the
  // reflected copy.
  std::pair<Element, Element> decode(const ShiftCertificate& cert) const;

 private:
  std::shared_ptr<const SetCollection> sets_;
  Element lo_ = 0;
  Element hi_ = 0;
};

ThreeSumAsSsi reduce_3sum_to_ssi(std::span<const Element> values);

// Two-set 3SUM Indexing: is there (a, b) in A x B with a + b = c?
struct ThreeSumInstance {
  std::vector<Element> a;
  std::vector<Element> b;
  Element universe = 0;
};

struct DecodedElement {
  SetId set = 0;
  Element value = 0;

  friend bool operator==(const DecodedElement&, const DecodedElement&) = default;
};

// Encodes a Shifted Set Intersection instance over k sets and universe u:
//   A = { e + j (k+1) 2u : e in S_j },  B = { -e + i 2u : e in S_i }
// with 1-based set numbers i, j, and query (i, j, s) -> s + (j (k+1) + i) 2u.
class SsiToThreeSumMap {
 public:
  SsiToThreeSumMap(std::size_t k, Element u);

  std::size_t k() const { return k_; }
  Element u() const { return u_; }

  Element encode_a(SetId j, Element e) const;
  Element encode_b(SetId i, Element e) const;
  Element encode_query(const ShiftQuery& q) const;
  DecodedElement decode_a(Element a) const;
  DecodedElement decode_b(Element b) const;

  // Maps a 3SUM witness back to a certificate for the source query;
  // nullopt when the witness belongs to a different (i, j) pair.
  std::optional<ShiftCertificate> decode(const ShiftQuery& q, Element a, Element b) const;

 private:
  std::size_t k_;
  Element u_;
};

// Throws GuardError when k (k+2) 2u does not fit in 63 bits.
std::pair<ThreeSumInstance, SsiToThreeSumMap> reduce_ssi_to_3sum(const SetCollection& sets);

// One-set formulation of a two-set instance: A' = A u { b + 2u' : b in B }.
// A query c on (A, B) is the query c + 2u' on A'.
struct MergedThreeSum {
  std::vector<Element> elements;
  Element universe = 0;

  Element map_query(Element c) const { return c + 2 * universe; }
  bool from_b(Element x) const { return x > 2 * universe; }
  Element original(Element x) const { return from_b(x) ? x - 2 * universe : x; }
};

// Requires every element of A and B in [1, u'].
MergedThreeSum merge_two_set_3sum(std::span<const Element> a, std::span<const Element> b,
                                  Element universe);

// One-set 3SUM Indexing answered through a Shifted Set Intersection backend.
class ThreeSumIndex {
 public:
  ThreeSumIndex(std::span<const Element> values, const BackendConfig& config);

  // Some (x, y) from the input with x + y = c.
  std::optional<std::pair<Element, Element>> find(Element c, QueryStats* stats = nullptr) const;

 private:
  ThreeSumAsSsi reduction_;
  std::unique_ptr<SsiBackend> backend_;
};

}  // namespace gapidx
