#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

#include "gapidx/set_core.hpp"
#include "gapidx/ssi.hpp"

namespace gapidx {

// Random sets: `count` sets of `size` distinct values each, per group.
struct SetGroup {
  std::size_t count = 0;
  std::size_t size = 0;
};

SetCollection random_collection(const std::vector<SetGroup>& groups, Element universe, Rng& rng);

// Half the shifts are realized by some pair, half are uniform in [-u, u].
std::vector<ShiftQuery> random_shift_queries(const SetCollection& sets, std::size_t count,
                                             Rng& rng);

std::string random_text(std::size_t n, std::size_t sigma, Rng& rng);

struct SsiBenchCase {
  std::vector<SetGroup> groups;
  Element universe = 8192;
  std::vector<double> deltas{0.0, 0.5, 1.0};
  BackendKind backend = BackendKind::kSmallUniverse;
  std::size_t queries = 500;
  std::uint64_t mem_budget_bytes = std::uint64_t{1} << 31;
};

// N = 10^4: four sets of 2400 and four of 100 over u = 8192.
SsiBenchCase default_ssi_tradeoff_case();

struct GappedStringBenchCase {
  std::vector<std::size_t> lengths{1000, 10000};
  std::size_t sigma = 4;
  std::size_t pattern_length = 3;
  Element max_gap = 64;
  BackendKind backend = BackendKind::kLinearScan;
  double delta = 0.5;
  std::size_t queries = 50;
  std::uint64_t mem_budget_bytes = std::uint64_t{1} << 31;
};

struct BenchRecord {
  std::string kind;
  std::string backend;
  double delta = 0;
  std::uint64_t n = 0;  // N for set instances, text length for strings
  Element universe = 0;
  std::uint64_t k = 0;
  std::string status = "ok";
  std::string message;
  std::uint64_t build_bytes = 0;
  std::uint64_t table_entries = 0;
  std::uint64_t elements = 0;
  double build_ms = 0;
  std::uint64_t queries = 0;
  double query_us = 0;
  double probes_per_query = 0;
  double table_lookups_per_query = 0;
  double exists_calls_per_query = 0;
  double plan_queries_per_query = 0;
  double occ_per_query = 0;
  // Raw pairs produced per reported pair.
  double dedup_factor = 0;

  nlohmann::json to_json() const;
};

using RecordSink = std::function<void(const BenchRecord&)>;

void bench_ssi(const SsiBenchCase& c, std::uint64_t seed, const RecordSink& sink);
void bench_gapped_string(const GappedStringBenchCase& c, std::uint64_t seed,
                         const RecordSink& sink);

// Runs every entry of spec["cases"]; an empty or missing list emits
// nothing. Throws FormatError on a malformed spec.
void run_bench(const nlohmann::json& spec, std::uint64_t seed, const RecordSink& sink);

}  // namespace gapidx
