#include "gapidx/bench.hpp"

#include <algorithm>
#include <chrono>
#include <unordered_set>

#include "gapidx/gapped.hpp"
#include "gapidx/persist.hpp"
#include "gapidx/text_index.hpp"

namespace gapidx {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

}  // namespace

SetCollection random_collection(const std::vector<SetGroup>& groups, Element universe, Rng& rng) {
  std::vector<std::vector<Element>> raw;
  for (const auto& g : groups) {
    if (g.size == 0 || static_cast<Element>(g.size) > universe) {
      throw std::invalid_argument("set size must lie in [1, u]");
    }
    for (std::size_t x = 0; x < g.count; ++x) {
      std::unordered_set<Element> seen;
      std::vector<Element> s;
      while (s.size() < g.size) {
        const Element v = rng.uniform(1, universe);
        if (seen.insert(v).second) s.push_back(v);
      }
      std::sort(s.begin(), s.end());
      raw.push_back(std::move(s));
    }
  }
  return SetCollection(std::move(raw), universe);
}

std::vector<ShiftQuery> random_shift_queries(const SetCollection& sets, std::size_t count,
                                             Rng& rng) {
  std::vector<ShiftQuery> out;
  out.reserve(count);
  const auto k = static_cast<Element>(sets.size());
  for (std::size_t x = 0; x < count; ++x) {
    ShiftQuery q;
    q.i = static_cast<SetId>(rng.uniform(0, k - 1));
    q.j = static_cast<SetId>(rng.uniform(0, k - 1));
    if (rng.coin()) {
      const auto a = sets[q.i].elements();
      const auto b = sets[q.j].elements();
      q.s = b[static_cast<std::size_t>(rng.uniform(0, static_cast<Element>(b.size()) - 1))] -
            a[static_cast<std::size_t>(rng.uniform(0, static_cast<Element>(a.size()) - 1))];
    } else {
      q.s = rng.uniform(-sets.universe(), sets.universe());
    }
    out.push_back(q);
  }
  return out;
}

std::string random_text(std::size_t n, std::size_t sigma, Rng& rng) {
  if (sigma < 1 || sigma > 26) throw std::invalid_argument("sigma must lie in [1, 26]");
  std::string s(n, 'a');
  for (char& c : s) c = static_cast<char>('a' + rng.uniform(0, static_cast<Element>(sigma) - 1));
  return s;
}

SsiBenchCase default_ssi_tradeoff_case() {
  SsiBenchCase c;
  c.groups = {{4, 2400}, {4, 100}};
  c.universe = 8192;
  return c;
}

nlohmann::json BenchRecord::to_json() const {
  nlohmann::json j{{"kind", kind},
                   {"backend", backend},
                   {"delta", delta},
                   {"n", n},
                   {"u", universe},
                   {"k", k},
                   {"status", status}};
  if (!message.empty()) j["message"] = message;
  if (status != "ok") return j;
  j["build_bytes"] = build_bytes;
  j["table_entries"] = table_entries;
  j["elements"] = elements;
  j["build_ms"] = build_ms;
  j["queries"] = queries;
  j["query_us"] = query_us;
  j["probes_per_query"] = probes_per_query;
  j["table_lookups_per_query"] = table_lookups_per_query;
  j["exists_calls_per_query"] = exists_calls_per_query;
  j["plan_queries_per_query"] = plan_queries_per_query;
  j["occ_per_query"] = occ_per_query;
  j["dedup_factor"] = dedup_factor;
  return j;
}

void bench_ssi(const SsiBenchCase& c, std::uint64_t seed, const RecordSink& sink) {
  Rng rng(seed);
  auto sets = std::make_shared<const SetCollection>(random_collection(c.groups, c.universe, rng));
  const auto queries = random_shift_queries(*sets, c.queries, rng);
  for (double delta : c.deltas) {
    BenchRecord rec;
    rec.kind = "ssi";
    rec.backend = to_string(c.backend);
    rec.delta = delta;
    rec.n = sets->total_size();
    rec.universe = sets->universe();
    rec.k = sets->size();
    BackendConfig config{c.backend, delta, seed, c.mem_budget_bytes};
    std::unique_ptr<SsiBackend> backend;
    const auto start = Clock::now();
    try {
      backend = build_backend(sets, config);
    } catch (const GuardError& e) {
      rec.status = "budget";
      rec.message = e.what();
      sink(rec);
      continue;
    }
    rec.build_ms = ms_since(start);
    rec.build_bytes = backend->memory_bytes();
    rec.table_entries = backend->table_entries();
    rec.elements = sets->total_size();
    QueryStats stats;
    const auto qstart = Clock::now();
    for (const auto& q : queries) backend->exists(q, &stats);
    const double total_ms = ms_since(qstart);
    const double count = std::max<double>(1, static_cast<double>(queries.size()));
    rec.queries = queries.size();
    rec.query_us = total_ms * 1000 / count;
    rec.probes_per_query = static_cast<double>(stats.probes) / count;
    rec.table_lookups_per_query = static_cast<double>(stats.table_lookups) / count;
    rec.exists_calls_per_query = static_cast<double>(stats.exists_calls) / count;
    sink(rec);
  }
}

void bench_gapped_string(const GappedStringBenchCase& c, std::uint64_t seed,
                         const RecordSink& sink) {
  for (std::size_t n : c.lengths) {
    Rng rng(seed ^ mix64(n));
    const std::string text = random_text(n, c.sigma, rng);
    BenchRecord rec;
    rec.kind = "gapped-string";
    rec.backend = to_string(c.backend);
    rec.delta = c.delta;
    rec.n = n;
    rec.universe = static_cast<Element>(n);
    BackendConfig config{c.backend, c.delta, seed, c.mem_budget_bytes};
    std::unique_ptr<GappedStringIndex> index;
    const auto start = Clock::now();
    try {
      index = std::make_unique<GappedStringIndex>(text, config);
    } catch (const GuardError& e) {
      rec.status = "budget";
      rec.message = e.what();
      sink(rec);
      continue;
    }
    rec.build_ms = ms_since(start);
    rec.k = index->sets().size();
    rec.build_bytes = gapped_backend_bytes(index->gapped());
    rec.elements = index->gapped().total_elements();
    const std::size_t m = std::min(c.pattern_length, n);
    StringQueryStats stats;
    std::uint64_t occ = 0;
    const auto qstart = Clock::now();
    for (std::size_t x = 0; x < c.queries; ++x) {
      auto pick = [&] {
        const auto at = rng.uniform(0, static_cast<Element>(n - m));
        return text.substr(static_cast<std::size_t>(at), m);
      };
      const std::string p1 = pick();
      const std::string p2 = pick();
      const Element alpha = rng.uniform(0, c.max_gap);
      const Element beta = rng.uniform(alpha, c.max_gap);
      occ += index->report(p1, p2, alpha, beta, &stats).size();
    }
    const double total_ms = ms_since(qstart);
    const double count = std::max<double>(1, static_cast<double>(c.queries));
    rec.queries = c.queries;
    rec.query_us = total_ms * 1000 / count;
    const auto& base = stats.gapped.report.base;
    rec.probes_per_query = static_cast<double>(base.probes) / count;
    rec.table_lookups_per_query = static_cast<double>(base.table_lookups) / count;
    rec.exists_calls_per_query = static_cast<double>(base.exists_calls) / count;
    rec.plan_queries_per_query = static_cast<double>(stats.gapped.plan_queries) / count;
    rec.occ_per_query = static_cast<double>(occ) / count;
    rec.dedup_factor =
        occ == 0 ? 0 : static_cast<double>(stats.gapped.raw_pairs) / static_cast<double>(occ);
    sink(rec);
  }
}

namespace {

template <typename T>
T field(const nlohmann::json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bench spec field '") + key + "': " + e.what());
  }
}

}  // namespace

void run_bench(const nlohmann::json& spec, std::uint64_t seed, const RecordSink& sink) {
  if (!spec.is_object()) throw FormatError("bench spec must be a JSON object");
  if (!spec.contains("cases")) return;
  const auto& cases = spec.at("cases");
  if (!cases.is_array()) throw FormatError("bench spec 'cases' must be an array");
  for (const auto& entry : cases) {
    if (!entry.is_object()) throw FormatError("bench case must be an object");
    const auto kind = field<std::string>(entry, "kind", "");
    const auto backend = field<std::string>(entry, "backend", "");
    try {
      if (kind == "ssi") {
        SsiBenchCase c = default_ssi_tradeoff_case();
        if (entry.contains("groups")) {
          c.groups.clear();
          for (const auto& g : field<std::vector<std::vector<std::size_t>>>(entry, "groups", {})) {
            if (g.size() != 2) throw FormatError("ssi group must be [count, size]");
            c.groups.push_back({g[0], g[1]});
          }
        }
        c.universe = field<Element>(entry, "universe", c.universe);
        c.deltas = field<std::vector<double>>(entry, "deltas", c.deltas);
        if (!backend.empty()) c.backend = parse_backend_kind(backend);
        c.queries = field<std::size_t>(entry, "queries", c.queries);
        c.mem_budget_bytes = field<std::uint64_t>(entry, "mem_budget", c.mem_budget_bytes);
        bench_ssi(c, field<std::uint64_t>(entry, "seed", seed), sink);
      } else if (kind == "gapped-string") {
        GappedStringBenchCase c;
        c.lengths = field<std::vector<std::size_t>>(entry, "lengths", c.lengths);
        c.sigma = field<std::size_t>(entry, "sigma", c.sigma);
        c.pattern_length = field<std::size_t>(entry, "pattern_length", c.pattern_length);
        c.max_gap = field<Element>(entry, "max_gap", c.max_gap);
        if (!backend.empty()) c.backend = parse_backend_kind(backend);
        c.delta = field<double>(entry, "delta", c.delta);
        c.queries = field<std::size_t>(entry, "queries", c.queries);
        c.mem_budget_bytes = field<std::uint64_t>(entry, "mem_budget", c.mem_budget_bytes);
        bench_gapped_string(c, field<std::uint64_t>(entry, "seed", seed), sink);
      } else {
        throw FormatError("unknown bench case kind '" + kind + "'");
      }
    } catch (const std::invalid_argument& e) {
      throw FormatError(std::string("bench case: ") + e.what());
    }
  }
}

}  // namespace gapidx
