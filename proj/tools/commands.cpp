#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "gapidx/bench.hpp"
#include "gapidx/persist.hpp"

namespace gapidx::cli {

namespace {

using nlohmann::json;

struct Globals {
  std::uint64_t seed = 1;
  std::string backend = "linear-scan";
  double delta = 0.5;
  bool count_queries = false;
  std::uint64_t mem_budget = std::uint64_t{1} << 31;
  unsigned threads = 1;
  bool plan = false;
};

BackendConfig config_from(const Globals& g) {
  BackendConfig c;
  c.kind = parse_backend_kind(g.backend);
  c.delta = g.delta;
  c.seed = g.seed;
  c.mem_budget_bytes = g.mem_budget;
  return c;
}

std::string read_file(const std::string& path) {
  if (path == "-") {
    return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Writes to `path`, or to `out` when path is empty or "-".
void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << text;
}

std::string hex(std::uint64_t v) {
  std::ostringstream s;
  s << std::hex;
  s.width(16);
  s.fill('0');
  s << v;
  return s.str();
}

json manifest_json(const IndexManifest& m) {
  json counters = json::object();
  for (const auto& [name, value] : m.counters) counters[name] = value;
  return json{{"kind", to_string(m.kind)},
              {"version", m.version},
              {"backend", to_string(m.config.kind)},
              {"delta", m.config.delta},
              {"seed", m.config.seed},
              {"mem_budget", m.config.mem_budget_bytes},
              {"count_queries", m.count_queries},
              {"source_digest", hex(m.source_digest)},
              {"counters", counters}};
}

// --- query line parsing ------------------------------------------------------

std::vector<std::string> tokens(const std::string& line) {
  std::istringstream in(line);
  return {std::istream_iterator<std::string>(in), std::istream_iterator<std::string>()};
}

void expect_tokens(const std::vector<std::string>& t, std::size_t n, const char* shape) {
  if (t.size() != n) {
    throw FormatError("expected " + std::string(shape) + ", got " + std::to_string(t.size()) +
                      " tokens");
  }
}

Element parse_element(const std::string& tok) {
  Element v = 0;
  const char* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc() || ptr != end) throw FormatError("bad integer '" + tok + "'");
  return v;
}

// 1-based in text, 0-based in the API.
SetId parse_set(const std::string& tok, std::size_t k) {
  const Element v = parse_element(tok);
  if (v < 1 || static_cast<std::size_t>(v) > k) {
    throw FormatError("set id " + tok + " outside [1, " + std::to_string(k) + "]");
  }
  return static_cast<SetId>(v - 1);
}

void write_counters(std::ostream& out, const std::vector<std::pair<std::string, std::uint64_t>>& c) {
  for (const auto& [name, value] : c) out << "# " << name << '=' << value << '\n';
}

void write_plan_lines(std::ostream& out, const std::optional<CoverPlan>& plan) {
  if (!plan) {
    out << "# plan empty\n";
    return;
  }
  std::ostringstream text;
  write_plan(text, *plan);
  std::istringstream lines(text.str());
  for (std::string l; std::getline(lines, l);) out << "# " << l << '\n';
}

std::vector<std::pair<std::string, std::uint64_t>> gapped_counters(const GappedStats& s) {
  return {{"exists_calls", s.report.base.exists_calls},
          {"probes", s.report.base.probes},
          {"table_lookups", s.report.base.table_lookups},
          {"plan_queries", s.plan_queries},
          {"raw_pairs", s.raw_pairs},
          {"max_multiplicity", s.max_multiplicity},
          {"fallbacks", s.fallbacks}};
}

struct QueryOptions {
  bool report = true;
  bool counters = false;
  bool plan = false;
};

template <typename Pair>
void write_pairs(std::ostream& out, const std::vector<Pair>& pairs) {
  for (const auto& p : pairs) {
    if constexpr (std::is_same_v<Pair, ShiftCertificate>) {
      out << p.a << ' ' << p.b << '\n';
    } else {
      out << p.first << ' ' << p.second << '\n';
    }
  }
}

std::string answer_ssi(const Artifact& a, const std::vector<std::string>& t,
                       const QueryOptions& o) {
  expect_tokens(t, 3, "`i j s`");
  const auto& index = *a.ssi();
  const ShiftQuery q{parse_set(t[0], index.base_size()), parse_set(t[1], index.base_size()),
                     parse_element(t[2])};
  std::ostringstream out;
  if (!o.report) {
    QueryStats st;
    auto c = index.exists(q, &st);
    if (c) {
      out << "YES " << c->a << ' ' << c->b << '\n';
    } else {
      out << "NO\n";
    }
    if (o.counters) {
      write_counters(out, {{"exists_calls", st.exists_calls},
                           {"probes", st.probes},
                           {"table_lookups", st.table_lookups}});
    }
    return out.str();
  }
  ReportStats rs;
  const auto pairs = index.report(q, &rs);
  write_pairs(out, pairs);
  if (o.counters) {
    write_counters(out, {{"occ", pairs.size()},
                         {"exists_calls", rs.base.exists_calls},
                         {"probes", rs.base.probes},
                         {"table_lookups", rs.base.table_lookups},
                         {"nodes", rs.nodes},
                         {"matching_pairs", rs.matching_pairs},
                         {"call_budget", report_call_budget(pairs.size(), index.base_elements())}});
  }
  out << '\n';
  return out.str();
}

std::string answer_gapped_set(const Artifact& a, const std::vector<std::string>& t,
                              const QueryOptions& o) {
  expect_tokens(t, 4, "`i j alpha beta`");
  const auto& index = *a.gapped_sets();
  const std::size_t k = index.sets().size();
  const SetId i = parse_set(t[0], k);
  const SetId j = parse_set(t[1], k);
  const Element alpha = parse_element(t[2]);
  const Element beta = parse_element(t[3]);
  if (alpha < 0 || alpha > beta) throw FormatError("gap range must satisfy 0 <= alpha <= beta");
  std::ostringstream out;
  if (o.plan) write_plan_lines(out, index.plan_for(alpha, beta));
  GappedStats st;
  if (!o.report) {
    auto c = index.exists(i, j, alpha, beta, &st);
    if (c) {
      out << "YES " << c->a << ' ' << c->b << '\n';
    } else {
      out << "NO\n";
    }
    if (o.counters) write_counters(out, gapped_counters(st));
    return out.str();
  }
  const auto pairs = index.report(i, j, alpha, beta, &st);
  write_pairs(out, pairs);
  if (o.counters) {
    auto c = gapped_counters(st);
    c.insert(c.begin(), {"occ", pairs.size()});
    write_counters(out, c);
  }
  out << '\n';
  return out.str();
}

std::string answer_gapped_string(const Artifact& a, const std::vector<std::string>& t,
                                 const QueryOptions& o) {
  expect_tokens(t, 4, "`P1 P2 alpha beta`");
  const auto& index = *a.text_index();
  const Element alpha = parse_element(t[2]);
  const Element beta = parse_element(t[3]);
  if (alpha < 0 || alpha > beta) throw FormatError("gap range must satisfy 0 <= alpha <= beta");
  std::ostringstream out;
  if (o.plan) write_plan_lines(out, index.gapped().plan_for(alpha, beta));
  StringQueryStats st;
  auto counters = [&](std::size_t occ) {
    auto c = gapped_counters(st.gapped);
    c.insert(c.begin(), {"set_pairs", st.set_pairs});
    if (o.report) c.insert(c.begin(), {"occ", occ});
    write_counters(out, c);
  };
  if (!o.report) {
    auto c = index.exists(t[0], t[1], alpha, beta, &st);
    if (c) {
      out << "YES " << c->first << ' ' << c->second << '\n';
    } else {
      out << "NO\n";
    }
    if (o.counters) counters(0);
    return out.str();
  }
  const auto pairs = index.report(t[0], t[1], alpha, beta, &st);
  write_pairs(out, pairs);
  if (o.counters) counters(pairs.size());
  out << '\n';
  return out.str();
}

std::string answer_jumbled(const Artifact& a, const std::vector<std::string>& t,
                           const QueryOptions& o) {
  const auto& index = *a.jumbled();
  const std::size_t sigma = index.alphabet().size();
  if (t.size() != sigma) {
    throw FormatError("expected " + std::to_string(sigma) + " counts, got " +
                      std::to_string(t.size()));
  }
  Histogram p;
  for (const auto& tok : t) {
    p.push_back(parse_element(tok));
    if (p.back() < 0) throw FormatError("counts must be nonnegative");
  }
  std::ostringstream out;
  if (!o.report) {
    QueryStats st;
    auto c = index.exists(p, &st);
    if (c) {
      out << "YES " << c->first << ' ' << c->second << '\n';
    } else {
      out << "NO\n";
    }
    if (o.counters) {
      write_counters(out, {{"exists_calls", st.exists_calls}, {"probes", st.probes}});
    }
    return out.str();
  }
  ReportStats rs;
  const auto pairs = index.report(p, &rs);
  write_pairs(out, pairs);
  if (o.counters) {
    write_counters(out, {{"occ", pairs.size()},
                         {"exists_calls", rs.base.exists_calls},
                         {"probes", rs.base.probes},
                         {"nodes", rs.nodes}});
  }
  out << '\n';
  return out.str();
}

std::string answer_smallest_shift(const Artifact& a, const std::vector<std::string>& t,
                                  const QueryOptions& o) {
  expect_tokens(t, 2, "`i j`");
  const auto& index = *a.smallest_shift();
  const std::size_t k = index.sets().size();
  ShiftQueryStats st;
  auto r = index.query(parse_set(t[0], k), parse_set(t[1], k), &st);
  std::ostringstream out;
  if (r) {
    out << *r << '\n';
  } else {
    out << "NONE\n";
  }
  if (o.counters) {
    write_counters(out, {{"probes", st.probes}, {"table_lookups", st.table_lookups}});
  }
  return out.str();
}

std::string answer(const Artifact& a, const std::string& line, const QueryOptions& o) {
  const auto t = tokens(line);
  switch (a.kind()) {
    case ArtifactKind::kSsi:
      return answer_ssi(a, t, o);
    case ArtifactKind::kGappedSet:
      return answer_gapped_set(a, t, o);
    case ArtifactKind::kGappedString:
      return answer_gapped_string(a, t, o);
    case ArtifactKind::kJumbled:
      return answer_jumbled(a, t, o);
    case ArtifactKind::kSmallestShift:
      return answer_smallest_shift(a, t, o);
  }
  return {};
}

// --- verify ------------------------------------------------------------------

using Counterexample = std::optional<std::string>;

template <typename T>
std::string pairs_text(const std::vector<T>& v) {
  std::ostringstream out;
  out << '[';
  for (std::size_t x = 0; x < v.size(); ++x) {
    if (x) out << ' ';
    if constexpr (std::is_same_v<T, ShiftCertificate>) {
      out << '(' << v[x].a << ',' << v[x].b << ')';
    } else {
      out << '(' << v[x].first << ',' << v[x].second << ')';
    }
  }
  out << ']';
  return out.str();
}

Counterexample verify_ssi(const Artifact& a, std::size_t trials, Rng& rng) {
  const auto& index = *a.ssi();
  const auto& sets = *a.collection();
  for (const auto& q : random_shift_queries(sets, trials, rng)) {
    const auto want = brute_force_ssi(sets, q);
    const auto got = index.report(q);
    const auto cert = index.exists(q);
    const std::string line = std::to_string(q.i + 1) + ' ' + std::to_string(q.j + 1) + ' ' +
                             std::to_string(q.s);
    if (got != want) {
      return "ssi report `" + line + "`: expected " + pairs_text(want) + ", got " +
             pairs_text(got);
    }
    if (cert.has_value() != !want.empty() || (cert && *cert != want.front())) {
      return "ssi exists `" + line + "`: expected " +
             (want.empty() ? "NO" : pairs_text(std::vector{want.front()})) + ", got " +
             (cert ? pairs_text(std::vector{*cert}) : "NO");
    }
  }
  return std::nullopt;
}

std::vector<ShiftCertificate> brute_gapped(const SetCollection& sets, SetId i, SetId j,
                                           Element alpha, Element beta) {
  std::vector<ShiftCertificate> out;
  for (Element x : sets[i].elements()) {
    for (Element y : sets[j].elements()) {
      if (y - x >= alpha && y - x <= beta) out.push_back({x, y});
    }
  }
  return out;
}

Counterexample verify_gapped_set(const Artifact& a, std::size_t trials, Rng& rng) {
  const auto& index = *a.gapped_sets();
  const auto& sets = *a.collection();
  const auto k = static_cast<Element>(sets.size());
  const Element u = sets.universe();
  for (std::size_t x = 0; x < trials; ++x) {
    const auto i = static_cast<SetId>(rng.uniform(0, k - 1));
    const auto j = static_cast<SetId>(rng.uniform(0, k - 1));
    const Element alpha = rng.uniform(0, u);
    const Element beta = alpha + rng.uniform(0, rng.coin() ? 8 : u);
    const auto want = brute_gapped(sets, i, j, alpha, beta);
    const auto got = index.report(i, j, alpha, beta);
    const auto hit = index.exists(i, j, alpha, beta);
    const std::string line = std::to_string(i + 1) + ' ' + std::to_string(j + 1) + ' ' +
                             std::to_string(alpha) + ' ' + std::to_string(beta);
    if (got != want) {
      return "gapped-set report `" + line + "`: expected " + pairs_text(want) + ", got " +
             pairs_text(got);
    }
    const bool valid =
        hit ? std::binary_search(want.begin(), want.end(), *hit) : want.empty();
    if (!valid) return "gapped-set exists `" + line + "` disagrees with brute force";
  }
  return std::nullopt;
}

std::string random_pattern(const std::string& text, Rng& rng) {
  const auto n = static_cast<Element>(text.size());
  const Element m = std::min<Element>(n, rng.uniform(1, 4));
  if (rng.uniform(0, 3) == 0) {
    std::string p(static_cast<std::size_t>(m), ' ');
    for (char& c : p) c = text[static_cast<std::size_t>(rng.uniform(0, n - 1))];
    return p;
  }
  return text.substr(static_cast<std::size_t>(rng.uniform(0, n - m)), static_cast<std::size_t>(m));
}

Counterexample verify_gapped_string(const Artifact& a, std::size_t trials, Rng& rng) {
  const auto& index = *a.text_index();
  const std::string& text = index.text();
  const auto n = static_cast<Element>(text.size());
  for (std::size_t x = 0; x < trials; ++x) {
    const std::string p1 = random_pattern(text, rng);
    const std::string p2 = random_pattern(text, rng);
    const Element alpha = rng.uniform(0, n);
    const Element beta = alpha + rng.uniform(0, rng.coin() ? 8 : n);
    const auto want = baseline_linear_scan(text, p1, p2, alpha, beta);
    const auto got = index.report(p1, p2, alpha, beta);
    const std::string line =
        p1 + ' ' + p2 + ' ' + std::to_string(alpha) + ' ' + std::to_string(beta);
    if (got != want) {
      return "gapped-string report `" + line + "`: expected " + pairs_text(want) + ", got " +
             pairs_text(got);
    }
    const auto hit = index.exists(p1, p2, alpha, beta);
    const bool valid = hit ? std::binary_search(want.begin(), want.end(), *hit) : want.empty();
    if (!valid) return "gapped-string exists `" + line + "` disagrees with the scan";
  }
  return std::nullopt;
}

std::vector<ElementPair> sliding_window(const std::string& text, const Alphabet& alphabet,
                                        const Histogram& p) {
  std::vector<ElementPair> out;
  Element m = 0;
  for (Element v : p) m += v;
  const auto n = static_cast<Element>(text.size());
  if (m == 0 || m > n) return out;
  Histogram window = histogram(std::string_view(text).substr(0, static_cast<std::size_t>(m)),
                               alphabet);
  for (Element i = 1;; ++i) {
    if (window == p) out.push_back({i, i + m - 1});
    if (i + m - 1 == n) break;
    --window[*alphabet.index(text[static_cast<std::size_t>(i - 1)])];
    ++window[*alphabet.index(text[static_cast<std::size_t>(i + m - 1)])];
  }
  return out;
}

std::string histogram_text(const Histogram& h) {
  std::string s;
  for (std::size_t x = 0; x < h.size(); ++x) s += (x ? " " : "") + std::to_string(h[x]);
  return s;
}

Counterexample verify_jumbled(const Artifact& a, std::size_t trials, Rng& rng) {
  const auto& index = *a.jumbled();
  const std::string& text = index.text();
  const auto n = static_cast<Element>(text.size());
  for (std::size_t x = 0; x < trials; ++x) {
    Histogram p;
    if (rng.coin()) {
      const Element len = rng.uniform(1, n);
      const Element at = rng.uniform(0, n - len);
      p = histogram(std::string_view(text).substr(static_cast<std::size_t>(at),
                                                  static_cast<std::size_t>(len)),
                    index.alphabet());
    } else {
      p.assign(index.alphabet().size(), 0);
      for (Element& v : p) v = rng.uniform(0, 3);
    }
    const auto want = sliding_window(text, index.alphabet(), p);
    const auto got = index.report(p);
    if (got != want) {
      return "jumbled report `" + histogram_text(p) + "`: expected " + pairs_text(want) +
             ", got " + pairs_text(got);
    }
    const auto hit = index.exists(p);
    const bool valid = hit ? std::binary_search(want.begin(), want.end(), *hit) : want.empty();
    if (!valid) return "jumbled exists `" + histogram_text(p) + "` disagrees with the window scan";
  }
  return std::nullopt;
}

Counterexample verify_smallest_shift(const Artifact& a, std::size_t trials, Rng& rng) {
  const auto& index = *a.smallest_shift();
  const auto& sets = *a.collection();
  const auto k = static_cast<Element>(sets.size());
  for (std::size_t x = 0; x < trials; ++x) {
    const auto i = static_cast<SetId>(rng.uniform(0, k - 1));
    const auto j = static_cast<SetId>(rng.uniform(0, k - 1));
    const auto want = brute_force_smallest_shift(sets, i, j);
    const auto got = index.query(i, j);
    if (got != want) {
      auto show = [](const std::optional<Element>& v) {
        return v ? std::to_string(*v) : std::string("NONE");
      };
      return "smallest-shift `" + std::to_string(i + 1) + ' ' + std::to_string(j + 1) +
             "`: expected " + show(want) + ", got " + show(got);
    }
  }
  return std::nullopt;
}

Counterexample verify_artifact(const Artifact& a, std::size_t trials, std::uint64_t seed) {
  Rng rng(seed);
  switch (a.kind()) {
    case ArtifactKind::kSsi:
      return verify_ssi(a, trials, rng);
    case ArtifactKind::kGappedSet:
      return verify_gapped_set(a, trials, rng);
    case ArtifactKind::kGappedString:
      return verify_gapped_string(a, trials, rng);
    case ArtifactKind::kJumbled:
      return verify_jumbled(a, trials, rng);
    case ArtifactKind::kSmallestShift:
      return verify_smallest_shift(a, trials, rng);
  }
  return std::nullopt;
}

// --- gen ---------------------------------------------------------------------

std::string gen_queries(const Artifact& a, std::size_t count, Rng& rng) {
  std::ostringstream out;
  switch (a.kind()) {
    case ArtifactKind::kSsi:
      for (const auto& q : random_shift_queries(*a.collection(), count, rng)) {
        out << q.i + 1 << ' ' << q.j + 1 << ' ' << q.s << '\n';
      }
      break;
    case ArtifactKind::kGappedSet: {
      const auto k = static_cast<Element>(a.collection()->size());
      const Element u = a.collection()->universe();
      for (std::size_t x = 0; x < count; ++x) {
        const Element alpha = rng.uniform(0, u);
        out << rng.uniform(1, k) << ' ' << rng.uniform(1, k) << ' ' << alpha << ' '
            << alpha + rng.uniform(0, u) << '\n';
      }
      break;
    }
    case ArtifactKind::kGappedString: {
      const std::string& text = a.text_index()->text();
      const auto n = static_cast<Element>(text.size());
      for (std::size_t x = 0; x < count; ++x) {
        const std::string p1 = random_pattern(text, rng);
        const std::string p2 = random_pattern(text, rng);
        const bool printable = std::all_of(p1.begin(), p1.end(), [](char c) { return c > ' '; }) &&
                               std::all_of(p2.begin(), p2.end(), [](char c) { return c > ' '; });
        if (!printable) continue;
        const Element alpha = rng.uniform(0, n);
        out << p1 << ' ' << p2 << ' ' << alpha << ' ' << alpha + rng.uniform(0, n) << '\n';
      }
      break;
    }
    case ArtifactKind::kJumbled: {
      const std::string& text = a.jumbled()->text();
      const auto n = static_cast<Element>(text.size());
      for (std::size_t x = 0; x < count; ++x) {
        const Element len = rng.uniform(1, n);
        const Element at = rng.uniform(0, n - len);
        out << histogram_text(histogram(
                   std::string_view(text).substr(static_cast<std::size_t>(at),
                                                 static_cast<std::size_t>(len)),
                   a.jumbled()->alphabet()))
            << '\n';
      }
      break;
    }
    case ArtifactKind::kSmallestShift: {
      const auto k = static_cast<Element>(a.collection()->size());
      for (std::size_t x = 0; x < count; ++x) {
        out << rng.uniform(1, k) << ' ' << rng.uniform(1, k) << '\n';
      }
      break;
    }
  }
  return out.str();
}

// --- commands ----------------------------------------------------------------

struct BuildArgs {
  std::string kind;
  std::string input;
  std::string out;
  std::string alphabet;
  bool trim_newline = false;
};

int cmd_build(const Globals& g, const BuildArgs& b, std::ostream& out) {
  const ArtifactKind kind = parse_artifact_kind(b.kind);
  const BackendConfig config = config_from(g);
  std::string source = read_file(b.input);
  if (b.trim_newline && !source.empty() && source.back() == '\n') source.pop_back();
  std::optional<Artifact> artifact;
  switch (kind) {
    case ArtifactKind::kSsi:
    case ArtifactKind::kGappedSet:
    case ArtifactKind::kSmallestShift: {
      std::istringstream in(source);
      artifact = Artifact::from_sets(kind, parse_collection(in), config, g.count_queries);
      break;
    }
    case ArtifactKind::kGappedString:
      if (source.empty()) throw FormatError("text input is empty");
      artifact = Artifact::from_text(std::move(source), config, g.count_queries);
      break;
    case ArtifactKind::kJumbled: {
      if (source.empty()) throw FormatError("text input is empty");
      Alphabet alphabet = b.alphabet.empty() ? Alphabet::of(source) : Alphabet(b.alphabet);
      try {
        histogram(source, alphabet);
      } catch (const std::invalid_argument& e) {
        throw FormatError(e.what());
      }
      artifact = Artifact::from_jumbled(std::move(source), std::move(alphabet), config,
                                        g.count_queries);
      break;
    }
  }
  artifact->save(b.out);
  out << manifest_json(artifact->manifest()).dump() << '\n';
  return kOk;
}

struct QueryArgs {
  std::string index;
  std::string queries = "-";
  std::string mode = "report";
};

int cmd_query(const Globals& g, const QueryArgs& q, std::ostream& out, std::ostream& err) {
  if (q.mode != "report" && q.mode != "exists") {
    throw std::invalid_argument("mode must be report or exists");
  }
  const Artifact artifact = Artifact::load(q.index);
  QueryOptions opts;
  opts.report = q.mode == "report";
  opts.counters = g.count_queries || artifact.manifest().count_queries;
  opts.plan = g.plan;

  std::vector<std::pair<std::size_t, std::string>> lines;
  {
    std::istringstream in(read_file(q.queries));
    std::size_t number = 0;
    for (std::string line; std::getline(in, line);) {
      ++number;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      const auto first = line.find_first_not_of(" \t");
      if (first == std::string::npos || line[first] == '#') continue;
      lines.emplace_back(number, std::move(line));
    }
  }
  std::vector<std::string> results(lines.size());
  std::vector<std::string> errors(lines.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t x = next++; x < lines.size(); x = next++) {
      try {
        results[x] = answer(artifact, lines[x].second, opts);
      } catch (const std::exception& e) {
        errors[x] = "line " + std::to_string(lines[x].first) + ": " + e.what();
      }
    }
  };
  const unsigned threads = std::max(1U, std::min<unsigned>(g.threads, 64));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  bool failed = false;
  for (std::size_t x = 0; x < lines.size(); ++x) {
    if (errors[x].empty()) {
      out << results[x];
      continue;
    }
    failed = true;
    out << "ERROR " << errors[x] << '\n';
    if (opts.report && artifact.kind() != ArtifactKind::kSmallestShift) out << '\n';
    err << "query " << errors[x] << '\n';
  }
  return failed ? kFormat : kOk;
}

int cmd_verify(const Globals& g, const std::string& index, std::size_t trials,
               std::ostream& out) {
  const Artifact artifact = Artifact::load(index);
  const auto bad = verify_artifact(artifact, trials, g.seed);
  json j{{"kind", to_string(artifact.kind())},
         {"trials", trials},
         {"seed", g.seed},
         {"status", bad ? "fail" : "pass"}};
  if (bad) j["counterexample"] = *bad;
  out << j.dump() << '\n';
  return bad ? kVerifyFailed : kOk;
}

int cmd_bench(const Globals& g, const std::string& spec_path, std::ostream& out) {
  json spec;
  try {
    spec = json::parse(read_file(spec_path));
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("bench spec: ") + e.what());
  }
  run_bench(spec, g.seed, [&out](const BenchRecord& r) { out << r.to_json().dump() << '\n'; });
  return kOk;
}

struct GenArgs {
  std::string what;
  std::size_t k = 4;
  std::size_t size = 50;
  Element universe = 1000;
  std::size_t length = 1000;
  std::size_t sigma = 4;
  std::string index;
  std::size_t count = 100;
  std::string out;
};

int cmd_gen(const Globals& g, const GenArgs& a, std::ostream& out) {
  Rng rng(g.seed);
  std::string text;
  if (a.what == "sets") {
    std::ostringstream s;
    write_collection(s, random_collection({{a.k, a.size}}, a.universe, rng));
    text = s.str();
  } else if (a.what == "text") {
    text = random_text(a.length, a.sigma, rng);
  } else if (a.what == "queries") {
    if (a.index.empty()) throw std::invalid_argument("gen queries needs --index");
    text = gen_queries(Artifact::load(a.index), a.count, rng);
  } else {
    throw std::invalid_argument("gen target must be sets, text or queries");
  }
  write_output(a.out, text, out);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gapped string and set intersection indexes", "gapidx"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Seed for generators, verification and hashing");
  app.add_option("--backend", g.backend, "linear-scan | full-tabulation | small-universe")
      ->check(CLI::IsMember({"linear-scan", "full-tabulation", "small-universe", "linear", "full",
                             "small"}));
  app.add_option("--delta", g.delta, "Small-universe threshold exponent in [0, 1]")
      ->check(CLI::Range(0.0, 1.0));
  app.add_flag("--count-queries", g.count_queries, "Print instrumentation counters");
  app.add_option("--mem-budget", g.mem_budget, "Table budget in bytes");
  app.add_option("--threads", g.threads, "Worker threads for query files");
  app.add_flag("--plan", g.plan, "Print the cover plan of gapped queries");

  BuildArgs build;
  auto* build_cmd = app.add_subcommand("build", "Build and persist an index");
  build_cmd->add_option("--kind", build.kind, "ssi | gapped-set | gapped-string | jumbled | smallest-shift")
      ->required();
  build_cmd->add_option("--input", build.input, "Set collection or text file")->required();
  build_cmd->add_option("--out", build.out, "Index file to write")->required();
  build_cmd->add_option("--alphabet", build.alphabet, "Jumbled alphabet (default: letters of the text)");
  build_cmd->add_flag("--trim-newline", build.trim_newline, "Drop one trailing newline from text input");

  QueryArgs query;
  auto* query_cmd = app.add_subcommand("query", "Answer a query file");
  query_cmd->add_option("--index", query.index, "Index file")->required();
  query_cmd->add_option("--queries", query.queries, "Query file, - for stdin");
  query_cmd->add_option("--mode", query.mode, "report | exists");

  std::string verify_index;
  std::size_t trials = 1000;
  auto* verify_cmd = app.add_subcommand("verify", "Check an index against brute-force oracles");
  verify_cmd->add_option("--index", verify_index, "Index file")->required();
  verify_cmd->add_option("--trials", trials, "Random queries to check");

  std::string bench_spec;
  auto* bench_cmd = app.add_subcommand("bench", "Run a JSON bench spec");
  bench_cmd->add_option("--spec", bench_spec, "Bench spec file")->required();

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate seeded instances");
  gen_cmd->add_option("what", gen.what, "sets | text | queries")->required();
  gen_cmd->add_option("--k", gen.k, "Number of sets");
  gen_cmd->add_option("--size", gen.size, "Elements per set");
  gen_cmd->add_option("--universe", gen.universe, "Universe u");
  gen_cmd->add_option("--length", gen.length, "Text length");
  gen_cmd->add_option("--sigma", gen.sigma, "Alphabet size");
  gen_cmd->add_option("--index", gen.index, "Index to draw queries for");
  gen_cmd->add_option("--count", gen.count, "Number of queries");
  gen_cmd->add_option("--out", gen.out, "Output file (default stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*build_cmd) return cmd_build(g, build, out);
    if (*query_cmd) return cmd_query(g, query, out, err);
    if (*verify_cmd) return cmd_verify(g, verify_index, trials, out);
    if (*bench_cmd) return cmd_bench(g, bench_spec, out);
    if (*gen_cmd) return cmd_gen(g, gen, out);
  } catch (const FormatError& e) {
    err << "format error: " << e.what() << '\n';
    return kFormat;
  } catch (const GuardError& e) {
    err << "guard: " << e.what() << '\n';
    return kGuard;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace gapidx::cli
