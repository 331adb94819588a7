#include "gapidx/gapped.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>
#include <string>

namespace gapidx {

namespace {

struct Pass {
  std::vector<Element> points;
  std::vector<ApproxQuery> approx;
  std::size_t phases = 0;
  Element reach = 0;  // covered [alpha, reach]
};

// Covers [alpha, alpha + delta] for growing delta until 2 delta >= beta - alpha.
Pass forward_pass(Element alpha, Element beta) {
  Pass pass;
  const Element width = beta - alpha;
  Element delta = -1;
  auto done = [&] { return delta >= 0 && 2 * delta >= width; };

  pass.phases = 1;
  for (Element t = 0; t < 3; ++t) {
    pass.points.push_back(alpha + t);
    delta = t;
    if (done()) {
      pass.reach = alpha + delta;
      return pass;
    }
  }
  for (unsigned level = 1;; ++level) {
    ++pass.phases;
    const Element width_l = Element{1} << level;
    const Element half = width_l / 2;
    if (delta < 2 * width_l - 2) {
      throw std::logic_error("cover planner entered phase " + std::to_string(level) +
                             " with too little coverage");
    }
    const Element kappa = floor_div(alpha + delta + half, width_l);
    for (Element t = 0; t < 3; ++t) {
      const Element center = (kappa + t) * width_l;
      pass.approx.push_back({level, center});
      delta = center + half - alpha;
      if (done()) {
        pass.reach = alpha + delta;
        return pass;
      }
    }
  }
}

template <typename T>
void append_distinct(std::vector<T>& out, const T& v) {
  if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
}

}  // namespace

CoverPlan plan_cover(Element alpha, Element beta) {
  if (alpha > beta) throw std::invalid_argument("plan_cover: alpha > beta");
  CoverPlan plan;
  plan.alpha = alpha;
  plan.beta = beta;
  Pass fwd = forward_pass(alpha, beta);
  plan.forward_phases = fwd.phases;
  plan.forward_approx = fwd.approx.size();
  for (Element p : fwd.points) append_distinct(plan.point_shifts, p);
  for (const auto& q : fwd.approx) append_distinct(plan.approx, q);
  if (fwd.reach >= beta) return plan;

  // Backward pass: plan forward on the reflected interval, then negate.
  Pass bwd = forward_pass(-beta, -alpha);
  plan.backward_phases = bwd.phases;
  plan.backward_approx = bwd.approx.size();
  for (Element p : bwd.points) append_distinct(plan.point_shifts, -p);
  for (const auto& q : bwd.approx) append_distinct(plan.approx, ApproxQuery{q.level, -q.center});
  return plan;
}

void write_plan(std::ostream& out, const CoverPlan& plan) {
  out << "plan " << plan.alpha << ' ' << plan.beta << " points=" << plan.point_shifts.size()
      << " approx=" << plan.approx.size() << " forward_phases=" << plan.forward_phases
      << " backward_phases=" << plan.backward_phases << '\n';
  for (Element p : plan.point_shifts) out << "point " << p << '\n';
  for (const auto& q : plan.approx) {
    out << "approx level=" << q.level << " center=" << q.center << " covers=[" << q.covered_lo()
        << ',' << q.covered_hi() << "] uncertain=[" << q.uncertain_lo() << ','
        << q.uncertain_hi() << "]\n";
  }
}

// --- LevelIndex -------------------------------------------------------------

SetCollection LevelIndex::build_quotients(const SetCollection& sets, unsigned level,
                                          std::vector<std::vector<std::size_t>>& runs) {
  std::vector<std::vector<Element>> quotients;
  quotients.reserve(sets.size());
  runs.assign(sets.size(), {});
  for (const auto& s : sets) {
    std::vector<Element> q;
    auto& run = runs[s.id()];
    const auto elems = s.elements();
    for (std::size_t r = 0; r < elems.size(); ++r) {
      const Element v = (elems[r] >> (level - 1)) + 1;
      if (q.empty() || q.back() != v) {
        q.push_back(v);
        run.push_back(r);
      }
    }
    run.push_back(elems.size());
    quotients.push_back(std::move(q));
  }
  const Element universe = (sets.universe() >> (level - 1)) + 1;
  return SetCollection(std::move(quotients), universe);
}

LevelIndex::LevelIndex(std::shared_ptr<const SetCollection> sets, unsigned level,
                       const BackendConfig& config)
    : level_(level),
      base_(std::move(sets)),
      quotients_(build_quotients(*base_, level, runs_)),
      index_(quotients_, config) {}

std::span<const Element> LevelIndex::values(SetId set, Element q) const {
  const IntSet& qs = quotients_.at(set);
  const std::size_t r = qs.count_below(q);
  if (r >= qs.size() || qs.elements()[r] != q) return {};
  const auto& run = runs_[set];
  return base_->at(set).elements().subspan(run[r], run[r + 1] - run[r]);
}

// --- GappedIndex ------------------------------------------------------------

GappedIndex::GappedIndex(const SetCollection& sets, const BackendConfig& config)
    : sets_(std::make_shared<const SetCollection>(sets)), exact_(*sets_, config) {
  const unsigned levels = ceil_log2(static_cast<std::uint64_t>(sets_->universe()));
  for (unsigned l = 1; l <= levels; ++l) {
    levels_.push_back(std::make_unique<LevelIndex>(sets_, l, config));
  }
}

std::size_t GappedIndex::total_elements() const {
  std::size_t total = exact_.total_elements();
  for (const auto& level : levels_) total += level->index().total_elements();
  return total;
}

std::size_t GappedIndex::element_bound() const {
  return exact_.element_bound() * (levels_.size() + 1);
}

void GappedIndex::check_query(SetId i, SetId j, Element alpha, Element beta) const {
  if (i >= sets_->size() || j >= sets_->size()) throw std::out_of_range("set id out of range");
  if (alpha < 0) throw std::invalid_argument("gap range must satisfy 0 <= alpha");
  if (alpha > beta) throw std::invalid_argument("gap range must satisfy alpha <= beta");
}

std::optional<CoverPlan> GappedIndex::plan_for(Element alpha, Element beta) const {
  const Element top = std::min(beta, sets_->universe() - 1);
  if (alpha > top) return std::nullopt;
  CoverPlan plan = plan_cover(alpha, top);
  for (const auto& q : plan.approx) {
    if (q.level > levels_.size()) throw std::logic_error("cover plan needs a missing level");
  }
  return plan;
}

namespace {

void check_approx(const ApproxQuery& q, std::size_t levels) {
  if (q.level < 1 || q.level > levels) {
    throw std::invalid_argument("approximate level " + std::to_string(q.level) +
                                " outside [1, " + std::to_string(levels) + "]");
  }
  const Element width = Element{1} << q.level;
  if (q.center % width != 0 || q.center / width < 1) {
    throw std::invalid_argument("center " + std::to_string(q.center) +
                                " is not a positive multiple of 2^" + std::to_string(q.level));
  }
}

}  // namespace

std::optional<ShiftCertificate> GappedIndex::approx_witness(SetId i, SetId j,
                                                            const ApproxQuery& q,
                                                            QueryStats* stats) const {
  const LevelIndex& lv = level(q.level);
  const Element kappa = q.center >> q.level;
  for (Element t = 2 * kappa - 1; t <= 2 * kappa + 1; ++t) {
    auto cert = lv.index().exists({i, j, t}, stats);
    if (!cert) continue;
    return ShiftCertificate{lv.values(i, cert->a).front(), lv.values(j, cert->b).front()};
  }
  return std::nullopt;
}

bool GappedIndex::approx_exists(SetId i, SetId j, const ApproxQuery& q,
                                QueryStats* stats) const {
  check_approx(q, levels_.size());
  return approx_witness(i, j, q, stats).has_value();
}

std::vector<ShiftCertificate> GappedIndex::approx_report(SetId i, SetId j, const ApproxQuery& q,
                                                         ReportStats* stats) const {
  check_approx(q, levels_.size());
  const LevelIndex& lv = level(q.level);
  const Element kappa = q.center >> q.level;
  std::vector<ShiftCertificate> out;
  for (Element t = 2 * kappa - 1; t <= 2 * kappa + 1; ++t) {
    for (const auto& qc : lv.index().report({i, j, t}, stats)) {
      for (Element a : lv.values(i, qc.a)) {
        for (Element b : lv.values(j, qc.b)) {
          if (b - a >= q.uncertain_lo() && b - a <= q.uncertain_hi()) out.push_back({a, b});
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<ShiftCertificate> GappedIndex::exists(SetId i, SetId j, Element alpha,
                                                    Element beta, GappedStats* stats) const {
  check_query(i, j, alpha, beta);
  auto plan = plan_for(alpha, beta);
  if (!plan) return std::nullopt;
  QueryStats local;
  std::optional<ShiftCertificate> found;
  std::uint64_t fallbacks = 0;
  auto in_range = [&](const ShiftCertificate& c) {
    return c.b - c.a >= alpha && c.b - c.a <= beta;
  };
  for (Element p : plan->point_shifts) {
    auto cert = exact_.exists({i, j, p}, &local);
    if (cert && in_range(*cert)) {
      found = cert;
      break;
    }
  }
  for (std::size_t x = 0; !found && x < plan->approx.size(); ++x) {
    auto cert = approx_witness(i, j, plan->approx[x], &local);
    if (!cert) continue;
    if (in_range(*cert)) {
      found = cert;
      break;
    }
    ++fallbacks;
    ReportStats rs;
    for (const auto& c : approx_report(i, j, plan->approx[x], &rs)) {
      if (in_range(c)) {
        found = c;
        break;
      }
    }
    local += rs.base;
  }
  if (stats) {
    stats->report.base += local;
    stats->plan_queries += plan->size();
    stats->fallbacks += fallbacks;
  }
  return found;
}

std::vector<ShiftCertificate> GappedIndex::report(SetId i, SetId j, Element alpha, Element beta,
                                                  GappedStats* stats) const {
  check_query(i, j, alpha, beta);
  auto plan = plan_for(alpha, beta);
  if (!plan) return {};
  ReportStats rs;
  std::vector<ShiftCertificate> raw;
  for (Element p : plan->point_shifts) {
    auto part = exact_.report({i, j, p}, &rs);
    raw.insert(raw.end(), part.begin(), part.end());
  }
  for (const auto& q : plan->approx) {
    auto part = approx_report(i, j, q, &rs);
    raw.insert(raw.end(), part.begin(), part.end());
  }
  std::sort(raw.begin(), raw.end());
  std::uint64_t max_mult = 0;
  for (std::size_t x = 0; x < raw.size();) {
    std::size_t y = x;
    while (y < raw.size() && raw[y] == raw[x]) ++y;
    max_mult = std::max<std::uint64_t>(max_mult, y - x);
    x = y;
  }
  const std::uint64_t raw_count = raw.size();
  raw.erase(std::unique(raw.begin(), raw.end()), raw.end());
  std::erase_if(raw, [&](const ShiftCertificate& c) {
    return c.b - c.a < alpha || c.b - c.a > beta;
  });
  if (stats) {
    stats->report.base += rs.base;
    stats->report.nodes += rs.nodes;
    stats->report.matching_pairs += rs.matching_pairs;
    stats->plan_queries += plan->size();
    stats->raw_pairs += raw_count;
    stats->max_multiplicity = std::max(stats->max_multiplicity, max_mult);
  }
  return raw;
}

}  // namespace gapidx
