#include "varlex/construction.hpp"

#include "varlex/diagnostics.hpp"
#include "varlex/error.hpp"
#include "varlex/interleave.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace varlex {

namespace {

constexpr double kMeasureSlack = 1e-12;
constexpr double kBandTolerance = 1e-9;

double power_density(double exponent, double log_c) {
  double lg = exponent * log_c;
  return lg > 709.0 ? std::numeric_limits<double>::infinity() : std::exp(lg);
}

// base with [s, e) replaced by the cells (bp, values); bp[0] == s.
StepFn overwrite(const StepFn& base, double s, double e, std::span<const double> window_bp,
                 std::span<const double> window_values) {
  auto bbp = base.breakpoints();
  std::vector<double> bp;
  std::vector<double> v;
  std::size_t i = 0;
  for (; i < base.cells() && bbp[i] < s; ++i) {
    bp.push_back(bbp[i]);
    v.push_back(base.value(i));
  }
  for (std::size_t k = 0; k < window_bp.size(); ++k) {
    bp.push_back(window_bp[k]);
    v.push_back(window_values[k]);
  }
  if (e < 1.0) {
    bp.push_back(e);
    v.push_back(base.value(base.partition().locate(e)));
    for (i = base.partition().locate(e) + 1; i < base.cells(); ++i) {
      bp.push_back(bbp[i]);
      v.push_back(base.value(i));
    }
  }
  bp.push_back(1.0);
  return StepFn(std::move(bp), std::move(v));
}

double union_measure(std::vector<Window> ws) {
  std::sort(ws.begin(), ws.end(), [](const Window& a, const Window& b) { return a.lo < b.lo; });
  double total = 0.0;
  double cur_lo = 0.0;
  double cur_hi = -1.0;
  for (const auto& w : ws) {
    if (w.lo > cur_hi) {
      if (cur_hi > cur_lo)
        total += cur_hi - cur_lo;
      cur_lo = w.lo;
      cur_hi = w.hi;
    } else {
      cur_hi = std::max(cur_hi, w.hi);
    }
  }
  if (cur_hi > cur_lo)
    total += cur_hi - cur_lo;
  return total;
}

// Measure of {f > g}.
double excess_measure(const StepFn& f, const StepFn& g) {
  auto [ff, gg] = common_refinement(f, g);
  double m = 0.0;
  for (std::size_t i = 0; i < ff.cells(); ++i) {
    if (ff.value(i) > gg.value(i))
      m += ff.length(i);
  }
  return m;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

} // namespace

bool ConstructionTrace::passed() const {
  return std::all_of(audit.begin(), audit.end(), [](const AuditItem& a) { return a.passed; });
}

int ConstructionTrace::cube_coverage_level() const {
  return coverage_level < 0 ? -1 : coverage_level / dimension;
}

ExponentProfile clip_exponent(const ExponentProfile& p_star, const GeometricGrid& grid) {
  if (!p_star.fn().is_non_increasing())
    throw ValidationError("clip_exponent expects a non-increasing p*");
  return ExponentProfile(pointwise_min(p_star.fn(), log_minorant(grid)));
}

std::vector<Anchor> select_anchors(const ExponentProfile& h, double d, int max_anchors) {
  if (!(d > 0.0))
    throw DomainError("anchor ratio d must be positive");
  if (max_anchors < 1)
    throw DomainError("max_anchors must be >= 1");
  auto bp = h.fn().breakpoints();
  std::vector<Anchor> out;
  for (std::size_t i = bp.size() - 1; i-- > 1;) {
    double t = bp[i];
    if (!out.empty() && !(2.0 * t < out.back().t))
      continue;
    double hv = h.fn().value(i);
    double ln = log_e_over(t);
    // Multiplicative form so the minorant value d ln(e/t) is certified <= h.
    if (d * ln <= hv) {
      out.push_back({t, hv, hv / ln});
      if (static_cast<int>(out.size()) == max_anchors)
        break;
    }
  }
  if (out.empty())
    throw NotWitnessedError("no grid point with h(t) >= d ln(e/t) for d = " + fmt(d) +
                            "; condition not witnessed at this depth");
  return out;
}

StepFn build_minorant(std::span<const double> anchors, double d) {
  if (anchors.empty())
    throw DomainError("build_minorant needs at least one anchor");
  for (std::size_t k = 0; k + 1 < anchors.size(); ++k) {
    if (!(anchors[k + 1] < anchors[k]))
      throw ValidationError("anchors must be strictly decreasing");
  }
  if (!(anchors.front() < 1.0 && anchors.back() > 0.0))
    throw DomainError("anchors must lie in (0,1)");
  std::vector<double> bp{0.0};
  std::vector<double> v;
  for (std::size_t k = anchors.size(); k-- > 0;) {
    bp.push_back(anchors[k]);
    v.push_back(d * log_e_over(anchors[k]));
  }
  bp.push_back(1.0);
  v.push_back(1.0);
  return StepFn(std::move(bp), std::move(v));
}

double power_integral(const ExponentProfile& h, double c, double lo, double hi) {
  const StepFn& f = h.fn();
  auto bp = f.breakpoints();
  const double log_c = std::log(c);
  double sum = 0.0;
  if (!(lo < hi))
    return 0.0;
  for (std::size_t j = f.partition().locate(lo); j < f.cells() && bp[j] < hi; ++j) {
    double len = std::min(hi, bp[j + 1]) - std::max(lo, bp[j]);
    if (len > 0.0)
      sum += power_density(f.value(j), log_c) * len;
  }
  return sum;
}

DivergenceCertificate verify_divergence(const ExponentProfile& h,
                                        std::span<const double> anchors, double d, double c) {
  if (!(c > std::exp(1.0 / d)))
    throw DomainError("base too small for divergence: need c > e^{1/d}");
  DivergenceCertificate cert;
  const double slope = d * std::log(c);
  for (std::size_t k = 0; k < anchors.size(); ++k) {
    double next = k + 1 < anchors.size() ? anchors[k + 1] : 0.0;
    cert.lower_bounds.push_back((anchors[k] - next) * std::exp(slope * log_e_over(anchors[k])));
    cert.band_integrals.push_back(power_integral(h, c, next, anchors[k]));
  }
  cert.monotone_growth = true;
  for (std::size_t k = 0; k + 1 < cert.lower_bounds.size(); ++k) {
    if (!(cert.lower_bounds[k + 1] > cert.lower_bounds[k]))
      cert.monotone_growth = false;
  }
  return cert;
}

std::vector<double> build_unit_partition(const ExponentProfile& h, double c, int max_stages) {
  if (!(c > 1.0))
    throw DomainError("build_unit_partition requires c > 1");
  if (max_stages < 1)
    throw DomainError("max_stages must be >= 1");
  const StepFn& f = h.fn();
  const double log_c = std::log(c);
  std::vector<double> a{1.0};
  double mass = 0.0; // integral of c^h over [right(i), 1]
  double target = 1.0;
  bool degenerate = false;
  for (std::size_t i = f.cells(); i-- > 0 && !degenerate;) {
    const double density = power_density(f.value(i), log_c);
    const double len = f.length(i);
    while (static_cast<int>(a.size()) <= max_stages && mass + density * len >= target) {
      double t = f.partition().right(i) - (target - mass) / density;
      t = std::max(t, f.partition().left(i));
      if (!(t < a.back())) {
        degenerate = true;
        break;
      }
      a.push_back(t);
      target += 1.0;
    }
    if (static_cast<int>(a.size()) > max_stages)
      break;
    mass += density * len;
  }
  if (a.size() < 2)
    throw GridTooShallowError("grid too shallow for one stage: total mass of c^h is " +
                              fmt(mass) + " < 1");
  return a;
}

std::vector<double> dyadic_placements(int count) {
  std::vector<double> r;
  r.reserve(std::max(count, 0));
  for (int k = 1; k <= count; ++k) {
    if (k == 1) {
      r.push_back(0.0);
      continue;
    }
    auto km1 = static_cast<std::uint64_t>(k - 1);
    int level = static_cast<int>(std::bit_width(km1));
    std::uint64_t j = km1 - (std::uint64_t{1} << (level - 1));
    r.push_back(std::ldexp(static_cast<double>(2 * j + 1), -level));
  }
  return r;
}

ScrambledExponent assemble_scrambled_exponent(const ExponentProfile& h,
                                              std::span<const double> partition_a,
                                              std::span<const double> placements,
                                              bool keep_stages) {
  if (partition_a.size() < 2)
    throw DomainError("unit partition needs at least two points");
  const std::size_t K = partition_a.size() - 1;
  if (placements.size() < K)
    throw DomainError("fewer placements than stages");
  const StepFn& hf = h.fn();
  auto hbp = hf.breakpoints();

  ScrambledExponent out;
  StepFn current = StepFn::constant(1.0); // exponent floor outside all windows
  for (std::size_t k = 0; k < K; ++k) {
    const double band_lo = partition_a[k + 1];
    const double band_hi = partition_a[k];
    const double r = placements[k];
    if (!(r >= 0.0 && r < 1.0))
      throw DomainError("placements must lie in [0,1)");
    const double end = r + (band_hi - band_lo);
    Window w{r, std::min(end, 1.0), end > 1.0};
    if (!(w.hi > w.lo))
      throw InvariantError("placement window collapsed to zero width at stage " +
                           std::to_string(k + 1));

    std::vector<double> wbp{r};
    std::vector<double> wv{hf.value(hf.partition().locate(band_lo))};
    for (std::size_t j = hf.partition().locate(band_lo) + 1; j < hf.cells() && hbp[j] < band_hi;
         ++j) {
      double y = r + (hbp[j] - band_lo);
      if (y >= w.hi)
        break;
      if (y <= wbp.back()) {
        wv.back() = hf.value(j);
        continue;
      }
      wbp.push_back(y);
      wv.push_back(hf.value(j));
    }
    StepFn next = overwrite(current, w.lo, w.hi, wbp, wv);
    if (!pointwise_le(current, next))
      out.stages_monotone = false;
    current = std::move(next);
    if (keep_stages)
      out.stages.push_back(current);
    out.windows.push_back(w);
  }
  out.uncovered_measure = 1.0 - union_measure(out.windows);
  out.q = ExponentProfile(std::move(current));
  return out;
}

LiftedExponent lift_exponent(const ExponentProfile& p_star, const ExponentProfile& q) {
  if (!p_star.fn().is_non_increasing())
    throw ValidationError("lift_exponent expects a non-increasing p*");
  if (!rearrangement_dominated(q.fn(), p_star.fn(), kMeasureSlack))
    throw InvariantError("q* <= p* violated on the grid");
  LiftedExponent out;
  out.omega = sorting_transport(q.fn());
  out.p_hat = ExponentProfile(pull_back(p_star.fn(), out.omega));
  double excess = excess_measure(q.fn(), out.p_hat.fn());
  if (excess > kMeasureSlack)
    throw InvariantError("q <= p_hat violated on a set of measure " + fmt(excess));
  return out;
}

int window_coverage_level(std::span<const Window> windows) {
  int best = -1;
  for (int L = 0; L <= 40 && (std::uint64_t{1} << L) <= windows.size(); ++L) {
    const std::uint64_t count = std::uint64_t{1} << L;
    std::vector<char> covered(count, 0);
    for (const auto& w : windows) {
      if (w.clipped)
        continue;
      auto idx = static_cast<std::uint64_t>(std::floor(std::ldexp(w.lo, L)));
      if (idx < count && w.hi <= std::ldexp(static_cast<double>(idx + 1), -L))
        covered[idx] = 1;
    }
    if (std::find(covered.begin(), covered.end(), 0) != covered.end())
      break;
    best = L;
  }
  return best;
}

ConstructionTrace construct(const ExponentProfile& p_star, const ConstructionConfig& cfg) {
  if (!p_star.fn().is_non_increasing())
    throw ValidationError("construct expects a non-increasing p* (rearrange first)");
  ConstructionTrace tr;
  tr.grid = cfg.grid;
  tr.dimension = cfg.dimension;
  tr.bits = cfg.bits == 0 ? default_bits(cfg.dimension) : cfg.bits;
  if (cfg.dimension < 1 || tr.bits < 1 || cfg.dimension * tr.bits > kMantissaBits)
    throw BudgetError("dimension * bits must not exceed 52");

  tr.h = clip_exponent(p_star, cfg.grid);
  if (cfg.d) {
    tr.d = *cfg.d;
  } else {
    tr.d = limsup_ratio_profile(tr.h, cfg.grid.depth).deepest_tail() / 2;
  }
  if (!(tr.d > 0.0))
    throw NotWitnessedError("ratio lower bound d is not positive");
  tr.c = cfg.c ? *cfg.c : std::exp(2.0 / tr.d);

  tr.anchors = select_anchors(tr.h, tr.d, cfg.max_anchors);
  std::vector<double> ts;
  for (const auto& a : tr.anchors)
    ts.push_back(a.t);
  tr.minorant = build_minorant(ts, tr.d);
  tr.divergence = verify_divergence(tr.h, ts, tr.d, tr.c);

  tr.partition_a = build_unit_partition(tr.h, tr.c, cfg.max_stages);
  tr.stage_count = static_cast<int>(tr.partition_a.size()) - 1;
  tr.placements = dyadic_placements(tr.stage_count);
  auto scrambled = assemble_scrambled_exponent(tr.h, tr.partition_a, tr.placements, cfg.keep_stages);
  tr.q = scrambled.q;
  tr.windows = scrambled.windows;
  tr.stages = std::move(scrambled.stages);
  tr.uncovered_measure = scrambled.uncovered_measure;
  tr.q_integral = integrate(tr.q.fn());
  tr.coverage_level = window_coverage_level(tr.windows);

  auto lifted = lift_exponent(p_star, tr.q);
  tr.omega = std::move(lifted.omega);
  tr.p_hat = std::move(lifted.p_hat);

  // Audit.
  auto add = [&](std::string name, bool ok, std::string detail) {
    tr.audit.push_back({std::move(name), ok, std::move(detail)});
  };
  add("base_above_threshold", tr.c > std::exp(1.0 / tr.d),
      "c = " + fmt(tr.c) + ", e^{1/d} = " + fmt(std::exp(1.0 / tr.d)));
  add("h_clip", tr.h.fn().is_non_increasing() && pointwise_le(tr.h.fn(), p_star.fn()),
      "h non-increasing and h <= p*");

  bool ratio_ok = true;
  bool gap_ok = true;
  for (std::size_t k = 0; k < tr.anchors.size(); ++k) {
    const auto& a = tr.anchors[k];
    ratio_ok = ratio_ok && tr.d * log_e_over(a.t) <= tr.h(a.t) && a.ratio >= tr.d;
    if (k + 1 < tr.anchors.size())
      gap_ok = gap_ok && 2.0 * tr.anchors[k + 1].t < a.t;
  }
  add("anchor_ratio", ratio_ok, std::to_string(tr.anchors.size()) + " anchors, d = " + fmt(tr.d));
  add("anchor_gap", gap_ok, "2 t_{k+1} < t_k");
  add("minorant_below_h", pointwise_le(tr.minorant, tr.h.fn()), "f <= h cellwise");

  bool bounds_ok = tr.divergence.monotone_growth;
  for (std::size_t k = 0; k < tr.divergence.lower_bounds.size(); ++k)
    bounds_ok = bounds_ok &&
                tr.divergence.band_integrals[k] >= tr.divergence.lower_bounds[k] * (1 - 1e-12);
  add("divergence_growth", bounds_ok,
      "last band lower bound " +
          fmt(tr.divergence.lower_bounds.empty() ? 0.0 : tr.divergence.lower_bounds.back()));

  double worst_band = 0.0;
  for (std::size_t k = 0; k + 1 < tr.partition_a.size(); ++k)
    worst_band = std::max(worst_band, std::abs(power_integral(tr.h, tr.c, tr.partition_a[k + 1],
                                                              tr.partition_a[k]) - 1.0));
  add("unit_bands", worst_band <= kBandTolerance,
      std::to_string(tr.stage_count) + " bands, max |band - 1| = " + fmt(worst_band));
  add("stage_monotonicity", scrambled.stages_monotone, "p_k <= p_{k+1} cellwise");
  add("q_mass", tr.q_integral <= 2.0 + tr.uncovered_measure + 1e-9 && tr.q_integral <= 3.0,
      "int q = " + fmt(tr.q_integral) + ", uncovered measure = " + fmt(tr.uncovered_measure));
  add("q_star_below_p_star", rearrangement_dominated(tr.q.fn(), p_star.fn(), kMeasureSlack),
      "distribution of q dominated by p*");

  // Random sample points away from every breakpoint of q and p_hat.
  const StepFn q_star = decreasing_rearrangement(tr.q.fn());
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  int sampled = 0;
  int below = 0;
  int transported = 0;
  while (sampled < cfg.sample_points) {
    double t = uni(rng);
    if (distance_to_breakpoint(tr.q.fn(), t) <= kMeasureSlack ||
        distance_to_breakpoint(tr.p_hat.fn(), t) <= kMeasureSlack)
      continue;
    ++sampled;
    double s = tr.omega(t);
    if (tr.q(t) <= tr.p_hat(t))
      ++below;
    if (s < 1.0 && tr.q(t) == q_star(s))
      ++transported;
  }
  add("q_below_p_hat", below == sampled,
      std::to_string(below) + "/" + std::to_string(sampled) + " sample points");
  add("transport_reproduces_q", transported == sampled,
      std::to_string(transported) + "/" + std::to_string(sampled) + " sample points");
  add("equimeasurable_q", equimeasurable(tr.q.fn(), q_star, kMeasureSlack), "q ~ q*");
  add("equimeasurable_p_hat", equimeasurable(tr.p_hat.fn(), p_star.fn(), kMeasureSlack),
      "p_hat ~ p*");
  return tr;
}

} // namespace varlex
