#include "varlex/diagnostics.hpp"

#include "varlex/error.hpp"
#include "varlex/profiles.hpp"
#include "varlex/rearrangement.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>

namespace varlex {

namespace {

void require_non_increasing(const StepFn& p) {
  if (!p.is_non_increasing())
    throw ValidationError("expected a non-increasing profile (a decreasing rearrangement)");
}

struct Candidate {
  double norm = std::numeric_limits<double>::infinity();
  std::vector<std::uint64_t> cube;
  std::uint64_t image = 0;

  bool better_than(const Candidate& o) const {
    if (norm != o.norm)
      return norm < o.norm;
    return cube < o.cube;
  }
};

} // namespace

RatioProfile limsup_ratio_profile(const ExponentProfile& p_star, int max_depth) {
  require_non_increasing(p_star.fn());
  if (max_depth < 1)
    throw DomainError("max_depth must be >= 1");
  RatioProfile r;
  for (int j = 0; j <= max_depth; ++j) {
    double t = std::ldexp(1.0, -j);
    r.depths.push_back(j);
    r.ratios.push_back(p_star.fn().value_at_or_before(t) / log_e_over(t));
  }
  r.running_max_tail.resize(r.ratios.size());
  double tail = 0.0;
  for (std::size_t k = r.ratios.size(); k-- > 0;) {
    tail = std::max(tail, r.ratios[k]);
    r.running_max_tail[k] = tail;
  }
  return r;
}

std::vector<double> exp_integral_test(const ExponentProfile& p_star, double c,
                                      std::span<const int> depths) {
  if (!(c > 1.0))
    throw DomainError("exp_integral_test requires c > 1");
  const StepFn& p = p_star.fn();
  require_non_increasing(p);
  const double log_c = std::log(c);
  // G[i] = integral of c^p over [x_i, 1].
  std::vector<double> density(p.cells());
  std::vector<double> G(p.cells() + 1, 0.0);
  for (std::size_t i = 0; i < p.cells(); ++i) {
    double lg = p.value(i) * log_c;
    density[i] = lg > 709.0 ? std::numeric_limits<double>::infinity() : std::exp(lg);
  }
  for (std::size_t i = p.cells(); i-- > 0;)
    G[i] = G[i + 1] + density[i] * p.length(i);
  auto bp = p.breakpoints();
  std::vector<double> out;
  out.reserve(depths.size());
  for (int depth : depths) {
    if (depth < 0)
      throw DomainError("depths must be non-negative");
    double t = std::ldexp(1.0, -depth);
    if (t >= 1.0) {
      out.push_back(0.0);
      continue;
    }
    std::size_t i = p.partition().locate(t);
    double w = bp[i + 1] - t;
    out.push_back(G[i + 1] + (w > 0.0 ? density[i] * w : 0.0));
  }
  return out;
}

std::string to_string(Verdict v) {
  switch (v) {
  case Verdict::Divergent:
    return "divergent";
  case Verdict::Convergent:
    return "convergent";
  case Verdict::Inconclusive:
    break;
  }
  return "inconclusive";
}

IntegralVerdict classify_exp_integral(std::span<const double> partials,
                                      const VerdictThresholds& th) {
  IntegralVerdict v;
  const std::size_t n = partials.size();
  if (n == 0)
    return v;
  if (std::isinf(partials.back())) {
    v.verdict = Verdict::Divergent;
    v.last_increment = v.prior_increment = v.tail_share = partials.back();
    return v;
  }
  if (n < 3)
    return v;
  const std::size_t last = n - 1;
  const std::size_t q3 = 3 * last / 4;
  const std::size_t q2 = last / 2;
  v.last_increment = partials[last] - partials[q3];
  v.prior_increment = partials[q3] - partials[q2];
  v.tail_share = partials[last] > 0.0 ? v.last_increment / partials[last] : 0.0;
  if (v.last_increment > 0.0 &&
      v.last_increment >= th.divergent_increment_ratio * v.prior_increment)
    v.verdict = Verdict::Divergent;
  else if (v.last_increment <= th.convergent_increment_ratio * v.prior_increment &&
           v.tail_share <= th.convergent_tail_share)
    v.verdict = Verdict::Convergent;
  return v;
}

std::vector<double> mln_defect(const StepFn& f, std::span<const int> depths) {
  StepFn fs = decreasing_rearrangement(f);
  std::vector<double> F(fs.cells() + 1, 0.0);
  for (std::size_t i = 0; i < fs.cells(); ++i)
    F[i + 1] = F[i] + fs.value(i) * fs.length(i);
  std::vector<double> out;
  out.reserve(depths.size());
  for (int depth : depths) {
    if (depth < 0)
      throw DomainError("depths must be non-negative");
    double t = std::ldexp(1.0, -depth);
    double Ft = F.back();
    if (t < 1.0) {
      std::size_t i = fs.partition().locate(t);
      Ft = F[i] + fs.value(i) * (t - fs.partition().left(i));
    }
    out.push_back(Ft / (t * log_e_over(t)));
  }
  return out;
}

unsigned worker_threads() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("VARLEX_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1)
      return static_cast<unsigned>(std::min<long>(v, 256));
  }
  return hw;
}

ScanReport closedness_scan(const GridExponentND& pbar, int max_level, double tol,
                           int coverage_level) {
  if (max_level < 0)
    throw DomainError("max_level must be >= 0");
  const int n = pbar.dimension();
  ScanReport report;
  report.dimension = n;
  report.bits = pbar.bits();
  report.requested_max_level = max_level;
  report.coverage_level = coverage_level;
  report.max_level = std::min({max_level, pbar.bits(), kMaxScanImageLevel / n});

  const unsigned threads = worker_threads();
  for (int m = 0; m <= report.max_level; ++m) {
    const int image_level = n * m;
    const std::uint64_t count = std::uint64_t{1} << image_level;
    const unsigned workers =
        static_cast<unsigned>(std::min<std::uint64_t>(threads, std::max<std::uint64_t>(1, count / 64)));
    std::vector<Candidate> best(workers);

    auto work = [&](unsigned w) {
      Candidate& local = best[w];
      std::uint64_t begin = count * w / workers;
      std::uint64_t end = count * (w + 1) / workers;
      for (std::uint64_t k = begin; k < end; ++k) {
        DyadicInterval image{image_level, k};
        auto terms = indicator_terms(pbar.p_hat(), {&image, 1});
        // A modular clearly above 1 at the running minimum means this cube's
        // norm is strictly larger.
        if (std::isfinite(local.norm) && modular(terms, local.norm) > 1.0 + 1e-6)
          continue;
        Candidate c;
        c.norm = luxemburg_norm(terms, tol).value;
        c.cube = deinterleave_index(k, n, m);
        c.image = k;
        if (c.better_than(local))
          local = std::move(c);
      }
    };

    if (workers == 1) {
      work(0);
    } else {
      std::vector<std::jthread> pool;
      for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back(work, w);
    }

    Candidate overall = best.front();
    for (const auto& c : best) {
      if (c.better_than(overall))
        overall = c;
    }
    ScanLevel lv;
    lv.level = m;
    lv.min_norm = overall.norm;
    lv.argmin_cube = overall.cube;
    lv.argmin_image = overall.image;
    lv.within_coverage = coverage_level >= 0 && image_level <= coverage_level;
    report.levels.push_back(std::move(lv));
  }
  return report;
}

} // namespace varlex

namespace varlex {

DiagnoseReport diagnose(const ExponentProfile& p_star, int depth, double delta,
                        std::span<const double> extra_bases) {
  if (!(delta > 0.0))
    throw DomainError("delta must be positive");
  DiagnoseReport r;
  r.depth = depth;
  r.delta = delta;
  r.profile = limsup_ratio_profile(p_star, depth);
  r.witnessed = r.profile.deepest_tail() >= delta;
  for (int j = 1; j <= depth; ++j)
    r.depths.push_back(j);
  std::vector<double> bases{std::exp(1.0 / delta), std::exp(2.0 / delta)};
  bases.insert(bases.end(), extra_bases.begin(), extra_bases.end());
  for (double c : bases) {
    DiagnoseReport::ExpTest t;
    t.c = c;
    t.partials = exp_integral_test(p_star, c, r.depths);
    t.verdict = classify_exp_integral(t.partials);
    r.exp_tests.push_back(std::move(t));
  }
  r.mln = mln_defect(p_star.fn(), r.depths);
  return r;
}

} // namespace varlex
