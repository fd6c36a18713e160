#include "varlex/norms.hpp"

#include "varlex/error.hpp"
#include "varlex/profiles.hpp"
#include "varlex/rearrangement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace varlex {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLogMax = 709.0;

double power_term(double ratio, double exponent, double length) {
  if (ratio == 0.0)
    return 0.0;
  double t = std::pow(ratio, exponent);
  if (std::isfinite(t))
    return t * length;
  double lg = exponent * std::log(ratio) + std::log(length);
  return lg > kLogMax ? kInf : std::exp(lg);
}

double exp_term(double ratio, double length) {
  if (ratio <= kLogMax)
    return std::expm1(ratio) * length;
  double lg = ratio + std::log(length);
  return lg > kLogMax ? kInf : std::exp(lg);
}

// Shared bisection. `hi` must satisfy mod(hi) <= 1; mod must be
// non-increasing in lambda and unbounded as lambda -> 0+.
template <class Modular>
NormResult bisect_norm(Modular&& mod, double hi, double tol) {
  if (!(tol > 0.0))
    throw DomainError("norm tolerance must be positive");
  NormResult r;
  if (hi == 0.0)
    return r;
  double m_hi = mod(hi);
  double lo = hi / 2;
  for (;;) {
    double m = mod(lo);
    ++r.iterations;
    if (m > 1.0)
      break;
    hi = lo;
    m_hi = m;
    lo /= 2;
    if (lo == 0.0)
      return r;
  }
  for (;;) {
    double mid = lo + (hi - lo) / 2;
    bool converged = hi - lo <= tol && 1.0 - m_hi <= tol;
    if (converged || mid <= lo || mid >= hi)
      break;
    double m = mod(mid);
    ++r.iterations;
    if (m > 1.0) {
      lo = mid;
    } else {
      hi = mid;
      m_hi = m;
    }
  }
  r.value = hi;
  r.lo = lo;
  r.hi = hi;
  r.modular = m_hi;
  return r;
}

// Cumulative integrals of a non-increasing step function at its breakpoints.
std::vector<double> cumulative(const StepFn& fs) {
  std::vector<double> F(fs.cells() + 1, 0.0);
  for (std::size_t i = 0; i < fs.cells(); ++i)
    F[i + 1] = F[i] + fs.value(i) * fs.length(i);
  return F;
}

} // namespace

double modular(std::span<const ModularTerm> terms, double lambda) {
  if (!(lambda > 0.0))
    throw DomainError("modular requires lambda > 0");
  double sum = 0.0;
  for (const auto& t : terms) {
    sum += power_term(t.value / lambda, t.exponent, t.length);
    if (sum == kInf)
      return kInf;
  }
  return sum;
}

std::vector<ModularTerm> modular_terms(const StepFn& f, const ExponentProfile& p) {
  auto [ff, pp] = common_refinement(f, p.fn());
  std::vector<ModularTerm> terms;
  terms.reserve(ff.cells());
  for (std::size_t i = 0; i < ff.cells(); ++i) {
    if (ff.value(i) > 0.0)
      terms.push_back({ff.value(i), pp.value(i), ff.length(i)});
  }
  return terms;
}

double modular(const StepFn& f, const ExponentProfile& p, double lambda) {
  return modular(modular_terms(f, p), lambda);
}

NormResult luxemburg_norm(std::span<const ModularTerm> terms, double tol) {
  double hi = 0.0;
  for (const auto& t : terms)
    hi = std::max(hi, t.value);
  return bisect_norm([&](double lambda) { return modular(terms, lambda); }, hi, tol);
}

NormResult luxemburg_norm(const StepFn& f, const ExponentProfile& p, double tol) {
  auto terms = modular_terms(f, p);
  return luxemburg_norm(terms, tol);
}

NormResult orlicz_exp_norm(const StepFn& f, double tol) {
  // At lambda = max|f| / ln 2 every psi-term is at most psi(ln 2) = 1.
  auto mod = [&](double lambda) {
    double sum = 0.0;
    for (std::size_t i = 0; i < f.cells(); ++i) {
      sum += exp_term(f.value(i) / lambda, f.length(i));
      if (sum == kInf)
        return kInf;
    }
    return sum;
  };
  return bisect_norm(mod, f.max_value() / std::log(2.0), tol);
}

double marcinkiewicz_ln_norm(const StepFn& f) {
  // On a cell of f* the ratio F(t)/(t ln(e/t)) has derivative with the sign
  // of v t + (F(x_i) - v x_i) ln t, which is increasing in t; interior
  // critical points are minima, so the supremum sits at a breakpoint.
  StepFn fs = decreasing_rearrangement(f);
  auto F = cumulative(fs);
  auto bp = fs.breakpoints();
  double best = 0.0;
  for (std::size_t i = 1; i < bp.size(); ++i)
    best = std::max(best, F[i] / (bp[i] * log_e_over(bp[i])));
  return best;
}

double sup_log_ratio_norm(const StepFn& f) {
  // v / ln(e/t) increases across a cell; its supremum is the right-end limit.
  StepFn fs = decreasing_rearrangement(f);
  double best = 0.0;
  for (std::size_t i = 0; i < fs.cells(); ++i)
    best = std::max(best, fs.value(i) / log_e_over(fs.partition().right(i)));
  return best;
}

} // namespace varlex
