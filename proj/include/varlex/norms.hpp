#pragma once

// Luxemburg-type norms computed by bisection on lambda, and the two
// rearrangement-invariant norms of the exponential class e^L:
//
//   ||f||_{M_ln}   = sup_t F(t) / (t ln(e/t)),  F(t) = int_0^t f*
//   sup-log ratio  = sup_t f*(t) / ln(e/t)

#include "varlex/measure.hpp"

#include <span>

namespace varlex {

inline constexpr double kDefaultNormTol = 1e-10;

struct NormResult {
  double value = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  double modular = 0.0; // modular evaluated at `value`
  int iterations = 0;
};

/// One cell's contribution (value / lambda)^exponent * length.
struct ModularTerm {
  double value;
  double exponent;
  double length;
};

/// Sum of terms at lambda; +infinity if any term overflows.
double modular(std::span<const ModularTerm> terms, double lambda);

double modular(const StepFn& f, const ExponentProfile& p, double lambda);

/// Terms of f against p on their common refinement.
std::vector<ModularTerm> modular_terms(const StepFn& f, const ExponentProfile& p);

/// inf{lambda > 0 : modular(terms, lambda) <= 1}. The bracket shrinks until
/// hi - lo <= tol and the modular at the returned value is within tol of 1,
/// or until the bracket reaches floating-point resolution.
NormResult luxemburg_norm(std::span<const ModularTerm> terms, double tol = kDefaultNormTol);

NormResult luxemburg_norm(const StepFn& f, const ExponentProfile& p,
                          double tol = kDefaultNormTol);

/// Luxemburg norm for psi(t) = e^t - 1.
NormResult orlicz_exp_norm(const StepFn& f, double tol = kDefaultNormTol);

double marcinkiewicz_ln_norm(const StepFn& f);

double sup_log_ratio_norm(const StepFn& f);

} // namespace varlex
