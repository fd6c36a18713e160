#pragma once

// Finite-depth probes of asymptotic conditions at t -> 0+. None of these
// returns a yes/no answer on its own: limsup and divergence are undecidable at
// finite depth, so callers apply thresholds to the returned series.

#include "varlex/interleave.hpp"
#include "varlex/measure.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace varlex {

struct RatioProfile {
  std::vector<int> depths;
  std::vector<double> ratios;           // p*(2^-j) / ln(e 2^j)
  std::vector<double> running_max_tail; // max of ratios over depths >= j

  double deepest_tail() const { return running_max_tail.back(); }
};

RatioProfile limsup_ratio_profile(const ExponentProfile& p_star, int max_depth);

/// Partial integrals of c^{p*} over [2^-D, 1] for each D in depths.
std::vector<double> exp_integral_test(const ExponentProfile& p_star, double c,
                                      std::span<const int> depths);

enum class Verdict { Divergent, Convergent, Inconclusive };

std::string to_string(Verdict v);

struct IntegralVerdict {
  Verdict verdict = Verdict::Inconclusive;
  double last_increment = 0.0;  // I(last) - I(3/4 mark)
  double prior_increment = 0.0; // I(3/4 mark) - I(1/2 mark)
  double tail_share = 0.0;      // last_increment / I(last)
};

struct VerdictThresholds {
  double divergent_increment_ratio = 0.5;
  double convergent_increment_ratio = 0.125;
  double convergent_tail_share = 1e-2;
};

/// Compares the mass added over the last quarter of the depth list with the
/// mass added over the quarter before it.
IntegralVerdict classify_exp_integral(std::span<const double> partials,
                                      const VerdictThresholds& th = {});

/// F(t) / (t ln(e/t)) at t = 2^-j, F the cumulative integral of f*.
std::vector<double> mln_defect(const StepFn& f, std::span<const int> depths);

struct ScanLevel {
  int level = 0;
  double min_norm = 0.0;
  std::vector<std::uint64_t> argmin_cube;
  std::uint64_t argmin_image = 0;
  bool within_coverage = false;
};

struct ScanReport {
  int dimension = 1;
  int bits = 0;
  int requested_max_level = 0;
  int max_level = 0; // after clamping to the bit budget and n*m <= 26
  int coverage_level = -1; // 1-D dyadic level fully covered by windows; -1 if unknown
  std::vector<ScanLevel> levels;
};

inline constexpr int kMaxScanImageLevel = 26;

/// Minimum indicator norm over all dyadic cubes of each level 0..max_level.
ScanReport closedness_scan(const GridExponentND& pbar, int max_level,
                           double tol = kDefaultNormTol, int coverage_level = -1);

/// Worker threads for parallel scans: VARLEX_THREADS if set, else the
/// hardware concurrency.
unsigned worker_threads();

} // namespace varlex

namespace varlex {

/// Everything the `diagnose` command reports for one profile.
struct DiagnoseReport {
  struct ExpTest {
    double c = 0.0;
    std::vector<double> partials;
    IntegralVerdict verdict;
  };

  int depth = 0;
  double delta = 0.05;
  RatioProfile profile;
  bool witnessed = false; // deepest tail ratio >= delta
  std::vector<int> depths; // 1..depth
  std::vector<ExpTest> exp_tests;
  std::vector<double> mln;
};

/// p_star must be non-increasing. Bases default to {e^{1/delta}, e^{2/delta}};
/// `extra_bases` are appended.
DiagnoseReport diagnose(const ExponentProfile& p_star, int depth, double delta,
                        std::span<const double> extra_bases = {});

} // namespace varlex
