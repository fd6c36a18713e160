#pragma once

// Builds, from a decreasing exponent p* with limsup p*(t)/ln(e/t) > 0, an
// equimeasurable exponent p_hat on [0,1) whose every dyadic interval of the
// covered levels carries at least unit mass of c^{p_hat}. Composed with the
// digit-interleaving map this gives an n-D exponent with indicator norms of
// dyadic cubes bounded below by 1/c.
//
// Pipeline:
//   h    = min(p*, ln(e/t))                        clip_exponent
//   t_k  with h(t_k) >= d ln(e/t_k), 2 t_{k+1} < t_k select_anchors
//   f    = d ln(e/t_k) on (t_{k+1}, t_k]           build_minorant
//   a_k  with int_{a_{k+1}}^{a_k} c^h = 1           build_unit_partition
//   p_k  = h on Delta_k translated to A_k = [r_k, r_k + |Delta_k|)
//          overwriting p_{k-1}; q = p_K              assemble_scrambled_exponent
//   p_hat = p* o omega, omega the sorting map of q    lift_exponent

#include "varlex/measure.hpp"
#include "varlex/profiles.hpp"
#include "varlex/rearrangement.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace varlex {

struct ConstructionConfig {
  GeometricGrid grid{};
  std::optional<double> d; // default: half the deepest tail ratio of h
  std::optional<double> c; // default: e^{2/d}
  int max_anchors = 64;
  int max_stages = 64;
  int dimension = 2;
  int bits = 0; // 0 selects floor(52 / dimension)
  int sample_points = 10000;
  std::uint64_t seed = 20240601;
  bool keep_stages = false;
};

struct Anchor {
  double t = 0.0;
  double h = 0.0;     // h(t_k)
  double ratio = 0.0; // h(t_k) / ln(e/t_k)

  friend bool operator==(const Anchor&, const Anchor&) = default;
};

struct DivergenceCertificate {
  std::vector<double> lower_bounds;   // (t_k - t_{k+1}) c^{d ln(e/t_k)}, t_{K+1} = 0
  std::vector<double> band_integrals; // int_{t_{k+1}}^{t_k} c^h on the grid
  bool monotone_growth = false;

  friend bool operator==(const DivergenceCertificate&, const DivergenceCertificate&) = default;
};

/// Placement window A_k = [lo, hi) after clipping to [0,1].
struct Window {
  double lo = 0.0;
  double hi = 0.0;
  bool clipped = false;

  friend bool operator==(const Window&, const Window&) = default;
};

struct AuditItem {
  std::string name;
  bool passed = false;
  std::string detail;

  friend bool operator==(const AuditItem&, const AuditItem&) = default;
};

struct ConstructionTrace {
  double d = 0.0;
  double c = 0.0;
  int dimension = 2;
  int bits = 26;
  GeometricGrid grid{};
  std::vector<Anchor> anchors;
  StepFn minorant = StepFn::constant(1.0);
  DivergenceCertificate divergence;
  std::vector<double> partition_a;
  std::vector<double> placements;
  std::vector<Window> windows;
  int stage_count = 0;
  ExponentProfile h{StepFn::constant(1.0)};
  ExponentProfile q{StepFn::constant(1.0)};
  TransportMap omega = TransportMap::identity();
  ExponentProfile p_hat{StepFn::constant(1.0)};
  std::vector<StepFn> stages; // p_1..p_K, kept on request
  double q_integral = 0.0;
  double uncovered_measure = 0.0;
  int coverage_level = -1; // finest 1-D dyadic level whose every interval holds a window
  std::vector<AuditItem> audit;

  bool passed() const;
  /// Finest cube level m with n*m <= coverage_level, or -1.
  int cube_coverage_level() const;

  friend bool operator==(const ConstructionTrace&, const ConstructionTrace&) = default;
};

ExponentProfile clip_exponent(const ExponentProfile& p_star, const GeometricGrid& grid);

/// Greedy scan of h's breakpoints from 1 downward. Throws NotWitnessedError
/// if no breakpoint satisfies the ratio bound.
std::vector<Anchor> select_anchors(const ExponentProfile& h, double d, int max_anchors);

StepFn build_minorant(std::span<const double> anchors, double d);

/// Throws DomainError unless c > e^{1/d}.
DivergenceCertificate verify_divergence(const ExponentProfile& h,
                                        std::span<const double> anchors, double d, double c);

/// Returns a_1 = 1 > a_2 > ... > a_{K+1}, one unit of c^h mass per band.
/// Throws GridTooShallowError if the whole grid carries less than one unit.
std::vector<double> build_unit_partition(const ExponentProfile& h, double c, int max_stages);

/// Integral of c^h over [lo, hi).
double power_integral(const ExponentProfile& h, double c, double lo, double hi);

/// 0, 1/2, 1/4, 3/4, 1/8, 3/8, 5/8, 7/8, ...
std::vector<double> dyadic_placements(int count);

struct ScrambledExponent {
  ExponentProfile q{StepFn::constant(1.0)};
  std::vector<Window> windows;
  std::vector<StepFn> stages;
  bool stages_monotone = true;
  double uncovered_measure = 0.0;
};

ScrambledExponent assemble_scrambled_exponent(const ExponentProfile& h,
                                              std::span<const double> partition_a,
                                              std::span<const double> placements,
                                              bool keep_stages);

struct LiftedExponent {
  TransportMap omega = TransportMap::identity();
  ExponentProfile p_hat{StepFn::constant(1.0)};
};

/// Throws InvariantError if q* <= p* or q <= p_hat fails beyond a 1e-12
/// measure slack.
LiftedExponent lift_exponent(const ExponentProfile& p_star, const ExponentProfile& q);

/// Finest level L such that every dyadic interval of length 2^-L contains a
/// whole unclipped window; -1 if none.
int window_coverage_level(std::span<const Window> windows);

ConstructionTrace construct(const ExponentProfile& p_star, const ConstructionConfig& cfg = {});

} // namespace varlex
