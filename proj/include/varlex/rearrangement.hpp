#pragma once

// Distribution functions, decreasing rearrangements and the piecewise
// translation that sorts a step function into its rearrangement.

#include "varlex/measure.hpp"

#include <span>
#include <vector>

namespace varlex {

/// Translates [src_lo, src_hi) onto [dst, dst + (src_hi - src_lo)).
struct TransportPiece {
  double src_lo = 0.0;
  double src_hi = 0.0;
  double dst = 0.0;

  double length() const { return src_hi - src_lo; }
  double dst_hi() const { return dst + length(); }

  friend bool operator==(const TransportPiece&, const TransportPiece&) = default;
};

/// A measure-preserving map of [0,1) built from finitely many translations.
/// Sources tile [0,1) exactly; targets tile [0,1) up to kTransportSlack.
class TransportMap {
public:
  static constexpr double kTransportSlack = 1e-12;

  explicit TransportMap(std::vector<TransportPiece> pieces);

  static TransportMap identity();

  std::span<const TransportPiece> pieces() const { return pieces_; }

  /// Image of t in [0,1).
  double operator()(double t) const;

  friend bool operator==(const TransportMap&, const TransportMap&) = default;

private:
  std::vector<TransportPiece> pieces_;
};

/// |{t : f(t) > level}|.
double distribution_function(const StepFn& f, double level);

/// Cells reordered by descending value (stable on ties). A function that is
/// already non-increasing is returned unchanged.
StepFn decreasing_rearrangement(const StepFn& f);

/// Compares distribution functions at every value level of f and g.
bool equimeasurable(const StepFn& f, const StepFn& g, double tolerance);

/// True iff |{f > s}| <= |{g > s}| + tolerance at every value level s of f
/// and g, i.e. f* <= g* up to a null set of size tolerance.
bool rearrangement_dominated(const StepFn& f, const StepFn& g, double tolerance);

/// One piece per cell of f, targets laid out in rearrangement order, so that
/// f(t) == decreasing_rearrangement(f)(omega(t)).
TransportMap sorting_transport(const StepFn& f);

/// t -> p_star(omega(t)) as a step function.
StepFn pull_back(const StepFn& p_star, const TransportMap& omega);

} // namespace varlex
