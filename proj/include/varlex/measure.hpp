#pragma once

// Step functions on finite partitions of [0,1].
//
// Every cell is right-open, [x_i, x_{i+1}); the last cell is [x_{M-1}, 1) and
// evaluation at t = 1 is a domain error. Values are non-negative and finite.

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace varlex {

class Partition {
public:
  /// Breakpoints must be strictly increasing, start at exactly 0 and end at
  /// exactly 1.
  explicit Partition(std::vector<double> breakpoints);

  static Partition unit();

  std::size_t cells() const { return bp_.size() - 1; }
  std::span<const double> breakpoints() const { return bp_; }
  double left(std::size_t i) const { return bp_[i]; }
  double right(std::size_t i) const { return bp_[i + 1]; }
  double length(std::size_t i) const { return bp_[i + 1] - bp_[i]; }

  /// Index of the cell containing t; t must lie in [0,1).
  std::size_t locate(double t) const;

  /// Like locate, but clamps t >= 1 to the last cell (left-limit at 1).
  std::size_t locate_clamped(double t) const;

  friend bool operator==(const Partition&, const Partition&) = default;

private:
  std::vector<double> bp_;
};

class StepFn {
public:
  StepFn(Partition partition, std::vector<double> values);
  StepFn(std::vector<double> breakpoints, std::vector<double> values)
      : StepFn(Partition(std::move(breakpoints)), std::move(values)) {}

  static StepFn constant(double v);

  const Partition& partition() const { return partition_; }
  std::span<const double> breakpoints() const { return partition_.breakpoints(); }
  std::span<const double> values() const { return values_; }
  std::size_t cells() const { return values_.size(); }
  double value(std::size_t i) const { return values_[i]; }
  double length(std::size_t i) const { return partition_.length(i); }

  double operator()(double t) const { return values_[partition_.locate(t)]; }

  /// Value on the cell containing t, with t = 1 mapped to the last cell.
  double value_at_or_before(double t) const {
    return values_[partition_.locate_clamped(t)];
  }

  double max_value() const;
  double min_value() const;
  bool is_non_increasing() const;
  bool is_zero() const;

  StepFn scaled(double c) const;

  friend bool operator==(const StepFn&, const StepFn&) = default;

private:
  Partition partition_;
  std::vector<double> values_;
};

/// A step function with all values >= 1; the carrier for exponents.
class ExponentProfile {
public:
  explicit ExponentProfile(StepFn fn);

  const StepFn& fn() const { return fn_; }
  operator const StepFn&() const { return fn_; }
  double operator()(double t) const { return fn_(t); }

  friend bool operator==(const ExponentProfile&, const ExponentProfile&) = default;

private:
  StepFn fn_;
};

double evaluate(const StepFn& f, double t);

/// Sum of value * cell length.
double integrate(const StepFn& f);

/// Sorted union of both breakpoint sets.
Partition merge_partitions(const Partition& a, const Partition& b);

/// Re-expresses f on a partition containing all of f's breakpoints.
StepFn refine_to(const StepFn& f, const Partition& finer);

std::pair<StepFn, StepFn> common_refinement(const StepFn& f, const StepFn& g);

/// 1 on [a,b), 0 elsewhere; requires 0 <= a < b <= 1.
StepFn indicator(double a, double b);

/// Pointwise minimum on the common refinement.
StepFn pointwise_min(const StepFn& f, const StepFn& g);

/// True iff f <= g on every cell of the common refinement.
bool pointwise_le(const StepFn& f, const StepFn& g);

/// Distance from t to the nearest breakpoint of f.
double distance_to_breakpoint(const StepFn& f, double t);

} // namespace varlex
