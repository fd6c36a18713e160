#include "varlex/measure.hpp"

#include "varlex/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace varlex {

Partition::Partition(std::vector<double> breakpoints) : bp_(std::move(breakpoints)) {
  if (bp_.size() < 2)
    throw ValidationError("partition needs at least two breakpoints");
  if (bp_.front() != 0.0 || bp_.back() != 1.0)
    throw ValidationError("partition must start at 0 and end at 1");
  for (std::size_t i = 0; i + 1 < bp_.size(); ++i) {
    if (!(bp_[i] < bp_[i + 1]))
      throw ValidationError("partition breakpoints not strictly increasing at index " +
                            std::to_string(i));
  }
}

Partition Partition::unit() { return Partition({0.0, 1.0}); }

std::size_t Partition::locate(double t) const {
  if (!(t >= 0.0 && t < 1.0))
    throw DomainError("evaluation point outside [0,1): " + std::to_string(t));
  auto it = std::upper_bound(bp_.begin(), bp_.end(), t);
  return static_cast<std::size_t>(it - bp_.begin()) - 1;
}

std::size_t Partition::locate_clamped(double t) const {
  if (t >= 1.0)
    return cells() - 1;
  return locate(t);
}

StepFn::StepFn(Partition partition, std::vector<double> values)
    : partition_(std::move(partition)), values_(std::move(values)) {
  if (values_.size() != partition_.cells())
    throw ValidationError("step function has " + std::to_string(values_.size()) +
                          " values for " + std::to_string(partition_.cells()) + " cells");
  for (double v : values_) {
    if (!std::isfinite(v) || v < 0.0)
      throw ValidationError("step function values must be finite and non-negative");
  }
}

StepFn StepFn::constant(double v) { return StepFn(Partition::unit(), {v}); }

double StepFn::max_value() const { return *std::max_element(values_.begin(), values_.end()); }

double StepFn::min_value() const { return *std::min_element(values_.begin(), values_.end()); }

bool StepFn::is_non_increasing() const {
  return std::adjacent_find(values_.begin(), values_.end(), std::less<>()) == values_.end();
}

bool StepFn::is_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

StepFn StepFn::scaled(double c) const {
  if (!(c >= 0.0) || !std::isfinite(c))
    throw DomainError("scale factor must be finite and non-negative");
  std::vector<double> v(values_);
  for (double& x : v)
    x *= c;
  return StepFn(partition_, std::move(v));
}

ExponentProfile::ExponentProfile(StepFn fn) : fn_(std::move(fn)) {
  for (double v : fn_.values()) {
    if (v < 1.0)
      throw ValidationError("exponent values must be >= 1");
  }
}

double evaluate(const StepFn& f, double t) { return f(t); }

double integrate(const StepFn& f) {
  double sum = 0.0;
  for (std::size_t i = 0; i < f.cells(); ++i)
    sum += f.value(i) * f.length(i);
  return sum;
}

Partition merge_partitions(const Partition& a, const Partition& b) {
  if (a == b)
    return a;
  std::vector<double> out;
  out.reserve(a.breakpoints().size() + b.breakpoints().size());
  std::set_union(a.breakpoints().begin(), a.breakpoints().end(), b.breakpoints().begin(),
                 b.breakpoints().end(), std::back_inserter(out));
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return Partition(std::move(out));
}

StepFn refine_to(const StepFn& f, const Partition& finer) {
  if (f.partition() == finer)
    return f;
  std::vector<double> values(finer.cells());
  auto src = f.breakpoints();
  std::size_t j = 0;
  for (std::size_t i = 0; i < finer.cells(); ++i) {
    double x = finer.left(i);
    while (j + 1 < f.cells() && src[j + 1] <= x)
      ++j;
    values[i] = f.value(j);
  }
  return StepFn(finer, std::move(values));
}

std::pair<StepFn, StepFn> common_refinement(const StepFn& f, const StepFn& g) {
  Partition merged = merge_partitions(f.partition(), g.partition());
  return {refine_to(f, merged), refine_to(g, merged)};
}

StepFn indicator(double a, double b) {
  if (!(a >= 0.0 && a < b && b <= 1.0))
    throw DomainError("indicator requires 0 <= a < b <= 1");
  std::vector<double> bp{0.0};
  std::vector<double> v;
  if (a > 0.0) {
    bp.push_back(a);
    v.push_back(0.0);
  }
  v.push_back(1.0);
  if (b < 1.0) {
    bp.push_back(b);
    v.push_back(0.0);
  }
  bp.push_back(1.0);
  return StepFn(std::move(bp), std::move(v));
}

StepFn pointwise_min(const StepFn& f, const StepFn& g) {
  auto [ff, gg] = common_refinement(f, g);
  std::vector<double> v(ff.cells());
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = std::min(ff.value(i), gg.value(i));
  return StepFn(ff.partition(), std::move(v));
}

bool pointwise_le(const StepFn& f, const StepFn& g) {
  auto [ff, gg] = common_refinement(f, g);
  for (std::size_t i = 0; i < ff.cells(); ++i) {
    if (ff.value(i) > gg.value(i))
      return false;
  }
  return true;
}

double distance_to_breakpoint(const StepFn& f, double t) {
  auto bp = f.breakpoints();
  auto it = std::lower_bound(bp.begin(), bp.end(), t);
  double best = 2.0;
  if (it != bp.end())
    best = std::min(best, *it - t);
  if (it != bp.begin())
    best = std::min(best, t - *std::prev(it));
  return best;
}

} // namespace varlex
