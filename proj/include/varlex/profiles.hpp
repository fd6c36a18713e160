#pragma once

#include "varlex/measure.hpp"

#include <functional>
#include <string_view>

namespace varlex {

/// Dyadic octaves [2^-(j+1), 2^-j] for j < depth, each split uniformly into
/// octave_cells pieces, plus a bottom cell [0, 2^-depth). With octave_cells a
/// power of two every breakpoint is an exact dyadic rational.
struct GeometricGrid {
  int depth = 40;
  int octave_cells = 16;

  friend bool operator==(const GeometricGrid&, const GeometricGrid&) = default;
};

Partition geometric_partition(const GeometricGrid& grid);

/// Samples a function that is decreasing on (0,1] at the right endpoint of
/// each cell, giving a pointwise minorant.
StepFn sample_right_endpoint(const Partition& partition,
                             const std::function<double(double)>& f);

/// ln(e/t) = 1 - ln t.
double log_e_over(double t);

StepFn log_minorant(const GeometricGrid& grid);
StepFn sqrt_log_minorant(const GeometricGrid& grid);

/// Built-in profiles: "log", "sqrtlog", "const:<p0>". Throws ParseError on an
/// unknown name.
ExponentProfile generate_profile(std::string_view spec, const GeometricGrid& grid);

} // namespace varlex
