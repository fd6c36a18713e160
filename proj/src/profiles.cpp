#include "varlex/profiles.hpp"

#include "varlex/error.hpp"

#include <cmath>
#include <string>

namespace varlex {

Partition geometric_partition(const GeometricGrid& grid) {
  if (grid.depth < 1 || grid.depth > 1000)
    throw DomainError("grid depth must lie in [1, 1000]");
  if (grid.octave_cells < 1)
    throw DomainError("octave_cells must be positive");
  std::vector<double> bp;
  bp.reserve(static_cast<std::size_t>(grid.depth) * grid.octave_cells + 2);
  bp.push_back(0.0);
  const double step = 1.0 / grid.octave_cells;
  for (int j = grid.depth - 1; j >= 0; --j) {
    double lo = std::ldexp(1.0, -(j + 1));
    bp.push_back(lo);
    for (int i = 1; i < grid.octave_cells; ++i)
      bp.push_back(lo * (1.0 + i * step));
  }
  bp.push_back(1.0);
  return Partition(std::move(bp));
}

StepFn sample_right_endpoint(const Partition& partition,
                             const std::function<double(double)>& f) {
  std::vector<double> v(partition.cells());
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = f(partition.right(i));
  return StepFn(partition, std::move(v));
}

double log_e_over(double t) { return 1.0 - std::log(t); }

StepFn log_minorant(const GeometricGrid& grid) {
  return sample_right_endpoint(geometric_partition(grid), log_e_over);
}

StepFn sqrt_log_minorant(const GeometricGrid& grid) {
  return sample_right_endpoint(geometric_partition(grid),
                               [](double t) { return std::sqrt(log_e_over(t)); });
}

ExponentProfile generate_profile(std::string_view spec, const GeometricGrid& grid) {
  if (spec == "log")
    return ExponentProfile(log_minorant(grid));
  if (spec == "sqrtlog")
    return ExponentProfile(sqrt_log_minorant(grid));
  if (spec.starts_with("const:")) {
    std::string num(spec.substr(6));
    std::size_t used = 0;
    double p0 = 0.0;
    try {
      p0 = std::stod(num, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != num.size())
      throw ParseError("bad constant in profile spec '" + std::string(spec) + "'");
    if (!(p0 >= 1.0) || !std::isfinite(p0))
      throw DomainError("constant exponent must be finite and >= 1");
    return ExponentProfile(StepFn::constant(p0));
  }
  throw ParseError("unknown profile '" + std::string(spec) + "' (expected log, sqrtlog, const:<p>)");
}

} // namespace varlex
