#include "varlex/interleave.hpp"

#include "varlex/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace varlex {

void DyadicRect::validate() const {
  if (levels.empty() || levels.size() != indices.size())
    throw ValidationError("dyadic rectangle needs matching, non-empty levels and indices");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] < 0 || levels[i] > 63)
      throw ValidationError("dyadic level out of range on axis " + std::to_string(i));
    if (levels[i] < 64 && indices[i] >> levels[i] != 0)
      throw ValidationError("dyadic index out of range on axis " + std::to_string(i));
  }
}

double DyadicRect::measure() const {
  int total = 0;
  for (int m : levels)
    total += m;
  return std::ldexp(1.0, -total);
}

bool DyadicRect::is_cube() const {
  return std::adjacent_find(levels.begin(), levels.end(), std::not_equal_to<>()) == levels.end();
}

int DyadicRect::max_level() const { return *std::max_element(levels.begin(), levels.end()); }

DyadicRect DyadicRect::cube(int n, int level, std::span<const std::uint64_t> idx) {
  DyadicRect r{std::vector<int>(n, level), {idx.begin(), idx.end()}};
  r.validate();
  return r;
}

double DyadicInterval::lo() const { return std::ldexp(static_cast<double>(index), -level); }

double DyadicInterval::hi() const {
  return std::ldexp(static_cast<double>(index + 1), -level);
}

GridExponentND::GridExponentND(ExponentProfile p_hat, int dimension, int bits)
    : p_hat_(std::move(p_hat)), n_(dimension), bits_(bits == 0 ? default_bits(dimension) : bits) {
  if (n_ < 1 || n_ > kMantissaBits)
    throw DomainError("dimension must lie in [1, 52]");
  if (bits_ < 1 || n_ * bits_ > kMantissaBits)
    throw BudgetError("bit budget n*B must not exceed 52");
}

double GridExponentND::operator()(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != n_)
    throw DomainError("point dimension mismatch");
  return p_hat_(interleave_point(x, bits_));
}

std::uint64_t interleave_indices(std::span<const std::uint64_t> indices, int level) {
  const int n = static_cast<int>(indices.size());
  if (n * level > 63)
    throw BudgetError("interleaved index exceeds 63 bits");
  std::uint64_t out = 0;
  for (int j = 0; j < level; ++j) {
    for (int i = 0; i < n; ++i) {
      std::uint64_t digit = (indices[i] >> (level - 1 - j)) & 1u;
      out = (out << 1) | digit;
    }
  }
  return out;
}

std::vector<std::uint64_t> deinterleave_index(std::uint64_t image, int n, int level) {
  if (n * level > 63)
    throw BudgetError("interleaved index exceeds 63 bits");
  std::vector<std::uint64_t> idx(n, 0);
  const int total = n * level;
  for (int pos = 0; pos < total; ++pos) {
    std::uint64_t digit = (image >> (total - 1 - pos)) & 1u;
    idx[pos % n] = (idx[pos % n] << 1) | digit;
  }
  return idx;
}

double interleave_point(std::span<const double> x, int bits) {
  const int n = static_cast<int>(x.size());
  if (n < 1 || bits < 1 || n * bits > kMantissaBits)
    throw BudgetError("interleave_point requires n*bits <= 52");
  std::vector<std::uint64_t> digits(n);
  for (int i = 0; i < n; ++i) {
    if (!(x[i] >= 0.0 && x[i] < 1.0))
      throw DomainError("coordinate outside [0,1)");
    // Truncation: ldexp is exact, floor drops the remaining digits.
    digits[i] = static_cast<std::uint64_t>(std::floor(std::ldexp(x[i], bits)));
  }
  return std::ldexp(static_cast<double>(interleave_indices(digits, bits)), -n * bits);
}

DyadicInterval cube_image(const DyadicRect& cube) {
  cube.validate();
  if (!cube.is_cube())
    throw ValidationError("cube_image needs equal levels on every axis; decompose first");
  const int m = cube.levels.front();
  return {cube.dimension() * m, interleave_indices(cube.indices, m)};
}

std::vector<DyadicRect> decompose_to_cubes(const DyadicRect& rect) {
  rect.validate();
  const int n = rect.dimension();
  const int m = rect.max_level();
  int extra = 0;
  for (int lv : rect.levels)
    extra += m - lv;
  if (extra > 40)
    throw BudgetError("rectangle decomposes into more than 2^40 cubes");
  std::vector<DyadicRect> out;
  out.reserve(std::size_t{1} << extra);
  std::vector<std::uint64_t> sub(n, 0);
  for (std::uint64_t c = 0; c < (std::uint64_t{1} << extra); ++c) {
    // Mixed-radix split of c across the axes, last axis fastest.
    std::uint64_t rest = c;
    for (int i = n - 1; i >= 0; --i) {
      int s = m - rect.levels[i];
      std::uint64_t part = rest & ((std::uint64_t{1} << s) - 1);
      rest >>= s;
      sub[i] = (rect.indices[i] << s) | part;
    }
    out.push_back(DyadicRect{std::vector<int>(n, m), sub});
  }
  return out;
}

std::vector<ModularTerm> indicator_terms(const ExponentProfile& p,
                                         std::span<const DyadicInterval> parts) {
  const StepFn& f = p.fn();
  auto bp = f.breakpoints();
  std::vector<ModularTerm> terms;
  for (const auto& part : parts) {
    double lo = part.lo();
    double hi = part.hi();
    for (std::size_t j = f.partition().locate(lo); j < f.cells() && bp[j] < hi; ++j) {
      double len = std::min(hi, bp[j + 1]) - std::max(lo, bp[j]);
      if (len > 0.0)
        terms.push_back({1.0, f.value(j), len});
    }
  }
  return terms;
}

NormResult interval_union_norm(const ExponentProfile& p, std::span<const DyadicInterval> parts,
                               double tol) {
  auto terms = indicator_terms(p, parts);
  return luxemburg_norm(terms, tol);
}

NormResult rect_norm(const GridExponentND& pbar, const DyadicRect& rect, double tol) {
  rect.validate();
  if (rect.dimension() != pbar.dimension())
    throw DomainError("rectangle dimension does not match exponent dimension");
  if (rect.max_level() > pbar.bits())
    throw BudgetError("rectangle level " + std::to_string(rect.max_level()) +
                      " exceeds bit budget " + std::to_string(pbar.bits()));
  std::vector<DyadicInterval> images;
  for (const auto& cube : decompose_to_cubes(rect))
    images.push_back(cube_image(cube));
  std::sort(images.begin(), images.end(),
            [](const DyadicInterval& a, const DyadicInterval& b) { return a.index < b.index; });
  return interval_union_norm(pbar.p_hat(), images, tol);
}

} // namespace varlex
