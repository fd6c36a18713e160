#pragma once

// Binary digit interleaving rho: [0,1)^n -> [0,1),
//   rho(x) = 0.a_11 a_21 ... a_n1 a_12 a_22 ... a_n2 ...
// where x_i = 0.a_i1 a_i2 ... (terminating expansion). rho maps each
// equal-level dyadic cube onto a dyadic interval of the same measure, which
// reduces every n-D indicator norm of pbar = p_hat o rho to a 1-D one.

#include "varlex/measure.hpp"
#include "varlex/norms.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace varlex {

inline constexpr int kMantissaBits = 52;

/// Product of [k_i 2^-m_i, (k_i + 1) 2^-m_i) over the axes.
struct DyadicRect {
  std::vector<int> levels;
  std::vector<std::uint64_t> indices;

  /// Throws ValidationError unless sizes agree, 0 <= m_i <= 63 and
  /// k_i < 2^m_i.
  void validate() const;

  int dimension() const { return static_cast<int>(levels.size()); }
  double measure() const;
  bool is_cube() const;
  int max_level() const;

  static DyadicRect cube(int n, int level, std::span<const std::uint64_t> indices);

  friend bool operator==(const DyadicRect&, const DyadicRect&) = default;
};

struct DyadicInterval {
  int level = 0;
  std::uint64_t index = 0;

  double lo() const;
  double hi() const;

  friend bool operator==(const DyadicInterval&, const DyadicInterval&) = default;
};

/// pbar(x) = p_hat(rho(x)) with rho truncated to `bits` digits per axis.
class GridExponentND {
public:
  /// bits = 0 selects floor(52 / n).
  GridExponentND(ExponentProfile p_hat, int dimension, int bits = 0);

  int dimension() const { return n_; }
  int bits() const { return bits_; }
  const ExponentProfile& p_hat() const { return p_hat_; }

  double operator()(std::span<const double> x) const;

private:
  ExponentProfile p_hat_;
  int n_;
  int bits_;
};

inline int default_bits(int dimension) { return kMantissaBits / dimension; }

double interleave_point(std::span<const double> x, int bits);

/// Interleaves the index digits of equal-length integer coordinates.
std::uint64_t interleave_indices(std::span<const std::uint64_t> indices, int level);

/// Inverse of interleave_indices.
std::vector<std::uint64_t> deinterleave_index(std::uint64_t image, int n, int level);

/// Image of an equal-level cube; level n*m must not exceed 63.
DyadicInterval cube_image(const DyadicRect& cube);

/// Splits R into equal-level cubes at its finest axis level.
std::vector<DyadicRect> decompose_to_cubes(const DyadicRect& rect);

/// Modular terms of the indicator of a union of disjoint intervals.
std::vector<ModularTerm> indicator_terms(const ExponentProfile& p,
                                         std::span<const DyadicInterval> parts);

/// Luxemburg norm of the indicator of a union of disjoint intervals against a
/// 1-D exponent.
NormResult interval_union_norm(const ExponentProfile& p, std::span<const DyadicInterval> parts,
                               double tol = kDefaultNormTol);

/// ||chi_R||_{pbar} through the measure-preserving 1-D reduction.
NormResult rect_norm(const GridExponentND& pbar, const DyadicRect& rect,
                     double tol = kDefaultNormTol);

} // namespace varlex
