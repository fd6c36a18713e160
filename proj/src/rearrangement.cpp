#include "varlex/rearrangement.hpp"

#include "varlex/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace varlex {

namespace {

// Cell indices in descending-value order, stable on ties.
std::vector<std::size_t> descending_order(const StepFn& f) {
  std::vector<std::size_t> order(f.cells());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return f.value(a) > f.value(b); });
  return order;
}

// Left ends of the rearranged cells, indexed by position in `order`.
std::vector<double> rearranged_starts(const StepFn& f, std::span<const std::size_t> order) {
  std::vector<double> starts(order.size() + 1);
  starts[0] = 0.0;
  for (std::size_t k = 0; k < order.size(); ++k)
    starts[k + 1] = starts[k] + f.length(order[k]);
  starts.back() = 1.0;
  return starts;
}

std::vector<double> merged_levels(const StepFn& f, const StepFn& g) {
  std::vector<double> levels(f.values().begin(), f.values().end());
  levels.insert(levels.end(), g.values().begin(), g.values().end());
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  return levels;
}

} // namespace

TransportMap::TransportMap(std::vector<TransportPiece> pieces) : pieces_(std::move(pieces)) {
  if (pieces_.empty())
    throw ValidationError("transport map has no pieces");
  std::sort(pieces_.begin(), pieces_.end(),
            [](const TransportPiece& a, const TransportPiece& b) { return a.src_lo < b.src_lo; });
  if (pieces_.front().src_lo != 0.0 || pieces_.back().src_hi != 1.0)
    throw ValidationError("transport sources must tile [0,1)");
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const auto& p = pieces_[i];
    if (!(p.src_lo < p.src_hi))
      throw ValidationError("transport piece with empty source interval");
    if (i + 1 < pieces_.size() && p.src_hi != pieces_[i + 1].src_lo)
      throw ValidationError("transport sources overlap or leave a gap");
    if (p.dst < -kTransportSlack || p.dst_hi() > 1.0 + kTransportSlack)
      throw ValidationError("transport target outside [0,1)");
  }
  std::vector<const TransportPiece*> by_dst;
  by_dst.reserve(pieces_.size());
  for (const auto& p : pieces_)
    by_dst.push_back(&p);
  std::sort(by_dst.begin(), by_dst.end(),
            [](const TransportPiece* a, const TransportPiece* b) { return a->dst < b->dst; });
  double cursor = 0.0;
  for (const auto* p : by_dst) {
    if (std::abs(p->dst - cursor) > kTransportSlack)
      throw ValidationError("transport targets overlap or leave a gap");
    cursor = p->dst_hi();
  }
  if (std::abs(cursor - 1.0) > kTransportSlack)
    throw ValidationError("transport targets do not cover [0,1)");
}

TransportMap TransportMap::identity() { return TransportMap({{0.0, 1.0, 0.0}}); }

double TransportMap::operator()(double t) const {
  if (!(t >= 0.0 && t < 1.0))
    throw DomainError("transport argument outside [0,1)");
  auto it = std::upper_bound(pieces_.begin(), pieces_.end(), t,
                             [](double x, const TransportPiece& p) { return x < p.src_lo; });
  const auto& p = *std::prev(it);
  return p.dst + (t - p.src_lo);
}

double distribution_function(const StepFn& f, double level) {
  if (!(level >= 0.0))
    throw DomainError("distribution function level must be >= 0");
  double m = 0.0;
  for (std::size_t i = 0; i < f.cells(); ++i) {
    if (f.value(i) > level)
      m += f.length(i);
  }
  return m;
}

StepFn decreasing_rearrangement(const StepFn& f) {
  if (f.is_non_increasing())
    return f;
  auto order = descending_order(f);
  auto starts = rearranged_starts(f, order);
  // Runs of equal values collapse into one cell.
  std::vector<double> bp{0.0};
  std::vector<double> values;
  for (std::size_t k = 0; k < order.size(); ++k) {
    double v = f.value(order[k]);
    if (!values.empty() && values.back() == v) continue;
    if (!values.empty()) bp.push_back(starts[k]);
    values.push_back(v);
  }
  bp.push_back(1.0);
  return StepFn(std::move(bp), std::move(values));
}

bool equimeasurable(const StepFn& f, const StepFn& g, double tolerance) {
  if (!(tolerance >= 0.0))
    throw DomainError("tolerance must be >= 0");
  for (double s : merged_levels(f, g)) {
    if (std::abs(distribution_function(f, s) - distribution_function(g, s)) > tolerance)
      return false;
  }
  return true;
}

bool rearrangement_dominated(const StepFn& f, const StepFn& g, double tolerance) {
  for (double s : merged_levels(f, g)) {
    if (distribution_function(f, s) > distribution_function(g, s) + tolerance)
      return false;
  }
  return true;
}

TransportMap sorting_transport(const StepFn& f) {
  auto order = descending_order(f);
  auto starts = rearranged_starts(f, order);
  std::vector<TransportPiece> pieces(f.cells());
  for (std::size_t k = 0; k < order.size(); ++k) {
    std::size_t i = order[k];
    pieces[i] = {f.partition().left(i), f.partition().right(i), starts[k]};
  }
  return TransportMap(std::move(pieces));
}

StepFn pull_back(const StepFn& p_star, const TransportMap& omega) {
  auto pbp = p_star.breakpoints();
  std::vector<double> bp{0.0};
  std::vector<double> values;
  for (const auto& piece : omega.pieces()) {
    const double lo = piece.dst;
    const double hi = piece.dst_hi();
    // Cell of p_star holding the image of the piece's left end.
    std::size_t j = p_star.partition().locate_clamped(std::max(0.0, lo));
    if (piece.src_lo > 0.0)
      bp.push_back(piece.src_lo);
    values.push_back(p_star.value(j));
    for (++j; j < p_star.cells() && pbp[j] < hi; ++j) {
      double x = piece.src_lo + (pbp[j] - lo);
      if (x >= piece.src_hi)
        break;
      if (x <= bp.back()) {
        // rounding collapsed the previous cell to zero width
        values.back() = p_star.value(j);
        continue;
      }
      bp.push_back(x);
      values.push_back(p_star.value(j));
    }
  }
  bp.push_back(1.0);
  return StepFn(std::move(bp), std::move(values));
}

} // namespace varlex
