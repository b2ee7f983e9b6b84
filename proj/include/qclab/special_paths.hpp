#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "qclab/flip_complex.hpp"
#include "qclab/sampling.hpp"

namespace qclab {

/// Piecewise-geodesic path through the copies M_0..M_n of a dual-tree
/// geodesic. Breakpoints x_0..x_{n+1} are canonical; x_{i+1} lies on the
/// wall between M_i and M_{i+1}, and segment i joins x_i to x_{i+1} in M_i.
struct SpecialPath {
  std::vector<PointCoord> breakpoints;
  std::vector<PieceCopy> copies;
  std::vector<Crossing> walls;
  // Per copy M_i: p_i (entry side, or base of x in M_0) and q_i (exit side,
  // or base of y in M_n), each in M_i's frame.
  std::vector<BasePos> p;
  std::vector<BasePos> q;
};

SpecialPath special_path(const FlipComplex& fc, const PointCoord& x, const PointCoord& y);
double path_length(const FlipComplex& fc, const SpecialPath& path, Metric metric);

/// Dual-tree geodesic between the copies of x and y, with walls that a
/// wall point already lies on removed from either end.
std::vector<Crossing> separating_walls(const FlipComplex& fc, const PointCoord& x, const PointCoord& y);

/// max((n-2) rho, d(x, T_0) + sum of bridges + d(T_last, y)); exact in-piece
/// distance when x and y share a copy. n counts pieces.
double distance_lower_bound(const FlipComplex& fc, const PointCoord& x, const PointCoord& y, double rho);

/// Base distance from a fixed point to the point at arclength s of a line.
struct PointLineGap {
  double c0 = 0;
  double foot = 0;
  double operator()(double s) const;
};

/// Base distance between arclength u on line E and arclength v on line X
/// of one piece. The axes share the E-interval [a_lo, a_hi], mapped onto X
/// by v = b_at_lo + sigma (u - a_lo); disjoint axes give a point interval.
struct LineLineGap {
  double base = 0;  // collars plus tree gap
  double a_lo = 0, a_hi = 0;
  double b_at_lo = 0, b_lo = 0, b_hi = 0;
  int sigma = 1;
  double operator()(double u, double v) const;
};

PointLineGap point_line_gap(const FlipComplex& fc, int piece, const BasePos& p, const WallRef& line);
LineLineGap line_line_gap(const FlipComplex& fc, int piece, const WallRef& e, const WallRef& x);

class OracleBudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OracleOptions {
  double resolution = 0.05;
  double window = 0.25;             // half-width of the lattice window on each wall
  int max_walls = 12;
  std::size_t max_nodes_per_wall = 40000;
};

/// Shortest path in a layered graph: x, y, and on every separating wall the
/// lattice points (multiples of the resolution) inside a fixed window around
/// the continuous optimum, plus that optimum itself. Edges carry exact
/// in-piece L2 lengths.
double approx_distance(const FlipComplex& fc, const PointCoord& x, const PointCoord& y,
                       const OracleOptions& opt = {});

struct SlideResult {
  PointCoord w;
  Rational defect;  // L1
};

/// Replaces y (on the wall between the copies of x and z) by the point of
/// y's fiber line above the projection of x's base to the wall's line.
SlideResult horizontal_slide(const FlipComplex& fc, const PointCoord& x, const PointCoord& y, const PointCoord& z);

struct PairSample {
  PointCoord x;
  PointCoord y;
  int walls = 0;
  double length_l1 = 0;
  double length_l2 = 0;
  double oracle = 0;
  double lower_bound = 0;
};

struct QGReport {
  double kappa = 1;
  std::size_t samples = 0;
  double worst_ratio = 0;
  Metric metric = Metric::L1;
  std::vector<PairSample> rows;
};

/// Random pair whose copies are at dual distance at most max_walls.
std::pair<PointCoord, PointCoord> random_pair(const FlipComplex& fc, Rng& rng, int max_walls);

PairSample measure_pair(const FlipComplex& fc, const PointCoord& x, const PointCoord& y, double rho,
                        const OracleOptions& opt);

QGReport qg_fit(const FlipComplex& fc, std::size_t samples, int max_walls, double resolution,
                std::uint64_t seed, double rho = 0);
/// kappa over the first n rows of a report.
double fit_kappa(const std::vector<PairSample>& rows, std::size_t n);

}  // namespace qclab
