#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qclab/graph_of_groups.hpp"
#include "qclab/special_paths.hpp"

namespace qclab {

/// Portion of the subset inside one piece copy.
struct Slice {
  PieceCopy copy;
  PointCoord center;
  double radius = 0;
  double diameter = 0;
  std::vector<PointCoord> points;                 // breakpoints of the subset in this copy
  std::vector<std::pair<int, int>> segments;      // index pairs into `points`
};

struct WallDisc {
  WallId wall;
  PointCoord center;
  double radius = 0;
};

enum class ProjectionPolicy { SliceCenter, NearestPoint };

/// A subset of the universal cover given by finitely many pieces of it.
/// Morse-axis subsets project to stored slice centers; a wall plane projects
/// each point to its nearest point on the plane.
struct SubsetModel {
  ProjectionPolicy policy = ProjectionPolicy::SliceCenter;
  std::vector<PieceCopy> subtree;
  std::vector<Slice> slices;  // parallel to subtree
  std::vector<WallDisc> wall_discs;
  double delta = 0;
  double step = 0;  // largest distance between centers of adjacent slices
  // Wall plane only.
  std::optional<WallId> plane;
  double extent = 0;

  int slice_index(const PieceCopy& copy) const;
};

struct ContractionParams {
  double C = 1;
  double k = 1;
  double cbar = 1;
  double R() const { return cbar * cbar * (1 + 2 * C); }
};

struct ContractionWitness {
  std::size_t sample = 0;
  PointCoord x, y;
  PointCoord px, py;
  double projection_distance = 0;
  double path_distance = 0;
  std::string condition;
};

struct ContractionReport {
  bool passed = true;
  bool vacuous = false;
  std::optional<ContractionWitness> witness;
  std::size_t samples = 0;
  std::size_t triggered = 0;  // pairs meeting the premise of condition (2)
  double measuredC = 0;
  std::uint64_t seed = 0;
};

struct BallReport {
  bool passed = true;
  double k_needed = 0;
  std::size_t samples = 0;
  std::size_t skipped = 0;  // empty ball radius
  double max_projection_diameter = 0;
};

struct QuasiconvexityReport {
  double measured = 0;
  double bound = 0;
  std::size_t certified = 0;
  std::size_t discarded = 0;
};

/// Orbit of `basepoint` under g^i, i in [-steps, steps], joined by special paths.
SubsetModel subset_from_morse(const GraphOfGroups& g, const GroupWord& word, const PointCoord& basepoint,
                              int steps);
/// The flat wall plane, sampled within `extent` of the wall origin.
SubsetModel subset_wall_plane(const FlipComplex& fc, const WallId& wall, double extent);

/// 10 delta + step, the contraction constant used for Morse-axis subsets.
double contraction_constant(const SubsetModel& a);

PointCoord ps_projection(const FlipComplex& fc, const PointCoord& x, const SubsetModel& a);

/// Distance from p to the piece geodesic [a, b]; all three lie in `copy`.
double distance_to_segment(const FlipComplex& fc, const PieceCopy& copy, const PointCoord& p,
                           const PointCoord& a, const PointCoord& b);
/// Upper bound on the distance from p to a special path.
double distance_to_path(const FlipComplex& fc, const PointCoord& p, const SpecialPath& path);
/// Upper bound on the distance from p to the subset.
double distance_to_subset(const FlipComplex& fc, const PointCoord& p, const SubsetModel& a);

/// Random pair near the subset; a quarter of the pairs differ only in the fiber.
std::pair<PointCoord, PointCoord> sample_pair_near(const FlipComplex& fc, const SubsetModel& a, Rng& rng);

ContractionReport check_contracting(const FlipComplex& fc, const SubsetModel& a, double C, std::size_t samples,
                                    std::uint64_t seed);
BallReport ball_projection_check(const FlipComplex& fc, const SubsetModel& a, const ContractionParams& params,
                                 std::size_t samples, std::uint64_t seed);
QuasiconvexityReport quasiconvexity_radius(const FlipComplex& fc, const SubsetModel& a, double lambda,
                                           const ContractionParams& params, std::size_t samples,
                                           std::uint64_t seed);

}  // namespace qclab
