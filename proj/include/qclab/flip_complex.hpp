#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qclab/rational.hpp"
#include "qclab/spine.hpp"

namespace qclab {

/// Raised for malformed or inconsistent manifold descriptions.
class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when the model reaches a state that a validated spec rules out.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct PieceSpec {
  Spine spine;
  std::vector<Walk> boundary_cycles;  // closed walks, each starting at a spine vertex
  Rational base_scale{1};             // length of one spine edge
  Rational fiber_period{1};
  // Distance from the spine tree to each boundary line. Keeps distinct
  // boundary lines disjoint even where their spine axes share edges.
  Rational collar_width{0};
};

struct GluingSpec {
  int from_piece = 0;
  int from_cycle = 0;
  int to_piece = 0;
  int to_cycle = 0;
  Rational sigma{0};
  Rational tau{0};
};

struct FlipManifoldSpec {
  std::vector<PieceSpec> pieces;
  std::vector<GluingSpec> gluings;
};

/// Parses and validates a JSON manifold description.
FlipManifoldSpec load_spec(std::string_view text);
FlipManifoldSpec load_spec_file(const std::string& path);
/// Checks every structural invariant; throws SpecError with a diagnostic.
void validate_spec(const FlipManifoldSpec& spec);
std::string dump_spec(const FlipManifoldSpec& spec);

/// A boundary line of a piece copy: cycle index plus the canonical
/// (shortlex-least) walk from the base vertex in the coset rep·<cycle>.
struct WallRef {
  int cycle = 0;
  Walk rep;
  friend bool operator==(const WallRef&, const WallRef&) = default;
  friend auto operator<=>(const WallRef&, const WallRef&) = default;
};

/// Vertex of the dual tree. The address lists the walls crossed from the
/// root copy (piece 0), each wall expressed in the frame of the copy it
/// leaves. Addresses never cross back through the wall just entered.
struct PieceCopy {
  int piece = 0;
  int entry_cycle = -1;  // cycle of `piece` crossed last; -1 for the root
  std::vector<WallRef> address;
  friend bool operator==(const PieceCopy& a, const PieceCopy& b) { return a.address == b.address; }
  friend auto operator<=>(const PieceCopy& a, const PieceCopy& b) { return a.address <=> b.address; }
};

struct WallId {
  PieceCopy owner;
  WallRef ref;
  friend bool operator==(const WallId&, const WallId&) = default;
};

/// Point of a spine tree: the vertex reached by `walk`, moved `offset`
/// (edge units, in [0,1)) along `edge`. `walk` is the endpoint nearer the
/// base vertex; offset 0 means the vertex itself and `edge` is unused.
struct TreePos {
  Walk walk;
  DirEdge edge{};
  Rational offset{0};
  friend bool operator==(const TreePos&, const TreePos&) = default;
};

/// Point on a boundary line at signed arclength `s` from the line's origin
/// (the vertex `wall.rep`, positive along the cycle).
struct LinePos {
  WallRef wall;
  Rational s{0};
  friend bool operator==(const LinePos&, const LinePos&) = default;
};

using BasePos = std::variant<TreePos, LinePos>;

struct PointCoord {
  PieceCopy copy;
  BasePos base;
  Rational fiber{0};
  friend bool operator==(const PointCoord&, const PointCoord&) = default;
};

enum class Metric { L1, L2 };

struct Projection {
  LinePos foot;
  Rational dist;
};

struct Bridge {
  LinePos p;  // on the first line
  LinePos q;  // on the second line
  Rational length;
};

/// One step of a dual-tree path: crossing `wall_from` (frame of `from`)
/// lands on `wall_to` (frame of `to`).
struct Crossing {
  PieceCopy from;
  PieceCopy to;
  WallRef wall_from;
  WallRef wall_to;
};

/// Where a boundary cycle is glued, seen from its own side.
struct GluingEnd {
  int gluing = 0;
  bool is_from = true;  // the stable letter leaves through this cycle with sign +1
  int partner_piece = 0;
  int partner_cycle = 0;
  // Wall coordinates map (s, t) -> (t + alpha, s + beta) when crossing.
  Rational alpha{0};
  Rational beta{0};
};

struct ModelConstants {
  double rho = 0;
  double delta = 0;
  int radius = 0;
};

class FlipComplex {
 public:
  explicit FlipComplex(FlipManifoldSpec spec);

  const FlipManifoldSpec& spec() const { return spec_; }
  const PieceSpec& piece(int i) const { return spec_.pieces.at(i); }
  int piece_count() const { return static_cast<int>(spec_.pieces.size()); }

  // ---- cycles and walls -------------------------------------------------
  const GluingEnd& gluing_end(int piece, int cycle) const { return ends_.at(piece).at(cycle); }
  int cycle_start(int piece, int cycle) const;
  /// Closed walk at the base vertex conjugating the cycle to it.
  const Walk& boundary_word(int piece, int cycle) const { return cycle_info_.at(piece).at(cycle).word; }
  /// Arclength of one period of the cycle's line.
  Rational line_period(int piece, int cycle) const;

  /// Canonical wall for the coset rep·<cycle>. `shift` is the k with
  /// canonical = reduce(rep · cycle^k).
  WallRef canonical_wall(int piece, int cycle, const Walk& rep, int* shift = nullptr) const;
  /// The wall through which a non-root copy was entered, in its own frame.
  std::optional<WallRef> entry_wall(const PieceCopy& copy) const;
  /// Canonical entry wall used for every copy of `piece` entered via `cycle`
  /// and the exponent m with rep = reduce(tree_path · cycle^m).
  const WallRef& entry_rep(int piece, int cycle, int* m = nullptr) const;

  PieceCopy root() const { return PieceCopy{0, -1, {}}; }
  std::optional<PieceCopy> parent(const PieceCopy& copy) const;
  PieceCopy neighbor_copy(const WallId& wall) const;
  /// Crosses a wall carrying wall coordinates across the flip map.
  Crossing cross(const PieceCopy& copy, const WallRef& wall) const;
  std::vector<Crossing> dual_tree_geodesic(const PieceCopy& a, const PieceCopy& b) const;
  int dual_distance(const PieceCopy& a, const PieceCopy& b) const;

  // ---- base geometry (per piece) ----------------------------------------
  TreePos normalize(TreePos p) const;
  TreePos axis_point(int piece, const WallRef& wall, const Rational& s) const;
  Rational base_distance(int piece, const BasePos& p, const BasePos& q) const;
  Projection project_to_line(int piece, const BasePos& p, const WallRef& wall) const;
  Bridge line_to_line_bridge(int piece, const WallRef& w1, const WallRef& w2) const;
  /// Axis-vertex index range of w1 shared with the axis of w2, if any.
  std::optional<std::pair<long long, long long>> axis_overlap(int piece, const WallRef& w1,
                                                              const WallRef& w2) const;
  /// Arclength of a tree point lying on the wall's axis, if it does.
  std::optional<Rational> axis_coordinate(int piece, const TreePos& p, const WallRef& wall) const;
  /// Left-multiplies a base position by a closed walk at the base vertex.
  BasePos translate(int piece, const Walk& u, const BasePos& p) const;

  // ---- points -------------------------------------------------------------
  /// Wall points are stored in the copy nearer the root.
  PointCoord canonical(PointCoord x) const;
  /// Re-expresses `x` in the frame of `copy`; x must lie in that copy
  /// (or on one of its walls).
  PointCoord express_in(const PointCoord& x, const PieceCopy& copy) const;
  bool lies_in(const PointCoord& x, const PieceCopy& copy) const;
  /// Product-metric distance of two points of the same copy.
  double piece_distance(const PointCoord& a, const PointCoord& b, Metric m) const;

  /// Wall coordinates (arclength, fiber) of a point on the wall.
  std::pair<Rational, Rational> wall_coords(const WallId& wall, const PointCoord& x) const;
  /// Point of the wall with the given wall coordinates, in canonical form.
  PointCoord wall_point(const WallId& wall, const Rational& s, const Rational& t) const;

  /// Minimum distance between distinct boundary lines whose coset reps
  /// have length at most `radius`.
  double estimate_rho(int radius) const;
  /// Longest stretch shared by two distinct boundary axes of one piece
  /// within `radius` (0 when all axes are disjoint).
  Rational max_axis_overlap(int radius) const;

  /// Walks of the cyclic sequence cycle^inf (or its inverse) from the cycle's start.
  DirEdge cycle_edge(int piece, int cycle, long long index) const;

 private:
  struct CycleInfo {
    int start = 0;
    Walk tree;   // tree path from base vertex to start
    Walk word;   // tree · cycle · tree^-1, reduced
    WallRef entry;
    int entry_m = 0;
  };
  struct AxisFoot {
    long long index = 0;  // axis vertex index of the foot
    long long dist = 0;   // edges from the vertex to the foot
  };
  AxisFoot project_vertex(int piece, const Walk& v, const WallRef& wall) const;
  Walk axis_vertex(int piece, const WallRef& wall, long long index) const;
  /// Foot (axis index) and distance, both in edge units.
  std::pair<Rational, Rational> foot_on_axis(int piece, const TreePos& p, const WallRef& wall) const;
  void check_disjoint_lines() const;
  Rational tree_distance(const TreePos& p, const TreePos& q) const;  // edge units
  Rational tree_to_vertex(const TreePos& p, const Walk& v) const;
  TreePos tree_point_of(int piece, const BasePos& p) const;

  FlipManifoldSpec spec_;
  std::vector<std::vector<GluingEnd>> ends_;
  std::vector<std::vector<CycleInfo>> cycle_info_;
};

/// Floor of a rational as an integer.
long long floor_div(const Rational& r);

}  // namespace qclab
