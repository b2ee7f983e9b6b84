#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace qclab {

/// An edge of a spine graph traversed in one direction.
struct DirEdge {
  int edge = 0;
  bool inverse = false;

  DirEdge inv() const { return {edge, !inverse}; }
  friend bool operator==(const DirEdge&, const DirEdge&) = default;
  // Generator order: edge index first, forward before inverse.
  friend auto operator<=>(const DirEdge&, const DirEdge&) = default;
};

using Walk = std::vector<DirEdge>;

Walk inverse(const Walk& w);
/// Free reduction of a concatenation (no check that the walk is contiguous).
Walk reduce(const Walk& w);
Walk concat_reduce(const Walk& a, const Walk& b);
std::size_t common_prefix(const Walk& a, const Walk& b);

/// Finite graph with unit-length labelled edges. Vertex 0 is the base vertex.
class Spine {
 public:
  struct Edge {
    int from = 0;
    int to = 0;
    std::string label;
  };

  Spine() = default;
  Spine(int vertices, std::vector<Edge> edges);

  int vertex_count() const { return vertices_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const Edge& edge(int i) const { return edges_.at(i); }
  int betti_number() const { return edge_count() - vertices_ + 1; }
  bool connected() const;

  int tail(DirEdge e) const { return e.inverse ? edges_[e.edge].to : edges_[e.edge].from; }
  int head(DirEdge e) const { return e.inverse ? edges_[e.edge].from : edges_[e.edge].to; }
  /// Endpoint of a walk starting at `start`.
  int walk_end(int start, const Walk& w) const;
  /// True when consecutive edges share endpoints, starting at `start`.
  bool walk_contiguous(int start, const Walk& w) const;

  /// Edge labels such as "a" or "a^-1" (a leading '-' is also accepted).
  DirEdge parse_dir_edge(std::string_view token) const;
  Walk parse_walk(std::string_view text) const;
  std::string format(const Walk& w) const;

  /// Tree path from the base vertex to `v` in a fixed BFS spanning tree.
  const Walk& tree_path(int v) const { return tree_paths_.at(v); }

  /// All reduced walks from `start` with length at most `max_len`, in
  /// shortlex order.
  std::vector<Walk> reduced_walks(int start, int max_len) const;

 private:
  int vertices_ = 0;
  std::vector<Edge> edges_;
  std::vector<Walk> tree_paths_;
};

/// Shortlex comparison used for canonical representatives.
bool shortlex_less(const Walk& a, const Walk& b);

}  // namespace qclab
