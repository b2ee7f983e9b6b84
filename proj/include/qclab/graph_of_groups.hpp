#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qclab/flip_complex.hpp"
#include "qclab/sampling.hpp"

namespace qclab {

/// Element (word, fiber^n) of a vertex group pi_1(spine, v0) x Z.
struct VertexElement {
  int piece = 0;
  Walk word;  // closed reduced walk at the base vertex
  std::int64_t fiber = 0;
  friend bool operator==(const VertexElement&, const VertexElement&) = default;
};

/// Stable letter of a gluing. Sign +1 travels from the gluing's "from"
/// piece to its "to" piece.
struct StableLetter {
  int gluing = 0;
  int sign = 1;
  friend bool operator==(const StableLetter&, const StableLetter&) = default;
};

using Syllable = std::variant<VertexElement, StableLetter>;

struct GroupWord {
  std::vector<Syllable> syllables;
  int stable_count() const;
  bool empty() const { return syllables.empty(); }
  friend bool operator==(const GroupWord&, const GroupWord&) = default;
};

struct NormalForm {
  GroupWord reduced;
  int stable_count = 0;
  GroupWord conjugator;  // reduced = conjugator * input * conjugator^-1
};

struct QIReport {
  double L = 1;
  double C = 0;
  int sample_radius = 0;
  std::size_t samples = 0;
  double max_upper_residual = 0;  // max of d_T - (L d_H + C), <= 0
  double max_lower_residual = 0;  // max of (d_H / L - C) - d_T, <= 0
  double mean_ratio = 0;          // mean d_T / d_H over nontrivial samples
};

/// A generator fixes a vertex of the dual tree.
class BoundedOrbitError : public std::runtime_error {
 public:
  BoundedOrbitError(const std::string& what, int generator, int max_distance)
      : std::runtime_error(what), generator(generator), max_distance(max_distance) {}
  int generator;
  int max_distance;  // largest dual distance reached by its powers
};

/// Words in the fundamental group of the graph of groups, based at piece 0.
/// Arbitrary syllable sequences are read through a BFS maximal tree of the
/// gluing graph: an element of piece p becomes P_p x P_p^-1 and a stable
/// letter from u to v becomes P_u t P_v^-1, where P_p is the tree path from
/// piece 0 to p.
class GraphOfGroups {
 public:
  explicit GraphOfGroups(const FlipComplex& fc);

  const FlipComplex& complex() const { return *fc_; }

  /// Syntax: syllables separated by ';'. "vP: <edges> | f N" is a vertex
  /// element of piece P; "tG" or "tG^-1" a stable letter.
  GroupWord parse(std::string_view text) const;
  std::string format(const GroupWord& w) const;

  int tail_piece(const StableLetter& t) const;
  int head_piece(const StableLetter& t) const;
  int exit_cycle(const StableLetter& t) const;
  int entry_cycle(const StableLetter& t) const;

  VertexElement fiber(int piece) const { return {piece, {}, 1}; }
  /// tree_path · cycle · tree_path^-1 in the piece's vertex group.
  VertexElement boundary(int piece, int cycle) const;
  /// Returns (k, n) when x = boundary^k · fiber^n.
  std::optional<std::pair<std::int64_t, std::int64_t>> edge_group_coords(const VertexElement& x, int cycle) const;

  GroupWord expand(const GroupWord& w) const;
  GroupWord multiply(const GroupWord& a, const GroupWord& b) const;
  GroupWord inverse(const GroupWord& w) const;
  GroupWord power(const GroupWord& w, int n) const;

  NormalForm britton_reduce(const GroupWord& w) const;
  NormalForm cyclic_reduce(const GroupWord& w) const;
  int translation_length(const GroupWord& w) const;
  bool is_identity(const GroupWord& w) const;
  /// Throws std::invalid_argument for the identity.
  bool is_morse(const GroupWord& w) const;

  /// Word carrying the root frame to the standard frame of `copy`.
  GroupWord address_word(const PieceCopy& copy) const;
  PointCoord act_on_point(const GroupWord& w, const PointCoord& x) const;

 private:
  struct Frame {
    PieceCopy copy;
    Walk u;
    std::int64_t n = 0;
  };
  void step(Frame& f, const Syllable& s) const;
  void validate(const VertexElement& x) const;

  const FlipComplex* fc_;
  std::vector<GroupWord> tree_path_;  // P_p
};

/// Reduced words over gens^{±1} (letters +-(i+1)) of length 1..radius.
std::vector<std::vector<int>> reduced_generator_words(int generators, int radius);
GroupWord evaluate(const GraphOfGroups& g, const std::vector<GroupWord>& gens, const std::vector<int>& letters);

/// Random syllable sequence (vertex elements and stable letters).
GroupWord random_group_word(const GraphOfGroups& g, Rng& rng, int syllables);

QIReport orbit_qi_test(const GraphOfGroups& g, const std::vector<GroupWord>& gens, int radius,
                       const PointCoord& basepoint);
bool free_basis_check(const GraphOfGroups& g, const std::vector<GroupWord>& gens, int radius);

}  // namespace qclab
