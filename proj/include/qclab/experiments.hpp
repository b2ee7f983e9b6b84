#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <json.hpp>

#include "qclab/graph_of_groups.hpp"
#include "qclab/special_paths.hpp"

namespace qclab {

nlohmann::json to_json(const FlipComplex& fc, const PointCoord& x);
nlohmann::json to_json(const FlipComplex& fc, const PieceCopy& c);

struct SlideWitness {
  std::size_t sample = 0;
  PointCoord x, y, z;
  Rational defect;
};

struct SlideAudit {
  std::size_t samples = 0;
  std::size_t violations = 0;
  Rational max_defect{0};
  std::optional<SlideWitness> witness;  // first violating sample
};

/// Random (x, y on a wall, z across it) triples; sample i uses stream i of `seed`.
SlideAudit slide_audit(const FlipComplex& fc, std::size_t samples, std::uint64_t seed);

struct PathAxiomAudit {
  std::size_t samples = 0;
  std::size_t breakpoints = 0;
  std::size_t restriction_failures = 0;
  std::size_t reversal_failures = 0;
  std::optional<std::size_t> witness;  // first failing sample
};

/// Restriction to every pair of breakpoints and reversal, compared coordinate-exactly.
PathAxiomAudit path_axiom_audit(const FlipComplex& fc, std::size_t samples, int max_walls, std::uint64_t seed);

/// Dual-tree translation length from the displacement of a tree vertex:
/// max(0, d(v, g^2 v) - d(v, g v)).
int displacement_translation_length(const GraphOfGroups& g, const GroupWord& w);

struct MorseAudit {
  std::size_t words = 0;
  std::size_t morse = 0;
  std::size_t disagreements = 0;
  std::size_t power_failures = 0;
  std::optional<GroupWord> witness;
};

/// Random words of 1..max_syllables syllables: is_morse against the
/// displacement oracle, and translation_length(w^n) = n tau for n <= 5.
MorseAudit morse_audit(const GraphOfGroups& g, std::size_t words, int max_syllables, std::uint64_t seed);

}  // namespace qclab
