#include "qclab/experiments.hpp"

#include <algorithm>

namespace qclab {

using nlohmann::json;

namespace {

json wall_json(const FlipComplex& fc, int piece, const WallRef& w) {
  return {{"cycle", w.cycle}, {"rep", fc.piece(piece).spine.format(w.rep)}};
}

}  // namespace

json to_json(const FlipComplex& fc, const PieceCopy& c) {
  json address = json::array();
  PieceCopy cur = fc.root();
  for (const auto& w : c.address) {
    address.push_back(wall_json(fc, cur.piece, w));
    cur = fc.cross(cur, w).to;
  }
  return {{"piece", c.piece}, {"address", address}};
}

json to_json(const FlipComplex& fc, const PointCoord& x) {
  json out{{"copy", to_json(fc, x.copy)}, {"fiber", x.fiber.str()}};
  const Spine& sp = fc.piece(x.copy.piece).spine;
  if (const auto* t = std::get_if<TreePos>(&x.base)) {
    json b{{"walk", sp.format(t->walk)}, {"offset", t->offset.str()}};
    if (!t->offset.is_zero()) b["edge"] = sp.format(Walk{t->edge});
    out["tree"] = b;
  } else {
    const auto& l = std::get<LinePos>(x.base);
    out["line"] = {{"wall", wall_json(fc, x.copy.piece, l.wall)}, {"s", l.s.str()}};
  }
  return out;
}

SlideAudit slide_audit(const FlipComplex& fc, std::size_t samples, std::uint64_t seed) {
  std::vector<SlideWitness> rows(samples);
  parallel_for(samples, [&](std::size_t i) {
    Rng rng = make_rng(seed, i);
    PieceCopy a = random_copy(fc, rng, static_cast<int>(i % 3), fc.root());
    WallRef w = random_exit_wall(fc, a, rng, 3);
    PieceCopy b = fc.cross(a, w).to;
    SlideWitness& r = rows[i];
    r.sample = i;
    r.x = random_point(fc, a, rng);
    r.y = random_wall_point(fc, WallId{a, w}, rng);
    r.z = random_point(fc, b, rng);
    r.defect = horizontal_slide(fc, r.x, r.y, r.z).defect;
  });
  SlideAudit out;
  out.samples = samples;
  for (const auto& r : rows) {
    if (r.sample == 0 || r.defect > out.max_defect) out.max_defect = r.defect;
    if (r.defect > Rational(0)) {
      ++out.violations;
      if (!out.witness) out.witness = r;
    }
  }
  return out;
}

PathAxiomAudit path_axiom_audit(const FlipComplex& fc, std::size_t samples, int max_walls, std::uint64_t seed) {
  struct Row {
    std::size_t bps = 0;
    bool restriction = true;
    bool reversal = true;
  };
  std::vector<Row> rows(samples);
  parallel_for(samples, [&](std::size_t i) {
    Rng rng = make_rng(seed, i);
    auto [x, y] = random_pair(fc, rng, max_walls);
    SpecialPath fwd = special_path(fc, x, y);
    SpecialPath rev = special_path(fc, y, x);
    const auto& bp = fwd.breakpoints;
    Row& r = rows[i];
    r.bps = bp.size();
    r.reversal = std::equal(bp.begin(), bp.end(), rev.breakpoints.rbegin(), rev.breakpoints.rend());
    for (std::size_t a = 0; a < bp.size() && r.restriction; ++a)
      for (std::size_t b = a + 1; b < bp.size(); ++b) {
        SpecialPath sub = special_path(fc, bp[a], bp[b]);
        if (!std::equal(sub.breakpoints.begin(), sub.breakpoints.end(), bp.begin() + a, bp.begin() + b + 1)) {
          r.restriction = false;
          break;
        }
      }
  });
  PathAxiomAudit out;
  out.samples = samples;
  for (std::size_t i = 0; i < samples; ++i) {
    out.breakpoints += rows[i].bps;
    out.restriction_failures += !rows[i].restriction;
    out.reversal_failures += !rows[i].reversal;
    if ((!rows[i].restriction || !rows[i].reversal) && !out.witness) out.witness = i;
  }
  return out;
}

int displacement_translation_length(const GraphOfGroups& g, const GroupWord& w) {
  const FlipComplex& fc = g.complex();
  PointCoord v{fc.root(), TreePos{{}, DirEdge{0, false}, Rational(1, 3)}, Rational(0)};
  int d1 = fc.dual_distance(v.copy, g.act_on_point(w, v).copy);
  int d2 = fc.dual_distance(v.copy, g.act_on_point(g.power(w, 2), v).copy);
  return std::max(0, d2 - d1);
}

MorseAudit morse_audit(const GraphOfGroups& g, std::size_t words, int max_syllables, std::uint64_t seed) {
  struct Row {
    bool skipped = false;
    bool morse = false;
    bool agree = true;
    bool powers = true;
    GroupWord w;
  };
  std::vector<Row> rows(words);
  parallel_for(words, [&](std::size_t i) {
    Rng rng = make_rng(seed, i);
    Row& r = rows[i];
    r.w = random_group_word(g, rng, 1 + static_cast<int>(i % static_cast<std::size_t>(max_syllables)));
    if (g.is_identity(r.w)) {
      r.skipped = true;
      return;
    }
    r.morse = g.is_morse(r.w);
    r.agree = r.morse == (displacement_translation_length(g, r.w) > 0);
    if (r.morse) {
      int tau = g.translation_length(r.w);
      for (int n = 2; n <= 5; ++n) r.powers = r.powers && g.translation_length(g.power(r.w, n)) == n * tau;
    }
  });
  MorseAudit out;
  for (const auto& r : rows) {
    if (r.skipped) continue;
    ++out.words;
    out.morse += r.morse;
    out.disagreements += !r.agree;
    out.power_failures += !r.powers;
    if ((!r.agree || !r.powers) && !out.witness) out.witness = r.w;
  }
  return out;
}

}  // namespace qclab
