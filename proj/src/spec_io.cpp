#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "qclab/flip_complex.hpp"

namespace qclab {
namespace {

using nlohmann::json;

Rational rational_field(const json& j, const char* what) {
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_number_float()) return Rational::parse(j.dump());
  throw SpecError(std::string("field '") + what + "' must be a rational string or number");
}

bool is_rotation(const Walk& a, const Walk& b) {
  if (a.size() != b.size()) return false;
  std::size_t n = a.size();
  for (std::size_t shift = 0; shift < n; ++shift) {
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) ok = a[i] == b[(i + shift) % n];
    if (ok) return true;
  }
  return false;
}

bool is_proper_power(const Walk& c) {
  std::size_t n = c.size();
  for (std::size_t d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    bool periodic = true;
    for (std::size_t i = d; i < n && periodic; ++i) periodic = c[i] == c[i - d];
    if (periodic) return true;
  }
  return false;
}

}  // namespace

void validate_spec(const FlipManifoldSpec& spec) {
  if (spec.pieces.empty()) throw SpecError("spec has no pieces");
  for (std::size_t i = 0; i < spec.pieces.size(); ++i) {
    const auto& p = spec.pieces[i];
    const std::string where = "piece " + std::to_string(i);
    if (!p.spine.connected()) throw SpecError(where + ": spine graph is not connected");
    if (p.spine.betti_number() < 2)
      throw SpecError(where + ": Betti number < 2 (spine has Betti number " +
                      std::to_string(p.spine.betti_number()) + ")");
    if (p.boundary_cycles.empty()) throw SpecError(where + ": no boundary cycles");
    if (p.base_scale.sign() <= 0) throw SpecError(where + ": base_scale must be positive");
    if (p.fiber_period.sign() <= 0) throw SpecError(where + ": fiber_period must be positive");
    if (p.collar_width.sign() < 0) throw SpecError(where + ": collar_width must be non-negative");
    for (std::size_t c = 0; c < p.boundary_cycles.size(); ++c) {
      const Walk& w = p.boundary_cycles[c];
      const std::string cw = where + " cycle " + std::to_string(c);
      if (w.empty()) throw SpecError(cw + ": empty boundary cycle");
      int start = p.spine.tail(w.front());
      if (!p.spine.walk_contiguous(start, w) || p.spine.walk_end(start, w) != start)
        throw SpecError(cw + ": not a closed walk");
      if (reduce(w) != w) throw SpecError(cw + ": walk is not reduced");
      if (w.size() > 1 && w.back() == w.front().inv())
        throw SpecError(cw + ": walk is not cyclically reduced");
      if (is_proper_power(w)) throw SpecError(cw + ": cycle is a proper power");
      for (std::size_t d = 0; d < c; ++d) {
        const Walk& o = p.boundary_cycles[d];
        if (is_rotation(w, o) || is_rotation(inverse(w), o))
          throw SpecError(cw + ": conjugate to cycle " + std::to_string(d) + " (same boundary lines)");
      }
    }
  }

  std::map<std::pair<int, int>, int> uses;
  for (std::size_t g = 0; g < spec.gluings.size(); ++g) {
    const auto& gl = spec.gluings[g];
    const std::string where = "gluing " + std::to_string(g);
    auto check_end = [&](int piece, int cycle) {
      if (piece < 0 || piece >= static_cast<int>(spec.pieces.size()) || cycle < 0 ||
          cycle >= static_cast<int>(spec.pieces[piece].boundary_cycles.size()))
        throw SpecError(where + ": refers to a missing piece or cycle");
      if (++uses[{piece, cycle}] > 1)
        throw SpecError("doubly-matched cycle: piece " + std::to_string(piece) + " cycle " +
                        std::to_string(cycle));
    };
    check_end(gl.from_piece, gl.from_cycle);
    check_end(gl.to_piece, gl.to_cycle);

    const auto& a = spec.pieces[gl.from_piece];
    const auto& b = spec.pieces[gl.to_piece];
    Rational la = a.base_scale * Rational(static_cast<std::int64_t>(a.boundary_cycles[gl.from_cycle].size()));
    Rational lb = b.base_scale * Rational(static_cast<std::int64_t>(b.boundary_cycles[gl.to_cycle].size()));
    if (la != b.fiber_period)
      throw SpecError("flip-compatibility violation in " + where + ": cycle length " + la.str() +
                      " != partner fiber period " + b.fiber_period.str());
    if (lb != a.fiber_period)
      throw SpecError("flip-compatibility violation in " + where + ": cycle length " + lb.str() +
                      " != partner fiber period " + a.fiber_period.str());
  }
  for (std::size_t i = 0; i < spec.pieces.size(); ++i)
    for (std::size_t c = 0; c < spec.pieces[i].boundary_cycles.size(); ++c)
      if (!uses.count({static_cast<int>(i), static_cast<int>(c)}))
        throw SpecError("unmatched cycle: piece " + std::to_string(i) + " cycle " + std::to_string(c));

  std::vector<bool> reached(spec.pieces.size(), false);
  reached[0] = true;
  for (bool grew = true; grew;) {
    grew = false;
    for (const auto& gl : spec.gluings)
      if (reached[gl.from_piece] != reached[gl.to_piece]) {
        reached[gl.from_piece] = reached[gl.to_piece] = true;
        grew = true;
      }
  }
  for (std::size_t i = 0; i < reached.size(); ++i)
    if (!reached[i]) throw SpecError("gluing graph is not connected: piece " + std::to_string(i) + " unreachable");
}

FlipManifoldSpec load_spec(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SpecError(std::string("parse error: ") + e.what());
  }
  FlipManifoldSpec spec;
  try {
    for (const auto& jp : doc.at("pieces")) {
      const auto& js = jp.at("spine");
      std::vector<Spine::Edge> edges;
      for (const auto& je : js.at("edges"))
        edges.push_back({je.at(0).get<int>(), je.at(1).get<int>(), je.at(2).get<std::string>()});
      PieceSpec piece;
      try {
        piece.spine = Spine(js.at("vertices").get<int>(), std::move(edges));
      } catch (const std::invalid_argument& e) {
        throw SpecError(e.what());
      }
      for (const auto& jc : jp.at("boundary_cycles")) {
        Walk w;
        for (const auto& tok : jc) {
          try {
            w.push_back(piece.spine.parse_dir_edge(tok.get<std::string>()));
          } catch (const std::invalid_argument& e) {
            throw SpecError(e.what());
          }
        }
        piece.boundary_cycles.push_back(std::move(w));
      }
      piece.base_scale = rational_field(jp.value("base_scale", json("1")), "base_scale");
      piece.fiber_period = rational_field(jp.value("fiber_period", json("1")), "fiber_period");
      piece.collar_width = jp.contains("collar_width")
                               ? rational_field(jp.at("collar_width"), "collar_width")
                               : piece.base_scale * Rational(1, 4);
      spec.pieces.push_back(std::move(piece));
    }
    for (const auto& jg : doc.at("gluings")) {
      GluingSpec g;
      g.from_piece = jg.at("from").at(0).get<int>();
      g.from_cycle = jg.at("from").at(1).get<int>();
      g.to_piece = jg.at("to").at(0).get<int>();
      g.to_cycle = jg.at("to").at(1).get<int>();
      if (jg.contains("offsets")) {
        g.sigma = rational_field(jg.at("offsets").at(0), "offsets");
        g.tau = rational_field(jg.at("offsets").at(1), "offsets");
      }
      spec.gluings.push_back(g);
    }
  } catch (const json::exception& e) {
    throw SpecError(std::string("parse error: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw SpecError(std::string("parse error: ") + e.what());
  }
  validate_spec(spec);
  FlipComplex check(spec);  // geometric checks
  return spec;
}

FlipManifoldSpec load_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open spec file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return load_spec(buf.str());
}

std::string dump_spec(const FlipManifoldSpec& spec) {
  json doc;
  doc["pieces"] = json::array();
  for (const auto& p : spec.pieces) {
    json jp;
    jp["spine"]["vertices"] = p.spine.vertex_count();
    jp["spine"]["edges"] = json::array();
    for (int i = 0; i < p.spine.edge_count(); ++i) {
      const auto& e = p.spine.edge(i);
      jp["spine"]["edges"].push_back({e.from, e.to, e.label});
    }
    jp["boundary_cycles"] = json::array();
    for (const auto& c : p.boundary_cycles) {
      json jc = json::array();
      for (const auto& d : c) jc.push_back(p.spine.format(Walk{d}));
      jp["boundary_cycles"].push_back(jc);
    }
    jp["base_scale"] = p.base_scale.str();
    jp["fiber_period"] = p.fiber_period.str();
    jp["collar_width"] = p.collar_width.str();
    doc["pieces"].push_back(jp);
  }
  doc["gluings"] = json::array();
  for (const auto& g : spec.gluings)
    doc["gluings"].push_back({{"from", {g.from_piece, g.from_cycle}},
                              {"to", {g.to_piece, g.to_cycle}},
                              {"offsets", {g.sigma.str(), g.tau.str()}}});
  return doc.dump(2);
}

}  // namespace qclab
