#include "qclab/graph_of_groups.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <queue>
#include <sstream>

#include "qclab/sampling.hpp"

namespace qclab {

int GroupWord::stable_count() const {
  int n = 0;
  for (const auto& s : syllables) n += std::holds_alternative<StableLetter>(s);
  return n;
}

namespace {

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

Walk walk_power(const Walk& c, std::int64_t k) {
  Walk out;
  const Walk step = k >= 0 ? c : inverse(c);
  for (std::int64_t i = 0; i < (k >= 0 ? k : -k); ++i) out = concat_reduce(out, step);
  return out;
}

Walk cat(const Walk& a, const Walk& b) { return concat_reduce(a, b); }

bool is_trivial(const VertexElement& x) { return x.word.empty() && x.fiber == 0; }

StableLetter inv(const StableLetter& t) { return {t.gluing, -t.sign}; }

}  // namespace

GraphOfGroups::GraphOfGroups(const FlipComplex& fc) : fc_(&fc) {
  const auto& spec = fc.spec();
  tree_path_.assign(spec.pieces.size(), GroupWord{});
  std::vector<bool> seen(spec.pieces.size(), false);
  std::queue<int> q;
  seen[0] = true;
  q.push(0);
  while (!q.empty()) {
    int p = q.front();
    q.pop();
    for (std::size_t g = 0; g < spec.gluings.size(); ++g) {
      for (int sign : {1, -1}) {
        StableLetter t{static_cast<int>(g), sign};
        if (tail_piece(t) != p || seen[head_piece(t)]) continue;
        seen[head_piece(t)] = true;
        tree_path_[head_piece(t)] = tree_path_[p];
        tree_path_[head_piece(t)].syllables.push_back(t);
        q.push(head_piece(t));
      }
    }
  }
}

int GraphOfGroups::tail_piece(const StableLetter& t) const {
  const auto& g = fc_->spec().gluings.at(t.gluing);
  return t.sign > 0 ? g.from_piece : g.to_piece;
}
int GraphOfGroups::head_piece(const StableLetter& t) const {
  const auto& g = fc_->spec().gluings.at(t.gluing);
  return t.sign > 0 ? g.to_piece : g.from_piece;
}
int GraphOfGroups::exit_cycle(const StableLetter& t) const {
  const auto& g = fc_->spec().gluings.at(t.gluing);
  return t.sign > 0 ? g.from_cycle : g.to_cycle;
}
int GraphOfGroups::entry_cycle(const StableLetter& t) const {
  const auto& g = fc_->spec().gluings.at(t.gluing);
  return t.sign > 0 ? g.to_cycle : g.from_cycle;
}

VertexElement GraphOfGroups::boundary(int piece, int cycle) const {
  return {piece, fc_->boundary_word(piece, cycle), 0};
}

std::optional<std::pair<std::int64_t, std::int64_t>> GraphOfGroups::edge_group_coords(const VertexElement& x,
                                                                                     int cycle) const {
  const auto& ps = fc_->piece(x.piece);
  const Walk& tau = ps.spine.tree_path(fc_->cycle_start(x.piece, cycle));
  Walk rel = reduce(cat(cat(qclab::inverse(tau), x.word), tau));
  const Walk& c = ps.boundary_cycles.at(cycle);
  if (rel.size() % c.size() != 0) return std::nullopt;
  std::int64_t k = static_cast<std::int64_t>(rel.size() / c.size());
  if (rel == walk_power(c, k)) return std::make_pair(k, x.fiber);
  if (rel == walk_power(c, -k)) return std::make_pair(-k, x.fiber);
  return std::nullopt;
}

void GraphOfGroups::validate(const VertexElement& x) const {
  if (x.piece < 0 || x.piece >= fc_->piece_count())
    throw std::invalid_argument("vertex syllable refers to missing piece " + std::to_string(x.piece));
  const auto& sp = fc_->piece(x.piece).spine;
  if (!sp.walk_contiguous(0, x.word) || sp.walk_end(0, x.word) != 0)
    throw std::invalid_argument("vertex syllable word is not a closed walk at the base vertex");
}

GroupWord GraphOfGroups::parse(std::string_view text) const {
  GroupWord w;
  std::string all(text);
  std::stringstream ss(all);
  std::string part;
  while (std::getline(ss, part, ';')) {
    std::string s = trim(part);
    if (s.empty()) continue;
    if (s[0] == 't') {
      std::string body = s.substr(1);
      int sign = 1;
      if (auto caret = body.find('^'); caret != std::string::npos) {
        std::string e = trim(body.substr(caret + 1));
        if (e == "-1") sign = -1;
        else if (e != "1") throw std::invalid_argument("stable letter exponent must be 1 or -1: " + s);
        body = body.substr(0, caret);
      }
      std::size_t pos = 0;
      int g = std::stoi(trim(body), &pos);
      if (pos != trim(body).size() || g < 0 || g >= static_cast<int>(fc_->spec().gluings.size()))
        throw std::invalid_argument("bad stable letter: " + s);
      w.syllables.push_back(StableLetter{g, sign});
    } else if (s[0] == 'v') {
      auto colon = s.find(':');
      if (colon == std::string::npos) throw std::invalid_argument("vertex syllable needs 'vP:': " + s);
      VertexElement x;
      x.piece = std::stoi(s.substr(1, colon - 1));
      std::string rest = s.substr(colon + 1);
      std::string walk_text = rest;
      if (auto bar = rest.find('|'); bar != std::string::npos) {
        walk_text = rest.substr(0, bar);
        std::string f = trim(rest.substr(bar + 1));
        if (f.empty() || f[0] != 'f') throw std::invalid_argument("fiber part must read 'f N': " + s);
        x.fiber = std::stoll(trim(f.substr(1)));
      }
      if (x.piece < 0 || x.piece >= fc_->piece_count())
        throw std::invalid_argument("vertex syllable refers to missing piece: " + s);
      x.word = reduce(fc_->piece(x.piece).spine.parse_walk(walk_text));
      validate(x);
      w.syllables.push_back(std::move(x));
    } else {
      throw std::invalid_argument("unrecognized syllable: " + s);
    }
  }
  return w;
}

std::string GraphOfGroups::format(const GroupWord& w) const {
  std::string out;
  for (const auto& s : w.syllables) {
    if (!out.empty()) out += " ; ";
    if (const auto* t = std::get_if<StableLetter>(&s)) {
      out += "t" + std::to_string(t->gluing) + (t->sign < 0 ? "^-1" : "");
    } else {
      const auto& x = std::get<VertexElement>(s);
      out += "v" + std::to_string(x.piece) + ":";
      std::string walk = fc_->piece(x.piece).spine.format(x.word);
      if (!walk.empty()) out += " " + walk;
      if (x.fiber != 0) out += " | f " + std::to_string(x.fiber);
    }
  }
  return out;
}

GroupWord GraphOfGroups::inverse(const GroupWord& w) const {
  GroupWord out;
  for (auto it = w.syllables.rbegin(); it != w.syllables.rend(); ++it) {
    if (const auto* t = std::get_if<StableLetter>(&*it)) {
      out.syllables.push_back(inv(*t));
    } else {
      const auto& x = std::get<VertexElement>(*it);
      out.syllables.push_back(VertexElement{x.piece, qclab::inverse(x.word), -x.fiber});
    }
  }
  return out;
}

GroupWord GraphOfGroups::multiply(const GroupWord& a, const GroupWord& b) const {
  GroupWord out = a;
  out.syllables.insert(out.syllables.end(), b.syllables.begin(), b.syllables.end());
  return out;
}

GroupWord GraphOfGroups::power(const GroupWord& w, int n) const {
  GroupWord base = n >= 0 ? w : inverse(w);
  GroupWord out;
  for (int i = 0; i < std::abs(n); ++i) out = multiply(out, base);
  return out;
}

GroupWord GraphOfGroups::expand(const GroupWord& w) const {
  GroupWord out;
  auto append = [&](const GroupWord& p) {
    out.syllables.insert(out.syllables.end(), p.syllables.begin(), p.syllables.end());
  };
  for (const auto& s : w.syllables) {
    if (const auto* t = std::get_if<StableLetter>(&s)) {
      if (t->gluing < 0 || t->gluing >= static_cast<int>(fc_->spec().gluings.size()) ||
          (t->sign != 1 && t->sign != -1))
        throw std::invalid_argument("malformed stable letter");
      append(tree_path_[tail_piece(*t)]);
      out.syllables.push_back(*t);
      append(inverse(tree_path_[head_piece(*t)]));
    } else {
      const auto& x = std::get<VertexElement>(s);
      validate(x);
      append(tree_path_[x.piece]);
      out.syllables.push_back(x);
      append(inverse(tree_path_[x.piece]));
    }
  }
  return out;
}

NormalForm GraphOfGroups::britton_reduce(const GroupWord& w) const {
  std::vector<Syllable> st;
  auto push_vertex = [&](VertexElement x) {
    if (!st.empty()) {
      if (auto* top = std::get_if<VertexElement>(&st.back())) {
        if (top->piece != x.piece) throw std::invalid_argument("malformed syllable sequence: piece mismatch");
        top->word = cat(top->word, x.word);
        top->fiber += x.fiber;
        if (is_trivial(*top)) st.pop_back();
        return;
      }
    }
    if (!is_trivial(x)) st.push_back(std::move(x));
  };
  for (const auto& s : expand(w).syllables) {
    if (const auto* x = std::get_if<VertexElement>(&s)) {
      push_vertex(*x);
      continue;
    }
    const StableLetter t = std::get<StableLetter>(s);
    if (!st.empty()) {
      if (const auto* top = std::get_if<StableLetter>(&st.back()); top && *top == inv(t)) {
        st.pop_back();
        continue;
      }
      if (st.size() >= 2) {
        const auto* x = std::get_if<VertexElement>(&st.back());
        const auto* below = std::get_if<StableLetter>(&st[st.size() - 2]);
        if (x && below && *below == inv(t)) {
          if (auto kn = edge_group_coords(*x, entry_cycle(*below))) {
            StableLetter b = *below;
            st.pop_back();
            st.pop_back();
            int piece = tail_piece(b);
            push_vertex(VertexElement{piece, walk_power(fc_->boundary_word(piece, exit_cycle(b)), kn->second),
                                      kn->first});
            continue;
          }
        }
      }
    }
    st.push_back(t);
  }
  NormalForm nf;
  nf.reduced.syllables = std::move(st);
  nf.stable_count = nf.reduced.stable_count();
  return nf;
}

NormalForm GraphOfGroups::cyclic_reduce(const GroupWord& w) const {
  NormalForm nf = britton_reduce(w);
  std::vector<Syllable> s = nf.reduced.syllables;
  std::vector<Syllable> conj;  // accumulated left factor, built in reverse
  auto merge_front = [&](const VertexElement& a) {
    if (!s.empty())
      if (auto* f = std::get_if<VertexElement>(&s.front())) {
        f->word = cat(a.word, f->word);
        f->fiber += a.fiber;
        if (is_trivial(*f)) s.erase(s.begin());
        return;
      }
    if (!is_trivial(a)) s.insert(s.begin(), a);
  };
  for (;;) {
    int letters = 0;
    for (const auto& x : s) letters += std::holds_alternative<StableLetter>(x);
    if (letters == 0) break;
    // Rotate a trailing vertex element to the front.
    if (auto* last = std::get_if<VertexElement>(&s.back())) {
      VertexElement a = *last;
      s.pop_back();
      merge_front(a);
      conj.push_back(a);
    }
    // s now ends with a stable letter t_n; test the junction t_n · x · t_1.
    StableLetter tn = std::get<StableLetter>(s.back());
    std::size_t first = 0;
    VertexElement x{head_piece(tn), {}, 0};
    if (auto* f = std::get_if<VertexElement>(&s.front())) {
      x = *f;
      first = 1;
    }
    const auto* t1 = std::get_if<StableLetter>(&s[first]);
    if (!t1 || *t1 != inv(tn)) break;
    auto kn = edge_group_coords(x, entry_cycle(tn));
    if (!kn) break;
    int piece = tail_piece(tn);
    VertexElement y{piece, walk_power(fc_->boundary_word(piece, exit_cycle(tn)), kn->second), kn->first};
    s.pop_back();
    s.erase(s.begin(), s.begin() + static_cast<long>(first + 1));
    merge_front(y);
    conj.push_back(tn);
  }
  nf.reduced.syllables = s;
  nf.stable_count = nf.reduced.stable_count();
  nf.conjugator.syllables.assign(conj.rbegin(), conj.rend());
  return nf;
}

int GraphOfGroups::translation_length(const GroupWord& w) const { return cyclic_reduce(w).stable_count; }

bool GraphOfGroups::is_identity(const GroupWord& w) const { return britton_reduce(w).reduced.empty(); }

bool GraphOfGroups::is_morse(const GroupWord& w) const {
  NormalForm nf = cyclic_reduce(w);
  if (nf.reduced.empty()) throw std::invalid_argument("is_morse: identity element");
  return nf.stable_count > 0;
}

GroupWord GraphOfGroups::address_word(const PieceCopy& copy) const {
  GroupWord out;
  PieceCopy cur = fc_->root();
  for (const auto& wall : copy.address) {
    int p = cur.piece;
    const auto& sp = fc_->piece(p).spine;
    const Walk& tau = sp.tree_path(fc_->cycle_start(p, wall.cycle));
    out.syllables.push_back(VertexElement{p, reduce(cat(wall.rep, qclab::inverse(tau))), 0});
    const GluingEnd& end = fc_->gluing_end(p, wall.cycle);
    out.syllables.push_back(StableLetter{end.gluing, end.is_from ? 1 : -1});
    int m = 0;
    fc_->entry_rep(end.partner_piece, end.partner_cycle, &m);
    out.syllables.push_back(
        VertexElement{end.partner_piece, walk_power(fc_->boundary_word(end.partner_piece, end.partner_cycle), -m), 0});
    cur = fc_->cross(cur, wall).to;
  }
  return out;
}

void GraphOfGroups::step(Frame& f, const Syllable& s) const {
  if (const auto* x = std::get_if<VertexElement>(&s)) {
    if (x->piece != f.copy.piece) throw ConsistencyError("vertex syllable applied in the wrong piece");
    f.u = cat(f.u, x->word);
    f.n += x->fiber;
    return;
  }
  const auto& t = std::get<StableLetter>(s);
  int p = f.copy.piece;
  if (tail_piece(t) != p) throw ConsistencyError("stable letter applied in the wrong piece");
  int c_out = exit_cycle(t);
  const Walk& tau_out = fc_->piece(p).spine.tree_path(fc_->cycle_start(p, c_out));
  int k = 0;
  WallRef wall = fc_->canonical_wall(p, c_out, cat(f.u, tau_out), &k);
  Crossing cr = fc_->cross(f.copy, wall);
  int q = cr.to.piece;
  int c_in = cr.wall_to.cycle;
  const Walk& tau_in = fc_->piece(q).spine.tree_path(fc_->cycle_start(q, c_in));
  const Walk& cyc = fc_->piece(q).boundary_cycles[c_in];
  f.u = reduce(cat(cat(cr.wall_to.rep, walk_power(cyc, f.n)), qclab::inverse(tau_in)));
  f.n = -k;
  f.copy = cr.to;
}

PointCoord GraphOfGroups::act_on_point(const GroupWord& w, const PointCoord& x0) const {
  PointCoord x = fc_->canonical(x0);
  Frame f{fc_->root(), {}, 0};
  for (const auto& s : expand(w).syllables) step(f, s);
  for (const auto& s : address_word(x.copy).syllables) step(f, s);
  int p = f.copy.piece;
  BasePos base = fc_->translate(p, f.u, x.base);
  Rational fiber = x.fiber + Rational(f.n) * fc_->piece(p).fiber_period;
  return fc_->canonical(PointCoord{f.copy, std::move(base), fiber});
}

std::vector<std::vector<int>> reduced_generator_words(int generators, int radius) {
  std::vector<std::vector<int>> out, frontier{{}};
  for (int len = 1; len <= radius; ++len) {
    std::vector<std::vector<int>> next;
    for (const auto& w : frontier)
      for (int g = 1; g <= generators; ++g)
        for (int sign : {1, -1}) {
          int letter = sign * g;
          if (!w.empty() && w.back() == -letter) continue;
          auto nw = w;
          nw.push_back(letter);
          next.push_back(nw);
        }
    out.insert(out.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  return out;
}

GroupWord evaluate(const GraphOfGroups& g, const std::vector<GroupWord>& gens, const std::vector<int>& letters) {
  GroupWord out;
  for (int l : letters) {
    const GroupWord& base = gens.at(static_cast<std::size_t>(std::abs(l) - 1));
    out = g.multiply(out, l > 0 ? base : g.inverse(base));
  }
  return out;
}

GroupWord random_group_word(const GraphOfGroups& g, Rng& rng, int syllables) {
  const FlipComplex& fc = g.complex();
  GroupWord w;
  std::uniform_int_distribution<int> coin(0, 1);
  std::uniform_int_distribution<int> piece(0, fc.piece_count() - 1);
  std::uniform_int_distribution<int> gluing(0, static_cast<int>(fc.spec().gluings.size()) - 1);
  std::uniform_int_distribution<int> fiber(-2, 2);
  for (int i = 0; i < syllables; ++i) {
    if (coin(rng)) {
      w.syllables.push_back(StableLetter{gluing(rng), coin(rng) ? 1 : -1});
    } else {
      int p = piece(rng);
      const Spine& sp = fc.piece(p).spine;
      Walk walk = random_walk(sp, rng, 3);
      walk = reduce(cat(walk, qclab::inverse(sp.tree_path(sp.walk_end(0, walk)))));
      w.syllables.push_back(VertexElement{p, walk, fiber(rng)});
    }
  }
  return w;
}

namespace {

void require_morse(const GraphOfGroups& g, const std::vector<GroupWord>& gens, const PointCoord& basepoint,
                   int radius) {
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (g.is_identity(gens[i]) || g.translation_length(gens[i]) == 0) {
      int worst = 0;
      for (int n = 1; n <= std::max(radius, 4); ++n) {
        PointCoord y = g.act_on_point(g.power(gens[i], n), basepoint);
        worst = std::max(worst, g.complex().dual_distance(basepoint.copy, y.copy));
      }
      throw BoundedOrbitError("generator " + std::to_string(i) + " (" + g.format(gens[i]) +
                                  ") fixes a vertex of the dual tree: orbit of its powers stays within dual "
                                  "distance " + std::to_string(worst),
                              static_cast<int>(i), worst);
    }
  }
}

}  // namespace

QIReport orbit_qi_test(const GraphOfGroups& g, const std::vector<GroupWord>& gens, int radius,
                       const PointCoord& basepoint) {
  QIReport rep;
  rep.sample_radius = radius;
  require_morse(g, gens, basepoint, radius);
  if (radius <= 0) return rep;
  auto words = reduced_generator_words(static_cast<int>(gens.size()), radius);
  std::vector<int> dt(words.size());
  PointCoord x0 = g.complex().canonical(basepoint);
  parallel_for(words.size(), [&](std::size_t i) {
    PointCoord y = g.act_on_point(evaluate(g, gens, words[i]), x0);
    dt[i] = g.complex().dual_distance(x0.copy, y.copy);
  });
  std::map<std::pair<int, int>, int> pairs;  // (d_H, d_T) -> count
  double ratio_sum = 0;
  for (std::size_t i = 0; i < words.size(); ++i) {
    ++pairs[{static_cast<int>(words[i].size()), dt[i]}];
    ratio_sum += static_cast<double>(dt[i]) / static_cast<double>(words[i].size());
  }
  rep.samples = words.size();
  rep.mean_ratio = ratio_sum / static_cast<double>(words.size());
  auto cost = [&](double L) {
    double c = 0;
    for (const auto& [k, n] : pairs) {
      (void)n;
      c = std::max({c, k.second - L * k.first, k.first / L - k.second});
    }
    return c;
  };
  double hi = 1;
  for (const auto& [k, n] : pairs) {
    (void)n;
    hi = std::max(hi, static_cast<double>(k.second) / k.first);
    if (k.second > 0) hi = std::max(hi, static_cast<double>(k.first) / k.second);
  }
  // L + C(L) is convex in L; golden-section search on [1, hi].
  double a = 1, b = hi + 1;
  const double phi = (std::sqrt(5.0) - 1) / 2;
  for (int it = 0; it < 200; ++it) {
    double m1 = b - phi * (b - a), m2 = a + phi * (b - a);
    if (m1 + cost(m1) <= m2 + cost(m2)) b = m2;
    else a = m1;
  }
  rep.L = (a + b) / 2;
  rep.C = cost(rep.L);
  rep.max_upper_residual = -1e300;
  rep.max_lower_residual = -1e300;
  for (const auto& [k, n] : pairs) {
    (void)n;
    rep.max_upper_residual = std::max(rep.max_upper_residual, k.second - (rep.L * k.first + rep.C));
    rep.max_lower_residual = std::max(rep.max_lower_residual, (k.first / rep.L - rep.C) - k.second);
  }
  return rep;
}

bool free_basis_check(const GraphOfGroups& g, const std::vector<GroupWord>& gens, int radius) {
  auto words = reduced_generator_words(static_cast<int>(gens.size()), radius);
  std::atomic<bool> relation{false};
  parallel_for(words.size(), [&](std::size_t i) {
    if (relation.load()) return;
    if (g.is_identity(evaluate(g, gens, words[i]))) relation = true;
  });
  return !relation.load();
}

}  // namespace qclab
