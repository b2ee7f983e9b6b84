#include "qclab/spine.hpp"

#include <algorithm>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace qclab {

Walk inverse(const Walk& w) {
  Walk out;
  out.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(it->inv());
  return out;
}

Walk reduce(const Walk& w) {
  Walk out;
  out.reserve(w.size());
  for (const auto& e : w) {
    if (!out.empty() && out.back() == e.inv())
      out.pop_back();
    else
      out.push_back(e);
  }
  return out;
}

Walk concat_reduce(const Walk& a, const Walk& b) {
  Walk out = a;
  for (const auto& e : b) {
    if (!out.empty() && out.back() == e.inv())
      out.pop_back();
    else
      out.push_back(e);
  }
  return out;
}

std::size_t common_prefix(const Walk& a, const Walk& b) {
  std::size_t n = std::min(a.size(), b.size()), i = 0;
  while (i < n && a[i] == b[i]) ++i;
  return i;
}

bool shortlex_less(const Walk& a, const Walk& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

Spine::Spine(int vertices, std::vector<Edge> edges) : vertices_(vertices), edges_(std::move(edges)) {
  if (vertices_ <= 0) throw std::invalid_argument("spine needs at least one vertex");
  for (const auto& e : edges_) {
    if (e.from < 0 || e.from >= vertices_ || e.to < 0 || e.to >= vertices_)
      throw std::invalid_argument("spine edge '" + e.label + "' has an endpoint out of range");
    if (e.label.empty()) throw std::invalid_argument("spine edge without a label");
  }
  for (std::size_t i = 0; i < edges_.size(); ++i)
    for (std::size_t j = i + 1; j < edges_.size(); ++j)
      if (edges_[i].label == edges_[j].label)
        throw std::invalid_argument("duplicate spine edge label '" + edges_[i].label + "'");

  tree_paths_.assign(vertices_, Walk{});
  std::vector<bool> seen(vertices_, false);
  std::queue<int> q;
  seen[0] = true;
  q.push(0);
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int i = 0; i < edge_count(); ++i) {
      for (bool inv : {false, true}) {
        DirEdge d{i, inv};
        if (tail(d) != v || seen[head(d)]) continue;
        seen[head(d)] = true;
        tree_paths_[head(d)] = tree_paths_[v];
        tree_paths_[head(d)].push_back(d);
        q.push(head(d));
      }
    }
  }
}

bool Spine::connected() const {
  for (int v = 1; v < vertices_; ++v)
    if (tree_paths_[v].empty()) return false;
  return true;
}

int Spine::walk_end(int start, const Walk& w) const {
  int v = start;
  for (const auto& e : w) v = head(e);
  return v;
}

bool Spine::walk_contiguous(int start, const Walk& w) const {
  int v = start;
  for (const auto& e : w) {
    if (tail(e) != v) return false;
    v = head(e);
  }
  return true;
}

DirEdge Spine::parse_dir_edge(std::string_view token) const {
  bool inv = false;
  if (!token.empty() && token.front() == '-') {
    inv = true;
    token.remove_prefix(1);
  }
  if (token.size() > 3 && token.substr(token.size() - 3) == "^-1") {
    inv = !inv;
    token.remove_suffix(3);
  } else if (token.size() > 2 && token.substr(token.size() - 2) == "^1") {
    token.remove_suffix(2);
  }
  for (int i = 0; i < edge_count(); ++i)
    if (edges_[i].label == token) return {i, inv};
  throw std::invalid_argument("unknown edge label '" + std::string(token) + "'");
}

Walk Spine::parse_walk(std::string_view text) const {
  std::istringstream in{std::string(text)};
  Walk w;
  std::string tok;
  while (in >> tok) w.push_back(parse_dir_edge(tok));
  return w;
}

std::string Spine::format(const Walk& w) const {
  std::string out;
  for (const auto& e : w) {
    if (!out.empty()) out += ' ';
    out += edges_[e.edge].label;
    if (e.inverse) out += "^-1";
  }
  return out;
}

std::vector<Walk> Spine::reduced_walks(int start, int max_len) const {
  std::vector<Walk> out{Walk{}};
  std::vector<std::pair<Walk, int>> frontier{{Walk{}, start}};
  for (int len = 1; len <= max_len; ++len) {
    std::vector<std::pair<Walk, int>> next;
    for (const auto& [w, v] : frontier) {
      for (int i = 0; i < edge_count(); ++i) {
        for (bool inv : {false, true}) {
          DirEdge d{i, inv};
          if (tail(d) != v) continue;
          if (!w.empty() && w.back() == d.inv()) continue;
          Walk nw = w;
          nw.push_back(d);
          out.push_back(nw);
          next.emplace_back(std::move(nw), head(d));
        }
      }
    }
    frontier = std::move(next);
  }
  return out;
}

}  // namespace qclab
