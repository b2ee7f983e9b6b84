#include "qclab/sampling.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace qclab {

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

int thread_count() {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (const char* env = std::getenv("QCLAB_THREADS")) {
    int cap = std::atoi(env);
    if (cap > 0) n = n > 0 ? std::min(n, cap) : cap;
  }
  return std::max(n, 1);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  int workers = static_cast<int>(std::min<std::size_t>(n, static_cast<std::size_t>(thread_count())));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        {
          std::lock_guard lock(error_mutex);
          if (error) return;
        }
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

Rational random_rational(Rng& rng, const Rational& lo, const Rational& hi, std::int64_t den) {
  Rational span = (hi - lo) * Rational(den);
  std::int64_t steps = static_cast<std::int64_t>(span.to_double());
  std::uniform_int_distribution<std::int64_t> dist(0, std::max<std::int64_t>(steps, 0));
  return lo + Rational(dist(rng), den);
}

Walk random_walk(const Spine& spine, Rng& rng, int max_len) {
  std::uniform_int_distribution<int> len_dist(0, max_len);
  int len = len_dist(rng);
  Walk w;
  int v = 0;
  for (int i = 0; i < len; ++i) {
    std::vector<DirEdge> options;
    for (int e = 0; e < spine.edge_count(); ++e)
      for (bool inv : {false, true}) {
        DirEdge d{e, inv};
        if (spine.tail(d) == v && (w.empty() || w.back() != d.inv())) options.push_back(d);
      }
    if (options.empty()) break;
    std::uniform_int_distribution<std::size_t> pick(0, options.size() - 1);
    w.push_back(options[pick(rng)]);
    v = spine.head(w.back());
  }
  return w;
}

namespace {

Walk walk_to_cycle(const FlipComplex& fc, int piece, int cycle, Walk w) {
  const Spine& sp = fc.piece(piece).spine;
  int end = sp.walk_end(0, w);
  Walk back = inverse(sp.tree_path(end));
  w.insert(w.end(), back.begin(), back.end());
  const Walk& to = sp.tree_path(fc.cycle_start(piece, cycle));
  w.insert(w.end(), to.begin(), to.end());
  return reduce(w);
}

}  // namespace

WallRef random_exit_wall(const FlipComplex& fc, const PieceCopy& copy, Rng& rng, int max_len) {
  const auto& ps = fc.piece(copy.piece);
  std::uniform_int_distribution<int> cyc(0, static_cast<int>(ps.boundary_cycles.size()) - 1);
  auto entry = fc.entry_wall(copy);
  for (;;) {
    int c = cyc(rng);
    WallRef w = fc.canonical_wall(copy.piece, c, walk_to_cycle(fc, copy.piece, c, random_walk(ps.spine, rng, max_len)));
    if (!entry || w != *entry) return w;
  }
}

PieceCopy random_copy(const FlipComplex& fc, Rng& rng, int depth, const PieceCopy& start) {
  PieceCopy cur = start;
  std::optional<WallRef> came_from;
  for (int i = 0; i < depth; ++i) {
    const auto& ps = fc.piece(cur.piece);
    std::uniform_int_distribution<int> cyc(0, static_cast<int>(ps.boundary_cycles.size()) - 1);
    WallRef w;
    do {
      int c = cyc(rng);
      w = fc.canonical_wall(cur.piece, c, walk_to_cycle(fc, cur.piece, c, random_walk(ps.spine, rng, 3)));
    } while (came_from && w == *came_from);
    Crossing cr = fc.cross(cur, w);
    came_from = cr.wall_to;
    cur = cr.to;
  }
  return cur;
}

PointCoord random_wall_point(const FlipComplex& fc, const WallId& wall, Rng& rng) {
  Rational s = random_rational(rng, Rational(-2), Rational(2));
  Rational t = random_rational(rng, Rational(-2), Rational(2));
  return fc.wall_point(wall, s, t);
}

PointCoord random_point(const FlipComplex& fc, const PieceCopy& copy, Rng& rng, int max_len,
                        double wall_fraction) {
  const auto& ps = fc.piece(copy.piece);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  if (coin(rng) < wall_fraction) {
    std::uniform_int_distribution<int> cyc(0, static_cast<int>(ps.boundary_cycles.size()) - 1);
    int c = cyc(rng);
    WallRef w = fc.canonical_wall(copy.piece, c, walk_to_cycle(fc, copy.piece, c, random_walk(ps.spine, rng, max_len)));
    return random_wall_point(fc, WallId{copy, w}, rng);
  }
  TreePos p;
  p.walk = random_walk(ps.spine, rng, max_len);
  int v = ps.spine.walk_end(0, p.walk);
  std::vector<DirEdge> options;
  for (int e = 0; e < ps.spine.edge_count(); ++e)
    for (bool inv : {false, true})
      if (ps.spine.tail(DirEdge{e, inv}) == v) options.push_back(DirEdge{e, inv});
  std::uniform_int_distribution<std::size_t> pick(0, options.size() - 1);
  p.edge = options[pick(rng)];
  std::uniform_int_distribution<int> off(0, 63);
  p.offset = Rational(off(rng), 64);
  Rational fiber = random_rational(rng, Rational(-3), Rational(3));
  return fc.canonical(PointCoord{copy, fc.normalize(p), fiber});
}

}  // namespace qclab
