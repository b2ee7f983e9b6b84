#pragma once

#include <cstdint>
#include <functional>
#include <random>

#include "qclab/flip_complex.hpp"

namespace qclab {

/// Seed for stream `index` of a run seeded with `seed` (splitmix64 finalizer).
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index);

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed, std::uint64_t index) { return Rng(stream_seed(seed, index)); }

/// Worker count: QCLAB_THREADS if set, else hardware concurrency.
int thread_count();

/// Runs fn(i) for i in [0, n) across worker threads. The first exception
/// thrown by any call is rethrown after all workers stop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

/// Uniform rational in [lo, hi] with the given denominator.
Rational random_rational(Rng& rng, const Rational& lo, const Rational& hi, std::int64_t den = 64);

/// Random reduced walk from the base vertex with length at most max_len.
Walk random_walk(const Spine& spine, Rng& rng, int max_len);

/// Random wall of `copy` other than its entry wall.
WallRef random_exit_wall(const FlipComplex& fc, const PieceCopy& copy, Rng& rng, int max_len = 3);

/// Copy reached by `depth` random non-backtracking crossings from `start`.
PieceCopy random_copy(const FlipComplex& fc, Rng& rng, int depth, const PieceCopy& start);

/// Random point of a copy (tree point or wall point), canonical form.
PointCoord random_point(const FlipComplex& fc, const PieceCopy& copy, Rng& rng, int max_len = 3,
                        double wall_fraction = 0.2);

/// Random point on the given wall of a copy.
PointCoord random_wall_point(const FlipComplex& fc, const WallId& wall, Rng& rng);

}  // namespace qclab
