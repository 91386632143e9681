// SPDX-License-Identifier: Apache-2.0
//
// Monte Carlo oracle: draw uniform poses inside one grid cell and count the
// ones whose (projected) shape reaches a cell wall.
//
// Sample-stream contract: trial i takes one Philox4x64-10 block with
// counter (i, stream_index, 0, 0) and key (seed, 0). The four 64-bit words
// become uniforms u0..u3 on [0, 1); 2D poses read (x, y, phi) from u0..u2,
// 3D poses read (x, y, psi, phi) from u0..u3.
#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <variant>

#include "needle_lab/core.hpp"

namespace needle_lab {

inline constexpr const char* kRngAlgorithm = "philox4x64-10";

struct RngSpec {
  std::uint64_t seed = 0;
  std::uint64_t stream_index = 0;
};

/// The four uniforms of trial `trial` on the stream described by `rng`.
std::array<double, 4> trial_draws(const RngSpec& rng, std::uint64_t trial);

struct Config2D {
  double x_u;
  double y_u;
  double phi;
};

struct Config3D {
  double x_u;
  double y_u;
  double psi;
  double phi;
};

using Config = std::variant<Config2D, Config3D>;

/// Scales the leading 3 (2D) or 4 (3D) uniforms onto the pose ranges
/// [0,a) x [0,b) x [0,pi/2] x [0,pi). Throws InvalidArgument if too few
/// draws are supplied.
Config sample_config(std::span<const double> draws, const GridCell& grid, Embedding embedding);

/// Lower tip of a segment of in-plane length `length` hanging from the
/// upper tip at angle phi.
struct Point {
  double x;
  double y;
};

Point lower_tip(double x_u, double y_u, double phi, double length);

/// Needle crossing test; a tip exactly on a wall counts as inside.
bool intersects_needle(const Config2D& cfg, double length, const GridCell& grid);
/// 3D needle: the projection has length l * sin(psi).
bool intersects_needle(const Config3D& cfg, double length, const GridCell& grid);

/// Spherocylinder test: either end disk of diameter sigma pokes through a
/// wall.
bool intersects_sc(const Config2D& cfg, double length, double sigma, const GridCell& grid);
bool intersects_sc(const Config3D& cfg, double length, double sigma, const GridCell& grid);

struct SimResult {
  std::uint64_t n_all = 0;
  std::uint64_t n_coll = 0;
  double p_hat = 0.0;
  double std_err = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t stream_index = 0;
  std::string rng_algorithm = kRngAlgorithm;
};

/// Builds p_hat and the binomial standard error from raw tallies.
SimResult make_result(std::uint64_t n_all, std::uint64_t n_coll, const RngSpec& rng);

/// Runs n_all trials, split into contiguous index ranges across `threads`
/// workers (0 means NEEDLE_LAB_THREADS or hardware concurrency). The result
/// does not depend on the worker count.
SimResult estimate(const Shape& shape, Embedding embedding, const GridCell& grid, std::uint64_t n_all,
                   const RngSpec& rng, unsigned threads = 1);

/// Single line family (horizontal lines spaced b). x is still drawn so the
/// stream layout matches the two-family sampler; only the y walls count.
SimResult estimate_single_family(const Shape& shape, Embedding embedding, double b, std::uint64_t n_all,
                                 const RngSpec& rng, unsigned threads = 1);

/// Worker count from NEEDLE_LAB_THREADS, falling back to the hardware
/// concurrency (at least 1).
unsigned default_thread_count();

}  // namespace needle_lab
