// SPDX-License-Identifier: Apache-2.0
#include "needle_lab/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <thread>
#include <vector>

#include "needle_lab/philox.hpp"

namespace needle_lab {

namespace {

using std::numbers::pi;

// Walls of the cell, or only the y walls for a single line family.
struct Walls {
  double a;
  double b;
  bool x_walls;
};

// Any point of the disk of radius r centred at p outside the cell.
inline bool disk_escapes(double px, double py, double r, const Walls& w) {
  if (py - r < 0.0 || w.b < py + r) return true;
  return w.x_walls && (px - r < 0.0 || w.a < px + r);
}

template <bool ThreeD, bool Capped>
std::uint64_t count_hits(std::uint64_t begin, std::uint64_t end, double length, double sigma, const Walls& w,
                         const RngSpec& rng) {
  const Philox4x64::Key key{rng.seed, 0};
  const double x_scale = w.x_walls ? w.a : 1.0;
  const double r = 0.5 * sigma;
  std::uint64_t hits = 0;
  for (std::uint64_t i = begin; i < end; ++i) {
    const auto block = Philox4x64::block({i, rng.stream_index, 0, 0}, key);
    const double x = x_scale * to_unit_interval(block[0]);
    const double y = w.b * to_unit_interval(block[1]);
    double projected = length;
    double phi = 0.0;
    if constexpr (ThreeD) {
      projected = length * std::sin(pi / 2 * to_unit_interval(block[2]));
      phi = pi * to_unit_interval(block[3]);
    } else {
      phi = pi * to_unit_interval(block[2]);
    }
    const double xl = x - projected * std::cos(phi);
    const double yl = y - projected * std::sin(phi);
    bool hit = false;
    if constexpr (Capped) {
      hit = disk_escapes(x, y, r, w) || disk_escapes(xl, yl, r, w);
    } else {
      hit = yl < 0.0 || w.b < yl || (w.x_walls && (xl < 0.0 || w.a < xl));
    }
    hits += hit ? 1 : 0;
  }
  return hits;
}

using Counter = std::uint64_t (*)(std::uint64_t, std::uint64_t, double, double, const Walls&, const RngSpec&);

Counter pick_counter(Embedding embedding, bool capped) {
  if (embedding == Embedding::TwoD) return capped ? count_hits<false, true> : count_hits<false, false>;
  return capped ? count_hits<true, true> : count_hits<true, false>;
}

SimResult run(const Shape& shape, Embedding embedding, const Walls& walls, std::uint64_t n_all, const RngSpec& rng,
              unsigned threads) {
  if (n_all == 0) throw Error(ErrorCode::InvalidArgument, "n_all must be >= 1");
  const double length = shape_length(shape);
  const double sigma = shape_diameter(shape);
  const Counter counter = pick_counter(embedding, sigma > 0.0);

  if (threads == 0) threads = default_thread_count();
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, n_all));

  std::vector<std::uint64_t> tallies(threads, 0);
  const std::uint64_t chunk = n_all / threads;
  const std::uint64_t extra = n_all % threads;
  const auto range_begin = [&](unsigned k) { return k * chunk + std::min<std::uint64_t>(k, extra); };

  if (threads == 1) {
    tallies[0] = counter(0, n_all, length, sigma, walls, rng);
  } else {
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for (unsigned k = 0; k < threads; ++k) {
      workers.emplace_back([&, k] {
        tallies[k] = counter(range_begin(k), range_begin(k + 1), length, sigma, walls, rng);
      });
    }
  }

  std::uint64_t hits = 0;
  for (const auto t : tallies) hits += t;
  return make_result(n_all, hits, rng);
}

}  // namespace

std::array<double, 4> trial_draws(const RngSpec& rng, std::uint64_t trial) {
  const auto block = Philox4x64::block({trial, rng.stream_index, 0, 0}, {rng.seed, 0});
  return {to_unit_interval(block[0]), to_unit_interval(block[1]), to_unit_interval(block[2]),
          to_unit_interval(block[3])};
}

Config sample_config(std::span<const double> draws, const GridCell& grid, Embedding embedding) {
  if (embedding == Embedding::TwoD) {
    if (draws.size() < 3) throw Error(ErrorCode::InvalidArgument, "2D pose needs 3 draws");
    return Config2D{grid.a * draws[0], grid.b * draws[1], pi * draws[2]};
  }
  if (draws.size() < 4) throw Error(ErrorCode::InvalidArgument, "3D pose needs 4 draws");
  return Config3D{grid.a * draws[0], grid.b * draws[1], pi / 2 * draws[2], pi * draws[3]};
}

Point lower_tip(double x_u, double y_u, double phi, double length) {
  return {x_u - length * std::cos(phi), y_u - length * std::sin(phi)};
}

bool intersects_needle(const Config2D& cfg, double length, const GridCell& grid) {
  const Point low = lower_tip(cfg.x_u, cfg.y_u, cfg.phi, length);
  return low.x < 0.0 || grid.a < low.x || low.y < 0.0 || grid.b < low.y;
}

bool intersects_needle(const Config3D& cfg, double length, const GridCell& grid) {
  return intersects_needle(Config2D{cfg.x_u, cfg.y_u, cfg.phi}, length * std::sin(cfg.psi), grid);
}

bool intersects_sc(const Config2D& cfg, double length, double sigma, const GridCell& grid) {
  const Walls walls{grid.a, grid.b, true};
  const Point low = lower_tip(cfg.x_u, cfg.y_u, cfg.phi, length);
  const double r = 0.5 * sigma;
  return disk_escapes(cfg.x_u, cfg.y_u, r, walls) || disk_escapes(low.x, low.y, r, walls);
}

bool intersects_sc(const Config3D& cfg, double length, double sigma, const GridCell& grid) {
  return intersects_sc(Config2D{cfg.x_u, cfg.y_u, cfg.phi}, length * std::sin(cfg.psi), sigma, grid);
}

SimResult make_result(std::uint64_t n_all, std::uint64_t n_coll, const RngSpec& rng) {
  SimResult result;
  result.n_all = n_all;
  result.n_coll = n_coll;
  result.p_hat = static_cast<double>(n_coll) / static_cast<double>(n_all);
  result.std_err = std::sqrt(result.p_hat * (1.0 - result.p_hat) / static_cast<double>(n_all));
  result.seed = rng.seed;
  result.stream_index = rng.stream_index;
  return result;
}

SimResult estimate(const Shape& shape, Embedding embedding, const GridCell& grid, std::uint64_t n_all,
                   const RngSpec& rng, unsigned threads) {
  const auto [cell, canonical] = validate_and_canonicalize(grid.a, grid.b, shape);
  return run(canonical, embedding, Walls{cell.a, cell.b, true}, n_all, rng, threads);
}

SimResult estimate_single_family(const Shape& shape, Embedding embedding, double b, std::uint64_t n_all,
                                 const RngSpec& rng, unsigned threads) {
  const auto [cell, canonical] = validate_and_canonicalize(b, b, shape);
  return run(canonical, embedding, Walls{1.0, cell.b, false}, n_all, rng, threads);
}

unsigned default_thread_count() {
  if (const char* env = std::getenv("NEEDLE_LAB_THREADS")) {
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && value > 0) return static_cast<unsigned>(value);
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

}  // namespace needle_lab
