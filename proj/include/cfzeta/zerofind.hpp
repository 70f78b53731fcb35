#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "cfzeta/errors.hpp"
#include "cfzeta/sums.hpp"

namespace cfzeta {

/// A refined near-zero of a truncated sum.
struct ZeroRecord {
  double s_re = 0, s_im = 0;
  double residual = 0;  // |sum| at the minimum
  std::uint64_t n = 0;
  SumKind kind = SumKind::kBaseline;
  std::uint32_t p = 0, q = 0;
  std::uint32_t iterations = 0;
  bool converged = false;

  Complex point() const { return Complex(s_re, s_im); }
};

struct RefineOptions {
  double tol = 1e-4;            // simplex spread tolerance, per coordinate
  std::uint32_t max_iter = 400;
  double initial_step = 0.05;   // first simplex edge
  // Points farther than this from the seed evaluate as +infinity. The
  // truncated sums all decay somewhere far out in the plane, so an
  // unbounded simplex can wander off chasing that trivial decay instead
  // of the nearby zero. 0 disables the bound.
  double search_radius = 10.0;
};

namespace detail {

// Nelder-Mead in the plane on a nonnegative objective. Returns the best
// vertex; converged means the simplex shrank below tol in both
// coordinates within the iteration budget.
struct SimplexResult {
  double x = 0, y = 0, f = 0;
  std::uint32_t iterations = 0;
  bool converged = false;
};

template <typename F>
SimplexResult nelder_mead_2d(const F& f, double x0, double y0,
                             const RefineOptions& opt) {
  struct Vertex {
    double x, y, f;
  };
  auto eval = [&](double x, double y) -> double {
    double v = f(x, y);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };
  std::array<Vertex, 3> v{
      Vertex{x0, y0, eval(x0, y0)},
      Vertex{x0 + opt.initial_step, y0, eval(x0 + opt.initial_step, y0)},
      Vertex{x0, y0 + opt.initial_step, eval(x0, y0 + opt.initial_step)}};
  auto order = [&] {
    std::sort(v.begin(), v.end(),
              [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
  };
  order();
  SimplexResult out;
  for (std::uint32_t it = 0; it < opt.max_iter; ++it) {
    out.iterations = it;
    const double spread_x =
        std::max({v[0].x, v[1].x, v[2].x}) - std::min({v[0].x, v[1].x, v[2].x});
    const double spread_y =
        std::max({v[0].y, v[1].y, v[2].y}) - std::min({v[0].y, v[1].y, v[2].y});
    if (spread_x < opt.tol && spread_y < opt.tol) {
      out.converged = true;
      break;
    }
    const double cx = 0.5 * (v[0].x + v[1].x);
    const double cy = 0.5 * (v[0].y + v[1].y);
    const double rx = cx + (cx - v[2].x);
    const double ry = cy + (cy - v[2].y);
    const double fr = eval(rx, ry);
    if (fr < v[0].f) {
      const double ex = cx + 2.0 * (cx - v[2].x);
      const double ey = cy + 2.0 * (cy - v[2].y);
      const double fe = eval(ex, ey);
      v[2] = fe < fr ? Vertex{ex, ey, fe} : Vertex{rx, ry, fr};
    } else if (fr < v[1].f) {
      v[2] = Vertex{rx, ry, fr};
    } else {
      const bool outside = fr < v[2].f;
      const double px = outside ? cx + 0.5 * (rx - cx) : cx + 0.5 * (v[2].x - cx);
      const double py = outside ? cy + 0.5 * (ry - cy) : cy + 0.5 * (v[2].y - cy);
      const double fp = eval(px, py);
      if (fp < (outside ? fr : v[2].f)) {
        v[2] = Vertex{px, py, fp};
      } else {
        // Shrink toward the best vertex.
        for (int i = 1; i < 3; ++i) {
          v[i].x = v[0].x + 0.5 * (v[i].x - v[0].x);
          v[i].y = v[0].y + 0.5 * (v[i].y - v[0].y);
          v[i].f = eval(v[i].x, v[i].y);
        }
      }
    }
    order();
  }
  out.x = v[0].x;
  out.y = v[0].y;
  out.f = v[0].f;
  return out;
}

}  // namespace detail

/// Derivative-free refinement of |sum(s)|^2 from a seed. After the
/// simplex converges, the point is nudged by tol-sized axis steps until
/// none of the four neighbors improves on it, so an admitted record is a
/// genuine discrete local minimum at the tol scale.
inline ZeroRecord refine_zero(const SumTable& table, Complex seed,
                              const RefineOptions& opt = {},
                              ThreadPool* pool = nullptr) {
  if (seed == Complex(1.0, 0.0)) {
    throw UsageError("refine_zero: seed must not be the pole s = 1");
  }
  auto objective = [&](double x, double y) -> double {
    if (opt.search_radius > 0 &&
        std::abs(Complex(x, y) - seed) > opt.search_radius) {
      return std::numeric_limits<double>::infinity();
    }
    try {
      const Complex v = table.evaluate(Complex(x, y), pool);
      return std::norm(v);
    } catch (const Error&) {
      return std::numeric_limits<double>::infinity();
    }
  };
  detail::SimplexResult r =
      detail::nelder_mead_2d(objective, seed.real(), seed.imag(), opt);
  // Axis polish at the tol scale.
  double bx = r.x, by = r.y, bf = r.f;
  for (int round = 0; round < 64; ++round) {
    bool moved = false;
    const double dx[4] = {opt.tol, -opt.tol, 0, 0};
    const double dy[4] = {0, 0, opt.tol, -opt.tol};
    for (int k = 0; k < 4; ++k) {
      const double fx = objective(bx + dx[k], by + dy[k]);
      if (fx < bf) {
        bx += dx[k];
        by += dy[k];
        bf = fx;
        moved = true;
      }
    }
    if (!moved) break;
  }
  ZeroRecord rec;
  rec.s_re = bx;
  rec.s_im = by;
  rec.residual = std::sqrt(bf);
  rec.n = table.spec().n;
  rec.kind = table.spec().kind;
  rec.p = table.spec().p;
  rec.q = table.spec().q;
  rec.iterations = r.iterations;
  rec.converged = r.converged;
  return rec;
}

inline ZeroRecord refine_zero(const SumSpec& spec, Complex seed,
                              const RefineOptions& opt = {},
                              ThreadPool* pool = nullptr) {
  return refine_zero(SumTable::build(spec, pool), seed, opt, pool);
}

/// Grid nodes that are strict 8-neighborhood local minima of |sum| with
/// value below the threshold. NaN cells (pole/overflow flags) never
/// qualify and compare as +infinity neighbors.
struct ZeroCandidate {
  Complex s;
  double abs_value = 0;
};

inline std::vector<ZeroCandidate> scan_zero_candidates(
    const SumSpec& spec, const GridSpec& grid, double threshold,
    ThreadPool* pool = nullptr) {
  ScanResult scan = strip_scan(spec, grid, pool);
  auto cell = [&](std::ptrdiff_t j, std::ptrdiff_t i) -> double {
    if (j < 0 || i < 0 || j >= std::ptrdiff_t(scan.im_count) ||
        i >= std::ptrdiff_t(scan.re_count)) {
      return std::numeric_limits<double>::infinity();
    }
    const double v = scan.at(std::size_t(j), std::size_t(i));
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  };
  std::vector<ZeroCandidate> out;
  for (std::size_t j = 0; j < scan.im_count; ++j) {
    for (std::size_t i = 0; i < scan.re_count; ++i) {
      const double v = scan.at(j, i);
      if (std::isnan(v) || v >= threshold) continue;
      bool is_min = true;
      for (int dj = -1; dj <= 1 && is_min; ++dj) {
        for (int di = -1; di <= 1; ++di) {
          if (dj == 0 && di == 0) continue;
          if (cell(std::ptrdiff_t(j) + dj, std::ptrdiff_t(i) + di) < v) {
            is_min = false;
            break;
          }
        }
      }
      if (is_min) {
        out.push_back({Complex(grid.re_at(i), grid.im_at(j)), v});
      }
    }
  }
  return out;
}

/// Track one zero across a ladder of N values. With warm starts each N
/// is seeded from the previous record's location; the fixed policy
/// reuses the given seed every time. Non-converged refinements are
/// flagged and the series continues.
enum class SeedPolicy { kWarmStart, kFixed };

struct ZeroSeries {
  std::vector<ZeroRecord> records;
};

inline ZeroSeries zero_series(
    std::uint32_t p, std::uint32_t q, std::uint64_t n_lo, std::uint64_t n_hi,
    std::uint64_t n_step, Complex seed = Complex(0.5, 14.92),
    SeedPolicy policy = SeedPolicy::kWarmStart, const RefineOptions& opt = {},
    ThreadPool* pool = nullptr,
    const std::function<void(const ZeroRecord&)>& on_record = nullptr) {
  if (n_lo > n_hi) throw UsageError("zero_series: N_lo must be <= N_hi");
  if (n_step < 1) throw UsageError("zero_series: N step must be >= 1");
  ZeroSeries out;
  Complex current = seed;
  const std::uint64_t count = (n_hi - n_lo) / n_step + 1;
  for (std::uint64_t k = 0; k < count; ++k) {
    const std::uint64_t n = n_lo + k * n_step;
    SumTable table = SumTable::build({SumKind::kPermuted, n, p, q}, pool);
    ZeroRecord rec = refine_zero(table, current, opt, pool);
    if (policy == SeedPolicy::kWarmStart) current = rec.point();
    out.records.push_back(rec);
    if (on_record) on_record(rec);
  }
  return out;
}

/// Dominant/artifact classification: a refined zero is dominant when the
/// refinement repeated at 2N stays below the threshold and lands within
/// 0.1 of the original location.
enum class ZeroClass { kDominant, kArtifact };

inline ZeroClass classify_zero(const ZeroRecord& rec, double threshold,
                               ThreadPool* pool = nullptr) {
  if (!(rec.residual < threshold)) return ZeroClass::kArtifact;
  SumSpec spec{rec.kind, rec.n * 2, rec.p, rec.q};
  ZeroRecord again = refine_zero(spec, rec.point(), {}, pool);
  const bool stays =
      again.residual < threshold &&
      std::abs(again.point() - rec.point()) < 0.1;
  return stays ? ZeroClass::kDominant : ZeroClass::kArtifact;
}

}  // namespace cfzeta
