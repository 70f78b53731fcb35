#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "cfzeta/cf.hpp"
#include "cfzeta/errors.hpp"
#include "cfzeta/parallel.hpp"
#include "cfzeta/rational.hpp"
#include "cfzeta/reduce.hpp"

namespace cfzeta {

using Complex = std::complex<double>;

/// Which truncated sum family to evaluate.
enum class SumKind {
  kPermuted,     // digit-swap weights S_{p,q}(x_n)
  kBaseline,     // Gauss-map weights h(x_n)
  kShadow,       // identity weights x_n (no permutation)
  kPartialZeta,  // sum of n^{-s}, no abscissa grid
};

inline const char* to_string(SumKind k) {
  switch (k) {
    case SumKind::kPermuted: return "permuted";
    case SumKind::kBaseline: return "baseline";
    case SumKind::kShadow: return "shadow";
    case SumKind::kPartialZeta: return "partial-zeta";
  }
  return "?";
}

inline SumKind sum_kind_from_string(const std::string& s) {
  if (s == "permuted") return SumKind::kPermuted;
  if (s == "baseline") return SumKind::kBaseline;
  if (s == "shadow") return SumKind::kShadow;
  if (s == "partial-zeta") return SumKind::kPartialZeta;
  throw UsageError("unknown sum kind: " + s);
}

struct SumSpec {
  SumKind kind = SumKind::kBaseline;
  std::uint64_t n = 1;     // abscissa count N (or series length for Z_N)
  std::uint32_t p = 1;     // permuted only
  std::uint32_t q = 1;

  void validate() const {
    if (n < 1) throw UsageError("SumSpec: N must be >= 1");
    if (kind == SumKind::kPermuted && (p < 1 || q < 1)) {
      throw UsageError("SumSpec: permuted sums need p, q >= 1");
    }
  }

  std::string to_string() const {
    std::string s = cfzeta::to_string(kind);
    s += " N=" + std::to_string(n);
    if (kind == SumKind::kPermuted) {
      s += " p=" + std::to_string(p) + " q=" + std::to_string(q);
    }
    return s;
  }
};

/// Rectangular grid in the complex s-plane. Nodes are lo + i*step per
/// axis, endpoints included (within a half-step fuzz for the count).
struct GridSpec {
  double re_lo = 0, re_hi = 0, re_step = 1;
  double im_lo = 0, im_hi = 0, im_step = 1;

  void validate() const {
    if (!(re_lo <= re_hi) || !(im_lo <= im_hi)) {
      throw UsageError("GridSpec: lo must not exceed hi");
    }
    if (!(re_step > 0) || !(im_step > 0)) {
      throw UsageError("GridSpec: steps must be positive");
    }
  }

  std::size_t re_count() const {
    return std::size_t(std::floor((re_hi - re_lo) / re_step + 1e-9)) + 1;
  }
  std::size_t im_count() const {
    return std::size_t(std::floor((im_hi - im_lo) / im_step + 1e-9)) + 1;
  }
  double re_at(std::size_t i) const { return re_lo + double(i) * re_step; }
  double im_at(std::size_t j) const { return im_lo + double(j) * im_step; }
};

/// Precomputed s-independent data for one SumSpec: per-term weights and
/// logarithms. Weights come from exact rational arithmetic (continued
/// fractions) and are converted to double once; everything downstream is
/// plain floating point.
class SumTable {
 public:
  static SumTable build(const SumSpec& spec, ThreadPool* pool = nullptr) {
    spec.validate();
    SumTable t;
    t.spec_ = spec;
    const std::uint64_t N = spec.n;
    if (spec.kind == SumKind::kPartialZeta) {
      t.log_.resize(N);
      auto fill = [&](std::size_t block) {
        const std::uint64_t lo = block * kBlock;
        const std::uint64_t hi = std::min<std::uint64_t>(lo + kBlock, N);
        for (std::uint64_t i = lo; i < hi; ++i) {
          t.log_[i] = std::log(double(i + 1));
        }
      };
      run_blocks(N, fill, pool);
      return t;
    }
    t.weight_.resize(N);
    t.log_.resize(N);
    auto fill = [&](std::size_t block) {
      const std::uint64_t lo = block * kBlock;
      const std::uint64_t hi = std::min<std::uint64_t>(lo + kBlock, N);
      for (std::uint64_t i = lo; i < hi; ++i) {
        const double num = double(2 * i + 1);
        const double den = double(2 * N);
        t.log_[i] = std::log(num / den);
        switch (spec.kind) {
          case SumKind::kShadow:
            t.weight_[i] = num / den;
            break;
          case SumKind::kBaseline: {
            Rational x(BigInt(2 * i + 1), BigInt(2 * N));
            t.weight_[i] = gauss_map(x).to_double();
            break;
          }
          case SumKind::kPermuted: {
            Rational x(BigInt(2 * i + 1), BigInt(2 * N));
            t.weight_[i] = digit_swap(x, spec.p, spec.q).to_double();
            break;
          }
          default:
            break;
        }
      }
    };
    run_blocks(N, fill, pool);
    return t;
  }

  /// Reassemble from cached arrays (cache integrity is the caller's job).
  static SumTable from_arrays(const SumSpec& spec, std::vector<double> weights,
                              std::vector<double> logs) {
    SumTable t;
    t.spec_ = spec;
    t.weight_ = std::move(weights);
    t.log_ = std::move(logs);
    return t;
  }

  const SumSpec& spec() const noexcept { return spec_; }
  const std::vector<double>& weights() const noexcept { return weight_; }
  const std::vector<double>& log_abscissas() const noexcept { return log_; }

  /// The bare term sum: sum of w_n * x_n^(s-1) for the abscissa kinds,
  /// or sum of n^(-s) for partial zeta.
  Complex raw_sum(Complex s, ThreadPool* pool = nullptr) const {
    if (spec_.kind == SumKind::kPartialZeta) {
      const Complex ms = -s;
      check_exp_range(ms);
      Complex r = deterministic_sum<Complex>(
          log_.size(), [&](std::size_t i) { return std::exp(ms * log_[i]); },
          pool);
      ensure_finite(r);
      return r;
    }
    const Complex e = s - 1.0;
    check_exp_range(e);
    Complex r = deterministic_sum<Complex>(
        log_.size(),
        [&](std::size_t i) { return weight_[i] * std::exp(e * log_[i]); },
        pool);
    ensure_finite(r);
    return r;
  }

  /// Full sum value. For the three abscissa kinds this is
  /// s/(s-1) - (s/N) * raw_sum(s), with a hard pole error at s = 1.
  Complex evaluate(Complex s, ThreadPool* pool = nullptr) const {
    if (spec_.kind == SumKind::kPartialZeta) return raw_sum(s, pool);
    if (s == Complex(1.0, 0.0)) {
      throw PoleError("sum has a pole at s = 1");
    }
    Complex r = s / (s - 1.0) - (s / double(spec_.n)) * raw_sum(s, pool);
    ensure_finite(r);
    return r;
  }

 private:
  static constexpr std::size_t kBlock = 1024;

  template <typename F>
  static void run_blocks(std::uint64_t n, const F& fill, ThreadPool* pool) {
    const std::size_t nblocks = std::size_t((n + kBlock - 1) / kBlock);
    if (pool != nullptr && pool->workers() > 1 && nblocks > 1) {
      pool->parallel_for(nblocks, fill);
    } else {
      for (std::size_t b = 0; b < nblocks; ++b) fill(b);
    }
  }

  void check_exp_range(Complex exponent) const {
    if (log_.empty()) return;
    // log table is monotone: extremes sit at the ends.
    const double a = exponent.real() * log_.front();
    const double b = exponent.real() * log_.back();
    if (std::max(a, b) > 709.0) {
      throw OverflowError("sum term exceeds double range (|Re s| too large)");
    }
  }

  static void ensure_finite(Complex v) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw OverflowError("sum evaluated to a non-finite value");
    }
  }

  SumSpec spec_;
  std::vector<double> weight_;
  std::vector<double> log_;
};

// One-shot conveniences. Each call builds the table afresh; hot paths
// should hold a SumTable (or use the cache in the CLI layer) instead.

inline Complex permuted_zeta_sum(std::uint64_t N, std::uint32_t p,
                                 std::uint32_t q, Complex s,
                                 ThreadPool* pool = nullptr) {
  return SumTable::build({SumKind::kPermuted, N, p, q}, pool).evaluate(s, pool);
}

inline Complex baseline_zeta_sum(std::uint64_t N, Complex s,
                                 ThreadPool* pool = nullptr) {
  return SumTable::build({SumKind::kBaseline, N}, pool).evaluate(s, pool);
}

inline Complex shadow_sum(std::uint64_t N, Complex s,
                          ThreadPool* pool = nullptr) {
  return SumTable::build({SumKind::kShadow, N}, pool).evaluate(s, pool);
}

inline Complex partial_zeta_sum(std::uint64_t N, Complex s,
                                ThreadPool* pool = nullptr) {
  return SumTable::build({SumKind::kPartialZeta, N}, pool).evaluate(s, pool);
}

/// Relative defect of the rewrite of the midpoint power sum through
/// partial zeta sums:
///   sum_n ((2n+1)/2N)^s == (2N)^(-s) [Z_{2N-1}(-s) - 2^s Z_{N-1}(-s)].
/// Returns |LHS - RHS| / (|LHS| + 1).
inline double shadow_identity_residual(std::uint64_t N, Complex s,
                                       ThreadPool* pool = nullptr) {
  if (N < 2) throw UsageError("shadow_identity_residual: N must be >= 2");
  SumTable shadow = SumTable::build({SumKind::kShadow, N}, pool);
  const Complex lhs = shadow.raw_sum(s, pool);
  const Complex z2n = partial_zeta_sum(2 * N - 1, -s, pool);
  const Complex zn = partial_zeta_sum(N - 1, -s, pool);
  const Complex rhs =
      std::exp(-s * std::log(double(2 * N))) * (z2n - std::exp(s * std::log(2.0)) * zn);
  return std::abs(lhs - rhs) / (std::abs(lhs) + 1.0);
}

/// |sum| over a grid; pole/overflow cells carry NaN instead of aborting
/// the scan. Row-major: values[j * re_count + i] with j indexing Im(s)
/// ascending and i indexing Re(s) ascending.
struct ScanResult {
  GridSpec grid;
  std::size_t re_count = 0;
  std::size_t im_count = 0;
  std::vector<double> values;

  double at(std::size_t im_idx, std::size_t re_idx) const {
    return values[im_idx * re_count + re_idx];
  }
};

inline ScanResult strip_scan(const SumSpec& spec, const GridSpec& grid,
                             ThreadPool* pool = nullptr) {
  spec.validate();
  grid.validate();
  SumTable table = SumTable::build(spec, pool);
  ScanResult out;
  out.grid = grid;
  out.re_count = grid.re_count();
  out.im_count = grid.im_count();
  out.values.assign(out.re_count * out.im_count,
                    std::numeric_limits<double>::quiet_NaN());
  auto row = [&](std::size_t j) {
    const double im = grid.im_at(j);
    for (std::size_t i = 0; i < out.re_count; ++i) {
      Complex s(grid.re_at(i), im);
      try {
        out.values[j * out.re_count + i] = std::abs(table.evaluate(s));
      } catch (const PoleError&) {
      } catch (const OverflowError&) {
      }
    }
  };
  if (pool != nullptr && pool->workers() > 1 && out.im_count > 1) {
    pool->parallel_for(out.im_count, row);
  } else {
    for (std::size_t j = 0; j < out.im_count; ++j) row(j);
  }
  return out;
}

/// Sum values along the critical line s = 1/2 + i*t for equally spaced t.
struct PhasePoint {
  double t;
  Complex value;
};

inline std::vector<PhasePoint> phase_trace(const SumSpec& spec, double t_lo,
                                           double t_hi, std::size_t steps,
                                           ThreadPool* pool = nullptr) {
  spec.validate();
  if (steps < 1) throw UsageError("phase_trace: steps must be >= 1");
  if (steps > 1 && !(t_lo < t_hi)) {
    throw UsageError("phase_trace: t_lo must be < t_hi");
  }
  SumTable table = SumTable::build(spec, pool);
  std::vector<PhasePoint> out(steps);
  auto point = [&](std::size_t k) {
    const double t =
        steps == 1 ? t_lo : t_lo + (t_hi - t_lo) * double(k) / double(steps - 1);
    out[k] = {t, table.evaluate(Complex(0.5, t))};
  };
  if (pool != nullptr && pool->workers() > 1 && steps > 1) {
    pool->parallel_for(steps, point);
  } else {
    for (std::size_t k = 0; k < steps; ++k) point(k);
  }
  return out;
}

}  // namespace cfzeta
