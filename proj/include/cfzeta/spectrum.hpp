#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "cfzeta/errors.hpp"
#include "cfzeta/reduce.hpp"

namespace cfzeta {

/// One-sided power spectrum of a real series in cycles per sample.
/// The series is mean-subtracted, transformed by the plain DFT, and the
/// squared magnitudes are folded onto positive frequencies with a 1/n
/// normalization, so that sum(power) equals length * variance up to
/// rounding (the DC bin is dropped; it is zero after mean removal).
struct Spectrum {
  std::vector<double> freqs;
  std::vector<double> power;
  std::size_t length = 0;
  double variance = 0;
};

enum class Window { kNone, kHann };

inline Spectrum power_spectrum(const std::vector<double>& series,
                               Window window = Window::kNone) {
  const std::size_t n = series.size();
  if (n < 8) throw DomainError("power_spectrum: need at least 8 samples");
  double mean = 0;
  for (double v : series) mean += v;
  mean /= double(n);
  std::vector<double> x(n);
  for (std::size_t j = 0; j < n; ++j) {
    x[j] = series[j] - mean;
    if (window == Window::kHann) {
      x[j] *= 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * double(j) /
                                    double(n - 1)));
    }
  }
  double var = 0;
  for (double v : x) var += v * v;
  var /= double(n);

  // Plain DFT through a mod-n twiddle table; each bin is summed with the
  // fixed pairwise reduction for accuracy and determinism.
  std::vector<std::complex<double>> tw(n);
  for (std::size_t r = 0; r < n; ++r) {
    tw[r] = std::polar(1.0, -2.0 * std::numbers::pi * double(r) / double(n));
  }
  const std::size_t half = n / 2;
  std::vector<std::complex<double>> bins(n);
  for (std::size_t k = 0; k < n; ++k) {
    bins[k] = deterministic_sum<std::complex<double>>(
        n, [&](std::size_t j) { return x[j] * tw[(k * j) % n]; });
  }

  Spectrum out;
  out.length = n;
  out.variance = var;
  out.freqs.reserve(half);
  out.power.reserve(half);
  for (std::size_t k = 1; k <= half; ++k) {
    const double pk =
        (k * 2 == n)
            ? std::norm(bins[k]) / double(n)
            : (std::norm(bins[k]) + std::norm(bins[n - k])) / double(n);
    out.freqs.push_back(double(k) / double(n));
    out.power.push_back(pk);
  }
  return out;
}

/// Fitted log-log line through a frequency band of a spectrum.
struct SpectrumFit {
  std::vector<double> freqs;
  std::vector<double> power;
  double slope = 0;
  double intercept = 0;
  double f_lo = 0, f_hi = 0;
  std::size_t n_bins = 0;
};

/// Default fit band: drop the lowest 5% of frequency bins (the small
/// sample size pollutes them) and keep everything up to Nyquist.
inline std::pair<double, double> default_fit_band(const Spectrum& s) {
  if (s.freqs.empty()) throw DomainError("default_fit_band: empty spectrum");
  const std::size_t skip = (s.freqs.size() * 5 + 99) / 100;
  const std::size_t idx = std::min(skip, s.freqs.size() - 1);
  return {s.freqs[idx], s.freqs.back()};
}

/// Least squares of log(power) on log(freq) over bins inside
/// [f_lo, f_hi] with positive power.
inline SpectrumFit fit_loglog_slope(const Spectrum& s, double f_lo,
                                    double f_hi) {
  SpectrumFit fit;
  fit.freqs = s.freqs;
  fit.power = s.power;
  fit.f_lo = f_lo;
  fit.f_hi = f_hi;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t m = 0;
  for (std::size_t i = 0; i < s.freqs.size(); ++i) {
    const double f = s.freqs[i];
    const double p = s.power[i];
    if (f < f_lo || f > f_hi || !(p > 0)) continue;
    const double lx = std::log(f);
    const double ly = std::log(p);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m;
  }
  if (m < 8) {
    throw DomainError("fit_loglog_slope: band holds fewer than 8 usable bins");
  }
  const double denom = double(m) * sxx - sx * sx;
  fit.slope = (double(m) * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / double(m);
  fit.n_bins = m;
  return fit;
}

inline SpectrumFit fit_loglog_slope(const Spectrum& s) {
  auto [lo, hi] = default_fit_band(s);
  return fit_loglog_slope(s, lo, hi);
}

/// Parseval defect |sum(power) - length*variance| / (length*variance).
inline double parseval_residual(const std::vector<double>& series) {
  Spectrum s = power_spectrum(series);
  double total = 0;
  for (double p : s.power) total += p;
  const double expect = double(s.length) * s.variance;
  if (expect == 0.0) return std::abs(total);
  return std::abs(total - expect) / expect;
}

}  // namespace cfzeta
