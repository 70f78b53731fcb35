#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <vector>

#include "cfzeta/bigint.hpp"
#include "cfzeta/errors.hpp"
#include "cfzeta/parallel.hpp"
#include "cfzeta/rational.hpp"
#include "cfzeta/sums.hpp"

namespace cfzeta {

/// One linear-fractional piece (ax+b)/(cx+d) of the first-two-digit swap,
/// valid on the open cell whose points start with digits (a1, a2).
struct MobiusPiece {
  BigInt a, b, c, d;
  Rational cell_lo, cell_hi;
  std::uint32_t a1 = 0, a2 = 0;

  Rational apply(const Rational& x) const {
    return (Rational(a) * x + Rational(b)) / (Rational(c) * x + Rational(d));
  }
  bool is_identity() const noexcept { return c.is_zero(); }
};

/// Coefficients and cell of the swap piece indexed by the leading two
/// digits:
///   a = 1 + a1(a2-a1), b = a1-a2, c = (a2-a1)(1+a1*a2), d = 1 + a2(a1-a2)
/// on the cell (a2/(1+a1*a2), (1+a2)/(1+a1+a1*a2)). The determinant is
/// +1 for every (a1, a2).
inline MobiusPiece mobius_coeffs(std::uint32_t a1, std::uint32_t a2) {
  if (a1 < 1 || a2 < 1) throw DomainError("mobius_coeffs: digits must be >= 1");
  const BigInt A1(a1), A2(a2);
  const BigInt diff = A2 - A1;
  MobiusPiece p;
  p.a1 = a1;
  p.a2 = a2;
  p.a = BigInt(1) + A1 * diff;
  p.b = A1 - A2;
  p.c = diff * (BigInt(1) + A1 * A2);
  p.d = BigInt(1) - A2 * diff;
  p.cell_lo = Rational(A2, BigInt(1) + A1 * A2);
  p.cell_hi = Rational(BigInt(1) + A2, BigInt(1) + A1 + A1 * A2);
  if (p.a * p.d - p.b * p.c != BigInt(1)) {
    throw Error("mobius_coeffs: determinant is not 1");
  }
  if (!(Rational(0) < p.cell_lo && p.cell_lo < p.cell_hi &&
        p.cell_hi <= Rational(1))) {
    throw Error("mobius_coeffs: malformed cell interval");
  }
  return p;
}

/// Truncation controls for the Newton-series machinery. kmax is the
/// starting term count; evaluation doubles it until the value moves by
/// less than series_rel_tol (relative), giving up at kmax_cap.
struct SeriesTruncation {
  std::uint32_t kmax = 64;
  std::uint32_t a1max = 200;
  std::uint32_t a2max = 200;
  double series_rel_tol = 1e-10;
  std::uint32_t kmax_cap = 4096;
};

/// Result of a truncated series evaluation. inside_convergence reports
/// whether the expansion point satisfied |1 + x/alpha| < 1; a false value
/// is the divergence warning (the truncated value is still returned).
struct SeriesEval {
  Complex value{};
  bool inside_convergence = true;
  std::uint32_t terms_used = 0;
};

namespace detail {

inline bool is_nonneg_int(Complex s) {
  return s.imag() == 0.0 && s.real() >= 0.0 &&
         s.real() == std::floor(s.real()) && s.real() < 1e6;
}

// x^e for positive real x, complex e.
inline Complex cpow_pos(double x, Complex e) {
  return std::exp(e * std::log(x));
}

}  // namespace detail

/// Truncated antiderivative of x^s/(x+alpha):
///   F(s,a;x) = (-a)^s [ ln(x+a) + sum_{k>=1} ((-1)^k/k) C(s,k) (1+x/a)^k ]
/// Meaningful only in definite differences, which cancel the integration
/// constant (and the log's branch offset when x+alpha keeps one sign).
inline SeriesEval newton_antiderivative(Complex s, const Rational& alpha,
                                        double x, std::uint32_t kmax) {
  if (alpha.is_zero()) {
    throw DomainError("newton_antiderivative: alpha must be nonzero");
  }
  const double a = alpha.to_double();
  if (x + a == 0.0) {
    throw DomainError("newton_antiderivative: singular at x = -alpha");
  }
  if (kmax < 1) throw UsageError("newton_antiderivative: kmax must be >= 1");
  const double u = 1.0 + x / a;
  SeriesEval out;
  out.inside_convergence = std::abs(u) < 1.0;
  Complex acc = std::log(Complex(x + a, 0.0));
  Complex binom(1.0, 0.0);  // C(s,k), starting at k = 0
  double upow = 1.0;
  for (std::uint32_t k = 1; k <= kmax; ++k) {
    binom *= (s - double(k - 1)) / double(k);
    upow *= u;
    const double sgn = (k & 1) ? -1.0 : 1.0;
    acc += (sgn / double(k)) * binom * upow;
    out.terms_used = k;
    if (binom == Complex(0.0, 0.0)) break;  // integer s: series terminated
  }
  out.value = std::pow(Complex(-a, 0.0), s) * acc;
  return out;
}

namespace detail {

// Definite difference F(s,alpha;hi) - F(s,alpha;lo) in fused form, with
// the endpoint ratios u = 1 + x/alpha supplied exactly by the caller:
//   (-alpha)^s [ ln(u_hi/u_lo) + sum ((-1)^k/k) C(s,k) (u_hi^k - u_lo^k) ]
// Requires -alpha > 0 and u_hi/u_lo > 0 (no pole between the endpoints).
inline Complex fseries_definite(Complex s, double alpha, double u_lo,
                                double u_hi, std::uint32_t kmax,
                                std::uint32_t* terms = nullptr) {
  Complex acc = std::log(u_hi / u_lo);
  Complex binom(1.0, 0.0);
  double plo = 1.0, phi = 1.0;
  for (std::uint32_t k = 1; k <= kmax; ++k) {
    binom *= (s - double(k - 1)) / double(k);
    plo *= u_lo;
    phi *= u_hi;
    const double sgn = (k & 1) ? -1.0 : 1.0;
    acc += (sgn / double(k)) * binom * (phi - plo);
    if (terms) *terms = k;
    if (binom == Complex(0.0, 0.0)) break;
  }
  return cpow_pos(-alpha, s) * acc;
}

// Newton-series route for one cell: (a/c) dF(s) + (b/c) dF(s-1).
// Converges when |u| < 1 at both endpoints (u = (cx+d)/d).
inline Complex cell_integral_fseries(const MobiusPiece& p, Complex s,
                                     const SeriesTruncation& tr) {
  const double alpha = (Rational(p.d) / Rational(p.c)).to_double();
  const double u_lo =
      ((Rational(p.c) * p.cell_lo + Rational(p.d)) / Rational(p.d)).to_double();
  const double u_hi =
      ((Rational(p.c) * p.cell_hi + Rational(p.d)) / Rational(p.d)).to_double();
  const double ac = (Rational(p.a) / Rational(p.c)).to_double();
  const double bc = (Rational(p.b) / Rational(p.c)).to_double();
  std::uint32_t kmax = tr.kmax < 1 ? 1 : tr.kmax;
  Complex prev;
  bool have_prev = false;
  for (;; kmax *= 2) {
    Complex v = ac * fseries_definite(s, alpha, u_lo, u_hi, kmax) +
                bc * fseries_definite(s - 1.0, alpha, u_lo, u_hi, kmax);
    if (have_prev && std::abs(v - prev) <= tr.series_rel_tol * (std::abs(v) + 1e-30)) {
      return v;
    }
    prev = v;
    have_prev = true;
    if (kmax >= tr.kmax_cap) return prev;
  }
}

// nu_m(tau) = integral over the cell of x^tau (x - xc)^m dx at the
// degenerate index tau + 1 + m == 0, by direct binomial expansion. Only
// reached for integer real tau < 0, where m stays small.
inline Complex nu_direct_degenerate(Complex tau, std::uint32_t m, double lo,
                                    double hi, double xc) {
  Complex acc(0.0, 0.0);
  double coef = 1.0;  // C(m,j) (-xc)^(m-j), built incrementally below
  // Build binomial coefficients C(m,j) in a small table.
  std::vector<double> binom(m + 1, 1.0);
  for (std::uint32_t j = 1; j <= m; ++j) {
    binom[j] = binom[j - 1] * double(m - j + 1) / double(j);
  }
  for (std::uint32_t j = 0; j <= m; ++j) {
    coef = binom[j] * std::pow(-xc, double(m - j));
    const Complex e = tau + double(j);
    if (std::abs(e + 1.0) < 1e-15) {
      acc += coef * std::log(hi / lo);
    } else {
      acc += coef * (cpow_pos(hi, e + 1.0) - cpow_pos(lo, e + 1.0)) / (e + 1.0);
    }
  }
  return acc;
}

// Midpoint route: expand 1/(cx+d) about the cell midpoint and integrate
// term by term,
//   I = sum_m (-c)^m / w^(m+1) [ a nu_m(s) + b nu_m(s-1) ],
// with w = c*xc + d and nu_m(tau) obtained from the stable
// integration-by-parts recurrence
//   nu_m = (B_m - m*xc*nu_{m-1}) / (tau + 1 + m),
//   B_m  = hi^(tau+1) h^m - lo^(tau+1) (-h)^m,   h = (hi-lo)/2.
// The geometric ratio is halfwidth/|pole - midpoint| < 1 for every valid
// cell, uniformly in s; this route covers the cells where the Newton
// series leaves its disc of convergence (notably the (1,2) cell).
inline Complex cell_integral_midpoint(const MobiusPiece& p, Complex s,
                                      const SeriesTruncation& tr) {
  const Rational mid = (p.cell_lo + p.cell_hi) / Rational(2);
  const Rational half = (p.cell_hi - p.cell_lo) / Rational(2);
  const double xc = mid.to_double();
  const double h = half.to_double();
  const double lo = p.cell_lo.to_double();
  const double hi = p.cell_hi.to_double();
  const double w = (Rational(p.c) * mid + Rational(p.d)).to_double();
  const double cd = p.c.to_double();
  const double ad = p.a.to_double();
  const double bd = p.b.to_double();

  const Complex tauA = s;        // multiplies a
  const Complex tauB = s - 1.0;  // multiplies b
  const Complex phiA = cpow_pos(hi, tauA + 1.0);
  const Complex ploA = cpow_pos(lo, tauA + 1.0);
  const Complex phiB = cpow_pos(hi, tauB + 1.0);
  const Complex ploB = cpow_pos(lo, tauB + 1.0);

  Complex nuA = (phiA - ploA) / (tauA + 1.0);
  Complex nuB = (phiB - ploB) / (tauB + 1.0);
  double factor = 1.0 / w;  // (-c)^m / w^(m+1)
  Complex acc = factor * (ad * nuA + bd * nuB);
  double hp_hi = 1.0, hp_lo = 1.0;  // h^m and (-h)^m
  int calm = 0;
  int growing = 0;
  double prev_mag = std::numeric_limits<double>::infinity();
  const std::uint32_t cap = 400;
  for (std::uint32_t m = 1; m <= cap; ++m) {
    hp_hi *= h;
    hp_lo *= -h;
    factor *= -cd / w;
    const Complex bA = phiA * hp_hi - ploA * hp_lo;
    const Complex bB = phiB * hp_hi - ploB * hp_lo;
    const Complex denA = tauA + 1.0 + double(m);
    const Complex denB = tauB + 1.0 + double(m);
    nuA = (std::abs(denA) < 1e-15)
              ? nu_direct_degenerate(tauA, m, lo, hi, xc)
              : (bA - double(m) * xc * nuA) / denA;
    nuB = (std::abs(denB) < 1e-15)
              ? nu_direct_degenerate(tauB, m, lo, hi, xc)
              : (bB - double(m) * xc * nuB) / denB;
    const Complex term = factor * (ad * nuA + bd * nuB);
    acc += term;
    const double mag = std::abs(term);
    const double scale = std::abs(acc) + 1e-30;
    if (mag <= tr.series_rel_tol * scale) {
      if (++calm >= 2) return acc;
    } else {
      calm = 0;
    }
    // Once terms start growing again the recurrence has hit its rounding
    // floor; nothing further can be gained. Growth while terms are still
    // significant would mean the expansion genuinely diverges.
    if (mag > prev_mag) {
      if (++growing >= 3) {
        if (mag <= 1e-6 * scale) return acc;
        throw ConvergenceError(
            "cell_integral_midpoint: expansion is not converging");
      }
    } else {
      growing = 0;
    }
    prev_mag = mag;
  }
  throw ConvergenceError("cell_integral_midpoint: no convergence in 400 terms");
}

}  // namespace detail

/// Definite integral of (ax+b)/(cx+d) x^(s-1) over the piece's own cell.
///
/// Routing: identity pieces (c = 0) use the closed form; nonnegative
/// integer s makes the Newton series a finite polynomial, exact on any
/// cell; otherwise the Newton route runs where both endpoints satisfy
/// |1 + x/alpha| < 1 with margin, and the midpoint expansion covers the
/// rest.
inline Complex mobius_cell_integral(const MobiusPiece& p, Complex s,
                                    const SeriesTruncation& tr = {}) {
  if (s == Complex(0.0, 0.0) || s == Complex(1.0, 0.0)) {
    throw DomainError("mobius_cell_integral: s in {0,1} is excluded");
  }
  const double lo = p.cell_lo.to_double();
  const double hi = p.cell_hi.to_double();
  if (p.c.is_zero()) {
    if (p.d.is_zero()) throw DomainError("mobius_cell_integral: c = d = 0");
    // (a/d) x^(s+1)/(s+1) + (b/d) x^s/s, differenced; b is always 0 for
    // the identity pieces but the general form is kept.
    const double ad = (Rational(p.a) / Rational(p.d)).to_double();
    const double bd = (Rational(p.b) / Rational(p.d)).to_double();
    Complex acc(0.0, 0.0);
    if (ad != 0.0) {
      if (s == Complex(-1.0, 0.0)) {
        acc += ad * std::log(hi / lo);
      } else {
        acc += ad * (detail::cpow_pos(hi, s + 1.0) - detail::cpow_pos(lo, s + 1.0)) /
               (s + 1.0);
      }
    }
    if (bd != 0.0) {
      acc += bd * (detail::cpow_pos(hi, s) - detail::cpow_pos(lo, s)) / s;
    }
    return acc;
  }
  // The pole of the piece must not fall inside the closed cell.
  const Rational pole = Rational(-p.d) / Rational(p.c);
  if (p.cell_lo <= pole && pole <= p.cell_hi) {
    throw DomainError("mobius_cell_integral: pole inside the cell");
  }
  if (detail::is_nonneg_int(s)) {
    return detail::cell_integral_fseries(p, s, tr);
  }
  const double u_lo =
      ((Rational(p.c) * p.cell_lo + Rational(p.d)) / Rational(p.d)).to_double();
  const double u_hi =
      ((Rational(p.c) * p.cell_hi + Rational(p.d)) / Rational(p.d)).to_double();
  if (std::max(std::abs(u_lo), std::abs(u_hi)) < 0.95) {
    return detail::cell_integral_fseries(p, s, tr);
  }
  return detail::cell_integral_midpoint(p, s, tr);
}

/// The consolidated one-series form of the same integral,
///   (-d/c)^(s-1)/c^2 [ -ln(x+d/c)
///     + sum ((-1)^k/k) C(s-1,k) (1+cx/d)^k (s+k*b*c)/(k-s) ]
/// (signs for determinant +1), differenced over the cell. Kept as a
/// cross-check of the two-series route; valid on the same convergence
/// region, for non-integer s.
inline Complex mobius_cell_integral_consolidated(const MobiusPiece& p,
                                                 Complex s,
                                                 const SeriesTruncation& tr = {}) {
  if (p.c.is_zero()) {
    throw DomainError("consolidated form needs c != 0");
  }
  if (detail::is_nonneg_int(s)) {
    throw DomainError("consolidated form is singular at integer s = k");
  }
  const double alpha = (Rational(p.d) / Rational(p.c)).to_double();
  const double u_lo =
      ((Rational(p.c) * p.cell_lo + Rational(p.d)) / Rational(p.d)).to_double();
  const double u_hi =
      ((Rational(p.c) * p.cell_hi + Rational(p.d)) / Rational(p.d)).to_double();
  const double c2 = (Rational(p.c) * Rational(p.c)).to_double();
  const double bc = (Rational(p.b) * Rational(p.c)).to_double();
  std::uint32_t kmax = tr.kmax < 1 ? 1 : tr.kmax;
  Complex prev;
  bool have_prev = false;
  for (;; kmax *= 2) {
    Complex acc = -std::log(u_hi / u_lo);
    Complex binom(1.0, 0.0);  // C(s-1, k)
    double plo = 1.0, phi = 1.0;
    for (std::uint32_t k = 1; k <= kmax; ++k) {
      binom *= (s - 1.0 - double(k - 1)) / double(k);
      plo *= u_lo;
      phi *= u_hi;
      const double sgn = (k & 1) ? -1.0 : 1.0;
      acc += (sgn / double(k)) * binom * (phi - plo) * (s + double(k) * bc) /
             (double(k) - s);
    }
    Complex v = detail::cpow_pos(-alpha, s - 1.0) / c2 * acc;
    if (have_prev && std::abs(v - prev) <= tr.series_rel_tol * (std::abs(v) + 1e-30)) {
      return v;
    }
    prev = v;
    have_prev = true;
    if (kmax >= tr.kmax_cap) return prev;
  }
}

/// Analytic evaluation of the first-two-digit-swap zeta,
///   s/(s-1) - s * sum_{a1,a2} (cell integral),
/// truncated at the given digit cutoffs. Cells are grouped into square
/// shells r = max(a1,a2); every cell's inner k-series is summed to
/// stability before the cell enters the double sum (the two summations
/// must not be interchanged). last_shell_abs is the magnitude of the
/// final shell's contribution, a crude tail indicator of the only
/// conditionally convergent outer sum.
struct AnalyticResult {
  Complex value{};
  Complex swap_integral{};
  double last_shell_abs = 0.0;
  std::uint64_t cell_count = 0;
};

inline AnalyticResult analytic_permuted_zeta(Complex s,
                                             const SeriesTruncation& tr = {},
                                             ThreadPool* pool = nullptr) {
  if (s == Complex(0.0, 0.0) || s == Complex(1.0, 0.0)) {
    throw DomainError("analytic_permuted_zeta: s in {0,1} is excluded");
  }
  if (tr.a1max < 1 || tr.a2max < 1) {
    throw UsageError("analytic_permuted_zeta: cutoffs must be >= 1");
  }
  AnalyticResult out;
  Complex total(0.0, 0.0);
  const std::uint32_t rmax = std::max(tr.a1max, tr.a2max);
  for (std::uint32_t r = 1; r <= rmax; ++r) {
    // Cells with max(a1,a2) == r, inside the cutoffs, in fixed order.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> cells;
    if (r <= tr.a1max) {
      for (std::uint32_t a2 = 1; a2 <= std::min(r, tr.a2max); ++a2) {
        cells.emplace_back(r, a2);
      }
    }
    if (r <= tr.a2max) {
      for (std::uint32_t a1 = 1; a1 < std::min(r, tr.a1max + 1); ++a1) {
        cells.emplace_back(a1, r);
      }
    }
    if (cells.empty()) continue;
    std::vector<Complex> vals(cells.size());
    auto eval_cell = [&](std::size_t i) {
      vals[i] = mobius_cell_integral(mobius_coeffs(cells[i].first, cells[i].second), s, tr);
    };
    if (pool != nullptr && pool->workers() > 1 && cells.size() > 1) {
      pool->parallel_for(cells.size(), eval_cell);
    } else {
      for (std::size_t i = 0; i < cells.size(); ++i) eval_cell(i);
    }
    // Fixed pairwise fold in cell order.
    std::size_t m = vals.size();
    while (m > 1) {
      std::size_t h2 = 0;
      for (std::size_t i = 0; i + 1 < m; i += 2) vals[h2++] = vals[i] + vals[i + 1];
      if (m & 1) vals[h2++] = vals[m - 1];
      m = h2;
    }
    total += vals[0];
    out.cell_count += cells.size();
    out.last_shell_abs = std::abs(vals[0]);
  }
  out.swap_integral = total;
  out.value = s / (s - 1.0) - s * total;
  return out;
}

}  // namespace cfzeta
