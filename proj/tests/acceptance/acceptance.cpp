// Acceptance suite: one criterion per number, one PASS/FAIL line each.
//
//   acceptance            runs every criterion (1..10)
//   acceptance 3 5 8      runs a subset
//
// Exit code 0 only if every selected criterion passes. Criteria 7 and 10
// are the long ones (zero-location series over thousands of N).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "cfzeta/cf.hpp"
#include "cfzeta/io.hpp"
#include "cfzeta/mobius.hpp"
#include "cfzeta/parallel.hpp"
#include "cfzeta/spectrum.hpp"
#include "cfzeta/sums.hpp"
#include "cfzeta/zerofind.hpp"
#include "support/quadrature.hpp"

using cfzeta::BigInt;
using cfzeta::Complex;
using cfzeta::Rational;
using cfzeta::SumKind;
using cfzeta::SumSpec;
using cfzeta::SumTable;
using cfzeta::ThreadPool;

namespace {

bool g_all_pass = true;

void report(int criterion, const std::string& name, bool pass,
            const std::string& detail) {
  std::printf("%s criterion %d: %s -- %s\n", pass ? "PASS" : "FAIL", criterion,
              name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) g_all_pass = false;
}

std::string fmt(double v) { return cfzeta::format_double(v); }

// ---------------------------------------------------------------------
// 1. Exact identities: CF round trip on all abscissas for
//    N in {10, 1000, 10007}; involution and identity swap on 10^4 random
//    rationals; determinant 1 for a1,a2 <= 100; cell/Mobius agreement in
//    exact rational arithmetic for a1,a2 <= 50. Zero tolerance.
void criterion_1() {
  bool pass = true;
  std::string detail;

  std::uint64_t roundtrips = 0;
  for (std::uint64_t N : {10ull, 1000ull, 10007ull}) {
    for (std::uint64_t n = 0; n < N; ++n) {
      Rational x(BigInt(2 * n + 1), BigInt(2 * N));
      if (cfzeta::cf_value(cfzeta::cf_expand(x)) != x) {
        pass = false;
        detail = "round-trip failed at (2*" + std::to_string(n) + "+1)/(2*" +
                 std::to_string(N) + ")";
      }
      ++roundtrips;
    }
  }

  std::mt19937_64 rng(90210);
  std::uint64_t involutions = 0;
  for (int iter = 0; iter < 10000 && pass; ++iter) {
    const std::uint64_t den = rng() % 1000000 + 1;
    const std::uint64_t num = rng() % den + 1;
    Rational x{BigInt(num), BigInt(den)};
    const std::size_t p = rng() % 4 + 1;
    const std::size_t q = rng() % 4 + 1;
    if (cfzeta::digit_swap(x, p, p) != x) {
      pass = false;
      detail = "identity swap failed";
      break;
    }
    cfzeta::CFExpansion e = cfzeta::cf_expand(x);
    if (e.length() < std::max(p, q)) continue;
    cfzeta::CFExpansion sw = cfzeta::swap_digits(e, p, q);
    if (sw.length() != e.length()) continue;  // merge at the tail: swap is
                                              // no longer invertible there
    if (cfzeta::digit_swap(cfzeta::digit_swap(x, p, q), p, q) != x) {
      pass = false;
      detail = "involution failed";
      break;
    }
    ++involutions;
  }

  for (std::uint32_t a1 = 1; a1 <= 100 && pass; ++a1) {
    for (std::uint32_t a2 = 1; a2 <= 100 && pass; ++a2) {
      cfzeta::MobiusPiece piece = cfzeta::mobius_coeffs(a1, a2);
      if (piece.a * piece.d - piece.b * piece.c != BigInt(1)) {
        pass = false;
        detail = "determinant != 1";
      }
    }
  }

  std::mt19937_64 rng2(31415);
  for (std::uint32_t a1 = 1; a1 <= 50 && pass; ++a1) {
    for (std::uint32_t a2 = 1; a2 <= 50 && pass; ++a2) {
      cfzeta::MobiusPiece piece = cfzeta::mobius_coeffs(a1, a2);
      Rational width = piece.cell_hi - piece.cell_lo;
      for (int k = 0; k < 5; ++k) {
        Rational x = piece.cell_lo +
                     width * Rational(BigInt(rng2() % 999983 + 1),
                                      BigInt(1000003u));
        if (piece.apply(x) != cfzeta::digit_swap(x, 1, 2)) {
          pass = false;
          detail = "cell/Mobius mismatch";
          break;
        }
      }
    }
  }

  if (pass) {
    detail = std::to_string(roundtrips) + " round-trips, " +
             std::to_string(involutions) +
             " involutions, 10^4 determinants, 50x50 cells, all exact";
  }
  report(1, "exact identities", pass, detail);
}

// ---------------------------------------------------------------------
// 2. Shadow identity residual <= 1e-12 on the (N, s) lattice.
void criterion_2() {
  ThreadPool pool;
  bool pass = true;
  double worst = 0;
  for (std::uint64_t N : {2ull, 10ull, 100ull, 11051ull}) {
    for (double re : {-2.0, -0.75, 0.5, 1.75, 3.0}) {
      for (double im : {0.0, 8.5, 17.0, 25.5, 34.0}) {
        const double r =
            cfzeta::shadow_identity_residual(N, Complex(re, im), &pool);
        worst = std::max(worst, r);
        if (!(r <= 1e-12)) pass = false;
      }
    }
  }
  report(2, "shadow identity (rewrite through partial zeta sums)", pass,
         "worst residual " + fmt(worst) + " over 100 lattice points, bound 1e-12");
}

// ---------------------------------------------------------------------
// 3. Stair-step limit: |eta_N(2) - 4/3| < 1e-3 at N = 1e5 and strictly
//    decreasing over N in {1e2, 1e3, 1e4, 1e5}.
void criterion_3() {
  ThreadPool pool;
  bool pass = true;
  double prev = std::numeric_limits<double>::infinity();
  double last = 0;
  for (std::uint64_t N : {100ull, 1000ull, 10000ull, 100000ull}) {
    const double diff = std::abs(cfzeta::shadow_sum(N, Complex(2, 0), &pool) -
                                 Complex(4.0 / 3.0, 0.0));
    if (!(diff < prev)) pass = false;
    prev = diff;
    last = diff;
  }
  if (!(last < 1e-3)) pass = false;
  report(3, "eta limit 2s/(s^2-1) at s=2", pass,
         "|eta - 4/3| = " + fmt(last) + " at N=1e5 (bound 1e-3), strictly decreasing");
}

// ---------------------------------------------------------------------
// 4. Newton-series oracle: the definite integral of x/(x+1) over [0,1]
//    equals 1 - ln 2 to 1e-10, and every cell integral for a1,a2 <= 20
//    matches adaptive quadrature to 1e-8 at s in {2, 3, 0.5 + 14.92i}.
void criterion_4() {
  bool pass = true;
  auto hi = cfzeta::newton_antiderivative(Complex(1, 0), Rational(1), 1.0, 16);
  auto lo = cfzeta::newton_antiderivative(Complex(1, 0), Rational(1), 0.0, 16);
  const double f_err =
      std::abs(hi.value - lo.value - Complex(1.0 - std::numbers::ln2, 0.0));
  if (!(f_err < 1e-10)) pass = false;

  double worst = 0;
  std::string where;
  const Complex svals[] = {Complex(2, 0), Complex(3, 0), Complex(0.5, 14.92)};
  for (std::uint32_t a1 = 1; a1 <= 20; ++a1) {
    for (std::uint32_t a2 = 1; a2 <= 20; ++a2) {
      cfzeta::MobiusPiece piece = cfzeta::mobius_coeffs(a1, a2);
      const double pa = piece.a.to_double();
      const double pb = piece.b.to_double();
      const double pc = piece.c.to_double();
      const double pd = piece.d.to_double();
      for (Complex s : svals) {
        const Complex got = cfzeta::mobius_cell_integral(piece, s);
        const Complex want = testsupport::integrate(
            [&](double x) {
              return (pa * x + pb) / (pc * x + pd) *
                     std::exp((s - 1.0) * std::log(x));
            },
            piece.cell_lo.to_double(), piece.cell_hi.to_double());
        const double err = std::abs(got - want);
        if (err > worst) {
          worst = err;
          where = "(" + std::to_string(a1) + "," + std::to_string(a2) + ")";
        }
        if (!(err < 1e-8)) pass = false;
      }
    }
  }
  report(4, "Newton-series antiderivative vs quadrature", pass,
         "1-ln2 error " + fmt(f_err) + " (bound 1e-10); worst cell error " +
             fmt(worst) + " at " + where + " over 20x20x3 (bound 1e-8)");
}

// ---------------------------------------------------------------------
// Shared serialization for the determinism criterion.
std::string records_to_string(const std::vector<cfzeta::ZeroRecord>& recs) {
  std::string out;
  for (const auto& r : recs) {
    out += std::to_string(r.n) + "," + fmt(r.s_re) + "," + fmt(r.s_im) + "," +
           fmt(r.residual) + "," + (r.converged ? "1" : "0") + "\n";
  }
  return out;
}

std::vector<cfzeta::ZeroRecord> baseline_five_zeros(ThreadPool* pool) {
  SumTable table = SumTable::build({SumKind::kBaseline, 151051}, pool);
  std::vector<cfzeta::ZeroRecord> recs;
  for (double t : {14.2, 21.0, 25.0, 30.4, 32.9}) {
    recs.push_back(cfzeta::refine_zero(table, Complex(0.5, t), {}, pool));
  }
  return recs;
}

// 5. Baseline zeros at N = 151051 from the five seeds: residual < 0.05
//    and |Im s - ordinate| < 0.3 for every one.
void criterion_5() {
  ThreadPool pool;
  const double ordinates[] = {14.13, 21.02, 25.01, 30.42, 32.93};
  std::vector<cfzeta::ZeroRecord> recs = baseline_five_zeros(&pool);
  bool pass = true;
  double worst_res = 0, worst_gap = 0;
  for (std::size_t i = 0; i < recs.size(); ++i) {
    const double gap = std::abs(recs[i].s_im - ordinates[i]);
    worst_res = std::max(worst_res, recs[i].residual);
    worst_gap = std::max(worst_gap, gap);
    if (!recs[i].converged || !(recs[i].residual < 0.05) || !(gap < 0.3)) {
      pass = false;
    }
  }
  report(5, "five baseline zeros at N=151051", pass,
         "worst residual " + fmt(worst_res) + " (bound 0.05), worst |dIm| " +
             fmt(worst_gap) + " (bound 0.3)");
}

// ---------------------------------------------------------------------
// 6. First digit-swap zero at N = 90000: |Im s - 14.92| <= 0.1 and
//    Re s in [0.40, 0.60].
cfzeta::ZeroRecord first_swap_zero(ThreadPool* pool) {
  SumTable table = SumTable::build({SumKind::kPermuted, 90000, 1, 2}, pool);
  return cfzeta::refine_zero(table, Complex(0.5, 14.9), {}, pool);
}

void criterion_6() {
  ThreadPool pool;
  cfzeta::ZeroRecord rec = first_swap_zero(&pool);
  const bool pass = rec.converged && std::abs(rec.s_im - 14.92) <= 0.1 &&
                    rec.s_re >= 0.40 && rec.s_re <= 0.60;
  report(6, "first (1,2)-swap zero at N=90000", pass,
         "s = " + fmt(rec.s_re) + " + " + fmt(rec.s_im) + "i, residual " +
             fmt(rec.residual) +
             " (need |Im-14.92| <= 0.1, Re in [0.40,0.60])");
}

// ---------------------------------------------------------------------
// 7. 1/f noise in the zero locations: series over N in [9000, 12000]
//    step 1, log-log slope of the Im-component spectrum in [-1.5, -0.5]
//    with the lowest 5% of bins excluded. The long test.
cfzeta::ZeroSeries swap_zero_series(ThreadPool* pool) {
  return cfzeta::zero_series(1, 2, 9000, 12000, 1, Complex(0.5, 14.92),
                             cfzeta::SeedPolicy::kWarmStart, {}, pool);
}

void criterion_7() {
  ThreadPool pool;
  cfzeta::ZeroSeries series = swap_zero_series(&pool);
  std::vector<double> im;
  std::uint64_t flagged = 0;
  for (const auto& r : series.records) {
    im.push_back(r.s_im);
    if (!r.converged) ++flagged;
  }
  cfzeta::Spectrum spec = cfzeta::power_spectrum(im);
  cfzeta::SpectrumFit fit = cfzeta::fit_loglog_slope(spec);
  const bool pass = fit.slope >= -1.5 && fit.slope <= -0.5;
  report(7, "1/f power law of the zero-location noise", pass,
         "slope " + fmt(fit.slope) + " over " + std::to_string(fit.n_bins) +
             " bins (need [-1.5,-0.5]); " + std::to_string(series.records.size()) +
             " records, " + std::to_string(flagged) + " flagged");
}

// ---------------------------------------------------------------------
// 8. Analytic cell-sum evaluation vs the numeric sum at s = 2 within 5%.
std::pair<Complex, Complex> analytic_vs_numeric(ThreadPool* pool) {
  cfzeta::AnalyticResult a = cfzeta::analytic_permuted_zeta(Complex(2, 0), {}, pool);
  const Complex numeric = cfzeta::permuted_zeta_sum(100000, 1, 2, Complex(2, 0), pool);
  return {a.value, numeric};
}

void criterion_8() {
  ThreadPool pool;
  auto [analytic, numeric] = analytic_vs_numeric(&pool);
  const double rel = std::abs(analytic - numeric) / std::abs(numeric);
  report(8, "analytic vs numeric at s=2", rel < 0.05,
         "analytic " + fmt(analytic.real()) + ", numeric " +
             fmt(numeric.real()) + ", relative gap " + fmt(rel) +
             " (bound 0.05)");
}

// ---------------------------------------------------------------------
// 9. Synthetic spectral oracles: white noise slope 0 +- 0.2, constructed
//    1/f slope -1 +- 0.2, Parseval to 1e-10.
void criterion_9() {
  std::mt19937_64 rng(1234);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> white(4096);
  for (double& v : white) v = gauss(rng);

  std::vector<double> pink(2048, 0.0);
  {
    std::mt19937_64 rng2(77);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    const std::size_t n = pink.size();
    for (std::size_t k = 1; k <= n / 2; ++k) {
      const double amp = 1.0 / std::sqrt(double(k) / double(n));
      const double ph = phase(rng2);
      for (std::size_t j = 0; j < n; ++j) {
        pink[j] += amp * std::cos(2.0 * std::numbers::pi * double(k) *
                                      double(j) / double(n) +
                                  ph);
      }
    }
  }

  const double white_slope =
      cfzeta::fit_loglog_slope(cfzeta::power_spectrum(white)).slope;
  const double pink_slope =
      cfzeta::fit_loglog_slope(cfzeta::power_spectrum(pink)).slope;
  const double parseval = std::max(cfzeta::parseval_residual(white),
                                   cfzeta::parseval_residual(pink));
  const bool pass = std::abs(white_slope) <= 0.2 &&
                    std::abs(pink_slope + 1.0) <= 0.2 && parseval < 1e-10;
  report(9, "synthetic spectral oracles", pass,
         "white slope " + fmt(white_slope) + " (|.| <= 0.2), 1/f slope " +
             fmt(pink_slope) + " (within 0.2 of -1), Parseval " +
             fmt(parseval) + " (bound 1e-10)");
}

// ---------------------------------------------------------------------
// 10. Determinism: the outputs behind criteria 5-8, recomputed with
//     worker counts {1, 4, max}, are byte-identical.
void criterion_10() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  const unsigned counts[] = {1u, 4u, hw};
  std::vector<std::string> c5, c6, c7, c8;
  for (unsigned w : counts) {
    ThreadPool pool(w);
    c5.push_back(records_to_string(baseline_five_zeros(&pool)));
    c6.push_back(records_to_string({first_swap_zero(&pool)}));
    {
      cfzeta::ZeroSeries series = swap_zero_series(&pool);
      c7.push_back(records_to_string(series.records));
    }
    {
      auto [analytic, numeric] = analytic_vs_numeric(&pool);
      c8.push_back(fmt(analytic.real()) + "," + fmt(analytic.imag()) + "," +
                   fmt(numeric.real()) + "," + fmt(numeric.imag()) + "\n");
    }
  }
  const bool ok5 = c5[1] == c5[0] && c5[2] == c5[0];
  const bool ok6 = c6[1] == c6[0] && c6[2] == c6[0];
  const bool ok7 = c7[1] == c7[0] && c7[2] == c7[0];
  const bool ok8 = c8[1] == c8[0] && c8[2] == c8[0];
  const bool pass = ok5 && ok6 && ok7 && ok8;
  report(10, "byte-identical outputs across worker counts {1,4,max}", pass,
         std::string("criterion 5: ") + (ok5 ? "identical" : "DIFFERS") +
             ", 6: " + (ok6 ? "identical" : "DIFFERS") + ", 7: " +
             (ok7 ? "identical" : "DIFFERS") + ", 8: " +
             (ok8 ? "identical" : "DIFFERS") + " (max=" +
             std::to_string(hw) + ")");
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) {
    const int c = std::atoi(argv[i]);
    if (c < 1 || c > 10) {
      std::fprintf(stderr, "unknown criterion: %s\n", argv[i]);
      return 2;
    }
    selected.insert(c);
  }
  if (selected.empty()) {
    for (int c = 1; c <= 10; ++c) selected.insert(c);
  }
  for (int c : selected) {
    switch (c) {
      case 1: criterion_1(); break;
      case 2: criterion_2(); break;
      case 3: criterion_3(); break;
      case 4: criterion_4(); break;
      case 5: criterion_5(); break;
      case 6: criterion_6(); break;
      case 7: criterion_7(); break;
      case 8: criterion_8(); break;
      case 9: criterion_9(); break;
      case 10: criterion_10(); break;
    }
  }
  return g_all_pass ? 0 : 1;
}
