#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cfzeta/reduce.hpp"
#include "cfzeta/sums.hpp"

using cfzeta::Complex;
using cfzeta::GridSpec;
using cfzeta::SumKind;
using cfzeta::SumSpec;
using cfzeta::SumTable;
using cfzeta::ThreadPool;

TEST_CASE("deterministic_sum: serial equals parallel bit for bit") {
  auto term = [](std::size_t i) {
    return (i % 2 ? -1.0 : 1.0) / double(i + 1);
  };
  double serial = cfzeta::deterministic_sum<double>(1000000, term);
  for (unsigned w : {2u, 3u, 4u, 8u}) {
    ThreadPool pool(w);
    double par = cfzeta::deterministic_sum<double>(1000000, term, &pool);
    CHECK(par == serial);
  }
  // ln 2 sanity for the alternating harmonic prefix.
  CHECK(std::abs(serial - std::numbers::ln2) < 1e-5);
}

TEST_CASE("deterministic_sum: complex terms and edge sizes") {
  auto term = [](std::size_t i) {
    return Complex(std::sin(double(i)), std::cos(double(i))) / double(i + 1);
  };
  ThreadPool pool(4);
  for (std::size_t n : {0ul, 1ul, 7ul, 1024ul, 1025ul, 99999ul}) {
    CHECK(cfzeta::deterministic_sum<Complex>(n, term) ==
          cfzeta::deterministic_sum<Complex>(n, term, &pool));
  }
}

TEST_CASE("point examples at N=1") {
  // Single abscissa x = 1/2; the swap at (1,2) is out of range, so the
  // weight is x itself: 2 - 2*(1/2)*(1/2) = 1.5.
  Complex v = cfzeta::permuted_zeta_sum(1, 1, 2, Complex(2, 0));
  CHECK(std::abs(v - Complex(1.5, 0)) < 1e-12);
  // Gauss map of 1/2 is 0, so the baseline sum is the bare prefactor.
  CHECK(std::abs(cfzeta::baseline_zeta_sum(1, Complex(2, 0)) - Complex(2, 0)) <
        1e-15);
  CHECK(std::abs(cfzeta::shadow_sum(1, Complex(2, 0)) - Complex(1.5, 0)) <
        1e-12);
}

TEST_CASE("partial zeta examples") {
  CHECK(std::abs(cfzeta::partial_zeta_sum(3, Complex(1, 0)) -
                 Complex(11.0 / 6.0, 0)) < 1e-14);
  for (Complex s : {Complex(0, 0), Complex(2, 3), Complex(-1.5, 10)}) {
    CHECK(cfzeta::partial_zeta_sum(1, s) == Complex(1, 0));
  }
  // No pole at s = 1 for the plain partial sum.
  CHECK_NOTHROW(cfzeta::partial_zeta_sum(10, Complex(1, 0)));
}

TEST_CASE("prefactored sums vanish at s = 0") {
  for (auto kind : {SumKind::kPermuted, SumKind::kBaseline, SumKind::kShadow}) {
    SumSpec spec{kind, 37, 1, 2};
    CHECK(std::abs(SumTable::build(spec).evaluate(Complex(0, 0))) == 0.0);
  }
  // The bare partial sum does not carry the s factor: Z_N(0) = N.
  CHECK(cfzeta::partial_zeta_sum(5, Complex(0, 0)) == Complex(5, 0));
}

TEST_CASE("pole at s = 1 is a hard error") {
  for (auto kind : {SumKind::kPermuted, SumKind::kBaseline, SumKind::kShadow}) {
    SumSpec spec{kind, 10, 1, 2};
    SumTable t = SumTable::build(spec);
    CHECK_THROWS_AS(t.evaluate(Complex(1, 0)), cfzeta::PoleError);
    CHECK_NOTHROW(t.evaluate(Complex(1, 1e-6)));
  }
}

TEST_CASE("overflow guard") {
  SumTable t = SumTable::build({SumKind::kBaseline, 10});
  CHECK_THROWS_AS(t.evaluate(Complex(-1e6, 0)), cfzeta::OverflowError);
}

TEST_CASE("p == q reduces to the shadow sum bit-identically") {
  const std::uint64_t N = 3000;
  SumTable permuted = SumTable::build({SumKind::kPermuted, N, 3, 3});
  SumTable shadow = SumTable::build({SumKind::kShadow, N});
  REQUIRE(permuted.weights().size() == shadow.weights().size());
  for (std::size_t i = 0; i < N; ++i) {
    CHECK(permuted.weights()[i] == shadow.weights()[i]);
  }
  for (Complex s : {Complex(2, 0), Complex(0.5, 14.92), Complex(-1, 3)}) {
    CHECK(permuted.evaluate(s) == shadow.evaluate(s));
  }
}

TEST_CASE("shadow sum approaches 2s/(s^2-1)") {
  // Exact midpoint-sum algebra at s = 2 gives 4/3 + 1/(6 N^2).
  double prev = 1e9;
  for (std::uint64_t N : {100ull, 1000ull, 10000ull, 100000ull}) {
    double diff =
        std::abs(cfzeta::shadow_sum(N, Complex(2, 0)) - Complex(4.0 / 3.0, 0));
    CHECK(diff < prev);
    prev = diff;
  }
  CHECK(prev < 1e-3);
  Complex s(0.5, 21.0);
  Complex limit = 2.0 * s / (s * s - 1.0);
  CHECK(std::abs(cfzeta::shadow_sum(20000, s) - limit) < 2e-2);
}

TEST_CASE("shadow identity residual") {
  CHECK(cfzeta::shadow_identity_residual(5, Complex(2, 0)) <= 1e-14);
  CHECK(cfzeta::shadow_identity_residual(2, Complex(0, 0)) <= 1e-15);
  CHECK(cfzeta::shadow_identity_residual(11051, Complex(0.5, 20)) <= 1e-11);
  // Identity-check example: both sides of the N=5, s=2 rewrite are 1.65.
  SumTable shadow = SumTable::build({SumKind::kShadow, 5});
  CHECK(std::abs(shadow.raw_sum(Complex(2, 0)) - Complex(1.65, 0)) < 1e-14);
  CHECK_THROWS_AS(cfzeta::shadow_identity_residual(1, Complex(2, 0)),
                  cfzeta::UsageError);
}

TEST_CASE("shadow identity residual over the spec lattice") {
  for (std::uint64_t N : {2ull, 10ull, 100ull}) {
    for (double re : {-2.0, -0.75, 0.5, 1.75, 3.0}) {
      for (double im : {0.0, 8.5, 17.0, 25.5, 34.0}) {
        CHECK(cfzeta::shadow_identity_residual(N, Complex(re, im)) <= 1e-12);
      }
    }
  }
}

TEST_CASE("baseline sum approximates zeta(2)") {
  const double zeta2 = std::numbers::pi * std::numbers::pi / 6.0;
  Complex v = cfzeta::baseline_zeta_sum(100000, Complex(2, 0));
  CHECK(std::abs(v - Complex(zeta2, 0)) < 1e-2);
}

TEST_CASE("evaluation is bit-identical across worker counts") {
  SumSpec spec{SumKind::kPermuted, 12345, 1, 2};
  SumTable serial_table = SumTable::build(spec);
  const Complex s(0.5, 14.92);
  const Complex reference = serial_table.evaluate(s);
  for (unsigned w : {2u, 4u, 7u}) {
    ThreadPool pool(w);
    SumTable par_table = SumTable::build(spec, &pool);
    CHECK(par_table.weights() == serial_table.weights());
    CHECK(par_table.log_abscissas() == serial_table.log_abscissas());
    CHECK(par_table.evaluate(s, &pool) == reference);
  }
}

TEST_CASE("strip_scan basics") {
  // A 1x1 grid is exactly the point operation.
  SumSpec spec{SumKind::kShadow, 50};
  GridSpec g{2.0, 2.0, 0.1, 0.0, 0.0, 0.1};
  cfzeta::ScanResult r = cfzeta::strip_scan(spec, g);
  REQUIRE(r.values.size() == 1);
  CHECK(r.values[0] ==
        std::abs(SumTable::build(spec).evaluate(Complex(2, 0))));

  // Pole cells are flagged NaN, not fatal.
  GridSpec g2{1.0, 1.0, 1.0, 0.0, 0.0, 1.0};
  cfzeta::ScanResult r2 = cfzeta::strip_scan(spec, g2);
  CHECK(std::isnan(r2.values[0]));

  // Shadow field near s = 2 stays near the limiting value 4/3.
  GridSpec g3{1.8, 2.2, 0.1, -0.2, 0.2, 0.1};
  cfzeta::ScanResult r3 = cfzeta::strip_scan({SumKind::kShadow, 20000}, g3);
  CHECK(r3.re_count == 5);
  CHECK(r3.im_count == 5);
  for (double v : r3.values) {
    CHECK(v > 1.0);
    CHECK(v < 1.7);
  }
}

TEST_CASE("strip_scan deterministic across worker counts") {
  SumSpec spec{SumKind::kBaseline, 2000};
  GridSpec g{0.0, 1.0, 0.25, 13.0, 15.0, 0.5};
  cfzeta::ScanResult serial = cfzeta::strip_scan(spec, g);
  ThreadPool pool(4);
  cfzeta::ScanResult par = cfzeta::strip_scan(spec, g, &pool);
  CHECK(serial.values == par.values);
}

TEST_CASE("phase_trace basics") {
  SumSpec spec{SumKind::kShadow, 500};
  auto single = cfzeta::phase_trace(spec, 13.0, 34.0, 1);
  REQUIRE(single.size() == 1);
  CHECK(single[0].t == 13.0);
  CHECK(single[0].value == SumTable::build(spec).evaluate(Complex(0.5, 13.0)));

  auto tr = cfzeta::phase_trace(spec, 13.0, 34.0, 64);
  REQUIRE(tr.size() == 64);
  CHECK(tr.front().t == 13.0);
  CHECK(tr.back().t == 34.0);
  // The no-permutation sum has no zeros on the line: the trace stays
  // clear of the origin.
  double min_abs = 1e9;
  for (const auto& p : tr) min_abs = std::min(min_abs, std::abs(p.value));
  CHECK(min_abs > 0.01);

  CHECK_THROWS_AS(cfzeta::phase_trace(spec, 3.0, 2.0, 8), cfzeta::UsageError);
}

TEST_CASE("grid node counts") {
  GridSpec g{0.0, 1.0, 0.05, 13.0, 34.0, 0.05};
  CHECK(g.re_count() == 21);
  CHECK(g.im_count() == 421);
  GridSpec tiny{0.3, 0.3, 0.1, 2.0, 2.0, 0.1};
  CHECK(tiny.re_count() == 1);
  CHECK(tiny.im_count() == 1);
  GridSpec bad{1.0, 0.0, 0.1, 0.0, 1.0, 0.1};
  CHECK_THROWS_AS(bad.validate(), cfzeta::UsageError);
}
