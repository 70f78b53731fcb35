// cfzeta: command-line driver for the continued-fraction digit-swap zeta
// sums, their zero tracking, analytic cell integrals, and noise spectra.
//
// Every tabular output starts with a '#'-prefixed metadata block (no
// timestamps) followed by a CSV header; data sections are byte-identical
// across worker counts and across checkpoint/resume.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cfzeta/cache.hpp"
#include "cfzeta/cf.hpp"
#include "cfzeta/errors.hpp"
#include "cfzeta/io.hpp"
#include "cfzeta/mobius.hpp"
#include "cfzeta/parallel.hpp"
#include "cfzeta/spectrum.hpp"
#include "cfzeta/sums.hpp"
#include "cfzeta/version.hpp"
#include "cfzeta/zerofind.hpp"

namespace fs = std::filesystem;
using cfzeta::Complex;
using cfzeta::GridSpec;
using cfzeta::Metadata;
using cfzeta::SumKind;
using cfzeta::SumSpec;
using cfzeta::SumTable;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitComputation = 1;
constexpr int kExitUsage = 2;

struct CommonOptions {
  unsigned threads = 0;  // 0: CFZETA_THREADS env or hardware concurrency
  std::string cache_dir;
  std::string out;
  bool resume = false;
  bool as_json = false;
};

void add_common(CLI::App* cmd, CommonOptions& opt, bool with_out,
                bool with_resume, bool with_json) {
  cmd->add_option("--threads", opt.threads,
                  "worker count (default: CFZETA_THREADS or hardware)");
  cmd->add_option("--cache-dir", opt.cache_dir,
                  "directory for the abscissa-table cache");
  if (with_out) cmd->add_option("--out", opt.out, "output file path");
  if (with_resume) {
    cmd->add_flag("--resume", opt.resume,
                  "continue a row-granular checkpointed output file");
  }
  if (with_json) cmd->add_flag("--json", opt.as_json, "emit JSON");
}

struct SumOptions {
  std::string kind = "baseline";
  std::uint64_t n = 1;
  std::uint32_t p = 1, q = 1;

  SumSpec spec() const {
    SumSpec s;
    s.kind = cfzeta::sum_kind_from_string(kind);
    s.n = n;
    s.p = p;
    s.q = q;
    s.validate();
    return s;
  }

  std::string config() const {
    return spec().to_string();
  }
};

void add_sum_options(CLI::App* cmd, SumOptions& opt, bool need_n = true) {
  cmd->add_option("--kind", opt.kind,
                  "sum kind: permuted | baseline | shadow | partial-zeta")
      ->check(CLI::IsMember({"permuted", "baseline", "shadow", "partial-zeta"}));
  auto* n = cmd->add_option("--N", opt.n, "abscissa count N");
  if (need_n) n->required();
  cmd->add_option("--p", opt.p, "first swapped digit position (permuted)");
  cmd->add_option("--q", opt.q, "second swapped digit position (permuted)");
}

SumTable acquire_table(const SumSpec& spec, const CommonOptions& common,
                       cfzeta::ThreadPool* pool) {
  if (!common.cache_dir.empty() && spec.kind != SumKind::kPartialZeta) {
    return cfzeta::table_cache::get_or_build(common.cache_dir, spec, pool);
  }
  return SumTable::build(spec, pool);
}

Metadata base_metadata(const std::string& command, const std::string& config,
                       const cfzeta::ThreadPool& pool) {
  Metadata m;
  m.add("tool", "cfzeta");
  m.add("version", cfzeta::kVersion);
  m.add("command", command);
  m.add("config", config);
  m.add("threads", std::to_string(pool.workers()));
  m.add("determinism",
        "fixed-order pairwise reduction, chunk 1024; data section is "
        "byte-identical for any worker count");
  return m;
}

json meta_json(const Metadata& m) {
  json j = json::object();
  for (const auto& [k, v] : m.entries) j[k] = v;
  return j;
}

// Shared resume bookkeeping: returns the number of data rows already in
// the file (0 for a fresh start) after validating the config echo.
std::size_t resume_offset(const std::string& path, bool resume,
                          const std::string& config) {
  if (!resume || !fs::exists(path)) return 0;
  cfzeta::CsvFile existing = cfzeta::read_csv(path);
  const std::string prior = existing.meta_value("config");
  if (prior != config) {
    throw cfzeta::UsageError("--resume: config mismatch (file has '" + prior +
                             "', command asks '" + config + "')");
  }
  return existing.rows.size();
}

// ---------------------------------------------------------------- eval --

int cmd_eval(const CommonOptions& common, const SumOptions& sums,
             const std::string& s_text) {
  cfzeta::ThreadPool pool(common.threads);
  const Complex s = cfzeta::parse_complex(s_text);
  SumSpec spec = sums.spec();
  SumTable table = acquire_table(spec, common, &pool);
  const Complex v = table.evaluate(s, &pool);
  if (common.as_json) {
    json j;
    j["meta"] = meta_json(base_metadata("eval", sums.config(), pool));
    j["result"] = {{"re_s", s.real()},
                   {"im_s", s.imag()},
                   {"re_zeta", v.real()},
                   {"im_zeta", v.imag()},
                   {"abs_zeta", std::abs(v)}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << cfzeta::format_complex(v) << "\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------- scan --

struct GridOptions {
  double re_lo = 0, re_hi = 1, re_step = 0.05;
  double im_lo = 13, im_hi = 34, im_step = 0.05;

  GridSpec grid() const {
    GridSpec g{re_lo, re_hi, re_step, im_lo, im_hi, im_step};
    g.validate();
    return g;
  }

  std::string config() const {
    using cfzeta::format_double;
    return "re=[" + format_double(re_lo) + "," + format_double(re_hi) + "]:" +
           format_double(re_step) + " im=[" + format_double(im_lo) + "," +
           format_double(im_hi) + "]:" + format_double(im_step);
  }
};

void add_grid_options(CLI::App* cmd, GridOptions& g) {
  cmd->add_option("--re-lo", g.re_lo, "grid lower Re(s)");
  cmd->add_option("--re-hi", g.re_hi, "grid upper Re(s)");
  cmd->add_option("--re-step", g.re_step, "grid Re(s) step");
  cmd->add_option("--im-lo", g.im_lo, "grid lower Im(s)");
  cmd->add_option("--im-hi", g.im_hi, "grid upper Im(s)");
  cmd->add_option("--im-step", g.im_step, "grid Im(s) step");
}

int cmd_scan(const CommonOptions& common, const SumOptions& sums,
             const GridOptions& gridopt) {
  if (common.out.empty()) throw cfzeta::UsageError("scan needs --out");
  cfzeta::ThreadPool pool(common.threads);
  SumSpec spec = sums.spec();
  GridSpec grid = gridopt.grid();
  const std::string config = sums.config() + " " + gridopt.config();
  const std::size_t done = resume_offset(common.out, common.resume, config);

  SumTable table = acquire_table(spec, common, &pool);
  Metadata meta = base_metadata("scan", config, pool);
  meta.add("axis_order",
           "rows over Im(s) ascending, columns over Re(s) ascending");
  meta.add("flagged_cells", "pole/overflow cells carry nan");
  cfzeta::CsvWriter out(common.out, meta, "re_s,im_s,abs_zeta", done > 0);

  const std::size_t total = grid.re_count() * grid.im_count();
  for (std::size_t idx = done; idx < total; ++idx) {
    const std::size_t j = idx / grid.re_count();
    const std::size_t i = idx % grid.re_count();
    const Complex s(grid.re_at(i), grid.im_at(j));
    double value = std::numeric_limits<double>::quiet_NaN();
    try {
      value = std::abs(table.evaluate(s, &pool));
    } catch (const cfzeta::PoleError&) {
    } catch (const cfzeta::OverflowError&) {
    }
    out.row({s.real(), s.imag(), value});
  }
  std::cerr << "scan: wrote " << (total - done) << " rows ("
            << total << " total) to " << common.out << "\n";
  return kExitOk;
}

// --------------------------------------------------------------- phase --

int cmd_phase(const CommonOptions& common, const SumOptions& sums,
              double t_lo, double t_hi, std::uint64_t steps) {
  if (common.out.empty()) throw cfzeta::UsageError("phase needs --out");
  cfzeta::ThreadPool pool(common.threads);
  SumSpec spec = sums.spec();
  if (steps < 1) throw cfzeta::UsageError("phase: --steps must be >= 1");
  if (steps > 1 && !(t_lo < t_hi)) {
    throw cfzeta::UsageError("phase: --t-lo must be below --t-hi");
  }
  using cfzeta::format_double;
  const std::string config = sums.config() + " t=[" + format_double(t_lo) +
                             "," + format_double(t_hi) + "]:" +
                             std::to_string(steps);
  const std::size_t done = resume_offset(common.out, common.resume, config);

  SumTable table = acquire_table(spec, common, &pool);
  Metadata meta = base_metadata("phase", config, pool);
  meta.add("line", "s = 1/2 + i t, t equally spaced, endpoints included");
  cfzeta::CsvWriter out(common.out, meta, "re_s,im_s,re_zeta,im_zeta",
                        done > 0);
  for (std::uint64_t k = done; k < steps; ++k) {
    const double t = steps == 1 ? t_lo
                                : t_lo + (t_hi - t_lo) * double(k) /
                                      double(steps - 1);
    const Complex v = table.evaluate(Complex(0.5, t), &pool);
    out.row({0.5, t, v.real(), v.imag()});
  }
  std::cerr << "phase: wrote " << (steps - done) << " rows to " << common.out
            << "\n";
  return kExitOk;
}

// ----------------------------------------------------------- find-zero --

json record_json(const cfzeta::ZeroRecord& r) {
  return json{{"N", r.n},
              {"kind", cfzeta::to_string(r.kind)},
              {"p", r.p},
              {"q", r.q},
              {"re_s", r.s_re},
              {"im_s", r.s_im},
              {"residual", r.residual},
              {"iterations", r.iterations},
              {"converged", r.converged}};
}

void print_record(const cfzeta::ZeroRecord& r) {
  std::cout << "zero: s = " << cfzeta::format_double(r.s_re) << " + "
            << cfzeta::format_double(r.s_im) << "i  residual = "
            << cfzeta::format_double(r.residual)
            << "  iterations = " << r.iterations
            << (r.converged ? "" : "  [NOT CONVERGED]") << "\n";
}

int cmd_find_zero(const CommonOptions& common, const SumOptions& sums,
                  const std::string& seed_text, bool do_scan,
                  const GridOptions& gridopt, double threshold,
                  const cfzeta::RefineOptions& refopt, bool classify) {
  cfzeta::ThreadPool pool(common.threads);
  SumSpec spec = sums.spec();
  SumTable table = acquire_table(spec, common, &pool);

  std::vector<cfzeta::ZeroRecord> records;
  if (do_scan) {
    GridSpec grid = gridopt.grid();
    auto candidates =
        cfzeta::scan_zero_candidates(spec, grid, threshold, &pool);
    std::cerr << "find-zero: " << candidates.size()
              << " grid candidates below threshold "
              << cfzeta::format_double(threshold) << "\n";
    for (const auto& cand : candidates) {
      records.push_back(cfzeta::refine_zero(table, cand.s, refopt, &pool));
    }
  } else {
    if (seed_text.empty()) {
      throw cfzeta::UsageError("find-zero needs --seed (or --scan)");
    }
    records.push_back(cfzeta::refine_zero(table, cfzeta::parse_complex(seed_text),
                                          refopt, &pool));
  }

  bool all_converged = true;
  json out_records = json::array();
  for (const auto& r : records) {
    all_converged = all_converged && r.converged;
    json j = record_json(r);
    if (classify) {
      j["class"] = cfzeta::classify_zero(r, threshold, &pool) ==
                           cfzeta::ZeroClass::kDominant
                       ? "dominant"
                       : "artifact";
    }
    out_records.push_back(j);
    if (!common.as_json) print_record(r);
  }
  if (common.as_json) {
    json j;
    j["meta"] = meta_json(base_metadata("find-zero", sums.config(), pool));
    j["result"] = do_scan ? json{{"zeros", out_records}} : out_records.at(0);
    std::cout << j.dump(2) << "\n";
  }
  if (!common.out.empty()) {
    Metadata meta = base_metadata("find-zero", sums.config(), pool);
    cfzeta::CsvWriter csv(common.out, meta,
                          "N,re_s,im_s,residual,converged", false);
    for (const auto& r : records) {
      csv.row({double(r.n), r.s_re, r.s_im, r.residual,
               r.converged ? 1.0 : 0.0});
    }
  }
  return all_converged ? kExitOk : kExitComputation;
}

// --------------------------------------------------------- zero-series --

int cmd_zero_series(const CommonOptions& common, std::uint32_t p,
                    std::uint32_t q, std::uint64_t n_lo, std::uint64_t n_hi,
                    std::uint64_t n_step, const std::string& seed_text,
                    const std::string& policy_text,
                    const cfzeta::RefineOptions& refopt) {
  if (common.out.empty()) throw cfzeta::UsageError("zero-series needs --out");
  if (n_lo > n_hi) throw cfzeta::UsageError("zero-series: N-lo > N-hi");
  if (n_step < 1) throw cfzeta::UsageError("zero-series: N-step must be >= 1");
  cfzeta::SeedPolicy policy;
  if (policy_text == "warm") {
    policy = cfzeta::SeedPolicy::kWarmStart;
  } else if (policy_text == "fixed") {
    policy = cfzeta::SeedPolicy::kFixed;
  } else {
    throw cfzeta::UsageError("zero-series: --seed-policy must be warm|fixed");
  }
  cfzeta::ThreadPool pool(common.threads);
  const Complex seed = cfzeta::parse_complex(seed_text);
  const std::string config =
      "zero-series p=" + std::to_string(p) + " q=" + std::to_string(q) +
      " N=[" + std::to_string(n_lo) + "," + std::to_string(n_hi) + "]:" +
      std::to_string(n_step) + " seed=" + cfzeta::format_complex(seed) +
      " policy=" + policy_text;
  const std::size_t done = resume_offset(common.out, common.resume, config);

  const std::uint64_t total = (n_hi - n_lo) / n_step + 1;
  if (done > total) {
    throw cfzeta::UsageError("--resume: file already has more rows than the series");
  }
  Complex current = seed;
  if (done > 0 && policy == cfzeta::SeedPolicy::kWarmStart) {
    cfzeta::CsvFile existing = cfzeta::read_csv(common.out);
    const auto& last = existing.rows.back();
    current = Complex(last.at(existing.column_index("re_s")),
                      last.at(existing.column_index("im_s")));
  }

  Metadata meta = base_metadata("zero-series", config, pool);
  meta.add("seeding", "first N from the given seed, then warm starts (unless fixed)");
  cfzeta::CsvWriter out(common.out, meta, "N,re_s,im_s,residual,converged",
                        done > 0);
  std::uint64_t flagged = 0;
  for (std::uint64_t k = done; k < total; ++k) {
    const std::uint64_t n = n_lo + k * n_step;
    SumTable table = acquire_table({SumKind::kPermuted, n, p, q}, common, &pool);
    cfzeta::ZeroRecord rec = cfzeta::refine_zero(table, current, refopt, &pool);
    if (policy == cfzeta::SeedPolicy::kWarmStart) current = rec.point();
    if (!rec.converged) ++flagged;
    out.row({double(n), rec.s_re, rec.s_im, rec.residual,
             rec.converged ? 1.0 : 0.0});
  }
  std::cerr << "zero-series: wrote " << (total - done) << " rows to "
            << common.out;
  if (flagged) std::cerr << " (" << flagged << " not converged, flagged)";
  std::cerr << "\n";
  return kExitOk;
}

// ------------------------------------------------------------ spectrum --

int cmd_spectrum(const CommonOptions& common, const std::string& input,
                 const std::string& component, double band_lo, double band_hi,
                 const std::string& window_text, const std::string& fit_out) {
  cfzeta::ThreadPool pool(common.threads);
  cfzeta::CsvFile file = cfzeta::read_csv(input);
  std::string column;
  if (component == "im") column = "im_s";
  else if (component == "re") column = "re_s";
  else if (component == "residual") column = "residual";
  else throw cfzeta::UsageError("spectrum: --component must be re|im|residual");
  std::vector<double> series = file.column(column);

  std::uint64_t flagged = 0;
  if (std::find(file.columns.begin(), file.columns.end(), "converged") !=
      file.columns.end()) {
    for (double c : file.column("converged")) {
      if (c == 0.0) ++flagged;
    }
  }

  cfzeta::Window window;
  if (window_text == "none") window = cfzeta::Window::kNone;
  else if (window_text == "hann") window = cfzeta::Window::kHann;
  else throw cfzeta::UsageError("spectrum: --window must be none|hann");

  cfzeta::Spectrum spec = cfzeta::power_spectrum(series, window);
  std::string band_policy = "lowest 5% of bins excluded (default)";
  double lo = band_lo, hi = band_hi;
  if (lo == 0 && hi == 0) {
    auto band = cfzeta::default_fit_band(spec);
    lo = band.first;
    hi = band.second;
  } else {
    band_policy = "explicit band";
  }
  cfzeta::SpectrumFit fit = cfzeta::fit_loglog_slope(spec, lo, hi);

  const std::string config = "spectrum input=" + input + " component=" +
                             component + " window=" + window_text;
  Metadata meta = base_metadata("spectrum", config, pool);
  meta.add("detrend", "mean subtraction only");
  meta.add("band_policy", band_policy);
  meta.add("rows_flagged_nonconverged", std::to_string(flagged));
  meta.add("series_length", std::to_string(series.size()));
  if (!common.out.empty()) {
    cfzeta::CsvWriter out(common.out, meta, "freq,power", false);
    for (std::size_t i = 0; i < spec.freqs.size(); ++i) {
      out.row({spec.freqs[i], spec.power[i]});
    }
  }
  json fitj = {{"slope", fit.slope},
               {"intercept", fit.intercept},
               {"f_lo", fit.f_lo},
               {"f_hi", fit.f_hi},
               {"n_bins", fit.n_bins}};
  if (!fit_out.empty()) {
    std::ofstream f(fit_out);
    if (!f) throw cfzeta::IoError("cannot write " + fit_out);
    json full = fitj;
    full["meta"] = meta_json(meta);
    f << full.dump(2) << "\n";
  }
  if (common.as_json) {
    json j;
    j["meta"] = meta_json(meta);
    j["result"] = fitj;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "slope = " << cfzeta::format_double(fit.slope)
              << "  intercept = " << cfzeta::format_double(fit.intercept)
              << "  band = [" << cfzeta::format_double(fit.f_lo) << ", "
              << cfzeta::format_double(fit.f_hi) << "]  bins = " << fit.n_bins
              << "\n";
  }
  return kExitOk;
}

// ------------------------------------------------------------ analytic --

int cmd_analytic(const CommonOptions& common, const std::string& s_text,
                 std::uint32_t a1max, std::uint32_t a2max,
                 std::uint32_t kmax) {
  cfzeta::ThreadPool pool(common.threads);
  const Complex s = cfzeta::parse_complex(s_text);
  cfzeta::SeriesTruncation tr;
  tr.a1max = a1max;
  tr.a2max = a2max;
  tr.kmax = kmax;
  cfzeta::AnalyticResult r = cfzeta::analytic_permuted_zeta(s, tr, &pool);
  const std::string config = "analytic s=" + cfzeta::format_complex(s) +
                             " a1max=" + std::to_string(a1max) + " a2max=" +
                             std::to_string(a2max) + " kmax=" +
                             std::to_string(kmax);
  if (common.as_json) {
    json j;
    j["meta"] = meta_json(base_metadata("analytic", config, pool));
    j["result"] = {{"re_zeta", r.value.real()},
                   {"im_zeta", r.value.imag()},
                   {"re_integral", r.swap_integral.real()},
                   {"im_integral", r.swap_integral.imag()},
                   {"last_shell_abs", r.last_shell_abs},
                   {"cells", r.cell_count}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << cfzeta::format_complex(r.value)
              << "  (last shell " << cfzeta::format_double(r.last_shell_abs)
              << ", " << r.cell_count << " cells)\n";
    std::cout << "note: the cell sum is only conditionally convergent; "
                 "treat the last-shell magnitude as a crude tail estimate\n";
  }
  return kExitOk;
}

// ------------------------------------------------------------ selftest --

int cmd_selftest(const CommonOptions& common, std::uint32_t max_a) {
  cfzeta::ThreadPool pool(common.threads);
  int failures = 0;
  auto report = [&](const std::string& name, bool ok, const std::string& note) {
    std::cout << (ok ? "ok   " : "FAIL ") << name;
    if (!note.empty()) std::cout << " (" << note << ")";
    std::cout << "\n";
    if (!ok) ++failures;
  };

  {  // Continued-fraction round trip on every grid abscissa.
    bool ok = true;
    std::uint64_t count = 0;
    for (std::uint64_t N : {10ull, 1000ull, 10007ull}) {
      for (std::uint64_t n = 0; n < N && ok; ++n) {
        cfzeta::Rational x(cfzeta::BigInt(2 * n + 1), cfzeta::BigInt(2 * N));
        ok = ok && cfzeta::cf_value(cfzeta::cf_expand(x)) == x;
        ++count;
      }
    }
    report("cf-round-trip", ok, std::to_string(count) + " abscissas, exact");
  }
  {  // Identity and involution on random rationals.
    std::mt19937_64 rng(424242);
    bool ok = true;
    std::uint64_t involutions = 0;
    for (int iter = 0; iter < 10000 && ok; ++iter) {
      const std::uint64_t den = rng() % 1000000 + 1;
      const std::uint64_t num = rng() % den + 1;
      cfzeta::Rational x{cfzeta::BigInt(num), cfzeta::BigInt(den)};
      const std::size_t p = rng() % 4 + 1;
      const std::size_t q = rng() % 4 + 1;
      ok = ok && cfzeta::digit_swap(x, p, p) == x;
      cfzeta::CFExpansion e = cfzeta::cf_expand(x);
      if (e.length() >= std::max(p, q)) {
        cfzeta::CFExpansion sw = cfzeta::swap_digits(e, p, q);
        if (sw.length() == e.length()) {
          ok = ok &&
               cfzeta::digit_swap(cfzeta::digit_swap(x, p, q), p, q) == x;
          ++involutions;
        }
      }
    }
    report("swap-involution-and-identity", ok,
           std::to_string(involutions) + " involutions, exact");
  }
  {  // Determinant sweep.
    bool ok = true;
    for (std::uint32_t a1 = 1; a1 <= max_a && ok; ++a1) {
      for (std::uint32_t a2 = 1; a2 <= max_a && ok; ++a2) {
        cfzeta::MobiusPiece piece = cfzeta::mobius_coeffs(a1, a2);
        ok = piece.a * piece.d - piece.b * piece.c == cfzeta::BigInt(1);
      }
    }
    report("mobius-determinant", ok,
           std::to_string(max_a) + "x" + std::to_string(max_a) + " cells");
  }
  {  // Cell / swap agreement in exact arithmetic.
    std::mt19937_64 rng(515151);
    bool ok = true;
    for (std::uint32_t a1 = 1; a1 <= 50 && ok; ++a1) {
      for (std::uint32_t a2 = 1; a2 <= 50 && ok; ++a2) {
        cfzeta::MobiusPiece piece = cfzeta::mobius_coeffs(a1, a2);
        cfzeta::Rational width = piece.cell_hi - piece.cell_lo;
        for (int k = 0; k < 5 && ok; ++k) {
          cfzeta::Rational x =
              piece.cell_lo +
              width * cfzeta::Rational(cfzeta::BigInt(rng() % 999983 + 1),
                                       cfzeta::BigInt(1000003u));
          ok = piece.apply(x) == cfzeta::digit_swap(x, 1, 2);
        }
      }
    }
    report("mobius-cell-agreement", ok, "a1,a2 <= 50, 5 points each, exact");
  }
  {  // Shadow identity residual over the lattice.
    bool ok = true;
    double worst = 0;
    for (std::uint64_t N : {2ull, 10ull, 100ull, 11051ull}) {
      for (double re : {-2.0, -0.75, 0.5, 1.75, 3.0}) {
        for (double im : {0.0, 8.5, 17.0, 25.5, 34.0}) {
          const double r =
              cfzeta::shadow_identity_residual(N, Complex(re, im), &pool);
          worst = std::max(worst, r);
          ok = ok && r <= 1e-12;
        }
      }
    }
    report("shadow-identity", ok,
           "worst residual " + cfzeta::format_double(worst));
  }
  {  // p == q reduction is bit-identical to the shadow sum.
    SumTable permuted = SumTable::build({SumKind::kPermuted, 2000, 2, 2}, &pool);
    SumTable shadow = SumTable::build({SumKind::kShadow, 2000}, &pool);
    bool ok = permuted.weights() == shadow.weights();
    for (Complex s : {Complex(2, 0), Complex(0.5, 14.92), Complex(-1, 3)}) {
      ok = ok && permuted.evaluate(s, &pool) == shadow.evaluate(s, &pool);
    }
    report("identity-swap-reduction", ok, "bit-identical");
  }
  {  // Parseval on a synthetic series.
    std::mt19937_64 rng(99);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> x(1024);
    for (double& v : x) v = gauss(rng);
    const double r = cfzeta::parseval_residual(x);
    report("parseval", r < 1e-10, "residual " + cfzeta::format_double(r));
  }
  if (!common.cache_dir.empty()) {  // Cache rejects corruption, rebuilds.
    SumSpec spec{SumKind::kPermuted, 777, 1, 2};
    SumTable built = SumTable::build(spec, &pool);
    cfzeta::table_cache::save(common.cache_dir, built);
    const fs::path file =
        fs::path(common.cache_dir) / cfzeta::table_cache::file_name(spec);
    {
      std::fstream f(file, std::ios::in | std::ios::out | std::ios::binary);
      f.seekp(40);
      f.put('\x42');
    }
    bool rejected = !cfzeta::table_cache::load(common.cache_dir, spec).has_value();
    SumTable rebuilt = cfzeta::table_cache::get_or_build(common.cache_dir, spec, &pool);
    bool ok = rejected && rebuilt.weights() == built.weights() &&
              rebuilt.log_abscissas() == built.log_abscissas();
    report("cache-integrity", ok, "corrupted entry rejected and rebuilt");
  }

  if (failures == 0) {
    std::cout << "selftest: all checks passed\n";
    return kExitOk;
  }
  std::cout << "selftest: " << failures << " check(s) FAILED\n";
  return kExitComputation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"continued-fraction digit-swap zeta explorer"};
  app.require_subcommand(1);

  // eval
  CommonOptions eval_common;
  SumOptions eval_sums;
  std::string eval_s;
  auto* eval = app.add_subcommand("eval", "evaluate one sum at one point");
  add_common(eval, eval_common, false, false, true);
  add_sum_options(eval, eval_sums);
  eval->add_option("--s", eval_s, "complex point, e.g. 0.5+14.92i")->required();

  // scan
  CommonOptions scan_common;
  SumOptions scan_sums;
  GridOptions scan_grid;
  auto* scan = app.add_subcommand("scan", "|sum| over a grid, CSV output");
  add_common(scan, scan_common, true, true, false);
  add_sum_options(scan, scan_sums);
  add_grid_options(scan, scan_grid);

  // phase
  CommonOptions phase_common;
  SumOptions phase_sums;
  double phase_t_lo = 13, phase_t_hi = 34;
  std::uint64_t phase_steps = 512;
  auto* phase = app.add_subcommand(
      "phase", "parametric trace along the critical line, CSV output");
  add_common(phase, phase_common, true, true, false);
  add_sum_options(phase, phase_sums);
  phase->add_option("--t-lo", phase_t_lo, "lower Im(s)");
  phase->add_option("--t-hi", phase_t_hi, "upper Im(s)");
  phase->add_option("--steps", phase_steps, "number of points");

  // find-zero
  CommonOptions fz_common;
  SumOptions fz_sums;
  GridOptions fz_grid;
  std::string fz_seed;
  bool fz_scan = false, fz_classify = false;
  double fz_threshold = 0.05;
  cfzeta::RefineOptions fz_opt;
  auto* fz = app.add_subcommand("find-zero",
                                "refine a zero from a seed (or scan a grid)");
  add_common(fz, fz_common, true, false, true);
  add_sum_options(fz, fz_sums);
  fz->add_option("--seed", fz_seed, "starting point, e.g. 0.5+14.2i");
  fz->add_flag("--scan", fz_scan, "scan the grid for candidates, then refine");
  add_grid_options(fz, fz_grid);
  fz->add_option("--threshold", fz_threshold,
                 "candidate/classification threshold on |sum|");
  fz->add_option("--tol", fz_opt.tol, "refinement tolerance in s");
  fz->add_option("--max-iter", fz_opt.max_iter, "simplex iteration budget");
  fz->add_option("--initial-step", fz_opt.initial_step, "first simplex edge");
  fz->add_option("--radius", fz_opt.search_radius,
                 "search radius around the seed (0 = unbounded)");
  fz->add_flag("--classify", fz_classify,
               "label the result dominant or artifact (refines at 2N)");

  // zero-series
  CommonOptions zs_common;
  std::uint32_t zs_p = 1, zs_q = 2;
  std::uint64_t zs_lo = 0, zs_hi = 0, zs_step = 1;
  std::string zs_seed = "0.5+14.92i";
  std::string zs_policy = "warm";
  cfzeta::RefineOptions zs_opt;
  auto* zs = app.add_subcommand("zero-series",
                                "track a zero across a ladder of N values");
  add_common(zs, zs_common, true, true, false);
  zs->add_option("--p", zs_p, "first swapped digit position");
  zs->add_option("--q", zs_q, "second swapped digit position");
  zs->add_option("--N-lo", zs_lo, "first N")->required();
  zs->add_option("--N-hi", zs_hi, "last N")->required();
  zs->add_option("--N-step", zs_step, "N increment");
  zs->add_option("--seed", zs_seed, "seed for the first N");
  zs->add_option("--seed-policy", zs_policy, "warm | fixed");
  zs->add_option("--tol", zs_opt.tol, "refinement tolerance in s");
  zs->add_option("--max-iter", zs_opt.max_iter, "simplex iteration budget");
  zs->add_option("--initial-step", zs_opt.initial_step, "first simplex edge");

  // spectrum
  CommonOptions sp_common;
  std::string sp_input, sp_component = "im", sp_window = "none", sp_fit_out;
  double sp_band_lo = 0, sp_band_hi = 0;
  auto* sp = app.add_subcommand("spectrum",
                                "power spectrum and log-log slope of a series");
  add_common(sp, sp_common, true, false, true);
  sp->add_option("--input", sp_input, "zero-series CSV")->required();
  sp->add_option("--component", sp_component, "re | im | residual");
  sp->add_option("--band-lo", sp_band_lo, "fit band low frequency");
  sp->add_option("--band-hi", sp_band_hi, "fit band high frequency");
  sp->add_option("--window", sp_window, "none | hann");
  sp->add_option("--fit-out", sp_fit_out, "fit summary JSON path");

  // analytic
  CommonOptions an_common;
  std::string an_s;
  std::uint32_t an_a1max = 200, an_a2max = 200, an_kmax = 64;
  auto* an = app.add_subcommand(
      "analytic", "cell-integral evaluation of the (1,2)-swap zeta");
  add_common(an, an_common, false, false, true);
  an->add_option("--s", an_s, "complex point")->required();
  an->add_option("--a1max", an_a1max, "first-digit cutoff");
  an->add_option("--a2max", an_a2max, "second-digit cutoff");
  an->add_option("--kmax", an_kmax, "starting Newton-series length");

  // selftest
  CommonOptions st_common;
  std::uint32_t st_max_a = 100;
  auto* st = app.add_subcommand("selftest", "run the exact-identity suite");
  add_common(st, st_common, false, false, false);
  st->add_option("--max-a", st_max_a, "determinant sweep bound");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (eval->parsed()) return cmd_eval(eval_common, eval_sums, eval_s);
    if (scan->parsed()) return cmd_scan(scan_common, scan_sums, scan_grid);
    if (phase->parsed()) {
      return cmd_phase(phase_common, phase_sums, phase_t_lo, phase_t_hi,
                       phase_steps);
    }
    if (fz->parsed()) {
      return cmd_find_zero(fz_common, fz_sums, fz_seed, fz_scan, fz_grid,
                           fz_threshold, fz_opt, fz_classify);
    }
    if (zs->parsed()) {
      return cmd_zero_series(zs_common, zs_p, zs_q, zs_lo, zs_hi, zs_step,
                             zs_seed, zs_policy, zs_opt);
    }
    if (sp->parsed()) {
      return cmd_spectrum(sp_common, sp_input, sp_component, sp_band_lo,
                          sp_band_hi, sp_window, sp_fit_out);
    }
    if (an->parsed()) {
      return cmd_analytic(an_common, an_s, an_a1max, an_a2max, an_kmax);
    }
    if (st->parsed()) return cmd_selftest(st_common, st_max_a);
  } catch (const cfzeta::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const cfzeta::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitComputation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitComputation;
  }
  return kExitUsage;
}
