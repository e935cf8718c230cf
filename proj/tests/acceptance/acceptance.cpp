// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "frameinv/frameinv.hpp"

using namespace frameinv;

namespace {

// Pinned reference values and tolerances.
const std::vector<int> preset_n{16, 32, 64, 128, 256};
const std::vector<double> gaussian_reference{1.4e-3, 6.0e-4, 2.6e-4, 1.3e-4, 6.0e-5};
const std::vector<double> bump_reference{2.1e-5, 2.0e-6, 2.0e-7, 2.1e-8, 2.8e-9};
constexpr double gaussian_new_factor = 3.0;
constexpr double gaussian_fourier_factor = 2.0;
constexpr double gaussian_max_seconds = 180.0;
constexpr double bump_new_factor = 5.0;
constexpr double bump_max_doubling_ratio = 0.2;
constexpr double cond_new_lo = 2.0, cond_new_hi = 12.0;
constexpr double cond_cc_lo = 10.0, cond_cc_hi = 60.0;
constexpr double iteration_tol = 1e-5;
constexpr double max_new_iterations = 25.0;
constexpr double ls_cg_tol = 1e-12;
constexpr double ls_agreement = 1e-7;
constexpr double degenerate_agreement = 1e-12;
constexpr double subspace_cg_tol = 1e-12;
constexpr double subspace_max_l2 = 1e-9;
constexpr double decay_lo = 0.8, decay_hi = 1.2;
constexpr double planted_tol = 0.01;
constexpr double lambda_slack = 1e-8;
constexpr double contraction_slack = 1e-6;
constexpr double contraction_floor = 1e-10;
const std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [fail: " << what << "]";
    }
  }
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

bool within_factor(double value, double reference, double factor) {
  return value >= reference / factor && value <= reference * factor;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t k = v.size() / 2;
  return v.size() % 2 ? v[k] : 0.5 * (v[k - 1] + v[k]);
}

const AggregateRow& aggregate_for(const BenchTable& t, Method method, int n) {
  for (const auto& a : t.aggregates)
    if (a.method == method && a.n == n) return a;
  throw Error("missing aggregate for " + std::string(to_string(method)) + " n=" + std::to_string(n));
}

const BenchRow& row_for(const BenchTable& t, Method method, int n, std::uint64_t seed) {
  for (const auto& r : t.rows)
    if (r.result.method == method && r.result.n == n && r.result.seed == seed) return r;
  throw Error("missing row");
}

BenchConfig quiet(BenchConfig c) {
  c.pointwise_dumps = false;
  c.workers = 1;
  c.grid_size = 1024;
  return c;
}

struct Tables {
  BenchTable ex1, ex2, ex3;  // as configured by the presets
  BenchTable ex3_iter;       // Example 3 at the iteration-count tolerance
  double ex1_seconds = 0.0;
};

Tables run_tables() {
  Tables t;
  const auto start = std::chrono::steady_clock::now();
  t.ex1 = run_benchmark(quiet(example_config(1)));
  t.ex1_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  t.ex2 = run_benchmark(quiet(example_config(2)));
  t.ex3 = run_benchmark(quiet(example_config(3)));
  BenchConfig c = quiet(example_config(3));
  c.tol = iteration_tol;
  c.methods = {Method::new_method, Method::cc};
  t.ex3_iter = run_benchmark(c);
  return t;
}

// 1. Gaussian error band.
Outcome criterion1(const Tables& t) {
  Outcome o;
  o.detail << "new:";
  for (std::size_t i = 0; i < preset_n.size(); ++i) {
    const double e = aggregate_for(t.ex1, Method::new_method, preset_n[i]).median_l2_error;
    o.detail << " " << sci(e);
    o.check(within_factor(e, gaussian_reference[i], gaussian_new_factor), "new n=" + std::to_string(preset_n[i]));
  }
  o.detail << "; fourier:";
  for (std::size_t i = 0; i < preset_n.size(); ++i) {
    const double e = aggregate_for(t.ex1, Method::fourier, preset_n[i]).median_l2_error;
    o.detail << " " << sci(e) << " (x" << sci(gaussian_reference[i] / e) << ")";
    o.check(within_factor(e, gaussian_reference[i], gaussian_fourier_factor), "fourier n=" + std::to_string(preset_n[i]));
  }
  o.detail << "; runtime " << sci(t.ex1_seconds) << " s";
  o.check(t.ex1_seconds < gaussian_max_seconds, "runtime");
  return o;
}

// 2. Bump error band.
Outcome criterion2(const Tables& t) {
  Outcome o;
  std::vector<double> e;
  o.detail << "new:";
  for (std::size_t i = 0; i < preset_n.size(); ++i) {
    e.push_back(aggregate_for(t.ex3, Method::new_method, preset_n[i]).median_l2_error);
    o.detail << " " << sci(e.back());
    o.check(within_factor(e.back(), bump_reference[i], bump_new_factor), "n=" + std::to_string(preset_n[i]));
  }
  o.detail << "; ratios " << sci(e[1] / e[0]) << ", " << sci(e[2] / e[1]);
  o.check(e[1] / e[0] <= bump_max_doubling_ratio, "first doubling");
  o.check(e[2] / e[1] <= bump_max_doubling_ratio, "second doubling");
  return o;
}

// 3. Conditioning separation.
Outcome criterion3(const Tables& t) {
  Outcome o;
  const std::pair<const char*, const BenchTable*> tables[] = {{"ex1", &t.ex1}, {"ex2", &t.ex2}, {"ex3", &t.ex3}};
  double lo_new = INFINITY, hi_new = 0, lo_cc = INFINITY, hi_cc = 0;
  for (const auto& [name, table] : tables)
    for (int n : preset_n) {
      for (std::uint64_t s : seeds) {
        const double w = row_for(*table, Method::new_method, n, s).result.condition_number;
        const double v = row_for(*table, Method::cc, n, s).result.condition_number;
        o.check(w < v, std::string(name) + " n=" + std::to_string(n) + " seed=" + std::to_string(s));
      }
      const double mw = aggregate_for(*table, Method::new_method, n).median_condition_number;
      const double mv = aggregate_for(*table, Method::cc, n).median_condition_number;
      lo_new = std::min(lo_new, mw), hi_new = std::max(hi_new, mw);
      lo_cc = std::min(lo_cc, mv), hi_cc = std::max(hi_cc, mv);
      o.check(mw >= cond_new_lo && mw <= cond_new_hi, std::string(name) + " new median n=" + std::to_string(n));
      o.check(mv >= cond_cc_lo && mv <= cond_cc_hi, std::string(name) + " cc median n=" + std::to_string(n));
    }
  o.detail << "new medians " << sci(lo_new) << "-" << sci(hi_new) << ", cc medians " << sci(lo_cc) << "-" << sci(hi_cc);
  return o;
}

// 4. Iteration separation at tol 1e-5.
Outcome criterion4(const Tables& t) {
  Outcome o;
  const std::pair<const char*, const BenchTable*> tables[] = {{"ex1", &t.ex1}, {"ex2", &t.ex2}, {"ex3", &t.ex3_iter}};
  for (const auto& [name, table] : tables) {
    o.detail << name << " new/cc:";
    for (int n : preset_n) {
      const double w = aggregate_for(*table, Method::new_method, n).median_iterations;
      const double v = aggregate_for(*table, Method::cc, n).median_iterations;
      o.detail << " " << w << "/" << v;
      o.check(w <= max_new_iterations, std::string(name) + " new n=" + std::to_string(n));
      o.check(w < v, std::string(name) + " n=" + std::to_string(n));
    }
    o.detail << "; ";
  }
  o.check(t.ex1.config.tol == iteration_tol && t.ex2.config.tol == iteration_tol && t.ex3_iter.config.tol == iteration_tol,
          "tolerance");
  return o;
}

// 5. CG equals direct least squares on every benchmark triple.
Outcome criterion5() {
  Outcome o;
  double worst = 0.0;
  int count = 0;
  for (int example : {1, 2, 3}) {
    const BenchConfig c = example_config(example);
    const TargetFunction f = test_function(c.function);
    for (int n : c.n_list)
      for (std::uint64_t s : c.seeds) {
        const int m = resolve_m(c, n, s, 1.0);
        const FrameFamily psi = make_frame(FrameKind::jittered_fourier, m, c.delta, s);
        const CrossGram omega = gram(psi, integer_basis(n), m, n);
        const CoefVector fhat = frame_coefficients(f, psi, m);
        const LinearMap w = assemble_W(omega, self_gram(integer_basis(n), n));
        const SolveReport cg = cg_solve(w, moments_of_frame_data(omega, fhat), ls_cg_tol);
        const CoefVector ls = direct_ls(omega, fhat);
        const double rel = (cg.solution.values - ls.values).norm() / ls.values.norm();
        worst = std::max(worst, rel);
        ++count;
        o.check(cg.converged && rel <= ls_agreement,
                "ex" + std::to_string(example) + " n=" + std::to_string(n) + " seed=" + std::to_string(s));
      }
  }
  o.detail << count << " triples, worst relative difference " << sci(worst);
  return o;
}

// 6. Zero jitter with m = n reproduces the Fourier partial sum.
Outcome criterion6() {
  Outcome o;
  double worst = 0.0;
  for (const auto& name : test_function_names()) {
    const TargetFunction f = test_function(name);
    const FrameFamily flat = make_frame(FrameKind::jittered_fourier, 16, 0.0, 1);
    const ReconstructionResult nm = reconstruct(Method::new_method, f, flat, 16, 16);
    const ReconstructionResult fo = reconstruct(Method::fourier, f, flat, 16, 16);
    const double diff = (nm.coefficients.values - fo.coefficients.values).cwiseAbs().maxCoeff();
    worst = std::max(worst, diff);
    o.check(diff <= degenerate_agreement, name);
  }
  o.detail << "max coefficient difference " << sci(worst);
  return o;
}

// 7. Targets in the admissible span are reconstructed exactly.
Outcome criterion7() {
  Outcome o;
  double worst = 0.0;
  std::mt19937_64 gen(2718);
  std::normal_distribution<double> z;
  for (std::uint64_t s : seeds) {
    std::vector<double> a(17), b(17);
    for (int k = 0; k <= 16; ++k) a[k] = z(gen), b[k] = z(gen);
    const TargetFunction f{"span",
                           [a, b](double x) {
                             double v = a[0];
                             for (int k = 1; k <= 16; ++k)
                               v += a[k] * std::cos(std::numbers::pi * k * x) + b[k] * std::sin(std::numbers::pi * k * x);
                             return v;
                           },
                           ""};
    ReconstructionOptions opt;
    opt.tol = subspace_cg_tol;
    const ReconstructionResult r =
        reconstruct(Method::new_method, f, make_frame(FrameKind::jittered_fourier, 22, 0.25, s), 16, 22, opt);
    worst = std::max(worst, r.l2_error);
    o.check(r.l2_error <= subspace_max_l2, "seed " + std::to_string(s));
  }
  o.detail << "max L2 error " << sci(worst);
  return o;
}

// 8. Localization diagnostics.
Outcome criterion8() {
  Outcome o;
  o.detail << "fitted s:";
  for (std::uint64_t s : seeds) {
    const FrameFamily psi = make_frame(FrameKind::jittered_fourier, 128, 0.25, s);
    const LocalizationFit fit = estimate_localization(gram(psi, integer_basis(128), 128, 128));
    o.detail << " " << sci(fit.s);
    o.check(!fit.saturated && fit.s >= decay_lo && fit.s <= decay_hi, "seed " + std::to_string(s));
  }
  CrossGram planted{IndexSet(64), IndexSet(64), Eigen::MatrixXcd(129, 129), "planted", "planted"};
  const double s_true = 1.7;
  for (int j = -64; j <= 64; ++j)
    for (int l = -64; l <= 64; ++l) planted.entries(j + 64, l + 64) = 0.8 * std::pow(1.0 + std::abs(j - l), -s_true);
  const LocalizationFit fit = estimate_localization(planted);
  o.detail << "; planted 1.7 -> " << sci(fit.s);
  o.check(std::abs(fit.s - s_true) <= planted_tol, "planted exponent");
  return o;
}

// 9. Bound certification.
Outcome criterion9() {
  Outcome o;
  const std::pair<int, int> pairs[] = {{16, 22}, {64, 90}, {128, 180}};
  const int probe = 4 * 128;
  double min_margin = INFINITY, worst_ratio = 0.0;
  for (std::uint64_t s : seeds) {
    const FrameBounds bounds = estimate_frame_bounds(make_frame(FrameKind::jittered_fourier, probe, 0.25, s), probe, 128);
    for (auto [n, m] : pairs) {
      const FrameFamily psi = make_frame(FrameKind::jittered_fourier, m, 0.25, s);
      const TheoryConstants tc = theory_constants(psi, integer_basis(n), DecayParams{}, m, n);
      const LinearMap w = assemble_W(gram(psi, integer_basis(n), m, n), self_gram(integer_basis(n), n));
      const double lam = hermitian_eigenvalues(w.matrix())(0);
      const std::string tag = "(" + std::to_string(n) + "," + std::to_string(m) + ") seed " + std::to_string(s);
      o.check(tc.B_mn_exact <= tc.B_mn_bound, "B bound " + tag);
      o.check(lam >= bounds.A - tc.B_mn_exact - lambda_slack, "lambda_min " + tag);
      min_margin = std::min(min_margin, lam - (bounds.A - tc.B_mn_exact));
      worst_ratio = std::max(worst_ratio, tc.B_mn_exact / tc.B_mn_bound);
    }
  }
  o.detail << "max B_exact/B_bound " << sci(worst_ratio) << ", min lambda_min - (A - B_exact) " << sci(min_margin);
  return o;
}

// 10. Richardson versus CG.
Outcome criterion10() {
  Outcome o;
  const int n = 16, m = static_cast<int>(std::ceil(1.4 * n - 1e-9));
  o.detail << "iterations richardson/cg:";
  for (std::uint64_t s : seeds) {
    const FrameFamily psi = make_frame(FrameKind::jittered_fourier, 4 * n, 0.25, s);
    const FrameBounds bounds = estimate_frame_bounds(psi, 4 * n, n);
    const CrossGram omega = gram(psi, integer_basis(n), m, n);
    const LinearMap w = assemble_W(omega, self_gram(integer_basis(n), n));
    const CoefVector rhs = moments_of_frame_data(omega, frame_coefficients(test_function("gaussian"), psi, m));
    const SolveReport rich = richardson_solve(w, rhs, bounds);
    const SolveReport cg = cg_solve(w, rhs);
    o.detail << " " << rich.iterations << "/" << cg.iterations;
    o.check(rich.converged, "richardson converged seed " + std::to_string(s));
    o.check(rich.iterations >= cg.iterations, "iteration order seed " + std::to_string(s));
  }

  std::mt19937_64 gen(31415);
  std::uniform_real_distribution<double> lo(0.1, 1.0), spread(1.0, 8.0), unit(0.0, 1.0);
  double worst_excess = -INFINITY;
  for (int trial = 0; trial < 20; ++trial) {
    const double half_a = lo(gen), b = half_a * spread(gen);
    const FrameBounds fb = FrameBounds::user_supplied(2.0 * half_a, b);
    const int size = 15;
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(size, size);
    d(0, 0) = half_a;
    d(1, 1) = b;
    for (int i = 2; i < size; ++i) d(i, i) = half_a + (b - half_a) * unit(gen);
    const LinearMap map(MapLabel::W, d, Eigen::MatrixXcd::Identity(size, size), IndexSet(7), "integer-fourier");
    const CoefVector rhs{IndexSet(7), Eigen::VectorXcd::Ones(size), "integer-fourier"};
    const Eigen::VectorXcd exact = d.diagonal().cwiseInverse();
    const double e0 = exact.norm();
    double prev = e0;
    richardson_solve(map, rhs, fb, 1e-300, 30, [&](int, const Eigen::VectorXcd& x, double) {
      const double err = (x - exact).norm();
      // Below this the step ratio measures rounding, not contraction.
      if (prev > contraction_floor * e0) worst_excess = std::max(worst_excess, err / prev - fb.contraction());
      prev = err;
    });
  }
  o.detail << "; max per-step contraction excess " << sci(worst_excess);
  o.check(worst_excess <= contraction_slack, "contraction");
  return o;
}

}  // namespace

int main() {
  std::printf("frameinv acceptance suite\n");
  std::fflush(stdout);
  int failures = 0;
  auto report = [&](int id, const char* title, const Outcome& o) {
    std::printf("criterion %2d %s  %s: %s\n", id, o.pass ? "PASS" : "FAIL", title, o.detail.str().c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  };
  auto guarded = [&](int id, const char* title, const std::function<Outcome()>& fn) {
    try {
      report(id, title, fn());
    } catch (const std::exception& e) {
      Outcome o;
      o.check(false, std::string("exception: ") + e.what());
      report(id, title, o);
    }
  };

  Tables tables;
  bool have_tables = true;
  std::string table_error;
  try {
    tables = run_tables();
  } catch (const std::exception& e) {
    have_tables = false;
    table_error = e.what();
  }
  auto with_tables = [&](Outcome (*fn)(const Tables&)) {
    return [&, fn]() -> Outcome {
      if (!have_tables) throw Error("benchmark tables unavailable: " + table_error);
      return fn(tables);
    };
  };

  guarded(1, "error band (gaussian)", with_tables(criterion1));
  guarded(2, "error band (bump6)", with_tables(criterion2));
  guarded(3, "conditioning separation", with_tables(criterion3));
  guarded(4, "iteration separation", with_tables(criterion4));
  guarded(5, "least-squares equivalence", criterion5);
  guarded(6, "degenerate exactness", criterion6);
  guarded(7, "subspace exactness", criterion7);
  guarded(8, "localization diagnostics", criterion8);
  guarded(9, "bound certification", criterion9);
  guarded(10, "Richardson vs CG", criterion10);

  std::printf("%d of 10 criteria passed\n", 10 - failures);
  return failures == 0 ? 0 : 1;
}
