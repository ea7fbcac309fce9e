#include "lsieve/harness/commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <thread>

#include "lsieve/duality.hpp"
#include "lsieve/lattice.hpp"
#include "lsieve/spacing.hpp"
#include "lsieve/version.hpp"
#include "lsieve/weights.hpp"

namespace lsieve::harness {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point t0, bool timing) {
  return timing ? std::chrono::duration<double, std::milli>(Clock::now() - t0).count() : 0.0;
}

double rel_diff(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / scale;
}

double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Runs task(i) for i in [0, n) on a small pool; results stay indexed by i.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& task) {
  unsigned workers = threads > 0 ? static_cast<unsigned>(threads) : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(n, 1)));
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

ModuliFamily make_family(const ExperimentConfig& cfg, const std::string& name, double Q) {
  ModuliFamily f;
  f.kind = family_kind_from_string(name);
  f.k = f.kind == FamilyKind::kth_power ? cfg.k : (f.kind == FamilyKind::squares ? 2 : 1);
  f.range = range_from_string(cfg.range);
  f.Q = Q;
  f.associates = associates_from_string(cfg.associates);
  return f;
}

// Exponent handed to the bound formulas; square_norm moduli reach norm Q^2.
int bound_exponent(const ModuliFamily& f) { return f.kind == FamilyKind::square_norm ? 2 : f.power(); }

struct GridCell {
  std::string family;
  double Q, N;
};

struct CoeffChoice {
  CoeffKind kind;
  std::uint64_t seed;
};

std::vector<CoeffChoice> coefficient_choices(const ExperimentConfig& cfg) {
  std::vector<CoeffChoice> out;
  for (const auto& c : cfg.coeffs) {
    const CoeffKind kind = coeff_kind_from_string(c);
    if (kind == CoeffKind::random)
      for (std::uint64_t s : cfg.seeds) out.push_back({kind, s});
    else
      out.push_back({kind, 0});
  }
  return out;
}

const std::vector<std::string> kBoundNames{"huxley", "thm1", "thm2", "conj"};

struct IdentityRow {
  std::string name;
  std::int64_t cases = 0;
  double max_discrepancy = 0.0;
  double tolerance = 0.0;
};

}  // namespace

std::string gauss_string(GaussInt z) {
  std::string s = std::to_string(z.re);
  s += z.im < 0 ? "-" : "+";
  s += std::to_string(z.im < 0 ? -z.im : z.im) + "i";
  return s;
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"identities", "sweep", "spacing", "weyl", "duality", "report"};
  return names;
}

std::vector<WeylConfig> weyl_cases(double Q0, double truncation_tol) {
  std::vector<GaussInt> window;
  const double lo = Q0 / std::sqrt(2.0);
  for (const GaussInt& q : disk_points(Q0)) {
    const double n = static_cast<double>(norm(q));
    if (n > lo && n <= Q0 && canonical(q) == q) window.push_back(q);
  }
  if (window.empty()) throw ConfigError("Q0", "no Gaussian integer q1 with Q0/sqrt(2) < N(q1) <= Q0");
  std::sort(window.begin(), window.end(), [](GaussInt a, GaussInt b) {
    return norm(a) != norm(b) ? norm(a) > norm(b) : a < b;
  });
  const std::vector<std::vector<GaussInt>> r1_lists{{{1, 0}}, {{2, 1}, {3, 0}, {1, 2}, {1, 0}}, {{1, 2}, {3, 1}, {2, 0}, {1, 0}}};
  const GaussInt js[] = {{1, 0}, {1, 1}, {2, -1}};
  std::vector<WeylConfig> out;
  for (std::size_t i = 0; i < 3; ++i) {
    WeylConfig c;
    c.k = 2;
    c.Q0 = Q0;
    c.q1 = window[i % window.size()];
    for (const GaussInt& r : r1_lists[i])
      if (coprime(r, c.q1)) {
        c.r1 = r;
        break;
      }
    c.j = js[i];
    c.truncation_tol = truncation_tol;
    out.push_back(c);
  }
  return out;
}

std::vector<SieveReport> sweep_reports(const ExperimentConfig& cfg) {
  std::vector<GridCell> cells;
  for (const auto& f : cfg.family)
    for (double Q : cfg.Q)
      for (double N : cfg.N) cells.push_back({f, Q, N});
  const std::vector<CoeffChoice> choices = coefficient_choices(cfg);
  const Budget budget{cfg.max_points, cfg.max_operations};

  std::vector<std::vector<SieveReport>> results(cells.size());
  parallel_for(cells.size(), cfg.threads, [&](std::size_t idx) {
    const GridCell& cell = cells[idx];
    const ModuliFamily fam = make_family(cfg, cell.family, cell.Q);
    SieveReport base;
    base.family = cell.family;
    base.k = fam.power();
    base.Q = cell.Q;
    base.N = cell.N;
    base.associates = to_string(fam.associates);
    base.range = to_string(fam.range);

    std::vector<FareyPoint> points;
    bool skipped = false;
    const auto t_points = Clock::now();
    try {
      points = farey_points(fam, budget);
    } catch (const BudgetExceeded&) {
      skipped = true;
    }
    if (!skipped && !points.empty()) {
      const Ratio Nr = ratio_from_double(cell.N);
      base.R = points.size();
      base.K_euclid = K_euclid(points, Nr);
      base.K_sup = K_sup(points, Nr);
      base.K_norm = K_norm(points, Nr);
    }
    const double points_ms = elapsed_ms(t_points, cfg.timing);

    for (const CoeffChoice& choice : choices) {
      const auto t0 = Clock::now();
      SieveReport row = base;
      row.seed = choice.seed;
      row.coeffs = to_string(choice.kind);
      const CoefficientSeq a =
          make_coefficients(choice.kind, cell.N, choice.seed,
                            choice.kind == CoeffKind::extremal ? std::optional(default_probe(fam)) : std::nullopt);
      row.Z = a.Z();
      if (skipped) {
        row.status = "skipped:budget";
      } else {
        try {
          row.T = lhs_T(fam, a, budget);
        } catch (const BudgetExceeded&) {
          row.status = "skipped:budget";
        }
      }
      if (row.status == "ok") {
        const auto b = bounds(cell.Q, cell.N, row.Z, bound_exponent(fam), cfg.eps, cfg.C);
        for (const auto& name : kBoundNames) {
          row.bounds[name] = b.at(name);
          row.ratios[name] = row.T / b.at(name);
        }
        row.bounds["ls_explicit"] = bound_ls_explicit(row.K_euclid, cell.N, row.Z);
        row.ratios["ls_explicit"] = row.T / row.bounds["ls_explicit"];
      } else {
        for (const auto& name : kBoundNames) row.bounds[name] = row.ratios[name] = 0.0;
        row.bounds["ls_explicit"] = row.ratios["ls_explicit"] = 0.0;
      }
      row.wall_time_ms = cfg.timing ? points_ms + elapsed_ms(t0, true) : 0.0;
      results[idx].push_back(std::move(row));
    }
  });

  std::vector<SieveReport> out;
  for (auto& r : results)
    for (auto& row : r) out.push_back(std::move(row));
  return out;
}

CommandResult cmd_sweep(const ExperimentConfig& cfg) {
  const std::string hash = cfg.hash();
  CommandResult res;
  Table& t = res.table;
  t.columns = {"family", "k", "Q", "N", "seed", "R", "K_euclid", "K_sup", "K_norm", "T", "Z",
               "bound_huxley", "bound_thm1", "bound_thm2", "bound_conj", "bound_ls_explicit",
               "ratio_huxley", "ratio_thm1", "ratio_thm2", "ratio_conj", "ratio_ls_explicit",
               "coeffs", "associates", "range", "status", "config_hash", "version", "wall_time_ms"};
  bool failed = false, skipped = false;
  for (const SieveReport& r : sweep_reports(cfg)) {
    t.add({r.family, std::int64_t{r.k}, r.Q, r.N, static_cast<std::int64_t>(r.seed), static_cast<std::int64_t>(r.R),
           std::int64_t{r.K_euclid}, std::int64_t{r.K_sup}, std::int64_t{r.K_norm}, r.T, r.Z,
           r.bounds.at("huxley"), r.bounds.at("thm1"), r.bounds.at("thm2"), r.bounds.at("conj"),
           r.bounds.at("ls_explicit"), r.ratios.at("huxley"), r.ratios.at("thm1"), r.ratios.at("thm2"),
           r.ratios.at("conj"), r.ratios.at("ls_explicit"), r.coeffs, r.associates, r.range, r.status, hash,
           std::string(kVersion), r.wall_time_ms});
    if (r.status != "ok") skipped = true;
    // T <= (pi^4/4) K N Z with floating slack on T.
    if (r.status == "ok" && r.T > r.bounds.at("ls_explicit") * (1.0 + 1e-9)) failed = true;
  }
  res.exit_code = failed ? kFailure : (skipped ? kBudgetExceeded : kOk);
  return res;
}

CommandResult cmd_report(const ExperimentConfig& cfg) {
  const std::vector<SieveReport> rows = sweep_reports(cfg);
  const std::string hash = cfg.hash();
  CommandResult res;
  Table& t = res.table;
  t.columns = {"family", "k", "associates", "range", "cells", "skipped", "max_ratio_huxley", "argmax_huxley",
               "max_ratio_thm1", "max_ratio_thm2", "max_ratio_conj", "max_ratio_ls_explicit", "slope_T_over_Z_in_Q",
               "config_hash", "version"};
  const double N_top = *std::max_element(cfg.N.begin(), cfg.N.end());
  for (const auto& fam : cfg.family) {
    std::int64_t cells = 0, skipped = 0, k = 0;
    std::map<std::string, double> best;
    std::string where;
    std::vector<std::pair<double, double>> fit;  // (log Q, log T/Z) at the largest N, all-ones
    for (const SieveReport& r : rows) {
      if (r.family != fam) continue;
      ++cells;
      k = r.k;
      if (r.status != "ok") {
        ++skipped;
        continue;
      }
      for (const auto& [name, v] : r.ratios) {
        if (name == "huxley" && v > best[name]) {
          char buf[96];
          std::snprintf(buf, sizeof buf, "Q=%g N=%g %s seed=%llu", r.Q, r.N, r.coeffs.c_str(),
                        static_cast<unsigned long long>(r.seed));
          where = buf;
        }
        best[name] = std::max(best[name], v);
      }
      if (r.N == N_top && r.coeffs == "ones" && r.T > 0.0) fit.emplace_back(std::log(r.Q), std::log(r.T / r.Z));
    }
    double slope = 0.0;
    if (fit.size() >= 2) {
      double mx = 0, my = 0;
      for (auto [x, y] : fit) mx += x, my += y;
      mx /= static_cast<double>(fit.size());
      my /= static_cast<double>(fit.size());
      double sxy = 0, sxx = 0;
      for (auto [x, y] : fit) sxy += (x - mx) * (y - my), sxx += (x - mx) * (x - mx);
      slope = sxx > 0 ? sxy / sxx : 0.0;
    }
    t.add({fam, k, cfg.associates, cfg.range, cells, skipped, best["huxley"], where, best["thm1"], best["thm2"],
           best["conj"], best["ls_explicit"], slope, hash, std::string(kVersion)});
    if (best["ls_explicit"] > 1.0 + 1e-9) res.exit_code = kFailure;
    else if (skipped > 0 && res.exit_code == kOk) res.exit_code = kBudgetExceeded;
  }
  return res;
}


CommandResult cmd_spacing(const ExperimentConfig& cfg) {
  const std::string hash = cfg.hash();
  const double smooth_tol = 1e-10;
  const double tol = cfg.tol.value_or(1e-8);
  std::vector<GridCell> cells;
  for (const auto& f : cfg.family)
    for (double Q : cfg.Q)
      for (double N : cfg.N) cells.push_back({f, Q, N});
  const Budget budget{cfg.max_points, cfg.max_operations};

  CommandResult res;
  Table& t = res.table;
  t.columns = {"family", "k", "Q", "N", "associates", "range", "R", "K_euclid", "K_sup", "K_norm",
               "argmax_r", "argmax_modulus", "smoothed_direct", "smoothed_poisson", "smoothed_rel_diff",
               "smoothed_constant", "smoothed_bound", "status", "config_hash", "version", "wall_time_ms"};
  std::vector<std::vector<Cell>> rows(cells.size());
  std::vector<int> codes(cells.size(), kOk);
  parallel_for(cells.size(), cfg.threads, [&](std::size_t idx) {
    const auto t0 = Clock::now();
    const GridCell& c = cells[idx];
    const ModuliFamily fam = make_family(cfg, c.family, c.Q);
    std::vector<FareyPoint> pts;
    try {
      pts = farey_points(fam, budget);
    } catch (const BudgetExceeded&) {
      codes[idx] = kBudgetExceeded;
      rows[idx] = {c.family, std::int64_t{fam.power()}, c.Q, c.N, cfg.associates, cfg.range, std::int64_t{0},
                   std::int64_t{0}, std::int64_t{0}, std::int64_t{0}, std::string(), std::string(), 0.0, 0.0, 0.0,
                   0.0, 0.0, std::string("skipped:budget"), hash, std::string(kVersion), 0.0};
      return;
    }
    const Ratio Nr = ratio_from_double(c.N);
    const std::vector<long> local = euclid_neighbour_counts(pts, Nr);
    const auto best = static_cast<std::size_t>(std::max_element(local.begin(), local.end()) - local.begin());
    const long ke = local[best];
    const long ks = K_sup(pts, Nr);
    const long kn = K_norm(pts, Nr);
    std::string status = "ok";
    if (ke != kn || ks > ke) status = "fail:K";
    double direct = 0.0, poisson = 0.0, diff = 0.0, constant = 0.0, bound = 0.0;
    if (fam.kind != FamilyKind::square_norm) {
      const FareyPoint& p = pts[best];
      direct = smoothed_K_direct(fam, c.N, p.r, p.modulus, smooth_tol);
      poisson = smoothed_K_poisson(fam, c.N, p.r, p.modulus, smooth_tol).real();
      diff = rel_diff(direct, poisson);
      constant = smoothed_K_constant(fam);
      bound = constant * direct;
      if (diff > tol) status = "fail:smoothed_identity";
      else if (static_cast<double>(ke) > bound) status = "fail:smoothed_bound";
    }
    if (status != "ok") codes[idx] = kFailure;
    rows[idx] = {c.family, std::int64_t{fam.power()}, c.Q, c.N, cfg.associates, cfg.range,
                 static_cast<std::int64_t>(pts.size()), std::int64_t{ke}, std::int64_t{ks}, std::int64_t{kn},
                 gauss_string(pts[best].r), gauss_string(pts[best].modulus), direct, poisson, diff, constant, bound,
                 status, hash, std::string(kVersion), elapsed_ms(t0, cfg.timing)};
  });
  for (auto& r : rows) t.add(std::move(r));
  for (int code : codes)
    if (code == kFailure || (code == kBudgetExceeded && res.exit_code == kOk)) res.exit_code = code;
  return res;
}

CommandResult cmd_weyl(const ExperimentConfig& cfg) {
  const std::string hash = cfg.hash();
  const double tol = cfg.tol.value_or(1e-6);
  CommandResult res;
  Table& t = res.table;
  t.columns = {"k", "Q0", "q1", "r1", "j", "S_re", "S_im", "abs_S_pow_kappa", "differenced", "poisson",
               "max_rel_diff", "tolerance", "psi2_mass", "mass_over_Q0", "eps", "rhs", "ratio_to_rhs", "rhs_sampled",
               "rhs_seed", "status", "config_hash", "version", "wall_time_ms"};
  std::vector<WeylConfig> work;
  for (double Q0 : cfg.Q0) {
    for (WeylConfig w : weyl_cases(Q0)) {
      work.push_back(w);
      if (cfg.k > 2) {
        // Same q1 when it also fits the k-th power window.
        w.k = cfg.k;
        const double n = static_cast<double>(norm(w.q1));
        if (n > Q0 / std::pow(2.0, 1.0 / cfg.k)) work.push_back(w);
      }
    }
  }
  const std::uint64_t seed = cfg.seeds.front();
  std::vector<std::vector<Cell>> rows(work.size());
  std::vector<bool> bad(work.size(), false);
  parallel_for(work.size(), cfg.threads, [&](std::size_t i) {
    const auto t0 = Clock::now();
    const WeylConfig& w = work[i];
    const TruncatedSum s = S_direct(w);
    const double spk = std::pow(std::abs(s.value), w.kappa());
    double differenced = 0.0, poisson = 0.0, worst = 0.0;
    if (w.k == 2) {
      differenced = S2_squared_differenced(w).value.real();
      poisson = S2_squared_poisson(w).value.real();
      worst = std::max({rel_diff(spk, differenced), rel_diff(spk, poisson), rel_diff(differenced, poisson)});
    }
    const TruncatedSum mass = psi2_mass(w.k, w.Q0, w.truncation_tol);
    const PowerBoundRhs rhs = Sk_power_bound_rhs(w, cfg.eps, 200000, seed);
    const bool ok = worst <= tol;
    bad[i] = !ok;
    rows[i] = {std::int64_t{w.k}, w.Q0, gauss_string(w.q1), gauss_string(w.r1), gauss_string(w.j), s.value.real(),
               s.value.imag(), spk, differenced, poisson, worst, tol, mass.value.real(), mass.value.real() / w.Q0,
               cfg.eps, rhs.rhs, rhs.rhs > 0 ? spk / rhs.rhs : 0.0, rhs.sampled, static_cast<std::int64_t>(rhs.seed),
               std::string(ok ? "pass" : "fail"), hash, std::string(kVersion), elapsed_ms(t0, cfg.timing)};
  });
  for (auto& r : rows) t.add(std::move(r));
  if (std::find(bad.begin(), bad.end(), true) != bad.end()) res.exit_code = kFailure;
  return res;
}

CommandResult cmd_duality(const ExperimentConfig& cfg) {
  const std::string hash = cfg.hash();
  const double tol = cfg.tol.value_or(1e-9);
  CommandResult res;
  Table& t = res.table;
  t.columns = {"matrix", "rows", "cols", "seed", "forward", "backward", "svd_oracle", "discrepancy", "tolerance",
               "status", "config_hash", "version", "wall_time_ms"};
  for (int i = 0; i < cfg.matrices; ++i) {
    const auto t0 = Clock::now();
    // Shapes grow to rows x cols over the run.
    const int r = std::max(1, cfg.rows * (i + 1) / cfg.matrices);
    const int c = std::max(1, cfg.cols * (i + 1) / cfg.matrices);
    const std::uint64_t seed = cfg.seeds.front() + static_cast<std::uint64_t>(i);
    const DualityCheck d = duality_check(random_complex_matrix(r, c, seed));
    const bool ok = d.converged && d.discrepancy <= tol;
    if (!ok) res.exit_code = kFailure;
    t.add({std::int64_t{i}, std::int64_t{r}, std::int64_t{c}, static_cast<std::int64_t>(seed), d.forward, d.backward,
           d.svd_oracle, d.discrepancy, tol, std::string(ok ? "pass" : "fail"), hash, std::string(kVersion),
           elapsed_ms(t0, cfg.timing)});
  }
  return res;
}

CommandResult cmd_identities(const ExperimentConfig& cfg) {
  const std::string hash = cfg.hash();
  const auto tol_or = [&](double d) { return cfg.tol.value_or(d); };
  std::vector<IdentityRow> ids;
  std::vector<double> times;
  std::mt19937_64 rng(cfg.seeds.front());
  const auto timed = [&](auto&& body) {
    const auto t0 = Clock::now();
    ids.push_back(body());
    times.push_back(elapsed_ms(t0, cfg.timing));
  };

  const std::vector<GaussInt> moduli{{1, 0}, {1, 1}, {2, 0}, {2, 1}, {3, 0}, {3, 2}};
  const std::vector<Vec2> shifts{{0.0, 0.0}, {0.3, 0.7}, {-1.25, 0.5}};
  const std::vector<double> scales{0.25, 1.0, 4.0};

  timed([&] {
    IdentityRow r{"poisson_gaussian", 0, 0.0, tol_or(1e-10)};
    const WeightFn w = psi1_weight();
    for (const GaussInt& q : moduli)
      for (const Vec2& a : shifts)
        for (double B : scales) {
          r.max_discrepancy = std::max(r.max_discrepancy, poisson_two_sides(w, lattice_from_modulus(q), a, B, 1e-13).discrepancy);
          ++r.cases;
        }
    return r;
  });
  timed([&] {
    IdentityRow r{"poisson_g_square", 0, 0.0, tol_or(1e-10)};
    for (const GaussInt& alpha : {GaussInt{0, 0}, GaussInt{1, 1}, GaussInt{2, -1}})
      for (const Vec2& a : shifts) {
        const PoissonSides p = poisson_two_sides(g_square_weight(alpha, 2.0), lattice_from_modulus({2, 1}), a, 1.5, 1e-13);
        r.max_discrepancy = std::max(r.max_discrepancy, p.discrepancy);
        ++r.cases;
      }
    return r;
  });
  timed([&] {
    // Excess of the discrepancy over its certified tail.
    IdentityRow r{"fejer_periodization", 0, 0.0, tol_or(1e-8)};
    for (double N : {1.0, 4.0, 9.0})
      for (const Vec2& y : {Vec2{0.0, 0.0}, Vec2{0.1, 0.37}, Vec2{0.03, -0.05}, Vec2{0.5, 0.5}}) {
        const PeriodizationCheck c = fejer_periodization(y, N, 1e-9);
        r.max_discrepancy = std::max(r.max_discrepancy, std::max(0.0, c.discrepancy - c.tail_bound));
        ++r.cases;
      }
    return r;
  });
  const auto random_point = [&] {
    return Vec2{3.0 * unit_uniform(rng) - 1.5, 3.0 * unit_uniform(rng) - 1.5};
  };
  const auto transform_row = [&](const char* name, const WeightFn& w, double quad_tol) {
    IdentityRow r{name, 0, 0.0, tol_or(1e-6)};
    for (int i = 0; i < 20; ++i) {
      const Vec2 p = random_point();
      r.max_discrepancy = std::max(r.max_discrepancy, std::abs(w.transform(p) - numeric_fourier(w, p, quad_tol)));
      ++r.cases;
    }
    return r;
  };
  timed([&] { return transform_row("transform_fejer_hat", fejer_weight(), 1e-8); });
  timed([&] { return transform_row("transform_psi1_self_dual", psi1_weight(), 1e-10); });
  timed([&] { return transform_row("transform_g_hat", g_square_weight({1, 1}, 2.0), 1e-10); });
  timed([&] {
    // Amount by which the quadrature transform of g_k exceeds its Gaussian bound.
    IdentityRow r{"bound_g_k_hat", 0, 0.0, tol_or(1e-6)};
    const GaussInt alpha[] = {{1, 0}, {0, 1}};
    const WeightFn w = g_k_weight(alpha, 3, 4.0);
    for (int i = 0; i < 20; ++i) {
      const Vec2 p = random_point();
      const double excess = std::abs(numeric_fourier(w, p, 1e-10)) - g_hat_bound(alpha, 4.0, p);
      r.max_discrepancy = std::max(r.max_discrepancy, std::max(0.0, excess));
      ++r.cases;
    }
    return r;
  });
  timed([&] {
    IdentityRow r{"psi2_power_composition", 0, 0.0, tol_or(1e-12)};
    for (int k = 2; k <= 4; ++k)
      for (const GaussInt& q : {GaussInt{1, 0}, GaussInt{2, 1}, GaussInt{-3, 2}})
        for (double Q0 : {2.0, 5.0, 16.0}) {
          const std::complex<double> z = complex_power(q.to_complex(), k) / std::pow(Q0, k / 2.0);
          r.max_discrepancy = std::max(r.max_discrepancy, rel_diff(psi2(k, z), psi2_of_power(k, q, Q0)));
          ++r.cases;
        }
    return r;
  });

  // Sieve-side identities over the configured grid.
  timed([&] {
    IdentityRow r{"T_phase_forms", 0, 0.0, tol_or(1e-10)};
    for (const auto& f : cfg.family)
      for (double Q : cfg.Q)
        for (double N : cfg.N) {
          const ModuliFamily fam = make_family(cfg, f, Q);
          for (const CoefficientSeq& a : {make_coefficients(CoeffKind::all_ones, N),
                                          make_coefficients(CoeffKind::random, N, cfg.seeds.front())}) {
            r.max_discrepancy = std::max(r.max_discrepancy, rel_diff(lhs_T(fam, a), lhs_T_vector_form(fam, a)));
            ++r.cases;
          }
        }
    return r;
  });
  timed([&] {
    // |K_euclid - K_norm| + max(0, K_sup - K_euclid), exact.
    IdentityRow r{"K_formulations", 0, 0.0, cfg.tol.value_or(0.0)};
    for (const auto& f : cfg.family)
      for (double Q : cfg.Q) {
        const std::vector<FareyPoint> pts = farey_points(make_family(cfg, f, Q));
        for (double N : cfg.N) {
          const Ratio Nr = ratio_from_double(N);
          const long ke = K_euclid(pts, Nr), kn = K_norm(pts, Nr), ks = K_sup(pts, Nr);
          r.max_discrepancy = std::max(r.max_discrepancy, static_cast<double>(std::labs(ke - kn) + std::max(0L, ks - ke)));
          ++r.cases;
        }
      }
    return r;
  });
  timed([&] {
    IdentityRow r{"smoothed_K_poisson", 0, 0.0, tol_or(1e-8)};
    for (const auto& f : cfg.family) {
      if (f == "square_norm") continue;
      for (double Q : cfg.Q) {
        const ModuliFamily fam = make_family(cfg, f, Q);
        const std::vector<FareyPoint> pts = farey_points(fam);
        for (double N : cfg.N) {
          const FareyPoint& p = pts[pts.size() / 2];
          const double d = smoothed_K_direct(fam, N, p.r, p.modulus, 1e-10);
          const double s = smoothed_K_poisson(fam, N, p.r, p.modulus, 1e-10).real();
          r.max_discrepancy = std::max(r.max_discrepancy, rel_diff(d, s));
          ++r.cases;
        }
      }
    }
    return r;
  });
  timed([&] {
    IdentityRow r{"weyl_three_way", 0, 0.0, tol_or(1e-6)};
    for (double Q0 : cfg.Q0)
      for (const WeylConfig& w : weyl_cases(Q0)) {
        const double direct = std::norm(S_direct(w).value);
        const double d = S2_squared_differenced(w).value.real();
        const double p = S2_squared_poisson(w).value.real();
        r.max_discrepancy = std::max({r.max_discrepancy, rel_diff(direct, d), rel_diff(direct, p), rel_diff(d, p)});
        ++r.cases;
      }
    return r;
  });
  timed([&] {
    // Terminal difference against k! prod(alpha) (2q + sum alpha), exact.
    IdentityRow r{"P_terminal_form", 0, 0.0, cfg.tol.value_or(0.0)};
    for (int i = 0; i < 100; ++i) {
      const int k = 2 + static_cast<int>(rng() % 4);
      std::vector<GaussInt> alpha;
      const auto coord = [&] { return static_cast<Int>(rng() % 21) - 10; };
      for (int v = 0; v < k - 1; ++v) alpha.push_back({coord(), coord()});
      const GaussInt q{coord(), coord()};
      const GaussInt lhs = GaussInt{2, 0} * P_poly(k, alpha, q);
      const GaussInt rhs = P_terminal_doubled(k, alpha, q);
      r.max_discrepancy = std::max(r.max_discrepancy, static_cast<double>(norm(lhs - rhs) > 0));
      ++r.cases;
    }
    return r;
  });
  timed([&] {
    IdentityRow r{"duality", 0, 0.0, tol_or(1e-9)};
    for (int i = 0; i < cfg.matrices; ++i) {
      const int rr = std::max(1, cfg.rows * (i + 1) / cfg.matrices);
      const int cc = std::max(1, cfg.cols * (i + 1) / cfg.matrices);
      const DualityCheck d = duality_check(random_complex_matrix(rr, cc, cfg.seeds.front() + static_cast<std::uint64_t>(i)));
      r.max_discrepancy = std::max(r.max_discrepancy, d.converged ? d.discrepancy : 1.0);
      ++r.cases;
    }
    return r;
  });

  CommandResult res;
  Table& t = res.table;
  t.columns = {"identity", "cases", "max_discrepancy", "tolerance", "status", "config_hash", "version", "wall_time_ms"};
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const bool ok = ids[i].max_discrepancy <= ids[i].tolerance;
    if (!ok) res.exit_code = kFailure;
    t.add({ids[i].name, ids[i].cases, ids[i].max_discrepancy, ids[i].tolerance, std::string(ok ? "pass" : "fail"), hash,
           std::string(kVersion), times[i]});
  }
  return res;
}

int run_command(const std::string& name, const ExperimentConfig& cfg, std::ostream& os, std::ostream& err) {
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  }
  CommandResult res;
  try {
    if (name == "identities") res = cmd_identities(cfg);
    else if (name == "sweep") res = cmd_sweep(cfg);
    else if (name == "spacing") res = cmd_spacing(cfg);
    else if (name == "weyl") res = cmd_weyl(cfg);
    else if (name == "duality") res = cmd_duality(cfg);
    else if (name == "report") res = cmd_report(cfg);
    else {
      err << "unknown command \"" << name << "\"\n";
      return kConfigError;
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << '\n';
    return kBudgetExceeded;
  }
  const auto emit = [&](std::ostream& out) {
    if (cfg.format == "json") write_json(out, res.table);
    else write_csv(out, res.table);
  };
  if (cfg.out.empty()) {
    emit(os);
  } else {
    std::ofstream f(cfg.out);
    if (!f) {
      err << "config error: config key \"out\": cannot open \"" << cfg.out << "\"\n";
      return kConfigError;
    }
    emit(f);
  }
  return res.exit_code;
}

}  // namespace lsieve::harness
