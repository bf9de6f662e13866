#include "levyext/extremes.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "levyext/errors.hpp"
#include "levyext/parallel.hpp"

namespace levyext {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

double largest_atom_in(const JumpField& field, const PConvexSet& target) {
  double best = 0.0;
  for (const auto& a : field.atoms) {
    if (a.magnitude > best && target.contains(a.location)) best = a.magnitude;
  }
  return best;
}

GridSpec grid_for(const SimulationWindow& window) { return GridSpec{window.grid_step, {}}; }

std::vector<const JumpField*> field_list(std::initializer_list<const JumpField*> fields) {
  std::vector<const JumpField*> out;
  for (const auto* f : fields) {
    if (f != nullptr) out.push_back(f);
  }
  return out;
}

struct Samples {
  std::vector<double> value;
  std::vector<double> perturbed;
  std::vector<double> share;
};

Samples run_replicates(const ExperimentConfig& cfg, const PConvexSet& target, bool perturb,
                       double smallest_level) {
  const std::size_t m = cfg.replicates;
  std::vector<ReplicateSupremum> out(m);
  ExperimentConfig local = cfg;
  if (cfg.simulation.light && !cfg.simulation.light_delta) {
    const SimulationWindow w = experiment_window(cfg, target, 0);
    local.simulation.light_delta =
        light_cutoff(cfg.model, w.volume(), cfg.simulation.light_bias_fraction * smallest_level);
  }
  parallel_for(m, [&](std::size_t i) { out[i] = replicate_supremum(local, target, i, perturb); });
  Samples s;
  s.value.reserve(m);
  for (const auto& r : out) {
    s.value.push_back(r.value);
    s.share.push_back(r.largest_share);
    if (r.perturbed) s.perturbed.push_back(*r.perturbed);
  }
  return s;
}

// P(sample > x) scaled by 1 / tail(x).
LevelRecord exceedance_record(const std::vector<double>& sample, double x, double tail, double z,
                              double target) {
  LevelRecord rec;
  rec.x = x;
  rec.trials = sample.size();
  rec.count = static_cast<std::uint64_t>(
      std::count_if(sample.begin(), sample.end(), [x](double v) { return v > x; }));
  rec.probability = wilson_interval(rec.count, rec.trials, z);
  rec.target = target;
  rec.usable = rec.count > 0;
  if (rec.usable) {
    rec.estimate = rec.probability.estimate / tail;
    rec.lower = rec.probability.lower / tail;
    rec.upper = rec.probability.upper / tail;
    rec.covered = rec.lower <= target && target <= rec.upper;
  }
  return rec;
}

LevelRecord cdf_record(const std::vector<double>& sorted, double x, double z, double target) {
  LevelRecord rec;
  rec.x = x;
  rec.trials = sorted.size();
  rec.count = static_cast<std::uint64_t>(std::upper_bound(sorted.begin(), sorted.end(), x) -
                                         sorted.begin());
  rec.probability = wilson_interval(rec.count, rec.trials, z);
  rec.estimate = rec.probability.estimate;
  rec.lower = rec.probability.lower;
  rec.upper = rec.probability.upper;
  rec.target = target;
  rec.covered = rec.probability.contains(target);
  return rec;
}

Verdict coverage_verdict(const std::string& name, const std::vector<LevelRecord>& levels,
                         double confidence) {
  Verdict v{name, false, "target inside the " + fmt(100.0 * confidence) +
                             "% Wilson interval at the two largest levels", ""};
  if (levels.size() < 2) {
    v.detail = "fewer than two levels";
    return v;
  }
  v.pass = true;
  std::ostringstream detail;
  for (std::size_t i = levels.size() - 2; i < levels.size(); ++i) {
    const auto& r = levels[i];
    if (!r.usable) {
      v.pass = false;
      detail << "x=" << fmt(r.x) << " unusable (no exceedances); ";
      continue;
    }
    v.pass = v.pass && r.covered;
    detail << "x=" << fmt(r.x) << " ratio " << fmt(r.estimate) << " in [" << fmt(r.lower) << ", "
           << fmt(r.upper) << "]; ";
  }
  v.detail = detail.str();
  return v;
}

Verdict slope_verdict(const std::vector<LevelRecord>& levels, double significance) {
  const double zcrit = normal_quantile_two_sided(1.0 - significance);
  Verdict v{"slope", false,
            "|slope / se| <= " + fmt(zcrit) + " across the three largest levels (significance " +
                fmt(significance) + ")",
            ""};
  if (levels.size() < 3) {
    v.detail = "fewer than three levels";
    return v;
  }
  std::vector<double> xs, ys, sig;
  for (std::size_t i = levels.size() - 3; i < levels.size(); ++i) {
    const auto& r = levels[i];
    if (!r.usable) {
      v.detail = "level x=" + fmt(r.x) + " unusable";
      return v;
    }
    const double scale = r.estimate / r.probability.estimate;
    xs.push_back(std::log(r.x));
    ys.push_back(r.estimate);
    sig.push_back(r.probability.standard_error * scale);
  }
  const LinearFit fit = weighted_linear_fit(xs, ys, sig);
  const double z = fit.slope / fit.slope_se;
  v.pass = std::abs(z) <= zcrit;
  v.detail = "slope " + fmt(fit.slope) + " per log-level, z = " + fmt(z);
  return v;
}

std::vector<double> sorted_copy(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v;
}

void require_mass(const TailModel& model) {
  if (!(model.rho_one() > 0.0)) throw DomainError("model has no jump mass above 1");
}

ExperimentResult run_ladder(const ExperimentConfig& cfg, bool perturb) {
  const auto start = Clock::now();
  cfg.validate();
  require_mass(cfg.model);
  if (cfg.scalings.empty()) throw DomainError("scalings must not be empty");
  if (cfg.x_grid.empty()) throw DomainError("x_grid must not be empty");
  const double z = normal_quantile_two_sided(cfg.tolerances.confidence);
  const bool oracle = cfg.mode == SupremumMode::PoissonMaxOracle;

  ExperimentResult res;
  res.kind = perturb ? "perturbed_frechet" : (oracle ? "poisson_max_oracle" : "frechet");
  res.replicates = cfg.replicates;
  res.seed = cfg.seed;
  const auto F = [&](double x) { return frechet_cdf(cfg.model, x); };

  for (double r : cfg.scalings) {
    LadderRecord rung;
    rung.scaling = r;
    const PConvexSet target = cfg.index_set.scaled(r);
    rung.volume = target.volume();
    rung.norming = norming_constant(cfg.model, rung.volume);
    const double a = rung.norming;
    Samples s = run_replicates(cfg, target, perturb && !oracle, a * cfg.x_grid.front());
    for (auto& v : s.value) v /= a;
    for (auto& v : s.perturbed) v /= a;
    const auto sorted = sorted_copy(s.value);
    for (double x : cfg.x_grid) {
      LevelRecord rec = cdf_record(sorted, x, z, F(x));
      if (oracle) {
        const double exact = poisson_max_cdf(cfg.model, rung.volume, a, x);
        rec.exact = exact;
        rec.exact_covered =
            wilson_interval(rec.count, rec.trials, cfg.tolerances.oracle_z).contains(exact);
      }
      rung.levels.push_back(rec);
    }
    rung.ks = ks_distance(s.value, F);
    if (oracle) {
      rung.ks_exact = ks_distance(s.value, [&](double x) {
        return poisson_max_cdf(cfg.model, rung.volume, a, x);
      });
    }
    if (perturb && !s.perturbed.empty()) {
      const auto sorted_p = sorted_copy(s.perturbed);
      for (std::size_t i = 0; i < cfg.x_grid.size(); ++i) {
        const double x = cfg.x_grid[i];
        LevelRecord rec = cdf_record(sorted_p, x, z, F(x));
        rung.paired_difference.push_back(rec.estimate - rung.levels[i].estimate);
        rung.paired_half_width.push_back(std::hypot(rec.probability.half_width(),
                                                    rung.levels[i].probability.half_width()));
        rung.perturbed_levels.push_back(rec);
      }
      rung.ks_perturbed = ks_distance(s.perturbed, F);
    }
    res.ladder.push_back(std::move(rung));
  }

  const auto& last = res.ladder.back();
  if (oracle) {
    Verdict exact{"exact_law", true,
                  "exact finite-n CDF inside the z=" + fmt(cfg.tolerances.oracle_z) +
                      " Wilson interval at every level and scaling",
                  ""};
    std::ostringstream detail;
    for (const auto& rung : res.ladder) {
      for (const auto& rec : rung.levels) {
        if (!*rec.exact_covered) {
          exact.pass = false;
          detail << "volume " << fmt(rung.volume) << " x=" << fmt(rec.x) << ": "
                 << fmt(rec.estimate) << " vs " << fmt(*rec.exact) << "; ";
        }
      }
    }
    exact.detail = exact.pass ? "all covered" : detail.str();
    res.verdicts.push_back(exact);

    Verdict limit{"frechet_final", true,
                  "|F_hat - F| <= " + fmt(cfg.tolerances.frechet_abs) + " at the largest scaling",
                  ""};
    std::ostringstream d2;
    for (const auto& rec : last.levels) {
      const double dev = std::abs(rec.estimate - rec.target);
      limit.pass = limit.pass && dev <= cfg.tolerances.frechet_abs;
      d2 << "x=" << fmt(rec.x) << " dev " << fmt(dev) << "; ";
    }
    limit.detail = d2.str();
    res.verdicts.push_back(limit);
  } else if (!perturb) {
    Verdict trend{"ks_decreasing", true, "KS distance strictly decreasing along the ladder", ""};
    std::ostringstream detail;
    for (std::size_t i = 0; i < res.ladder.size(); ++i) {
      detail << fmt(res.ladder[i].ks) << (i + 1 < res.ladder.size() ? " > " : "");
      if (i > 0 && !(res.ladder[i].ks < res.ladder[i - 1].ks)) trend.pass = false;
    }
    trend.detail = detail.str();
    res.verdicts.push_back(trend);
    res.verdicts.push_back({"ks_final", last.ks <= cfg.tolerances.ks,
                            "final KS <= " + fmt(cfg.tolerances.ks), "KS " + fmt(last.ks)});
  } else {
    Verdict paired{"paired_invariance", true,
                   "|F_hat_perturbed - F_hat| <= joint " + fmt(100.0 * cfg.tolerances.confidence) +
                       "% half width at every x, largest scaling",
                   ""};
    std::ostringstream detail;
    for (std::size_t i = 0; i < last.paired_difference.size(); ++i) {
      const bool ok = std::abs(last.paired_difference[i]) <= last.paired_half_width[i];
      paired.pass = paired.pass && ok;
      detail << "x=" << fmt(cfg.x_grid[i]) << " diff " << fmt(last.paired_difference[i]) << " / "
             << fmt(last.paired_half_width[i]) << "; ";
    }
    paired.detail = detail.str();
    res.verdicts.push_back(paired);
    const double ksp = last.ks_perturbed.value_or(1.0);
    res.verdicts.push_back({"perturbed_ks_final", ksp <= cfg.tolerances.ks,
                            "final perturbed KS <= " + fmt(cfg.tolerances.ks), "KS " + fmt(ksp)});
  }
  res.runtime_seconds = seconds_since(start);
  return res;
}

}  // namespace

void ExperimentConfig::validate() const {
  model.validate();
  const int d = index_set.dim();
  if (kernel.dim() != d) throw DomainError("kernel dimension differs from index_set dimension");
  if (replicates < 100) throw DomainError("replicates must be at least 100");
  for (std::size_t i = 0; i < x_grid.size(); ++i) {
    if (!(x_grid[i] > 0.0)) throw DomainError("x_grid entries must be positive");
    if (i > 0 && !(x_grid[i] > x_grid[i - 1])) {
      throw DomainError("x_grid must be strictly increasing");
    }
  }
  for (double p : exceedance_targets) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("exceedance targets must lie in (0, 1)");
  }
  for (double r : scalings) {
    if (!(r > 0.0)) throw DomainError("scalings must be positive");
  }
  if (k < 1 || L < 1) throw DomainError("k and L must be positive");
  if (!kernel.integrable(model.alpha)) {
    throw DivergenceError("alpha * (d + epsilon) / gamma <= d: sup-functional diverges");
  }
  if (simulation.light && !model.finite_variation()) {
    throw UnsupportedError("light-part simulation requires a finite-variation jump measure");
  }
  if (simulation.light_delta && !(*simulation.light_delta > 0.0 && *simulation.light_delta <= 1.0)) {
    throw DomainError("simulation.light_delta must lie in (0, 1]");
  }
  if (simulation.grid_step && !(*simulation.grid_step > 0.0)) {
    throw DomainError("simulation.grid_step must be positive");
  }
  if (simulation.margin && !(*simulation.margin >= 0.0)) {
    throw DomainError("simulation.margin must be >= 0");
  }
  const auto& t = tolerances;
  if (!(t.confidence > 0.0 && t.confidence < 1.0) || !(t.significance > 0.0 && t.significance < 1.0)) {
    throw DomainError("confidence and significance must lie in (0, 1)");
  }
  if (!(t.ks > 0.0) || !(t.oracle_z > 0.0) || !(t.frechet_abs > 0.0)) {
    throw DomainError("tolerances must be positive");
  }
}

bool ExperimentResult::passed() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

const Verdict* ExperimentResult::verdict(const std::string& name) const {
  for (const auto& v : verdicts) {
    if (v.name == name) return &v;
  }
  return nullptr;
}

double frechet_cdf(const TailModel& model, double x) {
  if (!(x > 0.0)) return 0.0;
  return std::exp(-std::pow(x, -model.alpha) * model.rho_one());
}

double poisson_max_cdf(const TailModel& model, double volume, double norming, double x) {
  if (x < 0.0) return 0.0;
  // Simulated atoms all exceed 1, so levels below 1 see the full rate.
  const double y = std::max(norming * x, 1.0);
  return std::exp(-volume * tail_mass(model, y));
}

SimulationWindow experiment_window(const ExperimentConfig& cfg, const PConvexSet& target,
                                   std::uint64_t replicate) {
  SimulationWindow w{target, 0.0, 0.0, cfg.seed, replicate};
  w.grid_step = cfg.simulation.grid_step.value_or(cfg.kernel.length_scale() / 20.0);
  if (cfg.simulation.margin) {
    w.margin = *cfg.simulation.margin;
  } else if (cfg.mode == SupremumMode::Field) {
    w.margin = required_margin(cfg.kernel, target, cfg.model, cfg.simulation.neglect_budget,
                               cfg.simulation.miss_probability);
  }
  return w;
}

ReplicateSupremum replicate_supremum(const ExperimentConfig& cfg, const PConvexSet& target,
                                     std::uint64_t replicate, bool perturb) {
  const SimulationWindow window = experiment_window(cfg, target, replicate);
  Rng heavy_rng = window.rng(Stream::Heavy);
  const JumpField heavy = simulate_heavy(window, cfg.model, cfg.kernel, heavy_rng);
  ReplicateSupremum out;
  if (cfg.mode == SupremumMode::PoissonMaxOracle) {
    out.value = largest_atom_in(heavy, target);
    out.largest_share = 1.0;
    if (perturb) out.perturbed = out.value;
    return out;
  }
  std::optional<JumpField> light;
  if (cfg.simulation.light) {
    Rng light_rng = window.rng(Stream::Light);
    light = simulate_series_light(window, cfg.model, cfg.kernel,
                                  cfg.simulation.light_delta.value_or(1.0), light_rng);
  }
  const JumpField* light_ptr = light ? &*light : nullptr;
  const GridSpec spec = grid_for(window);
  {
    FieldEvaluator ev(field_list({&heavy, light_ptr}), cfg.simulation.prune_level);
    const SupremumResult sup = grid_supremum(ev, target, spec);
    out.value = sup.sup_estimate;
    if (out.value > 0.0) out.largest_share = ev.largest_contribution(sup.argmax) / out.value;
  }
  if (perturb) {
    const SideFields side = simulate_side_fields(window, cfg.side_fields);
    FieldEvaluator ev(field_list({&heavy, light_ptr, &side.one, &side.two}),
                      cfg.simulation.prune_level);
    out.perturbed = grid_supremum(ev, target, spec).sup_estimate;
  }
  return out;
}

std::vector<double> tail_levels(const TailModel& model, double target,
                                const std::vector<double>& exceedance_targets) {
  if (!(target > 0.0)) throw DomainError("tail target must be positive");
  std::vector<double> out;
  for (double p : exceedance_targets) out.push_back(tail_quantile(model, p / target));
  std::sort(out.begin(), out.end());
  return out;
}

ExperimentResult tail_ratio_experiment(const ExperimentConfig& cfg, bool perturbed) {
  const auto start = Clock::now();
  cfg.validate();
  require_mass(cfg.model);
  const double z = normal_quantile_two_sided(cfg.tolerances.confidence);
  const PConvexSet& B = cfg.index_set;
  const FunctionalValue target = alpha_functional(cfg.kernel, B, cfg.model.alpha);

  ExperimentResult res;
  res.kind = perturbed ? "perturbed_tail_ratio" : "tail_ratio";
  res.replicates = cfg.replicates;
  res.seed = cfg.seed;
  res.target = target.value;
  res.target_error = target.error_bound;

  const auto levels = tail_levels(cfg.model, target.value, cfg.exceedance_targets);
  const Samples s = run_replicates(cfg, B, perturbed, levels.front());
  for (double x : levels) {
    const double tail = tail_mass(cfg.model, x);
    res.levels.push_back(exceedance_record(s.value, x, tail, z, target.value));
    if (perturbed) res.perturbed_levels.push_back(exceedance_record(s.perturbed, x, tail, z, target.value));
  }
  for (const auto& r : res.levels) {
    if (!r.usable) res.metrics["unusable_levels"] += 1.0;
  }

  // Heavy-tail signature: among the top 0.1% of replicates, how often does a
  // single atom carry at least 90% of the value at the argmax.
  if (cfg.mode == SupremumMode::Field) {
    const auto sorted = sorted_copy(s.value);
    const std::size_t top = std::max<std::size_t>(1, sorted.size() / 1000);
    const double threshold = sorted[sorted.size() - top];
    std::size_t n = 0;
    std::size_t dominated = 0;
    for (std::size_t i = 0; i < s.value.size(); ++i) {
      if (s.value[i] >= threshold) {
        ++n;
        if (s.share[i] >= 0.9) ++dominated;
      }
    }
    res.metrics["one_big_jump_replicates"] = static_cast<double>(n);
    res.metrics["one_big_jump_fraction"] = n ? static_cast<double>(dominated) / n : 0.0;
  }

  res.verdicts.push_back(coverage_verdict("coverage", res.levels, cfg.tolerances.confidence));
  res.verdicts.push_back(slope_verdict(res.levels, cfg.tolerances.significance));
  if (perturbed) {
    res.verdicts.push_back(
        coverage_verdict("perturbed_coverage", res.perturbed_levels, cfg.tolerances.confidence));
  }
  res.runtime_seconds = seconds_since(start);
  return res;
}

ExperimentResult frechet_experiment(const ExperimentConfig& cfg) { return run_ladder(cfg, false); }

ExperimentResult perturbed_frechet_experiment(const ExperimentConfig& cfg) {
  return run_ladder(cfg, true);
}

ExperimentResult anticluster_diagnostic(const ExperimentConfig& cfg) {
  const auto start = Clock::now();
  cfg.validate();
  const auto& opt = cfg.anticluster;
  if (opt.L < 1 || opt.block < 2) throw DomainError("anticluster needs L >= 1 and block >= 2");
  const int d = cfg.index_set.dim();
  const double L = static_cast<double>(opt.L);
  const double z = normal_quantile_two_sided(cfg.tolerances.confidence);
  // Without a kernel, cubes that do not touch share no atoms.
  const std::int64_t default_gap =
      cfg.mode == SupremumMode::PoissonMaxOracle
          ? 2
          : static_cast<std::int64_t>(std::floor(2.0 * cfg.kernel.truncation().value_or(L) / L)) + 2;
  std::int64_t gap = opt.distant_gap.value_or(default_gap);
  gap = std::max<std::int64_t>(gap, 2);

  const PConvexSet block(ConvexBody::cube(d, L * static_cast<double>(opt.block)));
  std::vector<LatticeIndex> cubes;
  {
    LatticeIndex idx{0, 0, 0};
    const std::int64_t b = opt.block;
    for (idx[0] = 0; idx[0] < b; ++idx[0]) {
      for (idx[1] = 0; idx[1] < (d > 1 ? b : 1); ++idx[1]) {
        for (idx[2] = 0; idx[2] < (d > 2 ? b : 1); ++idx[2]) cubes.push_back(idx);
      }
    }
  }
  auto chebyshev = [&](const LatticeIndex& a, const LatticeIndex& b) {
    std::int64_t m = 0;
    for (int i = 0; i < d; ++i) m = std::max<std::int64_t>(m, std::abs(a[i] - b[i]));
    return m;
  };
  const std::size_t nc = cubes.size();
  // Fixed pairs: cube 0 with its neighbour along axis 0, and with the cube
  // `gap` steps away along axis 0.
  const std::size_t stride = static_cast<std::size_t>(d > 2 ? opt.block * opt.block
                                                           : (d > 1 ? opt.block : 1));
  const bool have_distant = gap < opt.block;
  const std::size_t adjacent_j = stride;
  const std::size_t distant_j = have_distant ? static_cast<std::size_t>(gap) * stride : 0;

  std::vector<std::vector<char>> exceed(cfg.replicates);
  parallel_for(cfg.replicates, [&](std::size_t rep) {
    const SimulationWindow w = experiment_window(cfg, block, rep);
    Rng rng = w.rng(Stream::Heavy);
    const JumpField heavy = simulate_heavy(w, cfg.model, cfg.kernel, rng);
    std::vector<double> sup(nc, 0.0);
    if (cfg.mode == SupremumMode::PoissonMaxOracle) {
      for (const auto& a : heavy.atoms) {
        LatticeIndex idx{0, 0, 0};
        bool inside = true;
        for (int i = 0; i < d; ++i) {
          idx[i] = static_cast<std::int64_t>(std::floor(a.location[i] / L));
          inside = inside && idx[i] >= 0 && idx[i] < opt.block;
        }
        if (!inside) continue;
        const std::size_t flat =
            static_cast<std::size_t>((idx[0] * (d > 1 ? opt.block : 1) + idx[1]) *
                                         (d > 2 ? opt.block : 1) +
                                     idx[2]);
        sup[flat] = std::max(sup[flat], a.magnitude);
      }
    } else {
      FieldEvaluator ev({&heavy}, cfg.simulation.prune_level);
      for (std::size_t c = 0; c < nc; ++c) {
        Vec corner{};
        for (int i = 0; i < d; ++i) corner[i] = static_cast<double>(cubes[c][i]) * L;
        sup[c] = grid_supremum(ev, ConvexBody::cube(d, L, corner), grid_for(w)).sup_estimate;
      }
    }
    exceed[rep].resize(nc);
    for (std::size_t c = 0; c < nc; ++c) exceed[rep][c] = sup[c] > opt.level ? 1 : 0;
  });

  double singles = 0.0;
  double adjacent_pairs = 0.0, adjacent_total = 0.0;
  double distant_pairs = 0.0, distant_total = 0.0;
  std::uint64_t fixed_single0 = 0, fixed_adj = 0, fixed_dist = 0;
  double pair_count_sum = 0.0;
  for (const auto& e : exceed) {
    double per_rep_single = 0.0;
    for (std::size_t c = 0; c < nc; ++c) per_rep_single += e[c];
    singles += per_rep_single;
    for (std::size_t a = 0; a < nc; ++a) {
      for (std::size_t b = a + 1; b < nc; ++b) {
        const auto g = chebyshev(cubes[a], cubes[b]);
        const double both = (e[a] && e[b]) ? 1.0 : 0.0;
        pair_count_sum += both;
        if (g == 1) {
          adjacent_pairs += both;
          adjacent_total += 1.0;
        } else if (g >= gap) {
          distant_pairs += both;
          distant_total += 1.0;
        }
      }
    }
    fixed_single0 += e[0];
    fixed_adj += (e[0] && e[adjacent_j]) ? 1 : 0;
    if (have_distant) fixed_dist += (e[0] && e[distant_j]) ? 1 : 0;
  }
  const double M = static_cast<double>(cfg.replicates);
  const double p_single = singles / (M * nc);

  ExperimentResult res;
  res.kind = "anticluster";
  res.replicates = cfg.replicates;
  res.seed = cfg.seed;
  res.metrics["level"] = opt.level;
  res.metrics["cubes"] = static_cast<double>(nc);
  res.metrics["distant_gap"] = static_cast<double>(gap);
  res.metrics["single_probability"] = p_single;
  // Joint exceedances per pair over the independent-cube prediction.
  const double pairs = 0.5 * static_cast<double>(nc) * static_cast<double>(nc - 1);
  const double mean_pairs = pair_count_sum / M;
  res.metrics["pair_ratio"] = p_single > 0.0 ? mean_pairs / (pairs * p_single * p_single) : 0.0;

  const double product = p_single * p_single;
  auto row = [&](const std::string& label, std::uint64_t hits, double pooled) {
    const Interval iv = wilson_interval(hits, cfg.replicates, z);
    TableRow r{label, {}};
    r.values["pair_frequency"] = iv.estimate;
    r.values["lower"] = iv.lower;
    r.values["upper"] = iv.upper;
    r.values["pooled_pair_frequency"] = pooled;
    r.values["product_of_singles"] = product;
    return r;
  };
  res.table.push_back(
      row("adjacent", fixed_adj, adjacent_total > 0.0 ? adjacent_pairs / adjacent_total : 0.0));
  if (have_distant) {
    res.table.push_back(
        row("distant", fixed_dist, distant_total > 0.0 ? distant_pairs / distant_total : 0.0));
    const Interval iv = wilson_interval(fixed_dist, cfg.replicates, z);
    res.verdicts.push_back({"distant_independence", iv.contains(product),
                            "product of single-cube frequencies inside the " +
                                fmt(100.0 * cfg.tolerances.confidence) +
                                "% Wilson interval of the distant-pair frequency",
                            "pair " + fmt(iv.estimate) + " in [" + fmt(iv.lower) + ", " +
                                fmt(iv.upper) + "], product " + fmt(product)});
  }
  res.metrics["fixed_single_frequency"] = static_cast<double>(fixed_single0) / M;
  res.runtime_seconds = seconds_since(start);
  return res;
}

ExperimentResult ergodic_average_check(const ExperimentConfig& cfg) {
  const auto start = Clock::now();
  cfg.validate();
  const int d = cfg.index_set.dim();
  const auto& opt = cfg.ergodic;
  if (opt.blocks.empty()) throw DomainError("ergodic.blocks must not be empty");
  const double z = normal_quantile_two_sided(cfg.tolerances.confidence);
  const auto& sf = cfg.side_fields;
  const bool use_one = sf.one == SideFieldSpec::Kind::SmoothedNoise;
  const bool use_two = !use_one && sf.two == SideFieldSpec::Kind::SmoothedNoise;
  SideFieldSpec spec;
  if (use_one) {
    spec.one = sf.one;
    spec.one_bound = sf.one_bound;
    spec.one_sigma = sf.one_sigma;
  } else if (use_two) {
    spec.two = sf.two;
    spec.two_spacing = sf.two_spacing;
    spec.two_sd = sf.two_sd;
    spec.two_sigma = sf.two_sigma;
  }
  const double sigma = use_one ? sf.one_sigma : sf.two_sigma;
  const Kernel side_kernel = Kernel::gaussian(sigma, d);
  const double margin = side_kernel.envelope_radius(cfg.simulation.prune_level);
  const double step = cfg.simulation.grid_step.value_or(side_kernel.length_scale() / 20.0);

  ExperimentResult res;
  res.kind = "ergodic_average";
  res.replicates = cfg.replicates;
  res.seed = cfg.seed;
  std::vector<double> means, sds, ind_means, ind_sds;
  bool bounded = true;
  for (std::int64_t b : opt.blocks) {
    if (b < 1) throw DomainError("ergodic block sizes must be positive");
    const PConvexSet region(ConvexBody::cube(d, static_cast<double>(b)));
    std::vector<double> avg_sup(cfg.replicates), avg_ind(cfg.replicates);
    parallel_for(cfg.replicates, [&](std::size_t rep) {
      SimulationWindow w{region, margin, step, cfg.seed, rep};
      const SideFields side = simulate_side_fields(w, spec);
      FieldEvaluator ev({&side.one, &side.two}, cfg.simulation.prune_level);
      double s_sup = 0.0, s_ind = 0.0;
      std::size_t count = 0;
      LatticeIndex idx{0, 0, 0};
      for (idx[0] = 0; idx[0] < b; ++idx[0]) {
        for (idx[1] = 0; idx[1] < (d > 1 ? b : 1); ++idx[1]) {
          for (idx[2] = 0; idx[2] < (d > 2 ? b : 1); ++idx[2]) {
            Vec corner{};
            for (int i = 0; i < d; ++i) corner[i] = static_cast<double>(idx[i]);
            const double v =
                grid_supremum(ev, ConvexBody::cube(d, 1.0, corner), GridSpec{step, {}})
                    .sup_estimate;
            s_sup += v;
            s_ind += v > opt.indicator_level ? 1.0 : 0.0;
            ++count;
          }
        }
      }
      avg_sup[rep] = s_sup / static_cast<double>(count);
      avg_ind[rep] = s_ind / static_cast<double>(count);
    });
    for (double v : avg_ind) bounded = bounded && v >= 0.0 && v <= 1.0;
    TableRow row{"block_" + std::to_string(b), {}};
    row.values["block"] = static_cast<double>(b);
    row.values["mean_sup"] = mean(avg_sup);
    row.values["sd_sup"] = standard_deviation(avg_sup);
    row.values["mean_indicator"] = mean(avg_ind);
    row.values["sd_indicator"] = standard_deviation(avg_ind);
    means.push_back(row.values["mean_sup"]);
    sds.push_back(row.values["sd_sup"]);
    ind_means.push_back(row.values["mean_indicator"]);
    ind_sds.push_back(row.values["sd_indicator"]);
    res.table.push_back(std::move(row));
  }

  const bool all_zero = std::all_of(sds.begin(), sds.end(), [](double s) { return s == 0.0; });
  bool decreasing = true;
  for (std::size_t i = 1; i < sds.size(); ++i) decreasing = decreasing && sds[i] < sds[i - 1];
  res.verdicts.push_back({"fluctuation_decreasing", all_zero || decreasing,
                          "SD of block averages of sup strictly decreasing in block size",
                          [&] {
                            std::string s;
                            for (double v : sds) s += fmt(v) + " ";
                            return s;
                          }()});
  bool consistent = true;
  const double M = static_cast<double>(cfg.replicates);
  for (std::size_t i = 0; i + 1 < means.size(); ++i) {
    const double se = std::sqrt((sds[i] * sds[i] + sds.back() * sds.back()) / M);
    consistent = consistent && std::abs(means[i] - means.back()) <= z * se + 1e-12;
  }
  res.verdicts.push_back({"means_consistent", consistent,
                          "block means agree with the largest block within the joint " +
                              fmt(100.0 * cfg.tolerances.confidence) + "% interval",
                          ""});
  res.verdicts.push_back({"indicator_bounded", bounded, "indicator averages lie in [0, 1]", ""});
  res.runtime_seconds = seconds_since(start);
  return res;
}

}  // namespace levyext
