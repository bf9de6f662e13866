#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <fstream>
#include <iostream>
#include <sstream>

#include "levyext/errors.hpp"
#include "levyext/parallel.hpp"
#include "report.hpp"

namespace levyext::app {

using nlohmann::json;

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

json payload(const RunConfig& rc, const std::string& subcommand,
             const std::vector<ExperimentResult>& results) {
  json j = {{"subcommand", subcommand}, {"toolkit_version", LEVYEXT_VERSION}, {"config", rc.raw}};
  bool pass = true;
  json arr = json::array();
  for (const auto& r : results) {
    arr.push_back(to_json(r));
    pass = pass && r.passed();
  }
  j["passed"] = pass;
  j["results"] = std::move(arr);
  return j;
}

// Writes payload and per-result tables; reports failing verdicts.
int emit(RunWriter& writer, const RunConfig& rc, const std::string& subcommand,
         const std::vector<ExperimentResult>& results, std::ostream& out, std::ostream& err) {
  writer.write_json(subcommand + ".json", payload(rc, subcommand, results));
  int status = kExitPass;
  for (const auto& r : results) {
    writer.write(r.kind + ".csv", results_csv(r));
    if (!r.table.empty()) writer.write(r.kind + "_table.csv", table_csv(r));
    for (const auto& v : r.verdicts) {
      out << (v.pass ? "PASS " : "FAIL ") << r.kind << '/' << v.name << ": " << v.detail << '\n';
      if (!v.pass) {
        err << "verdict failed: " << r.kind << '/' << v.name << " (" << v.tolerance << ")\n";
        status = kExitVerdictFailure;
      }
    }
  }
  return status;
}

std::vector<ExperimentResult> tail_test(const RunConfig& rc) {
  return {tail_ratio_experiment(rc.experiment, rc.perturbed)};
}

std::vector<ExperimentResult> evt_test(const RunConfig& rc) {
  std::vector<ExperimentResult> out;
  if (rc.perturbed && rc.experiment.mode == SupremumMode::Field) {
    out.push_back(perturbed_frechet_experiment(rc.experiment));
  } else {
    out.push_back(frechet_experiment(rc.experiment));
  }
  if (rc.anticluster) out.push_back(anticluster_diagnostic(rc.experiment));
  if (rc.ergodic) out.push_back(ergodic_average_check(rc.experiment));
  return out;
}

std::vector<ExperimentResult> oracle_test(RunConfig rc) {
  rc.experiment.mode = SupremumMode::PoissonMaxOracle;
  return {frechet_experiment(rc.experiment)};
}

ExperimentResult geometry_check(const RunConfig& rc, RunWriter& writer) {
  const auto& cfg = rc.experiment;
  const auto& geo = rc.geometry;
  if (cfg.scalings.empty()) throw DomainError("scalings must not be empty");
  ExperimentResult res;
  res.kind = "geometry";
  res.seed = cfg.seed;

  const auto& bodies = cfg.index_set.bodies();
  for (std::size_t b = 0; b < bodies.size(); ++b) {
    TableRow row{"body " + std::to_string(b), {}};
    const auto v = intrinsic_volumes(bodies[b]);
    for (std::size_t j = 0; j < v.size(); ++j) row.values["V" + std::to_string(j)] = v[j];
    for (double r : {0.5, 1.0, 2.0}) row.values["steiner_r" + fmt(r)] = steiner_volume(bodies[b], r);
    res.table.push_back(std::move(row));
  }
  res.metrics["volume"] = cfg.index_set.volume();

  const auto rows = count_limit_experiment(cfg.index_set, cfg.scalings, geo.k_list, cfg.L);
  Verdict p_bound{"count_p_bound", true,
                  "|p L^d / k - 1| <= " + fmt(geo.count_constant) + " k^-1/2 at the largest n", ""};
  Verdict q_bound{"count_q_bound", true,
                  "|q L^d / k - 1| <= " + fmt(geo.count_constant) + " k^-1/2 at the largest n", ""};
  Verdict monotone{"count_monotone", true, "deviations decrease in k", ""};
  std::ostringstream dp, dq, dm;
  double prev_p = INFINITY, prev_q = INFINITY;
  for (const auto& row : rows) {
    const double bound = geo.count_constant / std::sqrt(static_cast<double>(row.k));
    const double ep = std::abs(row.final_p - 1.0);
    const double eq = std::abs(row.final_q - 1.0);
    p_bound.pass = p_bound.pass && ep <= bound;
    q_bound.pass = q_bound.pass && eq <= bound;
    monotone.pass = monotone.pass && ep < prev_p && eq < prev_q;
    prev_p = ep;
    prev_q = eq;
    dp << "k=" << row.k << ": " << fmt(ep) << " vs " << fmt(bound) << "; ";
    dq << "k=" << row.k << ": " << fmt(eq) << " vs " << fmt(bound) << "; ";
    dm << "k=" << row.k << ": " << fmt(ep) << '/' << fmt(eq) << "; ";
    res.table.push_back({"k " + std::to_string(row.k),
                         {{"final_p", row.final_p},
                          {"final_q", row.final_q},
                          {"liminf_p", row.liminf_p},
                          {"limsup_q", row.limsup_q},
                          {"bound", bound}}});
  }
  if (rows.empty()) {
    p_bound.pass = q_bound.pass = monotone.pass = false;
    p_bound.detail = "no scaling with |C_n| >= k";
  } else {
    p_bound.detail = dp.str();
    q_bound.detail = dq.str();
    monotone.detail = dm.str();
  }
  res.verdicts = {p_bound, q_bound, monotone};

  std::ostringstream csv;
  csv << "k,scaling,p_ratio,q_ratio\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.scalings.size(); ++i) {
      csv << row.k << ',' << row.scalings[i] << ',' << row.p_ratio[i] << ',' << row.q_ratio[i] << '\n';
    }
  }
  writer.write("count_limit.csv", csv.str());
  if (geo.dump_grid) {
    const GridScheme grid = build_grid(cfg.index_set.scaled(cfg.scalings.back()), cfg.k, cfg.L);
    std::ostringstream g;
    grid.write_csv(g);
    writer.write("grid.csv", g.str());
  }
  return res;
}

int simulate(const RunConfig& rc, RunWriter& writer, std::ostream& out) {
  const auto& cfg = rc.experiment;
  const double scaling = cfg.scalings.empty() ? 1.0 : cfg.scalings.back();
  const PConvexSet target = cfg.index_set.scaled(scaling);
  const SimulationWindow window = experiment_window(cfg, target, 0);

  Rng heavy_rng = window.rng(Stream::Heavy);
  const JumpField heavy = simulate_heavy(window, cfg.model, cfg.kernel, heavy_rng);
  std::optional<JumpField> light;
  if (cfg.simulation.light) {
    const double delta = cfg.simulation.light_delta.value_or(
        light_cutoff(cfg.model, window.volume(), cfg.simulation.light_bias_fraction));
    Rng light_rng = window.rng(Stream::Light);
    light = simulate_series_light(window, cfg.model, cfg.kernel, delta, light_rng);
  }
  const SideFields side = simulate_side_fields(window, cfg.side_fields);
  std::vector<const JumpField*> fields{&heavy};
  if (light) fields.push_back(&*light);
  if (!side.one.atoms.empty()) fields.push_back(&side.one);
  if (!side.two.atoms.empty()) fields.push_back(&side.two);

  const FieldEvaluator ev(fields, cfg.simulation.prune_level);
  const GridSpec spec{window.grid_step, {}};
  const auto nodes = grid_nodes(target, spec);
  const auto values = evaluate_field(ev, nodes);
  const SupremumResult sup = grid_supremum(ev, target, spec);

  std::ostringstream atoms;
  write_atoms_csv(atoms, heavy);
  writer.write("atoms.csv", atoms.str());
  if (light) {
    std::ostringstream la;
    write_atoms_csv(la, *light);
    writer.write("light_atoms.csv", la.str());
  }
  std::ostringstream field;
  write_field_csv(field, target.dim(), nodes, values);
  writer.write("field.csv", field.str());

  json argmax = json::array();
  for (int i = 0; i < target.dim(); ++i) argmax.push_back(sup.argmax[i]);
  json summary = {{"subcommand", "simulate"},
                  {"toolkit_version", LEVYEXT_VERSION},
                  {"config", rc.raw},
                  {"scaling", scaling},
                  {"target_volume", target.volume()},
                  {"margin", window.margin},
                  {"window_volume", window.volume()},
                  {"grid_step", window.grid_step},
                  {"heavy_atoms", heavy.atoms.size()},
                  {"light_atoms", light ? light->atoms.size() : 0},
                  {"light_bias_bound", light ? light->truncation_bias_bound : 0.0},
                  {"side_one_atoms", side.one.atoms.size()},
                  {"side_two_atoms", side.two.atoms.size()},
                  {"nodes", nodes.size()},
                  {"sup_estimate", sup.sup_estimate},
                  {"argmax", argmax},
                  {"evaluation_error", sup.evaluation_error},
                  {"exact", sup.exact}};
  if (sup.upper_bound) summary["sup_upper_bound"] = *sup.upper_bound;
  writer.write_json("simulate.json", summary);
  out << "simulated " << heavy.atoms.size() << " heavy atoms; sup over " << nodes.size()
      << " nodes = " << fmt(sup.sup_estimate) << '\n';
  return kExitPass;
}

}  // namespace

const std::vector<std::string>& experiment_subcommands() {
  static const std::vector<std::string> names = {"geometry-check", "tail-test", "evt-test",
                                                 "simulate", "oracle-test"};
  return names;
}

int run_subcommand(const std::string& name, const CommandContext& ctx, std::ostream& out,
                   std::ostream& err) {
  RunConfig rc;
  try {
    rc = load_config(ctx.config_path, ctx.overrides);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }
  RunWriter writer(ctx.out_dir, name, rc.raw, rc.experiment.seed);
  int status = kExitPass;
  try {
    if (name == "geometry-check") {
      status = emit(writer, rc, name, {geometry_check(rc, writer)}, out, err);
    } else if (name == "tail-test") {
      status = emit(writer, rc, name, tail_test(rc), out, err);
    } else if (name == "evt-test") {
      status = emit(writer, rc, name, evt_test(rc), out, err);
    } else if (name == "oracle-test") {
      status = emit(writer, rc, name, oracle_test(rc), out, err);
    } else if (name == "simulate") {
      status = simulate(rc, writer, out);
    } else {
      err << "unknown subcommand '" << name << "'\n";
      return kExitConfigError;
    }
  } catch (const DomainError& e) {
    err << "config error: " << e.what() << '\n';
    status = kExitConfigError;
  } catch (const UnsupportedError& e) {
    err << "config error: " << e.what() << '\n';
    status = kExitConfigError;
  } catch (const DegenerateGridError& e) {
    err << "config error: " << e.what() << '\n';
    status = kExitConfigError;
  }
  writer.finish(status);
  return status;
}

std::vector<ValidationItem> validate_text(const std::string& text) {
  using Level = ValidationItem::Level;
  std::vector<ValidationItem> items;
  auto add = [&](Level level, const std::string& key, const std::string& message) {
    items.push_back({level, key, message, locate_key(text, key)});
  };

  RunConfig rc;
  try {
    Overrides o;
    o.cross_checks = false;
    rc = build_config(parse_json(text), text, o);
  } catch (const ConfigError& e) {
    items.push_back({Level::Error, "", e.what(), std::nullopt});
    return items;
  }
  const auto& cfg = rc.experiment;
  const auto& m = cfg.model;
  const int d = cfg.index_set.dim();

  if (cfg.kernel.dim() != d) add(Level::Error, "kernel", "kernel dimension differs from index_set");

  // Two assumption tracks: a Hoelder kernel admits any jump measure, a
  // finite-variation measure admits any integrable kernel.
  const bool holder = cfg.kernel.holder_constant().has_value();
  const bool fv = m.finite_variation();
  if (holder && fv) {
    add(Level::Ok, "kernel", "Hoelder kernel with a finite-variation model: both tracks apply");
  } else if (holder) {
    add(Level::Ok, "kernel", "Hoelder kernel: unrestricted jump measure track");
  } else if (fv) {
    add(Level::Ok, "model", "finite-variation model: any integrable kernel");
  } else {
    add(Level::Error, "kernel",
        "discontinuous kernel with an infinite-variation model: neither assumption track applies");
  }
  if (cfg.simulation.light && !fv) {
    add(Level::Error, "simulation.light",
        "light-part simulation requested for an infinite-variation model (unsupported track)");
  }

  if (m.gamma > 0.0 && m.gamma < m.alpha && m.gamma <= 1.0) {
    add(Level::Ok, "model.gamma", "gamma = " + fmt(m.gamma) + " lies in (0, alpha) and (0, 1]");
  } else {
    add(Level::Error, "model.gamma", "gamma must lie in (0, alpha) and (0, 1]");
  }

  if (!cfg.kernel.integrable(m.alpha)) {
    add(Level::Warning, "kernel",
        "alpha * (d + epsilon) / gamma <= d: the sup-functional diverges and experiments will be "
        "rejected");
  }
  if (!(m.rho_one() > 0.0)) {
    add(Level::Warning, "model.scale", "no jump mass above 1: only `simulate` is meaningful");
  }

  const double step = cfg.simulation.grid_step.value_or(cfg.kernel.length_scale() / 20.0);
  if (!(step > 0.0)) {
    add(Level::Error, "simulation.grid_step", "must be positive");
  } else if (step > cfg.kernel.length_scale() / 4.0) {
    add(Level::Warning, "simulation.grid_step",
        "step " + fmt(step) + " is coarse relative to the kernel length scale " +
            fmt(cfg.kernel.length_scale()));
  } else {
    add(Level::Ok, "simulation.grid_step", "grid step " + fmt(step));
  }

  for (std::size_t i = 0; i < cfg.x_grid.size(); ++i) {
    if (!(cfg.x_grid[i] > 0.0) || (i > 0 && !(cfg.x_grid[i] > cfg.x_grid[i - 1]))) {
      add(Level::Error, "x_grid", "entries must be positive and strictly increasing");
      break;
    }
  }
  for (double p : cfg.exceedance_targets) {
    if (!(p > 0.0 && p < 1.0)) {
      add(Level::Error, "exceedance_targets", "entries must lie in (0, 1)");
    } else if (rc.raw.contains("exceedance_targets") &&
               p * static_cast<double>(cfg.replicates) < 10.0) {
      add(Level::Warning, "exceedance_targets",
          "level " + fmt(p) + " expects fewer than 10 exceedances with " +
              std::to_string(cfg.replicates) + " replicates");
    }
  }
  for (double r : cfg.scalings) {
    if (!(r > 0.0)) add(Level::Error, "scalings", "entries must be positive");
  }
  if (cfg.scalings.size() >= 2) {
    const double lo = *std::min_element(cfg.scalings.begin(), cfg.scalings.end());
    const double hi = *std::max_element(cfg.scalings.begin(), cfg.scalings.end());
    const double decades = d * std::log10(hi / lo);
    if (decades < 1.0) {
      add(Level::Warning, "scalings", "ladder spans less than one decade of volume");
    }
  }
  if (rc.raw.contains("grid")) {
    try {
      const double vmax = cfg.index_set.volume();
      const double rmax = cfg.scalings.empty()
                              ? 1.0
                              : *std::max_element(cfg.scalings.begin(), cfg.scalings.end());
      const double vol = vmax * std::pow(rmax, d);
      for (auto k : rc.geometry.k_list) {
        if (vol < static_cast<double>(k)) {
          add(Level::Warning, "grid.k_list",
              "k = " + std::to_string(k) + " exceeds the largest scaled volume " + fmt(vol));
        }
      }
    } catch (const std::exception& e) {
      add(Level::Warning, "index_set", e.what());
    }
  }

  // Remaining constraints enforced when experiments run.
  try {
    cfg.validate();
  } catch (const DivergenceError&) {
    // Reported above as a warning.
  } catch (const UnsupportedError&) {
    // Reported above.
  } catch (const std::exception& e) {
    bool known = false;
    for (const auto& it : items) known = known || (it.level == Level::Error);
    if (!known) add(Level::Error, "", e.what());
  }
  return items;
}

int validate_command(const std::string& config_path, std::ostream& out) {
  std::string text;
  try {
    text = read_file(config_path);
  } catch (const ConfigError& e) {
    out << "ERROR " << e.what() << '\n';
    return kExitConfigError;
  }
  const auto items = validate_text(text);
  int errors = 0, warnings = 0;
  for (const auto& it : items) {
    const char* tag = "OK   ";
    if (it.level == ValidationItem::Level::Warning) {
      tag = "WARN ";
      ++warnings;
    } else if (it.level == ValidationItem::Level::Error) {
      tag = "ERROR";
      ++errors;
    }
    out << tag << ' ';
    if (it.line) out << "line " << *it.line << ": ";
    if (!it.key.empty()) out << it.key << ": ";
    out << it.message << '\n';
  }
  out << errors << " error(s), " << warnings << " warning(s)\n";
  return errors > 0 ? kExitConfigError : kExitPass;
}

}  // namespace levyext::app
