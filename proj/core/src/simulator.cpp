#include "levyext/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <ostream>
#include <queue>

#include "levyext/errors.hpp"

namespace levyext {

namespace {

double box_volume(const Aabb& box, int dim) {
  double v = 1.0;
  for (int i = 0; i < dim; ++i) v *= box.hi[i] - box.lo[i];
  return v;
}

Vec uniform_point(const Aabb& box, int dim, Rng& rng) {
  Vec u{};
  for (int i = 0; i < dim; ++i) u[i] = rng.uniform(box.lo[i], box.hi[i]);
  return u;
}

// sup_y y^alpha rho((y, inf)).
double tail_power_constant(const TailModel& model) {
  switch (model.family) {
    case TailFamily::StableJump:
      return model.scale / model.alpha;
    case TailFamily::ParetoJump:
    case TailFamily::ShiftedParetoJump:
      return model.scale;
  }
  return model.scale;
}

double negative_index(const TailModel& model) {
  const auto& neg = *model.negative_part;
  const double b = neg.gamma_moment_bound / neg.mass;
  return model.gamma * b / (b - 1.0);
}

double solve_margin(const std::function<double(double)>& excess, double hi_start) {
  if (excess(0.0) <= 0.0) return 0.0;
  double hi = hi_start;
  while (excess(hi) > 0.0) {
    hi *= 2.0;
    if (hi > 1e9) throw DomainError("window margin does not converge");
  }
  double lo = 0.0;
  for (int i = 0; i < 200 && hi - lo > 1e-12 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (excess(mid) > 0.0 ? lo : hi) = mid;
  }
  return hi;
}

double clamp_field(const JumpField& field, double v) {
  if (!field.clip) return v;
  return std::clamp(v, -*field.clip, *field.clip);
}

}  // namespace

Aabb SimulationWindow::box() const {
  Aabb b = target.bounds();
  for (int i = 0; i < dim(); ++i) {
    b.lo[i] -= margin;
    b.hi[i] += margin;
  }
  return b;
}

double SimulationWindow::volume() const { return box_volume(box(), dim()); }

void SimulationWindow::validate() const {
  if (!(margin >= 0.0) || !std::isfinite(margin)) throw DomainError("window margin must be >= 0");
  if (!(grid_step > 0.0)) throw DomainError("grid step must be positive");
}

double required_margin(const Kernel& kernel, const PConvexSet& target, const TailModel& model,
                       double budget, double miss_probability) {
  if (!(budget > 0.0) || !(miss_probability > 0.0)) {
    throw DomainError("margin budget and miss probability must be positive");
  }
  // E #{atoms beyond R with m sup f > budget} <= c budget^-a int_{dist > R} sup f^a.
  auto excess_for = [&](double index, double constant) {
    return [&, index, constant](double R) {
      return constant * std::pow(budget, -index) * far_field_bound(kernel, target, index, R) -
             miss_probability;
    };
  };
  double R = solve_margin(excess_for(model.alpha, tail_power_constant(model)),
                          kernel.length_scale());
  if (model.negative_part) {
    R = std::max(R, solve_margin(excess_for(negative_index(model), model.negative_part->mass),
                                 kernel.length_scale()));
  }
  if (auto t = kernel.truncation()) R = std::min(R, *t);
  return R;
}

double JumpField::total_variation() const {
  double s = 0.0;
  for (const auto& a : atoms) s += std::abs(a.magnitude);
  return s;
}

JumpField simulate_heavy(const SimulationWindow& window, const TailModel& model,
                         const Kernel& kernel) {
  Rng rng = window.rng(Stream::Heavy);
  return simulate_heavy(window, model, kernel, rng);
}

JumpField simulate_heavy(const SimulationWindow& window, const TailModel& model,
                         const Kernel& kernel, Rng& rng) {
  window.validate();
  const int d = window.dim();
  const Aabb box = window.box();
  const double vol = box_volume(box, d);
  JumpField field{d, kernel, {}, 0.0, std::nullopt};

  const double rate = model.rho_one();
  const auto n = rng.poisson(vol * rate);
  field.atoms.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    Atom a;
    a.location = uniform_point(box, d, rng);
    a.magnitude = tail_quantile(model, rng.uniform_open_closed() * rate);
    field.atoms.push_back(a);
  }
  if (model.negative_part) {
    const double kappa = negative_index(model);
    const auto m = rng.poisson(vol * model.negative_part->mass);
    for (std::uint64_t i = 0; i < m; ++i) {
      Atom a;
      a.location = uniform_point(box, d, rng);
      a.magnitude = -std::pow(rng.uniform_open_closed(), -1.0 / kappa);
      field.atoms.push_back(a);
    }
  }
  return field;
}

JumpField simulate_heavy_series(const SimulationWindow& window, const TailModel& model,
                                const Kernel& kernel, Rng& rng) {
  window.validate();
  const int d = window.dim();
  const Aabb box = window.box();
  const double vol = box_volume(box, d);
  JumpField field{d, kernel, {}, 0.0, std::nullopt};
  const double stop = vol * model.rho_one();
  double gamma = rng.exponential(1.0);
  while (gamma <= stop) {
    Atom a;
    a.location = uniform_point(box, d, rng);
    a.magnitude = tail_quantile(model, gamma / vol);
    field.atoms.push_back(a);
    gamma += rng.exponential(1.0);
  }
  return field;
}

JumpField simulate_series_light(const SimulationWindow& window, const TailModel& model,
                                const Kernel& kernel, double delta, Rng& rng) {
  window.validate();
  if (!model.finite_variation()) {
    throw UnsupportedError("light part requires a finite-variation jump measure");
  }
  if (!(delta > 0.0) || delta > 1.0) throw DomainError("light cutoff delta must lie in (0, 1]");
  const int d = window.dim();
  const Aabb box = window.box();
  const double vol = box_volume(box, d);
  JumpField field{d, kernel, {}, vol * small_jump_mean(model, delta), std::nullopt};
  const double start = vol * model.rho_one();
  const double stop = vol * tail_mass(model, delta);
  double gamma = start + rng.exponential(1.0);
  while (gamma <= stop) {
    Atom a;
    a.location = uniform_point(box, d, rng);
    a.magnitude = tail_quantile(model, gamma / vol);
    field.atoms.push_back(a);
    gamma += rng.exponential(1.0);
  }
  return field;
}

double light_cutoff(const TailModel& model, double window_volume, double bias_budget) {
  if (!(bias_budget > 0.0)) throw DomainError("light bias budget must be positive");
  auto bias = [&](double delta) { return window_volume * small_jump_mean(model, delta); };
  if (bias(1.0) <= bias_budget) return 1.0;
  double lo = 0.0;
  double hi = 1.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid > 0.0 && bias(mid) <= bias_budget) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  if (!(lo > 0.0)) throw DomainError("light cutoff underflows for the requested bias budget");
  return lo;
}

SideFields simulate_side_fields(const SimulationWindow& window, const SideFieldSpec& spec) {
  window.validate();
  const int d = window.dim();
  const Aabb box = window.box();
  const double vol = box_volume(box, d);
  SideFields out{{d, Kernel::gaussian(spec.one_sigma, d), {}, 0.0, 1.0},
                 {d, Kernel::gaussian(spec.two_sigma, d), {}, 0.0, std::nullopt}};

  if (spec.one == SideFieldSpec::Kind::SmoothedNoise) {
    Rng rng = window.rng(Stream::SideOne);
    const auto n = rng.poisson(vol);
    out.one.atoms.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
      Atom a;
      a.location = uniform_point(box, d, rng);
      a.magnitude = rng.uniform(-spec.one_bound, spec.one_bound);
      out.one.atoms.push_back(a);
    }
  }
  if (spec.two == SideFieldSpec::Kind::SmoothedNoise) {
    if (!(spec.two_spacing > 0.0)) throw DomainError("side field spacing must be positive");
    Rng rng = window.rng(Stream::SideTwo);
    const double s = spec.two_spacing;
    Vec offset{};
    for (int i = 0; i < d; ++i) offset[i] = rng.uniform(0.0, s);
    std::array<std::int64_t, kMaxDim> lo{};
    std::array<std::int64_t, kMaxDim> count{1, 1, 1};
    for (int i = 0; i < d; ++i) {
      lo[i] = static_cast<std::int64_t>(std::ceil((box.lo[i] - offset[i]) / s));
      const auto hi = static_cast<std::int64_t>(std::floor((box.hi[i] - offset[i]) / s));
      count[i] = std::max<std::int64_t>(0, hi - lo[i] + 1);
    }
    for (std::int64_t a = 0; a < count[0]; ++a) {
      for (std::int64_t b = 0; b < count[1]; ++b) {
        for (std::int64_t c = 0; c < count[2]; ++c) {
          const std::array<std::int64_t, kMaxDim> idx{a, b, c};
          Atom atom;
          for (int i = 0; i < d; ++i) atom.location[i] = offset[i] + (lo[i] + idx[i]) * s;
          atom.magnitude = rng.normal(0.0, spec.two_sd);
          out.two.atoms.push_back(atom);
        }
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// FieldEvaluator

FieldEvaluator::FieldEvaluator(std::vector<const JumpField*> fields, double prune_level) {
  if (fields.empty()) throw DomainError("FieldEvaluator needs at least one field");
  if (!(prune_level > 0.0) || prune_level >= 1.0) {
    throw DomainError("prune level must lie in (0, 1)");
  }
  dim_ = fields.front()->dim;
  for (const JumpField* f : fields) {
    if (f->dim != dim_ || f->kernel.dim() != dim_) throw DomainError("field dimensions differ");
    Indexed idx;
    idx.field = f;
    double radius = f->kernel.envelope_radius(prune_level);
    double lost = f->kernel.envelope(radius);
    if (auto t = f->kernel.truncation(); t && *t <= radius) {
      radius = *t;
      lost = 0.0;
    }
    idx.radius = radius;
    error_bound_ += lost * f->total_variation();

    Aabb b;
    for (int i = 0; i < dim_; ++i) {
      b.lo[i] = std::numeric_limits<double>::infinity();
      b.hi[i] = -std::numeric_limits<double>::infinity();
    }
    for (const auto& a : f->atoms) {
      for (int i = 0; i < dim_; ++i) {
        b.lo[i] = std::min(b.lo[i], a.location[i]);
        b.hi[i] = std::max(b.hi[i], a.location[i]);
      }
    }
    if (f->atoms.empty()) {
      for (int i = 0; i < dim_; ++i) b.lo[i] = b.hi[i] = 0.0;
    }
    idx.bounds = b;
    // Cells of side ~radius, capped so the cell table stays small.
    double cell = std::max(radius, 1e-9);
    auto total_cells = [&](double c) {
      double n = 1.0;
      for (int i = 0; i < dim_; ++i) n *= std::floor((b.hi[i] - b.lo[i]) / c) + 1.0;
      return n;
    };
    const double cap = std::max(64.0, 4.0 * static_cast<double>(f->atoms.size()));
    while (total_cells(cell) > cap) cell *= 2.0;
    idx.cell = cell;
    idx.cells = {1, 1, 1};
    for (int i = 0; i < dim_; ++i) {
      idx.cells[i] = static_cast<std::int64_t>(std::floor((b.hi[i] - b.lo[i]) / cell)) + 1;
    }
    const std::size_t ncells = static_cast<std::size_t>(idx.cells[0] * idx.cells[1] * idx.cells[2]);
    auto cell_of = [&](const Vec& u) {
      std::size_t flat = 0;
      for (int i = 0; i < dim_; ++i) {
        auto c = static_cast<std::int64_t>(std::floor((u[i] - b.lo[i]) / cell));
        c = std::clamp<std::int64_t>(c, 0, idx.cells[i] - 1);
        flat = flat * static_cast<std::size_t>(idx.cells[i]) + static_cast<std::size_t>(c);
      }
      return flat;
    };
    idx.offsets.assign(ncells + 1, 0);
    for (const auto& a : f->atoms) ++idx.offsets[cell_of(a.location) + 1];
    for (std::size_t c = 0; c < ncells; ++c) idx.offsets[c + 1] += idx.offsets[c];
    idx.order.resize(f->atoms.size());
    std::vector<std::uint32_t> fill(idx.offsets.begin(), idx.offsets.end() - 1);
    for (std::uint32_t k = 0; k < f->atoms.size(); ++k) {
      idx.order[fill[cell_of(f->atoms[k].location)]++] = k;
    }
    fields_.push_back(std::move(idx));
  }
}

template <class Fn>
void FieldEvaluator::for_atoms_near(const Indexed& idx, const Aabb& box, Fn&& fn) const {
  if (idx.field->atoms.empty()) return;
  std::array<std::int64_t, kMaxDim> lo{0, 0, 0};
  std::array<std::int64_t, kMaxDim> hi{0, 0, 0};
  for (int i = 0; i < dim_; ++i) {
    const double a = (box.lo[i] - idx.radius - idx.bounds.lo[i]) / idx.cell;
    const double b = (box.hi[i] + idx.radius - idx.bounds.lo[i]) / idx.cell;
    if (b < 0.0 || a >= static_cast<double>(idx.cells[i])) return;
    lo[i] = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor(a)));
    hi[i] = std::min<std::int64_t>(idx.cells[i] - 1, static_cast<std::int64_t>(std::floor(b)));
  }
  const auto& atoms = idx.field->atoms;
  for (std::int64_t x = lo[0]; x <= hi[0]; ++x) {
    for (std::int64_t y = lo[1]; y <= hi[1]; ++y) {
      for (std::int64_t z = lo[2]; z <= hi[2]; ++z) {
        const std::size_t flat =
            static_cast<std::size_t>((x * idx.cells[1] + y) * idx.cells[2] + z);
        for (std::uint32_t k = idx.offsets[flat]; k < idx.offsets[flat + 1]; ++k) {
          fn(atoms[idx.order[k]]);
        }
      }
    }
  }
}

double FieldEvaluator::field_value(const Indexed& idx, const Vec& v) const {
  double s = 0.0;
  const Kernel& kernel = idx.field->kernel;
  for_atoms_near(idx, Aabb{v, v}, [&](const Atom& a) {
    const double r = distance(v, a.location, dim_);
    if (r <= idx.radius) s += a.magnitude * kernel.profile(r);
  });
  return clamp_field(*idx.field, s);
}

double FieldEvaluator::value(const Vec& v) const {
  double s = 0.0;
  for (const auto& idx : fields_) s += field_value(idx, v);
  return s;
}

double FieldEvaluator::upper_bound(const Aabb& box) const {
  double total = 0.0;
  for (const auto& idx : fields_) {
    const Kernel& kernel = idx.field->kernel;
    const auto t = kernel.truncation();
    double ub = 0.0;
    double scale = 1.0;
    for_atoms_near(idx, box, [&](const Atom& a) {
      if (a.magnitude > 0.0) {
        const double r = distance_to_box(a.location, box, dim_);
        if (r <= idx.radius && (!t || r < *t)) ub += a.magnitude * kernel.envelope(r);
      } else {
        const double r = max_distance_to_box(a.location, box, dim_);
        if (r <= idx.radius && (!t || r < *t)) ub += a.magnitude * kernel.envelope(r);
      }
      scale += std::abs(a.magnitude);
    });
    // Slack covers the differing summation order against value().
    ub += 1e-12 * scale;
    total += clamp_field(*idx.field, ub);
  }
  return total + 1e-12 * (1.0 + std::abs(total));
}

std::optional<double> FieldEvaluator::lipschitz_bound() const {
  double total = 0.0;
  for (const auto& idx : fields_) {
    if (idx.field->atoms.empty()) continue;
    const auto c = idx.field->kernel.holder_constant();
    if (!c) return std::nullopt;
    total += *c * idx.field->total_variation();
  }
  return total;
}

double FieldEvaluator::largest_contribution(const Vec& v, std::size_t index) const {
  const Indexed& idx = fields_.at(index);
  double best = 0.0;
  for_atoms_near(idx, Aabb{v, v}, [&](const Atom& a) {
    const double r = distance(v, a.location, dim_);
    if (r <= idx.radius) best = std::max(best, a.magnitude * idx.field->kernel.profile(r));
  });
  return best;
}

std::vector<double> evaluate_field(const FieldEvaluator& evaluator, std::span<const Vec> points) {
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(evaluator.value(p));
  return out;
}

std::vector<double> evaluate_field(const JumpField& field, std::span<const Vec> points,
                                   double prune_level) {
  return evaluate_field(FieldEvaluator({&field}, prune_level), points);
}

// ---------------------------------------------------------------------------
// Grids and suprema

namespace {

using Index = std::array<std::int64_t, kMaxDim>;

struct Lattice {
  int dim;
  double step;
  double radius;
  Index lo{0, 0, 0};
  Index hi{0, 0, 0};
};

template <class Target>
Lattice make_lattice(const Target& target, const GridSpec& spec) {
  if (!(spec.step > 0.0)) throw DomainError("grid step must be positive");
  if (!(spec.radius() >= 0.0)) throw DomainError("grid inclusion radius must be >= 0");
  Lattice lat{target.dim(), spec.step, spec.radius()};
  const Aabb b = target.bounds();
  for (int i = 0; i < lat.dim; ++i) {
    lat.lo[i] = static_cast<std::int64_t>(std::ceil((b.lo[i] - lat.radius) / spec.step));
    lat.hi[i] = static_cast<std::int64_t>(std::floor((b.hi[i] + lat.radius) / spec.step));
  }
  return lat;
}

Vec node_at(const Lattice& lat, const Index& idx) {
  Vec v{};
  for (int i = 0; i < lat.dim; ++i) v[i] = static_cast<double>(idx[i]) * lat.step;
  return v;
}

template <class Fn>
void for_nodes(const Lattice& lat, const Index& lo, const Index& hi, Fn&& fn) {
  Index idx = lo;
  for (idx[0] = lo[0]; idx[0] <= hi[0]; ++idx[0]) {
    for (idx[1] = lo[1]; idx[1] <= hi[1]; ++idx[1]) {
      for (idx[2] = lo[2]; idx[2] <= hi[2]; ++idx[2]) fn(idx);
    }
  }
  (void)lat;
}

struct Best {
  double value = -std::numeric_limits<double>::infinity();
  Index index{};
  Vec at{};
  bool found = false;

  void offer(double v, const Index& idx, const Vec& node) {
    if (!found || v > value || (v == value && idx < index)) {
      value = v;
      index = idx;
      at = node;
      found = true;
    }
  }
};

SupremumResult finish(const FieldEvaluator& evaluator, const GridSpec& spec, const Best& best,
                      std::size_t evaluated) {
  SupremumResult out;
  out.sup_estimate = best.found ? best.value : 0.0;
  out.argmax = best.at;
  out.nodes_evaluated = evaluated;
  out.evaluation_error = evaluator.error_bound();
  if (auto lip = evaluator.lipschitz_bound()) {
    const double half_diag = spec.step * std::sqrt(static_cast<double>(evaluator.dim())) / 2.0;
    out.upper_bound = out.sup_estimate + *lip * half_diag + out.evaluation_error;
  }
  return out;
}

std::vector<Vec> target_points(const PConvexSet& target) {
  std::vector<Vec> out;
  if (!target.all_degenerate()) return out;
  for (const auto& body : target.bodies()) out.push_back(std::get<PointBody>(body.shape()).at);
  return out;
}

std::vector<Vec> target_points(const ConvexBody& target) {
  if (!target.degenerate()) return {};
  return {std::get<PointBody>(target.shape()).at};
}

template <class Target>
std::optional<SupremumResult> point_supremum(const FieldEvaluator& evaluator,
                                             const Target& target) {
  const auto points = target_points(target);
  if (points.empty()) return std::nullopt;
  Best best;
  Index idx{};
  for (const auto& p : points) {
    best.offer(evaluator.value(p), idx, p);
    ++idx[0];
  }
  SupremumResult out;
  out.sup_estimate = best.value;
  out.argmax = best.at;
  out.nodes_evaluated = points.size();
  out.evaluation_error = evaluator.error_bound();
  out.upper_bound = best.value + out.evaluation_error;
  out.exact = true;
  return out;
}

template <class Target>
SupremumResult branch_and_bound(const FieldEvaluator& evaluator, const Target& target,
                                const GridSpec& spec);

}  // namespace

std::vector<Vec> grid_nodes(const PConvexSet& target, const GridSpec& spec) {
  std::vector<Vec> out;
  if (target.all_degenerate()) {
    for (const auto& body : target.bodies()) out.push_back(std::get<PointBody>(body.shape()).at);
    return out;
  }
  const Lattice lat = make_lattice(target, spec);
  for_nodes(lat, lat.lo, lat.hi, [&](const Index& idx) {
    const Vec v = node_at(lat, idx);
    if (target.distance(v) <= lat.radius) out.push_back(v);
  });
  return out;
}

SupremumResult grid_supremum_exhaustive(const FieldEvaluator& evaluator,
                                        const PConvexSet& target, const GridSpec& spec) {
  if (auto exact = point_supremum(evaluator, target)) return *exact;
  const Lattice lat = make_lattice(target, spec);
  Best best;
  std::size_t evaluated = 0;
  for_nodes(lat, lat.lo, lat.hi, [&](const Index& idx) {
    const Vec v = node_at(lat, idx);
    if (target.distance(v) > lat.radius) return;
    best.offer(evaluator.value(v), idx, v);
    ++evaluated;
  });
  return finish(evaluator, spec, best, evaluated);
}

SupremumResult grid_supremum(const FieldEvaluator& evaluator, const PConvexSet& target,
                             const GridSpec& spec) {
  return branch_and_bound(evaluator, target, spec);
}

SupremumResult grid_supremum(const FieldEvaluator& evaluator, const ConvexBody& target,
                             const GridSpec& spec) {
  return branch_and_bound(evaluator, target, spec);
}

namespace {

template <class Target>
SupremumResult branch_and_bound(const FieldEvaluator& evaluator, const Target& target,
                                const GridSpec& spec) {
  if (auto exact = point_supremum(evaluator, target)) return *exact;
  const Lattice lat = make_lattice(target, spec);
  const int d = lat.dim;

  struct Region {
    double ub;
    Index lo;
    Index hi;
    bool operator<(const Region& o) const { return ub < o.ub; }
  };
  auto region_box = [&](const Index& lo, const Index& hi) {
    return Aabb{node_at(lat, lo), node_at(lat, hi)};
  };
  auto node_count = [&](const Index& lo, const Index& hi) {
    std::int64_t n = 1;
    for (int i = 0; i < d; ++i) n *= hi[i] - lo[i] + 1;
    return n;
  };
  std::priority_queue<Region> queue;
  auto push = [&](const Index& lo, const Index& hi) {
    for (int i = 0; i < d; ++i) {
      if (hi[i] < lo[i]) return;
    }
    const Aabb box = region_box(lo, hi);
    if (target.distance_to(box) > lat.radius) return;
    queue.push({evaluator.upper_bound(box), lo, hi});
  };
  push(lat.lo, lat.hi);

  constexpr std::int64_t kLeafNodes = 64;
  Best best;
  std::size_t evaluated = 0;
  while (!queue.empty()) {
    const Region r = queue.top();
    queue.pop();
    if (best.found && r.ub < best.value) break;
    if (node_count(r.lo, r.hi) <= kLeafNodes) {
      for_nodes(lat, r.lo, r.hi, [&](const Index& idx) {
        const Vec v = node_at(lat, idx);
        if (target.distance(v) > lat.radius) return;
        best.offer(evaluator.value(v), idx, v);
        ++evaluated;
      });
      continue;
    }
    int axis = 0;
    for (int i = 1; i < d; ++i) {
      if (r.hi[i] - r.lo[i] > r.hi[axis] - r.lo[axis]) axis = i;
    }
    const std::int64_t mid = r.lo[axis] + (r.hi[axis] - r.lo[axis]) / 2;
    Index left_hi = r.hi;
    left_hi[axis] = mid;
    Index right_lo = r.lo;
    right_lo[axis] = mid + 1;
    push(r.lo, left_hi);
    push(right_lo, r.hi);
  }
  return finish(evaluator, spec, best, evaluated);
}

}  // namespace

void write_atoms_csv(std::ostream& out, const JumpField& field) {
  for (int i = 0; i < field.dim; ++i) out << 'u' << (i + 1) << ',';
  out << "magnitude\n";
  out.precision(17);
  for (const auto& a : field.atoms) {
    for (int i = 0; i < field.dim; ++i) out << a.location[i] << ',';
    out << a.magnitude << '\n';
  }
}

void write_field_csv(std::ostream& out, int dim, std::span<const Vec> points,
                     std::span<const double> values) {
  if (points.size() != values.size()) throw DomainError("points and values differ in length");
  for (int i = 0; i < dim; ++i) out << 'x' << (i + 1) << ',';
  out << "value\n";
  out.precision(17);
  for (std::size_t k = 0; k < points.size(); ++k) {
    for (int i = 0; i < dim; ++i) out << points[k][i] << ',';
    out << values[k] << '\n';
  }
}

}  // namespace levyext
