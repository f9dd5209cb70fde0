#include "taucert/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "taucert/errors.hpp"
#include "taucert/set_spec.hpp"

namespace taucert {

std::vector<Rational> representatives(const StageSet& set, PointMode mode) {
  std::vector<Rational> out;
  out.reserve(set.size());
  for (const auto& iv : set.intervals())
    out.push_back(mode == PointMode::endpoints ? iv.lo : iv.mid());
  return out;
}

std::vector<RationalPoint> enumerate_points(const StageSet& k1, const StageSet& k2,
                                            PointMode mode) {
  if (k1.size() * k2.size() > kEnumerationCap)
    fail(ErrorCode::cap_exceeded,
         "enumerate_points: product enumeration exceeds the 2^26 pair cap");
  auto r1 = representatives(k1, mode);
  auto r2 = representatives(k2, mode);
  std::vector<RationalPoint> out;
  out.reserve(r1.size() * r2.size());
  for (const auto& x : r1)
    for (const auto& y : r2) out.push_back({x, y});
  return out;
}

std::optional<ClosedInterval> brute_force_intersection(const StageSet& a, const StageSet& b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (auto overlap = intersect(a.intervals()[i], b.intervals()[j])) return overlap;
    if (a.intervals()[i].hi < b.intervals()[j].hi) {
      ++i;
    } else {
      ++j;
    }
  }
  return std::nullopt;
}

namespace {

struct PinLattice {
  std::vector<double> xs;
  std::vector<double> ys;
  std::size_t count() const { return xs.size() * ys.size(); }
};

PinLattice pin_lattice(const Box2& box, std::size_t requested) {
  std::size_t axis = 1;
  while (axis * axis < requested) ++axis;
  auto axis_points = [&](const ClosedInterval& iv) {
    std::vector<double> pts;
    if (axis == 1 || iv.width() == 0) {
      pts.push_back(to_double(iv.mid()));
      return pts;
    }
    for (std::size_t i = 0; i < axis; ++i) {
      Rational v = iv.lo + iv.width() * Rational(i, axis - 1);
      pts.push_back(to_double(v));
    }
    return pts;
  };
  return {axis_points(box.x), axis_points(box.y)};
}

std::vector<double> target_grid(const ClosedInterval& t, std::size_t count) {
  std::vector<double> out;
  if (count <= 1 || t.width() == 0) {
    out.push_back(to_double(t.mid()));
    return out;
  }
  for (std::size_t j = 0; j < count; ++j)
    out.push_back(to_double(Rational(t.lo + t.width() * Rational(j, count - 1))));
  return out;
}

std::vector<double> to_doubles(const std::vector<Rational>& v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& q : v) out.push_back(to_double(q));
  return out;
}

// Exact stage resolution: max interval width times the certified Lipschitz
// bound of phi over pin-box x window-box.
Rational stage_resolution(const PhiSpec& phi, const Box2& pin_box, const StageSet& w1,
                          const StageSet& w2, unsigned bits) {
  Rational maxw = rat_max(w1.max_interval_width(), w2.max_interval_width());
  Box2 window_box{w1.hull(), w2.hull()};
  Rational lip = lipschitz_upper(phi, pin_box, window_box, bits);
  return maxw * lip;
}

struct CoverageAccumulator {
  CoverageReport report;
  const std::function<void(double, double, double, double, bool)>* row_sink = nullptr;

  void observe(double residual, double px, double py, double t, double resolution) {
    bool ok = residual <= resolution;
    if (ok) {
      ++report.hits;
    } else {
      ++report.misses;
    }
    if (row_sink && *row_sink) (*row_sink)(px, py, t, residual, ok);
    if (residual > report.worst_residual) {
      report.worst_residual = residual;
      report.worst_pin_x = px;
      report.worst_pin_y = py;
      report.worst_t = t;
    }
  }
};

// Per pin: nearest phi-value search via one sort plus binary searches.
void cover_targets(const PhiSpec& phi, double px, double py, const std::vector<double>& y1,
                   const std::vector<double>& y2, const std::vector<double>& targets,
                   double resolution, CoverageAccumulator& acc) {
  std::vector<double> values;
  values.reserve(y1.size() * y2.size());
  for (double a : y1)
    for (double b : y2) values.push_back(phi_value_double(phi, px, py, a, b));
  std::sort(values.begin(), values.end());
  for (double t : targets) {
    auto it = std::lower_bound(values.begin(), values.end(), t);
    double best = std::numeric_limits<double>::infinity();
    if (it != values.end()) best = std::min(best, std::abs(*it - t));
    if (it != values.begin()) best = std::min(best, std::abs(*(it - 1) - t));
    acc.observe(best, px, py, t, resolution);
  }
}

unsigned resolve_depth(unsigned cert_depth, const CoverageParams& params) {
  unsigned depth = params.depth.value_or(cert_depth);
  if (depth < cert_depth)
    fail(ErrorCode::depth_refusal,
         "verification depth " + std::to_string(depth) + " is below the certificate's depth " +
             std::to_string(cert_depth));
  return depth;
}

}  // namespace

CoverageReport check_pin_certificate(const PinCertificate& cert, const CoverageParams& params) {
  unsigned depth = resolve_depth(cert.depth, params);
  unsigned bits = default_precision().bits;
  StageSet k1 = build_at_depth(parse_set_spec(cert.set1_desc), depth);
  StageSet k2 = build_at_depth(parse_set_spec(cert.set2_desc), depth);
  StageSet w1 = restrict(k1, cert.window1());
  StageSet w2 = restrict(k2, cert.window2());
  if (w1.size() * w2.size() > kEnumerationCap)
    fail(ErrorCode::cap_exceeded, "check_pin_certificate: window enumeration above the cap");

  CoverageAccumulator acc;
  acc.row_sink = &params.row_sink;
  acc.report.certificate = cert.engine + " pin certificate on " + cert.set1_desc;
  acc.report.depth = depth;
  acc.report.resolution = stage_resolution(cert.phi, cert.pin_box(), w1, w2, bits);
  double resolution = to_double(acc.report.resolution);

  PinLattice pins = pin_lattice(cert.pin_box(), params.pin_count);
  std::vector<double> targets = target_grid(cert.t_window, params.t_count);
  acc.report.pin_grid = pins.count();
  acc.report.t_grid = targets.size();

  auto y1 = to_doubles(representatives(w1, params.mode));
  auto y2 = to_doubles(representatives(w2, params.mode));
  for (double px : pins.xs)
    for (double py : pins.ys)
      cover_targets(cert.phi, px, py, y1, y2, targets, resolution, acc);
  return acc.report;
}

CoverageReport check_pin_certificate(const DotPinCertificate& cert,
                                     const CoverageParams& params) {
  unsigned depth = resolve_depth(cert.depth, params);
  unsigned bits = default_precision().bits;
  StageSet w1 = build_at_depth(parse_set_spec(cert.set1_desc), depth);
  StageSet w2 = build_at_depth(parse_set_spec(cert.set2_desc), depth);
  if (w1.size() * w2.size() > kEnumerationCap)
    fail(ErrorCode::cap_exceeded, "check_pin_certificate: enumeration above the cap");

  CoverageAccumulator acc;
  acc.row_sink = &params.row_sink;
  acc.report.certificate = "dot pin certificate on " + cert.set1_desc;
  acc.report.depth = depth;
  acc.report.resolution =
      stage_resolution(PhiSpec::dot(), cert.pin_box(), w1, w2, bits);
  double resolution = to_double(acc.report.resolution);

  PinLattice pins = pin_lattice(cert.pin_box(), params.pin_count);
  std::vector<double> targets = target_grid(cert.t_window, params.t_count);
  acc.report.pin_grid = pins.count();
  acc.report.t_grid = targets.size();

  auto y1 = to_doubles(representatives(w1, params.mode));
  auto y2 = to_doubles(representatives(w2, params.mode));
  for (double px : pins.xs)
    for (double py : pins.ys)
      cover_targets(PhiSpec::dot(), px, py, y1, y2, targets, resolution, acc);
  return acc.report;
}

CoverageReport check_tree_certificate(const TreeCertificate& cert,
                                      const CoverageParams& params) {
  unsigned depth = resolve_depth(cert.depth, params);
  unsigned bits = default_precision().bits;
  StageSet k1 = build_at_depth(parse_set_spec(cert.set1_desc), depth);
  StageSet k2 = build_at_depth(parse_set_spec(cert.set2_desc), depth);

  CoverageAccumulator acc;
  acc.row_sink = &params.row_sink;
  acc.report.certificate = cert.engine + " tree certificate, " +
                           std::to_string(cert.tree.edge_count()) + " edges";
  acc.report.depth = depth;

  std::size_t k = cert.tree.edge_count();
  // per-edge grid: roughly 4096 tuples total, at least 3 per edge
  std::size_t per_edge = std::max<std::size_t>(
      3, static_cast<std::size_t>(std::floor(std::pow(
             static_cast<double>(std::min<std::size_t>(params.t_count * params.t_count, 4096)),
             1.0 / static_cast<double>(k)))));
  per_edge = std::min(per_edge, params.t_count);

  // per-step window representatives and resolutions
  struct StepData {
    std::vector<double> y1, y2;
    std::vector<Rational> y1r, y2r;
    double resolution;
    Rational resolution_exact;
    std::vector<double> targets;
  };
  std::vector<StepData> steps(cert.steps.size());
  Rational coarsest = 0;
  for (std::size_t s = 0; s < cert.steps.size(); ++s) {
    const TreeEdgeRecord& step = cert.steps[s];
    StageSet w1 = step.pin ? restrict(build_at_depth(parse_set_spec(step.pin->set1_desc), depth),
                                      step.pin->window1())
                           : build_at_depth(parse_set_spec(step.dot->set1_desc), depth);
    StageSet w2 = step.pin ? restrict(build_at_depth(parse_set_spec(step.pin->set2_desc), depth),
                                      step.pin->window2())
                           : build_at_depth(parse_set_spec(step.dot->set2_desc), depth);
    Box2 pin_box = step.pin ? step.pin->pin_box() : step.dot->pin_box();
    steps[s].resolution_exact = stage_resolution(cert.phi, pin_box, w1, w2, bits);
    steps[s].resolution = to_double(steps[s].resolution_exact);
    coarsest = rat_max(coarsest, steps[s].resolution_exact);
    steps[s].y1r = representatives(w1, params.mode);
    steps[s].y2r = representatives(w2, params.mode);
    steps[s].y1 = to_doubles(steps[s].y1r);
    steps[s].y2 = to_doubles(steps[s].y2r);
    steps[s].targets = target_grid(step.interval, per_edge);

    // closure: Phi(skeleton) componentwise within stage resolution of I_e
    const RationalPoint& a = cert.skeleton.points[step.neighbor - 1];
    const RationalPoint& b = cert.skeleton.points[step.leaf - 1];
    double phi_skel = phi_value_double(cert.phi, to_double(a.x), to_double(a.y),
                                       to_double(b.x), to_double(b.y));
    double lo = to_double(step.interval.lo), hi = to_double(step.interval.hi);
    double d = phi_skel < lo ? lo - phi_skel : (phi_skel > hi ? phi_skel - hi : 0.0);
    acc.report.worst_closure = std::max(acc.report.worst_closure, d);
    if (d > steps[s].resolution) acc.report.closure_pass = false;
  }
  acc.report.resolution = coarsest;
  acc.report.t_grid = per_edge;
  acc.report.pin_grid = 1;

  // root representative: the stage point nearest the root skeleton point
  std::size_t root = cert.steps.empty() ? 1 : cert.steps.back().neighbor;
  const RationalPoint& root_skel = cert.skeleton.points[root - 1];
  Box2 root_box = cert.vertex_box(root);
  StageSet r1 = restrict(k1, root_box.x);
  StageSet r2 = restrict(k2, root_box.y);
  auto nearest = [](const std::vector<Rational>& reps, const Rational& target) {
    Rational best = reps.front();
    for (const auto& r : reps)
      if (rat_abs(r - target) < rat_abs(best - target)) best = r;
    return best;
  };
  RationalPoint root_point{nearest(representatives(r1, params.mode), root_skel.x),
                           nearest(representatives(r2, params.mode), root_skel.y)};

  // odometer over the per-edge target grids; chain backward through the peel
  std::vector<std::size_t> idx(k, 0);
  std::vector<std::pair<double, double>> assignment(cert.tree.vertex_count + 1);
  bool done = false;
  while (!done) {
    assignment[root] = {to_double(root_point.x), to_double(root_point.y)};
    bool tuple_ok = true;
    for (std::size_t s = cert.steps.size(); s-- > 0;) {
      const TreeEdgeRecord& step = cert.steps[s];
      const StepData& data = steps[s];
      double t = data.targets[idx[s] % data.targets.size()];
      auto [px, py] = assignment[step.neighbor];
      double best = std::numeric_limits<double>::infinity();
      std::pair<double, double> best_y{0, 0};
      for (double a : data.y1) {
        for (double b : data.y2) {
          double r = std::abs(phi_value_double(cert.phi, px, py, a, b) - t);
          if (r < best) {
            best = r;
            best_y = {a, b};
          }
        }
      }
      assignment[step.leaf] = best_y;
      if (best > data.resolution) tuple_ok = false;
      if (best > acc.report.worst_residual) {
        acc.report.worst_residual = best;
        acc.report.worst_pin_x = px;
        acc.report.worst_pin_y = py;
        acc.report.worst_t = t;
      }
    }
    if (tuple_ok) {
      ++acc.report.hits;
    } else {
      ++acc.report.misses;
    }
    if (params.row_sink) {
      auto [rx, ry] = assignment[root];
      params.row_sink(rx, ry, idx.empty() ? 0.0 : steps[0].targets[idx[0]],
                      acc.report.worst_residual, tuple_ok);
    }
    // advance the odometer
    done = true;
    for (std::size_t s = 0; s < k; ++s) {
      if (++idx[s] < steps[s].targets.size()) {
        done = false;
        break;
      }
      idx[s] = 0;
    }
  }
  return acc.report;
}

}  // namespace taucert
