#include "taucert/tree_certify.hpp"

#include <algorithm>

#include "taucert/errors.hpp"
#include "taucert/set_spec.hpp"

namespace taucert {

namespace {

enum class EdgeEngine { closed_distance, implicit_phi, dot_product, wedge_thirds };

EdgeEngine engine_for(const PhiSpec& phi) {
  if (phi.implicit) return EdgeEngine::implicit_phi;
  switch (phi.kind) {
    case PhiSpec::Kind::euclidean: return EdgeEngine::closed_distance;
    case PhiSpec::Kind::dot: return EdgeEngine::dot_product;
    case PhiSpec::Kind::pnorm: return EdgeEngine::implicit_phi;
  }
  return EdgeEngine::implicit_phi;
}

const char* engine_tag(EdgeEngine e) {
  switch (e) {
    case EdgeEngine::closed_distance: return "dist";
    case EdgeEngine::implicit_phi: return "implicit";
    case EdgeEngine::dot_product: return "dot";
    case EdgeEngine::wedge_thirds: return "middle-thirds";
  }
  return "?";
}

StageSet restrict_with_descriptor(const StageSet& base, const ClosedInterval& window) {
  SetSpec sec;
  sec.kind = SetSpec::Kind::section;
  sec.base = std::make_shared<SetSpec>(parse_set_spec(descriptor_or_explicit(base)));
  sec.window = window;
  StageSet out = restrict(base, window);
  out.set_descriptor(render(sec));
  return out;
}

std::size_t input_edge_index(const Tree& tree, std::size_t a, std::size_t b) {
  for (std::size_t i = 0; i < tree.edges.size(); ++i) {
    const auto& e = tree.edges[i];
    if ((e.first == a && e.second == b) || (e.first == b && e.second == a)) return i;
  }
  fail(ErrorCode::tree_invalid, "peel edge not found in the tree");
}

// Exact distance from a point to a closed interval.
Rational interval_distance(const Rational& v, const ClosedInterval& iv) {
  if (v < iv.lo) return iv.lo - v;
  if (v > iv.hi) return v - iv.hi;
  return 0;
}

// The dot-product edge: aligned blocks around the leaf keep the restricted
// thickness equal to the construction's, and both the blocks and the pin box
// shrink until the skeleton value lands within stage resolution of the
// window's closure.
TreeEdgeRecord dot_tree_edge(const PhiSpec& phi, const StageSet& k1, const StageSet& k2,
                             const RationalPoint& x_leaf, const RationalPoint& x_pin,
                             const Rational& eps_cur, const SearchBudget& budget) {
  auto fam1 = base_middle_family(parse_set_spec(descriptor_or_explicit(k1)));
  auto fam2 = base_middle_family(parse_set_spec(descriptor_or_explicit(k2)));

  auto block = [&](const std::optional<MiddleFamily>& fam, const StageSet& k,
                   const Rational& coord, const Rational& width) -> ClosedInterval {
    if (fam) {
      if (auto b = aligned_block_containing(*fam, coord, width)) return *b;
    }
    ClosedInterval box{coord - width, coord + width};
    return *intersect(box, k.hull());
  };

  Rational width1 = eps_cur, width2 = eps_cur;
  Rational delta =
      dyadic_floor(rat_min(eps_cur, rat_min(rat_abs(x_pin.x), rat_abs(x_pin.y)) / 4), 48);
  Rational phi_skel = x_pin.x * x_leaf.x + x_pin.y * x_leaf.y;

  for (unsigned round = 0; round <= budget.halvings; ++round) {
    ClosedInterval b1 = block(fam1, k1, x_leaf.x, width1);
    ClosedInterval b2 = block(fam2, k2, x_leaf.y, width2);
    StageSet k1w = restrict_with_descriptor(k1, b1);
    StageSet k2w = restrict_with_descriptor(k2, b2);
    bool window_ok = false;
    DotPinCertificate cert;
    try {
      cert = dot_pin_window(k1w, k2w, x_pin, delta);
      window_ok = true;
    } catch (const Error& e) {
      if (e.code() == ErrorCode::thickness_product) throw;  // genuine failure
    }
    if (window_ok) {
      // closure: the skeleton's dot value must sit within stage resolution
      Rational maxw = rat_max(k1w.max_interval_width(), k2w.max_interval_width());
      Box2 window_box{b1, b2};
      Rational lip = lipschitz_upper(phi, cert.pin_box(), window_box, budget.prec.bits);
      Rational resolution = maxw * lip;
      Rational d = interval_distance(phi_skel, cert.t_window);
      if (resolution > 0 && d <= resolution) {
        TreeEdgeRecord rec;
        rec.interval = cert.t_window;
        rec.dot = std::move(cert);
        return rec;
      }
    }
    // the pin box must shrink faster than the blocks, or the corner window
    // collapses; two delta-halvings per block descent keeps delta/width -> 0
    delta /= 2;
    if (round % 3 == 2) {
      width1 = fam1 ? Rational(width1 * (1 - fam1->ratio) / 2) : Rational(width1 / 2);
      width2 = fam2 ? Rational(width2 * (1 - fam2->ratio) / 2) : Rational(width2 / 2);
    }
  }
  fail(ErrorCode::budget_exhausted, "dot tree edge: closure not reached within budget");
}

}  // namespace

Box2 TreeCertificate::vertex_box(std::size_t v) const {
  Rational r = root_radius;
  for (const auto& step : steps) {
    if (step.leaf == v) {
      r = step.leaf_radius;
      break;
    }
  }
  const RationalPoint& p = skeleton.points[v - 1];
  return {{p.x - r, p.x + r}, {p.y - r, p.y + r}};
}

namespace {

TreeCertificate run_mechanism(const PhiSpec& phi, EdgeEngine engine, const Tree& tree,
                              const Skeleton& skeleton, const StageSet& k1, const StageSet& k2,
                              const SearchBudget& budget) {
  TreeCertificate cert;
  cert.phi = phi;
  cert.engine = engine_tag(engine);
  cert.tree = tree;
  cert.skeleton = skeleton;
  cert.set1_desc = descriptor_or_explicit(k1);
  cert.set2_desc = descriptor_or_explicit(k2);
  cert.depth = std::max(native_depth(parse_set_spec(cert.set1_desc)),
                        native_depth(parse_set_spec(cert.set2_desc)));

  auto fam1 = base_middle_family(parse_set_spec(cert.set1_desc));
  auto fam2 = base_middle_family(parse_set_spec(cert.set2_desc));

  Rational eps = skeleton.epsilon;
  cert.radii.push_back(eps);
  bool all_limit = true;

  for (const auto& [leaf, neighbor] : peel_order(tree)) {
    const RationalPoint& x_leaf = skeleton.points[leaf - 1];
    const RationalPoint& x_pin = skeleton.points[neighbor - 1];

    TreeEdgeRecord rec;
    Rational eps_next;
    if (engine == EdgeEngine::dot_product) {
      rec = dot_tree_edge(phi, k1, k2, x_leaf, x_pin, eps, budget);
      eps_next = rat_min(eps, rec.dot->delta);
      all_limit = all_limit && rec.dot->scope == "limit";
    } else if (engine == EdgeEngine::wedge_thirds) {
      // aligned sections anchored at the leaf, shrunk until the whole section
      // box sits inside the wedge of every pin in reach
      if (!fam1 || !fam2)
        fail(ErrorCode::invalid_argument, "wedge engine needs middle-thirds sets");
      Rational w1 = eps, w2 = eps;
      std::optional<PinCertificate> pc;
      for (unsigned round = 0; round <= budget.halvings; ++round) {
        auto b1 = aligned_block_at(*fam1, x_leaf.x, w1);
        auto b2 = aligned_block_at(*fam2, x_leaf.y, w2);
        if (!b1 || !b2)
          fail(ErrorCode::skeleton_invalid,
               "wedge engine: leaf coordinates are not construction left endpoints");
        bool wedge_ok = true;
        for (const Rational& cx : {b1->lo, b1->hi})
          for (const Rational& cy : {b2->lo, b2->hi})
            wedge_ok = wedge_ok && wedge_member({cx, cy}, x_pin);
        if (wedge_ok) {
          StageSet k1w = restrict_with_descriptor(k1, *b1);
          StageSet k2w = restrict_with_descriptor(k2, *b2);
          pc = middle_thirds_pin_window(k1w, k2w, x_pin, budget);
          break;
        }
        w1 = b1->width() / 3;
        w2 = b2->width() / 3;
        if (w1 == 0 || w2 == 0) break;
      }
      if (!pc)
        fail(ErrorCode::budget_exhausted, "wedge engine: no section inside the wedge");
      rec.pin = std::move(*pc);
      rec.interval = rec.pin->t_window;
      eps_next = rat_min(eps, rec.pin->pin_radius);
      all_limit = all_limit && rec.pin->scope == "limit";
    } else {
      ClosedInterval box1{x_leaf.x - eps, x_leaf.x + eps};
      ClosedInterval box2{x_leaf.y - eps, x_leaf.y + eps};
      StageSet k1w = restrict_with_descriptor(k1, box1);
      StageSet k2w = restrict_with_descriptor(k2, box2);
      PinCertificate pc =
          engine == EdgeEngine::closed_distance
              ? distance_pin_window(k1w, k2w, x_pin, budget, x_leaf)
              : phi_pin_window(phi, k1w, k2w, x_pin, budget, x_leaf);
      rec.pin = std::move(pc);
      rec.interval = rec.pin->t_window;
      eps_next = rat_min(eps, rec.pin->pin_radius);
      all_limit = all_limit && rec.pin->scope == "limit";
    }

    rec.leaf = leaf;
    rec.neighbor = neighbor;
    rec.input_edge_index = input_edge_index(tree, leaf, neighbor);
    rec.leaf_radius = eps;
    if (rec.interval.lo >= rec.interval.hi)
      fail(ErrorCode::budget_exhausted, "tree edge produced an empty interval");
    cert.steps.push_back(std::move(rec));
    eps = eps_next;
    cert.radii.push_back(eps);
  }

  cert.root_radius = eps;
  cert.edge_intervals.resize(tree.edge_count());
  for (const auto& step : cert.steps) cert.edge_intervals[step.input_edge_index] = step.interval;
  cert.scope = all_limit ? "limit" : "stage";
  return cert;
}

}  // namespace

TreeCertificate certify_tree(const PhiSpec& phi, const Tree& tree, const Skeleton& skeleton,
                             const StageSet& k1, const StageSet& k2,
                             const SearchBudget& budget) {
  return run_mechanism(phi, engine_for(phi), tree, skeleton, k1, k2, budget);
}

TreeCertificate certify_tree_middle_thirds(const Tree& tree, unsigned depth,
                                           const SearchBudget& budget) {
  StageSet k = build(parse_set_spec("middle:1/3@[0,1]#" + std::to_string(depth)));
  std::size_t kk = tree.edge_count();
  std::vector<RationalPoint> chain_points = middle_thirds_skeleton(kk);

  // Assign skeleton points along a BFS order from the root (vertex 1, the
  // survivor of the peel): every peel pin then sits wedge-below its leaf.
  std::vector<std::vector<std::size_t>> adj(tree.vertex_count + 1);
  for (const auto& [a, b] : tree.edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<RationalPoint> points(tree.vertex_count);
  std::vector<bool> seen(tree.vertex_count + 1, false);
  std::vector<std::size_t> queue{1};
  seen[1] = true;
  std::size_t next_point = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    std::size_t v = queue[head];
    points[v - 1] = chain_points[next_point++];
    for (std::size_t w : adj[v]) {
      if (!seen[w]) {
        seen[w] = true;
        queue.push_back(w);
      }
    }
  }

  Skeleton skeleton = validate_skeleton(PhiSpec::dist(), tree, points, k, k);
  TreeCertificate cert =
      run_mechanism(PhiSpec::dist(), EdgeEngine::wedge_thirds, tree, skeleton, k, k, budget);
  return cert;
}

void reverify_tree_certificate(const TreeCertificate& cert) {
  auto expect = [](bool ok, const std::string& what) {
    if (!ok) fail(ErrorCode::verify_failed, "tree certificate re-verification failed: " + what);
  };

  Tree tree = make_tree(cert.tree.vertex_count, cert.tree.edges);
  StageSet k1 = build(parse_set_spec(cert.set1_desc));
  StageSet k2 = build(parse_set_spec(cert.set2_desc));
  Skeleton fresh = validate_skeleton(cert.phi, tree, cert.skeleton.points, k1, k2);
  expect(fresh.epsilon == cert.skeleton.epsilon, "skeleton epsilon mismatch");

  auto order = peel_order(tree);
  expect(order.size() == cert.steps.size(), "peel length mismatch");
  expect(cert.radii.size() == cert.steps.size() + 1, "radii trace length");
  expect(cert.radii.front() == cert.skeleton.epsilon, "starting radius");
  expect(cert.root_radius == cert.radii.back(), "root radius");

  // pairwise disjoint starting boxes (exact)
  for (std::size_t i = 0; i < cert.skeleton.points.size(); ++i) {
    for (std::size_t j = i + 1; j < cert.skeleton.points.size(); ++j) {
      expect(chebyshev(cert.skeleton.points[i], cert.skeleton.points[j]) >
                 2 * cert.skeleton.epsilon,
             "starting boxes are not disjoint");
    }
  }

  Rational eps = cert.skeleton.epsilon;
  for (std::size_t s = 0; s < cert.steps.size(); ++s) {
    const TreeEdgeRecord& step = cert.steps[s];
    expect(step.leaf == order[s].first && step.neighbor == order[s].second,
           "peel order mismatch at step " + std::to_string(s));
    expect(step.leaf_radius == eps, "leaf radius mismatch");
    expect(cert.radii[s] == eps, "radii trace mismatch");
    const RationalPoint& x_leaf = cert.skeleton.points[step.leaf - 1];
    const RationalPoint& x_pin = cert.skeleton.points[step.neighbor - 1];

    Rational eps_next;
    if (step.dot) {
      reverify_dot_certificate(*step.dot);
      expect(step.dot->pin == x_pin, "dot pin mismatch");
      expect(step.interval == step.dot->t_window, "edge interval mismatch");
      // windows stay inside the leaf box
      StageSet w1 = build(parse_set_spec(step.dot->set1_desc));
      StageSet w2 = build(parse_set_spec(step.dot->set2_desc));
      expect(w1.hull().lo >= x_leaf.x - eps && w1.hull().hi <= x_leaf.x + eps,
             "dot window 1 leaves the leaf box");
      expect(w2.hull().lo >= x_leaf.y - eps && w2.hull().hi <= x_leaf.y + eps,
             "dot window 2 leaves the leaf box");
      eps_next = rat_min(eps, step.dot->delta);
    } else {
      expect(step.pin.has_value(), "step carries no certificate");
      reverify_pin_certificate(*step.pin);
      expect(step.pin->pin == x_pin, "pin mismatch");
      expect(step.interval == step.pin->t_window, "edge interval mismatch");
      ClosedInterval win1 = step.pin->window1();
      ClosedInterval win2 = step.pin->window2();
      expect(win1.lo >= x_leaf.x - eps && win1.hi <= x_leaf.x + eps,
             "window 1 leaves the leaf box");
      expect(win2.lo >= x_leaf.y - eps && win2.hi <= x_leaf.y + eps,
             "window 2 leaves the leaf box");
      if (step.pin->wedge) {
        expect(wedge_member(x_leaf, x_pin), "peel pair violates wedge membership");
      }
      eps_next = rat_min(eps, step.pin->pin_radius);
    }
    expect(input_edge_index(tree, step.leaf, step.neighbor) == step.input_edge_index,
           "edge re-index mismatch");
    expect(cert.edge_intervals[step.input_edge_index] == step.interval,
           "edge interval table mismatch");
    expect(eps_next <= eps, "radii must be non-increasing");
    eps = eps_next;
  }
  expect(cert.root_radius == eps, "final radius mismatch");
}

}  // namespace taucert
