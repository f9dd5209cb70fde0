#include "taucert/tree.hpp"

#include <algorithm>
#include <sstream>

#include "taucert/errors.hpp"

namespace taucert {

Tree make_tree(std::size_t vertex_count,
               std::vector<std::pair<std::size_t, std::size_t>> edges) {
  if (vertex_count == 0) fail(ErrorCode::tree_invalid, "tree needs at least one vertex");
  if (edges.size() + 1 != vertex_count)
    fail(ErrorCode::tree_invalid, "a tree on n vertices has exactly n-1 edges");
  std::vector<std::vector<std::size_t>> adj(vertex_count + 1);
  for (auto& [a, b] : edges) {
    if (a < 1 || a > vertex_count || b < 1 || b > vertex_count || a == b)
      fail(ErrorCode::tree_invalid, "edge endpoints must be distinct vertices in 1..n");
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  // connectivity (acyclicity follows from the edge count)
  std::vector<bool> seen(vertex_count + 1, false);
  std::vector<std::size_t> stack{1};
  seen[1] = true;
  std::size_t visited = 1;
  while (!stack.empty()) {
    std::size_t v = stack.back();
    stack.pop_back();
    for (std::size_t w : adj[v]) {
      if (!seen[w]) {
        seen[w] = true;
        ++visited;
        stack.push_back(w);
      }
    }
  }
  if (visited != vertex_count)
    fail(ErrorCode::tree_invalid, "graph is disconnected (hence has a cycle elsewhere)");
  Tree t;
  t.vertex_count = vertex_count;
  t.edges = std::move(edges);
  return t;
}

Tree parse_tree(const std::string& text) {
  std::istringstream is(text);
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::size_t max_vertex = 0;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::size_t a = 0, b = 0;
    if (!(ls >> a >> b)) fail(ErrorCode::parse_error, "tree file: expected 'i j' on: " + line);
    edges.emplace_back(a, b);
    max_vertex = std::max({max_vertex, a, b});
  }
  if (edges.empty()) fail(ErrorCode::parse_error, "tree file: no edges");
  return make_tree(max_vertex, std::move(edges));
}

std::string render(const Tree& tree) {
  std::ostringstream os;
  for (const auto& [a, b] : tree.edges) os << a << " " << b << "\n";
  return os.str();
}

Tree chain(std::size_t k) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 1; i <= k; ++i) edges.emplace_back(i, i + 1);
  return make_tree(k + 1, std::move(edges));
}

Tree star(std::size_t k) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 2; i <= k + 1; ++i) edges.emplace_back(1, i);
  return make_tree(k + 1, std::move(edges));
}

std::vector<std::pair<std::size_t, std::size_t>> peel_order(const Tree& tree) {
  std::vector<std::vector<std::size_t>> adj(tree.vertex_count + 1);
  for (const auto& [a, b] : tree.edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<bool> removed(tree.vertex_count + 1, false);
  std::vector<std::size_t> degree(tree.vertex_count + 1, 0);
  for (std::size_t v = 1; v <= tree.vertex_count; ++v) degree[v] = adj[v].size();

  std::vector<std::pair<std::size_t, std::size_t>> order;
  for (std::size_t step = 0; step + 1 < tree.vertex_count; ++step) {
    // highest-indexed current leaf
    std::size_t leaf = 0;
    for (std::size_t v = tree.vertex_count; v >= 1; --v) {
      if (!removed[v] && degree[v] == 1) {
        leaf = v;
        break;
      }
    }
    if (leaf == 0) fail(ErrorCode::tree_invalid, "peel: no leaf found (cycle?)");
    std::size_t neighbor = 0;
    for (std::size_t w : adj[leaf]) {
      if (!removed[w]) {
        neighbor = w;
        break;
      }
    }
    removed[leaf] = true;
    --degree[neighbor];
    order.emplace_back(leaf, neighbor);
  }
  return order;
}

std::vector<RationalPoint> parse_skeleton_points(const std::string& text) {
  std::istringstream is(text);
  std::vector<RationalPoint> points;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string xs, ys;
    if (!(ls >> xs >> ys))
      fail(ErrorCode::parse_error, "skeleton file: expected 'p/q r/s' on: " + line);
    auto x = parse_rational(xs);
    auto y = parse_rational(ys);
    if (!x || !y) fail(ErrorCode::parse_error, "skeleton file: bad rational on: " + line);
    points.push_back({*x, *y});
  }
  if (points.empty()) fail(ErrorCode::parse_error, "skeleton file: no points");
  return points;
}

std::string render_points(const std::vector<RationalPoint>& points) {
  std::ostringstream os;
  for (const auto& p : points) os << to_string(p.x) << " " << to_string(p.y) << "\n";
  return os.str();
}

Skeleton validate_skeleton(const PhiSpec& phi, const Tree& tree,
                           const std::vector<RationalPoint>& points, const StageSet& k1,
                           const StageSet& k2) {
  if (points.size() != tree.vertex_count)
    fail(ErrorCode::skeleton_invalid, "skeleton size does not match the tree");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!k1.contains(points[i].x) || !k2.contains(points[i].y))
      fail(ErrorCode::skeleton_invalid,
           "skeleton point " + std::to_string(i + 1) + " is not in the stage product set");
    if (phi.kind == PhiSpec::Kind::dot && (points[i].x == 0 || points[i].y == 0))
      fail(ErrorCode::skeleton_invalid,
           "skeleton point " + std::to_string(i + 1) + " lies on an axis (dot phi)");
  }
  Rational min_sep;
  bool first = true;
  bool distance_family = phi.kind != PhiSpec::Kind::dot;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      if (points[i] == points[j])
        fail(ErrorCode::skeleton_invalid, "skeleton points " + std::to_string(i + 1) + " and " +
                                              std::to_string(j + 1) + " coincide");
      Rational sep;
      if (distance_family) {
        if (points[i].x == points[j].x || points[i].y == points[j].y)
          fail(ErrorCode::skeleton_invalid,
               "skeleton points " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                   " share a coordinate");
        // the tighter per-coordinate separation keeps pin boxes off window
        // coordinate lines
        sep = rat_min(rat_abs(points[i].x - points[j].x), rat_abs(points[i].y - points[j].y));
      } else {
        sep = chebyshev(points[i], points[j]);
      }
      if (first || sep < min_sep) min_sep = sep;
      first = false;
    }
  }
  if (!distance_family) {
    // keep the boxes clear of the axes
    for (const auto& p : points) {
      min_sep = rat_min(min_sep, rat_min(rat_abs(p.x), rat_abs(p.y)));
    }
  }
  Skeleton s;
  s.points = points;
  // one dyadic step below half the separation: closed boxes stay disjoint
  Rational half = min_sep / 2;
  Rational eps = dyadic_floor(half, 48);
  if (eps == half) eps -= pow2(-48);
  if (!(eps > 0)) fail(ErrorCode::skeleton_invalid, "skeleton separation too small");
  s.epsilon = eps;
  return s;
}

bool wedge_member(const RationalPoint& y, const RationalPoint& x) {
  Rational dx = y.x - x.x;
  Rational dy = y.y - x.y;
  return dy < dx && dx < 3 * dy;
}

std::vector<RationalPoint> middle_thirds_skeleton(std::size_t k) {
  if (k == 0) fail(ErrorCode::invalid_argument, "middle_thirds_skeleton needs k >= 1");
  std::vector<RationalPoint> points;
  points.push_back({Rational(0), Rational(0)});
  Rational scale(1);
  for (std::size_t i = 0; i < k; ++i) {
    RationalPoint prev = points.back();
    points.push_back({prev.x + scale * Rational(8, 9), prev.y + scale * Rational(6, 9)});
    scale /= 9;
  }
  return points;
}

}  // namespace taucert
