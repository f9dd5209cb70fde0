#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "taucert/phi.hpp"

namespace taucert {

/// A finite tree on vertices 1..k+1 (stored 0-based internally, 1-based in
/// I/O), given by its k edges.
struct Tree {
  std::size_t vertex_count = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // 1-based, unordered

  std::size_t edge_count() const { return edges.size(); }
};

/// Validates connectivity and acyclicity; errors with ErrorCode::tree_invalid.
Tree make_tree(std::size_t vertex_count,
               std::vector<std::pair<std::size_t, std::size_t>> edges);

/// Edge-list text format: one `i j` pair per line, 1-based.
Tree parse_tree(const std::string& text);
std::string render(const Tree& tree);

/// The k-chain 1-2-...-k+1.
Tree chain(std::size_t k);
/// Star with center 1 and k leaves.
Tree star(std::size_t k);

/// Leaf-peeling order: (leaf, neighbor) pairs, removing the highest-indexed
/// leaf first, down to a single vertex.
std::vector<std::pair<std::size_t, std::size_t>> peel_order(const Tree& tree);

/// The nondegenerate point tuple seeding the tree mechanism, with the common
/// starting box radius.
struct Skeleton {
  std::vector<RationalPoint> points;  // x^1 .. x^{k+1}
  Rational epsilon;                   // starting box radius
};

/// Skeleton file format: one `p/q r/s` point per line.
std::vector<RationalPoint> parse_skeleton_points(const std::string& text);
std::string render_points(const std::vector<RationalPoint>& points);

/// Validates the phi-specific nondegeneracy conditions and computes epsilon
/// (one dyadic step below half the minimal pairwise Chebyshev separation, so
/// the closed boxes are strictly disjoint; for the distance family the
/// per-coordinate separations are enforced as well, which keeps every pin
/// off every window's coordinate lines).
Skeleton validate_skeleton(const PhiSpec& phi, const Tree& tree,
                           const std::vector<RationalPoint>& points, const StageSet& k1,
                           const StageSet& k2);

/// Exact wedge membership test: y inside W_x = { (y2-x2) < (y1-x1) < 3(y2-x2) }.
bool wedge_member(const RationalPoint& y, const RationalPoint& x);

/// The middle-thirds wedge skeleton: x^1 = (0,0) and
/// x^{i+1} = x^i + 9^{1-i} (8/9, 6/9); k+1 points for a tree with k edges.
std::vector<RationalPoint> middle_thirds_skeleton(std::size_t k);

}  // namespace taucert
