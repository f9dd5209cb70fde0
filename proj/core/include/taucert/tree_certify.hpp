#pragma once

#include "taucert/pin_wiggle.hpp"
#include "taucert/tree.hpp"

namespace taucert {

/// One peel step of the mechanism: the leaf whose boxes were consumed, the
/// neighbor that served as the pin, and the certified edge interval.
struct TreeEdgeRecord {
  std::size_t leaf = 0;            // 1-based vertex indices
  std::size_t neighbor = 0;
  std::size_t input_edge_index = 0;  // position in Tree::edges
  ClosedInterval interval;           // I_e
  Rational leaf_radius;              // box radius entering this step

  // exactly one is populated, depending on the per-edge engine
  std::optional<PinCertificate> pin;
  std::optional<DotPinCertificate> dot;
};

/// The tree-building mechanism's output: nested boxes around the skeleton and
/// one certified interval per edge whose product box lies inside the
/// (T, phi)-distance set of the stage product.
struct TreeCertificate {
  PhiSpec phi;
  std::string engine;  // "dist" | "dot" | "implicit" | "middle-thirds"
  Tree tree;
  Skeleton skeleton;
  std::string set1_desc;
  std::string set2_desc;
  unsigned depth = 0;
  std::string scope;

  std::vector<TreeEdgeRecord> steps;          // in peel order
  std::vector<ClosedInterval> edge_intervals;  // re-indexed to Tree::edges order
  std::vector<Rational> radii;                 // eps_1 >= eps_2 >= ..., k+1 entries
  Rational root_radius;

  /// Box of vertex v (1-based) at the stage when it was last alive: its peel
  /// step's entering radius for peeled leaves, the final radius for the root.
  Box2 vertex_box(std::size_t v) const;
};

/// Runs the mechanism: peel leaves, restrict to the shrinking boxes, certify
/// each edge with the pin-wiggle engine selected by phi (closed-form distance,
/// dot-product hulls, or the implicit route), and record the nested radii.
TreeCertificate certify_tree(const PhiSpec& phi, const Tree& tree, const Skeleton& skeleton,
                             const StageSet& k1, const StageSet& k2,
                             const SearchBudget& budget = {});

/// The middle-thirds theorem at desk scale: the wedge skeleton feeds the
/// middle-thirds pin engine on aligned sections of C_{1/3} at `depth`.
TreeCertificate certify_tree_middle_thirds(const Tree& tree, unsigned depth,
                                           const SearchBudget& budget = {});

/// Witness-consistency re-verification (the exact half of `verify`; coverage
/// is the oracle's half).  Errors with ErrorCode::verify_failed.
void reverify_tree_certificate(const TreeCertificate& cert);

}  // namespace taucert
