#pragma once

#include <functional>

#include "taucert/tree_certify.hpp"

namespace taucert {

enum class PointMode { endpoints, midpoints };

/// Deterministic per-axis representative points (left endpoints or
/// midpoints), one per stage interval.
std::vector<Rational> representatives(const StageSet& set, PointMode mode);

/// Materialized product stream, row-major over (K1, K2) representatives.
/// Refuses enumerations beyond the pair cap.
std::vector<RationalPoint> enumerate_points(const StageSet& k1, const StageSet& k2,
                                            PointMode mode);

inline constexpr std::size_t kEnumerationCap = std::size_t(1) << 26;

/// Sweeps both sorted interval lists; the first overlapping closed pair, if
/// any.  The ground-truth oracle for gap_lemma_intersect.
std::optional<ClosedInterval> brute_force_intersection(const StageSet& a, const StageSet& b);

struct CoverageParams {
  std::size_t pin_count = 128;  // pins laid out as a ceil(sqrt(n))^2 lattice
  std::size_t t_count = 128;    // targets per edge interval
  std::optional<unsigned> depth;  // rebuild depth; must be >= the certificate's
  PointMode mode = PointMode::midpoints;

  /// Per-cell sink (pin_x, pin_y, target, residual, ok), for CSV dumps.
  std::function<void(double, double, double, double, bool)> row_sink;
};

struct CoverageReport {
  std::string certificate;  // short label of what was checked
  unsigned depth = 0;
  std::size_t pin_grid = 0;  // actual pins used
  std::size_t t_grid = 0;    // targets (per edge, for trees)
  Rational resolution;       // exact stage resolution of the coarsest edge
  std::size_t hits = 0;
  std::size_t misses = 0;
  double worst_residual = 0.0;
  double worst_pin_x = 0.0, worst_pin_y = 0.0, worst_t = 0.0;
  bool closure_pass = true;   // Phi(skeleton) near the box closure (trees)
  double worst_closure = 0.0;

  bool pass() const { return misses == 0 && closure_pass; }
};

/// Coverage of a pin certificate: every (pin, target) in S x T must be
/// realized by a stage point of the restricted windows to within the stage
/// resolution (max interval width times the certified Lipschitz bound).
CoverageReport check_pin_certificate(const PinCertificate& cert,
                                     const CoverageParams& params = {});
CoverageReport check_pin_certificate(const DotPinCertificate& cert,
                                     const CoverageParams& params = {});

/// Coverage of a tree certificate: for a lattice of edge-length vectors in
/// I_1 x ... x I_k, a point tuple is chained backward through the peel order,
/// each vertex drawn from its recorded box.
CoverageReport check_tree_certificate(const TreeCertificate& cert,
                                      const CoverageParams& params = {});

}  // namespace taucert
