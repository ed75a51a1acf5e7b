#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "chaoslab/errors.hpp"

namespace chaoslab {

/// Open rectangular region of R^d given by its corner coordinates.
struct Box {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;
};

/// Lattice approximation of an open box: the grid points of (delta Z)^d
/// strictly inside the box, enumerated lexicographically.  Immutable after
/// construction; safe for concurrent read.
class LatticeDomain {
 public:
  static constexpr long kDefaultSiteCap = 1'000'000;

  int dim() const { return dim_; }
  double spacing() const { return spacing_; }
  const Box& box() const { return box_; }
  long site_count() const { return static_cast<long>(sites_.rows()); }

  /// Coordinates of site `id` (row of the site matrix).
  Eigen::VectorXd site(long id) const { return sites_.row(id); }

  /// n x d matrix of site coordinates, lexicographic row order.
  const Eigen::MatrixXd& sites() const { return sites_; }

  /// Volume of the cell Lambda_delta(x), the cube of side delta.
  double cell_volume() const;

  /// Nearest lattice site to x (Euclidean), ties broken toward the
  /// lexicographically smallest coordinate vector.
  long nearest_site(const Eigen::VectorXd& x) const;

  bool contains(const Eigen::VectorXd& x) const;

  friend LatticeDomain build_domain(int dim, const Box& box, double spacing,
                                    long site_cap);

 private:
  int dim_ = 0;
  Box box_;
  double spacing_ = 0;
  Eigen::MatrixXd sites_;                // n x d
  std::vector<long long> grid_min_;      // per-dim smallest grid index
  std::vector<long long> grid_count_;    // per-dim number of grid lines
};

LatticeDomain build_domain(int dim, const Box& box, double spacing,
                           long site_cap = LatticeDomain::kDefaultSiteCap);

}  // namespace chaoslab
