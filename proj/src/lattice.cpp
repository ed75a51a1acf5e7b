#include "chaoslab/lattice.hpp"

#include <cmath>
#include <limits>

namespace chaoslab {

double LatticeDomain::cell_volume() const {
  return std::pow(spacing_, dim_);
}

bool LatticeDomain::contains(const Eigen::VectorXd& x) const {
  if (x.size() != dim_) return false;
  for (int a = 0; a < dim_; ++a) {
    if (!(x[a] > box_.lo[a] && x[a] < box_.hi[a])) return false;
  }
  return true;
}

long LatticeDomain::nearest_site(const Eigen::VectorXd& x) const {
  if (!contains(x)) throw OutsideDomain("point outside the open box");
  if (site_count() == 0) throw OutsideDomain("domain has no sites");
  long id = 0;
  for (int a = 0; a < dim_; ++a) {
    // Round half toward the lower coordinate (the fixed tie convention).
    long long k = static_cast<long long>(std::ceil(x[a] / spacing_ - 0.5));
    if (k < grid_min_[a]) k = grid_min_[a];
    if (k > grid_min_[a] + grid_count_[a] - 1)
      k = grid_min_[a] + grid_count_[a] - 1;
    id = id * grid_count_[a] + (k - grid_min_[a]);
  }
  return id;
}

LatticeDomain build_domain(int dim, const Box& box, double spacing,
                           long site_cap) {
  if (dim < 1) throw ConfigError("dimension must be positive");
  if (!(spacing > 0)) throw ConfigError("spacing must be positive");
  if (box.lo.size() != dim || box.hi.size() != dim)
    throw ConfigError("box corner dimension mismatch");
  for (int a = 0; a < dim; ++a) {
    if (!(box.lo[a] < box.hi[a])) throw EmptyDomain("empty box");
  }

  LatticeDomain d;
  d.dim_ = dim;
  d.box_ = box;
  d.spacing_ = spacing;
  d.grid_min_.resize(dim);
  d.grid_count_.resize(dim);

  long long total = 1;
  for (int a = 0; a < dim; ++a) {
    long long kmin = static_cast<long long>(std::floor(box.lo[a] / spacing)) + 1;
    while (kmin * spacing <= box.lo[a]) ++kmin;
    while ((kmin - 1) * spacing > box.lo[a]) --kmin;
    long long kmax = static_cast<long long>(std::ceil(box.hi[a] / spacing)) - 1;
    while (kmax * spacing >= box.hi[a]) --kmax;
    while ((kmax + 1) * spacing < box.hi[a]) ++kmax;
    if (kmax < kmin) throw EmptyDomain("no grid point strictly inside the box");
    d.grid_min_[a] = kmin;
    d.grid_count_[a] = kmax - kmin + 1;
    if (total > site_cap / d.grid_count_[a] + 1) total = site_cap + 1;
    else total *= d.grid_count_[a];
    if (total > site_cap)
      throw Overflow("site count exceeds the configured cap");
  }

  d.sites_.resize(total, dim);
  std::vector<long long> idx(dim, 0);
  for (long long row = 0; row < total; ++row) {
    for (int a = 0; a < dim; ++a)
      d.sites_(row, a) = (d.grid_min_[a] + idx[a]) * spacing;
    // lexicographic odometer, last coordinate fastest
    for (int a = dim - 1; a >= 0; --a) {
      if (++idx[a] < d.grid_count_[a]) break;
      idx[a] = 0;
    }
  }
  return d;
}

}  // namespace chaoslab
