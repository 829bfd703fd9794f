#pragma once

#include <Eigen/Dense>

#include "ctm/nspace.hpp"
#include "ctm/power.hpp"
#include "ctm/region.hpp"

namespace ctm {

// Orthogonal projector onto the span of the site deltas of a region, in the
// kernel inner product. Application solves the region Gram system
//   G_R c = (G f)|_R,   G_R(i,j) = mu_i E(i,j) mu_j on the region,
// and returns the field supported on the region with coefficients c. The Gram
// block is factored once at construction.
class Projector {
public:
  Projector(const NSpace& space, Region region);

  const Region& region() const { return region_; }
  const NSpace& space() const { return *space_; }
  const Eigen::MatrixXd& gram() const { return gram_; }

  Eigen::VectorXd apply(const Eigen::VectorXd& f) const;
  Eigen::VectorXd coefficients(const Eigen::VectorXd& f) const;

  Eigen::VectorXd gram_solve(const Eigen::VectorXd& v) const { return llt_.solve(v); }
  Eigen::MatrixXd gram_solve(const Eigen::MatrixXd& v) const { return llt_.solve(v); }

private:
  const NSpace* space_;
  Region region_;
  Eigen::MatrixXd gram_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
};

// True iff every path of cell-sharing neighbors from a\c to b\c crosses c
// (breadth-first reachability with c removed from the graph).
bool separation_check(const AdjacencyGraph& graph, const Region& a, const Region& b,
                      const Region& c);

// Operator-norm defect of the screening identity e_a e_c e_b = e_a e_b on the
// subspace of fields supported in b. Exact (up to rounding) whenever c
// separates a from b in the adjacency graph; large when the cut leaks. All
// linear algebra runs on region-coefficient blocks.
double markov_residual(const NSpace& space, const Region& a, const Region& c, const Region& b,
                       const PowerOpts& opts = {});

// ||e_{l1} e_{l2}|| in the kernel operator norm, by power iteration on the
// self-adjoint composition e_{l2} e_{l1} e_{l2} in region coefficients.
double cross_norm(const NSpace& space, const Region& l1, const Region& l2,
                  const PowerOpts& opts = {});

}  // namespace ctm
