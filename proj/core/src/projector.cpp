#include "ctm/projector.hpp"

#include <cmath>
#include <vector>

#include "ctm/errors.hpp"

namespace ctm {

Projector::Projector(const NSpace& space, Region region)
    : space_(&space), region_(std::move(region)) {
  if (region_.sites.empty())
    throw UsageError("markov.projector: empty region '" + region_.name + "'");
  if (region_.sites.back() >= space.size())
    throw UsageError("markov.projector: region '" + region_.name +
                     "' has sites outside the lattice");
  gram_ = space.gram_block(region_.sites, region_.sites);
  gram_ = 0.5 * (gram_ + gram_.transpose()).eval();
  llt_.compute(gram_);
  if (llt_.info() != Eigen::Success)
    throw NumericError("markov.projector: Gram factorization failed for region '" +
                       region_.name + "'");
}

Eigen::VectorXd Projector::coefficients(const Eigen::VectorXd& f) const {
  if (f.size() != space_->size())
    throw UsageError("markov.projector: field size does not match site count");
  const Eigen::VectorXd gf = space_->apply_gram(f);
  Eigen::VectorXd rhs(region_.size());
  for (std::int64_t k = 0; k < region_.size(); ++k) rhs[k] = gf[region_.sites[k]];
  return llt_.solve(rhs);
}

Eigen::VectorXd Projector::apply(const Eigen::VectorXd& f) const {
  const Eigen::VectorXd c = coefficients(f);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(space_->size());
  for (std::int64_t k = 0; k < region_.size(); ++k) out[region_.sites[k]] = c[k];
  return out;
}

bool separation_check(const AdjacencyGraph& graph, const Region& a, const Region& b,
                      const Region& c) {
  std::vector<char> blocked(graph.n, 0), target(graph.n, 0), seen(graph.n, 0);
  for (const std::int64_t s : c.sites) blocked[s] = 1;
  for (const std::int64_t s : b.sites)
    if (!blocked[s]) target[s] = 1;

  std::vector<std::int64_t> stack;
  for (const std::int64_t s : a.sites)
    if (!blocked[s] && !seen[s]) {
      seen[s] = 1;
      stack.push_back(s);
    }
  while (!stack.empty()) {
    const std::int64_t i = stack.back();
    stack.pop_back();
    if (target[i]) return false;
    for (std::int64_t k = graph.offsets[i]; k < graph.offsets[i + 1]; ++k) {
      const std::int64_t j = graph.neighbors[k];
      if (!blocked[j] && !seen[j]) {
        seen[j] = 1;
        stack.push_back(j);
      }
    }
  }
  return true;
}

namespace {

// Gram blocks between two regions, kept dense; all norm queries below act on
// region coefficients, where the inner product is the region Gram.
Eigen::MatrixXd block(const NSpace& space, const Region& r, const Region& s) {
  return space.gram_block(r.sites, s.sites);
}

}  // namespace

double markov_residual(const NSpace& space, const Region& a, const Region& c, const Region& b,
                       const PowerOpts& opts) {
  const Projector pa(space, a), pc(space, c), pb(space, b);
  const Eigen::MatrixXd gab = block(space, a, b);
  const Eigen::MatrixXd gacb = block(space, a, c) * pc.gram_solve(block(space, c, b));
  // Defect map in coefficients: fields Inj_b x -> Inj_a (G_a^-1 Y x),
  // Y = G_ac G_c^-1 G_cb - G_ab.
  const Eigen::MatrixXd y = gacb - gab;

  const auto apply = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    const Eigen::VectorXd mid = pa.gram_solve(Eigen::VectorXd(y * x));
    return pb.gram_solve(Eigen::VectorXd(y.transpose() * mid));
  };
  const auto inner = [&](const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
    return u.dot(pb.gram() * v);
  };
  const double lambda =
      power_lambda_max(b.size(), apply, inner, opts, "markov.markov_residual");
  return std::sqrt(lambda);
}

double cross_norm(const NSpace& space, const Region& l1, const Region& l2,
                  const PowerOpts& opts) {
  const Projector p1(space, l1), p2(space, l2);
  const Eigen::MatrixXd g12 = block(space, l1, l2);

  const auto apply = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    const Eigen::VectorXd mid = p1.gram_solve(Eigen::VectorXd(g12 * x));
    return p2.gram_solve(Eigen::VectorXd(g12.transpose() * mid));
  };
  const auto inner = [&](const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
    return u.dot(p2.gram() * v);
  };
  const double lambda = power_lambda_max(l2.size(), apply, inner, opts, "markov.cross_norm");
  return std::sqrt(lambda);
}

}  // namespace ctm
