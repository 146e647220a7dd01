#include "gammalab/min_norm_point.h"

#include <algorithm>
#include <cmath>

namespace gammalab {
namespace {

constexpr double kGapTol = 1e-15;
constexpr double kWeightTol = 1e-12;

// Minimizer of |P_S a| over the affine hull of the corral, sum(a) = 1.
Vector affine_minimizer(const Matrix& corral) {
  const Eigen::Index s = corral.cols();
  Vector alpha(s);
  if (s == 1) {
    alpha(0) = 1.0;
    return alpha;
  }
  const Vector p0 = corral.col(0);
  const Matrix shifted = corral.rightCols(s - 1).colwise() - p0;
  const Vector c = shifted.completeOrthogonalDecomposition().solve(-p0);
  alpha(0) = 1.0 - c.sum();
  alpha.tail(s - 1) = c;
  return alpha;
}

}  // namespace

MinNormResult min_norm_point(const Matrix& points) {
  const Eigen::Index m = points.cols();
  if (m == 0) throw InvalidArgument("min_norm_point: empty point set");
  if (!points.allFinite()) throw InvalidArgument("min_norm_point: non-finite coordinates");

  const Vector sq_norms = points.colwise().squaredNorm().transpose();
  const double scale = std::max(sq_norms.maxCoeff(), 1e-300);

  Eigen::Index start = 0;
  sq_norms.minCoeff(&start);
  std::vector<Eigen::Index> corral{start};
  Vector lambda = Vector::Ones(1);
  Vector x = points.col(start);

  MinNormResult result;
  const int max_major = static_cast<int>(50 * (m + points.rows()) + 100);
  int major = 0;
  for (; major < max_major; ++major) {
    const Vector inner = points.transpose() * x;
    Eigen::Index j = 0;
    inner.minCoeff(&j);
    const double gap = x.squaredNorm() - inner(j);
    if (gap <= kGapTol * scale) break;
    if (std::find(corral.begin(), corral.end(), j) != corral.end()) break;

    const double before = x.squaredNorm();
    const std::vector<Eigen::Index> saved_corral = corral;
    const Vector saved_lambda = lambda;
    const Vector saved_x = x;
    corral.push_back(j);
    lambda.conservativeResize(lambda.size() + 1);
    lambda(lambda.size() - 1) = 0.0;

    // Minor cycle: move toward the affine minimizer until it lies in the
    // relative interior of the corral's hull.
    for (int minor = 0; minor < static_cast<int>(points.rows()) + 2 + static_cast<int>(corral.size()); ++minor) {
      Matrix sub(points.rows(), static_cast<Eigen::Index>(corral.size()));
      for (std::size_t k = 0; k < corral.size(); ++k) sub.col(static_cast<Eigen::Index>(k)) = points.col(corral[k]);
      const Vector alpha = affine_minimizer(sub);
      if ((alpha.array() > kWeightTol).all()) {
        lambda = alpha;
        x = sub * lambda;
        break;
      }
      double theta = 1.0;
      for (Eigen::Index k = 0; k < alpha.size(); ++k) {
        if (alpha(k) <= kWeightTol) {
          const double denom = lambda(k) - alpha(k);
          if (denom > 0.0) theta = std::min(theta, lambda(k) / denom);
        }
      }
      lambda = theta * alpha + (1.0 - theta) * lambda;

      std::vector<Eigen::Index> kept;
      std::vector<double> kept_weights;
      for (Eigen::Index k = 0; k < lambda.size(); ++k) {
        if (lambda(k) > kWeightTol) {
          kept.push_back(corral[static_cast<std::size_t>(k)]);
          kept_weights.push_back(lambda(k));
        }
      }
      if (kept.empty()) {
        // Degenerate step; fall back to the closest vertex of the old corral.
        Eigen::Index best = 0;
        lambda.maxCoeff(&best);
        kept.push_back(corral[static_cast<std::size_t>(best)]);
        kept_weights.push_back(1.0);
      }
      corral = std::move(kept);
      lambda = Eigen::Map<const Vector>(kept_weights.data(), static_cast<Eigen::Index>(kept_weights.size()));
      lambda /= lambda.sum();
      Matrix shrunk(points.rows(), static_cast<Eigen::Index>(corral.size()));
      for (std::size_t k = 0; k < corral.size(); ++k) shrunk.col(static_cast<Eigen::Index>(k)) = points.col(corral[k]);
      x = shrunk * lambda;
    }
    // Each major cycle strictly decreases |x| in exact arithmetic.
    if (x.squaredNorm() >= before) {
      corral = saved_corral;
      lambda = saved_lambda;
      x = saved_x;
      break;
    }
  }

  result.point = x;
  result.weights = Vector::Zero(m);
  for (std::size_t k = 0; k < corral.size(); ++k) result.weights(corral[k]) = lambda(static_cast<Eigen::Index>(k));
  result.gap = std::max(0.0, x.squaredNorm() - (points.transpose() * x).minCoeff());
  result.iterations = major;
  return result;
}

Vector min_norm_point(const std::vector<Vector>& points) {
  if (points.empty()) throw InvalidArgument("min_norm_point: empty point set");
  Matrix stacked(points.front().size(), static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    require_dim(points[i], stacked.rows(), "min_norm_point");
    stacked.col(static_cast<Eigen::Index>(i)) = points[i];
  }
  return min_norm_point(stacked).point;
}

MinNormResult project_onto_hull(const Matrix& points, const Vector& z) {
  require_dim(z, points.rows(), "project_onto_hull");
  MinNormResult shifted = min_norm_point(points.colwise() - z);
  shifted.point += z;
  return shifted;
}

}  // namespace gammalab
