#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "gammalab/vector.h"

namespace gammalab {

// Piecewise-linear curve in space-time: strictly increasing times t_0 < ... < t_N
// and one node per time. Nodes are the columns of a d-by-(N+1) matrix.
class Path {
 public:
  Path(std::vector<double> times, Matrix nodes);
  Path(std::vector<double> times, const std::vector<Vector>& nodes);

  // N + 1 uniformly spaced nodes on [t0, t1] along the segment a -> b.
  static Path straight(const Vector& a, const Vector& b, double t0, double t1, int intervals);

  Eigen::Index dim() const { return nodes_.rows(); }
  std::size_t size() const { return times_.size(); }
  std::size_t intervals() const { return times_.size() - 1; }
  double start_time() const { return times_.front(); }
  double end_time() const { return times_.back(); }
  double duration() const { return times_.back() - times_.front(); }

  const std::vector<double>& times() const { return times_; }
  const Matrix& nodes() const { return nodes_; }
  Vector node(std::size_t i) const { return nodes_.col(static_cast<Eigen::Index>(i)); }
  Vector front() const { return node(0); }
  Vector back() const { return node(size() - 1); }
  Vector midpoint(std::size_t interval) const { return 0.5 * (node(interval) + node(interval + 1)); }

  // Affine reparametrization onto [t0, t1].
  Path rescaled(double t0, double t1) const;

 private:
  std::vector<double> times_;
  Matrix nodes_;
};

// CSV with header t,x0,...,x{d-1}; 17 significant digits.
void write_csv(std::ostream& out, const Path& path);
std::string to_csv(const Path& path);
Path read_csv(std::istream& in);

// Decimal text of a double with 17 significant digits.
std::string format_double(double value);

}  // namespace gammalab
