#include "gammalab/path.h"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace gammalab {
namespace {

void validate(const std::vector<double>& times, const Matrix& nodes) {
  if (times.size() < 2) throw InvalidArgument("path: need at least two nodes");
  if (static_cast<Eigen::Index>(times.size()) != nodes.cols()) {
    throw InvalidArgument("path: times and nodes differ in length");
  }
  if (nodes.rows() == 0) throw InvalidArgument("path: zero-dimensional nodes");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i])) throw InvalidArgument("path: non-finite time");
    if (i > 0 && !(times[i] > times[i - 1])) throw InvalidArgument("path: times must be strictly increasing");
  }
  if (!nodes.allFinite()) throw InvalidArgument("path: non-finite node coordinate");
}

}  // namespace

Path::Path(std::vector<double> times, Matrix nodes) : times_(std::move(times)), nodes_(std::move(nodes)) {
  validate(times_, nodes_);
}

Path::Path(std::vector<double> times, const std::vector<Vector>& nodes) : times_(std::move(times)) {
  if (nodes.empty()) throw InvalidArgument("path: no nodes");
  nodes_.resize(nodes.front().size(), static_cast<Eigen::Index>(nodes.size()));
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    require_dim(nodes[i], nodes_.rows(), "path node");
    nodes_.col(static_cast<Eigen::Index>(i)) = nodes[i];
  }
  validate(times_, nodes_);
}

Path Path::straight(const Vector& a, const Vector& b, double t0, double t1, int intervals) {
  require_dim(b, a.size(), "straight path");
  if (intervals < 1) throw InvalidArgument("straight path: need at least one interval");
  std::vector<double> times(static_cast<std::size_t>(intervals) + 1);
  Matrix nodes(a.size(), intervals + 1);
  for (int i = 0; i <= intervals; ++i) {
    const double s = static_cast<double>(i) / intervals;
    times[static_cast<std::size_t>(i)] = i == intervals ? t1 : t0 + s * (t1 - t0);
    nodes.col(i) = i == intervals ? b : Vector((1.0 - s) * a + s * b);
  }
  return Path(std::move(times), std::move(nodes));
}

Path Path::rescaled(double t0, double t1) const {
  const double a = times_.front();
  const double span = times_.back() - a;
  std::vector<double> times(times_.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    times[i] = t0 + (times_[i] - a) / span * (t1 - t0);
  }
  times.front() = t0;
  times.back() = t1;
  return Path(std::move(times), nodes_);
}

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_csv(std::ostream& out, const Path& path) {
  out << "t";
  for (Eigen::Index k = 0; k < path.dim(); ++k) out << ",x" << k;
  out << "\n";
  for (std::size_t i = 0; i < path.size(); ++i) {
    out << format_double(path.times()[i]);
    for (Eigen::Index k = 0; k < path.dim(); ++k) {
      out << "," << format_double(path.nodes()(k, static_cast<Eigen::Index>(i)));
    }
    out << "\n";
  }
}

std::string to_csv(const Path& path) {
  std::ostringstream out;
  write_csv(out, path);
  return out.str();
}

Path read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("path csv: empty input");
  std::size_t dim = 0;
  for (char c : line) dim += c == ',';
  if (dim == 0 || line.rfind("t,", 0) != 0) throw InvalidArgument("path csv: bad header '" + line + "'");
  std::vector<double> times;
  std::vector<Vector> nodes;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::vector<double> values;
    while (std::getline(row, cell, ',')) values.push_back(std::stod(cell));
    if (values.size() != dim + 1) throw InvalidArgument("path csv: wrong column count");
    times.push_back(values[0]);
    nodes.push_back(Eigen::Map<const Vector>(values.data() + 1, static_cast<Eigen::Index>(dim)));
  }
  return Path(std::move(times), nodes);
}

}  // namespace gammalab
