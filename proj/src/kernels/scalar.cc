#include <cmath>
#include <limits>

#include "gammalab/kernels.h"

namespace gammalab::kernels {
namespace {

void scores_scalar(std::span<const double> cols, std::span<const double> x, std::span<double> out) {
  const std::size_t m = out.size();
  for (std::size_t i = 0; i < m; ++i) out[i] = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double* col = cols.data() + k * m;
    const double xk = x[k];
    for (std::size_t i = 0; i < m; ++i) out[i] = std::fma(col[i], xk, out[i]);
  }
}

double max_scalar(std::span<const double> v) {
  double best = -std::numeric_limits<double>::infinity();
  for (double value : v) best = value > best ? value : best;
  return best;
}

double exp_shifted_scalar(std::span<const double> v, double shift, double scale,
                          std::span<double> out) {
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = std::exp((v[i] - shift) * scale);
    sum += out[i];
  }
  return sum;
}

void weighted_columns_scalar(std::span<const double> cols, std::span<const double> w,
                             std::span<double> out) {
  const std::size_t m = w.size();
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double* col = cols.data() + k * m;
    double acc = 0.0;
    for (std::size_t i = 0; i < m; ++i) acc = std::fma(w[i], col[i], acc);
    out[k] = acc;
  }
}

double kinetic_scalar(std::span<const double> nodes, std::size_t d, std::span<const double> times) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    const double* a = nodes.data() + i * d;
    const double* b = a + d;
    double sq = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      const double diff = b[k] - a[k];
      sq += diff * diff;
    }
    total += sq / (times[i + 1] - times[i]);
  }
  return total;
}

}  // namespace

const Backend& scalar_backend() {
  static const Backend backend{"scalar",
                               scores_scalar,
                               max_scalar,
                               exp_shifted_scalar,
                               weighted_columns_scalar,
                               kinetic_scalar};
  return backend;
}

}  // namespace gammalab::kernels
