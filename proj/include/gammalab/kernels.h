#pragma once

// Data-parallel inner loops shared by the function kinds and the path code.
//
// Every kernel has a scalar reference implementation and, on x86-64 builds,
// an AVX2+FMA variant. The active backend is chosen once at first use from
// the CPU feature flags; GAMMALAB_SIMD=scalar|avx2 in the environment forces
// a choice. The variants agree to rounding (tests/test_kernels.cc).

#include <cstddef>
#include <span>
#include <string_view>

namespace gammalab::kernels {

struct Backend {
  const char* name;

  // out[i] = sum_k cols[k * m + i] * x[k], with m = out.size(), d = x.size().
  // `cols` is an m-by-d column-major matrix whose rows are the vectors a_i.
  void (*scores)(std::span<const double> cols, std::span<const double> x, std::span<double> out);

  double (*max_value)(std::span<const double> v);

  // out[i] = exp((v[i] - shift) * scale); returns the sum of out.
  double (*exp_shifted)(std::span<const double> v, double shift, double scale,
                        std::span<double> out);

  // out[k] = sum_i w[i] * cols[k * m + i], with m = w.size(), d = out.size().
  void (*weighted_columns)(std::span<const double> cols, std::span<const double> w,
                           std::span<double> out);

  // sum_i |x_{i+1} - x_i|^2 / (t_{i+1} - t_i) for nodes stored contiguously,
  // node i occupying nodes[i * d, (i + 1) * d).
  double (*kinetic_energy)(std::span<const double> nodes, std::size_t d,
                           std::span<const double> times);
};

const Backend& scalar_backend();

// nullptr when the build or the CPU lacks AVX2/FMA.
const Backend* avx2_backend();

const Backend& active();

// "scalar", "avx2" or "auto". Throws InvalidArgument for unknown or
// unavailable backends.
void select(std::string_view name);

}  // namespace gammalab::kernels
