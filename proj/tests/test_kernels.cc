#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "gammalab/convex.h"
#include "gammalab/kernels.h"

using namespace gammalab;

namespace {

std::vector<double> random_values(std::size_t n, double lo, double hi, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

bool close(double a, double b, double rel) { return std::abs(a - b) <= rel * (1.0 + std::abs(a) + std::abs(b)); }

// Pairs each backend with itself or with the AVX2 variant when present.
const kernels::Backend& other() {
  const kernels::Backend* avx = kernels::avx2_backend();
  return avx != nullptr ? *avx : kernels::scalar_backend();
}

}  // namespace

TEST_CASE("scores and weighted columns agree across backends") {
  std::mt19937_64 rng(1);
  const auto& ref = kernels::scalar_backend();
  const auto& simd = other();
  for (std::size_t m : {1u, 2u, 3u, 4u, 5u, 7u, 8u, 13u, 24u, 120u}) {
    for (std::size_t d : {1u, 2u, 3u, 6u}) {
      const auto cols = random_values(m * d, -3.0, 3.0, rng);
      const auto x = random_values(d, -2.0, 2.0, rng);
      std::vector<double> a(m), b(m);
      ref.scores(cols, x, a);
      simd.scores(cols, x, b);
      for (std::size_t i = 0; i < m; ++i) CHECK(close(a[i], b[i], 1e-13));

      const auto w = random_values(m, 0.0, 1.0, rng);
      std::vector<double> ga(d), gb(d);
      ref.weighted_columns(cols, w, ga);
      simd.weighted_columns(cols, w, gb);
      for (std::size_t k = 0; k < d; ++k) CHECK(close(ga[k], gb[k], 1e-13));
    }
  }
}

TEST_CASE("max and shifted exponentials agree across backends") {
  std::mt19937_64 rng(2);
  const auto& ref = kernels::scalar_backend();
  const auto& simd = other();
  for (std::size_t m : {1u, 3u, 4u, 9u, 64u, 101u}) {
    const auto v = random_values(m, -50.0, 50.0, rng);
    CHECK(ref.max_value(v) == simd.max_value(v));
    const double shift = ref.max_value(v);
    for (double scale : {0.1, 1.0, 10.0, 100.0}) {
      std::vector<double> a(m), b(m);
      const double sa = ref.exp_shifted(v, shift, scale, a);
      const double sb = simd.exp_shifted(v, shift, scale, b);
      CHECK(close(sa, sb, 1e-13));
      for (std::size_t i = 0; i < m; ++i) {
        CHECK(std::abs(a[i] - b[i]) <= 1e-13 * a[i] + 1e-300);
      }
    }
  }
}

TEST_CASE("exponential handles underflow and exact zero arguments") {
  const auto& simd = other();
  const std::vector<double> v{0.0, -800.0, -745.0, -700.0, -1e-300, 709.0};
  std::vector<double> out(v.size());
  simd.exp_shifted(v, 0.0, 1.0, out);
  CHECK(out[0] == 1.0);
  CHECK(out[1] == 0.0);
  CHECK(out[2] >= 0.0);
  CHECK(out[2] < 1e-320);
  CHECK(close(out[3], std::exp(-700.0), 1e-13));
  CHECK(out[4] == 1.0);
  CHECK(close(out[5], std::exp(709.0), 1e-13));
}

TEST_CASE("kinetic energy agrees across backends for every dimension") {
  std::mt19937_64 rng(3);
  const auto& ref = kernels::scalar_backend();
  const auto& simd = other();
  for (std::size_t d : {1u, 2u, 3u, 4u, 5u}) {
    for (std::size_t n : {2u, 3u, 5u, 8u, 9u, 257u}) {
      const auto nodes = random_values(n * d, -2.0, 2.0, rng);
      std::vector<double> times(n);
      double t = 0.0;
      for (double& ti : times) {
        ti = t;
        t += std::uniform_real_distribution<double>(0.01, 0.2)(rng);
      }
      CHECK(close(ref.kinetic_energy(nodes, d, times), simd.kinetic_energy(nodes, d, times), 1e-13));
    }
  }
}

TEST_CASE("backend selection") {
  CHECK_THROWS_AS(kernels::select("neon"), InvalidArgument);
  kernels::select("scalar");
  CHECK(std::string(kernels::active().name) == "scalar");
  if (kernels::avx2_backend() != nullptr) {
    kernels::select("avx2");
    CHECK(std::string(kernels::active().name) == "avx2");
  } else {
    CHECK_THROWS_AS(kernels::select("avx2"), InvalidArgument);
  }
  kernels::select("auto");
}

TEST_CASE("log-sum-exp results do not depend on the backend") {
  Matrix a(5, 2);
  a << 1, 0, 0, 1, -1, 0.5, 0.3, -2, 2, 2;
  const auto f = LambdaConvexFunction::log_sum_exp(a, 0.05);
  const Vector x = (Vector(2) << 0.4, -0.7).finished();
  kernels::select("scalar");
  const ProxResult ps = prox(f, 0.3, x);
  const double es = evaluate(f, x);
  kernels::select("auto");
  const ProxResult pa = prox(f, 0.3, x);
  CHECK((ps.resolvent_point - pa.resolvent_point).norm() <= 1e-12);
  CHECK(close(es, evaluate(f, x), 1e-13));
}
