#include <atomic>
#include <cstdlib>
#include <string>

#include "gammalab/errors.h"
#include "gammalab/kernels.h"

namespace gammalab::kernels {

#if defined(GAMMALAB_HAVE_AVX2)
namespace detail {
const Backend& avx2_table();
}
#endif

namespace {

bool cpu_has_avx2() {
#if defined(GAMMALAB_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Backend* pick(std::string_view name) {
  if (name == "scalar") return &scalar_backend();
  if (name == "avx2") return avx2_backend();
  if (name == "auto" || name.empty()) {
    const Backend* simd = avx2_backend();
    return simd != nullptr ? simd : &scalar_backend();
  }
  return nullptr;
}

std::atomic<const Backend*>& slot() {
  static std::atomic<const Backend*> current{[] {
    const char* env = std::getenv("GAMMALAB_SIMD");
    const Backend* chosen = pick(env != nullptr ? std::string_view(env) : std::string_view("auto"));
    return chosen != nullptr ? chosen : pick("auto");
  }()};
  return current;
}

}  // namespace

const Backend* avx2_backend() {
#if defined(GAMMALAB_HAVE_AVX2)
  static const bool available = cpu_has_avx2();
  return available ? &detail::avx2_table() : nullptr;
#else
  return nullptr;
#endif
}

const Backend& active() { return *slot().load(std::memory_order_acquire); }

void select(std::string_view name) {
  const Backend* chosen = pick(name);
  if (chosen == nullptr) {
    throw InvalidArgument("kernel backend '" + std::string(name) + "' is unknown or unavailable");
  }
  slot().store(chosen, std::memory_order_release);
}

}  // namespace gammalab::kernels
