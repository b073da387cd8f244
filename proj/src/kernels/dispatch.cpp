#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "renyi_reach/kernels.hpp"

namespace renyi_reach::kernels {

namespace {

constexpr KernelTable kScalarTable{Backend::Scalar, &scalar::cgemm_nn, &scalar::cgemm_nc,
                                   &scalar::axpy, &scalar::argmax};

#if defined(RENYI_REACH_HAVE_AVX2)
constexpr KernelTable kAvx2Table{Backend::Avx2, &avx2::cgemm_nn, &avx2::cgemm_nc, &avx2::axpy,
                                 &avx2::argmax};
#endif

const KernelTable* initial_table() {
  const char* env = std::getenv("RENYI_REACH_KERNELS");
  if (env != nullptr && std::string(env) == "scalar") return &kScalarTable;
#if defined(RENYI_REACH_HAVE_AVX2)
  if (avx2_available()) return &kAvx2Table;
#endif
  return &kScalarTable;
}

std::atomic<const KernelTable*>& active_slot() {
  static std::atomic<const KernelTable*> slot{initial_table()};
  return slot;
}

}  // namespace

std::string_view to_string(Backend backend) {
  return backend == Backend::Avx2 ? "avx2" : "scalar";
}

bool avx2_available() {
#if defined(RENYI_REACH_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return ok;
#else
  return false;
#endif
}

const KernelTable& table(Backend backend) {
  if (backend == Backend::Scalar) return kScalarTable;
#if defined(RENYI_REACH_HAVE_AVX2)
  if (avx2_available()) return kAvx2Table;
#endif
  throw std::invalid_argument("avx2 kernels are not available on this build or CPU");
}

const KernelTable& active() { return *active_slot().load(std::memory_order_acquire); }

void select(Backend backend) { active_slot().store(&table(backend), std::memory_order_release); }

}  // namespace renyi_reach::kernels
