#include "hadfem/kernels.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace hadfem::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Backend detect_default() {
  if (const char* env = std::getenv("HADFEM_KERNELS")) {
    const std::string want(env);
    if (want == "scalar") return Backend::scalar;
    if (want == "avx2" && available(Backend::avx2)) return Backend::avx2;
    // "auto", empty, or an unavailable/unknown name: fall through.
  }
  return available(Backend::avx2) ? Backend::avx2 : Backend::scalar;
}

struct State {
  Backend backend = detect_default();
};

State& state() {
  static State s;
  return s;
}

}  // namespace

bool available(Backend b) {
  switch (b) {
    case Backend::scalar:
      return true;
    case Backend::avx2:
      return avx2_ops() != nullptr && cpu_has_avx2();
  }
  return false;
}

const Ops& active() {
  return state().backend == Backend::avx2 ? *avx2_ops() : scalar_ops();
}

Backend active_backend() { return state().backend; }

void force_backend(Backend b) {
  if (!available(b))
    throw std::invalid_argument("kernel backend \"" +
                                std::string(backend_name(b)) +
                                "\" is not available on this CPU");
  state().backend = b;
}

std::string_view backend_name(Backend b) {
  switch (b) {
    case Backend::scalar:
      return "scalar";
    case Backend::avx2:
      return "avx2";
  }
  return "unknown";
}

}  // namespace hadfem::kernels
