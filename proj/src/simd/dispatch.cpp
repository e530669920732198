#include "lawbench/simd.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace lawbench::simd {

#ifndef LAWBENCH_HAVE_AVX2
const KernelTable* avx2_kernels() { return nullptr; }
#endif

bool cpu_supports_avx2() {
#if defined(LAWBENCH_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

namespace {

Backend detect() {
    if (const char* env = std::getenv("LAWBENCH_SIMD")) {
        if (std::string(env) == "scalar") return Backend::Scalar;
    }
    return (avx2_kernels() != nullptr && cpu_supports_avx2()) ? Backend::Avx2 : Backend::Scalar;
}

std::atomic<Backend>& current() {
    static std::atomic<Backend> backend{detect()};
    return backend;
}

}  // namespace

Backend active_backend() { return current().load(std::memory_order_relaxed); }

std::string_view backend_name(Backend b) {
    return b == Backend::Avx2 ? "avx2" : "scalar";
}

bool set_backend(Backend b) {
    if (b == Backend::Avx2 && (avx2_kernels() == nullptr || !cpu_supports_avx2())) return false;
    current().store(b, std::memory_order_relaxed);
    return true;
}

const KernelTable& kernels() {
    if (active_backend() == Backend::Avx2) return *avx2_kernels();
    return scalar_kernels();
}

}  // namespace lawbench::simd
