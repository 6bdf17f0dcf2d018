#include <cstdlib>
#include <cstring>

#include "qjump/simd.hpp"

namespace qjump::simd {
namespace {

struct Choice {
    const Kernels* k;
    const char* name;
};

Choice choose() {
    const char* force = std::getenv("QJUMP_SIMD");
    if (force && std::strcmp(force, "scalar") == 0) return {&scalar_kernels(), "scalar"};
#if defined(__x86_64__) || defined(_M_X64)
    if (force && std::strcmp(force, "avx2") == 0) return {&avx2_kernels(), "avx2"};
    if (!force || std::strcmp(force, "auto") == 0) {
        if (avx2_available()) return {&avx2_kernels(), "avx2"};
    }
#endif
    return {&scalar_kernels(), "scalar"};
}

const Choice& choice() {
    static const Choice c = choose();
    return c;
}

}  // namespace

const Kernels& active() { return *choice().k; }
std::string_view active_name() { return choice().name; }

}  // namespace qjump::simd
