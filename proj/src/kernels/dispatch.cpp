#include "bfosim/kernels/kernels.hpp"

#include "bfosim/errors.hpp"

namespace bfosim::kernels {

Kind parse_kind(const std::string& name) {
    if (name == "auto") return Kind::auto_detect;
    if (name == "scalar") return Kind::scalar;
    if (name == "avx2") return Kind::avx2;
    if (name == "neon") return Kind::neon;
    throw ConfigError("simulation.kernel: unknown kernel '" + name +
                      "' (expected auto|scalar|avx2|neon)");
}

std::string kind_name(Kind kind) {
    switch (kind) {
        case Kind::auto_detect: return "auto";
        case Kind::scalar: return "scalar";
        case Kind::avx2: return "avx2";
        case Kind::neon: return "neon";
    }
    return "scalar";
}

bool available(Kind kind) {
    switch (kind) {
        case Kind::auto_detect:
        case Kind::scalar:
            return true;
        case Kind::avx2:
#if defined(BFOSIM_BUILD_AVX2)
            return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
            return false;
#endif
        case Kind::neon:
#if defined(BFOSIM_BUILD_NEON)
            return true;  // NEON is baseline on aarch64
#else
            return false;
#endif
    }
    return false;
}

const KernelOps& select(Kind kind) {
    if (kind == Kind::auto_detect) {
#if defined(BFOSIM_BUILD_AVX2)
        if (available(Kind::avx2)) return avx2_ops();
#endif
#if defined(BFOSIM_BUILD_NEON)
        if (available(Kind::neon)) return neon_ops();
#endif
        return scalar_ops();
    }
    if (!available(kind)) {
        throw ConfigError("simulation.kernel: '" + kind_name(kind) +
                          "' is not available on this machine");
    }
    switch (kind) {
        case Kind::scalar: return scalar_ops();
#if defined(BFOSIM_BUILD_AVX2)
        case Kind::avx2: return avx2_ops();
#endif
#if defined(BFOSIM_BUILD_NEON)
        case Kind::neon: return neon_ops();
#endif
        default: return scalar_ops();
    }
}

}  // namespace bfosim::kernels
