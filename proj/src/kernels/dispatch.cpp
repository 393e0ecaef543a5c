#include <cstdlib>
#include <stdexcept>
#include <string>

#include "surplus/kernels.hpp"

namespace surplus::kernels {
namespace {

constexpr KernelTable kScalar{Backend::Scalar, &detail::dot_scalar, &detail::axpy_scalar,
                              &detail::scale_scalar, &detail::max_abs_scalar};

#if defined(SURPLUS_HAVE_AVX2)
constexpr KernelTable kAvx2{Backend::Avx2, &detail::dot_avx2, &detail::axpy_avx2, &detail::scale_avx2,
                            &detail::max_abs_avx2};
#endif

#if defined(SURPLUS_HAVE_NEON)
constexpr KernelTable kNeon{Backend::Neon, &detail::dot_neon, &detail::axpy_neon, &detail::scale_neon,
                            &detail::max_abs_neon};
#endif

bool cpu_supports(Backend b) {
    switch (b) {
        case Backend::Scalar:
            return true;
        case Backend::Avx2:
#if defined(SURPLUS_HAVE_AVX2)
            return __builtin_cpu_supports("avx2");
#else
            return false;
#endif
        case Backend::Neon:
#if defined(SURPLUS_HAVE_NEON)
            return true;  // mandatory on aarch64
#else
            return false;
#endif
    }
    return false;
}

const KernelTable* select_initial() {
    if (const char* env = std::getenv("SURPLUS_KERNELS"); env && std::string(env) == "scalar")
        return &kScalar;
#if defined(SURPLUS_HAVE_AVX2)
    if (cpu_supports(Backend::Avx2)) return &kAvx2;
#endif
#if defined(SURPLUS_HAVE_NEON)
    return &kNeon;
#endif
    return &kScalar;
}

const KernelTable*& active_slot() {
    static const KernelTable* slot = select_initial();
    return slot;
}

}  // namespace

std::string_view backend_name(Backend b) {
    switch (b) {
        case Backend::Scalar:
            return "scalar";
        case Backend::Avx2:
            return "avx2";
        case Backend::Neon:
            return "neon";
    }
    return "unknown";
}

std::vector<Backend> available_backends() {
    std::vector<Backend> out{Backend::Scalar};
    if (cpu_supports(Backend::Avx2)) out.push_back(Backend::Avx2);
    if (cpu_supports(Backend::Neon)) out.push_back(Backend::Neon);
    return out;
}

const KernelTable& table(Backend b) {
    if (!cpu_supports(b))
        throw std::invalid_argument("kernel backend not available: " + std::string(backend_name(b)));
    switch (b) {
        case Backend::Scalar:
            return kScalar;
#if defined(SURPLUS_HAVE_AVX2)
        case Backend::Avx2:
            return kAvx2;
#endif
#if defined(SURPLUS_HAVE_NEON)
        case Backend::Neon:
            return kNeon;
#endif
        default:
            break;
    }
    throw std::invalid_argument("kernel backend not compiled in");
}

const KernelTable& active() { return *active_slot(); }

void set_active(Backend b) { active_slot() = &table(b); }

}  // namespace surplus::kernels
