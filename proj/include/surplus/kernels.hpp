#pragma once

// Dense double-precision kernels used by the simplex pivots and the batched
// belief/functional evaluations. Every kernel has a scalar reference
// implementation; AVX2 (x86-64) and NEON (aarch64) variants are selected once
// at startup from the CPU features. Setting SURPLUS_KERNELS=scalar in the
// environment forces the reference path.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace surplus::kernels {

enum class Backend { Scalar, Avx2, Neon };

std::string_view backend_name(Backend b);

/// Function table for one backend. All entries are non-null.
struct KernelTable {
    Backend backend;
    double (*dot)(const double* a, const double* b, std::size_t n);
    // y += alpha * x
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
    void (*scale)(double alpha, double* x, std::size_t n);
    double (*max_abs)(const double* x, std::size_t n);
};

/// Backends compiled in AND supported by the running CPU. Scalar is always first.
std::vector<Backend> available_backends();

/// Table for a specific backend; throws std::invalid_argument if unavailable.
const KernelTable& table(Backend b);

/// Table chosen at startup (best available unless overridden).
const KernelTable& active();

/// Override the active backend (tests, benchmarks). Not thread-safe with
/// respect to concurrent kernel calls; call before spawning workers.
void set_active(Backend b);

inline double dot(std::span<const double> a, std::span<const double> b) {
    return active().dot(a.data(), b.data(), a.size() < b.size() ? a.size() : b.size());
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    active().axpy(alpha, x.data(), y.data(), x.size() < y.size() ? x.size() : y.size());
}

inline void scale(double alpha, std::span<double> x) {
    active().scale(alpha, x.data(), x.size());
}

inline double max_abs(std::span<const double> x) {
    return active().max_abs(x.data(), x.size());
}

namespace detail {
double dot_scalar(const double* a, const double* b, std::size_t n);
void axpy_scalar(double alpha, const double* x, double* y, std::size_t n);
void scale_scalar(double alpha, double* x, std::size_t n);
double max_abs_scalar(const double* x, std::size_t n);

#if defined(SURPLUS_HAVE_AVX2)
double dot_avx2(const double* a, const double* b, std::size_t n);
void axpy_avx2(double alpha, const double* x, double* y, std::size_t n);
void scale_avx2(double alpha, double* x, std::size_t n);
double max_abs_avx2(const double* x, std::size_t n);
#endif

#if defined(SURPLUS_HAVE_NEON)
double dot_neon(const double* a, const double* b, std::size_t n);
void axpy_neon(double alpha, const double* x, double* y, std::size_t n);
void scale_neon(double alpha, double* x, std::size_t n);
double max_abs_neon(const double* x, std::size_t n);
#endif
}  // namespace detail

}  // namespace surplus::kernels
