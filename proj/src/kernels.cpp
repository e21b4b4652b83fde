#include "hoops/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace hoops::kernels {

namespace detail {

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void exp_scalar(const double* x, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(x[i]);
}

void sigmoid_scalar(const double* eta, double* p, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        double x = eta[i];
        if (x >= 0.0) {
            p[i] = 1.0 / (1.0 + std::exp(-x));
        } else {
            double e = std::exp(x);
            p[i] = e / (1.0 + e);
        }
    }
}

void log1pexp_scalar(const double* x, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        double v = x[i];
        // log(1 + e^v) = max(v, 0) + log1p(e^{-|v|})
        out[i] = (v > 0.0 ? v : 0.0) + std::log1p(std::exp(-std::fabs(v)));
    }
}

double bernoulli_negloglik_scalar(const double* eta, const double* y, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double v = eta[i];
        double l1pe = (v > 0.0 ? v : 0.0) + std::log1p(std::exp(-std::fabs(v)));
        s += l1pe - y[i] * v;
    }
    return s;
}

void logistic_weights_scalar(const double* p, double* w, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) w[i] = p[i] * (1.0 - p[i]);
}

}  // namespace detail

namespace {

struct Vtable {
    double (*dot)(const double*, const double*, std::size_t);
    void (*axpy)(double, const double*, double*, std::size_t);
    void (*exp_v)(const double*, double*, std::size_t);
    void (*sigmoid)(const double*, double*, std::size_t);
    void (*log1pexp)(const double*, double*, std::size_t);
    double (*negloglik)(const double*, const double*, std::size_t);
    void (*weights)(const double*, double*, std::size_t);
    Backend backend;
};

constexpr Vtable kScalar = {
    detail::dot_scalar,      detail::axpy_scalar,
    detail::exp_scalar,      detail::sigmoid_scalar,
    detail::log1pexp_scalar, detail::bernoulli_negloglik_scalar,
    detail::logistic_weights_scalar, Backend::Scalar,
};

#if defined(__x86_64__)
constexpr Vtable kAvx2 = {
    detail::dot_avx2,      detail::axpy_avx2,
    detail::exp_avx2,      detail::sigmoid_avx2,
    detail::log1pexp_avx2, detail::bernoulli_negloglik_avx2,
    detail::logistic_weights_avx2, Backend::Avx2,
};
#endif

const Vtable& best() {
#if defined(__x86_64__)
    if (avx2_supported()) return kAvx2;
#endif
    return kScalar;
}

const Vtable* g_active = nullptr;

const Vtable& table() {
    if (g_active == nullptr) g_active = &best();
    return *g_active;
}

}  // namespace

bool avx2_supported() {
#if defined(__x86_64__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Backend active() { return table().backend; }

void force(Backend b) {
    switch (b) {
        case Backend::Scalar:
            g_active = &kScalar;
            return;
        case Backend::Avx2:
#if defined(__x86_64__)
            if (avx2_supported()) {
                g_active = &kAvx2;
                return;
            }
#endif
            throw std::runtime_error("AVX2 backend not supported on this CPU");
    }
    throw std::runtime_error("unknown kernel backend");
}

void reset() { g_active = &best(); }

double dot(const double* a, const double* b, std::size_t n) { return table().dot(a, b, n); }
void axpy(double alpha, const double* x, double* y, std::size_t n) { table().axpy(alpha, x, y, n); }
void exp_v(const double* x, double* out, std::size_t n) { table().exp_v(x, out, n); }
void sigmoid(const double* eta, double* p, std::size_t n) { table().sigmoid(eta, p, n); }
void log1pexp(const double* x, double* out, std::size_t n) { table().log1pexp(x, out, n); }
double bernoulli_negloglik(const double* eta, const double* y, std::size_t n) {
    return table().negloglik(eta, y, n);
}
void logistic_weights(const double* p, double* w, std::size_t n) { table().weights(p, w, n); }

}  // namespace hoops::kernels
