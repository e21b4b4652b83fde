#pragma once

#include <cstddef>

// Vector kernels used by the regression inner loops. Every kernel has a
// scalar reference implementation and (on x86-64) an AVX2 variant; the
// active backend is picked once at startup from CPUID and can be forced
// for equivalence testing.
namespace hoops::kernels {

enum class Backend { Scalar, Avx2 };

// Backend currently in use.
Backend active();

// Force a backend (throws if unsupported on this CPU). Intended for tests.
void force(Backend b);

// Reset to the best backend the CPU supports.
void reset();

bool avx2_supported();

// sum_i a[i] * b[i]
double dot(const double* a, const double* b, std::size_t n);

// y[i] += alpha * x[i]
void axpy(double alpha, const double* x, double* y, std::size_t n);

// out[i] = exp(x[i]); ~1 ulp for |x| <= 707, saturating/flushing beyond.
void exp_v(const double* x, double* out, std::size_t n);

// p[i] = 1 / (1 + exp(-eta[i]))
void sigmoid(const double* eta, double* p, std::size_t n);

// out[i] = log(1 + exp(x[i])), computed without overflow.
void log1pexp(const double* x, double* out, std::size_t n);

// sum_i [ log(1 + exp(eta[i])) - y[i] * eta[i] ]  (Bernoulli deviance / 2)
double bernoulli_negloglik(const double* eta, const double* y, std::size_t n);

// w[i] = p[i] * (1 - p[i])
void logistic_weights(const double* p, double* w, std::size_t n);

namespace detail {
// Per-backend entry points, exposed so equivalence tests can compare them
// directly without flipping the global dispatch state.
double dot_scalar(const double* a, const double* b, std::size_t n);
void axpy_scalar(double alpha, const double* x, double* y, std::size_t n);
void exp_scalar(const double* x, double* out, std::size_t n);
void sigmoid_scalar(const double* eta, double* p, std::size_t n);
void log1pexp_scalar(const double* x, double* out, std::size_t n);
double bernoulli_negloglik_scalar(const double* eta, const double* y, std::size_t n);
void logistic_weights_scalar(const double* p, double* w, std::size_t n);

#if defined(__x86_64__)
double dot_avx2(const double* a, const double* b, std::size_t n);
void axpy_avx2(double alpha, const double* x, double* y, std::size_t n);
void exp_avx2(const double* x, double* out, std::size_t n);
void sigmoid_avx2(const double* eta, double* p, std::size_t n);
void log1pexp_avx2(const double* x, double* out, std::size_t n);
double bernoulli_negloglik_avx2(const double* eta, const double* y, std::size_t n);
void logistic_weights_avx2(const double* p, double* w, std::size_t n);
#endif
}  // namespace detail

}  // namespace hoops::kernels
