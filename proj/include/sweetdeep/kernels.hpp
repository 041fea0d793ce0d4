#pragma once

// Hot inner loops, each in two variants: a plain serial reference and an
// OpenMP version parallelized over independent output elements only. Every
// per-element accumulation runs in the same fixed order in both variants,
// so outputs are bit-identical regardless of thread count. The undecorated
// name dispatches to the OpenMP version for large inputs.

#include <span>
#include <vector>

#include "sweetdeep/common.hpp"

namespace sweetdeep::kernels {

// Number of threads the parallel variants use (0 = OpenMP default).
void set_threads(int n);
int max_threads();

// ── Gaussian accumulation (ECG beat trains) ──────────────

struct GaussTerm {
    double center;         // seconds
    double amplitude;      // mV
    double inv_two_sig2;   // 1 / (2 sigma^2)
};

// out[i] += sum of terms within `cutoff` seconds of t0 + i*dt.
// `terms` must be sorted by center.
void add_gaussians_serial(std::span<double> out, double t0, double dt,
                          std::span<const GaussTerm> terms, double cutoff);
void add_gaussians_parallel(std::span<double> out, double t0, double dt,
                            std::span<const GaussTerm> terms, double cutoff);
void add_gaussians(std::span<double> out, double t0, double dt,
                   std::span<const GaussTerm> terms, double cutoff);

// ── Dense layer products (batch MLP) ─────────────────────

// y = x * w^T + b       x: [n×k], w: [m×k], b: [m], y: [n×m]
void linear_serial(const Matrix& x, const Matrix& w, std::span<const double> b, Matrix& y);
void linear_parallel(const Matrix& x, const Matrix& w, std::span<const double> b, Matrix& y);
void linear(const Matrix& x, const Matrix& w, std::span<const double> b, Matrix& y);

// y = a * b             a: [n×k], b: [k×m], y: [n×m]
void matmul_serial(const Matrix& a, const Matrix& b, Matrix& y);
void matmul_parallel(const Matrix& a, const Matrix& b, Matrix& y);
void matmul(const Matrix& a, const Matrix& b, Matrix& y);

// y = a^T * b           a: [n×k], b: [n×m], y: [k×m]
void matmul_at_serial(const Matrix& a, const Matrix& b, Matrix& y);
void matmul_at_parallel(const Matrix& a, const Matrix& b, Matrix& y);
void matmul_at(const Matrix& a, const Matrix& b, Matrix& y);

// ── Sliding windows (QRS detection) ──────────────────────

// out[i] = sum of x[j] for j in [i-half_w, i+half_w], clipped to bounds.
void window_sum_serial(std::span<const double> x, int half_w, std::span<double> out);
void window_sum_parallel(std::span<const double> x, int half_w, std::span<double> out);
void window_sum(std::span<const double> x, int half_w, std::span<double> out);

// Symmetric FIR convolution with edge reflection; taps must have odd length.
void convolve_same_serial(std::span<const double> x, std::span<const double> taps,
                          std::span<double> out);
void convolve_same_parallel(std::span<const double> x, std::span<const double> taps,
                            std::span<double> out);
void convolve_same(std::span<const double> x, std::span<const double> taps,
                   std::span<double> out);

// ── k nearest neighbours (SMOTE) ─────────────────────────

// For each row of pts, the indices of its k nearest other rows by squared
// Euclidean distance, ties broken by lower index. Result is row-major [n×k].
std::vector<int> knn_indices_serial(const Matrix& pts, int k);
std::vector<int> knn_indices_parallel(const Matrix& pts, int k);
std::vector<int> knn_indices(const Matrix& pts, int k);

}  // namespace sweetdeep::kernels
