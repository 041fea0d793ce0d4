#include "sweetdeep/kernels.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sweetdeep::kernels {

namespace {
int g_threads = 0;

// Below this many output elements the fork/join overhead dominates.
constexpr std::size_t kParallelCutoff = 4096;

inline int threads_for(std::size_t work) {
#ifdef _OPENMP
    int t = g_threads > 0 ? g_threads : omp_get_max_threads();
    if (work < kParallelCutoff) return 1;
    return t;
#else
    (void)work;
    return 1;
#endif
}
}  // namespace

void set_threads(int n) { g_threads = n; }

int max_threads() {
#ifdef _OPENMP
    return g_threads > 0 ? g_threads : omp_get_max_threads();
#else
    return 1;
#endif
}

// ── Gaussian accumulation ────────────────────────────────

namespace {
inline double gauss_sum_at(double t, std::span<const GaussTerm> terms, double cutoff) {
    // terms sorted by center: binary search for the window around t
    const GaussTerm* lo = std::lower_bound(
        terms.data(), terms.data() + terms.size(), t - cutoff,
        [](const GaussTerm& g, double v) { return g.center < v; });
    double s = 0.0;
    for (const GaussTerm* g = lo; g != terms.data() + terms.size() && g->center <= t + cutoff; ++g) {
        double d = t - g->center;
        s += g->amplitude * std::exp(-d * d * g->inv_two_sig2);
    }
    return s;
}
}  // namespace

void add_gaussians_serial(std::span<double> out, double t0, double dt,
                          std::span<const GaussTerm> terms, double cutoff) {
    for (std::size_t i = 0; i < out.size(); i++)
        out[i] += gauss_sum_at(t0 + double(i) * dt, terms, cutoff);
}

void add_gaussians_parallel(std::span<double> out, double t0, double dt,
                            std::span<const GaussTerm> terms, double cutoff) {
    const std::int64_t n = std::int64_t(out.size());
#pragma omp parallel for schedule(static) num_threads(threads_for(out.size()))
    for (std::int64_t i = 0; i < n; i++)
        out[i] += gauss_sum_at(t0 + double(i) * dt, terms, cutoff);
}

void add_gaussians(std::span<double> out, double t0, double dt,
                   std::span<const GaussTerm> terms, double cutoff) {
    if (threads_for(out.size()) > 1)
        add_gaussians_parallel(out, t0, dt, terms, cutoff);
    else
        add_gaussians_serial(out, t0, dt, terms, cutoff);
}

// ── Dense layer products ─────────────────────────────────

namespace {
inline double dot(const double* a, const double* b, int n) {
    double s = 0.0;
    for (int i = 0; i < n; i++) s += a[i] * b[i];
    return s;
}
}  // namespace

void linear_serial(const Matrix& x, const Matrix& w, std::span<const double> b, Matrix& y) {
    for (int i = 0; i < x.rows; i++) {
        const double* xi = x.a.data() + std::size_t(i) * x.cols;
        double* yi = y.a.data() + std::size_t(i) * y.cols;
        for (int o = 0; o < w.rows; o++)
            yi[o] = b[o] + dot(xi, w.a.data() + std::size_t(o) * w.cols, x.cols);
    }
}

void linear_parallel(const Matrix& x, const Matrix& w, std::span<const double> b, Matrix& y) {
    const int nt = threads_for(std::size_t(x.rows) * w.rows);
#pragma omp parallel for schedule(static) num_threads(nt)
    for (int i = 0; i < x.rows; i++) {
        const double* xi = x.a.data() + std::size_t(i) * x.cols;
        double* yi = y.a.data() + std::size_t(i) * y.cols;
        for (int o = 0; o < w.rows; o++)
            yi[o] = b[o] + dot(xi, w.a.data() + std::size_t(o) * w.cols, x.cols);
    }
}

void linear(const Matrix& x, const Matrix& w, std::span<const double> b, Matrix& y) {
    if (threads_for(std::size_t(x.rows) * w.rows) > 1)
        linear_parallel(x, w, b, y);
    else
        linear_serial(x, w, b, y);
}

void matmul_serial(const Matrix& a, const Matrix& b, Matrix& y) {
    for (int i = 0; i < a.rows; i++)
        for (int j = 0; j < b.cols; j++) {
            double s = 0.0;
            for (int k = 0; k < a.cols; k++) s += a(i, k) * b(k, j);
            y(i, j) = s;
        }
}

void matmul_parallel(const Matrix& a, const Matrix& b, Matrix& y) {
    const int nt = threads_for(std::size_t(a.rows) * b.cols);
#pragma omp parallel for schedule(static) num_threads(nt)
    for (int i = 0; i < a.rows; i++)
        for (int j = 0; j < b.cols; j++) {
            double s = 0.0;
            for (int k = 0; k < a.cols; k++) s += a(i, k) * b(k, j);
            y(i, j) = s;
        }
}

void matmul(const Matrix& a, const Matrix& b, Matrix& y) {
    if (threads_for(std::size_t(a.rows) * b.cols) > 1)
        matmul_parallel(a, b, y);
    else
        matmul_serial(a, b, y);
}

void matmul_at_serial(const Matrix& a, const Matrix& b, Matrix& y) {
    for (int i = 0; i < a.cols; i++)
        for (int j = 0; j < b.cols; j++) {
            double s = 0.0;
            for (int n = 0; n < a.rows; n++) s += a(n, i) * b(n, j);
            y(i, j) = s;
        }
}

void matmul_at_parallel(const Matrix& a, const Matrix& b, Matrix& y) {
    const int nt = threads_for(std::size_t(a.cols) * b.cols);
#pragma omp parallel for schedule(static) num_threads(nt)
    for (int i = 0; i < a.cols; i++)
        for (int j = 0; j < b.cols; j++) {
            double s = 0.0;
            for (int n = 0; n < a.rows; n++) s += a(n, i) * b(n, j);
            y(i, j) = s;
        }
}

void matmul_at(const Matrix& a, const Matrix& b, Matrix& y) {
    if (threads_for(std::size_t(a.cols) * b.cols) > 1)
        matmul_at_parallel(a, b, y);
    else
        matmul_at_serial(a, b, y);
}

// ── Sliding windows ──────────────────────────────────────

namespace {
inline double window_sum_at(std::span<const double> x, int half_w, std::int64_t i) {
    std::int64_t lo = std::max<std::int64_t>(0, i - half_w);
    std::int64_t hi = std::min<std::int64_t>(std::int64_t(x.size()) - 1, i + half_w);
    double s = 0.0;
    for (std::int64_t j = lo; j <= hi; j++) s += x[j];
    return s;
}
}  // namespace

void window_sum_serial(std::span<const double> x, int half_w, std::span<double> out) {
    for (std::size_t i = 0; i < x.size(); i++)
        out[i] = window_sum_at(x, half_w, std::int64_t(i));
}

void window_sum_parallel(std::span<const double> x, int half_w, std::span<double> out) {
    const std::int64_t n = std::int64_t(x.size());
#pragma omp parallel for schedule(static) num_threads(threads_for(x.size() * std::size_t(half_w)))
    for (std::int64_t i = 0; i < n; i++) out[i] = window_sum_at(x, half_w, i);
}

void window_sum(std::span<const double> x, int half_w, std::span<double> out) {
    if (threads_for(x.size() * std::size_t(half_w)) > 1)
        window_sum_parallel(x, half_w, out);
    else
        window_sum_serial(x, half_w, out);
}

namespace {
inline double conv_at(std::span<const double> x, std::span<const double> taps, std::int64_t i) {
    const std::int64_t n = std::int64_t(x.size());
    const std::int64_t c = std::int64_t(taps.size()) / 2;
    double s = 0.0;
    for (std::int64_t k = 0; k < std::int64_t(taps.size()); k++) {
        std::int64_t j = i + k - c;
        if (j < 0) j = -j;                      // reflect
        if (j >= n) j = 2 * (n - 1) - j;
        if (j < 0) j = 0;                       // degenerate short inputs
        s += x[j] * taps[k];
    }
    return s;
}
}  // namespace

void convolve_same_serial(std::span<const double> x, std::span<const double> taps,
                          std::span<double> out) {
    for (std::size_t i = 0; i < x.size(); i++) out[i] = conv_at(x, taps, std::int64_t(i));
}

void convolve_same_parallel(std::span<const double> x, std::span<const double> taps,
                            std::span<double> out) {
    const std::int64_t n = std::int64_t(x.size());
#pragma omp parallel for schedule(static) num_threads(threads_for(x.size() * taps.size()))
    for (std::int64_t i = 0; i < n; i++) out[i] = conv_at(x, taps, i);
}

void convolve_same(std::span<const double> x, std::span<const double> taps,
                   std::span<double> out) {
    if (threads_for(x.size() * taps.size()) > 1)
        convolve_same_parallel(x, taps, out);
    else
        convolve_same_serial(x, taps, out);
}

// ── k nearest neighbours ─────────────────────────────────

namespace {
inline void knn_row(const Matrix& pts, int k, int i, int* out) {
    const int n = pts.rows;
    const int d = pts.cols;
    const double* pi = pts.a.data() + std::size_t(i) * d;
    // (distance, index) pairs; partial_sort keeps it cheap for small k
    std::vector<std::pair<double, int>> cand;
    cand.reserve(std::size_t(n) - 1);
    for (int j = 0; j < n; j++) {
        if (j == i) continue;
        const double* pj = pts.a.data() + std::size_t(j) * d;
        double s = 0.0;
        for (int c = 0; c < d; c++) {
            double diff = pi[c] - pj[c];
            s += diff * diff;
        }
        cand.emplace_back(s, j);
    }
    std::partial_sort(cand.begin(), cand.begin() + k, cand.end());
    for (int c = 0; c < k; c++) out[c] = cand[std::size_t(c)].second;
}
}  // namespace

std::vector<int> knn_indices_serial(const Matrix& pts, int k) {
    std::vector<int> out(std::size_t(pts.rows) * k);
    for (int i = 0; i < pts.rows; i++) knn_row(pts, k, i, out.data() + std::size_t(i) * k);
    return out;
}

std::vector<int> knn_indices_parallel(const Matrix& pts, int k) {
    std::vector<int> out(std::size_t(pts.rows) * k);
    const int nt = threads_for(std::size_t(pts.rows) * pts.rows);
#pragma omp parallel for schedule(static) num_threads(nt)
    for (int i = 0; i < pts.rows; i++) knn_row(pts, k, i, out.data() + std::size_t(i) * k);
    return out;
}

std::vector<int> knn_indices(const Matrix& pts, int k) {
    if (threads_for(std::size_t(pts.rows) * pts.rows) > 1) return knn_indices_parallel(pts, k);
    return knn_indices_serial(pts, k);
}

}  // namespace sweetdeep::kernels
