// Timing comparison of the serial reference kernels against their OpenMP
// variants, checking bit-identical outputs along the way.
//
//   ./sweetdeep_bench [repeats]

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "sweetdeep/kernels.hpp"

using namespace sweetdeep;
namespace k = sweetdeep::kernels;

namespace {

double now_ms() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch()).count();
}

template <typename F>
double time_best(F&& f, int repeats) {
    double best = 1e300;
    for (int r = 0; r < repeats; r++) {
        double t0 = now_ms();
        f();
        best = std::min(best, now_ms() - t0);
    }
    return best;
}

void row(const char* name, double serial_ms, double parallel_ms, bool exact) {
    std::printf("%-28s %10.2f %10.2f %9.2fx   %s\n", name, serial_ms, parallel_ms,
                serial_ms / parallel_ms, exact ? "bit-identical" : "MISMATCH");
}

bool same(const std::vector<double>& a, const std::vector<double>& b) { return a == b; }

}  // namespace

int main(int argc, char** argv) {
    int repeats = argc > 1 ? std::stoi(argv[1]) : 5;
    std::printf("threads: %d, repeats: %d\n\n", k::max_threads(), repeats);
    std::printf("%-28s %10s %10s %10s\n", "kernel", "serial ms", "omp ms", "speedup");

    Rng rng(1);

    {  // beat-train synthesis: 120 s at 500 Hz, ~130 beats x 5 waves
        std::vector<k::GaussTerm> terms;
        for (int b = 0; b < 130; b++)
            for (int w = 0; w < 5; w++)
                terms.push_back({0.45 + 0.9 * b + 0.05 * w, 0.5, 1.0 / (2.0 * 0.012 * 0.012)});
        std::vector<double> s(60000, 0.0), p(60000, 0.0);
        double ts = time_best([&] { std::fill(s.begin(), s.end(), 0.0);
                                    k::add_gaussians_serial(s, 0.0, 1.0 / 500.0, terms, 0.4); },
                              repeats);
        double tp = time_best([&] { std::fill(p.begin(), p.end(), 0.0);
                                    k::add_gaussians_parallel(p, 0.0, 1.0 / 500.0, terms, 0.4); },
                              repeats);
        row("gaussian beat train", ts, tp, same(s, p));
    }

    {  // dense layer: batch 4096 x [35 -> 64]
        Matrix x(4096, 35), w(64, 35), ys(4096, 64), yp(4096, 64);
        for (double& v : x.a) v = rng.normal();
        for (double& v : w.a) v = rng.normal();
        std::vector<double> b(64);
        for (double& v : b) v = rng.normal();
        double ts = time_best([&] { k::linear_serial(x, w, b, ys); }, repeats);
        double tp = time_best([&] { k::linear_parallel(x, w, b, yp); }, repeats);
        row("dense layer 4096x35->64", ts, tp, same(ys.a, yp.a));
    }

    {  // gradient product: a^T b with batch 4096
        Matrix a(4096, 64), b(4096, 35), ys(64, 35), yp(64, 35);
        for (double& v : a.a) v = rng.normal();
        for (double& v : b.a) v = rng.normal();
        double ts = time_best([&] { k::matmul_at_serial(a, b, ys); }, repeats);
        double tp = time_best([&] { k::matmul_at_parallel(a, b, yp); }, repeats);
        row("gradient product 64x35", ts, tp, same(ys.a, yp.a));
    }

    {  // moving-window integration: 10 minutes at 500 Hz, 150 ms window
        std::vector<double> x(300000), s(300000), p(300000);
        for (double& v : x) v = rng.normal();
        double ts = time_best([&] { k::window_sum_serial(x, 37, s); }, repeats);
        double tp = time_best([&] { k::window_sum_parallel(x, 37, p); }, repeats);
        row("window sum 300k x 75", ts, tp, same(s, p));
    }

    {  // smoothing convolution, 81 taps
        std::vector<double> x(300000), s(300000), p(300000), taps(81);
        for (double& v : x) v = rng.normal();
        for (double& v : taps) v = rng.uniform();
        double ts = time_best([&] { k::convolve_same_serial(x, taps, s); }, repeats);
        double tp = time_best([&] { k::convolve_same_parallel(x, taps, p); }, repeats);
        row("convolution 300k x 81", ts, tp, same(s, p));
    }

    {  // SMOTE neighbour search: 2000 minority instances, 35 features
        Matrix pts(2000, 35);
        for (double& v : pts.a) v = rng.normal();
        std::vector<int> is, ip;
        double ts = time_best([&] { is = k::knn_indices_serial(pts, 5); }, repeats);
        double tp = time_best([&] { ip = k::knn_indices_parallel(pts, 5); }, repeats);
        row("knn 2000x35 (k=5)", ts, tp, is == ip);
    }

    return 0;
}
