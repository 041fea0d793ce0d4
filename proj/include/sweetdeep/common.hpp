#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sweetdeep {

// ── Errors ───────────────────────────────────────────────
// Each maps to a distinct CLI exit code (see tools/main.cpp).

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// Invalid parameters or configuration values.
struct ParamError : Error {
    using Error::Error;
};
// Missing or unreadable files.
struct IoError : Error {
    using Error::Error;
};
// Schema violations, version mismatches, corrupt files.
struct FormatError : Error {
    using Error::Error;
};
// Data preconditions: feature unavailable, split/rebalance/training errors.
struct DataError : Error {
    using Error::Error;
};

// ── Seeding ──────────────────────────────────────────────

// FNV-1a, used to derive independent per-stage RNG streams from one seed.
inline std::uint64_t fnv1a64(std::string_view s, std::uint64_t h = 0xcbf29ce484222325ull) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::uint64_t derive_seed(std::uint64_t base, std::string_view label) {
    char buf[16];
    for (int i = 0; i < 8; i++) buf[i] = char((base >> (8 * i)) & 0xff);
    return fnv1a64(label, fnv1a64(std::string_view(buf, 8)));
}

// ── RNG ──────────────────────────────────────────────────
// Thin deterministic generator. std::*_distribution output is
// implementation-defined, so the transforms live here: the same seed gives
// the same stream on every platform and library version.

class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), state_(split(seed)) {}

    // [0, 1)
    double uniform() { return double(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // [0, n)
    std::uint64_t uniform_int(std::uint64_t n) {
        std::uint64_t min = (0 - n) % n;
        std::uint64_t x;
        do {
            x = next();
        } while (x < min);
        return x % n;
    }

    // Standard normal via Box-Muller; second value cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 1.0 - uniform();  // (0, 1]
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double theta = 2.0 * M_PI * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

    double normal(double mean, double sd) { return mean + sd * normal(); }

    // Normal truncated to mean ± k·sd (rejection).
    double truncated_normal(double mean, double sd, double k) {
        if (sd <= 0.0) return mean;
        double x;
        do {
            x = normal();
        } while (std::fabs(x) > k);
        return mean + sd * x;
    }

    // Knuth's product method; fine for the small rates used here.
    int poisson(double lambda) {
        if (lambda <= 0.0) return 0;
        double limit = std::exp(-lambda);
        double p = 1.0;
        int n = 0;
        do {
            p *= uniform();
            n++;
        } while (p > limit);
        return n - 1;
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; i--) {
            std::size_t j = uniform_int(i);
            std::swap(v[i - 1], v[j]);
        }
    }

    // Independent child stream; order of fork() calls does not perturb
    // the parent sequence.
    Rng fork(std::string_view label) const { return Rng(derive_seed(seed_, label)); }

    std::uint64_t seed() const { return seed_; }

private:
    // splitmix64
    static std::uint64_t split(std::uint64_t& x) {
        x += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = x;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    std::uint64_t next() { return split(state_); }

    std::uint64_t seed_;
    std::uint64_t state_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// ── Small matrix (row-major) ─────────────────────────────

struct Matrix {
    int rows = 0, cols = 0;
    std::vector<double> a;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), a(std::size_t(r) * c, 0.0) {}

    double& operator()(int i, int j) { return a[std::size_t(i) * cols + j]; }
    double operator()(int i, int j) const { return a[std::size_t(i) * cols + j]; }

    std::span<double> row(int i) { return {a.data() + std::size_t(i) * cols, std::size_t(cols)}; }
    std::span<const double> row(int i) const {
        return {a.data() + std::size_t(i) * cols, std::size_t(cols)};
    }
};

// ── Robust statistics ────────────────────────────────────

inline double vec_mean(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / double(v.size());
}

// Sample standard deviation (N-1 denominator).
inline double vec_sample_sd(std::span<const double> v) {
    if (v.size() < 2) return 0.0;
    double m = vec_mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / double(v.size() - 1));
}

inline double vec_median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::size_t n = v.size();
    std::sort(v.begin(), v.end());
    if (n % 2 == 1) return v[n / 2];
    return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Median absolute deviation, unscaled.
inline double vec_mad(std::span<const double> v, double med) {
    std::vector<double> d(v.size());
    for (std::size_t i = 0; i < v.size(); i++) d[i] = std::fabs(v[i] - med);
    return vec_median(std::move(d));
}

// 1.4826 makes MAD a consistent sigma estimator for normal data.
inline constexpr double kMadToSigma = 1.4826;

}  // namespace sweetdeep
