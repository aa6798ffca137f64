#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace routeopt {

/// splitmix64 finalizer; used to decorrelate derived seeds.
inline std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d4a2c0d1b3e8f5ULL;
    return z ^ (z >> 31);
}

/// Deterministic RNG with self-contained distributions.  std::mt19937_64 has
/// a portable bit stream, but the standard distributions do not, so uniform
/// and normal draws are implemented here to keep runs byte-identical across
/// toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(mix64(seed)) {}

    /// Child generator for an independent substream (e.g. one per worker).
    Rng fork(std::uint64_t salt) { return Rng(mix64(gen_() ^ mix64(salt))); }

    std::uint64_t bits() { return gen_(); }

    /// Uniform on [0, 1) with 53-bit resolution.
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer on [lo, hi] inclusive; unbiased via rejection.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        if (span == 0) return static_cast<std::int64_t>(gen_());  // full range
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
        std::uint64_t draw;
        do {
            draw = gen_();
        } while (draw >= limit);
        return lo + static_cast<std::int64_t>(draw % span);
    }

    std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(n) - 1)); }

    bool bernoulli(double p) { return uniform01() < p; }

    /// Standard normal via Box-Muller (no cached spare: keeps the stream
    /// position independent of call history).
    double normal() {
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    double normal(double mean, double sd) { return mean + sd * normal(); }

    double lognormal(double mu, double sigma) { return std::exp(normal(mu, sigma)); }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[index(i)]);
    }

    /// Random point on the unit simplex (flat Dirichlet) of dimension n.
    std::vector<double> simplex(std::size_t n) {
        std::vector<double> w(n);
        double sum = 0.0;
        for (auto& x : w) {
            double u = uniform01();
            while (u <= 0.0) u = uniform01();
            x = -std::log(u);
            sum += x;
        }
        for (auto& x : w) x /= sum;
        return w;
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace routeopt
