#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "galactic/error.hpp"

namespace galactic {

// splitmix64 finalizer, used to derive independent substream seeds.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Deterministic RNG wrapper. The distributions are hand-rolled on top of
// mt19937_64 so that identical seeds give identical streams on every
// platform and standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n).
    int uniform_int(int n) {
        if (n <= 0) throw Error(errc::precondition, "uniform_int requires n > 0");
        return static_cast<int>((static_cast<unsigned __int128>(gen_()) *
                                 static_cast<unsigned __int128>(n)) >> 64);
    }

    // Box-Muller; consumes two uniforms per sample.
    double normal(double mean = 0.0, double stddev = 1.0) {
        double u1 = 1.0 - uniform01();  // (0, 1]
        double u2 = uniform01();
        double r = std::sqrt(-2.0 * std::log(u1));
        return mean + stddev * r * std::cos(2.0 * std::numbers::pi * u2);
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (int i = static_cast<int>(v.size()) - 1; i > 0; --i) {
            int j = uniform_int(i + 1);
            std::swap(v[static_cast<std::size_t>(i)], v[static_cast<std::size_t>(j)]);
        }
    }

    std::vector<int> permutation(int n) {
        std::vector<int> p(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i;
        shuffle(p);
        return p;
    }

    // Random permutation without fixed points, by rejection. Requires n >= 2.
    std::vector<int> derangement(int n) {
        if (n < 2) throw Error(errc::precondition, "derangement requires n >= 2");
        while (true) {
            std::vector<int> p = permutation(n);
            bool ok = true;
            for (int i = 0; i < n; ++i) {
                if (p[static_cast<std::size_t>(i)] == i) { ok = false; break; }
            }
            if (ok) return p;
        }
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace galactic
