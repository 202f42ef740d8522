#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace nsatk {

// Deterministic PRNG. One seeded stream per run, split per module by fixed
// labels so parallel or reordered work cannot change the draws a consumer
// sees. Uniforms are built from raw 53-bit mantissas rather than
// std::uniform_real_distribution to keep the byte stream independent of the
// standard library implementation.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : base_(mix(seed)), eng_(base_) {}

    // Independent substream for a module/op label. Splitting depends only on
    // the seed and the label, never on draws already made.
    Rng split(std::string_view label) const { return Rng(base_ ^ label_hash(label)); }

    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    std::uint64_t bits() { return eng_(); }

    int index(int n) { return static_cast<int>(bits() % static_cast<std::uint64_t>(n)); }

    double gaussian() {
        double u1 = uniform01();
        while (u1 <= 1e-300) u1 = uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    // Unit vector, isotropic via normalized Gaussian.
    std::vector<double> unit_vector(int dim) {
        std::vector<double> v(static_cast<std::size_t>(dim));
        double norm2 = 0.0;
        do {
            norm2 = 0.0;
            for (auto& c : v) {
                c = gaussian();
                norm2 += c * c;
            }
        } while (norm2 < 1e-12);
        const double inv = 1.0 / std::sqrt(norm2);
        for (auto& c : v) c *= inv;
        return v;
    }

    static std::uint64_t mix(std::uint64_t z) noexcept {
        z += 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    static std::uint64_t label_hash(std::string_view label) noexcept {
        std::uint64_t h = 0xcbf29ce484222325ull; // FNV-1a
        for (unsigned char c : label) {
            h ^= c;
            h *= 0x100000001b3ull;
        }
        return h;
    }

private:
    std::uint64_t base_;
    std::mt19937_64 eng_;
};

} // namespace nsatk
