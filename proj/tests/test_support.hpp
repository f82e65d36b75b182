#pragma once

#include <cstdint>
#include <random>

#include "larmor/core/types.hpp"

namespace larmor_test {

/// Seeded generator for hand-rolled property tests; each test case owns one.
class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : engine_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }

    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }

    larmor::Vec3 vec3(double lo, double hi) { return {uniform(lo, hi), uniform(lo, hi), uniform(lo, hi)}; }

    larmor::Vec6 vec6(double lo, double hi) {
        larmor::Vec6 v;
        for (int i = 0; i < 6; ++i) v(i) = uniform(lo, hi);
        return v;
    }

private:
    std::mt19937_64 engine_;
};

template <typename A, typename B>
double max_abs_diff(const A& a, const B& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace larmor_test
