#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace fbm {

/// Seeded stream of standard normals.
///
/// Engine: std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The engine is seeded with std::seed_seq over the 32-bit halves
/// of (seed, stream), so distinct stream ids give independent streams for
/// the same user seed. Uniforms take the top 53 bits plus half an ulp, which
/// keeps them strictly inside (0, 1). Normals are the inverse normal CDF of
/// one uniform each; no rejection step, so draw k always consumes engine
/// output k.
class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed, std::uint64_t stream = 0);

    double uniform();
    double normal();
    void fill(std::span<double> out);

private:
    std::mt19937_64 engine_;
};

/// Phi^{-1}(p) for p in (0, 1).
double standard_normal_quantile(double p);

/// Phi(x).
double standard_normal_cdf(double x);

}  // namespace fbm
