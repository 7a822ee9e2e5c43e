#pragma once

#include <complex>
#include <cstdint>

namespace tas {

struct RngSpec {
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;
};

/// xoshiro256** seeded through splitmix64 from (seed, stream_id).
///
/// Uniforms take the top 53 bits of each output; complex normals use the
/// Box-Muller transform on two consecutive uniforms. Only integer arithmetic and
/// correctly rounded IEEE operations plus libm log/sqrt/cos/sin are involved, so a
/// given RngSpec yields the same stream on every platform with a conforming libm.
class Rng {
public:
    explicit Rng(RngSpec spec);

    std::uint64_t next_u64();

    /// Uniform on [0, 1).
    double uniform();

    /// Circularly-symmetric CN(0, 1): real and imaginary parts N(0, 1/2).
    std::complex<double> complex_normal();

    const RngSpec& spec() const noexcept { return spec_; }

private:
    RngSpec spec_;
    std::uint64_t s_[4];
};

}  // namespace tas
