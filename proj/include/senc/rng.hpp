#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>

namespace senc {

/// Deterministic random source. All randomness in the library flows through
/// instances of this class; identical seed + identical call sequence gives
/// identical results. Uniform and Gaussian variates are derived from raw
/// 64-bit draws by hand so that output does not depend on the standard
/// library's distribution implementations.
///
/// Not safe for concurrent use from multiple threads; split() children are
/// independent and may be handed to other consumers.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    /// Derive an independent child generator. Advances this generator by one
    /// draw; the child's stream does not overlap with the parent's.
    Rng split();

    std::uint64_t next_u64();

    /// Uniform double in [0, 1).
    double next_double();

    /// Uniform integer in [0, n). Unbiased (rejection sampling). n must be > 0.
    std::size_t next_below(std::size_t n);

    /// Uniform double in the open interval (lo, hi); requires lo < hi.
    /// The result never equals hi; it can equal lo only through rounding when
    /// the interval spans just a few representable values.
    double next_open(double lo, double hi);

    /// Standard normal variate (Box-Muller, no state carried between calls).
    double next_gaussian();

    void save_state(std::ostream& out) const;
    void load_state(std::istream& in);

private:
    std::mt19937_64 gen_;
};

/// SplitMix64 finalizer; used for seed derivation.
std::uint64_t mix64(std::uint64_t x);

} // namespace senc
