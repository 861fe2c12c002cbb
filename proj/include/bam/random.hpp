#ifndef BAM_RANDOM_HPP
#define BAM_RANDOM_HPP

#include <cstdint>
#include <random>

namespace bam {

/// Seedable generator with platform-independent output.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The standard distributions are implementation-defined, so every
/// derived variate is computed here instead:
///  - uniform(): top 53 bits of one engine draw, scaled by 2^-53, in [0, 1).
///  - index(n): uniform() * n, truncated.
///  - normal(): Box-Muller on two uniform() draws, no caching of the pair.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : m_engine(seed) {}

    std::uint64_t next() { return m_engine(); }
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    std::size_t index(std::size_t n);
    double normal();

private:
    std::mt19937_64 m_engine;
};

} // namespace bam

#endif // BAM_RANDOM_HPP
