#ifndef TTV_RNG_HPP
#define TTV_RNG_HPP

#include <cstdint>
#include <random>
#include <vector>

namespace ttv {

// Deterministic uniform stream. mt19937_64 output is pinned by the standard,
// so a given seed yields identical draws on every platform; the 53-bit
// mantissa construction keeps the doubles reproducible as well.
class SeededUniform {
public:
    explicit SeededUniform(std::uint64_t seed) : engine_(seed) {}

    // Uniform in [0, 1).
    double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    std::vector<double> draw(std::size_t n) {
        std::vector<double> out(n);
        for (auto& v : out) v = next();
        return out;
    }

private:
    std::mt19937_64 engine_;
};

} // namespace ttv

#endif // TTV_RNG_HPP
