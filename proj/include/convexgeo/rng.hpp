#pragma once

#include <cstdint>
#include <random>

#include "convexgeo/vec.hpp"

namespace convexgeo {

// deterministic stream; double conversion done by hand so results do not
// depend on the standard library's distribution implementations
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t bits() { return eng_(); }

    // uniform in [0,1)
    double uniform() { return double(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    int uniform_int(int n) { return int(eng_() % std::uint64_t(n)); }

    Vec3 unit_vec3() {
        // rejection from the cube keeps the stream platform independent
        for (;;) {
            Vec3 v{uniform(-1, 1), uniform(-1, 1), uniform(-1, 1)};
            double n2 = norm2(v);
            if (n2 > 1e-6 && n2 <= 1.0) return v / std::sqrt(n2);
        }
    }

    Vec2 unit_vec2() {
        for (;;) {
            Vec2 v{uniform(-1, 1), uniform(-1, 1)};
            double n2 = norm2(v);
            if (n2 > 1e-6 && n2 <= 1.0) return v / std::sqrt(n2);
        }
    }

  private:
    std::mt19937_64 eng_;
};

}  // namespace convexgeo
