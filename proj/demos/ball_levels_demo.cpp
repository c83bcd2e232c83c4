// Prints the low-lying confined levels on the unit ball for a few masses and
// shows the two limits: levels drifting to m + mu_Dir/(2m) for large positive
// mass, and into the gap toward the boundary ladder n/R for large negative
// mass.

#include <cstdio>

#include "mitbag/ball.hpp"

int main() {
    using namespace mitbag;
    for (double mass : {0.0, 20.0, -20.0}) {
        const double e_max = std::abs(mass) + 6.0;
        const int kmax = [&] {
            for (int a = 1;; ++a) {
                if (channel_roots(RadialChannel::make(a), mass, 1.0, 1e-12, e_max).empty() &&
                    channel_roots(RadialChannel::make(-a), mass, 1.0, 1e-12, e_max).empty())
                    return a;
            }
        }();
        const auto spec = assemble_spectrum(mass, 1.0, e_max, kmax);
        std::printf("mass %+g, window (0, %g]:\n", mass, e_max);
        for (const auto& lv : spec.levels)
            std::printf("  E = %12.8f   x%d\n", lv.energy, lv.degeneracy);
    }
    return 0;
}
