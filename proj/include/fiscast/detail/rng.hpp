#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

// Deterministic random generation for simulations and Monte-Carlo
// diagnostics. The normal sampler is hand-rolled (Box-Muller on mt19937_64
// output) so draws are identical across standard libraries.

namespace fiscast::detail {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() {
        // 53-bit uniform in (0, 1)
        return (static_cast<double>(engine_() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
    }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 6.283185307179586 * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    std::vector<double> normals(std::size_t n, double mean = 0.0, double sd = 1.0) {
        std::vector<double> out(n);
        for (auto& v : out) v = mean + sd * normal();
        return out;
    }

    /// Random walk of length n: cumulative sum of N(drift, sd) increments
    /// starting from start.
    std::vector<double> random_walk(std::size_t n, double start = 0.0, double sd = 1.0,
                                    double drift = 0.0) {
        std::vector<double> out(n);
        double level = start;
        for (std::size_t i = 0; i < n; ++i) {
            level += drift + sd * normal();
            out[i] = level;
        }
        return out;
    }

    /// Stationary AR(1) with coefficient phi, innovation sd, zero mean.
    std::vector<double> ar1(std::size_t n, double phi, double sd = 1.0) {
        std::vector<double> out(n);
        double prev = normal() * sd / std::sqrt(1.0 - phi * phi);
        for (std::size_t i = 0; i < n; ++i) {
            prev = phi * prev + sd * normal();
            out[i] = prev;
        }
        return out;
    }

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace fiscast::detail
