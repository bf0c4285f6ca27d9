#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>

#include "xsw/core/error.hpp"

namespace xsw::sim {

/// The single generator behind a run. Sampling transforms are written out here so
/// traces do not depend on the standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : engine_() % n; }
    bool bernoulli(double p) { return uniform01() < p; }
    double exponential(double rate) { return -std::log1p(-uniform01()) / rate; }
    double normal() {
        // Box-Muller; u1 is kept away from zero.
        double u1 = 1.0 - uniform01();
        double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

private:
    std::mt19937_64 engine_;
};

inline constexpr double kZ95 = 1.6448536269514722;

struct Distribution {
    enum class Family { Fixed, Uniform, LogUniform, Exponential, LogNormal };

    Family family = Family::Fixed;
    // Fixed: a. Uniform / LogUniform: [a, b]. Exponential: mean a. LogNormal: mu a, sigma b.
    double a = 0.0;
    double b = 0.0;

    static Distribution fixed(double v) { return {Family::Fixed, v, 0.0}; }
    static Distribution uniform(double lo, double hi) { return {Family::Uniform, lo, hi}; }
    static Distribution log_uniform(double lo, double hi) { return {Family::LogUniform, lo, hi}; }
    static Distribution exponential(double mean) { return {Family::Exponential, mean, 0.0}; }
    static Distribution log_normal(double mu, double sigma) { return {Family::LogNormal, mu, sigma}; }
    /// Lognormal whose 95th percentile is `p95`.
    static Distribution log_normal_p95(double p95, double sigma) {
        return log_normal(std::log(p95) - kZ95 * sigma, sigma);
    }

    double sample(Rng& rng) const {
        switch (family) {
        case Family::Fixed: return a;
        case Family::Uniform: return rng.uniform(a, b);
        case Family::LogUniform: return std::exp(rng.uniform(std::log(a), std::log(b)));
        case Family::Exponential: return rng.exponential(1.0 / a);
        case Family::LogNormal: return std::exp(a + b * rng.normal());
        }
        return a;
    }

    double mean() const {
        switch (family) {
        case Family::Fixed: return a;
        case Family::Uniform: return (a + b) / 2;
        case Family::LogUniform: return (b - a) / (std::log(b) - std::log(a));
        case Family::Exponential: return a;
        case Family::LogNormal: return std::exp(a + b * b / 2);
        }
        return a;
    }

    /// Throws InvalidConfig naming `field` when the parameters are unusable for positive quantities.
    void validate(std::string_view field, bool allow_zero = false) const {
        auto fail = [&](const std::string& why) { throw Error(ErrorCode::InvalidConfig, std::string(field) + ": " + why); };
        if (!std::isfinite(a) || !std::isfinite(b)) fail("parameters must be finite");
        switch (family) {
        case Family::Fixed:
            if (a < 0 || (!allow_zero && a == 0)) fail("value must be positive");
            break;
        case Family::Uniform:
            if (a < 0 || b < a || (!allow_zero && b == 0)) fail("need 0 <= low <= high");
            break;
        case Family::LogUniform:
            if (a <= 0 || b < a) fail("need 0 < low <= high");
            break;
        case Family::Exponential:
            if (a <= 0) fail("mean must be positive");
            break;
        case Family::LogNormal:
            if (b < 0) fail("sigma must be non-negative");
            break;
        }
    }
};

constexpr std::string_view to_string(Distribution::Family f) noexcept {
    switch (f) {
    case Distribution::Family::Fixed: return "fixed";
    case Distribution::Family::Uniform: return "uniform";
    case Distribution::Family::LogUniform: return "log_uniform";
    case Distribution::Family::Exponential: return "exponential";
    case Distribution::Family::LogNormal: return "log_normal";
    }
    return "fixed";
}

} // namespace xsw::sim
