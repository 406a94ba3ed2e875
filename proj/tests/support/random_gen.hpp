#pragma once

#include "lgtrop/novikov.hpp"

#include <random>

namespace lgtrop::testing {

// Deterministic random sources for property tests. Every test seeds its own
// engine so failures reproduce from the test name alone.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }

    Rational rational(int num_lo, int num_hi, int den_hi) {
        int den = uniform_int(1, den_hi);
        int num = uniform_int(num_lo, num_hi);
        return Rational(num, den);
    }

    Complex complex_unit_box() {
        double re = uniform(-1.0, 1.0);
        double im = uniform(-1.0, 1.0);
        if (std::abs(re) < 0.1 && std::abs(im) < 0.1) re += 0.5;
        return Complex(re, im);
    }

    NovikovScalar scalar(int max_terms = 4, int num_lo = -4, int num_hi = 6, int den_hi = 4) {
        int n = uniform_int(1, max_terms);
        std::vector<NovikovTerm> terms;
        terms.reserve(n);
        for (int i = 0; i < n; ++i) {
            terms.push_back({rational(num_lo, num_hi, den_hi), complex_unit_box()});
        }
        return NovikovScalar::from_terms(std::move(terms));
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

}  // namespace lgtrop::testing
