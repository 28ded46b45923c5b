#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "ffl/elliptic_curve.hpp"
#include "ffl/errors.hpp"

namespace ffl {

/// Coordinate-sum tolerance for real inputs to decode().
inline constexpr double kSpanTolerance = 1e-9;

/// 1/2 (sqrt(n^2 + 4n + 8) + sqrt(n))
inline double covering_bound(std::size_t n) {
    if (n < 3) {
        throw DomainError("covering bound needs n >= 3");
    }
    const double x = static_cast<double>(n);
    return 0.5 * (std::sqrt(x * x + 4.0 * x + 8.0) + std::sqrt(x));
}

struct DecodeTrace {
    std::vector<double> input;      // v, re-projected onto the sum-zero hyperplane
    std::vector<std::int64_t> w1;   // coordinatewise rounding, ties to the floor
    std::int64_t S = 0;             // coordinate sum of w1
    std::size_t j = 0;              // sum_i a_i P_i = P_j
    std::vector<std::int64_t> w2;   // output lattice point
    double rounding_distance = 0.0; // ||v - w1||
    double distance = 0.0;          // ||v - w2||
};

namespace detail {

// Nearest integer, with half-integers going down.
inline std::int64_t round_half_down(double r) {
    // ceil(r - 1/2) without a libm call
    const double s = r - 0.5;
    auto a = static_cast<std::int64_t>(s);
    return static_cast<double>(a) < s ? a + 1 : a;
}

// Core of decode(); v must already sum to zero. Reuses the trace's buffers.
inline void decode_into(const PlaceTable& t, std::span<const double> v, DecodeTrace& tr) {
    const std::size_t n = t.size();
    tr.input.assign(v.begin(), v.end());
    tr.w1.resize(n);
    tr.w2.resize(n);
    std::int64_t S = 0;
    double err2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        std::int64_t a = round_half_down(v[i]);
        tr.w1[i] = a;
        S += a;
        double e = v[i] - static_cast<double>(a);
        err2 += e * e;
    }
    tr.S = S;
    tr.rounding_distance = std::sqrt(err2);
    tr.j = t.group_sum(tr.w1);

    std::int64_t tail = S - tr.w1[0]; // a_1 + ... + a_{n-1}
    std::copy(tr.w1.begin(), tr.w1.end(), tr.w2.begin());
    if (tr.j != 0) {
        tr.w2[0] = -tail + 1;
        tr.w2[tr.j] -= 1;
    } else {
        tr.w2[0] = -tail;
    }
    double d2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double e = v[i] - static_cast<double>(tr.w2[i]);
        d2 += e * e;
    }
    tr.distance = std::sqrt(d2);

    // invariants behind the bound
    const double nd = static_cast<double>(n);
    if (tr.rounding_distance > std::sqrt(nd / 4.0) + 1e-9) {
        throw TheoremViolation("rounding error exceeds sqrt(n/4)");
    }
    if (2 * std::abs(S) > static_cast<std::int64_t>(n)) {
        throw TheoremViolation("|S| exceeds n/2");
    }
    if (std::accumulate(tr.w2.begin(), tr.w2.end(), std::int64_t{0}) != 0 || t.group_sum(tr.w2) != 0) {
        throw TheoremViolation("decoded vector is not in the lattice");
    }
}

} // namespace detail

/// Rounds v, reads off the point P_j = sum a_i P_i and corrects coordinates 0
/// and j so that the result is a lattice point.
inline DecodeTrace decode(const PlaceTable& t, std::span<const double> v) {
    const std::size_t n = t.size();
    if (v.size() != n) {
        throw DomainError("vector length " + std::to_string(v.size()) + " != n = " + std::to_string(n));
    }
    double sum = 0.0;
    for (double x : v) {
        if (!std::isfinite(x)) {
            throw DomainError("non-finite coordinate");
        }
        sum += x;
    }
    if (std::abs(sum) >= kSpanTolerance) {
        throw DomainError("coordinates sum to " + std::to_string(sum) + ", expected 0");
    }
    std::vector<double> projected(v.begin(), v.end());
    const double mean = sum / static_cast<double>(n);
    if (mean != 0.0) {
        for (auto& x : projected) {
            x -= mean;
        }
    }
    DecodeTrace tr;
    detail::decode_into(t, projected, tr);
    return tr;
}

inline DecodeTrace decode(const PlaceTable& t, const std::vector<double>& v) {
    return decode(t, std::span<const double>(v));
}

struct CoveringReport {
    std::size_t n = 0;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    double bound = 0.0;          // analytic covering-radius bound
    double standard_bound = 0.0; // n - 1
    bool bound_below_standard = false;
    double max_observed = 0.0; // over random real vectors in the span
    double a_n1_max = 0.0;     // over random integer vectors of A_{n-1}
};

/// Decodes `samples` random span vectors (coordinates uniform in [-10, 10],
/// mean removed) and `samples` random A_{n-1} vectors (first n-1 coordinates
/// uniform in [-10, 10]); any distance above its bound is a theorem violation.
inline CoveringReport covering_report(const PlaceTable& t, std::size_t samples, std::uint64_t seed) {
    if (samples < 1) {
        throw DomainError("covering report needs at least one sample");
    }
    const std::size_t n = t.size();
    CoveringReport rep;
    rep.n = n;
    rep.samples = samples;
    rep.seed = seed;
    rep.bound = covering_bound(n);
    rep.standard_bound = static_cast<double>(n) - 1.0;
    rep.bound_below_standard = rep.bound < rep.standard_bound;

    std::mt19937_64 rng(seed);
    // 53 random bits scaled onto [-10, 10)
    auto real_coord = [](std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53 * 20.0 - 10.0; };
    std::uniform_int_distribution<std::int64_t> int_coord(-10, 10);
    const double root2 = std::sqrt(2.0);
    std::vector<double> v(n);
    DecodeTrace tr;

    for (std::size_t s = 0; s < samples; ++s) {
        double sum = 0.0;
        for (auto& x : v) {
            x = real_coord(rng);
            sum += x;
        }
        const double mean = sum / static_cast<double>(n);
        for (auto& x : v) {
            x -= mean;
        }
        detail::decode_into(t, v, tr);
        if (tr.distance > rep.bound + 1e-9) {
            throw TheoremViolation("span vector decoded at distance " + std::to_string(tr.distance) +
                                   " > bound " + std::to_string(rep.bound));
        }
        rep.max_observed = std::max(rep.max_observed, tr.distance);
    }

    for (std::size_t s = 0; s < samples; ++s) {
        std::int64_t sum = 0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            std::int64_t x = int_coord(rng);
            v[i] = static_cast<double>(x);
            sum += x;
        }
        v[n - 1] = static_cast<double>(-sum);
        detail::decode_into(t, v, tr);
        if (tr.distance > root2 + 1e-12) {
            throw TheoremViolation("A_{n-1} vector decoded at distance " + std::to_string(tr.distance) + " > sqrt(2)");
        }
        rep.a_n1_max = std::max(rep.a_n1_max, tr.distance);
    }
    return rep;
}

} // namespace ffl
