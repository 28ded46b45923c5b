#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "ffl/elliptic_curve.hpp"
#include "ffl/errors.hpp"
#include "ffl/function_field.hpp"
#include "ffl/integer_matrix.hpp"
#include "ffl/lattice_core.hpp"

namespace ffl {

/// Calls fn(v) for every nonzero integer vector of length n with coordinate
/// sum 0 and squared norm <= max_norm_squared.
inline void for_each_root_lattice_vector(std::size_t n, std::int64_t max_norm_squared,
                                         const std::function<void(const std::vector<std::int64_t>&)>& fn) {
    std::vector<std::int64_t> v(n, 0);
    std::function<void(std::size_t, std::int64_t, std::int64_t)> rec = [&](std::size_t i, std::int64_t budget,
                                                                          std::int64_t sum) {
        // the remaining coordinates can cancel at most `budget` in absolute value
        if (std::abs(sum) > budget) {
            return;
        }
        if (i == n) {
            if (sum == 0 && budget < max_norm_squared) {
                fn(v);
            }
            return;
        }
        auto m = static_cast<std::int64_t>(std::sqrt(static_cast<double>(budget)));
        while (m * m > budget) {
            --m;
        }
        for (std::int64_t x = -m; x <= m; ++x) {
            v[i] = x;
            rec(i + 1, budget - x * x, sum + x);
        }
        v[i] = 0;
    };
    rec(0, max_norm_squared, 0);
}

struct MinimumDistance {
    std::int64_t d_squared = 0;
    double d = 0.0;
    DivisorVector witness; // a lattice vector of squared norm d_squared
};

/// d^2 = 4 for n >= 4 and 6 for n = 3, confirmed by exhausting every shorter
/// vector of A_{n-1} and exhibiting a lattice vector at that norm.
inline MinimumDistance minimum_distance(const PlaceTable& t, const LatticeBasis& b) {
    const std::size_t n = t.size();
    if (n < 3) {
        throw DomainError("minimum distance needs n >= 3");
    }
    MinimumDistance md;
    md.d_squared = n == 3 ? 6 : 4;
    md.d = std::sqrt(static_cast<double>(md.d_squared));

    for_each_root_lattice_vector(n, md.d_squared - 1, [&](const std::vector<std::int64_t>& v) {
        if (contains(t, b, std::span<const std::int64_t>(v))) {
            throw TheoremViolation("lattice vector shorter than the minimum distance: " + DivisorVector(v).to_string());
        }
    });

    if (n == 3) {
        md.witness = DivisorVector(std::vector<std::int64_t>{-2, 1, 1});
    } else {
        for (std::size_t i = 1; i < n && md.witness.size() == 0; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                std::size_t r = t.add(i, j);
                if (r != 0 && r != i && r != j) {
                    DivisorVector w(n);
                    w[i] = 1;
                    w[j] = 1;
                    w[r] = -1;
                    w[0] = -1;
                    md.witness = std::move(w);
                    break;
                }
            }
        }
    }
    if (md.witness.size() == 0 || md.witness.norm_squared() != md.d_squared || !contains(t, b, md.witness)) {
        throw TheoremViolation("no lattice vector found at the minimum distance");
    }
    return md;
}

/// Sorted, duplicate-free set of minimal vectors.
class MinimalVectorSet {
  public:
    MinimalVectorSet(std::size_t n, std::int64_t d_squared, std::vector<DivisorVector> vectors)
        : n_(n), d_squared_(d_squared), vectors_(std::move(vectors)) {
        std::sort(vectors_.begin(), vectors_.end());
        vectors_.erase(std::unique(vectors_.begin(), vectors_.end()), vectors_.end());
    }

    std::size_t dimension() const { return n_; }
    std::int64_t d_squared() const { return d_squared_; }
    std::size_t count() const { return vectors_.size(); }
    const std::vector<DivisorVector>& vectors() const { return vectors_; }

    bool contains(const DivisorVector& v) const { return std::binary_search(vectors_.begin(), vectors_.end(), v); }

    Matrix<std::int64_t> matrix() const {
        Matrix<std::int64_t> m(0, n_);
        for (const auto& v : vectors_) {
            m.append_row(v.coeffs());
        }
        return m;
    }

  private:
    std::size_t n_;
    std::int64_t d_squared_;
    std::vector<DivisorVector> vectors_;
};

/// n >= 4: every e_P + e_Q - e_R - e_S over distinct {P,Q} != {R,S} with
/// P + Q = R + S. n = 3: the six permutations of (-2, 1, 1) up to sign.
inline MinimalVectorSet minimal_vectors(const PlaceTable& t) {
    const std::size_t n = t.size();
    if (n < 3) {
        throw DomainError("minimal vectors need n >= 3");
    }
    std::vector<DivisorVector> out;
    if (n == 3) {
        // places {Q_inf, P, Q} with Q = 2P
        for (auto v : {std::vector<std::int64_t>{-2, 1, 1}, {1, 1, -2}, {1, -2, 1}}) {
            DivisorVector d(v);
            out.push_back(d);
            out.push_back(-d);
        }
        return MinimalVectorSet(n, 6, std::move(out));
    }
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = p + 1; q < n; ++q) {
            const std::size_t a = t.add(p, q);
            for (std::size_t r = 0; r < n; ++r) {
                if (r == p || r == q) {
                    continue;
                }
                for (std::size_t s = r + 1; s < n; ++s) {
                    if (s == p || s == q || t.add(r, s) != a) {
                        continue;
                    }
                    DivisorVector v(n);
                    v[p] = 1;
                    v[q] = 1;
                    v[r] = -1;
                    v[s] = -1;
                    out.push_back(std::move(v));
                }
            }
        }
    }
    return MinimalVectorSet(n, 4, std::move(out));
}

/// (n/e) (n-e)(n-e-2)/4 + (n - n/e) n(n-2)/4
inline std::int64_t minimal_count_formula(std::int64_t n, std::int64_t epsilon) {
    if (epsilon <= 0 || n % epsilon != 0) {
        throw DomainError("epsilon = " + std::to_string(epsilon) + " does not divide n = " + std::to_string(n));
    }
    std::int64_t image = n / epsilon;
    std::int64_t num = image * (n - epsilon) * (n - epsilon - 2) + (n - image) * n * (n - 2);
    if (num % 4 != 0) {
        throw DomainError("minimal-vector count formula is not integral for n = " + std::to_string(n) +
                          ", epsilon = " + std::to_string(epsilon));
    }
    return num / 4;
}

inline bool is_well_rounded(const MinimalVectorSet& m) {
    if (m.count() == 0 || m.dimension() < 2) {
        return false;
    }
    return rational_rank(m.matrix()) == m.dimension() - 1;
}

inline bool generated_by_minimal(const MinimalVectorSet& m, const LatticeBasis& b) {
    return hnf(m.vectors(), m.dimension()) == b.matrix();
}

struct DecompositionTerm {
    int sign; // +1 or -1
    DivisorVector vector;
};

struct Decomposition {
    DivisorVector target;
    DecompositionTerm first;
    DecompositionTerm second;
};

/// Writes a non-minimal generator +-(P + Q - R - Q_inf) as a sum or difference
/// of two minimal vectors, choosing the auxiliary place U with the smallest
/// eligible index.
inline Decomposition decompose_generator(const PlaceTable& t, const MinimalVectorSet& m, const DivisorVector& v) {
    const std::size_t n = t.size();
    if (n < 5) {
        throw DomainError("generator decomposition needs n >= 5");
    }
    if (v.size() != n) {
        throw DomainError("vector length mismatch");
    }
    if (m.contains(v)) {
        throw DomainError("vector " + v.to_string() + " is already minimal");
    }
    auto unit = [n](std::size_t i) { return DivisorVector::unit(n, i); };

    // P = Q: some affine coordinate is +-2
    for (std::size_t p = 1; p < n; ++p) {
        if (std::abs(v[p]) != 2) {
            continue;
        }
        const int sgn = v[p] < 0 ? 1 : -1; // sgn * v = -2P + R + Q_inf
        const std::size_t r = t.add(p, p);
        DivisorVector w = -2 * unit(p) + unit(r) + unit(0);
        if (sgn * v != w) {
            throw DomainError("vector " + v.to_string() + " is not a generator");
        }
        std::size_t u = 1;
        while (u < n && (u == p || u == r || u == t.negate(p))) {
            ++u;
        }
        if (u == n) {
            throw DomainError("no auxiliary place available");
        }
        const std::size_t s = t.add(p, u);
        DivisorVector t1 = -1 * unit(p) - unit(u) + unit(s) + unit(0);
        DivisorVector t2 = unit(p) + unit(s) - unit(r) - unit(u);
        if (!m.contains(t1) || !m.contains(t2) || t1 - t2 != w) {
            throw TheoremViolation("doubling-case decomposition produced a non-minimal term");
        }
        return {v, {sgn, t1}, {-sgn, t2}};
    }

    // R = Q_inf: sgn * v = P + Q - 2 Q_inf with P < Q
    if (std::abs(v[0]) == 2) {
        const int sgn = v[0] < 0 ? 1 : -1;
        DivisorVector w = sgn * v;
        std::vector<std::size_t> pos;
        for (std::size_t i = 1; i < n; ++i) {
            if (w[i] == 1) {
                pos.push_back(i);
            } else if (w[i] != 0) {
                pos.assign(3, 0);
                break;
            }
        }
        if (pos.size() != 2 || t.add(pos[0], pos[1]) != 0) {
            throw DomainError("vector " + v.to_string() + " is not a generator");
        }
        const std::size_t p = pos[0];
        const std::size_t q = pos[1];
        const std::size_t two_p = t.add(p, p);
        std::size_t u = 1;
        while (u < n && (u == p || u == q || u == two_p)) {
            ++u;
        }
        if (u == n) {
            throw DomainError("no auxiliary place available");
        }
        const std::size_t s = t.add(q, u);
        DivisorVector t1 = unit(q) + unit(u) - unit(s) - unit(0);
        DivisorVector t2 = unit(p) + unit(s) - unit(u) - unit(0);
        if (!m.contains(t1) || !m.contains(t2) || t1 + t2 != w) {
            throw TheoremViolation("inverse-pair decomposition produced a non-minimal term");
        }
        return {v, {sgn, t1}, {sgn, t2}};
    }
    throw DomainError("vector " + v.to_string() + " is not a non-minimal generator");
}

struct PackingDensity {
    double value = 0.0;
    bool exceeds_one = false; // impossible for a genuine packing; flags bad input
};

/// omega_k (d/2)^k / det with omega_k the volume of the unit k-ball.
inline PackingDensity packing_density(std::size_t rank, double d, double det) {
    if (rank == 0 || d <= 0.0 || det <= 0.0) {
        throw DomainError("packing density needs positive rank, distance and determinant");
    }
    const double k = static_cast<double>(rank);
    const double omega = std::pow(std::numbers::pi, k / 2.0) / std::tgamma(k / 2.0 + 1.0);
    PackingDensity out;
    out.value = omega * std::pow(d / 2.0, k) / det;
    out.exceeds_one = out.value > 1.0;
    return out;
}

} // namespace ffl
