#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ffl/errors.hpp"
#include "ffl/finite_field.hpp"

namespace ffl {

namespace detail {

// Dense polynomials over F_p, coefficient i is the x^i term.
using Poly = std::vector<std::int64_t>;

inline void poly_trim(Poly& f) {
    while (!f.empty() && f.back() == 0) {
        f.pop_back();
    }
}

inline std::int64_t mod_inverse(std::int64_t a, std::int64_t p) {
    std::int64_t r0 = p, r1 = ((a % p) + p) % p, s0 = 0, s1 = 1;
    while (r1 != 0) {
        std::int64_t q = r0 / r1;
        std::int64_t t = r0 - q * r1;
        r0 = r1;
        r1 = t;
        t = s0 - q * s1;
        s0 = s1;
        s1 = t;
    }
    return ((s0 % p) + p) % p;
}

// Remainder of f modulo a nonzero g.
inline Poly poly_mod(Poly f, const Poly& g, std::int64_t p) {
    poly_trim(f);
    std::int64_t lead_inv = mod_inverse(g.back(), p);
    while (f.size() >= g.size()) {
        std::int64_t coef = (f.back() * lead_inv) % p;
        std::size_t shift = f.size() - g.size();
        for (std::size_t i = 0; i < g.size(); ++i) {
            f[i + shift] = ((f[i + shift] - coef * g[i]) % p + p) % p;
        }
        poly_trim(f);
    }
    return f;
}

inline Poly poly_gcd(Poly a, Poly b, std::int64_t p) {
    poly_trim(a);
    poly_trim(b);
    while (!b.empty()) {
        Poly r = poly_mod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

} // namespace detail

/// A rational point: either the point at infinity (the place Q_inf, group identity)
/// or an affine pair.
class CurvePoint {
  public:
    static CurvePoint infinity() { return CurvePoint{}; }
    static CurvePoint affine(FieldElement x, FieldElement y) { return CurvePoint{x, y}; }

    bool is_infinity() const { return infinity_; }
    const FieldElement& x() const { return x_; }
    const FieldElement& y() const { return y_; }

    bool operator==(const CurvePoint& o) const {
        if (infinity_ || o.infinity_) {
            return infinity_ == o.infinity_;
        }
        return x_ == o.x_ && y_ == o.y_;
    }

    // Infinity first, then lexicographic by integer representatives of (x, y).
    bool operator<(const CurvePoint& o) const {
        if (infinity_ != o.infinity_) {
            return infinity_;
        }
        if (infinity_) {
            return false;
        }
        if (x_.value() != o.x_.value()) {
            return x_.value() < o.x_.value();
        }
        return y_.value() < o.y_.value();
    }

    std::string to_string() const {
        if (infinity_) {
            return "O";
        }
        return "(" + std::to_string(x_.value()) + "," + std::to_string(y_.value()) + ")";
    }

  private:
    CurvePoint() = default;
    CurvePoint(FieldElement x, FieldElement y) : infinity_(false), x_(x), y_(y) {}

    bool infinity_ = true;
    FieldElement x_;
    FieldElement y_;
};

// y^2 = a3 x^3 + a2 x^2 + a1 x + a0 with f square-free of degree three.
class Curve {
  public:
    Curve(PrimeField field, std::int64_t a3, std::int64_t a2, std::int64_t a1, std::int64_t a0)
        : field_(std::move(field)),
          a3_(field_.element(a3)),
          a2_(field_.element(a2)),
          a1_(field_.element(a1)),
          a0_(field_.element(a0)) {
        if (a3_.is_zero()) {
            throw DomainError("cubic has degree < 3 (leading coefficient is 0 mod " +
                              std::to_string(field_.modulus()) + ")");
        }
        const std::int64_t p = field_.modulus();
        detail::Poly f{a0_.value(), a1_.value(), a2_.value(), a3_.value()};
        detail::Poly df{a1_.value(), (2 * a2_.value()) % p, (3 * a3_.value()) % p};
        if (detail::poly_gcd(f, df, p).size() > 1) {
            throw DomainError("f is not square-free");
        }
    }

    const PrimeField& field() const { return field_; }
    std::int64_t modulus() const { return field_.modulus(); }

    /// (a3, a2, a1, a0) as residues in [0, p).
    std::array<std::int64_t, 4> coefficients() const {
        return {a3_.value(), a2_.value(), a1_.value(), a0_.value()};
    }
    const FieldElement& a3() const { return a3_; }
    const FieldElement& a2() const { return a2_; }
    const FieldElement& a1() const { return a1_; }
    const FieldElement& a0() const { return a0_; }

    FieldElement f(const FieldElement& x) const { return ((a3_ * x + a2_) * x + a1_) * x + a0_; }

    FieldElement f_prime(const FieldElement& x) const {
        FieldElement three = field_.element(3);
        FieldElement two = field_.element(2);
        return (three * a3_ * x + two * a2_) * x + a1_;
    }

    bool contains(const CurvePoint& pt) const {
        if (pt.is_infinity()) {
            return true;
        }
        if (pt.x().modulus() != modulus() || pt.y().modulus() != modulus()) {
            return false;
        }
        return pt.y() * pt.y() == f(pt.x());
    }

    /// Genus of the function field; always 1 for a square-free cubic model.
    static constexpr int genus() { return 1; }

  private:
    PrimeField field_;
    FieldElement a3_, a2_, a1_, a0_;
};

inline Curve curve_new(const PrimeField& field, std::int64_t a3, std::int64_t a2, std::int64_t a1,
                       std::int64_t a0) {
    return Curve(field, a3, a2, a1, a0);
}

namespace detail {
inline void require_on_curve(const Curve& c, const CurvePoint& pt) {
    if (!c.contains(pt)) {
        throw DomainError("point " + pt.to_string() + " is not on the curve");
    }
}
} // namespace detail

inline CurvePoint point_negate(const Curve& c, const CurvePoint& pt) {
    detail::require_on_curve(c, pt);
    if (pt.is_infinity()) {
        return pt;
    }
    return CurvePoint::affine(pt.x(), -pt.y());
}

/// Chord-tangent addition for the general cubic: the three x-coordinates on a
/// line y = lambda x + nu sum to (lambda^2 - a2) / a3.
inline CurvePoint point_add(const Curve& c, const CurvePoint& P, const CurvePoint& Q) {
    detail::require_on_curve(c, P);
    detail::require_on_curve(c, Q);
    if (P.is_infinity()) {
        return Q;
    }
    if (Q.is_infinity()) {
        return P;
    }
    FieldElement lambda;
    if (P.x() == Q.x()) {
        if (P.y() != Q.y() || P.y().is_zero()) {
            return CurvePoint::infinity();
        }
        lambda = c.f_prime(P.x()) / (c.field().element(2) * P.y());
    } else {
        lambda = (Q.y() - P.y()) / (Q.x() - P.x());
    }
    FieldElement x3 = (lambda * lambda - c.a2()) / c.a3() - P.x() - Q.x();
    FieldElement y_on_line = lambda * (x3 - P.x()) + P.y();
    return CurvePoint::affine(x3, -y_on_line);
}

/// k-fold sum; negative k multiplies the negation.
inline CurvePoint scalar_mul(const Curve& c, std::int64_t k, const CurvePoint& P) {
    detail::require_on_curve(c, P);
    CurvePoint base = k < 0 ? point_negate(c, P) : P;
    std::uint64_t m = k < 0 ? static_cast<std::uint64_t>(-(k + 1)) + 1 : static_cast<std::uint64_t>(k);
    CurvePoint acc = CurvePoint::infinity();
    while (m != 0) {
        if (m & 1U) {
            acc = point_add(c, acc, base);
        }
        base = point_add(c, base, base);
        m >>= 1U;
    }
    return acc;
}

/// m(P, Q): the line a x + b y + c through P and Q (tangent when P = Q),
/// x - x(P) when Q = -P, the constant 1 when either point is Q_inf.
struct LineFunction {
    enum class Kind { Constant1, Vertical, Chord };

    Kind kind = Kind::Constant1;
    FieldElement a, b, c;

    FieldElement evaluate(const CurvePoint& pt) const {
        // only meaningful for affine points
        return a * pt.x() + b * pt.y() + c;
    }
};

inline LineFunction line_m(const Curve& curve, const CurvePoint& P, const CurvePoint& Q) {
    detail::require_on_curve(curve, P);
    detail::require_on_curve(curve, Q);
    const PrimeField& F = curve.field();
    LineFunction line;
    if (P.is_infinity() || Q.is_infinity()) {
        line.kind = LineFunction::Kind::Constant1;
        line.a = F.zero();
        line.b = F.zero();
        line.c = F.one();
        return line;
    }
    if (P.x() == Q.x() && (P.y() != Q.y() || P.y().is_zero())) {
        line.kind = LineFunction::Kind::Vertical;
        line.a = F.one();
        line.b = F.zero();
        line.c = -P.x();
        return line;
    }
    FieldElement lambda = P.x() == Q.x() ? curve.f_prime(P.x()) / (F.element(2) * P.y())
                                         : (Q.y() - P.y()) / (Q.x() - P.x());
    // y - lambda x - (y_P - lambda x_P) = 0
    line.kind = LineFunction::Kind::Chord;
    line.a = -lambda;
    line.b = F.one();
    line.c = lambda * P.x() - P.y();
    return line;
}

/// Affine zeros of a line function on the curve, listed with intersection
/// multiplicity (from the root structure of the restricted cubic).
inline std::vector<CurvePoint> line_zeros(const Curve& curve, const LineFunction& line) {
    const PrimeField& F = curve.field();
    const std::int64_t p = F.modulus();
    std::vector<CurvePoint> zeros;
    switch (line.kind) {
    case LineFunction::Kind::Constant1:
        return zeros;
    case LineFunction::Kind::Vertical: {
        FieldElement x0 = -line.c / line.a;
        auto ys = F.square_roots(curve.f(x0));
        for (const auto& y : ys) {
            zeros.push_back(CurvePoint::affine(x0, y));
        }
        if (ys.size() == 1) {
            zeros.push_back(zeros.front());
        }
        return zeros;
    }
    case LineFunction::Kind::Chord:
        break;
    }
    if (line.b.is_zero()) {
        throw DomainError("chord line without y term");
    }
    // y = s x + t on the line
    FieldElement s = -line.a / line.b;
    FieldElement t = -line.c / line.b;
    // f(x) - (s x + t)^2, low degree first
    detail::Poly g{(curve.a0() - t * t).value(), (curve.a1() - F.element(2) * s * t).value(),
                   (curve.a2() - s * s).value(), curve.a3().value()};
    for (std::int64_t xv = 0; xv < p && g.size() > 1; ++xv) {
        // strip every factor (x - xv)
        while (g.size() > 1) {
            std::int64_t acc = 0;
            detail::Poly quotient(g.size() - 1);
            for (std::size_t i = g.size(); i-- > 1;) {
                acc = (acc * xv + g[i]) % p;
                quotient[i - 1] = acc;
            }
            acc = (acc * xv + g[0]) % p;
            if (acc != 0) {
                break;
            }
            g = std::move(quotient);
            FieldElement x = F.element(xv);
            zeros.push_back(CurvePoint::affine(x, s * x + t));
        }
    }
    return zeros;
}

/// The rational places P_0 = Q_inf, P_1, ..., P_{n-1} in a fixed order, with the
/// group law cached on indices.
class PlaceTable {
  public:
    explicit PlaceTable(Curve curve) : curve_(std::move(curve)) {
        const PrimeField& F = curve_.field();
        places_.push_back(CurvePoint::infinity());
        for (std::int64_t xv = 0; xv < F.modulus(); ++xv) {
            FieldElement x = F.element(xv);
            for (const auto& y : F.square_roots(curve_.f(x))) {
                places_.push_back(CurvePoint::affine(x, y));
            }
        }
        std::sort(places_.begin() + 1, places_.end());
        const std::size_t n = places_.size();

        sum_.resize(n * n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i; j < n; ++j) {
                auto k = static_cast<std::uint32_t>(*index_of(point_add(curve_, places_[i], places_[j])));
                sum_[i * n + j] = k;
                sum_[j * n + i] = k;
            }
        }
        neg_.resize(n);
        multiples_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            neg_[i] = static_cast<std::uint32_t>(*index_of(point_negate(curve_, places_[i])));
            std::vector<std::uint32_t>& mult = multiples_[i];
            std::uint32_t cur = 0;
            do {
                mult.push_back(cur);
                cur = sum_[cur * n + i];
            } while (cur != 0);
        }
        small_multiples_.resize(n * (2 * kSmallRange + 1));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::int64_t k = -kSmallRange; k <= kSmallRange; ++k) {
                small_multiples_[i * (2 * kSmallRange + 1) + static_cast<std::size_t>(k + kSmallRange)] =
                    static_cast<std::uint32_t>(multiple_by_reduction(k, i));
            }
        }
    }

    const Curve& curve() const { return curve_; }
    std::size_t size() const { return places_.size(); }
    const CurvePoint& operator[](std::size_t i) const { return places_[i]; }
    const std::vector<CurvePoint>& places() const { return places_; }

    std::optional<std::size_t> index_of(const CurvePoint& pt) const {
        if (pt.is_infinity()) {
            return 0;
        }
        auto it = std::lower_bound(places_.begin() + 1, places_.end(), pt);
        if (it == places_.end() || !(*it == pt)) {
            return std::nullopt;
        }
        return static_cast<std::size_t>(it - places_.begin());
    }

    std::size_t add(std::size_t i, std::size_t j) const { return sum_[i * places_.size() + j]; }
    std::size_t negate(std::size_t i) const { return neg_[i]; }
    std::size_t order(std::size_t i) const { return multiples_[i].size(); }

    /// Index of k * P_i for any integer k.
    std::size_t multiple(std::int64_t k, std::size_t i) const {
        if (k >= -kSmallRange && k <= kSmallRange) {
            return small_multiples_[i * (2 * kSmallRange + 1) + static_cast<std::size_t>(k + kSmallRange)];
        }
        return multiple_by_reduction(k, i);
    }

    /// Index of the point sum_i coeffs[i] * P_i (coefficient 0 multiplies Q_inf).
    std::size_t group_sum(std::span<const std::int64_t> coeffs) const {
        const std::size_t n = places_.size();
        std::size_t acc = 0;
        for (std::size_t i = 1; i < coeffs.size(); ++i) {
            if (coeffs[i] != 0) {
                acc = sum_[acc * n + multiple(coeffs[i], i)];
            }
        }
        return acc;
    }

  private:
    // multiples with |k| <= kSmallRange are tabulated to avoid a division
    static constexpr std::int64_t kSmallRange = 32;

    std::size_t multiple_by_reduction(std::int64_t k, std::size_t i) const {
        const auto& mult = multiples_[i];
        auto ord = static_cast<std::int64_t>(mult.size());
        std::int64_t r = k % ord;
        return mult[static_cast<std::size_t>(r < 0 ? r + ord : r)];
    }

    Curve curve_;
    std::vector<CurvePoint> places_;
    std::vector<std::uint32_t> sum_;
    std::vector<std::uint32_t> neg_;
    std::vector<std::vector<std::uint32_t>> multiples_;
    std::vector<std::uint32_t> small_multiples_;
};

inline PlaceTable enumerate_places(const Curve& c) { return PlaceTable(c); }

/// True when |n - (p + 1)| <= 2 sqrt(p), checked in integers.
inline bool hasse_bound_holds(std::int64_t n, std::int64_t p) {
    std::int64_t dev = n - (p + 1);
    return dev * dev <= 4 * p;
}

struct GroupStructure {
    std::size_t n = 0;
    std::size_t epsilon = 0;             // |E[2]|
    std::size_t doubling_image_size = 0; // n / epsilon
    std::vector<std::size_t> orders;     // orders[i] = order of P_i
};

/// Counts 2-torsion from the roots of f and finds element orders by repeated
/// addition with the curve arithmetic (not the cached table).
inline GroupStructure group_structure(const Curve& c, const PlaceTable& t) {
    GroupStructure g;
    g.n = t.size();
    g.epsilon = 1;
    for (std::int64_t xv = 0; xv < c.modulus(); ++xv) {
        if (c.f(c.field().element(xv)).is_zero()) {
            ++g.epsilon;
        }
    }
    if (g.n % g.epsilon != 0) {
        throw TheoremViolation("2-torsion count " + std::to_string(g.epsilon) +
                               " does not divide group order " + std::to_string(g.n));
    }
    g.doubling_image_size = g.n / g.epsilon;
    g.orders.resize(g.n);
    for (std::size_t i = 0; i < g.n; ++i) {
        CurvePoint acc = t[i];
        std::size_t k = 1;
        while (!acc.is_infinity()) {
            acc = point_add(c, acc, t[i]);
            ++k;
        }
        g.orders[i] = k;
    }
    return g;
}

} // namespace ffl
