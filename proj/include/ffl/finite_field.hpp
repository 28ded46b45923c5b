#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ffl/errors.hpp"

namespace ffl {

class PrimeField;

// Element of F_p. Carries its modulus so that mixing fields is caught at runtime.
class FieldElement {
  public:
    FieldElement() = default;

    std::int64_t value() const { return value_; }
    std::int64_t modulus() const { return p_; }
    bool is_zero() const { return value_ == 0; }

    FieldElement operator+(const FieldElement& o) const {
        check_same(o);
        std::int64_t s = value_ + o.value_;
        return {s >= p_ ? s - p_ : s, p_};
    }
    FieldElement operator-(const FieldElement& o) const {
        check_same(o);
        std::int64_t s = value_ - o.value_;
        return {s < 0 ? s + p_ : s, p_};
    }
    FieldElement operator*(const FieldElement& o) const {
        check_same(o);
        return {(value_ * o.value_) % p_, p_};
    }
    FieldElement operator-() const { return {value_ == 0 ? 0 : p_ - value_, p_}; }
    FieldElement operator/(const FieldElement& o) const { return *this * o.inverse(); }

    FieldElement& operator+=(const FieldElement& o) { return *this = *this + o; }
    FieldElement& operator-=(const FieldElement& o) { return *this = *this - o; }
    FieldElement& operator*=(const FieldElement& o) { return *this = *this * o; }

    /// Multiplicative inverse by extended Euclid.
    FieldElement inverse() const {
        if (value_ == 0) {
            throw DivisionByZero("inverse of zero in F_" + std::to_string(p_));
        }
        std::int64_t r0 = p_, r1 = value_, s0 = 0, s1 = 1;
        while (r1 != 0) {
            std::int64_t q = r0 / r1;
            std::int64_t t = r0 - q * r1;
            r0 = r1;
            r1 = t;
            t = s0 - q * s1;
            s0 = s1;
            s1 = t;
        }
        // r0 == 1 since p is prime
        std::int64_t v = s0 % p_;
        return {v < 0 ? v + p_ : v, p_};
    }

    bool operator==(const FieldElement& o) const = default;

  private:
    friend class PrimeField;
    FieldElement(std::int64_t v, std::int64_t p) : value_(v), p_(p) {}

    void check_same(const FieldElement& o) const {
        if (p_ != o.p_) {
            throw DomainError("field elements over different moduli (" + std::to_string(p_) +
                              " vs " + std::to_string(o.p_) + ")");
        }
    }

    std::int64_t value_ = 0;
    std::int64_t p_ = 0;
};

inline bool is_prime(std::int64_t n) {
    if (n < 2) {
        return false;
    }
    for (std::int64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            return false;
        }
    }
    return true;
}

// The prime field F_p, p an odd prime. Square roots come from a table filled once
// at construction.
class PrimeField {
  public:
    explicit PrimeField(std::int64_t p) : p_(p) {
        if (!is_prime(p)) {
            throw DomainError(std::to_string(p) + " is not prime");
        }
        if (p == 2) {
            throw DomainError("characteristic 2 is not supported");
        }
        if (p > (std::int64_t{1} << 31)) {
            throw DomainError("modulus too large for table-based square roots");
        }
        root_.assign(static_cast<std::size_t>(p), -1);
        for (std::int64_t y = 0; y <= p / 2; ++y) {
            root_[static_cast<std::size_t>((y * y) % p)] = y;
        }
    }

    std::int64_t modulus() const { return p_; }

    /// Reduces any integer (negative included) into [0, p).
    FieldElement element(std::int64_t v) const {
        v %= p_;
        return {v < 0 ? v + p_ : v, p_};
    }
    FieldElement zero() const { return {0, p_}; }
    FieldElement one() const { return {1, p_}; }

    /// All y with y^2 = a, in increasing order.
    std::vector<FieldElement> square_roots(const FieldElement& a) const {
        if (a.modulus() != p_) {
            throw DomainError("element does not belong to F_" + std::to_string(p_));
        }
        std::int64_t r = root_[static_cast<std::size_t>(a.value())];
        if (r < 0) {
            return {};
        }
        if (r == 0) {
            return {zero()};
        }
        return {FieldElement{r, p_}, FieldElement{p_ - r, p_}};
    }

    bool is_square(const FieldElement& a) const {
        return root_[static_cast<std::size_t>(a.value())] >= 0;
    }

    bool operator==(const PrimeField& o) const { return p_ == o.p_; }

  private:
    std::int64_t p_;
    std::vector<std::int64_t> root_; // smallest root of each residue, -1 for non-squares
};

} // namespace ffl
