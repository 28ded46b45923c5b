#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "ffl/elliptic_curve.hpp"
#include "ffl/errors.hpp"

namespace ffl {

/// Integer vector indexed by the place table; coordinate i is the multiplicity
/// at P_i of a divisor supported on the rational places.
class DivisorVector {
  public:
    DivisorVector() = default;
    explicit DivisorVector(std::size_t n) : c_(n, 0) {}
    explicit DivisorVector(std::vector<std::int64_t> coeffs) : c_(std::move(coeffs)) {}

    static DivisorVector unit(std::size_t n, std::size_t i) {
        DivisorVector d(n);
        d.c_[i] = 1;
        return d;
    }

    std::size_t size() const { return c_.size(); }
    std::int64_t operator[](std::size_t i) const { return c_[i]; }
    std::int64_t& operator[](std::size_t i) { return c_[i]; }
    const std::vector<std::int64_t>& coeffs() const { return c_; }

    std::int64_t degree() const { return std::accumulate(c_.begin(), c_.end(), std::int64_t{0}); }
    std::int64_t norm_squared() const {
        std::int64_t s = 0;
        for (auto v : c_) {
            s += v * v;
        }
        return s;
    }
    bool is_zero() const {
        return std::all_of(c_.begin(), c_.end(), [](std::int64_t v) { return v == 0; });
    }

    DivisorVector& operator+=(const DivisorVector& o) {
        check_size(o);
        for (std::size_t i = 0; i < c_.size(); ++i) {
            c_[i] += o.c_[i];
        }
        return *this;
    }
    DivisorVector& operator-=(const DivisorVector& o) {
        check_size(o);
        for (std::size_t i = 0; i < c_.size(); ++i) {
            c_[i] -= o.c_[i];
        }
        return *this;
    }
    DivisorVector& operator*=(std::int64_t k) {
        for (auto& v : c_) {
            v *= k;
        }
        return *this;
    }
    friend DivisorVector operator+(DivisorVector a, const DivisorVector& b) { return a += b; }
    friend DivisorVector operator-(DivisorVector a, const DivisorVector& b) { return a -= b; }
    friend DivisorVector operator*(std::int64_t k, DivisorVector a) { return a *= k; }
    DivisorVector operator-() const { return -1 * *this; }

    auto operator<=>(const DivisorVector&) const = default;

    std::string to_string() const {
        std::string s = "(";
        for (std::size_t i = 0; i < c_.size(); ++i) {
            s += (i ? "," : "") + std::to_string(c_[i]);
        }
        return s + ")";
    }

  private:
    void check_size(const DivisorVector& o) const {
        if (o.size() != size()) {
            throw DomainError("divisor length mismatch");
        }
    }

    std::vector<std::int64_t> c_;
};

struct DivisorTerm {
    std::size_t place;
    std::int64_t coeff;
};

/// F(P, Q) with R = P + Q:
///   (x - x(R)) / m(P,Q)  when P, Q, R != Q_inf
///   1 / m(P,Q)           when P, Q != Q_inf and R = Q_inf
///   1                    when P or Q is Q_inf
/// Its divisor is -P - Q + R + Q_inf.
class FFunction {
  public:
    enum class Kind { Quotient, InverseLine, Constant };

    FFunction(const PlaceTable& t, std::size_t p_idx, std::size_t q_idx)
        : p_(p_idx), q_(q_idx), r_(t.add(p_idx, q_idx)) {
        const Curve& c = t.curve();
        const PrimeField& F = c.field();
        numerator_.kind = LineFunction::Kind::Constant1;
        numerator_.a = F.zero();
        numerator_.b = F.zero();
        numerator_.c = F.one();
        denominator_ = numerator_;
        if (p_ == 0 || q_ == 0) {
            kind_ = Kind::Constant;
        } else {
            denominator_ = line_m(c, t[p_], t[q_]);
            if (r_ == 0) {
                kind_ = Kind::InverseLine;
            } else {
                kind_ = Kind::Quotient;
                numerator_.kind = LineFunction::Kind::Vertical;
                numerator_.a = F.one();
                numerator_.c = -t[r_].x();
            }
        }
        add_term(p_, -1);
        add_term(q_, -1);
        add_term(r_, 1);
        add_term(0, 1);
    }

    std::size_t p_index() const { return p_; }
    std::size_t q_index() const { return q_; }
    std::size_t r_index() const { return r_; }
    Kind kind() const { return kind_; }
    const LineFunction& numerator() const { return numerator_; }
    const LineFunction& denominator() const { return denominator_; }

    /// Nonzero coefficients of the divisor, merged by place.
    std::span<const DivisorTerm> divisor_terms() const { return {terms_.data(), term_count_}; }

    DivisorVector divisor(std::size_t n) const {
        DivisorVector d(n);
        for (const auto& term : divisor_terms()) {
            d[term.place] += term.coeff;
        }
        return d;
    }

  private:
    void add_term(std::size_t place, std::int64_t coeff) {
        for (std::size_t i = 0; i < term_count_; ++i) {
            if (terms_[i].place == place) {
                terms_[i].coeff += coeff;
                if (terms_[i].coeff == 0) {
                    terms_[i] = terms_[--term_count_];
                }
                return;
            }
        }
        terms_[term_count_++] = {place, coeff};
    }

    std::size_t p_, q_, r_;
    Kind kind_ = Kind::Constant;
    LineFunction numerator_, denominator_;
    std::array<DivisorTerm, 4> terms_{};
    std::size_t term_count_ = 0;
};

inline FFunction f_function(const PlaceTable& t, std::size_t p_idx, std::size_t q_idx) {
    if (p_idx >= t.size() || q_idx >= t.size()) {
        throw DomainError("place index out of range");
    }
    return FFunction(t, p_idx, q_idx);
}

struct FWordFactor {
    FFunction function;
    std::int64_t exponent;
};

/// Formal product of F(P, Q) functions with nonzero integer exponents.
class FWord {
  public:
    explicit FWord(std::size_t n) : n_(n) {}

    std::size_t places() const { return n_; }
    const std::vector<FWordFactor>& factors() const { return factors_; }
    std::size_t size() const { return factors_.size(); }
    bool empty() const { return factors_.empty(); }

    void append(const FFunction& f, std::int64_t exponent) {
        if (exponent != 0) {
            factors_.push_back({f, exponent});
        }
    }

  private:
    std::size_t n_;
    std::vector<FWordFactor> factors_;
};

inline DivisorVector word_divisor(const FWord& w) {
    DivisorVector d(w.places());
    for (const auto& [f, e] : w.factors()) {
        for (const auto& term : f.divisor_terms()) {
            d[term.place] += e * term.coeff;
        }
    }
    return d;
}

inline bool is_principal(const PlaceTable& t, const DivisorVector& D) {
    if (D.size() != t.size()) {
        throw DomainError("divisor length " + std::to_string(D.size()) + " != number of places " +
                          std::to_string(t.size()));
    }
    if (D.degree() != 0) {
        throw DomainError("divisor has degree " + std::to_string(D.degree()) + ", expected 0");
    }
    return t.group_sum(D.coeffs()) == 0;
}

/// All F(P, Q) for one place table, built once.
class FunctionField {
  public:
    explicit FunctionField(const PlaceTable& t) : table_(t) {
        const std::size_t n = t.size();
        functions_.reserve(n * n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                functions_.emplace_back(t, i, j);
            }
        }
    }

    const PlaceTable& table() const { return table_; }
    const FFunction& f(std::size_t p_idx, std::size_t q_idx) const {
        return functions_[p_idx * table_.size() + q_idx];
    }

    /// T_k(P) = F(P,P) F(P,2P) ... F(P,(k-1)P); requires k = order(P).
    FWord torsion_word(std::size_t p_idx, std::int64_t k) const {
        if (p_idx >= table_.size()) {
            throw DomainError("place index out of range");
        }
        if (k < 2 || static_cast<std::size_t>(k) != table_.order(p_idx)) {
            throw DomainError("torsion word needs k = order(P) >= 2 (k = " + std::to_string(k) +
                              ", order = " + std::to_string(table_.order(p_idx)) + ")");
        }
        FWord w(table_.size());
        for (std::int64_t i = 1; i < k; ++i) {
            w.append(f(p_idx, table_.multiple(i, p_idx)), 1);
        }
        return w;
    }

    /// Writes a principal divisor as a word in the F(P, Q). Negative coordinates
    /// are lifted with the minimal power of the torsion word; the remaining
    /// positive part Q_1 + ... + Q_t - t Q_inf (ascending place order) is peeled
    /// with F(Q_{t-1}, Q_t) F(Q_{t-2}, T_1) ... F(Q_1, T_{t-2}), each inverted.
    FWord factor_principal(const DivisorVector& D) const {
        if (!is_principal(table_, D)) {
            throw NotPrincipalError("divisor " + D.to_string() + " is not principal");
        }
        const std::size_t n = table_.size();
        FWord w(n);
        DivisorVector rest = D;
        for (std::size_t j = 1; j < n; ++j) {
            if (rest[j] >= 0) {
                continue;
            }
            auto k = static_cast<std::int64_t>(table_.order(j));
            std::int64_t ell = (-rest[j] + k - 1) / k;
            for (std::int64_t i = 1; i < k; ++i) {
                w.append(f(j, table_.multiple(i, j)), ell);
            }
            // divisor of T_k(P_j)^ell is ell * (-k P_j + k Q_inf)
            rest[j] += ell * k;
            rest[0] -= ell * k;
        }

        std::vector<std::size_t> positive;
        for (std::size_t j = 1; j < n; ++j) {
            positive.insert(positive.end(), static_cast<std::size_t>(rest[j]), j);
        }
        const std::size_t t = positive.size();
        if (t >= 2) {
            // positive[] is 0-based: Q_i = positive[i - 1]
            std::size_t partial = positive[t - 1];
            for (std::size_t i = t - 1; i >= 1; --i) {
                const FFunction& g = f(positive[i - 1], partial);
                if (g.kind() != FFunction::Kind::Constant) {
                    w.append(g, -1);
                }
                partial = g.r_index();
            }
            if (partial != 0) {
                throw TheoremViolation("positive part of a principal divisor does not sum to Q_inf");
            }
        } else if (t == 1) {
            throw TheoremViolation("principal divisor reduced to Q - Q_inf");
        }
        return w;
    }

    /// Nonzero iff P + Q = R, in which case L(P + Q - R - Q_inf) is spanned by F(P, Q).
    std::optional<FFunction> rr_nontrivial(std::size_t p_idx, std::size_t q_idx, std::size_t r_idx) const {
        if (table_.add(p_idx, q_idx) != r_idx) {
            return std::nullopt;
        }
        return f(p_idx, q_idx);
    }

  private:
    const PlaceTable& table_;
    std::vector<FFunction> functions_;
};

inline FWord torsion_word(const PlaceTable& t, std::size_t p_idx, std::int64_t k) {
    return FunctionField(t).torsion_word(p_idx, k);
}

inline FWord factor_principal(const PlaceTable& t, const DivisorVector& D) {
    return FunctionField(t).factor_principal(D);
}

inline std::optional<FFunction> rr_nontrivial(const PlaceTable& t, std::size_t p_idx, std::size_t q_idx,
                                              std::size_t r_idx) {
    if (p_idx >= t.size() || q_idx >= t.size() || r_idx >= t.size()) {
        throw DomainError("place index out of range");
    }
    if (t.add(p_idx, q_idx) != r_idx) {
        return std::nullopt;
    }
    return FFunction(t, p_idx, q_idx);
}

} // namespace ffl
