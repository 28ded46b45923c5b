#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "ffl/elliptic_curve.hpp"
#include "ffl/errors.hpp"
#include "ffl/function_field.hpp"
#include "ffl/integer_matrix.hpp"

namespace ffl {

/// e_P + e_Q - e_R - e_0 for every unordered pair {P, Q} with R = P + Q,
/// skipping pairs involving Q_inf (zero vectors); sorted, without duplicates.
inline std::vector<DivisorVector> generators(const PlaceTable& t) {
    const std::size_t n = t.size();
    std::vector<DivisorVector> out;
    for (std::size_t i = 1; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            DivisorVector v(n);
            v[i] += 1;
            v[j] += 1;
            v[t.add(i, j)] -= 1;
            v[0] -= 1;
            if (!v.is_zero()) {
                out.push_back(std::move(v));
            }
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

inline Matrix<std::int64_t> hnf(const std::vector<DivisorVector>& rows, std::size_t cols) {
    HermiteBasis<std::int64_t> h(cols);
    for (const auto& r : rows) {
        h.insert(r.coeffs());
    }
    return h.matrix();
}

/// HNF basis of the lattice together with its exact Gram determinant.
class LatticeBasis {
  public:
    LatticeBasis(HermiteBasis<std::int64_t> hermite, std::int64_t gram_det)
        : hermite_(std::move(hermite)), gram_det_(gram_det) {}

    std::size_t dimension() const { return hermite_.cols(); }
    std::size_t rank() const { return hermite_.rank(); }
    const std::vector<std::vector<std::int64_t>>& rows() const { return hermite_.rows(); }
    Matrix<std::int64_t> matrix() const { return hermite_.matrix(); }
    const HermiteBasis<std::int64_t>& hermite() const { return hermite_; }

    /// det(B B^T); basis independent.
    std::int64_t gram_det() const { return gram_det_; }

    /// Product of the HNF pivots, i.e. the index in the coordinate-sum-zero
    /// lattice when the pivots sit in the first n-1 columns.
    std::int64_t pivot_product() const {
        std::int64_t prod = 1;
        for (std::size_t r = 0; r < rank(); ++r) {
            prod *= rows()[r][hermite_.pivots()[r]];
        }
        return prod;
    }

    bool solve_contains(std::span<const std::int64_t> v) const { return hermite_.contains(v); }

  private:
    HermiteBasis<std::int64_t> hermite_;
    std::int64_t gram_det_;
};

inline std::int64_t gram_determinant(const Matrix<std::int64_t>& b) {
    Matrix<std::int64_t> gram(b.rows(), b.rows());
    for (std::size_t i = 0; i < b.rows(); ++i) {
        for (std::size_t j = 0; j < b.rows(); ++j) {
            std::int64_t s = 0;
            for (std::size_t k = 0; k < b.cols(); ++k) {
                s = detail::checked_add(s, detail::checked_mul(b(i, k), b(j, k)));
            }
            gram(i, j) = s;
        }
    }
    return bareiss_determinant(gram);
}

inline LatticeBasis basis(const PlaceTable& t) {
    const std::size_t n = t.size();
    if (n < 2) {
        throw DomainError("lattice needs at least 2 rational places (n = " + std::to_string(n) + ")");
    }
    HermiteBasis<std::int64_t> h(n);
    for (const auto& g : generators(t)) {
        h.insert(g.coeffs());
    }
    if (h.rank() != n - 1) {
        throw TheoremViolation("generator rank " + std::to_string(h.rank()) + " != n - 1 = " +
                               std::to_string(n - 1));
    }
    std::int64_t gd = gram_determinant(h.matrix());
    return LatticeBasis(std::move(h), gd);
}

/// Membership by the group-sum criterion, cross-checked against the HNF solve.
inline bool contains(const PlaceTable& t, const LatticeBasis& b, std::span<const std::int64_t> v) {
    if (v.size() != t.size()) {
        throw DomainError("vector length " + std::to_string(v.size()) + " != n = " + std::to_string(t.size()));
    }
    std::int64_t sum = std::accumulate(v.begin(), v.end(), std::int64_t{0});
    bool by_group = sum == 0 && t.group_sum(v) == 0;
    bool by_solve = b.solve_contains(v);
    if (by_group != by_solve) {
        throw TheoremViolation("membership oracles disagree on a vector");
    }
    return by_group;
}

inline bool contains(const PlaceTable& t, const LatticeBasis& b, const DivisorVector& v) {
    return contains(t, b, std::span<const std::int64_t>(v.coeffs()));
}

struct CosetCount {
    std::int64_t representatives = 0; // size of the HNF residue box
    std::int64_t distinct_sums = 0;   // distinct group-sum values over that box
};

/// Walks the canonical coset representatives of L in A_{n-1} (pivot
/// coordinates in [0, pivot), the free coordinate fixing the sum) and counts
/// the distinct points they map to.
inline CosetCount coset_count(const PlaceTable& t, const LatticeBasis& b) {
    const std::size_t n = t.size();
    const auto& piv = b.hermite().pivots();
    std::vector<std::int64_t> bound;
    for (std::size_t r = 0; r < b.rank(); ++r) {
        bound.push_back(b.rows()[r][piv[r]]);
    }
    std::vector<bool> is_pivot(n, false);
    for (auto c : piv) {
        is_pivot[c] = true;
    }
    std::size_t free_col = n;
    for (std::size_t c = 0; c < n; ++c) {
        if (!is_pivot[c]) {
            free_col = c;
        }
    }
    if (b.rank() + 1 != n || free_col == n) {
        throw DomainError("coset count requires a rank n-1 lattice");
    }

    CosetCount out;
    std::vector<bool> seen(n, false);
    std::vector<std::int64_t> digit(b.rank(), 0);
    std::vector<std::int64_t> v(n, 0);
    while (true) {
        std::int64_t s = 0;
        for (std::size_t r = 0; r < digit.size(); ++r) {
            v[piv[r]] = digit[r];
            s += digit[r];
        }
        v[free_col] = -s;
        ++out.representatives;
        std::size_t j = t.group_sum(v);
        if (!seen[j]) {
            seen[j] = true;
            ++out.distinct_sums;
        }
        std::size_t r = 0;
        while (r < digit.size() && ++digit[r] == bound[r]) {
            digit[r] = 0;
            ++r;
        }
        if (r == digit.size()) {
            break;
        }
    }
    return out;
}

struct LatticeReport {
    std::size_t n = 0;
    std::size_t epsilon = 0;
    std::int64_t det_squared = 0;
    std::int64_t index_in_An1 = 0;
    std::int64_t h_F = 0;
    bool det_bound_ok = false;
};

inline LatticeReport report(const PlaceTable& t, const LatticeBasis& b, const GroupStructure& g) {
    LatticeReport rep;
    rep.n = t.size();
    rep.epsilon = g.epsilon;
    rep.det_squared = b.gram_det();
    const auto n = static_cast<std::int64_t>(rep.n);
    if (rep.det_squared % n != 0) {
        throw TheoremViolation("Gram determinant not divisible by n");
    }
    std::int64_t q = rep.det_squared / n;
    auto root = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(q))));
    while (root * root > q) {
        --root;
    }
    while ((root + 1) * (root + 1) <= q) {
        ++root;
    }
    if (root * root != q) {
        throw TheoremViolation("det^2 / n = " + std::to_string(q) + " is not a perfect square");
    }
    rep.index_in_An1 = root;
    // genus 1: Cl^0 is in bijection with the rational points
    rep.h_F = n;
    rep.det_bound_ok = rep.index_in_An1 <= rep.h_F;
    return rep;
}

/// "n rank" header, then one row per line, single spaces.
inline std::string format_matrix_plain(const std::vector<std::vector<std::int64_t>>& rows, std::size_t n) {
    std::string out = std::to_string(n) + " " + std::to_string(rows.size()) + "\n";
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i) {
                out += ' ';
            }
            out += std::to_string(r[i]);
        }
        out += '\n';
    }
    return out;
}

/// [[r00 r01 ...][r10 ...]] on one line.
inline std::string format_matrix_bracket(const std::vector<std::vector<std::int64_t>>& rows) {
    std::string out = "[";
    for (const auto& r : rows) {
        out += '[';
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i) {
                out += ' ';
            }
            out += std::to_string(r[i]);
        }
        out += ']';
    }
    return out + "]\n";
}

/// Parses the bracket form; any whitespace (newlines included) is accepted
/// between tokens.
inline std::vector<std::vector<std::int64_t>> parse_matrix_bracket(const std::string& text) {
    std::vector<std::vector<std::int64_t>> rows;
    std::size_t i = 0;
    auto skip_ws = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) {
            ++i;
        }
    };
    auto expect = [&](char ch) {
        skip_ws();
        if (i >= text.size() || text[i] != ch) {
            throw DomainError(std::string("malformed matrix: expected '") + ch + "'");
        }
        ++i;
    };
    expect('[');
    while (true) {
        skip_ws();
        if (i < text.size() && text[i] == ']') {
            ++i;
            break;
        }
        expect('[');
        std::vector<std::int64_t> row;
        while (true) {
            skip_ws();
            if (i < text.size() && text[i] == ']') {
                ++i;
                break;
            }
            std::size_t used = 0;
            try {
                row.push_back(std::stoll(text.substr(i), &used));
            } catch (const std::exception&) {
                throw DomainError("malformed matrix entry");
            }
            i += used;
        }
        rows.push_back(std::move(row));
    }
    skip_ws();
    if (i != text.size()) {
        throw DomainError("trailing characters after matrix");
    }
    return rows;
}

inline std::vector<std::vector<std::int64_t>> parse_matrix_plain(const std::string& text) {
    std::istringstream in(text);
    std::size_t n = 0, count = 0;
    if (!(in >> n >> count)) {
        throw DomainError("malformed matrix header");
    }
    std::vector<std::vector<std::int64_t>> rows(count, std::vector<std::int64_t>(n));
    for (auto& r : rows) {
        for (auto& x : r) {
            if (!(in >> x)) {
                throw DomainError("matrix body too short");
            }
        }
    }
    return rows;
}

} // namespace ffl
