#pragma once

#include <array>
#include <charconv>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "ffl/covering_decoder.hpp"
#include "ffl/elliptic_curve.hpp"
#include "ffl/errors.hpp"
#include "ffl/finite_field.hpp"
#include "ffl/function_field.hpp"
#include "ffl/lattice_core.hpp"
#include "ffl/lattice_geometry.hpp"

namespace ffl {

/// `p:a3,a2,a1,a0`, coefficients as given (negative values allowed).
struct CurveSpec {
    std::int64_t p = 0;
    std::array<std::int64_t, 4> coeffs{};

    std::string to_string() const {
        return std::to_string(p) + ":" + std::to_string(coeffs[0]) + "," + std::to_string(coeffs[1]) + "," +
               std::to_string(coeffs[2]) + "," + std::to_string(coeffs[3]);
    }

    Curve curve() const { return Curve(PrimeField(p), coeffs[0], coeffs[1], coeffs[2], coeffs[3]); }
};

namespace detail {
inline std::int64_t parse_int(std::string_view s, const std::string& what) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
        throw DomainError("malformed " + what + ": '" + std::string(s) + "'");
    }
    return v;
}
} // namespace detail

inline CurveSpec parse_curve_spec(std::string_view text) {
    auto colon = text.find(':');
    if (colon == std::string_view::npos) {
        throw DomainError("curve spec must look like p:a3,a2,a1,a0");
    }
    CurveSpec spec;
    spec.p = detail::parse_int(text.substr(0, colon), "prime");
    std::string_view rest = text.substr(colon + 1);
    for (std::size_t k = 0; k < 4; ++k) {
        auto comma = rest.find(',');
        if ((k < 3) != (comma != std::string_view::npos)) {
            throw DomainError("curve spec needs exactly four coefficients");
        }
        spec.coeffs[k] = detail::parse_int(rest.substr(0, comma), "coefficient");
        rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    }
    return spec;
}

/// Comma-separated list of reals.
inline std::vector<double> parse_real_vector(std::string_view text) {
    std::vector<double> out;
    while (true) {
        auto comma = text.find(',');
        std::string token(text.substr(0, comma));
        std::size_t used = 0;
        double x = 0.0;
        try {
            x = std::stod(token, &used);
        } catch (const std::exception&) {
            throw DomainError("malformed number '" + token + "'");
        }
        if (used != token.size()) {
            throw DomainError("malformed number '" + token + "'");
        }
        out.push_back(x);
        if (comma == std::string_view::npos) {
            break;
        }
        text = text.substr(comma + 1);
    }
    return out;
}

enum class Verdict { Pass, Fail, NotApplicable };

inline const char* to_string(Verdict v) {
    switch (v) {
    case Verdict::Pass:
        return "pass";
    case Verdict::Fail:
        return "fail";
    case Verdict::NotApplicable:
        return "not-applicable";
    }
    return "?";
}

struct AnalysisOptions {
    std::size_t samples = 10000;
    std::uint64_t seed = 1;
};

struct AnalysisReport {
    CurveSpec curve;
    std::size_t n = 0;
    std::size_t epsilon = 0;
    bool hasse_ok = false;
    std::optional<std::int64_t> d_squared;
    std::optional<std::int64_t> minimal_count_enumerated;
    std::optional<std::int64_t> minimal_count_formula;
    std::optional<std::int64_t> det_squared;
    std::optional<std::int64_t> index;
    std::optional<std::int64_t> h_F;
    std::optional<std::int64_t> coset_count;
    std::optional<bool> well_rounded;
    std::optional<bool> generated_by_minimal;
    std::optional<std::size_t> decomposed_generators;
    std::optional<double> packing_density;
    std::optional<CoveringReport> covering;
    std::map<std::string, Verdict> verdicts; // Lemma3.1, Thm3.2, Thm3.3, Thm3.4, Eq1.3

    bool all_pass() const {
        for (const auto& [name, v] : verdicts) {
            if (v == Verdict::Fail) {
                return false;
            }
        }
        return true;
    }
};

/// Runs places -> group -> lattice -> geometry -> covering for one curve.
/// Throws DomainError for an invalid curve and TheoremViolation when an
/// internal cross-check fails.
inline AnalysisReport analyze(const CurveSpec& spec, const AnalysisOptions& opts = {}) {
    AnalysisReport rep;
    rep.curve = spec;
    for (const char* name : {"Lemma3.1", "Thm3.2", "Thm3.3", "Thm3.4", "Eq1.3"}) {
        rep.verdicts[name] = Verdict::NotApplicable;
    }
    auto pass_if = [](bool ok) { return ok ? Verdict::Pass : Verdict::Fail; };

    const Curve c = spec.curve();
    const PlaceTable t = enumerate_places(c);
    const GroupStructure g = group_structure(c, t);
    rep.n = t.size();
    rep.epsilon = g.epsilon;
    rep.hasse_ok = hasse_bound_holds(static_cast<std::int64_t>(rep.n), spec.p);
    if (!rep.hasse_ok) {
        throw TheoremViolation("Hasse bound violated for " + spec.to_string());
    }
    if (rep.n < 2) {
        return rep;
    }
    const std::int64_t n = static_cast<std::int64_t>(rep.n);

    const LatticeBasis b = basis(t);
    const LatticeReport lr = report(t, b, g);
    const CosetCount cc = coset_count(t, b);
    rep.det_squared = lr.det_squared;
    rep.index = lr.index_in_An1;
    rep.h_F = lr.h_F;
    rep.coset_count = cc.distinct_sums;
    rep.verdicts["Eq1.3"] = pass_if(lr.det_bound_ok && lr.det_squared == n * n * n &&
                                    cc.distinct_sums == n && cc.representatives == n);
    if (rep.n < 3) {
        return rep;
    }

    const MinimumDistance md = minimum_distance(t, b);
    const MinimalVectorSet mv = minimal_vectors(t);
    rep.d_squared = md.d_squared;
    rep.minimal_count_enumerated = static_cast<std::int64_t>(mv.count());
    bool distance_ok = true;
    for (const auto& v : mv.vectors()) {
        distance_ok = distance_ok && v.norm_squared() == md.d_squared && contains(t, b, v);
    }
    if (rep.n == 3) {
        // the six listed vectors must be every lattice vector of norm 6
        std::size_t found = 0;
        for_each_root_lattice_vector(3, 6, [&](const std::vector<std::int64_t>& v) {
            DivisorVector d(v);
            if (d.norm_squared() == 6 && contains(t, b, d)) {
                ++found;
                distance_ok = distance_ok && mv.contains(d);
            }
        });
        distance_ok = distance_ok && found == mv.count();
    }
    rep.verdicts["Lemma3.1"] = pass_if(distance_ok);

    if (rep.n >= 4) {
        rep.minimal_count_formula = minimal_count_formula(n, static_cast<std::int64_t>(g.epsilon));
        rep.verdicts["Thm3.2"] = pass_if(*rep.minimal_count_formula == *rep.minimal_count_enumerated);
    }

    rep.well_rounded = is_well_rounded(mv);
    rep.generated_by_minimal = generated_by_minimal(mv, b);
    if (rep.n >= 5) {
        std::size_t decomposed = 0;
        for (const auto& gen : generators(t)) {
            if (!mv.contains(gen)) {
                decompose_generator(t, mv, gen);
                ++decomposed;
            }
        }
        rep.decomposed_generators = decomposed;
        rep.verdicts["Thm3.3"] = pass_if(*rep.well_rounded && *rep.generated_by_minimal);
    }

    rep.packing_density =
        packing_density(rep.n - 1, md.d, std::sqrt(static_cast<double>(lr.det_squared))).value;

    rep.covering = covering_report(t, opts.samples, opts.seed);
    rep.verdicts["Thm3.4"] = pass_if(rep.covering->max_observed <= rep.covering->bound + 1e-9 &&
                                     rep.covering->a_n1_max <= std::sqrt(2.0) + 1e-12);
    return rep;
}

inline nlohmann::json to_json(const CoveringReport& c) {
    return {{"n", c.n},
            {"samples", c.samples},
            {"seed", c.seed},
            {"bound", c.bound},
            {"standard_bound", c.standard_bound},
            {"bound_below_standard", c.bound_below_standard},
            {"max_observed", c.max_observed},
            {"a_n1_max", c.a_n1_max}};
}

inline nlohmann::json to_json(const AnalysisReport& r) {
    auto opt = [](const auto& o) -> nlohmann::json {
        if (o) {
            return *o;
        }
        return nullptr;
    };
    nlohmann::json verdicts = nlohmann::json::object();
    for (const auto& [name, v] : r.verdicts) {
        verdicts[name] = to_string(v);
    }
    return {{"curve", r.curve.to_string()},
            {"n", r.n},
            {"epsilon", r.epsilon},
            {"d_squared", opt(r.d_squared)},
            {"minimal_count", opt(r.minimal_count_enumerated)},
            {"minimal_count_formula", opt(r.minimal_count_formula)},
            {"det_squared", opt(r.det_squared)},
            {"index", opt(r.index)},
            {"h_F", opt(r.h_F)},
            {"coset_count", opt(r.coset_count)},
            {"well_rounded", opt(r.well_rounded)},
            {"generated_by_minimal", opt(r.generated_by_minimal)},
            {"decomposed_generators", opt(r.decomposed_generators)},
            {"packing_density", opt(r.packing_density)},
            {"covering", r.covering ? to_json(*r.covering) : nlohmann::json(nullptr)},
            {"verdicts", verdicts}};
}

inline nlohmann::json to_json(const DecodeTrace& tr, double bound) {
    return {{"input", tr.input}, {"w1", tr.w1},         {"S", tr.S},
            {"j", tr.j},         {"w2", tr.w2},         {"distance", tr.distance},
            {"bound", bound},    {"rounding_distance", tr.rounding_distance}};
}

/// {p_index, q_index, exponent} per factor.
inline nlohmann::json to_json(const FWord& w) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& [f, e] : w.factors()) {
        out.push_back({{"p_index", f.p_index()}, {"q_index", f.q_index()}, {"exponent", e}});
    }
    return out;
}

/// One human-readable line per curve.
inline std::string summary_line(const AnalysisReport& r) {
    std::string s = r.curve.to_string() + "  n=" + std::to_string(r.n) + " eps=" + std::to_string(r.epsilon);
    if (r.minimal_count_enumerated) {
        s += " min=" + std::to_string(*r.minimal_count_enumerated);
    }
    if (r.det_squared) {
        s += " det2=" + std::to_string(*r.det_squared);
    }
    for (const auto& [name, v] : r.verdicts) {
        s += " " + name + "=" + to_string(v);
    }
    return s;
}

inline std::vector<std::int64_t> odd_primes_in_range(std::int64_t lo, std::int64_t hi) {
    std::vector<std::int64_t> out;
    for (std::int64_t p = std::max<std::int64_t>(lo, 3); p <= hi; ++p) {
        if (is_prime(p)) {
            out.push_back(p);
        }
    }
    return out;
}

/// Every square-free cubic over F_p with a3 != 0, lexicographic in (a3, a2, a1, a0).
inline void for_each_curve(std::int64_t p, const std::function<void(const CurveSpec&)>& fn) {
    const PrimeField F(p);
    for (std::int64_t a3 = 1; a3 < p; ++a3) {
        for (std::int64_t a2 = 0; a2 < p; ++a2) {
            for (std::int64_t a1 = 0; a1 < p; ++a1) {
                for (std::int64_t a0 = 0; a0 < p; ++a0) {
                    try {
                        Curve(F, a3, a2, a1, a0);
                    } catch (const DomainError&) {
                        continue;
                    }
                    fn(CurveSpec{p, {a3, a2, a1, a0}});
                }
            }
        }
    }
}

} // namespace ffl
