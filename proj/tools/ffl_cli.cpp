// Command-line front end: analyze, scan, export, decode, factor.
//
// Exit codes: 0 all applicable verdicts pass, 2 input error, 3 theorem violation.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ffl/analysis.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitViolation = 3;

struct GlobalOptions {
    bool json = false;
    std::size_t samples = 10000;
    std::uint64_t seed = 1;
    std::string filter;
};

std::optional<std::size_t> parse_filter(const std::string& filter) {
    if (filter.empty()) {
        return std::nullopt;
    }
    if (filter.rfind("n=", 0) != 0) {
        throw ffl::DomainError("unsupported filter '" + filter + "' (expected n=K)");
    }
    auto k = ffl::detail::parse_int(filter.substr(2), "filter value");
    if (k < 0) {
        throw ffl::DomainError("filter value must be non-negative");
    }
    return static_cast<std::size_t>(k);
}

int run_analyze(const GlobalOptions& g, const std::string& spec_text) {
    auto spec = ffl::parse_curve_spec(spec_text);
    auto rep = ffl::analyze(spec, {g.samples, g.seed});
    if (g.json) {
        std::cout << ffl::to_json(rep).dump(2) << "\n";
    } else {
        std::cout << ffl::summary_line(rep) << "\n";
        if (rep.covering) {
            std::cout << "  covering: bound=" << rep.covering->bound << " max_observed=" << rep.covering->max_observed
                      << " a_n1_max=" << rep.covering->a_n1_max << " seed=" << rep.covering->seed << "\n";
        }
        if (rep.packing_density) {
            std::cout << "  packing density=" << *rep.packing_density << "\n";
        }
    }
    return rep.all_pass() ? kExitOk : kExitViolation;
}

int run_scan(const GlobalOptions& g, std::int64_t p_min, std::int64_t p_max) {
    if (p_min < 3 || p_min > p_max) {
        throw ffl::DomainError("scan needs 3 <= p_min <= p_max");
    }
    auto want_n = parse_filter(g.filter);
    std::size_t total = 0, failed = 0;
    nlohmann::json all = nlohmann::json::array();
    for (auto p : ffl::odd_primes_in_range(p_min, p_max)) {
        ffl::for_each_curve(p, [&](const ffl::CurveSpec& spec) {
            if (want_n) {
                // cheap pre-filter on the point count
                if (ffl::enumerate_places(spec.curve()).size() != *want_n) {
                    return;
                }
            }
            ++total;
            std::string line;
            try {
                auto rep = ffl::analyze(spec, {g.samples, g.seed});
                if (!rep.all_pass()) {
                    ++failed;
                }
                if (g.json) {
                    all.push_back(ffl::to_json(rep));
                } else {
                    std::cout << ffl::summary_line(rep) << "\n";
                }
            } catch (const ffl::TheoremViolation& e) {
                ++failed;
                std::cerr << spec.to_string() << ": theorem violation: " << e.what() << "\n";
            }
        });
    }
    if (g.json) {
        std::cout << all.dump(2) << "\n";
    } else {
        std::cout << "scanned " << total << " curves, " << (total - failed) << " pass, " << failed << " fail\n";
    }
    return failed == 0 ? kExitOk : kExitViolation;
}

int run_export(const std::string& spec_text, const std::string& what, const std::string& format) {
    auto spec = ffl::parse_curve_spec(spec_text);
    auto t = ffl::enumerate_places(spec.curve());
    std::vector<std::vector<std::int64_t>> rows;
    if (what == "basis") {
        rows = ffl::basis(t).rows();
    } else {
        const auto mv = ffl::minimal_vectors(t);
        for (const auto& v : mv.vectors()) {
            rows.push_back(v.coeffs());
        }
    }
    std::cout << (format == "plain" ? ffl::format_matrix_plain(rows, t.size()) : ffl::format_matrix_bracket(rows));
    return kExitOk;
}

int run_decode(const GlobalOptions& g, const std::string& spec_text, const std::string& vec_text) {
    auto spec = ffl::parse_curve_spec(spec_text);
    auto t = ffl::enumerate_places(spec.curve());
    auto v = ffl::parse_real_vector(vec_text);
    auto tr = ffl::decode(t, v);
    double bound = t.size() >= 3 ? ffl::covering_bound(t.size()) : 0.0;
    if (g.json) {
        std::cout << ffl::to_json(tr, bound).dump(2) << "\n";
    } else {
        std::cout << ffl::to_json(tr, bound).dump() << "\n";
    }
    return kExitOk;
}

int run_factor(const GlobalOptions& g, const std::string& spec_text, const std::string& vec_text) {
    auto spec = ffl::parse_curve_spec(spec_text);
    auto t = ffl::enumerate_places(spec.curve());
    std::vector<std::int64_t> coeffs;
    for (double x : ffl::parse_real_vector(vec_text)) {
        if (x != static_cast<double>(static_cast<std::int64_t>(x))) {
            throw ffl::DomainError("divisor coefficients must be integers");
        }
        coeffs.push_back(static_cast<std::int64_t>(x));
    }
    ffl::DivisorVector d(coeffs);
    if (d.size() != t.size()) {
        throw ffl::DomainError("divisor length " + std::to_string(d.size()) + " != n = " + std::to_string(t.size()));
    }
    auto w = ffl::factor_principal(t, d);
    if (ffl::word_divisor(w) != d) {
        throw ffl::TheoremViolation("factorization does not reproduce the divisor");
    }
    std::cout << ffl::to_json(w).dump(g.json ? 2 : -1) << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Function-field lattices of elliptic curves over odd prime fields"};
    app.require_subcommand(1);
    GlobalOptions g;
    app.add_flag("--json", g.json, "Emit machine-readable JSON");
    app.add_option("--samples", g.samples, "Covering samples per curve")->check(CLI::PositiveNumber);
    app.add_option("--seed", g.seed, "Seed for sampled covering checks");
    app.add_option("--filter", g.filter, "Scan filter, e.g. n=9");

    std::string spec_text, what, format, vec_text;
    std::int64_t p_min = 0, p_max = 0;

    auto* analyze = app.add_subcommand("analyze", "Analyze one curve p:a3,a2,a1,a0");
    analyze->add_option("spec", spec_text)->required();

    auto* scan = app.add_subcommand("scan", "Analyze every curve over the primes in [p_min, p_max]");
    scan->add_option("p_min", p_min)->required();
    scan->add_option("p_max", p_max)->required();

    auto* exp = app.add_subcommand("export", "Print the HNF basis or the minimal vectors");
    exp->add_option("spec", spec_text)->required();
    exp->add_option("what", what)->required()->check(CLI::IsMember({"basis", "minimal"}));
    exp->add_option("format", format)->required()->check(CLI::IsMember({"plain", "bracket"}));

    auto* dec = app.add_subcommand("decode", "Decode a real vector v0,...,v_{n-1} to a nearby lattice point");
    dec->add_option("spec", spec_text)->required();
    dec->add_option("vector", vec_text)->required();

    auto* fac = app.add_subcommand("factor", "Write a principal divisor d0,...,d_{n-1} as a word in F(P,Q)");
    fac->add_option("spec", spec_text)->required();
    fac->add_option("divisor", vec_text)->required();

    // global flags may follow the subcommand
    for (auto* sub : {analyze, scan, exp, dec, fac}) {
        sub->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (*analyze) {
            return run_analyze(g, spec_text);
        }
        if (*scan) {
            return run_scan(g, p_min, p_max);
        }
        if (*exp) {
            return run_export(spec_text, what, format);
        }
        if (*dec) {
            return run_decode(g, spec_text, vec_text);
        }
        if (*fac) {
            return run_factor(g, spec_text, vec_text);
        }
    } catch (const ffl::TheoremViolation& e) {
        std::cerr << "theorem violation: " << e.what() << "\n";
        return kExitViolation;
    } catch (const ffl::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
