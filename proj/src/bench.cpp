// ============================================================================
// bench.cpp — satisfiability/model-checking drivers, formula families, suites
// ============================================================================

#include "mitl/bench.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "mitl/region.hpp"
#include "mitl/zone.hpp"

namespace mitl {

std::string verdict_text(Verdict v) {
    switch (v) {
        case Verdict::SAT: return "SAT";
        case Verdict::UNSAT: return "UNSAT";
        case Verdict::HOLDS: return "HOLDS";
        case Verdict::VIOLATED: return "VIOLATED";
    }
    return "?";
}

// ============================================================================
// Engine dispatch
// ============================================================================

namespace {

struct EmptinessResult {
    bool empty;
    ExploreStats stats;
    std::size_t max_clocks;
};

EmptinessResult check_empty(const Ocata& a, const BuchiTA& b, std::size_t K,
                            const RunOptions& opts) {
    ExploreLimits limits;
    limits.deadline = std::chrono::steady_clock::now() +
                      std::chrono::microseconds(
                          static_cast<std::int64_t>(opts.timeout_seconds * 1e6));
    limits.max_rss_kb = opts.memory_mb * 1024;

    Reduction red = opts.reduced ? Reduction::over(a) : Reduction::none();
    EmptinessResult res{};
    if (opts.engine == EngineKind::Region) {
        RegionEngine eng(a, b, K, red);
        res.empty = gfp_empty(eng, limits, &res.stats);
        res.max_clocks = eng.max_clocks_seen();
    } else {
        ZoneEngine eng(a, b, K, red, opts.subsumption);
        res.empty = gfp_empty(eng, limits, &res.stats);
        res.max_clocks = eng.max_clocks_seen();
    }
    return res;
}

RunReport report_of(const EmptinessResult& r, bool empty_is_good, Verdict good, Verdict bad,
                    const RunOptions& opts, double ms) {
    RunReport rep;
    rep.verdict = (r.empty == empty_is_good) ? good : bad;
    rep.engine = opts.engine == EngineKind::Region ? "region" : "zone";
    rep.reduced = opts.reduced;
    rep.visited = r.stats.visited;
    rep.peak_frontier = r.stats.peak_frontier;
    rep.gfp_iterations = r.stats.gfp_iterations;
    rep.max_clocks_seen = r.max_clocks;
    rep.ms = ms;
    return rep;
}

}  // namespace

// ============================================================================
// Satisfiability and model checking
// ============================================================================

RunReport run_sat(const Formula& f, const RunOptions& opts) {
    auto t0 = std::chrono::steady_clock::now();
    Formula nnf = to_nnf(f);
    std::vector<std::string> sigma = formula_letters(nnf);
    if (sigma.empty()) sigma.push_back("a");
    Ocata a = compile(nnf, sigma);
    std::size_t K = std::max<std::size_t>(2 * a.num_locations(), m_bounds(nnf).m);
    BuchiTA u = universal_ta(a.alphabet);
    EmptinessResult r = check_empty(a, u, K, opts);
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                    .count();
    // satisfiable iff an accepting run exists, i.e. the product is nonempty
    return report_of(r, false, Verdict::SAT, Verdict::UNSAT, opts, ms);
}

RunReport run_sat(const std::string& formula_text, const RunOptions& opts) {
    return run_sat(parse_formula(formula_text), opts);
}

RunReport run_mc(const BuchiTA& b, const Formula& f, const RunOptions& opts) {
    auto t0 = std::chrono::steady_clock::now();
    for (const std::string& l : formula_letters(f)) {
        if (std::find(b.alphabet.begin(), b.alphabet.end(), l) == b.alphabet.end())
            throw FormulaError("formula letter not in the model alphabet: " + l);
    }
    Formula neg = to_nnf(Formula::neg(f));
    Ocata a = compile(neg, b.alphabet);
    std::size_t K = std::max<std::size_t>(2 * a.num_locations(), m_bounds(neg).m);
    EmptinessResult r = check_empty(a, b, K, opts);
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                    .count();
    // the model satisfies phi iff no behaviour matches the negation
    return report_of(r, true, Verdict::HOLDS, Verdict::VIOLATED, opts, ms);
}

RunReport run_mc(const BuchiTA& b, const std::string& formula_text, const RunOptions& opts) {
    return run_mc(b, parse_formula(formula_text), opts);
}

// ============================================================================
// Formula families
// ============================================================================

std::string gen_formula(char family, int k, const std::string& interval_text) {
    if (k < 1) throw FormulaError("family parameter k must be positive");
    auto p = [](int i) { return "p" + std::to_string(i); };
    const std::string& I = interval_text;
    std::string out;
    auto join = [&](const std::string& term) {
        if (!out.empty()) out += " & ";
        out += term;
    };
    switch (family) {
        case 'E':
            for (int i = 1; i <= k; ++i) join("F" + I + " " + p(i));
            break;
        case 'A':
            for (int i = 1; i <= k; ++i) join("G" + I + " " + p(i));
            break;
        case 'U': {
            out = p(1);
            for (int i = 2; i <= k; ++i)
                out = (i == 2 ? out : "(" + out + ")") + " U" + I + " " + p(i);
            break;
        }
        case 'T': {
            out = p(k);
            for (int i = k - 1; i >= 1; --i)
                out = p(i) + " R" + I + " " + (i == k - 1 ? out : "(" + out + ")");
            break;
        }
        case 'Q':
            for (int i = 1; i <= k; ++i)
                join("(F" + I + " " + p(i) + " | G" + I + " " + p(i + 1) + ")");
            break;
        case 'R':
            for (int i = 1; i <= k; ++i)
                join("(G" + I + " F" + I + " " + p(i) + " | F" + I + " G" + I + " " + p(i + 1) +
                     ")");
            break;
        default: throw FormulaError(std::string("unknown formula family: ") + family);
    }
    parse_formula(out);  // validate, including the interval text
    return out;
}

// ============================================================================
// Suites
// ============================================================================

std::vector<BenchRow> run_bench_suite(const std::string& suite_json, const std::string& base_dir,
                                      double timeout_seconds, std::size_t memory_mb) {
    nlohmann::json suite;
    try {
        suite = nlohmann::json::parse(suite_json);
    } catch (const nlohmann::json::exception& e) {
        throw FormulaError(std::string("invalid suite file: ") + e.what());
    }
    std::vector<BenchRow> rows;
    for (const auto& job : suite) {
        std::string type = job.at("type").get<std::string>();
        std::string formula = job.at("formula").get<std::string>();
        std::string expected = job.value("expected", "");
        std::optional<BuchiTA> ta;
        if (type == "mc") {
            std::string path = job.at("ta").get<std::string>();
            if (!path.empty() && path[0] != '/' && !base_dir.empty())
                path = base_dir + "/" + path;
            ta = load_ta_file(path);
        }
        for (EngineKind engine : {EngineKind::Region, EngineKind::Zone}) {
            for (bool reduced : {false, true}) {
                RunOptions opts;
                opts.engine = engine;
                opts.reduced = reduced;
                opts.timeout_seconds = timeout_seconds;
                opts.memory_mb = memory_mb;
                BenchRow row;
                row.formula = formula;
                row.engine = engine == EngineKind::Region ? "region" : "zone";
                row.reduced = reduced;
                auto t0 = std::chrono::steady_clock::now();
                try {
                    RunReport rep = ta ? run_mc(*ta, formula, opts) : run_sat(formula, opts);
                    row.verdict = verdict_text(rep.verdict);
                    row.ms = rep.ms;
                    row.visited = rep.visited;
                } catch (const ResourceLimitError& e) {
                    row.verdict = e.kind == ResourceLimitError::Timeout ? "TIMEOUT" : "OOM";
                    row.ms = std::chrono::duration<double, std::milli>(
                                 std::chrono::steady_clock::now() - t0)
                                 .count();
                    row.visited = 0;
                }
                row.expected_ok = expected.empty() || row.verdict == expected;
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
    std::ostringstream out;
    out << "formula,engine,reduced,verdict,ms,visited\n";
    for (const BenchRow& r : rows) {
        out << '"' << r.formula << "\"," << r.engine << ',' << (r.reduced ? 1 : 0) << ','
            << r.verdict << ',' << static_cast<long long>(r.ms) << ',' << r.visited << "\n";
    }
    return out.str();
}

}  // namespace mitl
