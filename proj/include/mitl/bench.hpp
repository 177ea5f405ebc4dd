#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mitl/emptiness.hpp"
#include "mitl/formula.hpp"
#include "mitl/ta.hpp"

namespace mitl {

// ============================================================================
// Verification drivers and the benchmark runner
// ============================================================================

enum class Verdict { SAT, UNSAT, HOLDS, VIOLATED };
std::string verdict_text(Verdict v);

enum class EngineKind { Region, Zone };

struct RunOptions {
    EngineKind engine = EngineKind::Zone;
    bool reduced = false;
    double timeout_seconds = 300.0;
    std::size_t memory_mb = 4096;
    bool subsumption = true;  // zone engine frontier pruning
};

struct RunReport {
    Verdict verdict;
    std::string engine;  // "region" or "zone"
    bool reduced = false;
    std::size_t visited = 0;
    double ms = 0;
    std::size_t peak_frontier = 0;
    std::size_t gfp_iterations = 0;
    std::size_t max_clocks_seen = 0;  // largest clock-copy count of any explored state
};

// Satisfiability: emptiness of the product of A_phi with the universal TA.
RunReport run_sat(const std::string& formula_text, const RunOptions& opts);
RunReport run_sat(const Formula& f, const RunOptions& opts);

// Model checking: B |= phi iff the product with A_{not phi} is empty.
// Throws FormulaError when phi uses letters outside B's alphabet.
RunReport run_mc(const BuchiTA& b, const std::string& formula_text, const RunOptions& opts);
RunReport run_mc(const BuchiTA& b, const Formula& f, const RunOptions& opts);

// ============================================================================
// Benchmark formula families
// ============================================================================

// family in {E, A, U, T, Q, R}; Q and R range over p1..p_{k+1}.
std::string gen_formula(char family, int k, const std::string& interval_text);

// ============================================================================
// Benchmark suites
// ============================================================================
//
// Suite files are JSON arrays of jobs:
//   {"type": "sat", "formula": "...", "expected": "SAT"}
//   {"type": "mc", "ta": "path.json", "formula": "...", "expected": "HOLDS"}
// Every job runs on the engine x reduced cross-product.

struct BenchRow {
    std::string formula;
    std::string engine;
    bool reduced;
    std::string verdict;  // SAT/UNSAT/HOLDS/VIOLATED/TIMEOUT/OOM
    double ms;
    std::size_t visited;
    bool expected_ok;  // verdict matches the manifest (true when unspecified)
};

std::vector<BenchRow> run_bench_suite(const std::string& suite_json,
                                      const std::string& base_dir, double timeout_seconds,
                                      std::size_t memory_mb);

std::string bench_csv(const std::vector<BenchRow>& rows);

}  // namespace mitl
