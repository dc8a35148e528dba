#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "bdz/coder.hpp"
#include "bdz/source.hpp"

namespace bdz::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kIo = 2, kCorrupt = 3 };

struct LevelRow {
    unsigned i = 0;
    std::uint64_t s_len = 0;    // |S_i|
    std::uint64_t hat_len = 0;  // |S^_i|
    SectionBudget budget;
};

struct StatsReport {
    std::uint64_t n = 0;
    unsigned padded_k = 0;
    unsigned e = 0;
    unsigned k = 0;                 // depth of the core, 0 for a literal core
    std::uint64_t vertices = 0;     // |V(G)|
    std::uint64_t quasi_vertices = 0;  // |V(G')|
    std::uint64_t s1_len = 0;       // |S_1|
    std::vector<LevelRow> levels;   // i = 2..k+1
    std::uint64_t sigma_bits = 0;   // terminal bit + sections, or the literal bit
    std::uint64_t container_bits = 0;
    std::uint64_t sum_s = 0;        // |S_1| + ... + |S_{k+1}|
    std::uint64_t length_bound = 0;   // 4 sum_s + sum of rank widths
    double level_ratio = 0;        // sum_s / (2^{k+1} * 2 / k)
};

StatsReport make_stats(std::span<const std::uint8_t> bits);
std::string stats_text(const StatsReport& r);
std::string stats_json(const StatsReport& r);

struct BenchRow {
    std::uint64_t n = 0;
    std::uint64_t rep = 0;
    std::uint64_t seed = 0;  // per-row seed handed to sample()
    RedundancyRecord record;
};

/// Rows ordered by (n, rep).
std::vector<BenchRow> run_bench(const MarkovSource& src, std::span<const std::uint64_t> ns, std::uint64_t reps,
                                std::uint64_t seed);
std::string bench_csv(std::span<const BenchRow> rows);

/// Runs one command line (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bdz::cli
