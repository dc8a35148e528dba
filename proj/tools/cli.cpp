#include "bdz/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>

#include "bdz/error.hpp"
#include "bdz/robdd.hpp"

namespace bdz::cli {

namespace {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("error reading '" + path + "'");
    return data;
}

void write_file(const std::string& path, std::span<const std::uint8_t> data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
    if (!out) throw IoError("error writing '" + path + "'");
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::string fmt_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::ostringstream s;
    s << std::setprecision(17) << v;
    return s.str();
}

}  // namespace

StatsReport make_stats(std::span<const std::uint8_t> bits) {
    CodecTrace trace;
    const auto container = encode(bits, &trace);
    StatsReport r;
    r.n = trace.n;
    r.padded_k = trace.padded_k;
    r.e = trace.reduction;
    r.k = trace.core_k;
    r.sigma_bits = trace.sigma_bits;
    r.container_bits = container.size() * 8;
    if (trace.literal) {
        r.vertices = r.quasi_vertices = 1;
        return r;
    }
    const ReducedInput red = reduce_input(bits);
    const DyadicCore core(red.core);
    r.vertices = build_robdd(core).size();
    r.quasi_vertices = quasi_reduced_vertex_count(core);
    r.s1_len = trace.levels.at(1).size();
    r.sum_s = r.s1_len;
    std::uint64_t widths = 0;
    for (unsigned i = 2; i <= r.k + 1; ++i) {
        LevelRow row;
        row.i = i;
        row.s_len = trace.levels.at(i).size();
        row.budget = trace.metrics[i - 2].budget;
        row.hat_len = row.budget.type_bits;
        r.sum_s += row.s_len;
        widths += row.budget.rank1_bits + row.budget.rank2_bits;
        r.levels.push_back(row);
    }
    r.length_bound = 4 * r.sum_s + widths;
    r.level_ratio = static_cast<double>(r.sum_s) / (std::ldexp(2.0, static_cast<int>(r.k)) * 2.0 / r.k);
    return r;
}

std::string stats_text(const StatsReport& r) {
    std::ostringstream s;
    s << "n " << r.n << "  padded K " << r.padded_k << "  e " << r.e << "  core K " << r.k << '\n';
    s << "|V(G)| " << r.vertices << "  |V(G')| " << r.quasi_vertices << '\n';
    if (!r.levels.empty()) {
        s << std::setw(4) << "i" << std::setw(10) << "|S_i|" << std::setw(10) << "|S^_i|" << std::setw(8) << "Q_i"
          << std::setw(10) << "rank1" << std::setw(10) << "rank2" << std::setw(8) << "fa" << std::setw(10) << "M_i"
          << std::setw(10) << "actual" << '\n';
        s << std::setw(4) << 1 << std::setw(10) << r.s1_len << '\n';
        for (const auto& row : r.levels) {
            const auto& b = row.budget;
            s << std::setw(4) << row.i << std::setw(10) << row.s_len << std::setw(10) << row.hat_len << std::setw(8)
              << b.power_bits << std::setw(10) << b.rank1_bits << std::setw(10) << b.rank2_bits << std::setw(8)
              << b.fa_bits << std::setw(10) << b.formula_bits() << std::setw(10) << b.actual_bits() << '\n';
        }
    }
    s << "codeword bits " << r.sigma_bits << "  container bits " << r.container_bits << '\n';
    if (r.k > 0) {
        s << "length bound " << r.length_bound << "  sum |S_i| " << r.sum_s << "  ratio to 2^(K+1)*2/K "
          << std::setprecision(6) << r.level_ratio << '\n';
    }
    return s.str();
}

std::string stats_json(const StatsReport& r) {
    nlohmann::json j;
    j["n"] = r.n;
    j["padded_k"] = r.padded_k;
    j["e"] = r.e;
    j["k"] = r.k;
    j["vertices"] = r.vertices;
    j["quasi_reduced_vertices"] = r.quasi_vertices;
    j["s1_len"] = r.s1_len;
    j["levels"] = nlohmann::json::array();
    for (const auto& row : r.levels) {
        const auto& b = row.budget;
        j["levels"].push_back({{"i", row.i},
                               {"s_len", row.s_len},
                               {"hat_len", row.hat_len},
                               {"q", b.power_bits},
                               {"freq_bits", b.freq_bits},
                               {"type_bits", b.type_bits},
                               {"rank1_bits", b.rank1_bits},
                               {"fa_bits", b.fa_bits},
                               {"rank2_bits", b.rank2_bits},
                               {"formula_bits", b.formula_bits()},
                               {"actual_bits", b.actual_bits()}});
    }
    j["codeword_bits"] = r.sigma_bits;
    j["container_bits"] = r.container_bits;
    j["sum_s"] = r.sum_s;
    j["length_bound"] = r.length_bound;
    j["level_ratio"] = r.level_ratio;
    return j.dump(2) + "\n";
}

std::vector<BenchRow> run_bench(const MarkovSource& src, std::span<const std::uint64_t> ns, std::uint64_t reps,
                                std::uint64_t seed) {
    std::vector<BenchRow> rows;
    for (auto n : ns) {
        for (std::uint64_t rep = 0; rep < reps; ++rep) {
            BenchRow row;
            row.n = n;
            row.rep = rep;
            row.seed = splitmix64(splitmix64(seed ^ splitmix64(n)) + rep);
            row.record = measure_redundancy(src, sample(src, n, row.seed));
            rows.push_back(row);
        }
    }
    return rows;
}

std::string bench_csv(std::span<const BenchRow> rows) {
    std::ostringstream s;
    s << "n,rep,seed,codeword_bits,log2_mu,redundancy,per_sample,budget,container_bits,impossible\n";
    for (const auto& row : rows) {
        const auto& r = row.record;
        s << r.n << ',' << row.rep << ',' << row.seed << ',' << r.codeword_bits << ',' << fmt_double(r.log2_mu) << ','
          << fmt_double(r.redundancy) << ',' << fmt_double(r.per_sample) << ',' << fmt_double(r.budget) << ','
          << r.container_bits << ',' << (r.impossible ? 1 : 0) << '\n';
    }
    return s.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Compress bit strings through their reduced ordered binary decision diagram."};
    app.require_subcommand(1);

    std::string in_path;
    std::string out_path;
    auto* compress = app.add_subcommand("compress", "Compress a file");
    compress->add_option("input", in_path, "Input file")->required();
    compress->add_option("output", out_path, "Output file")->required();

    auto* decompress = app.add_subcommand("decompress", "Decompress a file");
    decompress->add_option("input", in_path, "Compressed file")->required();
    decompress->add_option("output", out_path, "Output file")->required();

    bool json = false;
    std::string bit_text;
    auto* stats = app.add_subcommand("stats", "Print per-level coding statistics");
    auto* stats_in = stats->add_option("input", in_path, "Input file");
    auto* stats_bits = stats->add_option("--bits", bit_text, "Use this bit string instead of a file");
    stats_in->excludes(stats_bits);
    stats->add_flag("--json", json, "Emit JSON");

    std::string preset;
    std::string config_path;
    std::vector<std::uint64_t> ns;
    std::uint64_t reps = 1;
    std::uint64_t seed = 0;
    std::string csv_path;
    auto* bench = app.add_subcommand("bench", "Measure pointwise redundancy against a finite-state source");
    auto* preset_opt = bench->add_option("--source", preset, "bernoulli:THETA or markov:R:P0,P1,...");
    auto* config_opt = bench->add_option("--source-config", config_path, "Source definition file");
    preset_opt->excludes(config_opt);
    bench->add_option("--n", ns, "Lengths (powers of two)")->required()->delimiter(',');
    bench->add_option("--reps", reps, "Repetitions per length");
    auto* seed_opt = bench->add_option("--seed", seed, "Seed");
    bench->add_option("--csv", csv_path, "CSV output path (stdout if absent)");

    try {
        app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*compress) {
            const auto data = read_file(in_path);
            if (data.empty()) {
                err << "error: input file is empty\n";
                return kIo;
            }
            const auto bytes = encode(bits_from_bytes(data));
            write_file(out_path, bytes);
            out << data.size() << " -> " << bytes.size() << " bytes, ratio " << std::setprecision(4)
                << static_cast<double>(bytes.size()) / static_cast<double>(data.size()) << '\n';
            return kOk;
        }
        if (*decompress) {
            const auto data = read_file(in_path);
            const Bits bits = decode(data);
            if (bits.size() % 8 != 0) err << "warning: " << bits.size() << " bits, last byte zero-padded\n";
            const auto bytes = bytes_from_bits(bits);
            write_file(out_path, bytes);
            out << data.size() << " -> " << bytes.size() << " bytes\n";
            return kOk;
        }
        if (*stats) {
            Bits bits;
            if (!bit_text.empty()) {
                bits = bits_from_string(bit_text);
            } else if (!in_path.empty()) {
                bits = bits_from_bytes(read_file(in_path));
            } else {
                err << "error: stats needs an input file or --bits\n";
                return kUsage;
            }
            if (bits.empty()) {
                err << "error: input is empty\n";
                return kIo;
            }
            const StatsReport r = make_stats(bits);
            out << (json ? stats_json(r) : stats_text(r));
            return kOk;
        }
        if (*bench) {
            std::optional<MarkovSource> src;
            if (!config_path.empty()) {
                std::ifstream in(config_path);
                if (!in) throw IoError("cannot open '" + config_path + "' for reading");
                SourceConfig cfg = parse_source_config(in);
                if (cfg.seed && !*seed_opt) seed = *cfg.seed;
                src.emplace(std::move(cfg.source));
            } else if (!preset.empty()) {
                src.emplace(parse_preset(preset));
            } else {
                err << "error: bench needs --source or --source-config\n";
                return kUsage;
            }
            for (auto n : ns) {
                if (n == 0 || (n & (n - 1)) != 0) {
                    err << "error: --n values must be powers of two\n";
                    return kUsage;
                }
            }
            const auto rows = run_bench(*src, ns, reps, seed);
            const std::string csv = bench_csv(rows);
            if (csv_path.empty()) {
                out << csv;
            } else {
                const std::vector<std::uint8_t> bytes(csv.begin(), csv.end());
                write_file(csv_path, bytes);
                out << rows.size() << " rows written to " << csv_path << '\n';
            }
            return kOk;
        }
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kIo;
    } catch (const CorruptInput& e) {
        err << "error: corrupt input: " << e.what() << '\n';
        return kCorrupt;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}

}  // namespace bdz::cli
