#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "nanolaser/harness/results.hpp"
#include "nanolaser/io.hpp"
#include "nanolaser/model.hpp"

namespace nanolaser {

namespace {

std::string opt(const std::optional<double>& x) { return format_optional(x); }

std::uint64_t parse_u64(std::string_view s) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        throw Error("invalid integer field '" + std::string(s) + "'");
    return v;
}

int parse_int(std::string_view s) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        throw Error("invalid integer field '" + std::string(s) + "'");
    return v;
}

// Reads the header and the remaining lines split into fields.
std::vector<std::vector<std::string>> read_table(std::istream& in, std::string_view header) {
    std::string line;
    if (!std::getline(in, line)) throw Error("empty CSV input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != header) throw Error("unexpected CSV header: " + line);
    const std::size_t width = split_csv(header).size();
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        auto f = split_csv(line);
        if (f.size() != width)
            throw Error("CSV row has " + std::to_string(f.size()) + " fields, expected " + std::to_string(width));
        rows.push_back(std::move(f));
    }
    return rows;
}

template <class Writer>
void write_file(const std::filesystem::path& path, Writer&& writer) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    writer(out);
    out.flush();
    if (!out) throw Error("write failed: " + path.string());
}

} // namespace

void write_sweep_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
    out << kSweepHeader << '\n';
    for (const auto& r : rows) {
        out << r.method << ',' << r.n0 << ',' << format_double(r.gamma_P) << ',' << opt(r.mean_np) << ','
            << opt(r.mean_ne) << ',' << opt(r.g2_0) << ',' << opt(r.rin) << ',' << opt(r.corr_ratio) << ','
            << opt(r.err_np) << ',' << opt(r.err_g2) << ',' << opt(r.err_rin) << ',' << r.steps << ','
            << opt(r.wallclock_s) << ',';
        if (r.seed) out << *r.seed;
        out << ',' << r.status << '\n';
    }
}

void write_run_csv(std::ostream& out, const std::vector<RunRow>& rows) {
    out << kRunHeader << '\n';
    for (const auto& r : rows) {
        out << r.method << ',' << r.n0 << ',' << format_double(r.gamma_P) << ',' << r.run << ',' << r.variant
            << ',' << opt(r.mean_np) << ',' << opt(r.mean_ne) << ',' << opt(r.g2_0) << ',' << opt(r.rin) << ','
            << opt(r.corr_ratio) << ',' << r.steps << ',' << opt(r.wallclock_s) << ',' << r.seed << ','
            << r.status << '\n';
    }
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
    out << kBenchHeader << '\n';
    for (const auto& r : rows) {
        out << format_double(r.budget_s) << ',' << r.method << ',' << r.n0 << ',' << format_double(r.gamma_P)
            << ',' << opt(r.delta) << ',' << opt(r.delta_np) << ',' << opt(r.delta_g2) << ','
            << opt(r.delta_rin) << ',' << r.steps << ',' << opt(r.wallclock_s) << ',' << r.repetition << ','
            << r.seed << ',' << r.status << '\n';
    }
}

std::vector<ResultRow> parse_sweep_csv(std::istream& in) {
    std::vector<ResultRow> rows;
    for (const auto& f : read_table(in, kSweepHeader)) {
        ResultRow r;
        r.method = f[0];
        r.n0 = parse_int(f[1]);
        r.gamma_P = parse_double(f[2]);
        r.mean_np = parse_optional(f[3]);
        r.mean_ne = parse_optional(f[4]);
        r.g2_0 = parse_optional(f[5]);
        r.rin = parse_optional(f[6]);
        r.corr_ratio = parse_optional(f[7]);
        r.err_np = parse_optional(f[8]);
        r.err_g2 = parse_optional(f[9]);
        r.err_rin = parse_optional(f[10]);
        r.steps = parse_u64(f[11]);
        r.wallclock_s = parse_optional(f[12]);
        if (!f[13].empty()) r.seed = parse_u64(f[13]);
        r.status = f[14];
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<RunRow> parse_run_csv(std::istream& in) {
    std::vector<RunRow> rows;
    for (const auto& f : read_table(in, kRunHeader)) {
        RunRow r;
        r.method = f[0];
        r.n0 = parse_int(f[1]);
        r.gamma_P = parse_double(f[2]);
        r.run = parse_int(f[3]);
        r.variant = f[4];
        r.mean_np = parse_optional(f[5]);
        r.mean_ne = parse_optional(f[6]);
        r.g2_0 = parse_optional(f[7]);
        r.rin = parse_optional(f[8]);
        r.corr_ratio = parse_optional(f[9]);
        r.steps = parse_u64(f[10]);
        r.wallclock_s = parse_optional(f[11]);
        r.seed = parse_u64(f[12]);
        r.status = f[13];
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<BenchRow> parse_bench_csv(std::istream& in) {
    std::vector<BenchRow> rows;
    for (const auto& f : read_table(in, kBenchHeader)) {
        BenchRow r;
        r.budget_s = parse_double(f[0]);
        r.method = f[1];
        r.n0 = parse_int(f[2]);
        r.gamma_P = parse_double(f[3]);
        r.delta = parse_optional(f[4]);
        r.delta_np = parse_optional(f[5]);
        r.delta_g2 = parse_optional(f[6]);
        r.delta_rin = parse_optional(f[7]);
        r.steps = parse_u64(f[8]);
        r.wallclock_s = parse_optional(f[9]);
        r.repetition = parse_int(f[10]);
        r.seed = parse_u64(f[11]);
        r.status = f[12];
        rows.push_back(std::move(r));
    }
    return rows;
}

std::filesystem::path runs_path(const std::filesystem::path& csv) {
    auto p = csv;
    p += ".runs.csv";
    return p;
}

std::filesystem::path metadata_path(const std::filesystem::path& csv) {
    auto p = csv;
    p += ".meta.json";
    return p;
}

void emit_sweep(const std::filesystem::path& path, const std::vector<ResultRow>& rows,
                const std::vector<RunRow>* runs, const nlohmann::json& metadata) {
    write_file(path, [&](std::ostream& out) { write_sweep_csv(out, rows); });
    if (runs) write_file(runs_path(path), [&](std::ostream& out) { write_run_csv(out, *runs); });
    write_file(metadata_path(path), [&](std::ostream& out) { out << metadata.dump(2) << '\n'; });
}

void emit_bench(const std::filesystem::path& path, const std::vector<BenchRow>& rows,
                const nlohmann::json& metadata) {
    write_file(path, [&](std::ostream& out) { write_bench_csv(out, rows); });
    write_file(metadata_path(path), [&](std::ostream& out) { out << metadata.dump(2) << '\n'; });
}

} // namespace nanolaser
