#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace nanolaser {

inline constexpr std::string_view kSweepHeader =
    "method,n0,gamma_P,mean_np,mean_ne,g2_0,rin,corr_ratio,err_np,err_g2,err_rin,steps,wallclock_s,seed,status";
inline constexpr std::string_view kRunHeader =
    "method,n0,gamma_P,run,variant,mean_np,mean_ne,g2_0,rin,corr_ratio,steps,wallclock_s,seed,status";
inline constexpr std::string_view kBenchHeader =
    "budget_s,method,n0,gamma_P,delta,delta_np,delta_g2,delta_rin,steps,wallclock_s,repetition,seed,status";

/// One (pump, method) point of a sweep. Statistics are empty when undefined
/// or when every run at the point failed.
struct ResultRow {
    std::string method;
    int n0 = 0;
    double gamma_P = 0.0;
    std::optional<double> mean_np;
    std::optional<double> mean_ne;
    std::optional<double> g2_0;
    std::optional<double> rin;
    std::optional<double> corr_ratio;
    std::optional<double> err_np;
    std::optional<double> err_g2;
    std::optional<double> err_rin;
    std::uint64_t steps = 0;
    std::optional<double> wallclock_s;
    std::optional<std::uint64_t> seed;
    std::string status = "ok";

    bool operator==(const ResultRow&) const = default;
};

/// One trajectory of a sweep (variant "base" or "doubled").
struct RunRow {
    std::string method;
    int n0 = 0;
    double gamma_P = 0.0;
    int run = 0;
    std::string variant = "base";
    std::optional<double> mean_np;
    std::optional<double> mean_ne;
    std::optional<double> g2_0;
    std::optional<double> rin;
    std::optional<double> corr_ratio;
    std::uint64_t steps = 0;
    std::optional<double> wallclock_s;
    std::uint64_t seed = 0;
    std::string status = "ok";

    bool operator==(const RunRow&) const = default;
};

struct BenchRow {
    double budget_s = 0.0;
    std::string method;
    int n0 = 0;
    double gamma_P = 0.0;
    std::optional<double> delta;
    std::optional<double> delta_np;
    std::optional<double> delta_g2;
    std::optional<double> delta_rin;
    std::uint64_t steps = 0;
    std::optional<double> wallclock_s;
    int repetition = 0;
    std::uint64_t seed = 0;
    std::string status = "ok";

    bool operator==(const BenchRow&) const = default;
};

void write_sweep_csv(std::ostream& out, const std::vector<ResultRow>& rows);
void write_run_csv(std::ostream& out, const std::vector<RunRow>& rows);
void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);

/// Inverse of the writers; throws Error on a header or field mismatch.
std::vector<ResultRow> parse_sweep_csv(std::istream& in);
std::vector<RunRow> parse_run_csv(std::istream& in);
std::vector<BenchRow> parse_bench_csv(std::istream& in);

/// Writes `path`, `<path>.runs.csv` (when `runs` is given) and the metadata
/// sidecar `<path>.meta.json`. Throws Error naming the path on I/O failure.
void emit_sweep(const std::filesystem::path& path, const std::vector<ResultRow>& rows,
                const std::vector<RunRow>* runs, const nlohmann::json& metadata);
void emit_bench(const std::filesystem::path& path, const std::vector<BenchRow>& rows,
                const nlohmann::json& metadata);

std::filesystem::path runs_path(const std::filesystem::path& csv);
std::filesystem::path metadata_path(const std::filesystem::path& csv);

} // namespace nanolaser
