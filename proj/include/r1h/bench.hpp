#ifndef R1H_BENCH_HPP
#define R1H_BENCH_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <r1h/doa.hpp>
#include <r1h/noise.hpp>

namespace r1h
{

enum class Method
{
    r1h_l2,
    r1h_l1,
    matrix_pencil,
    hankel_music,
    fbss_music,
    max_energy,
    toeplitz_music,
    matched_filter_ml
};

std::string_view to_string(Method m);
/// Throws InvalidConfiguration on an unknown name.
Method parse_method(std::string_view name);

struct ThetaPolicy
{
    enum class Kind
    {
        fixed,
        uniform
    };
    Kind kind = Kind::uniform;
    double value = 0.0;
    double low = -85.0;
    double high = 85.0;
};

enum class WindowRule
{
    half_of_m,
    explicit_list
};

///
/// Monte Carlo sweep description. Loaded from an INI file:
///
///     schema_version = 1
///     [experiment]
///     array_sizes = 16, 32       ; M values
///     d_rule = half_of_m         ; or explicit, with windows = 8, 16
///     snr_db = -5, 0, 5, 10
///     trials = 500
///     methods = r1h_l2, r1h_l1, max_energy
///     theta0 = uniform           ; or fixed, with theta0_value = 20
///     master_seed = 1
///     [noise]
///     kind = white               ; white | impulsive | none
///     sigma2 = 1
///     [output]
///     csv = results.csv
///
/// The full key list is in README.md.
///
struct ExperimentConfig
{
    static constexpr int current_schema = 1;

    int schema_version = current_schema;
    std::vector<std::size_t> array_sizes{16};
    WindowRule window_rule = WindowRule::half_of_m;
    std::vector<std::size_t> windows;
    std::vector<double> snr_db{0.0};
    NoiseModel noise = NoiseModel::white(1.0);
    /// Acquire without noise; the amplitude is still calibrated against
    /// `noise` so the scale matches the noisy runs.
    bool noiseless = false;
    std::size_t trials = 500;
    std::vector<Method> methods{Method::r1h_l2};
    ThetaPolicy theta0;
    std::uint64_t master_seed = 1;
    double theta_step = 0.01;
    double spacing_ratio = 0.5;
    std::optional<FaultSpec> faults;
    bool refine = false;
    bool l1_two_stage = true;
    std::size_t threads = 1;
    /// Exit status 2 when the failed fraction exceeds this.
    double failure_threshold = 0.0;
    std::string csv_path = "results.csv";
    std::string plot_path;
    std::string plot_format = "svg";

    /// Throws InvalidConfiguration.
    void validate() const;

    std::size_t window_for(std::size_t index) const;

    /// "white", "impulsive" or "none".
    std::string noise_label() const;

    static ExperimentConfig parse_ini(const std::string& text);
    /// Throws IoError if unreadable, InvalidConfiguration if malformed.
    static ExperimentConfig load(const std::filesystem::path& path);
};

struct TrialRecord
{
    Method method = Method::r1h_l2;
    std::size_t elements = 0;
    std::size_t window = 0;
    double snr_db = 0.0;
    std::string noise;
    double theta0 = 0.0;
    /// NaN when the estimator failed.
    double theta_hat = 0.0;
    double abs_error = 0.0;
    std::uint64_t seed = 0;
    bool ok = true;
    /// Not written to CSV, which must be reproducible byte for byte.
    double wall_seconds = 0.0;
    std::string error;
};

struct CellSummary
{
    Method method = Method::r1h_l2;
    std::size_t elements = 0;
    std::size_t window = 0;
    double snr_db = 0.0;
    std::size_t ok = 0;
    std::size_t failed = 0;
    /// Over successful trials; NaN when none succeeded.
    double mean_abs_error = 0.0;
};

struct ExperimentResult
{
    /// Ordered by M, then SNR, then method (config order), then trial.
    std::vector<TrialRecord> records;
    std::vector<CellSummary> summary;

    std::size_t failures() const;
    double failed_fraction() const;
};

/// Trial seed shared by every method: derive_seed(master, {M, snr index, trial}).
std::uint64_t trial_seed(std::uint64_t master, std::size_t elements, std::size_t snr_index,
                         std::size_t trial);

/// The scene for one trial, identical for every method.
DoaScene make_trial_scene(const ExperimentConfig& cfg, std::size_t elements, std::size_t window,
                          double snr_db, std::uint64_t seed);

/// Estimated angle in degrees. Throws on estimator failure.
double run_method(Method method, const DoaScene& scene, const ExperimentConfig& cfg);

ExperimentResult run_experiment(const ExperimentConfig& cfg);

std::vector<CellSummary> summarize(const std::vector<TrialRecord>& records);

std::string format_csv(const std::vector<TrialRecord>& records);
std::vector<TrialRecord> parse_csv(const std::string& text);

/// Throws IoError naming the path.
void emit_csv(const std::vector<TrialRecord>& records, const std::filesystem::path& path);

/// Mean absolute error against M, log y axis, one series per method and
/// SNR. `format` is "svg" or "gnuplot"; anything else throws InvalidArgument.
std::string format_plot(const std::vector<CellSummary>& summary, std::string_view format);
void emit_plot(const std::vector<CellSummary>& summary, const std::filesystem::path& path,
               std::string_view format);

} // namespace r1h

#endif
