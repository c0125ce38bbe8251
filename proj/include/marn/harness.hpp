#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "marn/airlink.hpp"
#include "marn/analysis.hpp"
#include "marn/schemes.hpp"

namespace marn {

struct Topology {
    int J = 2;
    int M = 2;
    int N = 2;
    friend bool operator==(const Topology&, const Topology&) = default;
};

/// Parses "J,M,N" (also accepts 'x' as separator).
Topology parse_topology(std::string_view text);

/// "bpsk", "qpsk", "8psk", "16psk" or a bare order.
int parse_modulation(std::string_view text);

/// Parses "start:step:stop" (inclusive stop, tolerance 1e-9) or a single value.
std::vector<double> parse_snr_grid(std::string_view text);

struct StopRule {
    /// Stop a point once this many bit errors are seen; 0 disables the rule.
    std::uint64_t min_errors = 200;
    std::uint64_t max_trials = 2'000'000;
};

struct ExperimentSpec {
    std::string name;
    std::vector<SchemeId> schemes;
    std::vector<Topology> topologies;
    std::vector<double> snr_db;
    /// Constellation per scheme; schemes absent from the map use default_constellation.
    std::map<SchemeId, ConstellationSpec> constellation;
    ConstellationSpec default_constellation;
    StopRule stop;
    std::uint64_t seed = 1;
    std::string out;

    ConstellationSpec constellation_for(SchemeId id) const;
    /// Throws UsageError on an empty or non-increasing grid and on unsupported scheme/topology pairs.
    void validate() const;
};

struct BerPoint {
    std::string scheme;
    int J = 0;
    int M = 0;
    int N = 0;
    double snr_db = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t erasures = 0;
    std::uint64_t bits = 0;
    std::uint64_t bit_errors = 0;
    double ber = 0.0;
    double ci95_lo = 0.0;
    double ci95_hi = 1.0;
    friend bool operator==(const BerPoint&, const BerPoint&) = default;
};

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
};

/// Wilson score interval for k successes in n trials; n = 0 gives [0, 1].
Interval wilson_interval(std::uint64_t k, std::uint64_t n, double z = 1.959964);

struct RunOptions {
    /// Worker threads; 0 selects MARN_SIM_WORKERS or the hardware concurrency.
    int workers = 0;
    std::uint64_t chunk_trials = 64;
    /// Receives one line per finished point; may be null.
    std::ostream* progress = nullptr;
};

int resolve_workers(int requested);

/// Runs one (scheme, topology, snr) cell. Trial t of the cell draws from its own stream, and the stop rule
/// is applied to whole chunks in order, so the result does not depend on the worker count.
BerPoint run_point(SchemeId id, const NetworkConfig& cfg, double snr_db, const StopRule& stop, std::uint64_t seed,
                   const RunOptions& opts = {});

std::vector<BerPoint> run_experiment(const ExperimentSpec& spec, const RunOptions& opts = {});

struct DiversitySpec {
    SchemeId scheme = SchemeId::TdmaIcRec;
    std::vector<Topology> topologies;
    double snr_db = 30.0;
    std::uint64_t trials = 1'000'000;
    std::uint64_t seed = 1;
};

struct DiversityResult {
    SchemeId scheme{};
    Topology topology;
    DiversityEstimate estimate;
};

/// Channel-only sampler of the normalized SNR of source 1 (DSTC-ICRec and TDMA-ICRec only).
GammaSampler scheme_gamma_sampler(SchemeId id, const NetworkConfig& cfg);

/// Draws all samples (in parallel, deterministically) and applies outage_diversity.
DiversityEstimate outage_diversity_parallel(const GammaSampler& sampler, std::uint64_t trials, std::uint64_t seed,
                                            const RunOptions& opts = {});

std::vector<DiversityResult> run_diversity(const DiversitySpec& spec, const RunOptions& opts = {});

struct CurveSlope {
    std::string scheme;
    Topology topology;
    DiversityEstimate estimate;
};

/// ber_slope per curve (points grouped by scheme and topology, zero-error points skipped).
std::vector<CurveSlope> curve_slopes(const std::vector<BerPoint>& points, std::size_t window);

enum class OutputFormat { Csv, PlotData };

OutputFormat parse_format(std::string_view text);

inline constexpr std::string_view csv_header = "scheme,J,M,N,snr_db,trials,erasures,bits,bit_errors,ber,ci95_lo,ci95_hi";

void write_csv(std::ostream& os, const std::vector<BerPoint>& points);
/// One block per curve, "# scheme J M N" then "snr_db ber" rows; blocks separated by a blank line.
void write_plotdata(std::ostream& os, const std::vector<BerPoint>& points);
/// Throws UsageError on an empty point list or an unwritable path.
void emit(const std::vector<BerPoint>& points, OutputFormat format, const std::string& path);
std::vector<BerPoint> read_csv(std::istream& is);

/// Canned experiments fig4 .. fig8.
const std::vector<std::string>& canned_names();
ExperimentSpec canned_spec(std::string_view name);

/// Flat "key = value" text with [section] headers; keys inside a section are returned as "section.key".
std::map<std::string, std::string> parse_config_text(std::string_view text);
std::map<std::string, std::string> read_config_file(const std::string& path);

/**
 * Fills spec fields from a parsed config. Recognized keys: scheme, config, snr_db, mod, seed, min_errors,
 * max_trials, out. A key "section.k" takes precedence over a bare "k". Lists are comma or ';' separated,
 * topologies ';' separated.
 */
void apply_config(ExperimentSpec& spec, const std::map<std::string, std::string>& cfg, std::string_view section);

}  // namespace marn
