#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "marn/airlink.hpp"

namespace marn {

enum class SchemeId {
    DstcIcRec = 1,
    TdmaIcRec = 2,
    IcRelayTdma = 3,
    FullTdmaDstc = 4,
    DecodeRelayIcDest = 5,
    ConcurrentJoint = 6,
};

const std::array<SchemeId, 6>& all_schemes();
int scheme_number(SchemeId id);
/// Stable name used on the command line and in CSV output.
std::string_view scheme_name(SchemeId id);
/// Accepts the stable name (any case), "schemeK" or "K".
SchemeId parse_scheme(std::string_view text);

/// Exact non-negative rational, always stored in lowest terms.
struct Rational {
    long num = 0;
    long den = 1;

    Rational() = default;
    Rational(long n, long d);
    friend bool operator==(const Rational&, const Rational&) = default;
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string str() const;
};

enum class ClaimKind { UpperBound, Achieved };

struct SchemeMeta {
    SchemeId id{};
    /// Symbols per source per channel use, end to end.
    Rational symbol_rate;
    bool relay_backward_csi = false;
    int diversity_claim = 0;
    ClaimKind claim_kind = ClaimKind::Achieved;
};

SchemeMeta scheme_meta(SchemeId id, int J, int M, int N);

/// N >= M / floor(M/J) + J - 1.
bool int_free_condition(int J, int M, int N);

/// Constellation order giving 1 bit/source/channel use with two sources.
int comparison_constellation(SchemeId id);

/// Throws UsageError naming the violated constraint when cfg cannot run under id.
void check_supported(SchemeId id, const NetworkConfig& cfg);

/// The paired constellation S' used for symbols 3 and 4 of length-4 blocks.
Constellation pair_constellation(const NetworkConfig& cfg);

struct SourceOutcome {
    std::uint64_t bits = 0;
    std::uint64_t bit_errors = 0;
};

struct TrialOutcome {
    std::uint64_t bits = 0;
    std::uint64_t bit_errors = 0;
    std::vector<SourceOutcome> per_source;
    /// Degenerate draws that were redrawn within this trial.
    int resamples = 0;
    bool resampled = false;
    /// Every attempt was degenerate; the trial carries no bits.
    bool erased = false;
};

struct TrialOptions {
    /// Zero all relay and destination noise.
    bool noiseless = false;
    int max_resamples = 10;
};

TrialOutcome run_trial(SchemeId id, const NetworkConfig& cfg, RngStream& rng, const TrialOptions& opts = {});

}  // namespace marn
