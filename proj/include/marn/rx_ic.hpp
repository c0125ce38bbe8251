#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "marn/airlink.hpp"
#include "marn/numerics.hpp"
#include "marn/relay_codec.hpp"

namespace marn {

/// One raw destination sample (time slot tau) entering a recombined observation.
struct RecombTerm {
    int tau = 0;
    double sign = 1.0;
    bool conjugate = false;
};

/**
 * @brief How a length-T codeword is split into equivalent systems.
 *
 * T=1 is one scalar system, T=2 one Alamouti system [y1; conj y2], T=4 the
 * two systems [y1 + y4; conj y2 - conj y3] and [y1 - y4; conj y2 + conj y3].
 * Symbol components carried by system k are Ma[k] s + Mb[k] conj(s).
 */
struct SplitPlan {
    int T = 1;
    /// Rows per antenna in every system (block size).
    int b = 1;
    /// [system][row] -> terms
    std::vector<std::vector<std::vector<RecombTerm>>> systems;
    std::vector<CMatrix> Ma;
    std::vector<CMatrix> Mb;

    int system_count() const { return static_cast<int>(systems.size()); }
    /// Raw samples summed per observation row; scales every noise variance.
    int kappa() const { return static_cast<int>(systems.front().front().size()); }
};

SplitPlan split_plan(int T);

/// b x b equivalent block of one antenna for channel taps h (length T, unused taps zero).
CMatrix split_block(const SplitPlan& plan, int system, std::span<const cd> h);

/// Stacked observation (b N x 1) of a raw N x T sample matrix.
CMatrix recombine(const SplitPlan& plan, int system, const CMatrix& raw);

/// obs = linear * vec(raw) + conjugate * conj(vec(raw)), vec row-major over (n, tau).
struct RecombinationMap {
    CMatrix linear;
    CMatrix conjugate;
};
RecombinationMap recombination_map(const SplitPlan& plan, int system, int N);

struct SplitSystem {
    CMatrix obs;
    /// Per source, the b N x b stack of per-antenna blocks.
    std::vector<CMatrix> G;
};

struct StackedSystems {
    SplitPlan plan;
    int N = 0;
    std::vector<SplitSystem> systems;
};

/// Builds the stacked systems from per-source taps: taps[j](n, k) is the tap of code column k at antenna n.
StackedSystems equiv_system_from_taps(const CMatrix& raw, const std::vector<CMatrix>& taps, int T);

/// Taps f_k g_kn (A_k nonzero) or conj(f_k) g_kn (B_k nonzero) for every source.
std::vector<CMatrix> dstc_taps(const ChannelRealization& ch, const DstcDesign& design);
/// Taps g_{jK+k, n} of the antennas forwarding source j.
std::vector<CMatrix> tdma_taps(const ChannelRealization& ch, int J, int K, int T);

StackedSystems equiv_system_dstc_icrec(const CMatrix& raw, const ChannelRealization& ch, const NetworkConfig& cfg);
StackedSystems equiv_system_tdma_icrec(const CMatrix& raw, const ChannelRealization& ch, const NetworkConfig& cfg);

struct IcMatrix {
    CMatrix B;
    std::vector<int> cancelled;
    int stage_count = 0;
};

/// k X* / ||X||_F^2 for a k x k block with Alamouti structure (the exact inverse).
CMatrix block_inverse(const CMatrix& block);

/// Rows pair antenna n with antenna N: [.., X_n^{-1}, .., -X_N^{-1}].
IcMatrix ic_matrix_pairwise(const std::vector<CMatrix>& int_blocks, int N);

/// Iterative cancellation of every source but target, last source first.
IcMatrix ic_iterative(const std::vector<CMatrix>& G, int N, int target);

/// b N x b M matrix whose block n has row r holding g_kn (r = 0) or conj(g_kn) (r = 1) at column k b + r.
CMatrix dstc_gtilde(const CMatrix& G, int b);

/// kappa (c^2 B Gt Gt* B* + B B*), c = dstc_icrec_gain(P, M, J).
CMatrix noise_cov_dstc_icrec(const CMatrix& B, const CMatrix& Gt, double P, int J, int M, int kappa = 1);
/// kappa (c1^2 / sum|f_i|^2 B G1 G1* B* + B B*), c1 = tdma_icrec_gain(P, M).
CMatrix noise_cov_tdma_icrec(const CMatrix& B, const CMatrix& G1, const CMatrix& f_col, double P, int M,
                             int kappa = 1);

/**
 * @brief Relay noise as seen at the destination, before IC.
 *
 * PerAntenna: independent noise at every relay antenna, covariance gain_sq Gt Gt*.
 * Shared: one soft estimate per source, so the noise rides the target's own
 * block stack, covariance gain_sq G_t G_t*. None: decode-and-forward.
 */
struct RelayNoise {
    enum class Kind { PerAntenna, Shared, None };
    Kind kind = Kind::None;
    double gain_sq = 0.0;
    CMatrix gtilde;
};

enum class IcMethod { None, Pairwise, Iterative };

struct EquivalentSystem {
    CMatrix obs;
    CMatrix H_eff;
    CMatrix R_n;
    double scale = 1.0;
    int target = 0;
    /// u = Ma s + Mb conj(s) maps the decoded symbol block onto the columns of H_eff.
    CMatrix Ma;
    CMatrix Mb;
    /// Symbols drawn from the paired constellation.
    std::vector<bool> paired;
    /// Block-diagonal IC applied to the stacked recombined observations.
    CMatrix B;
};

/// Symbol map of T symbols of one source over the plan's systems.
void single_source_map(const SplitPlan& plan, CMatrix& Ma, CMatrix& Mb, std::vector<bool>& paired);

EquivalentSystem reduce_for_source(const StackedSystems& st, int target, IcMethod method, const RelayNoise& noise,
                                   double scale);

/// Pre-IC system with every source retained (B = I).
EquivalentSystem joint_system(const StackedSystems& st, const RelayNoise& noise, double scale);

struct MlResult {
    std::vector<int> indices;
    std::vector<cd> symbols;
    std::vector<std::uint8_t> bits;
    /// Symbol groups searched independently.
    int groups = 0;
};

/// Whitened ML over the symbol block; separable groups are searched independently.
MlResult ml_decode(const EquivalentSystem& eq, const Constellation& c, const Constellation* c_pair = nullptr);

/// Exhaustive search over the whole block regardless of structure.
MlResult ml_decode_exhaustive(const EquivalentSystem& eq, const Constellation& c, const Constellation* c_pair = nullptr);

/// Joint decoding of all sources of the DSTC-ICRec front end, no IC. Returns per-source indices.
std::vector<std::vector<int>> joint_ml_decode(const CMatrix& raw, const ChannelRealization& ch,
                                              const NetworkConfig& cfg, const Constellation& c,
                                              const Constellation& c_pair);

}  // namespace marn
