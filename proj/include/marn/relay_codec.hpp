#pragma once

#include <vector>

#include "marn/airlink.hpp"
#include "marn/numerics.hpp"

namespace marn {

/**
 * @brief Per-antenna encoding matrices of a distributed space-time code.
 *
 * Antenna i transmits A_i r + B_i conj(r). Exactly one of A_i, B_i is
 * nonzero and it is a signed permutation, cached as (perm, sign) so the
 * hot path never multiplies matrices.
 */
struct DstcDesign {
    struct Antenna {
        CMatrix A;
        CMatrix B;
        bool conjugated = false;
        std::vector<int> perm;
        std::vector<double> sign;
    };

    int T = 1;
    int M_used = 1;
    std::vector<Antenna> pairs;

    /// out[tau] = sign[tau] * (conj?)(in[perm[tau]]).
    void apply(int antenna, const cd* in, cd* out) const;
};

/// Smallest power of two >= m.
int codeword_length(int m);

/// Encoding matrices for M relay antennas; M in 1..4.
DstcDesign dstc_design(int M);

/// sqrt(P / (M (J P + 1))).
double dstc_icrec_gain(double P, int M, int J);

/// sqrt(P / (M P + M)).
double tdma_icrec_gain(double P, int M);

/// Relay transform t_i = c (A_i r_i + B_i conj(r_i)) with c = dstc_icrec_gain(P, M, J).
std::vector<CMatrix> encode_dstc_icrec(const std::vector<CMatrix>& received, const DstcDesign& design, double P, int J);

struct SoftEstimate {
    CMatrix values;
    double noise_var = 0.0;
    int source = 0;
};

/// Maximum-ratio combining of one source's slots across relay antennas.
SoftEstimate mrc_soft_estimate(const std::vector<CMatrix>& received, const CMatrix& f_col, double P, int source = 0);

/**
 * @brief Per-source forwarding of TDMA-ICRec.
 *
 * Source j is encoded with design_per_source on antennas j*K .. j*K+K-1,
 * K = design_per_source.M_used. Returns an M x T matrix whose row i is the
 * signal of antenna i. Antennas past J*K stay silent.
 */
CMatrix encode_tdma_icrec(const std::vector<SoftEstimate>& estimates, const DstcDesign& design_per_source, double P,
                          int M);
CMatrix encode_tdma_icrec(const std::vector<SoftEstimate>& estimates, const DstcDesign& design_per_source, int M,
                          double gain);

/// Result of hard decisions at the relay: unit-energy points plus their indices.
struct RelayDecision {
    std::vector<SoftEstimate> hard;
    std::vector<std::vector<int>> indices;
};

/**
 * @brief Symbol-wise ML decision on each soft estimate.
 *
 * Symbols with index >= 2 of a length-4 block use the paired constellation.
 * The decided points are unit energy and noise_var becomes 0.
 */
RelayDecision relay_decode_forward(const std::vector<SoftEstimate>& estimates, const Constellation& c,
                                   const Constellation& c_pair, double P);

/// Gain for forwarding unit-energy hard symbols: sqrt(P / M).
double decode_forward_gain(double P, int M);

}  // namespace marn
