#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "marn/airlink.hpp"
#include "marn/numerics.hpp"
#include "marn/rx_ic.hpp"

namespace marn {

/// h* R^{-1} h for a column vector h.
double snr_direct(const CMatrix& h, const CMatrix& R_n);

/// tr(H* R^{-1} H), the SNR of a quasi-orthogonal block decoded jointly.
double snr_direct_trace(const CMatrix& H, const CMatrix& R_n);

/// Equivalent system of source 1 of TDMA-ICRec with unit scale: H_eff = B G_1, R_n from the MRC relay noise.
EquivalentSystem tdma_icrec_system(const ChannelRealization& ch, const NetworkConfig& cfg);

/**
 * @brief Closed-form SNR of source 1 of TDMA-ICRec.
 *
 * M = 2J: x y / (x + c1^2 y) with y = g1* B* (B B*)^{-1} B g1.
 * M = 4J: x y / (x + c1^2 y) + x z / (x + c1^2 z) over the two split systems.
 * x = sum_i |f_i^(1)|^2.
 */
double snr_tdma_closed_form(const ChannelRealization& ch, const NetworkConfig& cfg);

/// The value snr_tdma_closed_form must match: first column (M = 2J) or trace (M = 4J) of the direct system.
double snr_tdma_direct(const ChannelRealization& ch, const NetworkConfig& cfg);

/// Equivalent system of source 1 of DSTC-ICRec with unit scale.
EquivalentSystem dstc_icrec_system(const ChannelRealization& ch, const NetworkConfig& cfg);

/// Normalized SNR of s_1 of source 1 under DSTC-ICRec: sum over split systems of the first-column quadratic form.
double snr_dstc_direct(const ChannelRealization& ch, const NetworkConfig& cfg);

/// tr(Gt* Gt) f1* Theta f1, Theta the projector onto the null space of f^(2..J).
double snr_upper_bound_dstc(const ChannelRealization& ch, const NetworkConfig& cfg);

struct FitPoint {
    double x = 0.0;
    double y = 0.0;
    double weight = 1.0;
};

struct DiversityEstimate {
    double slope = 0.0;
    double stderr = 0.0;
    /// Range of the abscissa used (epsilon for outage fits, dB for BER fits).
    double fit_lo = 0.0;
    double fit_hi = 0.0;
    std::vector<FitPoint> points;
    /// False when fewer than three usable points exist; slope is then NaN.
    bool valid = false;
};

using GammaSampler = std::function<double(RngStream&)>;

/// Geometric grid (factor 2) from the 10% sample quantile down to the smallest sample.
std::vector<double> default_eps_grid(const std::vector<double>& samples, std::uint64_t min_events = 50);

/**
 * Weighted least-squares slope of log P(gamma < eps) vs log eps, weights = event counts.
 * Points with < min_events are dropped. With four or more points the model carries an extra
 * term linear in eps, so the slope is the small-eps exponent rather than a local secant.
 */
DiversityEstimate outage_diversity_from_samples(const std::vector<double>& samples, const std::vector<double>& eps_grid,
                                                std::uint64_t min_events = 50);

/// Draws trials samples, trial t from RngStream(seed, t). An empty grid selects default_eps_grid.
DiversityEstimate outage_diversity(const GammaSampler& sampler, std::vector<double> eps_grid, std::uint64_t trials,
                                   std::uint64_t seed = 1);

/// Least-squares slope of -log10(ber) vs snr_db/10 over the last `window` points (0 = all).
DiversityEstimate ber_slope(const std::vector<std::pair<double, double>>& points, std::size_t window = 0);

/// Sum of a gamma_n of the k samplers with one shared gamma_g, harmonic-mean combined; 0/0 is 0.
GammaSampler lemma1_composite(std::vector<GammaSampler> g_samplers, GammaSampler gamma_g);

/// Sum of d unit exponentials (Gamma with shape d).
GammaSampler gamma_sampler(int shape);

}  // namespace marn
