#include "marn/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "marn/relay_codec.hpp"

namespace marn {

namespace {

DiversityEstimate fit(std::vector<FitPoint> pts) {
    DiversityEstimate est;
    est.points = pts;
    if (pts.size() < 3) {
        est.slope = std::numeric_limits<double>::quiet_NaN();
        est.stderr = std::numeric_limits<double>::quiet_NaN();
        return est;
    }
    double sw = 0.0, sx = 0.0, sy = 0.0;
    for (const FitPoint& p : pts) {
        sw += p.weight;
        sx += p.weight * p.x;
        sy += p.weight * p.y;
    }
    const double mx = sx / sw, my = sy / sw;
    double sxx = 0.0, sxy = 0.0;
    for (const FitPoint& p : pts) {
        sxx += p.weight * (p.x - mx) * (p.x - mx);
        sxy += p.weight * (p.x - mx) * (p.y - my);
    }
    if (!(sxx > 0.0)) {
        est.slope = std::numeric_limits<double>::quiet_NaN();
        est.stderr = std::numeric_limits<double>::quiet_NaN();
        return est;
    }
    est.slope = sxy / sxx;
    const double intercept = my - est.slope * mx;
    double rss = 0.0;
    for (const FitPoint& p : pts) {
        const double r = p.y - intercept - est.slope * p.x;
        rss += p.weight * r * r;
    }
    est.stderr = std::sqrt(rss / (static_cast<double>(pts.size()) - 2.0) / sxx);
    est.valid = std::isfinite(est.slope) && std::isfinite(est.stderr);
    return est;
}

CMatrix zero_raw(const NetworkConfig& cfg, int T) {
    return CMatrix(static_cast<std::size_t>(cfg.N), static_cast<std::size_t>(T));
}

/// Weighted fit of y = c + d x + a exp(x); the exp(x) term absorbs the first-order CDF correction.
DiversityEstimate fit_tail(std::vector<FitPoint> pts) {
    DiversityEstimate est;
    est.points = pts;
    est.slope = std::numeric_limits<double>::quiet_NaN();
    est.stderr = std::numeric_limits<double>::quiet_NaN();
    const std::size_t n = pts.size();
    if (n < 4) return est;
    CMatrix normal(3, 3), rhs(3, 1);
    for (const FitPoint& p : pts) {
        const double basis[3] = {1.0, p.x, std::exp(p.x)};
        for (std::size_t i = 0; i < 3; ++i) {
            rhs[i] += p.weight * basis[i] * p.y;
            for (std::size_t j = 0; j < 3; ++j) normal(i, j) += p.weight * basis[i] * basis[j];
        }
    }
    try {
        const HermitianFactor f(normal, false);
        const CMatrix coef = f.solve(rhs);
        double rss = 0.0;
        for (const FitPoint& p : pts) {
            const double r = p.y - (coef[0].real() + coef[1].real() * p.x + coef[2].real() * std::exp(p.x));
            rss += p.weight * r * r;
        }
        est.slope = coef[1].real();
        est.stderr = std::sqrt(rss / static_cast<double>(n - 3) * f.quadratic_form(CMatrix(3, 1, {0.0, 1.0, 0.0})));
        est.valid = std::isfinite(est.slope) && std::isfinite(est.stderr);
    } catch (const NumericError&) {
        return est;
    }
    return est;
}

}  // namespace

double snr_direct(const CMatrix& h, const CMatrix& R_n) {
    if (h.cols() != 1 || h.rows() != R_n.rows()) throw UsageError("snr_direct: h must be a column conformal with R_n");
    return HermitianFactor(R_n).quadratic_form(h);
}

double snr_direct_trace(const CMatrix& H, const CMatrix& R_n) {
    if (H.rows() != R_n.rows()) throw UsageError("snr_direct_trace: H and R_n not conformal");
    const HermitianFactor f(R_n);
    double total = 0.0;
    for (std::size_t c = 0; c < H.cols(); ++c) total += f.quadratic_form(H.col(c));
    return total;
}

EquivalentSystem tdma_icrec_system(const ChannelRealization& ch, const NetworkConfig& cfg) {
    const int K = cfg.M / cfg.J;
    const int T = codeword_length(K);
    const StackedSystems st = equiv_system_from_taps(zero_raw(cfg, T), tdma_taps(ch, cfg.J, K, T), T);
    const double c1 = tdma_icrec_gain(cfg.P, cfg.M);
    const double x = ch.F.col(0).frobenius_norm_sq();
    if (!(x > 0.0)) throw NumericError("tdma_icrec_system: zero source-relay channel");
    const RelayNoise noise{RelayNoise::Kind::Shared, c1 * c1 / x, CMatrix()};
    return reduce_for_source(st, 0, IcMethod::Iterative, noise, 1.0);
}

double snr_tdma_closed_form(const ChannelRealization& ch, const NetworkConfig& cfg) {
    if (cfg.M != 2 * cfg.J && cfg.M != 4 * cfg.J)
        throw UsageError("snr_tdma_closed_form: needs M = 2J or M = 4J, got M=" + std::to_string(cfg.M) +
                         " J=" + std::to_string(cfg.J));
    const int K = cfg.M / cfg.J;
    const int T = codeword_length(K);
    const StackedSystems st = equiv_system_from_taps(zero_raw(cfg, T), tdma_taps(ch, cfg.J, K, T), T);
    const double c1 = tdma_icrec_gain(cfg.P, cfg.M);
    const double x = ch.F.col(0).frobenius_norm_sq();
    if (x == 0.0) return 0.0;
    double gamma = 0.0;
    for (const SplitSystem& sys : st.systems) {
        const CMatrix B = ic_iterative(sys.G, st.N, 0).B;
        gamma += matrix_inversion_lemma_check(times_adjoint(B, B), B * sys.G.front(), x / (c1 * c1));
    }
    return gamma;
}

double snr_tdma_direct(const ChannelRealization& ch, const NetworkConfig& cfg) {
    const EquivalentSystem eq = tdma_icrec_system(ch, cfg);
    if (cfg.M == 2 * cfg.J) return snr_direct(eq.H_eff.col(0), eq.R_n);
    return snr_direct_trace(eq.H_eff, eq.R_n);
}

EquivalentSystem dstc_icrec_system(const ChannelRealization& ch, const NetworkConfig& cfg) {
    const DstcDesign design = dstc_design(cfg.M);
    const StackedSystems st = equiv_system_from_taps(zero_raw(cfg, design.T), dstc_taps(ch, design), design.T);
    const double c = dstc_icrec_gain(cfg.P, cfg.M, cfg.J);
    const RelayNoise noise{RelayNoise::Kind::PerAntenna, c * c, dstc_gtilde(ch.G, st.plan.b)};
    return reduce_for_source(st, 0, cfg.J == 2 ? IcMethod::Pairwise : IcMethod::Iterative, noise, 1.0);
}

double snr_dstc_direct(const ChannelRealization& ch, const NetworkConfig& cfg) {
    const EquivalentSystem eq = dstc_icrec_system(ch, cfg);
    const HermitianFactor f(eq.R_n);
    const std::size_t b = static_cast<std::size_t>(split_plan(codeword_length(cfg.M)).b);
    double gamma = 0.0;
    for (std::size_t c = 0; c < eq.H_eff.cols(); c += b) gamma += f.quadratic_form(eq.H_eff.col(c));
    return gamma;
}

double snr_upper_bound_dstc(const ChannelRealization& ch, const NetworkConfig& cfg) {
    const CMatrix f1 = ch.F.col(0);
    double proj = f1.frobenius_norm_sq();
    if (cfg.J > 1) {
        const CMatrix others = ch.F.block(0, 1, ch.F.rows(), ch.F.cols() - 1);
        proj = inner(f1, null_space_projector(others).matrix * f1).real();
    }
    const int b = split_plan(codeword_length(cfg.M)).b;
    return dstc_gtilde(ch.G, b).frobenius_norm_sq() * std::max(proj, 0.0);
}

std::vector<double> default_eps_grid(const std::vector<double>& samples, std::uint64_t min_events) {
    if (samples.empty()) return {};
    std::vector<double> sorted = samples;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t rank = std::max<std::size_t>(sorted.size() / 10, static_cast<std::size_t>(min_events));
    double eps = sorted[std::min(rank, sorted.size() - 1)];
    std::vector<double> grid;
    if (!(eps > 0.0) || !std::isfinite(eps)) return grid;
    for (int i = 0; i < 64 && eps > sorted.front(); ++i, eps /= 2.0) grid.push_back(eps);
    return grid;
}

DiversityEstimate outage_diversity_from_samples(const std::vector<double>& samples, const std::vector<double>& eps_grid,
                                                std::uint64_t min_events) {
    std::vector<double> sorted = samples;
    std::sort(sorted.begin(), sorted.end());
    std::vector<FitPoint> pts;
    for (double eps : eps_grid) {
        const auto events = static_cast<std::uint64_t>(std::lower_bound(sorted.begin(), sorted.end(), eps) - sorted.begin());
        if (events < min_events) break;
        const double p = static_cast<double>(events) / static_cast<double>(sorted.size());
        pts.push_back({std::log(eps), std::log(p), static_cast<double>(events)});
    }
    DiversityEstimate est = pts.size() >= 4 ? fit_tail(pts) : fit(pts);
    if (!pts.empty()) {
        est.fit_lo = std::exp(pts.back().x);
        est.fit_hi = std::exp(pts.front().x);
    }
    return est;
}

DiversityEstimate outage_diversity(const GammaSampler& sampler, std::vector<double> eps_grid, std::uint64_t trials,
                                   std::uint64_t seed) {
    std::vector<double> samples;
    samples.reserve(trials);
    for (std::uint64_t t = 0; t < trials; ++t) {
        RngStream rng(seed, t);
        samples.push_back(sampler(rng));
    }
    if (eps_grid.empty()) eps_grid = default_eps_grid(samples, 50);
    return outage_diversity_from_samples(samples, eps_grid);
}

DiversityEstimate ber_slope(const std::vector<std::pair<double, double>>& points, std::size_t window) {
    std::vector<std::pair<double, double>> sorted = points;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t start = (window == 0 || window >= sorted.size()) ? 0 : sorted.size() - window;
    std::vector<FitPoint> pts;
    for (std::size_t i = start; i < sorted.size(); ++i) {
        if (!(sorted[i].second > 0.0)) throw UsageError("ber_slope: BER values must be positive");
        pts.push_back({sorted[i].first / 10.0, -std::log10(sorted[i].second), 1.0});
    }
    DiversityEstimate est = fit(pts);
    if (!pts.empty()) {
        est.fit_lo = pts.front().x * 10.0;
        est.fit_hi = pts.back().x * 10.0;
    }
    return est;
}

GammaSampler lemma1_composite(std::vector<GammaSampler> g_samplers, GammaSampler gamma_g) {
    if (g_samplers.empty()) throw UsageError("lemma1_composite: need at least one sampler");
    return [gs = std::move(g_samplers), gg = std::move(gamma_g)](RngStream& rng) {
        std::vector<double> vals;
        vals.reserve(gs.size());
        for (const GammaSampler& s : gs) vals.push_back(s(rng));
        const double g = gg(rng);
        double total = 0.0;
        for (double v : vals) {
            const double den = v + g;
            if (den > 0.0) total += v * g / den;
        }
        return total;
    };
}

GammaSampler gamma_sampler(int shape) {
    if (shape < 1) throw UsageError("gamma_sampler: shape must be at least 1");
    return [shape](RngStream& rng) {
        double s = 0.0;
        for (int i = 0; i < shape; ++i) s -= std::log(rng.uniform());
        return s;
    };
}

}  // namespace marn
