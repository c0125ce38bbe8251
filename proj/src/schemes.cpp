#include "marn/schemes.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

#include "marn/relay_codec.hpp"
#include "marn/rx_ic.hpp"

namespace marn {

namespace {

struct SchemeName {
    SchemeId id;
    std::string_view name;
};

constexpr std::array<SchemeName, 6> kNames = {{
    {SchemeId::DstcIcRec, "dstc-icrec"},
    {SchemeId::TdmaIcRec, "tdma-icrec"},
    {SchemeId::IcRelayTdma, "ic-relay-tdma"},
    {SchemeId::FullTdmaDstc, "full-tdma-dstc"},
    {SchemeId::DecodeRelayIcDest, "decode-relay-ic-dest"},
    {SchemeId::ConcurrentJoint, "concurrent-joint"},
}};

std::string lower(std::string_view s) {
    std::string out(s);
    for (char& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return out;
}

/// Symbols of one source: indices plus the constellation points they select.
struct SourceBlock {
    std::vector<int> idx;
    CMatrix s;
};

SourceBlock draw_block(int T, const Constellation& c, const Constellation& cp, RngStream& rng) {
    SourceBlock blk{std::vector<int>(static_cast<std::size_t>(T)), CMatrix(static_cast<std::size_t>(T), 1)};
    for (int t = 0; t < T; ++t) {
        const Constellation& cc = (T == 4 && t >= 2) ? cp : c;
        const int k = static_cast<int>(rng.bits32() % static_cast<std::uint32_t>(cc.order));
        blk.idx[static_cast<std::size_t>(t)] = k;
        blk.s[static_cast<std::size_t>(t)] = cc.points[static_cast<std::size_t>(k)];
    }
    return blk;
}

void add_noise(CMatrix& m, RngStream& rng, bool noiseless) {
    for (cd& v : m.values()) {
        const cd w = rng.cgauss();
        if (!noiseless) v += w;
    }
}

/// raw(n, tau) = sum_i g_in x(i, tau) + w.
CMatrix second_hop(const ChannelRealization& ch, const CMatrix& x, RngStream& rng, bool noiseless) {
    CMatrix raw = adjoint_times(ch.G.conjugate(), x);
    add_noise(raw, rng, noiseless);
    return raw;
}

CMatrix rows_to_matrix(const std::vector<CMatrix>& rows, std::size_t cols) {
    CMatrix x(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t t = 0; t < cols; ++t) x(i, t) = rows[i][t];
    return x;
}

void score(TrialOutcome& out, int j, const std::vector<int>& sent, const std::vector<int>& decided, int T,
           const Constellation& c, const Constellation& cp) {
    SourceOutcome& so = out.per_source[static_cast<std::size_t>(j)];
    for (std::size_t t = 0; t < sent.size(); ++t) {
        const Constellation& cc = (T == 4 && t >= 2) ? cp : c;
        so.bits += static_cast<std::uint64_t>(cc.bits_per_symbol());
        so.bit_errors += static_cast<std::uint64_t>(bit_errors(sent[t], decided[t], cc));
    }
}

struct Ctx {
    const NetworkConfig& cfg;
    RngStream& rng;
    bool noiseless;
    const Constellation& c;
    const Constellation& cp;
};

void run_dstc_front(Ctx& x, TrialOutcome& out, bool joint) {
    const NetworkConfig& cfg = x.cfg;
    const DstcDesign design = dstc_design(cfg.M);
    const int T = design.T;
    const ChannelRealization ch = draw_channels(cfg, x.rng);
    std::vector<SourceBlock> blocks;
    for (int j = 0; j < cfg.J; ++j) blocks.push_back(draw_block(T, x.c, x.cp, x.rng));
    const double sp = std::sqrt(cfg.P);
    std::vector<CMatrix> r;
    for (int i = 0; i < cfg.M; ++i) {
        CMatrix ri(static_cast<std::size_t>(T), 1);
        for (int j = 0; j < cfg.J; ++j) ri += blocks[static_cast<std::size_t>(j)].s * (sp * ch.F(static_cast<std::size_t>(i), static_cast<std::size_t>(j)));
        add_noise(ri, x.rng, x.noiseless);
        r.push_back(std::move(ri));
    }
    const std::vector<CMatrix> t = encode_dstc_icrec(r, design, cfg.P, cfg.J);
    const CMatrix raw = second_hop(ch, rows_to_matrix(t, static_cast<std::size_t>(T)), x.rng, x.noiseless);
    if (joint) {
        const auto decided = joint_ml_decode(raw, ch, cfg, x.c, x.cp);
        for (int j = 0; j < cfg.J; ++j)
            score(out, j, blocks[static_cast<std::size_t>(j)].idx, decided[static_cast<std::size_t>(j)], T, x.c, x.cp);
        return;
    }
    const StackedSystems st = equiv_system_dstc_icrec(raw, ch, cfg);
    const double gain = dstc_icrec_gain(cfg.P, cfg.M, cfg.J);
    const RelayNoise noise{RelayNoise::Kind::PerAntenna, gain * gain, dstc_gtilde(ch.G, st.plan.b)};
    const IcMethod method = cfg.J == 2 ? IcMethod::Pairwise : IcMethod::Iterative;
    for (int j = 0; j < cfg.J; ++j) {
        const EquivalentSystem eq = reduce_for_source(st, j, method, noise, sp * gain);
        const MlResult res = ml_decode(eq, x.c, &x.cp);
        score(out, j, blocks[static_cast<std::size_t>(j)].idx, res.indices, T, x.c, x.cp);
    }
}

void run_tdma(Ctx& x, TrialOutcome& out, bool decode_at_relay) {
    const NetworkConfig& cfg = x.cfg;
    const int K = cfg.M / cfg.J;
    const DstcDesign design = dstc_design(K);
    const int T = design.T;
    const ChannelRealization ch = draw_channels(cfg, x.rng);
    const double sp = std::sqrt(cfg.P);
    std::vector<SourceBlock> blocks;
    std::vector<SoftEstimate> est;
    for (int j = 0; j < cfg.J; ++j) {
        blocks.push_back(draw_block(T, x.c, x.cp, x.rng));
        std::vector<CMatrix> r;
        for (int i = 0; i < cfg.M; ++i) {
            CMatrix ri = blocks.back().s * (sp * ch.F(static_cast<std::size_t>(i), static_cast<std::size_t>(j)));
            add_noise(ri, x.rng, x.noiseless);
            r.push_back(std::move(ri));
        }
        est.push_back(mrc_soft_estimate(r, ch.F.col(static_cast<std::size_t>(j)), cfg.P, j));
    }
    CMatrix tx;
    double scale = 0.0;
    if (decode_at_relay) {
        const RelayDecision dec = relay_decode_forward(est, x.c, x.cp, cfg.P);
        const double g = decode_forward_gain(cfg.P, cfg.M);
        tx = encode_tdma_icrec(dec.hard, design, cfg.M, g);
        scale = g;
    } else {
        tx = encode_tdma_icrec(est, design, cfg.P, cfg.M);
        scale = sp * tdma_icrec_gain(cfg.P, cfg.M);
    }
    const CMatrix raw = second_hop(ch, tx, x.rng, x.noiseless);
    const StackedSystems st = equiv_system_tdma_icrec(raw, ch, cfg);
    const double c1 = tdma_icrec_gain(cfg.P, cfg.M);
    for (int j = 0; j < cfg.J; ++j) {
        RelayNoise noise;
        if (!decode_at_relay) {
            noise.kind = RelayNoise::Kind::Shared;
            noise.gain_sq = c1 * c1 * est[static_cast<std::size_t>(j)].noise_var;
        }
        const EquivalentSystem eq = reduce_for_source(st, j, IcMethod::Iterative, noise, scale);
        const MlResult res = ml_decode(eq, x.c, &x.cp);
        score(out, j, blocks[static_cast<std::size_t>(j)].idx, res.indices, T, x.c, x.cp);
    }
}

void run_ic_relay(Ctx& x, TrialOutcome& out) {
    const NetworkConfig& cfg = x.cfg;
    const DstcDesign design = dstc_design(cfg.M);
    const int T = design.T;
    const ChannelRealization ch = draw_channels(cfg, x.rng);
    const double sp = std::sqrt(cfg.P);
    std::vector<SourceBlock> blocks;
    for (int j = 0; j < cfg.J; ++j) blocks.push_back(draw_block(T, x.c, x.cp, x.rng));
    std::vector<CMatrix> r;
    for (int i = 0; i < cfg.M; ++i) {
        CMatrix ri(static_cast<std::size_t>(T), 1);
        for (int j = 0; j < cfg.J; ++j) ri += blocks[static_cast<std::size_t>(j)].s * (sp * ch.F(static_cast<std::size_t>(i), static_cast<std::size_t>(j)));
        add_noise(ri, x.rng, x.noiseless);
        r.push_back(std::move(ri));
    }
    const double c = dstc_icrec_gain(cfg.P, cfg.M, 1);
    const std::vector<CMatrix> taps = tdma_taps(ch, 1, cfg.M, T);
    for (int j = 0; j < cfg.J; ++j) {
        const CMatrix f = ch.F.col(static_cast<std::size_t>(j));
        CMatrix w = f;
        if (cfg.J > 1) {
            CMatrix others(static_cast<std::size_t>(cfg.M), static_cast<std::size_t>(cfg.J - 1));
            for (int k = 0, col = 0; k < cfg.J; ++k) {
                if (k == j) continue;
                others.set_block(0, static_cast<std::size_t>(col++), ch.F.col(static_cast<std::size_t>(k)));
            }
            w = null_space_projector(others).matrix * f;
        }
        const double denom = inner(w, f).real();
        if (!(denom > 1e-12 * f.frobenius_norm_sq())) throw NumericError("relay ZF: source channel inside interference span");
        SoftEstimate est{CMatrix(static_cast<std::size_t>(T), 1), 1.0 / denom, j};
        for (int i = 0; i < cfg.M; ++i) est.values += r[static_cast<std::size_t>(i)] * (std::conj(w[static_cast<std::size_t>(i)]) / denom);
        std::vector<CMatrix> t;
        for (int i = 0; i < cfg.M; ++i) {
            CMatrix ti(static_cast<std::size_t>(T), 1);
            design.apply(i, est.values.values().data(), ti.values().data());
            ti *= c;
            t.push_back(std::move(ti));
        }
        const CMatrix raw = second_hop(ch, rows_to_matrix(t, static_cast<std::size_t>(T)), x.rng, x.noiseless);
        const StackedSystems st = equiv_system_from_taps(raw, taps, T);
        const RelayNoise noise{RelayNoise::Kind::Shared, c * c * est.noise_var, CMatrix()};
        const EquivalentSystem eq = reduce_for_source(st, 0, IcMethod::None, noise, sp * c);
        const MlResult res = ml_decode(eq, x.c, &x.cp);
        score(out, j, blocks[static_cast<std::size_t>(j)].idx, res.indices, T, x.c, x.cp);
    }
}

void run_full_tdma(Ctx& x, TrialOutcome& out) {
    const NetworkConfig& cfg = x.cfg;
    const DstcDesign design = dstc_design(cfg.M);
    const int T = design.T;
    const ChannelRealization ch = draw_channels(cfg, x.rng);
    const double sp = std::sqrt(cfg.P);
    const double c = dstc_icrec_gain(cfg.P, cfg.M, 1);
    const RelayNoise noise{RelayNoise::Kind::PerAntenna, c * c, dstc_gtilde(ch.G, split_plan(T).b)};
    for (int j = 0; j < cfg.J; ++j) {
        const SourceBlock blk = draw_block(T, x.c, x.cp, x.rng);
        std::vector<CMatrix> r;
        for (int i = 0; i < cfg.M; ++i) {
            CMatrix ri = blk.s * (sp * ch.F(static_cast<std::size_t>(i), static_cast<std::size_t>(j)));
            add_noise(ri, x.rng, x.noiseless);
            r.push_back(std::move(ri));
        }
        const std::vector<CMatrix> t = encode_dstc_icrec(r, design, cfg.P, 1);
        const CMatrix raw = second_hop(ch, rows_to_matrix(t, static_cast<std::size_t>(T)), x.rng, x.noiseless);
        const ChannelRealization single{ch.F.col(static_cast<std::size_t>(j)), ch.G};
        const StackedSystems st = equiv_system_from_taps(raw, dstc_taps(single, design), T);
        const EquivalentSystem eq = reduce_for_source(st, 0, IcMethod::None, noise, sp * c);
        const MlResult res = ml_decode(eq, x.c, &x.cp);
        score(out, j, blk.idx, res.indices, T, x.c, x.cp);
    }
}

}  // namespace

const std::array<SchemeId, 6>& all_schemes() {
    static const std::array<SchemeId, 6> ids = {SchemeId::DstcIcRec,    SchemeId::TdmaIcRec,
                                                SchemeId::IcRelayTdma,  SchemeId::FullTdmaDstc,
                                                SchemeId::DecodeRelayIcDest, SchemeId::ConcurrentJoint};
    return ids;
}

int scheme_number(SchemeId id) { return static_cast<int>(id); }

std::string_view scheme_name(SchemeId id) {
    for (const auto& n : kNames)
        if (n.id == id) return n.name;
    throw UsageError("scheme_name: unknown scheme id");
}

SchemeId parse_scheme(std::string_view text) {
    const std::string t = lower(text);
    for (const auto& n : kNames) {
        const std::string num = std::to_string(static_cast<int>(n.id));
        if (t == n.name || t == num || t == "scheme" + num) return n.id;
    }
    throw UsageError("unknown scheme '" + std::string(text) +
                     "' (expected 1..6, scheme1..scheme6 or dstc-icrec, tdma-icrec, ic-relay-tdma, full-tdma-dstc, "
                     "decode-relay-ic-dest, concurrent-joint)");
}

Rational::Rational(long n, long d) {
    if (d == 0) throw UsageError("Rational: zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    const long g = std::gcd(n, d);
    num = g == 0 ? 0 : n / g;
    den = g == 0 ? 1 : d / g;
}

std::string Rational::str() const { return std::to_string(num) + "/" + std::to_string(den); }

SchemeMeta scheme_meta(SchemeId id, int J, int M, int N) {
    NetworkConfig cfg;
    cfg.J = J;
    cfg.M = M;
    cfg.N = N;
    cfg.validate();
    const int tdma_div = std::min(M, (M / J) * (N - J + 1));
    switch (id) {
        case SchemeId::DstcIcRec:
            return {id, Rational(1, 2), false, M - J + 1, ClaimKind::UpperBound};
        case SchemeId::TdmaIcRec:
            return {id, Rational(1, J + 1), true, tdma_div, ClaimKind::Achieved};
        case SchemeId::IcRelayTdma:
            return {id, Rational(1, J + 1), true, M - J + 1, ClaimKind::Achieved};
        case SchemeId::FullTdmaDstc:
            return {id, Rational(1, 2L * J), false, M, ClaimKind::Achieved};
        case SchemeId::DecodeRelayIcDest:
            return {id, Rational(1, J + 1), true, tdma_div, ClaimKind::Achieved};
        case SchemeId::ConcurrentJoint:
            return {id, Rational(1, 2), false, M, ClaimKind::Achieved};
    }
    throw UsageError("scheme_meta: unknown scheme id");
}

bool int_free_condition(int J, int M, int N) {
    const int K = M / J;
    if (K < 1) return false;
    // N >= M/K + J - 1 with M/K rational: N K >= M + (J - 1) K
    return static_cast<long>(N) * K >= static_cast<long>(M) + static_cast<long>(J - 1) * K;
}

int comparison_constellation(SchemeId id) {
    switch (id) {
        case SchemeId::DstcIcRec:
            return 4;
        case SchemeId::TdmaIcRec:
            return 8;
        case SchemeId::IcRelayTdma:
            return 8;
        case SchemeId::FullTdmaDstc:
            return 16;
        case SchemeId::DecodeRelayIcDest:
            return 8;
        case SchemeId::ConcurrentJoint:
            return 4;
    }
    throw UsageError("comparison_constellation: unknown scheme id");
}

void check_supported(SchemeId id, const NetworkConfig& cfg) {
    cfg.validate();
    make_psk(cfg.constellation.order);
    const std::string where = std::string(scheme_name(id)) + ": ";
    switch (id) {
        case SchemeId::DstcIcRec:
        case SchemeId::IcRelayTdma:
        case SchemeId::FullTdmaDstc:
            if (cfg.M > 4) throw UsageError(where + "relay code needs M <= 4, got M=" + std::to_string(cfg.M));
            break;
        case SchemeId::TdmaIcRec:
        case SchemeId::DecodeRelayIcDest:
            if (cfg.M / cfg.J > 4)
                throw UsageError(where + "per-source code needs floor(M/J) <= 4, got " + std::to_string(cfg.M / cfg.J));
            break;
        case SchemeId::ConcurrentJoint: {
            if (cfg.M > 4) throw UsageError(where + "relay code needs M <= 4, got M=" + std::to_string(cfg.M));
            const double space = std::pow(static_cast<double>(cfg.constellation.order), cfg.J * codeword_length(cfg.M));
            if (space > 1048576.0)
                throw UsageError(where + "joint search space order^(J*T) exceeds 2^20");
            break;
        }
    }
}

Constellation pair_constellation(const NetworkConfig& cfg) {
    const int order = cfg.constellation.order;
    const double rot = cfg.constellation.pair_rotation < 0.0 ? default_pair_rotation(order) : cfg.constellation.pair_rotation;
    return make_psk(order, rot);
}

TrialOutcome run_trial(SchemeId id, const NetworkConfig& cfg, RngStream& rng, const TrialOptions& opts) {
    const Constellation c = make_psk(cfg.constellation.order);
    const Constellation cp = pair_constellation(cfg);
    TrialOutcome out;
    for (int attempt = 0; attempt <= opts.max_resamples; ++attempt) {
        out.per_source.assign(static_cast<std::size_t>(cfg.J), SourceOutcome{});
        Ctx x{cfg, rng, opts.noiseless, c, cp};
        try {
            switch (id) {
                case SchemeId::DstcIcRec:
                    run_dstc_front(x, out, false);
                    break;
                case SchemeId::ConcurrentJoint:
                    run_dstc_front(x, out, true);
                    break;
                case SchemeId::TdmaIcRec:
                    run_tdma(x, out, false);
                    break;
                case SchemeId::DecodeRelayIcDest:
                    run_tdma(x, out, true);
                    break;
                case SchemeId::IcRelayTdma:
                    run_ic_relay(x, out);
                    break;
                case SchemeId::FullTdmaDstc:
                    run_full_tdma(x, out);
                    break;
            }
        } catch (const NumericError&) {
            ++out.resamples;
            out.resampled = true;
            continue;
        }
        for (const SourceOutcome& s : out.per_source) {
            out.bits += s.bits;
            out.bit_errors += s.bit_errors;
        }
        return out;
    }
    out.per_source.assign(static_cast<std::size_t>(cfg.J), SourceOutcome{});
    out.erased = true;
    return out;
}

}  // namespace marn
