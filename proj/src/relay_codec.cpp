#include "marn/relay_codec.hpp"

#include <cmath>

namespace marn {

namespace {

DstcDesign::Antenna make_antenna(int T, std::initializer_list<double> entries, bool conjugated) {
    DstcDesign::Antenna a;
    const auto t = static_cast<std::size_t>(T);
    CMatrix m(t, t);
    auto it = entries.begin();
    for (std::size_t r = 0; r < t; ++r)
        for (std::size_t c = 0; c < t; ++c) m(r, c) = *it++;
    a.conjugated = conjugated;
    a.A = conjugated ? CMatrix(t, t) : m;
    a.B = conjugated ? m : CMatrix(t, t);
    a.perm.assign(t, 0);
    a.sign.assign(t, 0.0);
    for (std::size_t r = 0; r < t; ++r)
        for (std::size_t c = 0; c < t; ++c)
            if (m(r, c).real() != 0.0) {
                a.perm[r] = static_cast<int>(c);
                a.sign[r] = m(r, c).real();
            }
    return a;
}

}  // namespace

void DstcDesign::apply(int antenna, const cd* in, cd* out) const {
    const Antenna& a = pairs[static_cast<std::size_t>(antenna)];
    for (int tau = 0; tau < T; ++tau) {
        const cd v = in[a.perm[static_cast<std::size_t>(tau)]];
        out[tau] = a.sign[static_cast<std::size_t>(tau)] * (a.conjugated ? std::conj(v) : v);
    }
}

int codeword_length(int m) {
    int t = 1;
    while (t < m) t *= 2;
    return t;
}

DstcDesign dstc_design(int M) {
    if (M < 1) throw UsageError("dstc_design: M must be at least 1");
    if (M > 4) throw UsageError("dstc_design: only M <= 4 relay antennas per code are supported, got " + std::to_string(M));
    DstcDesign d;
    d.T = codeword_length(M);
    d.M_used = M;
    if (d.T == 1) {
        d.pairs.push_back(make_antenna(1, {1.0}, false));
    } else if (d.T == 2) {
        d.pairs.push_back(make_antenna(2, {1, 0, 0, 1}, false));
        d.pairs.push_back(make_antenna(2, {0, -1, 1, 0}, true));
    } else {
        const std::vector<DstcDesign::Antenna> all = {
            make_antenna(4, {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1}, false),
            make_antenna(4, {0, -1, 0, 0, 1, 0, 0, 0, 0, 0, 0, -1, 0, 0, 1, 0}, true),
            make_antenna(4, {0, 0, -1, 0, 0, 0, 0, -1, 1, 0, 0, 0, 0, 1, 0, 0}, true),
            make_antenna(4, {0, 0, 0, 1, 0, 0, -1, 0, 0, -1, 0, 0, 1, 0, 0, 0}, false),
        };
        d.pairs.assign(all.begin(), all.begin() + M);
    }
    return d;
}

double dstc_icrec_gain(double P, int M, int J) { return std::sqrt(P / (M * (J * P + 1.0))); }

double tdma_icrec_gain(double P, int M) { return std::sqrt(P / (M * P + M)); }

double decode_forward_gain(double P, int M) { return std::sqrt(P / M); }

std::vector<CMatrix> encode_dstc_icrec(const std::vector<CMatrix>& received, const DstcDesign& design, double P, int J) {
    if (static_cast<int>(received.size()) != design.M_used)
        throw UsageError("encode_dstc_icrec: expected one received vector per relay antenna");
    const double c = dstc_icrec_gain(P, design.M_used, J);
    std::vector<CMatrix> out;
    out.reserve(received.size());
    for (int i = 0; i < design.M_used; ++i) {
        const CMatrix& r = received[static_cast<std::size_t>(i)];
        if (static_cast<int>(r.size()) != design.T) throw UsageError("encode_dstc_icrec: received length != T");
        CMatrix t(r.size(), 1);
        design.apply(i, r.values().data(), t.values().data());
        t *= c;
        out.push_back(std::move(t));
    }
    return out;
}

SoftEstimate mrc_soft_estimate(const std::vector<CMatrix>& received, const CMatrix& f_col, double P, int source) {
    if (received.size() != f_col.size()) throw UsageError("mrc_soft_estimate: antenna count mismatch");
    if (!(P > 0.0)) throw UsageError("mrc_soft_estimate: power must be positive");
    if (received.empty()) throw UsageError("mrc_soft_estimate: no antennas");
    const std::size_t T = received.front().size();
    double energy = 0.0;
    for (const cd& f : f_col.values()) energy += std::norm(f);
    if (!(energy > 0.0) || !std::isfinite(energy)) throw NumericError("mrc_soft_estimate: zero source-relay channel");
    SoftEstimate est{CMatrix(T, 1), 1.0 / energy, source};
    for (std::size_t i = 0; i < received.size(); ++i) {
        if (received[i].size() != T) throw UsageError("mrc_soft_estimate: ragged received vectors");
        const cd w = std::conj(f_col[i]) / energy;
        for (std::size_t t = 0; t < T; ++t) est.values[t] += w * received[i][t];
    }
    return est;
}

CMatrix encode_tdma_icrec(const std::vector<SoftEstimate>& estimates, const DstcDesign& design_per_source, double P,
                          int M) {
    return encode_tdma_icrec(estimates, design_per_source, M, tdma_icrec_gain(P, M));
}

CMatrix encode_tdma_icrec(const std::vector<SoftEstimate>& estimates, const DstcDesign& design_per_source, int M,
                          double gain) {
    const int J = static_cast<int>(estimates.size());
    const int K = design_per_source.M_used;
    if (J > M) throw UsageError("encode_tdma_icrec: more sources than relay antennas");
    if (J * K > M) throw UsageError("encode_tdma_icrec: J * antennas-per-source exceeds M");
    const int T = design_per_source.T;
    CMatrix out(static_cast<std::size_t>(M), static_cast<std::size_t>(T));
    std::vector<cd> buf(static_cast<std::size_t>(T));
    for (int j = 0; j < J; ++j) {
        const CMatrix& r = estimates[static_cast<std::size_t>(j)].values;
        if (static_cast<int>(r.size()) != T) throw UsageError("encode_tdma_icrec: estimate length != T");
        for (int k = 0; k < K; ++k) {
            design_per_source.apply(k, r.values().data(), buf.data());
            for (int t = 0; t < T; ++t)
                out(static_cast<std::size_t>(j * K + k), static_cast<std::size_t>(t)) = gain * buf[static_cast<std::size_t>(t)];
        }
    }
    return out;
}

RelayDecision relay_decode_forward(const std::vector<SoftEstimate>& estimates, const Constellation& c,
                                   const Constellation& c_pair, double P) {
    RelayDecision out;
    const double amp = std::sqrt(P);
    for (const SoftEstimate& e : estimates) {
        const std::size_t T = e.values.size();
        SoftEstimate h{CMatrix(T, 1), 0.0, e.source};
        std::vector<int> idx(T);
        for (std::size_t t = 0; t < T; ++t) {
            const Constellation& cc = (T == 4 && t >= 2) ? c_pair : c;
            idx[t] = cc.nearest(e.values[t], amp);
            h.values[t] = cc.points[static_cast<std::size_t>(idx[t])];
        }
        out.hard.push_back(std::move(h));
        out.indices.push_back(std::move(idx));
    }
    return out;
}

}  // namespace marn
