#pragma once

#include <cmath>
#include <vector>

#include "marn/airlink.hpp"
#include "marn/numerics.hpp"
#include "marn/relay_codec.hpp"

namespace marn::test {

inline CMatrix random_matrix(std::size_t r, std::size_t c, RngStream& rng) {
    CMatrix m(r, c);
    for (cd& v : m.values()) v = rng.cgauss();
    return m;
}

inline double max_diff(const CMatrix& a, const CMatrix& b) { return (a - b).max_abs(); }

inline NetworkConfig make_cfg(int J, int M, int N, double snr_db, int order = 2) {
    NetworkConfig cfg;
    cfg.J = J;
    cfg.M = M;
    cfg.N = N;
    cfg.P = db_to_linear(snr_db);
    cfg.constellation.order = order;
    return cfg;
}

/// raw(n, tau) = sum_i g_in x_i(tau) + w.
inline CMatrix destination(const ChannelRealization& ch, const std::vector<CMatrix>& x, int T, RngStream* noise) {
    CMatrix raw(ch.G.cols(), static_cast<std::size_t>(T));
    for (std::size_t n = 0; n < ch.G.cols(); ++n)
        for (std::size_t t = 0; t < static_cast<std::size_t>(T); ++t) {
            cd acc = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) acc += ch.G(i, n) * x[i][t];
            raw(n, t) = acc + (noise ? noise->cgauss() : cd{});
        }
    return raw;
}

/// Relay receptions of the DSTC front end.
inline std::vector<CMatrix> relay_rx(const ChannelRealization& ch, const std::vector<CMatrix>& s, double P, int T,
                                     RngStream* noise) {
    std::vector<CMatrix> r;
    for (std::size_t i = 0; i < ch.F.rows(); ++i) {
        CMatrix ri(static_cast<std::size_t>(T), 1);
        for (std::size_t j = 0; j < s.size(); ++j) ri += s[j] * (std::sqrt(P) * ch.F(i, j));
        if (noise)
            for (cd& v : ri.values()) v += noise->cgauss();
        r.push_back(std::move(ri));
    }
    return r;
}

inline CMatrix random_block(int T, const Constellation& c, const Constellation& cp, RngStream& rng,
                            std::vector<int>* idx = nullptr) {
    CMatrix s(static_cast<std::size_t>(T), 1);
    for (int t = 0; t < T; ++t) {
        const Constellation& cc = (T == 4 && t >= 2) ? cp : c;
        const int k = static_cast<int>(rng.bits32() % static_cast<std::uint32_t>(cc.order));
        if (idx) idx->push_back(k);
        s[static_cast<std::size_t>(t)] = cc.points[static_cast<std::size_t>(k)];
    }
    return s;
}

}  // namespace marn::test
