#include "marn/rx_ic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace marn {

namespace {

using Terms = std::vector<RecombTerm>;

CMatrix row_matrix(std::size_t rows, std::size_t cols, std::initializer_list<double> v) {
    CMatrix m(rows, cols);
    auto it = v.begin();
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = *it++;
    return m;
}

cd sample(const CMatrix& raw, std::size_t n, const RecombTerm& t) {
    const cd v = raw(n, static_cast<std::size_t>(t.tau));
    return t.sign * (t.conjugate ? std::conj(v) : v);
}

CMatrix relayed_cov(const CMatrix& BQ, const CMatrix& B, double gain_sq, int kappa) {
    CMatrix r = times_adjoint(B, B);
    if (gain_sq != 0.0 && !BQ.empty()) r += times_adjoint(BQ, BQ) * cd(gain_sq);
    r *= cd(static_cast<double>(kappa));
    return r;
}

struct DisjointSets {
    std::vector<int> parent;
    explicit DisjointSets(int n) : parent(static_cast<std::size_t>(n)) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    }
};

MlResult decode_impl(const EquivalentSystem& eq, const Constellation& c, const Constellation* c_pair, bool allow_split) {
    const std::size_t m = eq.obs.size();
    const std::size_t U = eq.H_eff.cols();
    const std::size_t S = eq.Ma.cols();
    if (eq.H_eff.rows() != m || eq.R_n.rows() != m || eq.R_n.cols() != m)
        throw UsageError("ml_decode: obs, H_eff and R_n dimensions disagree");
    if (eq.Ma.rows() != U || eq.Mb.rows() != U || eq.Mb.cols() != S)
        throw UsageError("ml_decode: symbol map does not match H_eff columns");

    std::vector<const Constellation*> alphabet(S, &c);
    for (std::size_t q = 0; q < S && q < eq.paired.size(); ++q)
        if (eq.paired[q]) {
            if (c_pair == nullptr) throw UsageError("ml_decode: paired constellation required");
            alphabet[q] = c_pair;
        }

    const HermitianFactor factor(eq.R_n);
    const CMatrix z = factor.whiten(eq.obs);
    CMatrix W = factor.whiten(eq.H_eff);
    W *= cd(eq.scale);
    const CMatrix gram = adjoint_times(W, W);
    const CMatrix q = adjoint_times(W, z);
    if (!gram.all_finite() || !q.all_finite()) throw NumericError("ml_decode: non-finite whitened system");

    // symbols sharing a component, or touching coupled components, are searched together
    DisjointSets sets(static_cast<int>(S));
    std::vector<std::vector<int>> touching(U);
    for (std::size_t a = 0; a < U; ++a)
        for (std::size_t s = 0; s < S; ++s)
            if (eq.Ma(a, s) != 0.0 || eq.Mb(a, s) != 0.0) touching[a].push_back(static_cast<int>(s));
    auto unite_all = [&](const std::vector<int>& v, int anchor) {
        for (int s : v) sets.unite(anchor, s);
    };
    for (std::size_t a = 0; a < U; ++a)
        if (!touching[a].empty()) unite_all(touching[a], touching[a].front());
    double max_diag = 0.0;
    for (std::size_t a = 0; a < U; ++a) max_diag = std::max(max_diag, gram(a, a).real());
    for (std::size_t a = 0; a < U; ++a)
        for (std::size_t b = a + 1; b < U; ++b) {
            if (touching[a].empty() || touching[b].empty()) continue;
            if (!allow_split || std::abs(gram(a, b)) >= 1e-8 * max_diag)
                sets.unite(touching[a].front(), touching[b].front());
        }
    if (!allow_split)
        for (std::size_t s = 1; s < S; ++s) sets.unite(0, static_cast<int>(s));

    MlResult out;
    out.indices.assign(S, 0);
    std::vector<bool> done(S, false);
    for (std::size_t root = 0; root < S; ++root) {
        if (done[root]) continue;
        std::vector<int> syms;
        for (std::size_t s = 0; s < S; ++s)
            if (sets.find(static_cast<int>(s)) == sets.find(static_cast<int>(root))) {
                syms.push_back(static_cast<int>(s));
                done[s] = true;
            }
        std::vector<std::size_t> comps;
        for (std::size_t a = 0; a < U; ++a)
            for (int s : touching[a])
                if (std::find(syms.begin(), syms.end(), s) != syms.end()) {
                    comps.push_back(a);
                    break;
                }
        const std::size_t nc = comps.size();
        const std::size_t depth = syms.size();
        // contrib[d][k][a]: component a of u when symbol syms[d] takes point k
        std::vector<std::vector<std::vector<cd>>> contrib(depth);
        for (std::size_t d = 0; d < depth; ++d) {
            const auto s = static_cast<std::size_t>(syms[d]);
            const Constellation& cc = *alphabet[s];
            contrib[d].assign(static_cast<std::size_t>(cc.order), std::vector<cd>(nc));
            for (int k = 0; k < cc.order; ++k) {
                const cd p = cc.points[static_cast<std::size_t>(k)];
                for (std::size_t a = 0; a < nc; ++a)
                    contrib[d][static_cast<std::size_t>(k)][a] = eq.Ma(comps[a], s) * p + eq.Mb(comps[a], s) * std::conj(p);
            }
        }
        std::vector<cd> u(nc, 0.0);
        std::vector<int> cur(depth, 0), best(depth, 0);
        double best_metric = std::numeric_limits<double>::infinity();
        auto leaf_metric = [&]() {
            double v = 0.0;
            for (std::size_t a = 0; a < nc; ++a) {
                cd row = 0.0;
                for (std::size_t b = 0; b < nc; ++b) row += gram(comps[a], comps[b]) * u[b];
                v += (std::conj(u[a]) * row).real() - 2.0 * (std::conj(u[a]) * q[comps[a]]).real();
            }
            return v;
        };
        auto search = [&](auto&& self, std::size_t d) -> void {
            if (d == depth) {
                const double v = leaf_metric();
                if (v < best_metric) {
                    best_metric = v;
                    best = cur;
                }
                return;
            }
            const auto& options = contrib[d];
            for (std::size_t k = 0; k < options.size(); ++k) {
                for (std::size_t a = 0; a < nc; ++a) u[a] += options[k][a];
                cur[d] = static_cast<int>(k);
                self(self, d + 1);
                for (std::size_t a = 0; a < nc; ++a) u[a] -= options[k][a];
            }
        };
        search(search, 0);
        if (!std::isfinite(best_metric)) throw NumericError("ml_decode: metric not finite");
        for (std::size_t d = 0; d < depth; ++d) out.indices[static_cast<std::size_t>(syms[d])] = best[d];
        ++out.groups;
    }
    for (std::size_t s = 0; s < S; ++s) {
        const Constellation& cc = *alphabet[s];
        out.symbols.push_back(cc.points[static_cast<std::size_t>(out.indices[s])]);
        for (std::uint8_t bit : bits_of(out.indices[s], cc)) out.bits.push_back(bit);
    }
    return out;
}

}  // namespace

SplitPlan split_plan(int T) {
    SplitPlan p;
    p.T = T;
    switch (T) {
        case 1:
            p.b = 1;
            p.systems = {{Terms{{0, 1.0, false}}}};
            p.Ma = {row_matrix(1, 1, {1})};
            p.Mb = {row_matrix(1, 1, {0})};
            break;
        case 2:
            p.b = 2;
            p.systems = {{Terms{{0, 1.0, false}}, Terms{{1, 1.0, true}}}};
            p.Ma = {row_matrix(2, 2, {1, 0, 0, 0})};
            p.Mb = {row_matrix(2, 2, {0, 0, 0, 1})};
            break;
        case 4:
            p.b = 2;
            p.systems = {{Terms{{0, 1.0, false}, {3, 1.0, false}}, Terms{{1, 1.0, true}, {2, -1.0, true}}},
                         {Terms{{0, 1.0, false}, {3, -1.0, false}}, Terms{{1, 1.0, true}, {2, 1.0, true}}}};
            p.Ma = {row_matrix(2, 4, {1, 0, 0, 1, 0, 0, 0, 0}), row_matrix(2, 4, {1, 0, 0, -1, 0, 0, 0, 0})};
            p.Mb = {row_matrix(2, 4, {0, 0, 0, 0, 0, -1, 1, 0}), row_matrix(2, 4, {0, 0, 0, 0, 0, -1, -1, 0})};
            break;
        default:
            throw UsageError("split_plan: codeword length must be 1, 2 or 4, got " + std::to_string(T));
    }
    return p;
}

CMatrix split_block(const SplitPlan& plan, int system, std::span<const cd> h) {
    if (static_cast<int>(h.size()) != plan.T) throw UsageError("split_block: tap count != T");
    switch (plan.T) {
        case 1:
            return CMatrix(1, 1, {h[0]});
        case 2:
            return CMatrix(2, 2, {h[0], -h[1], std::conj(h[1]), std::conj(h[0])});
        default: {
            const double sg = system == 0 ? 1.0 : -1.0;
            const cd a = h[0] + sg * h[3];
            const cd d = h[1] - sg * h[2];
            return CMatrix(2, 2, {a, d, std::conj(d), -std::conj(a)});
        }
    }
}

CMatrix recombine(const SplitPlan& plan, int system, const CMatrix& raw) {
    if (static_cast<int>(raw.cols()) != plan.T) throw UsageError("recombine: raw samples must have T columns");
    const auto& rows = plan.systems[static_cast<std::size_t>(system)];
    const std::size_t b = rows.size();
    CMatrix obs(raw.rows() * b, 1);
    for (std::size_t n = 0; n < raw.rows(); ++n)
        for (std::size_t r = 0; r < b; ++r) {
            cd v = 0.0;
            for (const RecombTerm& t : rows[r]) v += sample(raw, n, t);
            obs[n * b + r] = v;
        }
    return obs;
}

RecombinationMap recombination_map(const SplitPlan& plan, int system, int N) {
    const auto& rows = plan.systems[static_cast<std::size_t>(system)];
    const std::size_t b = rows.size();
    const auto n_raw = static_cast<std::size_t>(N * plan.T);
    RecombinationMap map{CMatrix(static_cast<std::size_t>(N) * b, n_raw), CMatrix(static_cast<std::size_t>(N) * b, n_raw)};
    for (std::size_t n = 0; n < static_cast<std::size_t>(N); ++n)
        for (std::size_t r = 0; r < b; ++r)
            for (const RecombTerm& t : rows[r]) {
                CMatrix& target = t.conjugate ? map.conjugate : map.linear;
                target(n * b + r, n * static_cast<std::size_t>(plan.T) + static_cast<std::size_t>(t.tau)) += t.sign;
            }
    return map;
}

StackedSystems equiv_system_from_taps(const CMatrix& raw, const std::vector<CMatrix>& taps, int T) {
    StackedSystems st;
    st.plan = split_plan(T);
    st.N = static_cast<int>(raw.rows());
    const auto b = static_cast<std::size_t>(st.plan.b);
    for (int s = 0; s < st.plan.system_count(); ++s) {
        SplitSystem sys;
        sys.obs = recombine(st.plan, s, raw);
        for (const CMatrix& tap : taps) {
            if (tap.rows() != raw.rows() || static_cast<int>(tap.cols()) != T)
                throw UsageError("equiv_system: taps must be N x T");
            CMatrix g(raw.rows() * b, b);
            for (std::size_t n = 0; n < raw.rows(); ++n) {
                const std::span<const cd> h = tap.values().subspan(n * tap.cols(), tap.cols());
                g.set_block(n * b, 0, split_block(st.plan, s, h));
            }
            sys.G.push_back(std::move(g));
        }
        st.systems.push_back(std::move(sys));
    }
    return st;
}

std::vector<CMatrix> dstc_taps(const ChannelRealization& ch, const DstcDesign& design) {
    const std::size_t N = ch.G.cols();
    const std::size_t J = ch.F.cols();
    std::vector<CMatrix> out;
    for (std::size_t j = 0; j < J; ++j) {
        CMatrix t(N, static_cast<std::size_t>(design.T));
        for (std::size_t n = 0; n < N; ++n)
            for (std::size_t k = 0; k < static_cast<std::size_t>(design.M_used); ++k) {
                const cd f = ch.F(k, j);
                t(n, k) = (design.pairs[k].conjugated ? std::conj(f) : f) * ch.G(k, n);
            }
        out.push_back(std::move(t));
    }
    return out;
}

std::vector<CMatrix> tdma_taps(const ChannelRealization& ch, int J, int K, int T) {
    const std::size_t N = ch.G.cols();
    std::vector<CMatrix> out;
    for (int j = 0; j < J; ++j) {
        CMatrix t(N, static_cast<std::size_t>(T));
        for (std::size_t n = 0; n < N; ++n)
            for (int k = 0; k < K; ++k) t(n, static_cast<std::size_t>(k)) = ch.G(static_cast<std::size_t>(j * K + k), n);
        out.push_back(std::move(t));
    }
    return out;
}

StackedSystems equiv_system_dstc_icrec(const CMatrix& raw, const ChannelRealization& ch, const NetworkConfig& cfg) {
    const DstcDesign design = dstc_design(cfg.M);
    if (static_cast<int>(raw.cols()) != design.T) throw UsageError("equiv_system_dstc_icrec: raw samples need T columns");
    return equiv_system_from_taps(raw, dstc_taps(ch, design), design.T);
}

StackedSystems equiv_system_tdma_icrec(const CMatrix& raw, const ChannelRealization& ch, const NetworkConfig& cfg) {
    const int K = cfg.M / cfg.J;
    const DstcDesign design = dstc_design(K);
    if (static_cast<int>(raw.cols()) != design.T) throw UsageError("equiv_system_tdma_icrec: raw samples need T columns");
    return equiv_system_from_taps(raw, tdma_taps(ch, cfg.J, K, design.T), design.T);
}

CMatrix block_inverse(const CMatrix& block) {
    const double nrm2 = block.frobenius_norm_sq();
    if (!(nrm2 >= 1e-24) || !std::isfinite(nrm2)) throw NumericError("IC: degenerate equivalent channel block");
    CMatrix inv = block.adjoint();
    inv *= cd(static_cast<double>(block.rows()) / nrm2);
    return inv;
}

IcMatrix ic_matrix_pairwise(const std::vector<CMatrix>& int_blocks, int N) {
    if (N < 2) throw UsageError("ic_matrix_pairwise: need N >= 2");
    if (static_cast<int>(int_blocks.size()) != N) throw UsageError("ic_matrix_pairwise: need one block per antenna");
    const std::size_t b = int_blocks.front().rows();
    const auto n = static_cast<std::size_t>(N);
    IcMatrix ic;
    ic.B = CMatrix(b * (n - 1), b * n);
    const CMatrix last = block_inverse(int_blocks.back()) * cd(-1.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        ic.B.set_block(i * b, i * b, block_inverse(int_blocks[i]));
        ic.B.set_block(i * b, (n - 1) * b, last);
    }
    ic.stage_count = 1;
    return ic;
}

IcMatrix ic_iterative(const std::vector<CMatrix>& G, int N, int target) {
    const int J = static_cast<int>(G.size());
    if (target < 0 || target >= J) throw UsageError("ic_iterative: target out of range");
    if (N < J) throw UsageError("ic_iterative: need N >= J");
    const std::size_t b = G.front().cols();
    std::vector<CMatrix> cur = G;
    IcMatrix ic;
    ic.B = CMatrix::identity(b * static_cast<std::size_t>(N));
    for (int p = J - 1; p >= 0; --p) {
        if (p == target) continue;
        const std::size_t blocks = cur[static_cast<std::size_t>(p)].rows() / b;
        const CMatrix& gp = cur[static_cast<std::size_t>(p)];
        CMatrix stage(b * (blocks - 1), b * blocks);
        const CMatrix first = block_inverse(gp.block(0, 0, b, b)) * cd(-1.0);
        for (std::size_t q = 1; q < blocks; ++q) {
            stage.set_block((q - 1) * b, 0, first);
            stage.set_block((q - 1) * b, q * b, block_inverse(gp.block(q * b, 0, b, b)));
        }
        for (CMatrix& g : cur) g = stage * g;
        ic.B = stage * ic.B;
        ic.cancelled.push_back(p);
        ++ic.stage_count;
    }
    return ic;
}

CMatrix dstc_gtilde(const CMatrix& G, int b) {
    const std::size_t M = G.rows();
    const std::size_t N = G.cols();
    const auto bb = static_cast<std::size_t>(b);
    CMatrix gt(N * bb, M * bb);
    for (std::size_t n = 0; n < N; ++n)
        for (std::size_t k = 0; k < M; ++k)
            for (std::size_t r = 0; r < bb; ++r) gt(n * bb + r, k * bb + r) = r == 0 ? G(k, n) : std::conj(G(k, n));
    return gt;
}

CMatrix noise_cov_dstc_icrec(const CMatrix& B, const CMatrix& Gt, double P, int J, int M, int kappa) {
    const double c = dstc_icrec_gain(P, M, J);
    return relayed_cov(B * Gt, B, c * c, kappa);
}

CMatrix noise_cov_tdma_icrec(const CMatrix& B, const CMatrix& G1, const CMatrix& f_col, double P, int M, int kappa) {
    const double x = f_col.frobenius_norm_sq();
    if (!(x > 0.0)) throw NumericError("noise_cov_tdma_icrec: zero source-relay channel");
    const double c1 = tdma_icrec_gain(P, M);
    return relayed_cov(B * G1, B, c1 * c1 / x, kappa);
}

void single_source_map(const SplitPlan& plan, CMatrix& Ma, CMatrix& Mb, std::vector<bool>& paired) {
    Ma = plan.Ma.front();
    Mb = plan.Mb.front();
    for (int s = 1; s < plan.system_count(); ++s) {
        Ma = vstack(Ma, plan.Ma[static_cast<std::size_t>(s)]);
        Mb = vstack(Mb, plan.Mb[static_cast<std::size_t>(s)]);
    }
    paired.assign(static_cast<std::size_t>(plan.T), false);
    if (plan.T == 4) paired[2] = paired[3] = true;
}

EquivalentSystem reduce_for_source(const StackedSystems& st, int target, IcMethod method, const RelayNoise& noise,
                                   double scale) {
    const int J = st.systems.empty() ? 0 : static_cast<int>(st.systems.front().G.size());
    if (target < 0 || target >= J) throw UsageError("reduce_for_source: target out of range");
    if (method == IcMethod::Pairwise && J != 2) throw UsageError("reduce_for_source: pairwise IC needs exactly two sources");
    const std::size_t b = static_cast<std::size_t>(st.plan.b);
    const int kappa = st.plan.kappa();
    EquivalentSystem eq;
    eq.scale = scale;
    eq.target = target;
    for (std::size_t s = 0; s < st.systems.size(); ++s) {
        const SplitSystem& sys = st.systems[s];
        CMatrix B;
        if (method == IcMethod::None || J == 1) {
            B = CMatrix::identity(sys.obs.size());
        } else if (method == IcMethod::Pairwise) {
            const CMatrix& gi = sys.G[static_cast<std::size_t>(1 - target)];
            std::vector<CMatrix> blocks;
            for (int n = 0; n < st.N; ++n) blocks.push_back(gi.block(static_cast<std::size_t>(n) * b, 0, b, b));
            B = ic_matrix_pairwise(blocks, st.N).B;
        } else {
            B = ic_iterative(sys.G, st.N, target).B;
        }
        const CMatrix H = B * sys.G[static_cast<std::size_t>(target)];
        CMatrix R;
        switch (noise.kind) {
            case RelayNoise::Kind::PerAntenna:
                R = relayed_cov(B * noise.gtilde, B, noise.gain_sq, kappa);
                break;
            case RelayNoise::Kind::Shared:
                R = relayed_cov(H, B, noise.gain_sq, kappa);
                break;
            case RelayNoise::Kind::None:
                R = relayed_cov(CMatrix(), B, 0.0, kappa);
                break;
        }
        if (s == 0) {
            eq.obs = B * sys.obs;
            eq.H_eff = H;
            eq.R_n = std::move(R);
            eq.B = std::move(B);
        } else {
            eq.obs = vstack(eq.obs, B * sys.obs);
            eq.H_eff = block_diag(eq.H_eff, H);
            eq.R_n = block_diag(eq.R_n, R);
            eq.B = block_diag(eq.B, B);
        }
    }
    single_source_map(st.plan, eq.Ma, eq.Mb, eq.paired);
    return eq;
}

EquivalentSystem joint_system(const StackedSystems& st, const RelayNoise& noise, double scale) {
    if (noise.kind == RelayNoise::Kind::Shared)
        throw UsageError("joint_system: shared relay noise needs per-source gains and is not supported");
    const std::size_t J = st.systems.front().G.size();
    const std::size_t b = static_cast<std::size_t>(st.plan.b);
    const std::size_t T = static_cast<std::size_t>(st.plan.T);
    const int kappa = st.plan.kappa();
    EquivalentSystem eq;
    eq.scale = scale;
    eq.target = -1;
    const std::size_t U = st.systems.size() * b * J;
    eq.Ma = CMatrix(U, J * T);
    eq.Mb = CMatrix(U, J * T);
    for (std::size_t s = 0; s < st.systems.size(); ++s) {
        const SplitSystem& sys = st.systems[s];
        CMatrix H = sys.G.front();
        for (std::size_t j = 1; j < J; ++j) H = hstack(H, sys.G[j]);
        const CMatrix I = CMatrix::identity(sys.obs.size());
        CMatrix R = noise.kind == RelayNoise::Kind::PerAntenna ? relayed_cov(noise.gtilde, I, noise.gain_sq, kappa)
                                                                : relayed_cov(CMatrix(), I, 0.0, kappa);
        for (std::size_t j = 0; j < J; ++j)
            for (std::size_t r = 0; r < b; ++r)
                for (std::size_t t = 0; t < T; ++t) {
                    eq.Ma(s * b * J + j * b + r, j * T + t) = st.plan.Ma[s](r, t);
                    eq.Mb(s * b * J + j * b + r, j * T + t) = st.plan.Mb[s](r, t);
                }
        if (s == 0) {
            eq.obs = sys.obs;
            eq.H_eff = std::move(H);
            eq.R_n = std::move(R);
            eq.B = I;
        } else {
            eq.obs = vstack(eq.obs, sys.obs);
            eq.H_eff = block_diag(eq.H_eff, H);
            eq.R_n = block_diag(eq.R_n, R);
            eq.B = block_diag(eq.B, I);
        }
    }
    eq.paired.assign(J * T, false);
    if (T == 4)
        for (std::size_t j = 0; j < J; ++j) eq.paired[j * T + 2] = eq.paired[j * T + 3] = true;
    return eq;
}

MlResult ml_decode(const EquivalentSystem& eq, const Constellation& c, const Constellation* c_pair) {
    return decode_impl(eq, c, c_pair, true);
}

MlResult ml_decode_exhaustive(const EquivalentSystem& eq, const Constellation& c, const Constellation* c_pair) {
    return decode_impl(eq, c, c_pair, false);
}

std::vector<std::vector<int>> joint_ml_decode(const CMatrix& raw, const ChannelRealization& ch,
                                              const NetworkConfig& cfg, const Constellation& c,
                                              const Constellation& c_pair) {
    const DstcDesign design = dstc_design(cfg.M);
    const double space = std::pow(static_cast<double>(c.order), cfg.J * design.T);
    if (space > 1048576.0) throw UsageError("joint_ml_decode: search space exceeds 2^20 candidates");
    const StackedSystems st = equiv_system_dstc_icrec(raw, ch, cfg);
    const double gain = dstc_icrec_gain(cfg.P, cfg.M, cfg.J);
    const RelayNoise noise{RelayNoise::Kind::PerAntenna, gain * gain, dstc_gtilde(ch.G, st.plan.b)};
    const EquivalentSystem eq = joint_system(st, noise, std::sqrt(cfg.P) * gain);
    const MlResult r = ml_decode(eq, c, &c_pair);
    std::vector<std::vector<int>> out(static_cast<std::size_t>(cfg.J));
    for (int j = 0; j < cfg.J; ++j)
        out[static_cast<std::size_t>(j)].assign(r.indices.begin() + j * design.T, r.indices.begin() + (j + 1) * design.T);
    return out;
}

}  // namespace marn
