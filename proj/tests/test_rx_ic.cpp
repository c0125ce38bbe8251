#include <doctest.h>

#include <cmath>

#include "marn/rx_ic.hpp"
#include "marn/schemes.hpp"
#include "support.hpp"

using namespace marn;
using marn::test::destination;
using marn::test::make_cfg;
using marn::test::max_diff;
using marn::test::random_block;
using marn::test::random_matrix;
using marn::test::relay_rx;

namespace {

CMatrix random_alamouti_stack(int N, RngStream& rng) {
    CMatrix g(2 * static_cast<std::size_t>(N), 2);
    for (int n = 0; n < N; ++n) g.set_block(2 * static_cast<std::size_t>(n), 0, alamouti(rng.cgauss(), rng.cgauss()));
    return g;
}

std::vector<CMatrix> blocks_of(const CMatrix& g) {
    std::vector<CMatrix> out;
    for (std::size_t n = 0; n < g.rows() / 2; ++n) out.push_back(g.block(2 * n, 0, 2, 2));
    return out;
}

CMatrix row_space_projector(const CMatrix& B) {
    const CMatrix inv = hermitian_solve(B * B.adjoint(), B).x;
    return B.adjoint() * inv;
}

bool cancels(const CMatrix& B, const CMatrix& g) {
    return (B * g).frobenius_norm() <= 1e-9 * B.frobenius_norm() * g.frobenius_norm();
}

struct Instance {
    NetworkConfig cfg;
    ChannelRealization ch;
    std::vector<CMatrix> s;
    std::vector<std::vector<int>> idx;
    StackedSystems st;
    RelayNoise noise;
    double scale = 1.0;
};

Instance dstc_instance(int J, int M, int N, double snr_db, int order, std::uint64_t seed, bool noisy) {
    Instance in;
    RngStream rng(seed, 0);
    in.cfg = make_cfg(J, M, N, snr_db, order);
    const Constellation c = make_psk(order);
    const Constellation cp = pair_constellation(in.cfg);
    in.ch = draw_channels(in.cfg, rng);
    const DstcDesign design = dstc_design(M);
    in.idx.resize(static_cast<std::size_t>(J));
    for (int j = 0; j < J; ++j) in.s.push_back(random_block(design.T, c, cp, rng, &in.idx[static_cast<std::size_t>(j)]));
    RngStream* noise = noisy ? &rng : nullptr;
    const auto tx = encode_dstc_icrec(relay_rx(in.ch, in.s, in.cfg.P, design.T, noise), design, in.cfg.P, J);
    in.st = equiv_system_dstc_icrec(destination(in.ch, tx, design.T, noise), in.ch, in.cfg);
    const double g = dstc_icrec_gain(in.cfg.P, M, J);
    in.noise = {RelayNoise::Kind::PerAntenna, g * g, dstc_gtilde(in.ch.G, in.st.plan.b)};
    in.scale = std::sqrt(in.cfg.P) * g;
    return in;
}

}  // namespace

TEST_CASE("two antenna equivalent system from a direct simulation") {
    RngStream rng(31, 0);
    const NetworkConfig cfg = make_cfg(1, 2, 3, 10.0);
    const ChannelRealization ch = draw_channels(cfg, rng);
    const DstcDesign design = dstc_design(2);
    const std::vector<CMatrix> s{CMatrix(2, 1, {1, 0})};
    const auto tx = encode_dstc_icrec(relay_rx(ch, s, cfg.P, 2, nullptr), design, cfg.P, 1);
    const StackedSystems st = equiv_system_dstc_icrec(destination(ch, tx, 2, nullptr), ch, cfg);
    const double scale = std::sqrt(cfg.P * cfg.P / (2 * cfg.P + 2));
    REQUIRE(st.systems.size() == 1);
    const CMatrix& obs = st.systems[0].obs;
    REQUIRE(obs.size() == 6);
    for (std::size_t n = 0; n < 3; ++n) {
        const cd a = ch.F(0, 0) * ch.G(0, n);
        const cd b = ch.F(1, 0) * std::conj(ch.G(1, n));
        CHECK(std::abs(obs[2 * n] - scale * a) < 1e-12);
        CHECK(std::abs(obs[2 * n + 1] - scale * b) < 1e-12);
        const CMatrix h = st.systems[0].G[0].block(2 * n, 0, 2, 2);
        CHECK(std::abs(h(0, 0) - a) < 1e-14);
        CHECK(std::abs(h(1, 0) - b) < 1e-14);
        CHECK(is_alamouti(h));
        const double e = std::norm(ch.F(0, 0) * ch.G(0, n)) + std::norm(ch.F(1, 0) * ch.G(1, n));
        CHECK(max_diff(h.adjoint() * h, CMatrix::identity(2) * cd(e)) < 1e-12);
    }
}

TEST_CASE("four antenna split recombines first and last samples") {
    RngStream rng(32, 0);
    const CMatrix raw = random_matrix(2, 4, rng);
    const SplitPlan plan = split_plan(4);
    CHECK(plan.system_count() == 2);
    CHECK(plan.kappa() == 2);
    const CMatrix plus = recombine(plan, 0, raw);
    const CMatrix minus = recombine(plan, 1, raw);
    for (std::size_t n = 0; n < 2; ++n) {
        CHECK(std::abs(plus[2 * n] - (raw(n, 0) + raw(n, 3))) < 1e-15);
        CHECK(std::abs(minus[2 * n] - (raw(n, 0) - raw(n, 3))) < 1e-15);
    }
    CHECK_THROWS_AS(split_plan(8), UsageError);
}

TEST_CASE("recombination audit") {
    RngStream rng(34, 0);
    for (int T : {1, 2, 4}) {
        const SplitPlan plan = split_plan(T);
        const CMatrix raw = random_matrix(3, static_cast<std::size_t>(T), rng);
        CMatrix vec(raw.size(), 1);
        for (std::size_t i = 0; i < raw.size(); ++i) vec[i] = raw[i];
        for (int k = 0; k < plan.system_count(); ++k) {
            const RecombinationMap map = recombination_map(plan, k, 3);
            CHECK(max_diff(map.linear * vec + map.conjugate * vec.conjugate(), recombine(plan, k, raw)) < 1e-12);
        }
    }
}

TEST_CASE("noise free equivalent systems reproduce the observations") {
    for (std::uint64_t t = 0; t < 300; ++t) {
        const int M = 2 + static_cast<int>(t % 3);
        const int J = 1 + static_cast<int>(t % 2);
        const Instance in = dstc_instance(J, M, 3, 15.0, 4, 1000 + t, false);
        for (std::size_t k = 0; k < in.st.systems.size(); ++k) {
            CMatrix want(in.st.systems[k].obs.rows(), 1);
            for (int j = 0; j < J; ++j) {
                const CMatrix& s = in.s[static_cast<std::size_t>(j)];
                const CMatrix u = in.st.plan.Ma[k] * s + in.st.plan.Mb[k] * s.conjugate();
                want += in.st.systems[k].G[static_cast<std::size_t>(j)] * u * cd(in.scale);
            }
            REQUIRE(max_diff(in.st.systems[k].obs, want) <= 1e-12 * (1.0 + want.max_abs()));
        }
    }
}

TEST_CASE("pairwise ic matrix") {
    RngStream rng(35, 0);
    const CMatrix g2 = random_alamouti_stack(2, rng);
    const IcMatrix ic = ic_matrix_pairwise(blocks_of(g2), 2);
    CHECK(ic.B.rows() == 2);
    CHECK(ic.B.cols() == 4);
    CHECK(cancels(ic.B, g2));

    for (int N = 2; N <= 5; ++N) {
        const CMatrix g = random_alamouti_stack(N, rng);
        const IcMatrix icn = ic_matrix_pairwise(blocks_of(g), N);
        CHECK(icn.B.rows() == 2 * static_cast<std::size_t>(N - 1));
        CHECK(cancels(icn.B, g));
    }

    // unit interfering blocks: every row pair is alpha [I, -I]
    const IcMatrix unit = ic_matrix_pairwise({CMatrix::identity(2), CMatrix::identity(2), CMatrix::identity(2)}, 3);
    const cd alpha = unit.B(0, 0);
    CHECK(std::abs(alpha) > 0.0);
    CMatrix pattern(4, 6);
    pattern.set_block(0, 0, CMatrix::identity(2));
    pattern.set_block(2, 2, CMatrix::identity(2));
    pattern.set_block(0, 4, CMatrix::identity(2) * cd(-1));
    pattern.set_block(2, 4, CMatrix::identity(2) * cd(-1));
    CHECK(max_diff(unit.B, pattern * alpha) < 1e-15);

    CHECK_THROWS_AS(ic_matrix_pairwise({CMatrix(2, 2), CMatrix::identity(2)}, 2), NumericError);
    CHECK_THROWS_AS(ic_matrix_pairwise({CMatrix::identity(2)}, 1), UsageError);
}

TEST_CASE("iterative ic cancels every other source") {
    RngStream rng(36, 0);
    for (int i = 0; i < 100; ++i) {
        const int N = 4;
        std::vector<CMatrix> G;
        for (int j = 0; j < 3; ++j) G.push_back(random_alamouti_stack(N, rng));
        const IcMatrix ic = ic_iterative(G, N, 0);
        REQUIRE(ic.B.rows() == 2 * static_cast<std::size_t>(N - 3 + 1));
        REQUIRE(cancels(ic.B, G[1]));
        REQUIRE(cancels(ic.B, G[2]));
        REQUIRE(ic.cancelled == std::vector<int>{2, 1});
        REQUIRE(ic.stage_count == 2);
        const CMatrix proj = row_space_projector(ic.B);
        const CMatrix want = null_space_projector(hstack(G[1], G[2])).matrix;
        REQUIRE(max_diff(proj, want) < 1e-9);
    }
    for (int N = 2; N <= 4; ++N) {
        std::vector<CMatrix> G;
        for (int j = 0; j < N; ++j) G.push_back(random_alamouti_stack(N, rng));
        CHECK(ic_iterative(G, N, N - 1).B.rows() == 2);
    }
    std::vector<CMatrix> G{random_alamouti_stack(2, rng), random_alamouti_stack(2, rng), random_alamouti_stack(2, rng)};
    CHECK_THROWS_AS(ic_iterative(G, 2, 0), UsageError);
    CHECK_THROWS_AS(ic_iterative(G, 3, 3), UsageError);
}

TEST_CASE("two source iterative and pairwise ic share a null space") {
    RngStream rng(37, 0);
    for (int i = 0; i < 200; ++i) {
        const int N = 2 + i % 4;
        const std::vector<CMatrix> G{random_alamouti_stack(N, rng), random_alamouti_stack(N, rng)};
        const CMatrix a = ic_iterative(G, N, 0).B;
        const CMatrix b = ic_matrix_pairwise(blocks_of(G[1]), N).B;
        REQUIRE(max_diff(row_space_projector(a), row_space_projector(b)) < 1e-9);
    }
}

TEST_CASE("ic leaves no residual of cancelled sources") {
    for (std::uint64_t t = 0; t < 200; ++t) {
        const Instance in = dstc_instance(3, 4, 4, 20.0, 4, 2000 + t, false);
        for (std::size_t k = 0; k < in.st.systems.size(); ++k) {
            const SplitSystem& sys = in.st.systems[k];
            const CMatrix B = ic_iterative(sys.G, 4, 0).B;
            for (int j = 1; j < 3; ++j) {
                const CMatrix& s = in.s[static_cast<std::size_t>(j)];
                const CMatrix u = in.st.plan.Ma[k] * s + in.st.plan.Mb[k] * s.conjugate();
                const CMatrix contrib = sys.G[static_cast<std::size_t>(j)] * u;
                REQUIRE((B * contrib).frobenius_norm() <= 1e-9 * B.frobenius_norm() * contrib.frobenius_norm());
            }
        }
    }
}

TEST_CASE("noise covariance limits") {
    RngStream rng(38, 0);
    const CMatrix G = random_matrix(2, 3, rng);
    const CMatrix Gt = dstc_gtilde(G, 2);
    const CMatrix B0(4, 6);
    CHECK(noise_cov_dstc_icrec(B0, Gt, 10.0, 2, 2).max_abs() == 0.0);
    const CMatrix f = random_matrix(4, 1, rng);
    const CMatrix G1 = random_alamouti_stack(3, rng);
    CHECK(noise_cov_tdma_icrec(B0, G1, f, 10.0, 4).max_abs() == 0.0);

    const CMatrix B = ic_matrix_pairwise(blocks_of(random_alamouti_stack(3, rng)), 3).B;
    const CMatrix bb = B * B.adjoint();
    CHECK(max_diff(noise_cov_dstc_icrec(B, Gt, 1e-12, 2, 2), bb) < 1e-10);
    CHECK(max_diff(noise_cov_tdma_icrec(B, G1, f, 1e-12, 4), bb) < 1e-10);

    const double P = 10.0;
    const double c = dstc_icrec_gain(P, 2, 2);
    const CMatrix want = B * Gt * Gt.adjoint() * B.adjoint() * cd(c * c) + bb;
    CHECK(max_diff(noise_cov_dstc_icrec(B, Gt, P, 2, 2), want) < 1e-12);
    const double c1 = tdma_icrec_gain(P, 4);
    const CMatrix want1 = B * G1 * G1.adjoint() * B.adjoint() * cd(c1 * c1 / f.frobenius_norm_sq()) + bb;
    CHECK(max_diff(noise_cov_tdma_icrec(B, G1, f, P, 4), want1) < 1e-12);
}

TEST_CASE("whitened effective channel is diagonal with equal entries") {
    double worst = 0.0;
    for (std::uint64_t t = 0; t < 1000; ++t) {
        const Instance in = dstc_instance(2, 2, 3, 15.0, 2, 3000 + t, true);
        const EquivalentSystem eq = reduce_for_source(in.st, 0, IcMethod::Pairwise, in.noise, in.scale);
        const CMatrix R = eq.R_n;
        REQUIRE(max_diff(R, R.adjoint()) < 1e-10 * R.max_abs());
        const CMatrix q = eq.H_eff.adjoint() * hermitian_solve(R, eq.H_eff).x;
        const double d = std::abs(q(0, 0));
        worst = std::max({worst, std::abs(q(0, 1)) / d, std::abs(q(1, 0)) / d, std::abs(q(1, 1) - q(0, 0)) / d});
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("ml decoding of noiseless systems") {
    for (int order : {2, 4, 8, 16}) {
        for (int M : {2, 4}) {
            const Instance in = dstc_instance(2, M, 3, 20.0, order, 4000 + static_cast<std::uint64_t>(order * M), false);
            const Constellation c = make_psk(order);
            const Constellation cp = pair_constellation(in.cfg);
            for (int j = 0; j < 2; ++j) {
                const EquivalentSystem eq = reduce_for_source(in.st, j, IcMethod::Pairwise, in.noise, in.scale);
                CHECK(ml_decode(eq, c, &cp).indices == in.idx[static_cast<std::size_t>(j)]);
            }
        }
    }
}

TEST_CASE("decoupled ml equals exhaustive search") {
    int mismatches = 0;
    for (int order : {2, 4}) {
        const Constellation c = make_psk(order);
        for (std::uint64_t t = 0; t < 1000; ++t) {
            const Instance in = dstc_instance(2, 2, 2, 6.0, order, 5000 + t, true);
            const EquivalentSystem eq = reduce_for_source(in.st, 0, IcMethod::Pairwise, in.noise, in.scale);
            mismatches += ml_decode(eq, c).indices != ml_decode_exhaustive(eq, c).indices;
        }
    }
    CHECK(mismatches == 0);
}

TEST_CASE("ml metric is invariant to a common scaling") {
    const Constellation c = make_psk(4);
    for (std::uint64_t t = 0; t < 200; ++t) {
        const Instance in = dstc_instance(2, 2, 3, 5.0, 4, 6000 + t, true);
        const EquivalentSystem eq = reduce_for_source(in.st, 0, IcMethod::Pairwise, in.noise, in.scale);
        EquivalentSystem scaled = eq;
        const cd alpha(0.3, -1.7);
        scaled.obs = eq.obs * alpha;
        scaled.H_eff = eq.H_eff * alpha;
        scaled.R_n = eq.R_n * cd(std::norm(alpha));
        REQUIRE(ml_decode(eq, c).indices == ml_decode(scaled, c).indices);
    }
}

TEST_CASE("joint decoding with one source matches ml_decode") {
    const Constellation c = make_psk(4);
    for (std::uint64_t t = 0; t < 200; ++t) {
        const Instance in = dstc_instance(1, 2, 2, 5.0, 4, 7000 + t, true);
        const EquivalentSystem single = reduce_for_source(in.st, 0, IcMethod::None, in.noise, in.scale);
        const EquivalentSystem joint = joint_system(in.st, in.noise, in.scale);
        REQUIRE(ml_decode(joint, c).indices == ml_decode(single, c).indices);
    }
}

TEST_CASE("joint ml decoding") {
    const Instance in = dstc_instance(2, 2, 2, 20.0, 4, 8000, false);
    const Constellation c = make_psk(4);
    const Constellation cp = pair_constellation(in.cfg);
    const DstcDesign design = dstc_design(2);
    const auto tx = encode_dstc_icrec(relay_rx(in.ch, in.s, in.cfg.P, 2, nullptr), design, in.cfg.P, 2);
    const CMatrix raw = destination(in.ch, tx, 2, nullptr);
    CHECK(joint_ml_decode(raw, in.ch, in.cfg, c, cp) == in.idx);

    const Instance big = dstc_instance(3, 4, 3, 20.0, 16, 8001, false);
    const Constellation c16 = make_psk(16);
    CHECK_THROWS_AS(joint_ml_decode(CMatrix(3, 4), big.ch, big.cfg, c16, pair_constellation(big.cfg)), UsageError);
}
