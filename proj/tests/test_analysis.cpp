#include <doctest.h>

#include <cmath>

#include "marn/analysis.hpp"
#include "marn/relay_codec.hpp"
#include "support.hpp"

using namespace marn;
using marn::test::make_cfg;
using marn::test::random_matrix;

namespace {

GammaSampler constant(double v) {
    return [v](RngStream&) { return v; };
}

std::vector<std::pair<double, double>> synthetic(double (*law)(double)) {
    std::vector<std::pair<double, double>> pts;
    for (double db = 10.0; db <= 40.0; db += 5.0) pts.emplace_back(db, law(std::pow(10.0, db / 10.0)));
    return pts;
}

}  // namespace

TEST_CASE("snr_direct examples") {
    CHECK(snr_direct(CMatrix(3, 1, {1, 0, 0}), CMatrix::identity(3)) == doctest::Approx(1.0));
    RngStream rng(41, 0);
    const CMatrix h = random_matrix(4, 1, rng);
    CHECK(snr_direct(h, CMatrix::identity(4) * cd(0.25)) == doctest::Approx(h.frobenius_norm_sq() / 0.25));
}

TEST_CASE("tdma closed form equals the direct quadratic form") {
    RngStream rng(42, 0);
    for (auto [J, M, N] : {std::array{2, 4, 3}, std::array{2, 8, 2}, std::array{1, 2, 2}, std::array{3, 6, 4}}) {
        for (int i = 0; i < 500; ++i) {
            const NetworkConfig cfg = make_cfg(J, M, N, 40.0 * rng.uniform());
            const ChannelRealization ch = draw_channels(cfg, rng);
            const double direct = snr_tdma_direct(ch, cfg);
            REQUIRE(std::abs(snr_tdma_closed_form(ch, cfg) - direct) <= 1e-8 * direct);
        }
    }
    CHECK_THROWS_AS(snr_tdma_closed_form(draw_channels(make_cfg(2, 3, 3, 10.0), rng), make_cfg(2, 3, 3, 10.0)),
                    UsageError);
}

TEST_CASE("tdma closed form for a single source") {
    RngStream rng(43, 0);
    for (int i = 0; i < 100; ++i) {
        const NetworkConfig cfg = make_cfg(1, 2, 3, 15.0);
        const ChannelRealization ch = draw_channels(cfg, rng);
        const double x = ch.F.frobenius_norm_sq();
        const double y = ch.G.frobenius_norm_sq();
        const double c1 = tdma_icrec_gain(cfg.P, 2);
        REQUIRE(snr_tdma_closed_form(ch, cfg) == doctest::Approx(x * y / (x + c1 * c1 * y)).epsilon(1e-10));
    }
}

TEST_CASE("tdma closed form with a zero uplink") {
    RngStream rng(44, 0);
    const NetworkConfig cfg = make_cfg(2, 4, 3, 10.0);
    ChannelRealization ch = draw_channels(cfg, rng);
    for (std::size_t i = 0; i < ch.F.rows(); ++i) ch.F(i, 0) = 0.0;
    CHECK(snr_tdma_closed_form(ch, cfg) == 0.0);
}

TEST_CASE("dstc upper bound examples") {
    RngStream rng(45, 0);
    const NetworkConfig cfg = make_cfg(2, 2, 3, 20.0);
    ChannelRealization ch = draw_channels(cfg, rng);
    double g = 0.0;
    for (std::size_t n = 0; n < 3; ++n) g += std::norm(ch.G(0, n)) + std::norm(ch.G(1, n));

    ch.F = CMatrix(2, 2, {1, cd(0, 2), 0, 0});
    CHECK(snr_upper_bound_dstc(ch, cfg) == doctest::Approx(0.0));
    ch.F = CMatrix(2, 2, {cd(0.6, 0), cd(0, 0.8), cd(0.8, 0), cd(0, -0.6)});
    CHECK(snr_upper_bound_dstc(ch, cfg) == doctest::Approx(2.0 * g));
}

TEST_CASE("dstc upper bound dominates the actual snr") {
    RngStream rng(46, 0);
    int violations = 0;
    for (auto [J, M, N] : {std::array{2, 2, 2}, std::array{2, 2, 3}, std::array{2, 4, 3}, std::array{3, 4, 3}}) {
        for (int i = 0; i < 2500; ++i) {
            const NetworkConfig cfg = make_cfg(J, M, N, 40.0 * rng.uniform());
            const ChannelRealization ch = draw_channels(cfg, rng);
            violations += snr_upper_bound_dstc(ch, cfg) < snr_dstc_direct(ch, cfg);
        }
    }
    CHECK(violations == 0);
}

TEST_CASE("outage slope of gamma variables") {
    const DiversityEstimate e2 = outage_diversity(gamma_sampler(2), {}, 1'000'000, 7);
    CHECK(e2.valid);
    CHECK(e2.points.size() >= 3);
    CHECK(std::isfinite(e2.stderr));
    CHECK(std::abs(e2.slope - 2.0) <= 0.2);

    const DiversityEstimate e1 = outage_diversity(gamma_sampler(1), {}, 1'000'000, 8);
    CHECK(std::abs(e1.slope - 1.0) <= 0.2);
}

TEST_CASE("outage slope of a harmonic composite follows the weaker input") {
    const DiversityEstimate e = outage_diversity(lemma1_composite({gamma_sampler(2)}, gamma_sampler(3)), {}, 1'000'000, 9);
    CHECK(e.valid);
    CHECK(std::abs(e.slope - 2.0) <= 0.2);
    const DiversityEstimate f = outage_diversity(lemma1_composite({gamma_sampler(2)}, gamma_sampler(4)), {}, 1'000'000, 10);
    CHECK(std::abs(f.slope - 2.0) <= 0.2);
}

TEST_CASE("constant snr has no outage slope") {
    const DiversityEstimate e = outage_diversity(constant(3.0), {}, 10000, 1);
    CHECK_FALSE(e.valid);
    const DiversityEstimate g = outage_diversity(constant(3.0), {1.0, 0.5, 0.25}, 10000, 1);
    CHECK_FALSE(g.valid);
}

TEST_CASE("outage regression on an explicit grid") {
    std::vector<double> samples;
    RngStream rng(47, 0);
    const GammaSampler s = gamma_sampler(2);
    for (int i = 0; i < 1'000'000; ++i) samples.push_back(s(rng));
    const DiversityEstimate e = outage_diversity_from_samples(samples, {0.08, 0.04, 0.02, 0.01});
    CHECK(e.valid);
    CHECK(e.points.size() == 4);
    CHECK(std::abs(e.slope - 2.0) <= 0.2);
    const DiversityEstimate sparse = outage_diversity_from_samples(samples, {1e-3, 5e-4, 2.5e-4});
    CHECK_FALSE(sparse.valid);
}

TEST_CASE("ber slope of synthetic curves") {
    const DiversityEstimate p2 = ber_slope(synthetic([](double s) { return 0.5 * std::pow(s, -2.0); }));
    CHECK(p2.slope == doctest::Approx(2.0).epsilon(0.025));

    const auto logged = synthetic([](double s) { return 0.5 * std::log(s) * std::pow(s, -3.0); });
    const DiversityEstimate low = ber_slope({logged.begin(), logged.begin() + 4});
    const DiversityEstimate high = ber_slope({logged.end() - 4, logged.end()});
    CHECK(low.slope < 3.0);
    CHECK(high.slope < 3.0);
    CHECK(high.slope > low.slope);
    CHECK(ber_slope(logged, 4).slope == doctest::Approx(high.slope));

    const DiversityEstimate flat = ber_slope(synthetic([](double) { return 0.01; }));
    CHECK(std::abs(flat.slope) < 1e-12);

    CHECK_THROWS_AS(ber_slope({{10.0, 0.1}, {20.0, 0.0}, {30.0, 0.01}}), UsageError);
}

TEST_CASE("harmonic composite examples") {
    RngStream rng(48, 0);
    const GammaSampler capped = lemma1_composite({constant(2.0), constant(3.0)}, constant(1e18));
    CHECK(capped(rng) == doctest::Approx(5.0));
    CHECK(lemma1_composite({constant(2.0)}, constant(2.0))(rng) == doctest::Approx(1.0));
    CHECK(lemma1_composite({constant(0.0)}, constant(0.0))(rng) == 0.0);
}

TEST_CASE("projection and uplink gamma degrees") {
    for (auto [J, N] : {std::pair{2, 2}, std::pair{2, 3}}) {
        const NetworkConfig cfg = make_cfg(J, 2 * J, N, 20.0);
        const GammaSampler y = [cfg](RngStream& rng) {
            const ChannelRealization ch = draw_channels(cfg, rng);
            const EquivalentSystem eq = tdma_icrec_system(ch, cfg);
            return snr_direct(eq.H_eff.col(0), eq.B * eq.B.adjoint());
        };
        const DiversityEstimate e = outage_diversity(y, {}, 2'000'000, 11);
        CHECK(std::abs(e.slope - 2.0 * (N - J + 1)) <= 0.25);
    }
    for (int M : {2, 3}) {
        const NetworkConfig cfg = make_cfg(1, M, 1, 20.0);
        const GammaSampler x = [cfg](RngStream& rng) { return draw_channels(cfg, rng).F.frobenius_norm_sq(); };
        const DiversityEstimate e = outage_diversity(x, {}, 1'000'000, 12);
        CHECK(std::abs(e.slope - M) <= 0.25);
    }
}
