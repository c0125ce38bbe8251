#include <doctest.h>

#include <bit>
#include <cmath>

#include "marn/analysis.hpp"
#include "marn/harness.hpp"
#include "marn/schemes.hpp"
#include "support.hpp"

using namespace marn;
using marn::test::make_cfg;

namespace {

double ber_at(SchemeId id, int J, int M, int N, double snr_db, int order, std::uint64_t min_errors, std::uint64_t seed) {
    const NetworkConfig cfg = make_cfg(J, M, N, snr_db, order);
    const BerPoint p = run_point(id, cfg, snr_db, {min_errors, 5'000'000}, seed, {1, 64, nullptr});
    REQUIRE(p.bit_errors >= min_errors);
    return p.ber;
}

}  // namespace

TEST_CASE("scheme names") {
    for (SchemeId id : all_schemes()) {
        CHECK(parse_scheme(scheme_name(id)) == id);
        CHECK(parse_scheme("scheme" + std::to_string(scheme_number(id))) == id);
        CHECK(parse_scheme(std::to_string(scheme_number(id))) == id);
    }
    CHECK_THROWS_AS(parse_scheme("scheme7"), UsageError);
    CHECK_THROWS_AS(parse_scheme("fast"), UsageError);
}

TEST_CASE("scheme metadata examples") {
    const SchemeMeta a = scheme_meta(SchemeId::DstcIcRec, 2, 4, 3);
    CHECK(a.symbol_rate == Rational(1, 2));
    CHECK(a.diversity_claim == 3);
    CHECK(a.claim_kind == ClaimKind::UpperBound);
    CHECK_FALSE(a.relay_backward_csi);

    const SchemeMeta b = scheme_meta(SchemeId::TdmaIcRec, 2, 2, 3);
    CHECK(b.symbol_rate == Rational(1, 3));
    CHECK(b.diversity_claim == 2);
    CHECK(scheme_meta(SchemeId::TdmaIcRec, 2, 4, 3).diversity_claim == 2 * std::min(2, 3 - 2 + 1));
    CHECK(scheme_meta(SchemeId::TdmaIcRec, 2, 8, 2).diversity_claim == 4 * std::min(2, 2 - 2 + 1));

    const SchemeMeta c = scheme_meta(SchemeId::FullTdmaDstc, 3, 3, 3);
    CHECK(c.symbol_rate == Rational(1, 6));
    CHECK(c.diversity_claim == 3);

    CHECK(scheme_meta(SchemeId::IcRelayTdma, 2, 4, 2).symbol_rate == Rational(1, 3));
    CHECK(scheme_meta(SchemeId::DecodeRelayIcDest, 2, 4, 2).symbol_rate == Rational(1, 3));
    CHECK(scheme_meta(SchemeId::ConcurrentJoint, 2, 4, 2).symbol_rate == Rational(1, 2));
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(1, 3).str() == "1/3");
}

TEST_CASE("comparison assignments carry one bit per source per channel use") {
    for (SchemeId id : all_schemes()) {
        const int bits = std::countr_zero(static_cast<unsigned>(comparison_constellation(id)));
        const Rational r = scheme_meta(id, 2, 2, 2).symbol_rate;
        CHECK(bits * r.num == r.den);
    }
}

TEST_CASE("int-free condition examples") {
    CHECK(int_free_condition(2, 2, 3));
    CHECK_FALSE(int_free_condition(2, 2, 2));
    CHECK(int_free_condition(3, 6, 5));
    CHECK_FALSE(int_free_condition(3, 6, 4));
}

TEST_CASE("unsupported configurations are rejected") {
    CHECK_THROWS_AS(check_supported(SchemeId::DstcIcRec, make_cfg(2, 8, 2, 10.0)), UsageError);
    CHECK_NOTHROW(check_supported(SchemeId::TdmaIcRec, make_cfg(2, 8, 2, 10.0)));
    CHECK_THROWS_AS(check_supported(SchemeId::TdmaIcRec, make_cfg(1, 8, 2, 10.0)), UsageError);
    CHECK_THROWS_AS(check_supported(SchemeId::ConcurrentJoint, make_cfg(3, 4, 3, 10.0, 16)), UsageError);
    CHECK_THROWS_AS(check_supported(SchemeId::DstcIcRec, make_cfg(3, 2, 3, 10.0)), UsageError);
}

TEST_CASE("noiseless trials are error free") {
    const std::array<std::array<int, 3>, 8> topologies{
        {{1, 2, 2}, {2, 2, 2}, {2, 2, 3}, {2, 4, 2}, {2, 4, 3}, {3, 4, 3}, {3, 3, 3}, {2, 8, 2}}};
    for (SchemeId id : all_schemes()) {
        for (const auto& [J, M, N] : topologies) {
            for (int order : {2, 4, 8, 16}) {
                const NetworkConfig cfg = make_cfg(J, M, N, 20.0, order);
                try {
                    check_supported(id, cfg);
                } catch (const UsageError&) {
                    continue;
                }
                if (id == SchemeId::ConcurrentJoint && std::pow(order, J * codeword_length(M)) > 4096.0) continue;
                for (std::uint64_t t = 0; t < 5; ++t) {
                    RngStream rng(51, t);
                    const TrialOutcome o = run_trial(id, cfg, rng, {true, 10});
                    INFO(scheme_name(id), " ", J, "x", M, "x", N, " order ", order);
                    REQUIRE(o.bits > 0);
                    REQUIRE(o.bit_errors == 0);
                }
            }
        }
    }
}

TEST_CASE("trials are deterministic per stream") {
    const NetworkConfig cfg = make_cfg(2, 4, 3, 8.0, 4);
    for (SchemeId id : all_schemes()) {
        RngStream a(52, 3), b(52, 3);
        const TrialOutcome x = run_trial(id, cfg, a);
        const TrialOutcome y = run_trial(id, cfg, b);
        CHECK(x.bits == y.bits);
        CHECK(x.bit_errors == y.bit_errors);
    }
}

TEST_CASE("per-source bit accounting adds up") {
    const NetworkConfig cfg = make_cfg(3, 3, 3, 5.0, 4);
    RngStream rng(53, 0);
    const TrialOutcome o = run_trial(SchemeId::TdmaIcRec, cfg, rng);
    std::uint64_t bits = 0, errors = 0;
    for (const SourceOutcome& s : o.per_source) {
        bits += s.bits;
        errors += s.bit_errors;
    }
    CHECK(o.per_source.size() == 3);
    CHECK(bits == o.bits);
    CHECK(errors == o.bit_errors);
}

TEST_CASE("two source dstc ic at 25 dB") {
    CHECK(ber_at(SchemeId::DstcIcRec, 2, 2, 2, 25.0, 2, 200, 54) < 0.1);
    std::vector<std::pair<double, double>> pts;
    for (double db : {20.0, 25.0, 30.0}) pts.emplace_back(db, ber_at(SchemeId::DstcIcRec, 2, 2, 2, db, 2, 200, 55));
    CHECK(std::abs(ber_slope(pts).slope - 1.0) <= 0.3);
}

TEST_CASE("ber decreases with snr for every scheme") {
    for (SchemeId id : all_schemes()) {
        const double lo = ber_at(id, 2, 2, 3, 5.0, 2, 100, 56);
        const double hi = ber_at(id, 2, 2, 3, 15.0, 2, 100, 56);
        INFO(scheme_name(id));
        CHECK(hi <= lo);
    }
}

TEST_CASE("sources see the same error rate") {
    for (SchemeId id : {SchemeId::DstcIcRec, SchemeId::TdmaIcRec, SchemeId::IcRelayTdma}) {
        const NetworkConfig cfg = make_cfg(2, 2, 3, 8.0);
        std::array<std::uint64_t, 2> bits{}, errors{};
        for (std::uint64_t t = 0; t < 40000; ++t) {
            RngStream rng(57, t);
            const TrialOutcome o = run_trial(id, cfg, rng);
            for (std::size_t j = 0; j < 2; ++j) {
                bits[j] += o.per_source[j].bits;
                errors[j] += o.per_source[j].bit_errors;
            }
        }
        const double p0 = static_cast<double>(errors[0]) / static_cast<double>(bits[0]);
        const double p1 = static_cast<double>(errors[1]) / static_cast<double>(bits[1]);
        const double p = 0.5 * (p0 + p1);
        const double sigma = std::sqrt(p * (1 - p) * (1.0 / static_cast<double>(bits[0]) + 1.0 / static_cast<double>(bits[1])));
        INFO(scheme_name(id), " ", p0, " ", p1);
        CHECK(errors[0] >= 100);
        CHECK(std::abs(p0 - p1) <= 3.0 * sigma);
    }
}

TEST_CASE("joint decoding is no worse than ic decoding") {
    for (double db : {10.0, 15.0, 20.0}) {
        const double joint = ber_at(SchemeId::ConcurrentJoint, 2, 2, 2, db, 2, 200, 58);
        const double ic = ber_at(SchemeId::DstcIcRec, 2, 2, 2, db, 2, 200, 58);
        INFO(db, " dB: joint ", joint, " ic ", ic);
        CHECK(joint <= ic);
    }
}
