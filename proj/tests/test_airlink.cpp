#include <doctest.h>

#include <bit>
#include <cmath>
#include <numbers>

#include "marn/airlink.hpp"
#include "support.hpp"

using namespace marn;
using marn::test::make_cfg;
using marn::test::max_diff;

using Block = std::array<std::uint32_t, 4>;

TEST_CASE("philox known answers") {
    CHECK(RngStream::philox({0, 0, 0, 0}, {0, 0}) == Block{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(RngStream::philox({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          Block{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(RngStream::philox({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          Block{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are deterministic and distinct") {
    RngStream a(42, 7), b(42, 7), c(42, 8), d(43, 7);
    bool same_c = true, same_d = true;
    for (int i = 0; i < 16; ++i) {
        const auto x = a();
        CHECK(x == b());
        same_c = same_c && x == c();
        same_d = same_d && x == d();
    }
    CHECK_FALSE(same_c);
    CHECK_FALSE(same_d);
    RngStream u(1, 1);
    for (int i = 0; i < 10000; ++i) {
        const double v = u.uniform();
        REQUIRE(v > 0.0);
        REQUIRE(v < 1.0);
    }
}

TEST_CASE("draw_channels shape and determinism") {
    const NetworkConfig cfg = make_cfg(2, 2, 3, 10.0);
    RngStream r1(42, 0), r2(42, 0);
    const ChannelRealization a = draw_channels(cfg, r1);
    const ChannelRealization b = draw_channels(cfg, r2);
    CHECK(a.F.rows() == 2);
    CHECK(a.F.cols() == 2);
    CHECK(a.G.rows() == 2);
    CHECK(a.G.cols() == 3);
    CHECK(max_diff(a.F, b.F) == 0.0);
    CHECK(max_diff(a.G, b.G) == 0.0);
}

TEST_CASE("channel and noise statistics") {
    RngStream rng(9, 0);
    const NetworkConfig cfg = make_cfg(1, 1, 1, 0.0);
    const int n = 100000;
    double power = 0.0, m2 = 0.0, m4 = 0.0;
    for (int i = 0; i < n; ++i) {
        const cd f = draw_channels(cfg, rng).F(0, 0);
        power += std::norm(f);
        const double x = f.real() * std::sqrt(2.0);
        m2 += x * x;
        m4 += x * x * x * x;
    }
    CHECK(power / n == doctest::Approx(1.0).epsilon(0.02));
    const double kurt = (m4 / n) / ((m2 / n) * (m2 / n));
    CHECK(kurt >= 2.8);
    CHECK(kurt <= 3.2);

    CHECK(draw_awgn(0, rng).empty());
    const std::vector<cd> w = draw_awgn(n, rng);
    double var = 0.0;
    for (cd v : w) var += std::norm(v);
    CHECK(var / n == doctest::Approx(1.0).epsilon(0.02));
    RngStream s1(5, 5), s2(5, 5);
    CHECK(draw_awgn(8, s1) == draw_awgn(8, s2));
}

TEST_CASE("psk examples") {
    const Constellation bpsk = make_psk(2);
    CHECK(std::abs(bpsk.points[0] - cd(1)) < 1e-15);
    CHECK(std::abs(bpsk.points[1] - cd(-1)) < 1e-15);

    const Constellation qpsk = make_psk(4);
    const cd expect[] = {1, {0, 1}, -1, {0, -1}};
    for (int k = 0; k < 4; ++k) CHECK(std::abs(qpsk.points[k] - expect[k]) < 1e-15);
    CHECK(qpsk.labels == std::vector<unsigned>{0, 1, 3, 2});

    const Constellation rot = make_psk(4, std::numbers::pi / 4);
    for (cd p : rot.points) CHECK(std::abs(p) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::arg(rot.points[0]) == doctest::Approx(std::numbers::pi / 4));

    CHECK_THROWS_AS(make_psk(3), UsageError);
    CHECK_THROWS_AS(make_psk(32), UsageError);
}

TEST_CASE("psk energy, gray labels and minimum distance") {
    for (int order : {2, 4, 8, 16}) {
        const Constellation c = make_psk(order, 0.3);
        double energy = 0.0;
        for (cd p : c.points) energy += std::norm(p);
        CHECK(energy / order == doctest::Approx(1.0).epsilon(1e-12));
        for (int k = 0; k < order; ++k) {
            const unsigned diff = c.labels[k] ^ c.labels[(k + 1) % order];
            CHECK(std::popcount(diff) == 1);
        }
        double dmin = 1e9;
        for (int i = 0; i < order; ++i)
            for (int j = i + 1; j < order; ++j) dmin = std::min(dmin, std::abs(c.points[i] - c.points[j]));
        CHECK(std::abs(dmin - 2.0 * std::sin(std::numbers::pi / order)) < 1e-12);
        CHECK(c.bits_per_symbol() == std::countr_zero(static_cast<unsigned>(order)));
    }
}

TEST_CASE("modulation round trip") {
    const Constellation bpsk = make_psk(2);
    const std::vector<std::uint8_t> zero{0};
    CHECK(std::abs(modulate(zero, bpsk)[0] - cd(1)) < 1e-15);

    const Constellation qpsk = make_psk(4);
    const std::vector<std::uint8_t> four{1, 0, 0, 1};
    CHECK(modulate(four, qpsk).size() == 2);
    const std::vector<std::uint8_t> three{1, 0, 1};
    CHECK_THROWS_AS(modulate(three, qpsk), UsageError);

    RngStream rng(11, 0);
    for (int order : {2, 4, 8, 16}) {
        const Constellation c = make_psk(order, 0.1);
        std::vector<std::uint8_t> bits(40 * c.bits_per_symbol());
        for (auto& b : bits) b = static_cast<std::uint8_t>(rng() & 1);
        const std::vector<int> idx = modulate_indices(bits, c);
        const std::vector<cd> sym = modulate(bits, c);
        std::vector<std::uint8_t> back;
        for (std::size_t k = 0; k < sym.size(); ++k) {
            const int d = demap(sym[k] * 3.0, c, 3.0);
            CHECK(d == idx[k]);
            CHECK(bit_errors(idx[k], d, c) == 0);
            const std::vector<std::uint8_t> b = bits_of(d, c);
            back.insert(back.end(), b.begin(), b.end());
        }
        CHECK(back == bits);
    }
}

TEST_CASE("nearest point ties go to the lower index") {
    const Constellation bpsk = make_psk(2);
    CHECK(bpsk.nearest(cd(0, 1)) == 0);
    CHECK(bpsk.nearest(cd(0, 0)) == 0);
    const Constellation qpsk = make_psk(4);
    CHECK(qpsk.nearest(cd(-1, -1)) == 2);
    CHECK(bit_errors(0, 2, qpsk) == 2);
}

TEST_CASE("network config validation") {
    CHECK_NOTHROW(make_cfg(2, 2, 3, 10.0).validate());
    CHECK_THROWS_AS(make_cfg(3, 2, 3, 10.0).validate(), UsageError);
    CHECK_THROWS_AS(make_cfg(0, 2, 3, 10.0).validate(), UsageError);
    NetworkConfig bad = make_cfg(1, 1, 1, 0.0);
    bad.P = 0.0;
    CHECK_THROWS_AS(bad.validate(), UsageError);
}
