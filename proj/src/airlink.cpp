#include "marn/airlink.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

namespace marn {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

}  // namespace

std::array<std::uint32_t, 4> RngStream::philox(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * ctr[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * ctr[2];
        ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
               static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
        key[0] += kPhiloxW0;
        key[1] += kPhiloxW1;
    }
    return ctr;
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id) {
    const std::uint64_t k = splitmix64(seed ^ splitmix64(stream_id));
    key_ = {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
    // the stream id also occupies the upper counter words, so distinct ids
    // feed distinct Philox inputs even under a key collision
    counter_ = 0;
    block_ = {};
    key_hi_ctr_ = stream_id;
}

void RngStream::refill() {
    block_ = philox({static_cast<std::uint32_t>(counter_), static_cast<std::uint32_t>(counter_ >> 32),
                     static_cast<std::uint32_t>(key_hi_ctr_), static_cast<std::uint32_t>(key_hi_ctr_ >> 32)},
                    key_);
    ++counter_;
    used_ = 0;
}

std::uint32_t RngStream::bits32() {
    if (used_ >= 4) refill();
    return block_[used_++];
}

RngStream::result_type RngStream::operator()() {
    const std::uint64_t hi = bits32();
    return (hi << 32) | bits32();
}

double RngStream::uniform() {
    // 53 random bits, offset by half an ulp so the result is in (0, 1)
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double theta = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

cd RngStream::cgauss() {
    const double x = normal();
    const double y = normal();
    return {x * std::numbers::sqrt2 / 2.0, y * std::numbers::sqrt2 / 2.0};
}

int Constellation::bits_per_symbol() const { return std::countr_zero(static_cast<unsigned>(order)); }

int Constellation::index_of_label(unsigned label) const {
    // inverse reflected binary code
    unsigned k = label;
    for (unsigned shift = label >> 1; shift != 0; shift >>= 1) k ^= shift;
    return static_cast<int>(k);
}

int Constellation::nearest(cd z, double amplitude) const {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int k = 0; k < order; ++k) {
        const double d = std::norm(z - amplitude * points[static_cast<std::size_t>(k)]);
        if (d < best_d) {
            best_d = d;
            best = k;
        }
    }
    return best;
}

Constellation make_psk(int order, double rotation) {
    if (order != 2 && order != 4 && order != 8 && order != 16)
        throw UsageError("make_psk: order must be 2, 4, 8 or 16, got " + std::to_string(order));
    Constellation c;
    c.order = order;
    c.rotation = rotation;
    c.points.resize(static_cast<std::size_t>(order));
    c.labels.resize(static_cast<std::size_t>(order));
    for (int k = 0; k < order; ++k) {
        const double phase = 2.0 * std::numbers::pi * k / order + rotation;
        // snap exact axis points so BPSK/QPSK are free of 1e-17 residue
        double re = std::cos(phase), im = std::sin(phase);
        if (std::abs(re) < 1e-15) re = 0.0;
        if (std::abs(im) < 1e-15) im = 0.0;
        c.points[static_cast<std::size_t>(k)] = {re, im};
        c.labels[static_cast<std::size_t>(k)] = static_cast<unsigned>(k) ^ (static_cast<unsigned>(k) >> 1);
    }
    return c;
}

double default_pair_rotation(int order) { return std::numbers::pi / order; }

std::vector<int> modulate_indices(std::span<const std::uint8_t> bits, const Constellation& c) {
    const auto k = static_cast<std::size_t>(c.bits_per_symbol());
    if (bits.size() % k != 0) throw UsageError("modulate: bit count not divisible by bits per symbol");
    std::vector<int> out;
    out.reserve(bits.size() / k);
    for (std::size_t i = 0; i < bits.size(); i += k) {
        unsigned label = 0;
        for (std::size_t b = 0; b < k; ++b) label = (label << 1) | (bits[i + b] & 1u);
        out.push_back(c.index_of_label(label));
    }
    return out;
}

std::vector<cd> modulate(std::span<const std::uint8_t> bits, const Constellation& c) {
    std::vector<cd> out;
    for (int idx : modulate_indices(bits, c)) out.push_back(c.points[static_cast<std::size_t>(idx)]);
    return out;
}

std::vector<std::uint8_t> bits_of(int symbol_index, const Constellation& c) {
    if (symbol_index < 0 || symbol_index >= c.order) throw UsageError("bits_of: symbol index out of range");
    const int k = c.bits_per_symbol();
    const unsigned label = c.labels[static_cast<std::size_t>(symbol_index)];
    std::vector<std::uint8_t> out(static_cast<std::size_t>(k));
    for (int b = 0; b < k; ++b) out[static_cast<std::size_t>(b)] = (label >> (k - 1 - b)) & 1u;
    return out;
}

int demap(cd z, const Constellation& c, double amplitude) { return c.nearest(z, amplitude); }

int bit_errors(int sent_index, int decided_index, const Constellation& c) {
    return std::popcount(c.labels[static_cast<std::size_t>(sent_index)] ^
                         c.labels[static_cast<std::size_t>(decided_index)]);
}

void NetworkConfig::validate() const {
    if (J < 1 || M < 1 || N < 1) throw UsageError("config: J, M, N must be at least 1");
    if (J > std::min(M, N))
        throw UsageError("config: need J <= min(M, N), got J=" + std::to_string(J) + " M=" + std::to_string(M) +
                         " N=" + std::to_string(N));
    if (!(P > 0.0) || !std::isfinite(P)) throw UsageError("config: transmit power must be positive");
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

ChannelRealization draw_channels(const NetworkConfig& cfg, RngStream& rng) {
    ChannelRealization ch{CMatrix(static_cast<std::size_t>(cfg.M), static_cast<std::size_t>(cfg.J)),
                          CMatrix(static_cast<std::size_t>(cfg.M), static_cast<std::size_t>(cfg.N))};
    for (auto& v : ch.F.values()) v = rng.cgauss();
    for (auto& v : ch.G.values()) v = rng.cgauss();
    return ch;
}

std::vector<cd> draw_awgn(std::size_t len, RngStream& rng) {
    std::vector<cd> out(len);
    for (auto& v : out) v = rng.cgauss();
    return out;
}

}  // namespace marn
