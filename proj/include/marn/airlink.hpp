#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "marn/numerics.hpp"

namespace marn {

/**
 * @brief Counter-based random stream (Philox4x32-10).
 *
 * The key is derived from (seed, stream id) and every 128-bit output block is
 * a pure function of (key, block counter), so streams with different ids
 * never share state and a trial's draws do not depend on which worker ran it.
 */
class RngStream {
public:
    using result_type = std::uint64_t;

    RngStream(std::uint64_t seed, std::uint64_t stream_id);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()();

    /// Uniform on (0, 1), never exactly 0 or 1.
    double uniform();
    double normal();
    /// Circularly symmetric CN(0, 1): (x + iy)/sqrt(2) with x, y standard normal.
    cd cgauss();
    std::uint32_t bits32();

    /// Raw Philox4x32-10 block function, exposed for known-answer tests.
    static std::array<std::uint32_t, 4> philox(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key);

private:
    void refill();

    std::array<std::uint32_t, 2> key_{};
    std::uint64_t counter_ = 0;
    std::uint64_t key_hi_ctr_ = 0;
    std::array<std::uint32_t, 4> block_{};
    int used_ = 4;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

enum class SchemeId;

struct Constellation {
    int order = 2;
    double rotation = 0.0;
    /// points[k] = exp(i(2 pi k / order + rotation)), unit energy.
    std::vector<cd> points;
    /// labels[k] = Gray code of k (reflected binary around the circle).
    std::vector<unsigned> labels;

    int bits_per_symbol() const;
    /// Index of the point carrying a given label.
    int index_of_label(unsigned label) const;
    /// Nearest point to z / amplitude; ties go to the lower index.
    int nearest(cd z, double amplitude = 1.0) const;
};

/// PSK with order in {2, 4, 8, 16}.
Constellation make_psk(int order, double rotation = 0.0);

/// Default rotation for the second constellation of quasi-orthogonal pairs.
double default_pair_rotation(int order);

/// Maps bits (MSB first per symbol) to constellation indices.
std::vector<int> modulate_indices(std::span<const std::uint8_t> bits, const Constellation& c);
std::vector<cd> modulate(std::span<const std::uint8_t> bits, const Constellation& c);
std::vector<std::uint8_t> bits_of(int symbol_index, const Constellation& c);
/// Hard decision: index of the point nearest to z / amplitude.
int demap(cd z, const Constellation& c, double amplitude = 1.0);
int bit_errors(int sent_index, int decided_index, const Constellation& c);

struct ConstellationSpec {
    int order = 2;
    /// Rotation of the paired constellation S'; negative selects default_pair_rotation(order).
    double pair_rotation = -1.0;
};

struct NetworkConfig {
    int J = 2;
    int M = 2;
    int N = 2;
    /// Linear transmit power per node (noise is unit power, so this is the transmit SNR).
    double P = 1.0;
    SchemeId scheme{};
    ConstellationSpec constellation;

    /// Throws UsageError unless J, M, N >= 1, J <= min(M, N) and P > 0.
    void validate() const;
};

double db_to_linear(double db);

struct ChannelRealization {
    /// M x J, F(i, j) = f_i^(j): source j to relay antenna i.
    CMatrix F;
    /// M x N, G(i, n) = g_in: relay antenna i to destination antenna n.
    CMatrix G;
};

ChannelRealization draw_channels(const NetworkConfig& cfg, RngStream& rng);
std::vector<cd> draw_awgn(std::size_t len, RngStream& rng);

}  // namespace marn
