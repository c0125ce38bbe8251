#include "marn/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <fstream>
#include <istream>
#include <locale>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

namespace marn {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s, std::string_view seps) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || seps.find(s[i]) != std::string_view::npos) {
            out.push_back(trim(s.substr(start, i - start)));
            start = i + 1;
        }
    }
    return out;
}

double to_double(std::string_view s, std::string_view what) {
    s = trim(s);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        throw UsageError(std::string(what) + ": not a number: '" + std::string(s) + "'");
    return v;
}

template <typename T>
T to_int(std::string_view s, std::string_view what) {
    s = trim(s);
    T v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        throw UsageError(std::string(what) + ": not an integer: '" + std::string(s) + "'");
    return v;
}

std::string fmt(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string topo_str(int J, int M, int N) {
    return std::to_string(J) + "x" + std::to_string(M) + "x" + std::to_string(N);
}

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
    h ^= v + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
    h ^= h >> 31;
    h *= 0xBF58476D1CE4E5B9ULL;
    h ^= h >> 29;
    return h;
}

std::uint64_t bits_of_double(double d) {
    std::uint64_t u = 0;
    std::memcpy(&u, &d, sizeof u);
    return u;
}

std::uint64_t cell_key(SchemeId id, const NetworkConfig& cfg, double snr_db) {
    std::uint64_t h = mix(0, static_cast<std::uint64_t>(scheme_number(id)));
    h = mix(h, static_cast<std::uint64_t>(cfg.J));
    h = mix(h, static_cast<std::uint64_t>(cfg.M));
    h = mix(h, static_cast<std::uint64_t>(cfg.N));
    h = mix(h, bits_of_double(snr_db));
    h = mix(h, static_cast<std::uint64_t>(cfg.constellation.order));
    h = mix(h, bits_of_double(cfg.constellation.pair_rotation));
    return h & ~0xFFFFFFFFULL;
}

struct Tally {
    std::uint64_t trials = 0;
    std::uint64_t erasures = 0;
    std::uint64_t bits = 0;
    std::uint64_t errors = 0;
};

/**
 * Evaluates chunks 0, 1, ... of a cell on `workers` threads and returns the merged tally of the shortest
 * prefix of chunks after which `done` holds (or all chunks). Chunks past that prefix may be computed and
 * are discarded.
 */
template <typename ChunkFn, typename DoneFn>
Tally run_chunks(std::uint64_t n_chunks, int workers, ChunkFn chunk, DoneFn done) {
    Tally acc;
    if (workers <= 1 || n_chunks <= 1) {
        for (std::uint64_t k = 0; k < n_chunks; ++k) {
            const Tally t = chunk(k);
            acc.trials += t.trials;
            acc.erasures += t.erasures;
            acc.bits += t.bits;
            acc.errors += t.errors;
            if (done(acc)) break;
        }
        return acc;
    }
    std::atomic<std::uint64_t> next{0};
    std::atomic<bool> stop{false};
    std::mutex m;
    std::vector<std::optional<Tally>> results;
    std::uint64_t prefix = 0;
    std::exception_ptr error;
    auto worker = [&] {
        while (!stop.load()) {
            const std::uint64_t k = next.fetch_add(1);
            if (k >= n_chunks) break;
            Tally t;
            try {
                t = chunk(k);
            } catch (...) {
                const std::lock_guard lock(m);
                if (!error) error = std::current_exception();
                stop = true;
                break;
            }
            const std::lock_guard lock(m);
            if (stop) break;
            if (results.size() <= k) results.resize(k + 1);
            results[k] = t;
            while (prefix < results.size() && results[prefix]) {
                const Tally& r = *results[prefix];
                acc.trials += r.trials;
                acc.erasures += r.erasures;
                acc.bits += r.bits;
                acc.errors += r.errors;
                ++prefix;
                if (done(acc) || prefix == n_chunks) {
                    stop = true;
                    break;
                }
            }
        }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
    if (error) std::rethrow_exception(error);
    return acc;
}

template <typename Fn>
void parallel_for_chunks(std::uint64_t n_chunks, int workers, Fn fn) {
    if (workers <= 1 || n_chunks <= 1) {
        for (std::uint64_t k = 0; k < n_chunks; ++k) fn(k);
        return;
    }
    std::atomic<std::uint64_t> next{0};
    std::atomic<bool> failed{false};
    std::mutex m;
    std::exception_ptr error;
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            while (!failed.load()) {
                const std::uint64_t k = next.fetch_add(1);
                if (k >= n_chunks) break;
                try {
                    fn(k);
                } catch (...) {
                    const std::lock_guard lock(m);
                    if (!error) error = std::current_exception();
                    failed = true;
                }
            }
        });
    }
    for (std::thread& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

std::string curve_label(const BerPoint& p) { return p.scheme + " " + topo_str(p.J, p.M, p.N); }

std::vector<std::vector<const BerPoint*>> group_curves(const std::vector<BerPoint>& points) {
    std::vector<std::vector<const BerPoint*>> curves;
    for (const BerPoint& p : points) {
        auto it = std::find_if(curves.begin(), curves.end(), [&](const auto& c) {
            return c.front()->scheme == p.scheme && c.front()->J == p.J && c.front()->M == p.M && c.front()->N == p.N;
        });
        if (it == curves.end())
            curves.push_back({&p});
        else
            it->push_back(&p);
    }
    return curves;
}

}  // namespace

Topology parse_topology(std::string_view text) {
    const auto parts = split(trim(text), ",x");
    if (parts.size() != 3) throw UsageError("topology must be J,M,N: '" + std::string(text) + "'");
    const Topology t{to_int<int>(parts[0], "J"), to_int<int>(parts[1], "M"), to_int<int>(parts[2], "N")};
    if (t.J < 1 || t.M < 1 || t.N < 1) throw UsageError("topology entries must be positive: '" + std::string(text) + "'");
    return t;
}

int parse_modulation(std::string_view text) {
    std::string s;
    for (char ch : trim(text)) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    if (s == "bpsk") return 2;
    if (s == "qpsk") return 4;
    if (s.size() > 3 && s.ends_with("psk")) s.resize(s.size() - 3);
    const int order = to_int<int>(s, "modulation");
    if (order != 2 && order != 4 && order != 8 && order != 16)
        throw UsageError("modulation order must be 2, 4, 8 or 16, got " + std::to_string(order));
    return order;
}

std::vector<double> parse_snr_grid(std::string_view text) {
    const auto parts = split(trim(text), ":");
    if (parts.size() == 1) return {to_double(parts[0], "snr")};
    if (parts.size() != 3) throw UsageError("snr grid must be start:step:stop: '" + std::string(text) + "'");
    const double a = to_double(parts[0], "snr start"), step = to_double(parts[1], "snr step"),
                 b = to_double(parts[2], "snr stop");
    if (!(step > 0.0) || b < a) throw UsageError("snr grid needs step > 0 and stop >= start");
    std::vector<double> grid;
    for (long i = 0;; ++i) {
        const double v = a + static_cast<double>(i) * step;
        if (v > b + 1e-9) break;
        grid.push_back(std::round(v * 1e9) / 1e9);
        if (grid.size() > 10000) throw UsageError("snr grid has more than 10000 points");
    }
    return grid;
}

ConstellationSpec ExperimentSpec::constellation_for(SchemeId id) const {
    const auto it = constellation.find(id);
    return it == constellation.end() ? default_constellation : it->second;
}

void ExperimentSpec::validate() const {
    if (schemes.empty()) throw UsageError("experiment: no scheme selected");
    if (topologies.empty()) throw UsageError("experiment: no J,M,N configuration given");
    if (snr_db.empty()) throw UsageError("experiment: empty snr grid");
    for (std::size_t i = 1; i < snr_db.size(); ++i)
        if (!(snr_db[i] > snr_db[i - 1])) throw UsageError("experiment: snr grid must be strictly increasing");
    if (stop.max_trials == 0) throw UsageError("experiment: max trials must be positive");
    if (stop.max_trials >= (1ULL << 32)) throw UsageError("experiment: max trials must be below 2^32");
    for (SchemeId id : schemes) {
        for (const Topology& t : topologies) {
            NetworkConfig cfg;
            cfg.J = t.J;
            cfg.M = t.M;
            cfg.N = t.N;
            cfg.scheme = id;
            cfg.constellation = constellation_for(id);
            cfg.validate();
            check_supported(id, cfg);
        }
    }
}

Interval wilson_interval(std::uint64_t k, std::uint64_t n, double z) {
    if (n == 0) return {0.0, 1.0};
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(k) / nn;
    const double z2 = z * z;
    const double den = 1.0 + z2 / nn;
    const double centre = (p + z2 / (2.0 * nn)) / den;
    const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / den;
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

int resolve_workers(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("MARN_SIM_WORKERS")) {
        const std::string_view s(env);
        int v = 0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec == std::errc() && ptr == s.data() + s.size() && v > 0) return v;
        throw UsageError("MARN_SIM_WORKERS must be a positive integer, got '" + std::string(s) + "'");
    }
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

BerPoint run_point(SchemeId id, const NetworkConfig& base, double snr_db, const StopRule& stop, std::uint64_t seed,
                   const RunOptions& opts) {
    NetworkConfig cfg = base;
    cfg.scheme = id;
    cfg.P = db_to_linear(snr_db);
    cfg.validate();
    check_supported(id, cfg);
    const std::uint64_t chunk = std::max<std::uint64_t>(opts.chunk_trials, 1);
    const std::uint64_t n_chunks = (stop.max_trials + chunk - 1) / chunk;
    const std::uint64_t key = cell_key(id, cfg, snr_db);
    auto run = [&](std::uint64_t k) {
        Tally t;
        const std::uint64_t first = k * chunk;
        const std::uint64_t last = std::min(first + chunk, stop.max_trials);
        for (std::uint64_t trial = first; trial < last; ++trial) {
            RngStream rng(seed, key | trial);
            const TrialOutcome o = run_trial(id, cfg, rng);
            ++t.trials;
            if (o.erased) ++t.erasures;
            t.bits += o.bits;
            t.errors += o.bit_errors;
        }
        return t;
    };
    auto done = [&](const Tally& t) { return stop.min_errors > 0 && t.errors >= stop.min_errors; };
    const Tally t = run_chunks(n_chunks, resolve_workers(opts.workers), run, done);
    BerPoint p;
    p.scheme = std::string(scheme_name(id));
    p.J = cfg.J;
    p.M = cfg.M;
    p.N = cfg.N;
    p.snr_db = snr_db;
    p.trials = t.trials;
    p.erasures = t.erasures;
    p.bits = t.bits;
    p.bit_errors = t.errors;
    p.ber = t.bits == 0 ? 0.0 : static_cast<double>(t.errors) / static_cast<double>(t.bits);
    const Interval ci = wilson_interval(t.errors, t.bits);
    p.ci95_lo = ci.lo;
    p.ci95_hi = ci.hi;
    if (opts.progress) {
        *opts.progress << curve_label(p) << " snr=" << fmt(snr_db) << " ber=" << fmt(p.ber) << " errors=" << p.bit_errors
                       << " trials=" << p.trials << "\n";
        opts.progress->flush();
    }
    return p;
}

std::vector<BerPoint> run_experiment(const ExperimentSpec& spec, const RunOptions& opts) {
    spec.validate();
    std::vector<BerPoint> points;
    for (const Topology& t : spec.topologies) {
        for (SchemeId id : spec.schemes) {
            NetworkConfig cfg;
            cfg.J = t.J;
            cfg.M = t.M;
            cfg.N = t.N;
            cfg.constellation = spec.constellation_for(id);
            for (double snr : spec.snr_db) points.push_back(run_point(id, cfg, snr, spec.stop, spec.seed, opts));
        }
    }
    return points;
}

GammaSampler scheme_gamma_sampler(SchemeId id, const NetworkConfig& cfg) {
    cfg.validate();
    if (id == SchemeId::TdmaIcRec) {
        if (cfg.M % cfg.J != 0) throw UsageError("diversity: TDMA-ICRec needs J dividing M");
        check_supported(id, cfg);
        return [cfg](RngStream& rng) {
            const ChannelRealization ch = draw_channels(cfg, rng);
            if (!(ch.F.col(0).frobenius_norm_sq() > 0.0)) return 0.0;
            return snr_tdma_direct(ch, cfg);
        };
    }
    if (id == SchemeId::DstcIcRec) {
        check_supported(id, cfg);
        return [cfg](RngStream& rng) { return snr_dstc_direct(draw_channels(cfg, rng), cfg); };
    }
    throw UsageError("diversity: outage sampling is available for dstc-icrec and tdma-icrec only");
}

DiversityEstimate outage_diversity_parallel(const GammaSampler& sampler, std::uint64_t trials, std::uint64_t seed,
                                            const RunOptions& opts) {
    std::vector<double> samples(trials);
    const std::uint64_t chunk = 4096;
    const std::uint64_t n_chunks = (trials + chunk - 1) / chunk;
    parallel_for_chunks(n_chunks, resolve_workers(opts.workers), [&](std::uint64_t k) {
        const std::uint64_t last = std::min(trials, (k + 1) * chunk);
        for (std::uint64_t t = k * chunk; t < last; ++t) {
            RngStream rng(seed, t);
            for (int attempt = 0;; ++attempt) {
                try {
                    samples[t] = sampler(rng);
                    break;
                } catch (const NumericError&) {
                    if (attempt >= 10) throw;
                }
            }
        }
    });
    return outage_diversity_from_samples(samples, default_eps_grid(samples, 50));
}

std::vector<DiversityResult> run_diversity(const DiversitySpec& spec, const RunOptions& opts) {
    if (spec.topologies.empty()) throw UsageError("diversity: no J,M,N configuration given");
    if (spec.trials == 0) throw UsageError("diversity: trials must be positive");
    std::vector<DiversityResult> out;
    for (const Topology& t : spec.topologies) {
        NetworkConfig cfg;
        cfg.J = t.J;
        cfg.M = t.M;
        cfg.N = t.N;
        cfg.P = db_to_linear(spec.snr_db);
        cfg.scheme = spec.scheme;
        DiversityResult r{spec.scheme, t, outage_diversity_parallel(scheme_gamma_sampler(spec.scheme, cfg), spec.trials,
                                                                    spec.seed, opts)};
        if (opts.progress) {
            *opts.progress << scheme_name(spec.scheme) << " " << topo_str(t.J, t.M, t.N) << " slope=" << fmt(r.estimate.slope)
                           << " stderr=" << fmt(r.estimate.stderr) << "\n";
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<CurveSlope> curve_slopes(const std::vector<BerPoint>& points, std::size_t window) {
    std::vector<CurveSlope> out;
    for (const auto& curve : group_curves(points)) {
        std::vector<std::pair<double, double>> xy;
        for (const BerPoint* p : curve)
            if (p->bit_errors > 0 && p->bits > 0) xy.emplace_back(p->snr_db, p->ber);
        const BerPoint& f = *curve.front();
        out.push_back({f.scheme, {f.J, f.M, f.N}, ber_slope(xy, window)});
    }
    return out;
}

OutputFormat parse_format(std::string_view text) {
    text = trim(text);
    if (text == "csv") return OutputFormat::Csv;
    if (text == "plotdata") return OutputFormat::PlotData;
    throw UsageError("format must be csv or plotdata, got '" + std::string(text) + "'");
}

void write_csv(std::ostream& out, const std::vector<BerPoint>& points) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << csv_header << "\n";
    for (const BerPoint& p : points) {
        os << p.scheme << ',' << p.J << ',' << p.M << ',' << p.N << ',' << fmt(p.snr_db) << ',' << p.trials << ','
           << p.erasures << ',' << p.bits << ',' << p.bit_errors << ',' << fmt(p.ber) << ',' << fmt(p.ci95_lo) << ','
           << fmt(p.ci95_hi) << "\n";
    }
    out << os.str();
}

void write_plotdata(std::ostream& os, const std::vector<BerPoint>& points) {
    bool first = true;
    for (const auto& curve : group_curves(points)) {
        if (!first) os << "\n";
        first = false;
        os << "# " << curve_label(*curve.front()) << "\n";
        for (const BerPoint* p : curve) os << fmt(p->snr_db) << ' ' << fmt(p->ber) << "\n";
    }
}

void emit(const std::vector<BerPoint>& points, OutputFormat format, const std::string& path) {
    if (points.empty()) throw UsageError("emit: no points");
    std::ofstream f(path, std::ios::binary);
    if (!f) throw UsageError("emit: cannot open '" + path + "' for writing");
    if (format == OutputFormat::Csv)
        write_csv(f, points);
    else
        write_plotdata(f, points);
    if (!f) throw UsageError("emit: write to '" + path + "' failed");
}

std::vector<BerPoint> read_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || trim(line) != csv_header) throw UsageError("csv: missing or wrong header");
    std::vector<BerPoint> points;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto f = split(line, ",");
        if (f.size() != 12) throw UsageError("csv line " + std::to_string(lineno) + ": expected 12 fields");
        BerPoint p;
        p.scheme = std::string(f[0]);
        p.J = to_int<int>(f[1], "J");
        p.M = to_int<int>(f[2], "M");
        p.N = to_int<int>(f[3], "N");
        p.snr_db = to_double(f[4], "snr_db");
        p.trials = to_int<std::uint64_t>(f[5], "trials");
        p.erasures = to_int<std::uint64_t>(f[6], "erasures");
        p.bits = to_int<std::uint64_t>(f[7], "bits");
        p.bit_errors = to_int<std::uint64_t>(f[8], "bit_errors");
        p.ber = to_double(f[9], "ber");
        p.ci95_lo = to_double(f[10], "ci95_lo");
        p.ci95_hi = to_double(f[11], "ci95_hi");
        points.push_back(std::move(p));
    }
    return points;
}

const std::vector<std::string>& canned_names() {
    static const std::vector<std::string> names{"fig4", "fig5", "fig6", "fig7", "fig8"};
    return names;
}

ExperimentSpec canned_spec(std::string_view name) {
    ExperimentSpec s;
    s.name = std::string(name);
    if (name == "fig4") {
        s.schemes = {SchemeId::DstcIcRec};
        s.topologies = {{2, 2, 2}, {2, 2, 3}, {2, 2, 4}, {2, 4, 2}, {2, 4, 3}, {2, 4, 4}, {3, 4, 3}};
        s.snr_db = parse_snr_grid("0:5:40");
        return s;
    }
    if (name == "fig5") {
        s.schemes = {SchemeId::TdmaIcRec};
        s.topologies = {{2, 2, 2}, {2, 2, 3}, {2, 2, 4}, {3, 3, 3}, {3, 3, 5}, {2, 4, 2}, {2, 4, 3}, {2, 8, 2}};
        s.snr_db = parse_snr_grid("0:3:24");
        return s;
    }
    if (name == "fig6" || name == "fig7" || name == "fig8") {
        s.schemes.assign(all_schemes().begin(), all_schemes().end());
        for (SchemeId id : s.schemes) s.constellation[id] = ConstellationSpec{comparison_constellation(id), -1.0};
        if (name == "fig6") {
            s.topologies = {{2, 2, 2}};
            s.snr_db = parse_snr_grid("10:4:34");
        } else if (name == "fig7") {
            s.topologies = {{2, 2, 3}};
            s.snr_db = parse_snr_grid("8:3:29");
        } else {
            s.topologies = {{2, 4, 3}};
            s.snr_db = parse_snr_grid("6:3:24");
            s.stop.max_trials = 200'000;
        }
        return s;
    }
    throw UsageError("unknown canned experiment '" + std::string(name) + "' (fig4 .. fig8)");
}

std::map<std::string, std::string> parse_config_text(std::string_view text) {
    std::map<std::string, std::string> out;
    std::string section;
    std::size_t lineno = 0;
    for (std::string_view raw : split(text, "\n")) {
        ++lineno;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw UsageError("config line " + std::to_string(lineno) + ": unterminated section");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw UsageError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key(trim(line.substr(0, eq)));
        if (key.empty()) throw UsageError("config line " + std::to_string(lineno) + ": empty key");
        out[section.empty() ? key : section + "." + key] = std::string(trim(line.substr(eq + 1)));
    }
    return out;
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str());
}

void apply_config(ExperimentSpec& spec, const std::map<std::string, std::string>& cfg, std::string_view section) {
    auto get = [&](const std::string& key) -> const std::string* {
        if (!section.empty()) {
            const auto it = cfg.find(std::string(section) + "." + key);
            if (it != cfg.end()) return &it->second;
        }
        const auto it = cfg.find(key);
        return it == cfg.end() ? nullptr : &it->second;
    };
    if (const std::string* v = get("scheme")) {
        spec.schemes.clear();
        for (std::string_view s : split(*v, ",;"))
            if (!s.empty()) spec.schemes.push_back(parse_scheme(s));
    }
    if (const std::string* v = get("config")) {
        spec.topologies.clear();
        for (std::string_view s : split(*v, ";"))
            if (!s.empty()) spec.topologies.push_back(parse_topology(s));
    }
    if (const std::string* v = get("snr_db")) spec.snr_db = parse_snr_grid(*v);
    if (const std::string* v = get("mod")) spec.default_constellation.order = parse_modulation(*v);
    if (const std::string* v = get("seed")) spec.seed = to_int<std::uint64_t>(*v, "seed");
    if (const std::string* v = get("min_errors")) spec.stop.min_errors = to_int<std::uint64_t>(*v, "min_errors");
    if (const std::string* v = get("max_trials")) spec.stop.max_trials = to_int<std::uint64_t>(*v, "max_trials");
    if (const std::string* v = get("out")) spec.out = *v;
}

}  // namespace marn
