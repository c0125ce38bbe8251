#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "marn/harness.hpp"
#include "marn/selftest.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitNumeric = 2;
constexpr int kExitAcceptance = 3;

struct SimArgs {
    std::vector<std::string> schemes;
    std::vector<std::string> configs;
    std::string snr;
    std::string mod;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> min_errors;
    std::optional<std::uint64_t> max_trials;
    int workers = 0;
    std::string out;
    std::string format = "csv";
    std::string params;
    bool quiet = false;
};

void add_run_flags(CLI::App* app, SimArgs& a) {
    app->add_option("--seed", a.seed, "Base seed of all random streams");
    app->add_option("--min-errors", a.min_errors, "Stop a point after this many bit errors (0: run max-trials)");
    app->add_option("--max-trials", a.max_trials, "Upper bound on trials per point");
    app->add_option("--workers", a.workers, "Worker threads (default: MARN_SIM_WORKERS or all cores)");
    app->add_option("--out", a.out, "Output file (default: stdout)");
    app->add_option("--format", a.format, "Output format")->check(CLI::IsMember({"csv", "plotdata"}));
    app->add_flag("--quiet", a.quiet, "No progress on stderr");
}

void apply_flags(marn::ExperimentSpec& spec, const SimArgs& a) {
    if (!a.params.empty()) marn::apply_config(spec, marn::read_config_file(a.params), "simulate");
    if (!a.schemes.empty()) {
        spec.schemes.clear();
        for (const std::string& s : a.schemes) spec.schemes.push_back(marn::parse_scheme(s));
    }
    if (!a.configs.empty()) {
        spec.topologies.clear();
        for (const std::string& c : a.configs) spec.topologies.push_back(marn::parse_topology(c));
    }
    if (!a.snr.empty()) spec.snr_db = marn::parse_snr_grid(a.snr);
    if (!a.mod.empty()) {
        spec.default_constellation.order = marn::parse_modulation(a.mod);
        spec.constellation.clear();
    }
    if (a.seed) spec.seed = *a.seed;
    if (a.min_errors) spec.stop.min_errors = *a.min_errors;
    if (a.max_trials) spec.stop.max_trials = *a.max_trials;
    if (!a.out.empty()) spec.out = a.out;
}

int write_points(const std::vector<marn::BerPoint>& points, const SimArgs& a, const std::string& out) {
    const marn::OutputFormat fmt = marn::parse_format(a.format);
    if (out.empty()) {
        if (fmt == marn::OutputFormat::Csv)
            marn::write_csv(std::cout, points);
        else
            marn::write_plotdata(std::cout, points);
        return 0;
    }
    marn::emit(points, fmt, out);
    return 0;
}

int run_simulate(const SimArgs& a) {
    marn::ExperimentSpec spec;
    spec.name = "simulate";
    apply_flags(spec, a);
    marn::RunOptions opts;
    opts.workers = a.workers;
    opts.progress = a.quiet ? nullptr : &std::cerr;
    return write_points(marn::run_experiment(spec, opts), a, spec.out);
}

int run_compare(const std::string& name, const SimArgs& a) {
    marn::ExperimentSpec spec = marn::canned_spec(name);
    SimArgs b = a;
    b.mod.clear();
    apply_flags(spec, b);
    marn::RunOptions opts;
    opts.workers = a.workers;
    opts.progress = a.quiet ? nullptr : &std::cerr;
    return write_points(marn::run_experiment(spec, opts), a, spec.out);
}

struct DivArgs {
    std::string scheme = "tdma-icrec";
    std::vector<std::string> configs;
    double snr_db = 30.0;
    std::uint64_t trials = 1'000'000;
    std::uint64_t seed = 1;
    int workers = 0;
    std::string from_csv;
    std::size_t window = 4;
    std::string out;
};

void write_estimates(std::ostream& os, const std::vector<std::pair<std::string, marn::DiversityEstimate>>& rows) {
    os << "curve,slope,stderr,fit_lo,fit_hi,points\n";
    for (const auto& [label, e] : rows)
        os << label << ',' << e.slope << ',' << e.stderr << ',' << e.fit_lo << ',' << e.fit_hi << ',' << e.points.size()
           << "\n";
}

int run_diversity_cmd(const DivArgs& a) {
    std::vector<std::pair<std::string, marn::DiversityEstimate>> rows;
    auto label = [](std::string_view scheme, const marn::Topology& t) {
        return std::string(scheme) + " " + std::to_string(t.J) + "x" + std::to_string(t.M) + "x" + std::to_string(t.N);
    };
    if (!a.from_csv.empty()) {
        std::ifstream f(a.from_csv, std::ios::binary);
        if (!f) throw marn::UsageError("cannot read '" + a.from_csv + "'");
        for (const marn::CurveSlope& c : marn::curve_slopes(marn::read_csv(f), a.window))
            rows.emplace_back(label(c.scheme, c.topology), c.estimate);
    } else {
        marn::DiversitySpec spec;
        spec.scheme = marn::parse_scheme(a.scheme);
        for (const std::string& c : a.configs) spec.topologies.push_back(marn::parse_topology(c));
        spec.snr_db = a.snr_db;
        spec.trials = a.trials;
        spec.seed = a.seed;
        marn::RunOptions opts;
        opts.workers = a.workers;
        for (const marn::DiversityResult& r : marn::run_diversity(spec, opts))
            rows.emplace_back(label(marn::scheme_name(r.scheme), r.topology), r.estimate);
    }
    if (a.out.empty()) {
        write_estimates(std::cout, rows);
    } else {
        std::ofstream f(a.out, std::ios::binary);
        if (!f) throw marn::UsageError("cannot open '" + a.out + "' for writing");
        write_estimates(f, rows);
    }
    return 0;
}

int run_selftest(const std::vector<int>& criteria, bool all, int workers) {
    marn::CheckOptions opts;
    opts.workers = workers;
    bool ok = true;
    for (const marn::AcceptanceCheck& c : marn::acceptance_checks()) {
        const bool selected = criteria.empty() ? (all || !c.heavy)
                                               : std::find(criteria.begin(), criteria.end(), c.criterion) != criteria.end();
        if (!selected) continue;
        const marn::CheckResult r = marn::run_check(c.criterion, opts);
        std::cout << marn::format_result(r) << std::endl;
        ok = ok && r.passed;
    }
    return ok ? 0 : kExitAcceptance;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo simulator for multi-access relay networks"};
    app.require_subcommand(1);

    SimArgs sim;
    CLI::App* simulate = app.add_subcommand("simulate", "BER sweep over schemes, topologies and SNR");
    simulate->add_option("--scheme", sim.schemes, "Scheme name or number (repeatable)");
    simulate->add_option("--config", sim.configs, "Topology J,M,N (repeatable)");
    simulate->add_option("--snr-db", sim.snr, "SNR grid start:step:stop in dB");
    simulate->add_option("--mod", sim.mod, "bpsk, qpsk, 8psk or 16psk");
    simulate->add_option("--params", sim.params, "key = value config file; flags override it")->check(CLI::ExistingFile);
    add_run_flags(simulate, sim);

    SimArgs cmp;
    std::string canned;
    CLI::App* compare = app.add_subcommand("compare", "Canned experiments fig4 .. fig8");
    compare->add_option("experiment", canned, "fig4, fig5, fig6, fig7 or fig8")->required();
    compare->add_option("--snr-db", cmp.snr, "Override the SNR grid");
    add_run_flags(compare, cmp);

    DivArgs div;
    CLI::App* diversity = app.add_subcommand("diversity", "Outage-based diversity estimate, or BER slopes of a CSV");
    diversity->add_option("--scheme", div.scheme, "dstc-icrec or tdma-icrec");
    diversity->add_option("--config", div.configs, "Topology J,M,N (repeatable)");
    diversity->add_option("--snr-db", div.snr_db, "Transmit SNR used for the relay gains");
    diversity->add_option("--trials", div.trials, "Channel draws per topology");
    diversity->add_option("--seed", div.seed, "Base seed");
    diversity->add_option("--workers", div.workers, "Worker threads");
    diversity->add_option("--from-csv", div.from_csv, "Fit BER slopes of an existing CSV instead");
    diversity->add_option("--window", div.window, "Top points used per BER slope");
    diversity->add_option("--out", div.out, "Output file (default: stdout)");

    std::vector<int> criteria;
    bool all = false;
    int st_workers = 0;
    CLI::App* selftest = app.add_subcommand("selftest", "Oracle and property checks; exit 3 on failure");
    selftest->add_option("--criterion", criteria, "Run only these acceptance criteria (repeatable)");
    selftest->add_flag("--all", all, "Include the long BER sweeps");
    selftest->add_option("--workers", st_workers, "Worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (simulate->parsed()) return run_simulate(sim);
        if (compare->parsed()) return run_compare(canned, cmp);
        if (diversity->parsed()) return run_diversity_cmd(div);
        if (selftest->parsed()) return run_selftest(criteria, all, st_workers);
    } catch (const marn::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const marn::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitUsage;
}
