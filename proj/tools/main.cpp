// nument: command-line front end. Exit codes: 0 success, 1 validation error,
// 2 numerical failure, 3 property violation.

#include "commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>

namespace {

using nument::cli::Backend;
using nument::cli::SweepConfig;
using nument::cli::Table;

void emit(Table table, const SweepConfig &c) {
    if(c.bits) table.to_bits();
    std::ofstream file;
    if(!c.out.empty()) {
        file.open(c.out, std::ios::binary);
        if(!file) throw nument::Error(nument::ErrorCode::invalid_argument, "cannot open output file " + c.out);
    }
    std::ostream &os = c.out.empty() ? std::cout : file;
    if(c.format == "json") nument::cli::write_json(table, os);
    else nument::cli::write_csv(table, os);

    if(!c.gnuplot.empty()) {
        std::ofstream gp(c.gnuplot, std::ios::binary);
        if(!gp) throw nument::Error(nument::ErrorCode::invalid_argument, "cannot open gnuplot file " + c.gnuplot);
        const bool log_x = table.columns.front().name == "T" || table.columns.front().name == "L_A";
        gp << nument::cli::gnuplot_script(table, c.out.empty() ? "data.csv" : c.out, log_x);
    }
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Number entanglement, negativity and Renyi-2 sweeps for charge-conserving states"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "Flat key=value file mirroring the flags; flags override it");

    SweepConfig c;
    std::string backend = "gaussian";
    app.add_option("--L", c.L, "Number of sites");
    app.add_option("--LA", c.LA, "Subsystem size");
    app.add_option("--J", c.J, "XXZ exchange");
    app.add_option("--eta", c.eta, "XXZ anisotropies (comma separated)")->delimiter(',');
    app.add_option("--t", c.t, "Hopping");
    app.add_option("--V", c.V, "Nearest-neighbour interaction");
    app.add_option("--mu", c.mu, "Chemical potential (two-mode bosons)");
    app.add_option("--beta-min", c.beta_min, "Smallest inverse temperature");
    app.add_option("--beta-max", c.beta_max, "Largest inverse temperature");
    app.add_option("--points", c.points, "Grid points");
    app.add_option("--spacing", c.spacing, "Grid spacing")->check(CLI::IsMember({"log", "linear"}));
    app.add_option("--backend", backend, "Backend")->check(CLI::IsMember({"exact", "gaussian", "analytic"}));
    app.add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out", c.out, "Output file (default stdout)");
    app.add_option("--seed", c.seed, "Random seed");
    app.add_option("--threads", c.threads, "Worker threads")->check(CLI::PositiveNumber);
    app.add_flag("--bits", c.bits, "Report entropies in bits instead of nats");
    app.add_option("--placement", c.placement, "Subsystem placement")->check(CLI::IsMember({"centered", "edge"}));
    app.add_option("--state", c.state, "Named state: phi4, phi2, qd1, fermion4");
    app.add_option("--LA-list", c.la_list, "Subsystem sizes for ff-size-scan")->delimiter(',');
    app.add_option("--size-factor", c.size_factor, "L = factor * L_A in ff-size-scan");
    app.add_option("--n-max", c.n_max, "Largest boson sector");
    app.add_option("--trials", c.trials, "Random trials in locc-demo");
    app.add_option("--gnuplot", c.gnuplot, "Also write a gnuplot script to this path");

    std::map<std::string, std::function<Table()>> commands{
        {"xxz-sweep", [&] { return nument::cli::cmd_xxz_sweep(c); }},
        {"boson-sectors", [&] { return nument::cli::cmd_boson_sectors(c); }},
        {"ff-sweep", [&] { return nument::cli::cmd_ff_sweep(c); }},
        {"ff-size-scan", [&] { return nument::cli::cmd_ff_size_scan(c); }},
        {"high-t-fit", [&] { return nument::cli::cmd_high_t_fit(c); }},
        {"cft-compare", [&] { return nument::cli::cmd_cft_compare(c); }},
        {"locc-demo", [&] { return nument::cli::cmd_locc_demo(c); }},
        {"state-demo", [&] { return nument::cli::cmd_state_demo(c, std::cerr); }},
    };
    const std::map<std::string, std::string> help{
        {"xxz-sweep", "Delta S_m and negativity of the thermal XXZ chain versus T"},
        {"boson-sectors", "Two-mode boson sectors N = 1..n-max versus beta"},
        {"ff-sweep", "Delta S_2 of the thermal tight-binding chain with CFT and high-T columns"},
        {"ff-size-scan", "Ground-state number entropy versus L_A with the fitted forms"},
        {"high-t-fit", "Fits the high-temperature tail c beta^2"},
        {"cft-compare", "Lattice versus CFT Delta S_2 with the agreement window"},
        {"locc-demo", "Monotonicity of Delta S_m under symmetric LOCC channels"},
        {"state-demo", "Witness, negativity and sector table of a named state"},
    };
    for(const auto &[name, text] : help) app.add_subcommand(name, text);

    try {
        app.parse(argc, argv);
    } catch(const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    c.backend = backend == "exact" ? Backend::exact : backend == "analytic" ? Backend::analytic : Backend::gaussian;
    try {
        for(const auto *sub : app.get_subcommands()) emit(commands.at(sub->get_name())(), c);
    } catch(const nument::cli::PropertyViolation &e) {
        std::cerr << "property violation: " << e.what() << '\n';
        return 3;
    } catch(const nument::Error &e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.is_validation() ? 1 : 2;
    } catch(const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
