#pragma once

// Subcommand implementations. Each command turns a SweepConfig into a Table;
// main.cpp owns parsing, output and exit codes.

#include "table.hpp"

#include "nument/nument.hpp"

#include <atomic>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

namespace nument::cli {

enum class Backend { exact, gaussian, analytic };

struct SweepConfig {
    int                 L   = 0; ///< 0: command default
    int                 LA  = 0;
    double              J   = 1.0;
    std::vector<double> eta{0.0, 2.0, 4.0};
    double              t   = 1.0;
    double              V   = 0.0;
    double              mu  = 0.0;
    double              beta_min = 0.0; ///< 0: command default
    double              beta_max = 0.0;
    int                 points   = 50;
    std::string         spacing  = "log";
    Backend             backend  = Backend::gaussian;
    std::string         format   = "csv";
    std::string         out;
    std::uint64_t       seed    = 1;
    int                 threads = 1;
    bool                bits    = false;
    std::string         placement = "centered";
    std::string         state     = "qd1";
    std::vector<int>    la_list{10, 20, 50, 100, 200, 400};
    int                 size_factor = 10;
    int                 n_max       = 3;
    int                 trials      = 100;
    std::string         gnuplot;
};

/// Exit code 3: a property the theory guarantees was observed to fail.
class PropertyViolation : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline Placement parse_placement(const std::string &s) {
    if(s == "centered") return Placement::centered;
    if(s == "edge") return Placement::edge;
    throw Error(ErrorCode::invalid_argument, "placement must be 'centered' or 'edge'");
}

/// Runs f(0..n-1) on up to `threads` workers; results land in index order so
/// the output does not depend on scheduling.
template<class T>
std::vector<T> parallel_map(std::size_t n, int threads, const std::function<T(std::size_t)> &f) {
    std::vector<T>                  out(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t>        next{0};
    auto worker = [&] {
        for(std::size_t i = next++; i < n; i = next++) {
            try {
                out[i] = f(i);
            } catch(...) { errors[i] = std::current_exception(); }
        }
    };
    const int                workers = std::max(1, std::min<int>(threads, static_cast<int>(n)));
    std::vector<std::jthread> pool;
    for(int w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    pool.clear();
    for(auto &e : errors)
        if(e) std::rethrow_exception(e);
    return out;
}

inline std::vector<double> grid(double lo, double hi, int points, const std::string &spacing) {
    require(points >= 2, ErrorCode::invalid_argument, "--points must be >= 2");
    require(hi > lo, ErrorCode::invalid_argument, "grid needs max > min");
    std::vector<double> g(static_cast<std::size_t>(points));
    if(spacing == "log") {
        require(lo > 0.0, ErrorCode::invalid_argument, "log grid bounds must be positive");
        for(int i = 0; i < points; ++i) g[static_cast<std::size_t>(i)] = lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1));
    } else if(spacing == "linear") {
        for(int i = 0; i < points; ++i) g[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (points - 1);
    } else {
        throw Error(ErrorCode::invalid_argument, "spacing must be 'log' or 'linear'");
    }
    return g;
}

/// Ascending temperature grid from the beta range.
inline std::vector<double> temperature_grid(const SweepConfig &c, double beta_min, double beta_max) {
    require(beta_min > 0.0 && beta_max > beta_min, ErrorCode::invalid_argument, "need 0 < beta-min < beta-max");
    return grid(1.0 / beta_max, 1.0 / beta_min, c.points, c.spacing);
}

inline double or_default(double v, double d) { return v > 0.0 ? v : d; }
inline int    or_default(int v, int d) { return v > 0 ? v : d; }

inline Table cmd_xxz_sweep(const SweepConfig &c) {
    const int  L  = or_default(c.L, 2);
    const int  LA = or_default(c.LA, L / 2);
    const auto temps = temperature_grid(c, or_default(c.beta_min, 0.1), or_default(c.beta_max, 20.0));
    const auto split = Bipartition::prefix(L, LA);
    Table      table{{{"T"}, {"beta"}, {"eta"}, {"delta_s_m", true}, {"log_negativity", true}}, {}};
    for(double eta : c.eta) {
        const auto h    = xxz_chain(L, c.J, eta);
        const auto rows = parallel_map<std::vector<Cell>>(temps.size(), c.threads, [&](std::size_t i) {
            const double T   = temps[i];
            const auto   rho = thermal_state(h, 1.0 / T);
            return std::vector<Cell>{T, 1.0 / T, eta, number_entanglement(rho, split).delta_s_m, log_negativity(rho, split)};
        });
        for(const auto &r : rows) table.add(r);
    }
    return table;
}

inline Table cmd_boson_sectors(const SweepConfig &c) {
    require(c.n_max >= 1, ErrorCode::invalid_argument, "--n-max must be >= 1");
    const auto   betas = grid(c.beta_min, or_default(c.beta_max, 5.0), c.points, "linear");
    const Bipartition split(2, {0});
    Table table{{{"beta"}, {"N"}, {"delta_s_m", true}, {"log_negativity", true}}, {}};
    for(int n = 1; n <= c.n_max; ++n) {
        const auto h = two_mode_boson_sector(c.mu, c.t, n);
        for(double beta : betas) {
            const auto rho = thermal_state(h, beta);
            table.add({beta, static_cast<std::int64_t>(n), number_entanglement(rho, split).delta_s_m, log_negativity(rho, split)});
        }
    }
    return table;
}

/// Delta S_2 of the thermal chain from the selected backend.
inline double thermal_delta_s2(const SweepConfig &c, int L, int LA, double beta) {
    const auto placement = parse_placement(c.placement);
    if(c.backend == Backend::exact) {
        const auto rho = thermal_state(interacting_chain(L, c.t, c.V), beta);
        return delta_renyi2(rho, place_subsystem(L, LA, placement));
    }
    require(c.backend == Backend::gaussian, ErrorCode::invalid_argument,
            "the analytic backend has no lattice value; CFT and high-T columns are always reported");
    require(c.V == 0.0, ErrorCode::invalid_argument, "the Gaussian backend needs V = 0 (use --backend exact)");
    return delta_s2_thermal(L, c.t, LA, beta, placement);
}

inline Table cmd_ff_sweep(const SweepConfig &c) {
    const int L  = or_default(c.L, 1000);
    const int LA = or_default(c.LA, 100);
    require(LA >= 1 && LA < L, ErrorCode::invalid_argument, "need 1 <= LA < L");
    const auto temps = temperature_grid(c, or_default(c.beta_min, 0.1), or_default(c.beta_max, 1000.0));
    Table table{{{"T"}, {"beta"}, {"delta_s2_exact", true}, {"delta_s2_cft", true}, {"cft_valid"}, {"delta_s2_high_t", true}, {"high_t_valid"}}, {}};
    const auto rows = parallel_map<std::vector<Cell>>(temps.size(), c.threads, [&](std::size_t i) {
        const double T = temps[i], beta = 1.0 / T;
        // The CFT holds below the band cutoff and needs a base >= 1.
        const bool             cft_ok = T < c.t && cft_base(beta, LA) >= 1.0;
        std::optional<double> cft;
        if(cft_ok) cft = cft_delta_s2(beta, LA);
        return std::vector<Cell>{T, beta, thermal_delta_s2(c, L, LA, beta), optional_cell(cft), cft_ok,
                                 high_t_delta_s2(c.t, beta), high_t_valid(c.t, beta)};
    });
    for(const auto &r : rows) table.add(r);
    return table;
}

inline Table cmd_ff_size_scan(const SweepConfig &c) {
    GroundStateOptions opt;
    opt.t         = c.t;
    opt.placement = parse_placement(c.placement);
    Table table{{{"L_A"}, {"L"}, {"number_entropy", true}, {"number_entropy_fit", true}, {"residual", true},
                 {"entanglement_entropy_fit", true}, {"t0_asymptote", true}},
                {}};
    const auto rows = parallel_map<std::vector<Cell>>(c.la_list.size(), c.threads, [&](std::size_t i) {
        const int    la  = c.la_list[i];
        const int    L   = c.L > 0 ? c.L : c.size_factor * la;
        const double s   = number_entropy_ground_state(L, la, opt);
        const double fit = number_entropy_fit(la);
        return std::vector<Cell>{static_cast<std::int64_t>(la), static_cast<std::int64_t>(L), s, fit, s - fit,
                                 entanglement_entropy_fit(la), cft_t0_asymptote(la)};
    });
    for(const auto &r : rows) table.add(r);
    return table;
}

/// Fits value = c beta^2 and the free log-log slope over the beta range.
inline Table cmd_high_t_fit(const SweepConfig &c) {
    const auto betas = grid(or_default(c.beta_min, 0.01), or_default(c.beta_max, 0.1), c.points, c.spacing);
    Table      table{{{"quantity"}, {"backend"}, {"L"}, {"L_A"}, {"V"}, {"exponent"}, {"coefficient"}, {"coefficient_over_t2"},
                      {"expected_over_t2"}},
                     {}};
    auto add_fit = [&](const std::string &name, const std::string &backend, int L, int LA, const std::vector<double> &values,
                       double expected) {
        const auto   law  = fit_power_law(betas, values);
        const double coef = fit_power_coefficient(betas, values, 2.0);
        table.add({name, backend, static_cast<std::int64_t>(L), static_cast<std::int64_t>(LA), c.V, law.exponent, coef,
                   coef / (c.t * c.t), expected});
    };
    if(c.backend == Backend::exact) {
        const int  L = or_default(c.L, 8), LA = or_default(c.LA, L / 2);
        const auto split = place_subsystem(L, LA, parse_placement(c.placement));
        const auto h     = interacting_chain(L, c.t, c.V);
        const auto pairs = parallel_map<std::pair<double, double>>(betas.size(), c.threads, [&](std::size_t i) {
            const auto rho = thermal_state(h, betas[i]);
            return std::pair{delta_renyi2(rho, split), number_entanglement(rho, split).delta_s_m};
        });
        std::vector<double> s2, sm;
        for(const auto &[a, b] : pairs) {
            s2.push_back(a);
            sm.push_back(b);
        }
        add_fit("delta_s2", "exact", L, LA, s2, 1.0);
        add_fit("delta_s_m", "exact", L, LA, sm, 0.5);
    } else {
        const int  L = or_default(c.L, 200), LA = or_default(c.LA, 50);
        const auto values = parallel_map<double>(betas.size(), c.threads, [&](std::size_t i) { return thermal_delta_s2(c, L, LA, betas[i]); });
        add_fit("delta_s2", "gaussian", L, LA, values, 1.0);
    }
    return table;
}

inline constexpr double cft_agreement_tolerance = 0.05;

inline Table cmd_cft_compare(const SweepConfig &c) {
    const int L  = or_default(c.L, 1000);
    const int LA = or_default(c.LA, 100);
    // Default window spans [1/(2 L_A), t]; the agreement window is [5/L_A, 0.2 t].
    const auto temps = temperature_grid(c, or_default(c.beta_min, 1.0 / c.t), or_default(c.beta_max, 2.0 * LA));
    Table table{{{"T"}, {"delta_s2_exact", true}, {"delta_s2_cft", true}, {"deviation", true}, {"in_window"}, {"agrees"}}, {}};
    const auto rows = parallel_map<std::vector<Cell>>(temps.size(), c.threads, [&](std::size_t i) {
        const double T = temps[i], beta = 1.0 / T;
        const double exact = thermal_delta_s2(c, L, LA, beta);
        const bool   in_window = T >= 5.0 / LA && T <= 0.2 * c.t;
        if(cft_base(beta, LA) < 1.0)
            return std::vector<Cell>{T, exact, std::monostate{}, std::monostate{}, in_window, std::monostate{}};
        const double cft = cft_delta_s2(beta, LA);
        const double dev = exact - cft;
        return std::vector<Cell>{T, exact, cft, dev, in_window, std::abs(dev) < cft_agreement_tolerance};
    });
    for(const auto &r : rows) table.add(r);
    return table;
}

inline std::string serialize_matrix(const CMatrix &m) {
    nlohmann::json rows = nlohmann::json::array();
    for(Eigen::Index i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for(Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
        rows.push_back(row);
    }
    return rows.dump();
}

/// Fixture channel, seeded random symmetric channels, and a non-symmetric
/// negative control. Throws PropertyViolation on a monotonicity failure.
inline Table cmd_locc_demo(const SweepConfig &c) {
    Table table{{{"case"}, {"L"}, {"valid_channel"}, {"before", true}, {"after", true}, {"non_increasing"}, {"commutation_residual"}}, {}};
    auto record = [&](const std::string &name, const DensityOperator &rho, const KrausChannel &ch, const Bipartition &split) {
        const auto report = validate_channel(ch, rho.basis(), split);
        if(!report.valid()) {
            table.add({name, static_cast<std::int64_t>(rho.basis().num_sites()), false, std::monostate{}, std::monostate{},
                       std::monostate{}, measurement_commutes_with_channel(rho, ch, split)});
            return;
        }
        const auto mono = monotonicity_check(rho, ch, split);
        table.add({name, static_cast<std::int64_t>(rho.basis().num_sites()), true, mono.before, mono.after, mono.non_increasing,
                   measurement_commutes_with_channel(rho, ch, split)});
        if(!mono.non_increasing)
            throw PropertyViolation("monotonicity violated in case " + name + ": before " + format_double(mono.before) +
                                    ", after " + format_double(mono.after) + "; state " + serialize_matrix(rho.matrix()));
    };

    {
        auto       basis = build_basis(2, Statistics::hardcore);
        const auto i01 = static_cast<Eigen::Index>(*basis->index_of({0, 1})), i10 = static_cast<Eigen::Index>(*basis->index_of({1, 0}));
        CMatrix    m = CMatrix::Zero(4, 4);
        m(i10, i10)  = 0.5;
        m(i01, i01)  = 0.5;
        m(i10, i01) = m(i01, i10) = 0.4;
        record("fixture", DensityOperator(basis, m), exchange_channel(), Bipartition::prefix(2, 1));
    }

    Rng rng(c.seed);
    std::uniform_int_distribution<int> sites(2, 3);
    for(int k = 0; k < c.trials; ++k) {
        const int   L     = sites(rng);
        auto        basis = build_basis(L, Statistics::hardcore);
        std::uniform_int_distribution<int> la(1, L - 1);
        const auto  split = Bipartition::prefix(L, la(rng));
        const auto  rho   = random_symmetric_state(basis, rng);
        record("random_" + std::to_string(k), rho, random_graded_channel(*basis, split, rng), split);
    }

    {
        // Swapping |00> and |01> changes the total charge.
        auto         basis = build_basis(2, Statistics::hardcore);
        CMatrix      swap  = CMatrix::Identity(4, 4);
        const auto   a = static_cast<Eigen::Index>(*basis->index_of({0, 0})), b = static_cast<Eigen::Index>(*basis->index_of({0, 1}));
        swap(a, a) = swap(b, b) = 0.0;
        swap(a, b) = swap(b, a) = 1.0;
        KrausChannel bad{{KrausOperator{swap, std::nullopt, std::nullopt}}};
        Rng          local(c.seed);
        record("negative_control", random_symmetric_state(basis, local), bad, Bipartition::prefix(2, 1));
    }
    return table;
}

/// Witness, negativity and sector table of a named state. Writes a warning
/// to `warn` when the state does not commute with N.
inline Table cmd_state_demo(const SweepConfig &c, std::ostream &warn) {
    const StateTag    tag   = parse_state_tag(c.state);
    const auto        rho   = named_state(tag);
    const Bipartition split = default_partition(tag);
    const auto        wit   = number_entanglement(rho, split);
    Table table{{{"state"}, {"quantity"}, {"total_charge"}, {"probability"}, {"value", true}}, {}};
    const std::string name = to_string(tag);
    if(!wit.symmetric) warn << "warning: state " << name << " is not symmetric, witness not meaningful\n";
    table.add({name, std::string("delta_s_m"), std::monostate{}, std::monostate{}, wit.delta_s_m});
    table.add({name, std::string("s_rho"), std::monostate{}, std::monostate{}, wit.s_rho});
    table.add({name, std::string("s_rho_m"), std::monostate{}, std::monostate{}, wit.s_rho_m});
    table.add({name, std::string("charge_commutator_norm"), std::monostate{}, std::monostate{}, wit.charge_commutator_norm});
    if(rho.basis().is_fermionic()) {
        table.add({name, std::string("fermionic_negativity"), std::monostate{}, std::monostate{}, fermionic_negativity(rho, split)});
        table.add({name, std::string("parity_entanglement"), std::monostate{}, std::monostate{}, parity_entanglement(rho, split)});
    } else {
        table.add({name, std::string("log_negativity"), std::monostate{}, std::monostate{}, log_negativity(rho, split)});
    }
    if(wit.symmetric)
        for(const auto &row : sector_negativities(rho, split).rows)
            table.add({name, std::string("sector_log_negativity"), static_cast<std::int64_t>(row.total_charge), row.probability,
                       row.log_negativity});
    return table;
}

/// Gnuplot script that plots every numeric column against the first.
inline std::string gnuplot_script(const Table &table, const std::string &data_path, bool log_x) {
    std::ostringstream os;
    os << "set datafile separator ','\n";
    os << "set key autotitle columnhead\n";
    if(log_x) os << "set logscale x\n";
    os << "set xlabel '" << table.columns.front().name << "'\n";
    os << "plot ";
    bool first = true;
    for(std::size_t c = 1; c < table.columns.size(); ++c) {
        if(!table.columns[c].entropy) continue;
        os << (first ? "" : ", ") << "'" << data_path << "' using 1:" << (c + 1) << " with linespoints";
        first = false;
    }
    os << "\n";
    return os.str();
}

} // namespace nument::cli
