// vesim — batch front door for the virtual-energy-storage building simulator.
//
// Subcommands:
//   baseline   solve the operating point, report power-curve coefficients
//   rte        run one square-wave schedule, write result + trace CSVs
//   sweep      efficiency curve over the configured grid, CSV + SVG
//   verify     randomized property suite over parameter draws
//   extended   two-mass moist-air model run, write result + trace CSVs
//
// Exit codes: 0 ok, 2 config error, 3 model infeasibility, 4 property failure.

#include "CLI11.hpp"

#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <limits>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "vesim/csv.hpp"
#include "vesim/errors.hpp"
#include "vesim/extended_sim.hpp"
#include "vesim/hvac_model.hpp"
#include "vesim/rte_engine.hpp"
#include "vesim/scenario.hpp"
#include "vesim/svg.hpp"
#include "vesim/verify.hpp"
#include "vesim/ves_analytic.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kModelError = 3;
constexpr int kPropertyFailure = 4;

struct Options {
    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 20260815;
    double dt = std::numeric_limits<double>::quiet_NaN();  // NaN: keep the config value
    bool force_violation = false;
};

std::string join(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

vesim::ScenarioConfig load_config(const Options& o) {
    if (o.config_path.empty()) throw vesim::ConfigError("--config is required for this command");
    auto cfg = vesim::ScenarioConfig::from_file(o.config_path);
    if (!std::isnan(o.dt)) {
        if (!(o.dt > 0.0)) throw vesim::ConfigError("--dt must be > 0");
        cfg.dt_s = o.dt;
    }
    return cfg;
}

vesim::DeviationFrame frame_of(const vesim::ScenarioConfig& cfg, const vesim::BaselinePoint& bp) {
    return {bp.t_b.kelvin(), cfg.building.comfort_low.kelvin(),
            cfg.building.comfort_high.kelvin()};
}

// Evaluate f(0..n-1) on a bounded worker pool; each call owns slot i of the
// caller's result vector, so output order is nailed down by the grid index.
template <typename F>
void parallel_for(std::size_t n, F&& f) {
    const unsigned hw = std::thread::hardware_concurrency();
    const std::size_t workers = std::min<std::size_t>({n, hw != 0 ? hw : 1, 8});
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr err;
    std::mutex err_mu;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            while (!failed.load()) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    f(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mu);
                    if (!err) err = std::current_exception();
                    failed.store(true);
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

const char* bool_text(bool b) { return b ? "true" : "false"; }

int cmd_baseline(const Options& o) {
    const auto cfg = load_config(o);
    const auto bp = cfg.baseline();
    const auto v = cfg.coefficients(bp);

    std::cout << "operating point:\n"
              << "  t_b       = " << bp.t_b.kelvin() << " K (" << bp.t_b.fahrenheit() << " F)\n"
              << "  m_a_b     = " << bp.m_a_b << " kg/s\n"
              << "  q_x       = " << bp.q_x << " W\n"
              << "  p_hvac_b  = " << bp.p_hvac_b << " W\n"
              << "power/temperature deviation coefficients:\n"
              << "  a     = " << v.a << " W/(kg/s)\n"
              << "  b     = " << v.b << " W/K\n"
              << "  c     = " << v.c << " W/((kg/s) K)\n"
              << "  d     = " << v.d << " W/(kg/s)^2\n"
              << "  alpha = " << v.alpha << " 1/s\n"
              << "  beta  = " << v.beta << " (K/s)/(kg/s)\n"
              << "  gamma = " << v.gamma << " (1/s)/(kg/s)\n";

    const std::string path = join(o.out_dir, "baseline.csv");
    vesim::CsvWriter csv(path, {"t_b_k", "m_a_b_kg_s", "q_x_w", "p_hvac_b_w", "a", "b", "c", "d",
                                "alpha", "beta", "gamma"});
    csv.row({bp.t_b.kelvin(), bp.m_a_b, bp.q_x, bp.p_hvac_b, v.a, v.b, v.c, v.d, v.alpha, v.beta,
             v.gamma});
    std::cout << "wrote " << path << "\n";
    return kOk;
}

void write_rte_result(const std::string& path, const vesim::RteResult& r) {
    vesim::CsvWriter csv(path, {"eta_rt", "eta_energy", "t_c_s", "t_d_s", "t_recov_s",
                                "recovery_mode", "t_tilde_end_k", "e_charge_j", "e_discharge_j",
                                "zero_energy", "comfort_ok"});
    csv.row(std::vector<std::string>{
        vesim::format_double(r.eta_rt), vesim::format_double(r.eta_energy),
        vesim::format_double(r.t_c), vesim::format_double(r.t_d),
        vesim::format_double(r.t_recov), vesim::to_string(r.recovery_mode),
        vesim::format_double(r.t_tilde_end), vesim::format_double(r.e_charge),
        vesim::format_double(r.e_discharge), bool_text(r.zero_energy), bool_text(r.comfort_ok)});
}

int cmd_rte(const Options& o) {
    const auto cfg = load_config(o);
    if (cfg.model != vesim::ScenarioConfig::Model::analytic)
        throw vesim::ConfigError("rte runs the analytic model; use the extended subcommand");
    if (cfg.sweep)
        throw vesim::ConfigError("config has a [sweep] block; use the sweep subcommand");
    const auto bp = cfg.baseline();
    const auto v = cfg.coefficients(bp);
    const auto sched = cfg.schedule(bp);
    const auto frame = frame_of(cfg, bp);

    vesim::RunOptions opts;
    opts.dt = cfg.dt_s;
    const bool closed_form = cfg.hvac.r_oa == 1.0;
    const auto [trace, result] = closed_form
                                     ? vesim::run_square_wave(sched, v, frame, opts)
                                     : vesim::run_square_wave_numeric(sched, v, frame, opts);

    const std::string result_path = join(o.out_dir, "rte_result.csv");
    write_rte_result(result_path, result);

    const std::string trace_path = join(o.out_dir, "rte_trace.csv");
    vesim::CsvWriter tcsv(trace_path, {"t_s", "t_tilde_k", "m_tilde_kg_s", "p_tilde_w", "soc"});
    for (const auto& p : trace.points) tcsv.row({p.t, p.t_tilde, p.m_tilde, p.p_tilde, p.soc});

    std::cout << "eta_rt = " << result.eta_rt << " (" << to_string(result.recovery_mode)
              << " recovery, " << result.t_recov << " s); path: "
              << (closed_form ? "closed-form" : "numeric") << "\n"
              << "wrote " << result_path << " and " << trace_path << "\n";
    return kOk;
}

int cmd_extended(const Options& o) {
    const auto cfg = load_config(o);
    if (cfg.model != vesim::ScenarioConfig::Model::extended)
        throw vesim::ConfigError("extended needs model = \"extended\" in the config");
    if (cfg.sweep)
        throw vesim::ConfigError("config has a [sweep] block; use the sweep subcommand");
    const auto bp = cfg.baseline();
    const auto sched = cfg.schedule(bp);
    const auto model = cfg.extended_model(bp);
    const auto run = cfg.extended_run(bp);
    const auto weather = cfg.weather_series();

    const auto out = vesim::run_extended_rte(model, weather, sched, run);

    const std::string result_path = join(o.out_dir, "extended_result.csv");
    {
        const auto& r = out.result;
        vesim::CsvWriter csv(result_path,
                             {"eta_rt", "eta_energy", "t_c_s", "t_d_s", "t_recov_s",
                              "recovery_mode", "t_tilde_end_k", "e_charge_j", "e_discharge_j",
                              "saturation_events", "zero_energy", "comfort_ok"});
        csv.row(std::vector<std::string>{
            vesim::format_double(r.eta_rt), vesim::format_double(r.eta_energy),
            vesim::format_double(r.t_c), vesim::format_double(r.t_d),
            vesim::format_double(r.t_recov), vesim::to_string(r.recovery_mode),
            vesim::format_double(r.t_tilde_end), vesim::format_double(r.e_charge),
            vesim::format_double(r.e_discharge), std::to_string(out.saturation_events),
            bool_text(r.zero_energy), bool_text(r.comfort_ok)});
    }

    const std::string trace_path = join(o.out_dir, "extended_trace.csv");
    vesim::CsvWriter tcsv(trace_path, {"t_s", "t_zone_k", "t_wall_k", "w_zone", "m_a_kg_s",
                                       "p_hvac_w", "p_tilde_w", "soc"});
    for (const auto& r : out.trace.rows)
        tcsv.row({r.t_s, r.t_zone_k, r.t_wall_k, r.w_zone, r.m_a_kg_s, r.p_hvac_w, r.p_tilde_w,
                  r.soc});

    std::cout << "eta_rt = " << out.result.eta_rt << " ("
              << to_string(out.result.recovery_mode) << " recovery, " << out.result.t_recov
              << " s, " << out.saturation_events << " saturated steps)\n"
              << "wrote " << result_path << " and " << trace_path << "\n";
    return kOk;
}

std::string sweep_x_label(vesim::SweepSpec::Variable v) {
    switch (v) {
        case vesim::SweepSpec::Variable::t_p: return "t_p [s]";
        case vesim::SweepSpec::Variable::n: return "n [cycles]";
        case vesim::SweepSpec::Variable::delta_p: return "delta_p [W]";
        case vesim::SweepSpec::Variable::r_oa: return "r_oa [-]";
    }
    return "x";
}

int cmd_sweep(const Options& o) {
    const auto cfg = load_config(o);
    if (!cfg.sweep) throw vesim::ConfigError("sweep needs a [sweep] block in the config");
    const auto& sw = *cfg.sweep;
    const auto& grid = sw.grid;
    using Variable = vesim::SweepSpec::Variable;

    std::vector<vesim::RtePoint> points;
    if (cfg.model == vesim::ScenarioConfig::Model::extended) {
        // Config validation guarantees variable == n. The per-n results share
        // one baseline pass and one flexibility pass, so this path stays
        // single-threaded by design.
        const auto bp = cfg.baseline();
        const auto sched = cfg.sweep_schedule(bp, grid.back());
        points = vesim::extended_rte_vs_n(cfg.extended_model(bp), cfg.weather_series(), sched,
                                          static_cast<int>(grid.size()), cfg.extended_run(bp));
    } else if (sw.variable == Variable::n && cfg.hvac.r_oa == 1.0) {
        const auto bp = cfg.baseline();
        const auto sched = cfg.sweep_schedule(bp, grid.back());
        points = vesim::rte_vs_n(sched, static_cast<int>(grid.size()), cfg.coefficients(bp),
                                 frame_of(cfg, bp));
    } else if (sw.variable == Variable::r_oa) {
        // Re-solve the operating point at each outside-air fraction; the
        // numeric path keeps the curve on one method across the grid.
        points.resize(grid.size());
        parallel_for(grid.size(), [&](std::size_t i) {
            auto hvac = cfg.hvac;
            hvac.r_oa = grid[i];
            hvac.validate();
            const auto bp = vesim::solve_baseline(cfg.t_b, cfg.m_a_b_kg_s, cfg.q_x_w,
                                                  cfg.building, hvac, cfg.ambient(), cfg.consts);
            const auto v = vesim::ves_coefficients(bp, cfg.building, hvac, cfg.ambient(),
                                                   cfg.consts);
            const auto sched = cfg.sweep_schedule(bp, grid[i]);
            vesim::RunOptions opts;
            opts.dt = cfg.dt_s;
            opts.with_trace = false;
            const auto [trace, r] = vesim::run_square_wave_numeric(sched, v, frame_of(cfg, bp),
                                                                   opts);
            points[i] = {grid[i], r.eta_rt, r.t_recov, r.recovery_mode};
        });
    } else {
        const auto bp = cfg.baseline();
        const auto v = cfg.coefficients(bp);
        const auto frame = frame_of(cfg, bp);
        const bool closed_form = cfg.hvac.r_oa == 1.0;
        points.resize(grid.size());
        parallel_for(grid.size(), [&](std::size_t i) {
            const auto sched = cfg.sweep_schedule(bp, grid[i]);
            vesim::RunOptions opts;
            opts.dt = cfg.dt_s;
            opts.with_trace = false;
            const auto [trace, r] = closed_form
                                        ? vesim::run_square_wave(sched, v, frame, opts)
                                        : vesim::run_square_wave_numeric(sched, v, frame, opts);
            points[i] = {grid[i], r.eta_rt, r.t_recov, r.recovery_mode};
        });
    }

    const std::string var = vesim::to_string(sw.variable);
    const std::string csv_path = join(o.out_dir, "sweep_" + var + ".csv");
    vesim::CsvWriter csv(csv_path, {var, "eta_rt", "t_recov_s", "recovery_mode"});
    std::vector<double> xs, etas;
    xs.reserve(points.size());
    etas.reserve(points.size());
    for (const auto& p : points) {
        csv.row(std::vector<std::string>{vesim::format_double(p.x),
                                         vesim::format_double(p.eta_rt),
                                         vesim::format_double(p.t_recov),
                                         vesim::to_string(p.recovery_mode)});
        xs.push_back(p.x);
        etas.push_back(p.eta_rt);
    }

    const std::string svg_path = join(o.out_dir, "sweep_" + var + ".svg");
    vesim::SvgChart chart("round-trip efficiency vs " + var, sweep_x_label(sw.variable),
                          "eta_rt", sw.log_spaced);
    chart.add_series("eta_rt", xs, etas);
    chart.add_reference_line(1.0);
    chart.write(svg_path);

    std::cout << "swept " << var << " over " << grid.size() << " points\n"
              << "wrote " << csv_path << " and " << svg_path << "\n";
    return kOk;
}

int cmd_verify(const Options& o) {
    vesim::VerifyOptions vo;
    vo.seed = o.seed;
    vo.force_violation = o.force_violation;
    const auto results = vesim::run_verification(vo);
    std::cout << "property suite, seed " << vo.seed << ":\n";
    int failures = 0;
    for (const auto& r : results) {
        std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
        if (!r.pass) ++failures;
    }
    if (failures == 0)
        std::cout << "all " << results.size() << " claims hold\n";
    else
        std::cout << failures << " of " << results.size() << " claims FAILED\n";
    return failures == 0 ? kOk : kPropertyFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"virtual-energy-storage simulator for building HVAC flexibility"};
    app.require_subcommand(1);
    app.fallthrough();

    Options o;
    app.add_option("--config", o.config_path, "scenario config file");
    app.add_option("--out", o.out_dir, "output directory (created if missing)");
    app.add_option("--seed", o.seed, "seed for the randomized property draws");
    app.add_option("--dt", o.dt, "integrator step override [s]");
    app.add_flag("--force-violation", o.force_violation,
                 "self-test hook: plant a sign error and confirm the suite catches it")
        ->group("");

    auto* cmd_b = app.add_subcommand("baseline", "solve the operating point and coefficients");
    auto* cmd_r = app.add_subcommand("rte", "run one square-wave schedule");
    auto* cmd_s = app.add_subcommand("sweep", "efficiency curve over the configured grid");
    auto* cmd_v = app.add_subcommand("verify", "run the randomized property suite");
    auto* cmd_e = app.add_subcommand("extended", "run the two-mass moist-air model");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfigError;
    }

    try {
        std::filesystem::create_directories(o.out_dir);
        if (cmd_b->parsed()) return cmd_baseline(o);
        if (cmd_r->parsed()) return cmd_rte(o);
        if (cmd_s->parsed()) return cmd_sweep(o);
        if (cmd_v->parsed()) return cmd_verify(o);
        if (cmd_e->parsed()) return cmd_extended(o);
        std::cerr << "no subcommand given\n";
        return kConfigError;
    } catch (const vesim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const vesim::ModelError& e) {
        std::cerr << "model error: " << e.what() << "\n";
        return kModelError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kModelError;
    }
}
