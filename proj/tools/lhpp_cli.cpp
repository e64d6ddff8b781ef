#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "lhpp/errors.hpp"
#include "lhpp/instruments.hpp"
#include "lhpp/report.hpp"
#include "lhpp/scenario.hpp"
#include "lhpp/sensitivities.hpp"
#include "lhpp/structuring.hpp"
#include "lhpp/validation.hpp"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 1;
constexpr int kExitValidation = 2;
constexpr int kExitConfig = 3;

struct CommonOpts {
    std::string config_path;
    std::string out_path;
    std::string format;
    std::int64_t paths = -1;
    std::int64_t seed = -1;
    int threads = 0;
};

lhpp::ScenarioConfig load_config(const CommonOpts& o) {
    lhpp::ScenarioConfig c = o.config_path.empty() ? lhpp::ScenarioConfig{}
                                                   : lhpp::load_scenario(o.config_path);
    if (o.paths >= 0) c.mc.paths = o.paths;
    if (o.seed >= 0) c.mc.seed = static_cast<std::uint64_t>(o.seed);
    c.validate();
    return c;
}

void emit(const CommonOpts& o, const std::string& text) {
    if (o.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(o.out_path, std::ios::binary);
    if (!out) throw lhpp::config_error("cannot open output file '" + o.out_path + "'");
    out << text;
}

double default_attachment(const lhpp::ScenarioConfig& config,
                          const lhpp::CalibratedState& base) {
    return lhpp::optimal_attachment(config.pool.w_re, base.pool,
                                    config.structuring_spec(), config.market_params());
}

void run_parallel(int npoints, int threads, const std::function<void(int)>& fn) {
    const unsigned hw = std::thread::hardware_concurrency();
    const int nthreads =
        std::min(npoints, threads > 0 ? threads : static_cast<int>(hw > 0 ? hw : 1));
    if (nthreads <= 1) {
        for (int i = 0; i < npoints; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t)
        pool.emplace_back([&] {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= npoints) return;
                fn(i);
            }
        });
    for (auto& th : pool) th.join();
}

// ---------------------------------------------------------------- price

int cmd_price(const CommonOpts& o, double attach, double detach, double spread_in) {
    const lhpp::ScenarioConfig config = load_config(o);
    const lhpp::CalibratedState base = lhpp::calibrate_state(config);
    const lhpp::MarketParams market = config.market_params();
    if (attach < 0.0) attach = default_attachment(config, base);
    const lhpp::Tranche tranche(attach, detach);

    const double par = lhpp::tranche_par_spread(tranche, base.pool, market);
    const double spread = std::isnan(spread_in) ? par : spread_in;
    const double price = lhpp::tranche_price(tranche, spread, base.pool, market);
    const lhpp::SurvivalCurve curve =
        lhpp::tranche_survival_curve(tranche, base.pool, market, 16);

    if (o.format == "json") {
        json j;
        j["attach"] = tranche.attach;
        j["detach"] = tranche.detach;
        j["par_spread"] = par;
        j["spread"] = spread;
        j["price"] = price;
        j["bank_pd_enlarged"] = base.bank_pd;
        j["rho_bank_enlarged"] = base.enlarged.rho_bar;
        json samples = json::array();
        for (std::size_t i = 0; i < curve.times.size(); ++i)
            samples.push_back({{"t", curve.times[i]}, {"q", curve.values[i]}});
        j["survival"] = samples;
        emit(o, j.dump(2) + "\n");
    } else {
        std::ostringstream os;
        os.precision(10);
        os << "senior tranche [" << tranche.attach << ", " << tranche.detach << "]\n"
           << "par spread     " << par * 1e4 << " bp\n"
           << "price @ spread " << price << "  (spread " << spread * 1e4 << " bp)\n"
           << "survival q(t):\n";
        for (std::size_t i = 0; i < curve.times.size(); i += 3)
            os << "  t=" << curve.times[i] << "  q=" << curve.values[i] << "\n";
        emit(o, os.str());
    }
    return kExitOk;
}

// ---------------------------------------------------------- sensitivity

int cmd_sensitivity(const CommonOpts& o, double attach, double detach, double spread_in,
                    double bump) {
    const lhpp::ScenarioConfig config = load_config(o);
    const lhpp::CalibratedState base = lhpp::calibrate_state(config);
    const lhpp::MarketParams market = config.market_params();
    if (attach < 0.0) attach = default_attachment(config, base);
    const lhpp::Tranche tranche(attach, detach);
    const double spread =
        std::isnan(spread_in) ? lhpp::tranche_par_spread(tranche, base.pool, market)
                              : spread_in;

    const lhpp::SensitivityReport rep =
        lhpp::tranche_pv01_re(config, tranche, spread, bump);

    if (o.format == "json") {
        json j;
        j["attach"] = tranche.attach;
        j["detach"] = tranche.detach;
        j["spread"] = spread;
        j["base_value"] = rep.base_value;
        j["bumped_value"] = rep.bumped_value;
        j["pv01_re"] = rep.pv01;
        j["pv01_re_bp"] = rep.pv01 * 1e4;
        j["delta_re"] = rep.delta;
        j["loan_pv01"] = rep.loan_pv01;
        j["loan_pv01_bp"] = rep.loan_pv01 * 1e4;
        emit(o, j.dump(2) + "\n");
    } else {
        std::ostringstream os;
        os.precision(10);
        os << "senior tranche [" << tranche.attach << ", " << tranche.detach
           << "], spread " << spread * 1e4 << " bp\n"
           << "base value   " << rep.base_value << "\n"
           << "bumped value " << rep.bumped_value << "\n"
           << "PV01_RE      " << rep.pv01 * 1e4 << " bp\n"
           << "delta_RE     " << rep.delta << "\n"
           << "loan PV01    " << rep.loan_pv01 * 1e4 << " bp\n";
        emit(o, os.str());
    }
    return kExitOk;
}

// -------------------------------------------------------------- optimize

int cmd_optimize(const CommonOpts& o, double bump, int w_grid) {
    const lhpp::ScenarioConfig config = load_config(o);
    const lhpp::CalibratedState base = lhpp::calibrate_state(config);
    const lhpp::CalibratedState bumped = lhpp::calibrate_state(config, bump);
    lhpp::StructuringSpec spec = config.structuring_spec();
    spec.w_grid = w_grid;
    const lhpp::StructuringResult res = lhpp::optimal_weight(
        base.pool, bumped.pool, spec, config.market_params(), o.threads);

    if (o.format == "json") {
        json j;
        j["w_star"] = res.w_star;
        j["alpha_star"] = res.alpha_star;
        j["pv01_re"] = res.pv01_re;
        j["pv01_re_bp"] = res.pv01_re * 1e4;
        j["binding"] = res.binding;
        emit(o, j.dump(2) + "\n");
    } else {
        std::ostringstream os;
        os.precision(10);
        os << "w*       " << res.w_star << "\n"
           << "alpha*   " << res.alpha_star << "\n"
           << "PV01_RE  " << res.pv01_re * 1e4 << " bp\n"
           << "binding  " << res.binding << "\n";
        emit(o, os.str());
    }
    return kExitOk;
}

// ---------------------------------------------------------------- sweeps

json rows_to_json(const std::vector<lhpp::SweepRow>& rows, const std::string& label) {
    json block;
    if (!label.empty()) block["scenario"] = label;
    json arr = json::array();
    for (const auto& r : rows)
        arr.push_back({{"axis", r.axis},
                       {"alpha_star", r.alpha_star},
                       {"spread", r.spread},
                       {"delta_re", r.delta_re},
                       {"pv01_re_bp", r.pv01_re_bp}});
    block["rows"] = arr;
    return block;
}

int cmd_sweep_n(const CommonOpts& o, int n_min, int n_max, const std::string& mode,
                double per_loan_w, double bump) {
    const lhpp::ScenarioConfig config = load_config(o);
    const lhpp::CalibratedState base = lhpp::calibrate_state(config);
    const lhpp::CalibratedState bumped = lhpp::calibrate_state(config, bump);
    const lhpp::MarketParams market = config.market_params();
    const lhpp::StructuringSpec spec = config.structuring_spec();
    const double lpv01 = lhpp::loan_pv01(base.lambda_re, config.pool.recovery_re,
                                         market, bump);
    const bool fixed_total = mode == "fixed-total-w";
    if (per_loan_w <= 0.0)
        per_loan_w = config.pool.n_re > 0 ? config.pool.w_re / config.pool.n_re : 0.0;

    std::vector<int> ns;
    for (int n = n_min; n <= n_max; ++n) {
        const double w = fixed_total ? config.pool.w_re : per_loan_w * n;
        if (w <= 1.0) ns.push_back(n);
    }
    std::vector<lhpp::SweepRow> rows(ns.size());
    run_parallel(static_cast<int>(ns.size()), o.threads, [&](int i) {
        const int n = ns[i];
        const double w = fixed_total ? config.pool.w_re : per_loan_w * n;
        lhpp::PoolParams b = base.pool, bp = bumped.pool;
        b.n_re = bp.n_re = n;
        b.w_re = bp.w_re = w;
        const lhpp::SeniorPoint pt = lhpp::evaluate_senior_point(b, bp, lpv01, spec, market);
        rows[i] = {static_cast<double>(n), pt.alpha_star, pt.spread, pt.delta_re,
                   pt.pv01_re * 1e4};
    });

    if (o.format == "json") {
        emit(o, rows_to_json(rows, "").dump(2) + "\n");
    } else {
        emit(o, lhpp::sweep_to_csv(rows));
    }
    return kExitOk;
}

int cmd_sweep_w(const CommonOpts& o, double w_min, double w_max, int w_steps,
                const std::vector<double>& scenario_pds, double bump) {
    const lhpp::ScenarioConfig config0 = load_config(o);
    const lhpp::MarketParams market = config0.market_params();
    const lhpp::StructuringSpec spec = config0.structuring_spec();

    std::ostringstream csv;
    json jblocks = json::array();
    for (double pd : scenario_pds) {
        lhpp::ScenarioConfig config = config0;
        config.pool.re_pd_T = pd;
        config.validate();
        const lhpp::CalibratedState base = lhpp::calibrate_state(config);
        const lhpp::CalibratedState bumped = lhpp::calibrate_state(config, bump);
        const double lpv01 =
            lhpp::loan_pv01(base.lambda_re, config.pool.recovery_re, market, bump);

        std::vector<lhpp::SweepRow> rows(w_steps);
        std::vector<std::string> errors(w_steps);
        run_parallel(w_steps, o.threads, [&](int i) {
            const double w =
                w_steps == 1 ? w_min : w_min + (w_max - w_min) * i / (w_steps - 1.0);
            try {
                const lhpp::SeniorPoint pt = lhpp::evaluate_senior_point(
                    base.pool.with_weight(w), bumped.pool.with_weight(w), lpv01, spec,
                    market);
                rows[i] = {w, pt.alpha_star, pt.spread, pt.delta_re, pt.pv01_re * 1e4};
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        });
        for (const auto& err : errors)
            if (!err.empty()) throw lhpp::infeasibility_error(err);

        std::ostringstream label;
        label << "scenario re_pd_T=" << lhpp::format_full(pd);
        csv << lhpp::sweep_to_csv(rows, label.str());
        csv << "\n";
        jblocks.push_back(rows_to_json(rows, label.str()));
    }

    if (o.format == "json")
        emit(o, jblocks.dump(2) + "\n");
    else
        emit(o, csv.str());
    return kExitOk;
}

// -------------------------------------------------------------- validate

int cmd_validate(const CommonOpts& o) {
    const lhpp::ScenarioConfig config = load_config(o);
    const lhpp::ValidationResult res = lhpp::run_validation(config, o.threads);
    emit(o, res.report);
    return res.passed ? kExitOk : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"LH++ credit portfolio analytics: CDO tranches on a mixed "
                 "bank-loan / renewable-energy asset pool"};
    app.require_subcommand(1);

    CommonOpts common;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", common.config_path, "scenario config file (INI)");
        sub->add_option("--out", common.out_path, "output path (default stdout)");
        sub->add_option("--format", common.format,
                        "output format: json, or the command default (text for "
                        "reports, csv for sweeps)")
            ->check(CLI::IsMember({"text", "json", "csv"}));
        sub->add_option("--paths", common.paths, "Monte Carlo path override");
        sub->add_option("--seed", common.seed, "Monte Carlo seed override");
        sub->add_option("--threads", common.threads, "worker threads (0 = auto)");
    };

    double attach = -1.0, detach = 1.0;
    double spread = std::numeric_limits<double>::quiet_NaN();
    double bump = 1e-4;

    CLI::App* price = app.add_subcommand("price", "tranche par spread and price");
    add_common(price);
    price->add_option("--attach", attach, "attachment point (default: alpha*)");
    price->add_option("--detach", detach, "detachment point");
    price->add_option("--spread", spread, "coupon spread (default: par)");

    CLI::App* sens = app.add_subcommand("sensitivity", "tranche PV01_RE and delta_RE");
    add_common(sens);
    sens->add_option("--attach", attach, "attachment point (default: alpha*)");
    sens->add_option("--detach", detach, "detachment point");
    sens->add_option("--spread", spread, "coupon spread (default: par)");
    sens->add_option("--bump", bump, "spread bump (default 1e-4)");

    int w_grid = 101;
    CLI::App* opt = app.add_subcommand("optimize", "optimal RE weight and attachment");
    add_common(opt);
    opt->add_option("--bump", bump, "spread bump (default 1e-4)");
    opt->add_option("--w-grid", w_grid, "weight-grid resolution")->check(CLI::PositiveNumber);

    int n_min = 1, n_max = 30;
    std::string mode = "fixed-total-w";
    double per_loan_w = -1.0;
    CLI::App* swn = app.add_subcommand("sweep-n", "sweep the number of RE loans");
    add_common(swn);
    swn->add_option("--n-min", n_min, "smallest n")->check(CLI::PositiveNumber);
    swn->add_option("--n-max", n_max, "largest n");
    swn->add_option("--mode", mode, "weight mode")
        ->check(CLI::IsMember({"fixed-total-w", "fixed-per-loan-w"}));
    swn->add_option("--per-loan-w", per_loan_w,
                    "per-loan weight for fixed-per-loan-w (default w_re/n_re)");

    double w_min = 0.0, w_max = 0.80;
    int w_steps = 33;
    std::vector<double> scenario_pds = {0.2421, 0.01, 0.40};
    CLI::App* sww = app.add_subcommand("sweep-w", "sweep the direct RE weight");
    add_common(sww);
    sww->add_option("--w-min", w_min, "smallest weight");
    sww->add_option("--w-max", w_max, "largest weight");
    sww->add_option("--w-steps", w_steps, "grid points")->check(CLI::PositiveNumber);
    sww->add_option("--re-pds", scenario_pds, "RE PD scenarios at the horizon");

    CLI::App* val = app.add_subcommand("validate", "Monte Carlo validation of closed forms");
    add_common(val);

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(price)) return cmd_price(common, attach, detach, spread);
        if (app.got_subcommand(sens))
            return cmd_sensitivity(common, attach, detach, spread, bump);
        if (app.got_subcommand(opt)) return cmd_optimize(common, bump, w_grid);
        if (app.got_subcommand(swn))
            return cmd_sweep_n(common, n_min, n_max, mode, per_loan_w, bump);
        if (app.got_subcommand(sww))
            return cmd_sweep_w(common, w_min, w_max, w_steps, scenario_pds, bump);
        if (app.got_subcommand(val)) return cmd_validate(common);
    } catch (const lhpp::infeasibility_error& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}
