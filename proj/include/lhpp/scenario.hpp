#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "lhpp/instruments.hpp"
#include "lhpp/loss_model.hpp"
#include "lhpp/mc_oracle.hpp"
#include "lhpp/merton.hpp"
#include "lhpp/structuring.hpp"

namespace lhpp {

/// Full run description ingested by the CLI. Defaults reproduce the
/// bundled example calibration (configs/example.ini).
struct ScenarioConfig {
    struct Market {
        double rate = 0.0;
        double maturity = 10.0;
    } market;

    struct Pool {
        int n_re = 9;
        double w_re = 0.1061;
        double bank_pd_T = 0.199;
        double re_pd_T = 0.2421;
        double recovery_bank = 0.25;
        double recovery_re = 0.25;
        double rho_bank = 0.1758;
        double rho_re = 0.1170;
        // bank / RE-firm asset correlation for the balance-sheet
        // recalibration; defaults to sqrt(rho_bank * rho_re)
        std::optional<double> rho_cross;
    } pool;

    struct Bank {
        double leverage = 0.9;        // D0 / A0
        double re_loan_weight = 0.01; // F0 / A0
    } bank;

    struct ReFirm {
        double leverage = 0.9;
    } re_firm;

    struct Structuring {
        double pd_aaa = 0.007;
        double alpha_max = 0.3168;
        std::string constraint = "expected-loss";  // or "hitting-prob"
    } structuring;

    struct Mc {
        std::int64_t paths = 1'000'000;
        std::uint64_t seed = 42;
        std::int64_t chunk = 65536;
    } mc;

    double effective_rho_cross() const;

    /// Throws config_error naming the offending field.
    void validate() const;

    MarketParams market_params() const;
    StructuringSpec structuring_spec() const;
    McSettings mc_settings(int threads = 0) const;
};

/// Parse a flat INI-style config ("[section]" headers, "key = value" lines,
/// '#'/';' comments). Unknown sections or keys are errors; missing keys keep
/// their defaults.
ScenarioConfig parse_scenario(const std::string& text);
ScenarioConfig load_scenario(const std::string& path);

/// Serialization that round-trips through parse_scenario.
std::string serialize_scenario(const ScenarioConfig& config);

}  // namespace lhpp
