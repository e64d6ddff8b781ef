#include "lhpp/scenario.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "lhpp/errors.hpp"

namespace lhpp {

double ScenarioConfig::effective_rho_cross() const {
    return pool.rho_cross ? *pool.rho_cross : std::sqrt(pool.rho_bank * pool.rho_re);
}

namespace {

void require(bool ok, const std::string& field, const std::string& what) {
    if (!ok) throw config_error("config field " + field + ": " + what);
}

}  // namespace

void ScenarioConfig::validate() const {
    require(std::isfinite(market.rate), "market.rate", "must be finite");
    require(market.maturity > 0.0, "market.maturity", "must be > 0");
    require(pool.n_re >= 0, "pool.n_re", "must be >= 0");
    require(pool.w_re >= 0.0 && pool.w_re <= 1.0, "pool.w_re", "must lie in [0,1]");
    require(pool.n_re > 0 || pool.w_re == 0.0, "pool.w_re",
            "must be 0 when pool.n_re is 0");
    require(pool.bank_pd_T > 0.0 && pool.bank_pd_T < 1.0, "pool.bank_pd_T",
            "must lie in (0,1)");
    require(pool.re_pd_T > 0.0 && pool.re_pd_T < 1.0, "pool.re_pd_T",
            "must lie in (0,1)");
    require(pool.recovery_bank >= 0.0 && pool.recovery_bank < 1.0,
            "pool.recovery_bank", "must lie in [0,1)");
    require(pool.recovery_re >= 0.0 && pool.recovery_re < 1.0, "pool.recovery_re",
            "must lie in [0,1)");
    require(pool.rho_bank >= 0.0 && pool.rho_bank < 1.0, "pool.rho_bank",
            "must lie in [0,1)");
    require(pool.rho_re >= 0.0 && pool.rho_re < 1.0, "pool.rho_re",
            "must lie in [0,1)");
    if (pool.rho_cross)
        require(*pool.rho_cross >= 0.0 && *pool.rho_cross < 1.0, "pool.rho_cross",
                "must lie in [0,1)");
    require(bank.leverage > 0.0 && bank.leverage < 1.0, "bank.leverage",
            "must lie in (0,1)");
    require(bank.re_loan_weight >= 0.0, "bank.re_loan_weight", "must be >= 0");
    require(re_firm.leverage > 0.0 && re_firm.leverage < 1.0, "re_firm.leverage",
            "must lie in (0,1)");
    require(structuring.pd_aaa > 0.0 && structuring.pd_aaa < 1.0,
            "structuring.pd_aaa", "must lie in (0,1)");
    require(structuring.alpha_max >= 0.0 && structuring.alpha_max <= 1.0,
            "structuring.alpha_max", "must lie in [0,1]");
    require(structuring.constraint == "expected-loss" ||
                structuring.constraint == "hitting-prob",
            "structuring.constraint", "must be 'expected-loss' or 'hitting-prob'");
    require(mc.paths >= 1, "mc.paths", "must be >= 1");
    require(mc.chunk >= 1, "mc.chunk", "must be >= 1");
}

MarketParams ScenarioConfig::market_params() const {
    return MarketParams{market.rate, market.maturity};
}

StructuringSpec ScenarioConfig::structuring_spec() const {
    StructuringSpec spec;
    spec.pd_aaa = structuring.pd_aaa;
    spec.alpha_max = structuring.alpha_max;
    spec.constraint = structuring.constraint == "hitting-prob"
                          ? RatingConstraint::hitting_prob
                          : RatingConstraint::expected_loss;
    return spec;
}

McSettings ScenarioConfig::mc_settings(int threads) const {
    McSettings s;
    s.paths = mc.paths;
    s.seed = mc.seed;
    s.chunk = mc.chunk;
    s.threads = threads;
    return s;
}

namespace {

using Setter = std::function<void(ScenarioConfig&, const std::string&, const std::string&)>;

double parse_double(const std::string& field, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw config_error("config field " + field + ": cannot parse '" + value +
                           "' as a number");
    }
}

std::int64_t parse_int(const std::string& field, const std::string& value) {
    try {
        std::size_t pos = 0;
        const std::int64_t v = std::stoll(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw config_error("config field " + field + ": cannot parse '" + value +
                           "' as an integer");
    }
}

const std::map<std::string, Setter>& field_setters() {
    static const std::map<std::string, Setter> setters = {
        {"market.rate", [](ScenarioConfig& c, const std::string& f, const std::string& v) { c.market.rate = parse_double(f, v); }},
        {"market.maturity", [](ScenarioConfig& c, const std::string& f, const std::string& v) { c.market.maturity = parse_double(f, v); }},
        {"pool.n_re", [](ScenarioConfig& c, const std::string& f, const std::string& v) { c.pool.n_re = static_cast<int>(parse_int(f, v)); }},
        {"pool.w_re", [](ScenarioConfig& c, const std::string& f, const std::string& v) { c.pool.w_re = parse_double(f, v); }},
        {"pool.bank_pd_T", [](ScenarioConfig& c, const std::string& f, const std::string& v) { c.pool.bank_pd_T = parse_double(f, v); }},
        {"pool.re_pd_T", [](ScenarioConfig& c, const std::string& f, const std::string& v) { c.pool.re_pd_T = parse_double(f, v); }},
        {"pool.recovery_bank", [](ScenarioConfig& c, const std::string& f, const std::string& v) { c.pool.recovery_bank = parse_double(f, v); }},
        {"pool.recovery_re", [](ScenarioConfig& c, const std::string& f, const std::string& v) { c.pool.recovery_re = parse_double(f, v); }},
        {"pool.rho_bank", [](ScenarioConfig& c, const std::string& f, const std::string& v) { c.pool.rho_bank = parse_double(f, v); }},
        {"pool.rho_re", [](ScenarioConfig& c, const std::string& f, const std::string& v) { c.pool.rho_re = parse_double(f, v); }},
        {"pool.rho_cross", [](ScenarioConfig& c, const std::string& f, const std::string& v) { c.pool.rho_cross = parse_double(f, v); }},
        {"bank.leverage", [](ScenarioConfig& c, const std::string& f, const std::string& v) { c.bank.leverage = parse_double(f, v); }},
        {"bank.re_loan_weight", [](ScenarioConfig& c, const std::string& f, const std::string& v) { c.bank.re_loan_weight = parse_double(f, v); }},
        {"re_firm.leverage", [](ScenarioConfig& c, const std::string& f, const std::string& v) { c.re_firm.leverage = parse_double(f, v); }},
        {"structuring.pd_aaa", [](ScenarioConfig& c, const std::string& f, const std::string& v) { c.structuring.pd_aaa = parse_double(f, v); }},
        {"structuring.alpha_max", [](ScenarioConfig& c, const std::string& f, const std::string& v) { c.structuring.alpha_max = parse_double(f, v); }},
        {"structuring.constraint", [](ScenarioConfig& c, const std::string&, const std::string& v) { c.structuring.constraint = v; }},
        {"mc.paths", [](ScenarioConfig& c, const std::string& f, const std::string& v) { c.mc.paths = parse_int(f, v); }},
        {"mc.seed", [](ScenarioConfig& c, const std::string& f, const std::string& v) { c.mc.seed = static_cast<std::uint64_t>(parse_int(f, v)); }},
        {"mc.chunk", [](ScenarioConfig& c, const std::string& f, const std::string& v) { c.mc.chunk = parse_int(f, v); }},
    };
    return setters;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& text) {
    ScenarioConfig config;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto comment = line.find_first_of("#;");
        if (comment != std::string::npos) line = line.substr(0, comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw config_error("line " + std::to_string(lineno) +
                                   ": malformed section header '" + line + "'");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("line " + std::to_string(lineno) +
                               ": expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const std::string field = section.empty() ? key : section + "." + key;
        const auto it = field_setters().find(field);
        if (it == field_setters().end())
            throw config_error("unknown config field '" + field + "' (line " +
                               std::to_string(lineno) + ")");
        it->second(config, field, value);
    }
    config.validate();
    return config;
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

std::string serialize_scenario(const ScenarioConfig& config) {
    std::ostringstream os;
    os.precision(17);
    os << "[market]\n"
       << "rate = " << config.market.rate << "\n"
       << "maturity = " << config.market.maturity << "\n\n"
       << "[pool]\n"
       << "n_re = " << config.pool.n_re << "\n"
       << "w_re = " << config.pool.w_re << "\n"
       << "bank_pd_T = " << config.pool.bank_pd_T << "\n"
       << "re_pd_T = " << config.pool.re_pd_T << "\n"
       << "recovery_bank = " << config.pool.recovery_bank << "\n"
       << "recovery_re = " << config.pool.recovery_re << "\n"
       << "rho_bank = " << config.pool.rho_bank << "\n"
       << "rho_re = " << config.pool.rho_re << "\n";
    if (config.pool.rho_cross) os << "rho_cross = " << *config.pool.rho_cross << "\n";
    os << "\n[bank]\n"
       << "leverage = " << config.bank.leverage << "\n"
       << "re_loan_weight = " << config.bank.re_loan_weight << "\n\n"
       << "[re_firm]\n"
       << "leverage = " << config.re_firm.leverage << "\n\n"
       << "[structuring]\n"
       << "pd_aaa = " << config.structuring.pd_aaa << "\n"
       << "alpha_max = " << config.structuring.alpha_max << "\n"
       << "constraint = " << config.structuring.constraint << "\n\n"
       << "[mc]\n"
       << "paths = " << config.mc.paths << "\n"
       << "seed = " << config.mc.seed << "\n"
       << "chunk = " << config.mc.chunk << "\n";
    return os.str();
}

}  // namespace lhpp
