#include "monofourier/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "monofourier/errors.hpp"

namespace mfourier {

std::string to_string(Problem p) {
    switch (p) {
    case Problem::European: return "european";
    case Problem::Bermudan: return "bermudan";
    case Problem::MeanVariance: return "meanvar";
    case Problem::ConstantMix: return "constmix";
    }
    return "?";
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& field, const std::string& v) {
    double out = 0.0;
    const char* end = v.data() + v.size();
    auto [p, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || p != end || !std::isfinite(out))
        throw ConfigError(field + ": not a number: '" + v + "'");
    return out;
}

std::uint64_t to_u64(const std::string& field, const std::string& v) {
    std::uint64_t out = 0;
    const char* end = v.data() + v.size();
    auto [p, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || p != end) throw ConfigError(field + ": not a non-negative integer: '" + v + "'");
    return out;
}

struct Entry {
    std::string value;
    int line;
};

using Table = std::map<std::string, Entry>; // "section.key"

Problem parse_problem(const std::string& v) {
    if (v == "european") return Problem::European;
    if (v == "bermudan") return Problem::Bermudan;
    if (v == "meanvar") return Problem::MeanVariance;
    if (v == "constmix") return Problem::ConstantMix;
    throw ConfigError("experiment.problem: unknown problem '" + v + "'");
}

AsymptoticForm parse_guard(const std::string& field, const std::string& v) {
    if (v == "zero") return AsymptoticForm::Zero;
    if (v == "exp") return AsymptoticForm::ExpX;
    if (v == "flat") return AsymptoticForm::Flat;
    throw ConfigError(field + ": expected zero, exp, flat or none, got '" + v + "'");
}

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys{
        "experiment.problem", "experiment.method",  "experiment.source",
        "model.sigma",        "model.rate",         "model.drift",
        "model.lambda",       "model.jumps",        "model.p_up",
        "model.eta_up",       "model.eta_down",     "model.jump_mean",
        "model.jump_stdev",   "contract.payoff",    "contract.strike",
        "contract.spot",      "contract.expiry",    "contract.monitoring",
        "contract.dividend",  "grid.nodes",         "grid.b_nodes",
        "grid.half_width",    "grid.guard",         "grid.x_below",
        "grid.x_above",       "tolerance.eps1",     "tolerance.eps2",
        "tolerance.alpha_max", "portfolio.target",  "portfolio.target_mean",
        "portfolio.injection", "portfolio.periods", "portfolio.stock_fraction",
        "mc.n_sim",           "mc.seed",            "output.dir",
    };
    return keys;
}

Table read_table(std::istream& in, const std::string& origin) {
    Table t;
    std::string line, section;
    int lineno = 0;
    auto fail = [&](const std::string& msg) {
        throw ConfigError(origin + ":" + std::to_string(lineno) + ": " + msg);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail("unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) fail("empty section name");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail("expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) fail("missing key");
        if (section.empty()) fail("key '" + key + "' outside any section");
        const std::string full = section + "." + key;
        if (!known_keys().count(full)) fail("unknown key '" + full + "'");
        if (t.count(full)) fail("duplicate key '" + full + "'");
        t.emplace(full, Entry{value, lineno});
    }
    return t;
}

class Reader {
public:
    explicit Reader(const Table& t) : t_(t) {}

    const std::string* find(const std::string& k) const {
        const auto it = t_.find(k);
        return it == t_.end() ? nullptr : &it->second.value;
    }
    const std::string& need(const std::string& k) const {
        const auto* v = find(k);
        if (!v) throw ConfigError(k + ": required field is missing");
        return *v;
    }
    double num(const std::string& k) const { return to_double(k, need(k)); }
    void num(const std::string& k, double& out) const {
        if (const auto* v = find(k)) out = to_double(k, *v);
    }

private:
    const Table& t_;
};

JumpSpec read_jumps(const Reader& r) {
    const std::string* kind = r.find("model.jumps");
    const std::string k = kind ? *kind : "kou";
    if (k == "kou") return KouJumps{r.num("model.p_up"), r.num("model.eta_up"), r.num("model.eta_down")};
    if (k == "merton") return MertonJumps{r.num("model.jump_mean"), r.num("model.jump_stdev")};
    throw ConfigError("model.jumps: expected kou or merton, got '" + k + "'");
}

} // namespace

std::vector<std::size_t> parse_ladder(const std::string& text) {
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) throw ConfigError("empty entry in size list '" + text + "'");
        out.push_back(static_cast<std::size_t>(to_u64("size list", item)));
    }
    return out;
}

void validate_ladder(const std::vector<std::size_t>& ladder, const std::string& field) {
    if (ladder.empty()) throw ConfigError(field + ": refinement ladder is empty");
    for (std::size_t i = 0; i < ladder.size(); ++i) {
        if (!is_power_of_two(ladder[i]) || ladder[i] < 4)
            throw ConfigError(field + ": " + std::to_string(ladder[i]) + " is not a power of two >= 4");
        if (i > 0 && ladder[i] <= ladder[i - 1])
            throw ConfigError(field + ": ladder must be strictly increasing");
    }
}

ProcessParams ExperimentConfig::process() const {
    if (problem == Problem::European || problem == Problem::Bermudan)
        return ProcessParams::pricing(model.sigma, model.rate, model.lambda, model.jumps);
    return ProcessParams::real_world(model.sigma, model.drift, model.lambda, model.jumps);
}

void ExperimentConfig::validate() const {
    validate_ladder(nodes, "grid.nodes");
    (void)process();
    tol.validate();
    if (!(contract.expiry > 0.0)) throw ConfigError("contract.expiry must be positive");
    if (!(half_width > 0.0)) throw ConfigError("grid.half_width must be positive");
    if (!(contract.spot > 0.0)) throw ConfigError("contract.spot must be positive");
    if (problem == Problem::Bermudan) {
        if (!(contract.monitoring > 0.0)) throw ConfigError("contract.monitoring must be positive");
        (void)period_count(contract.expiry, contract.monitoring);
        if (!(contract.dividend >= 0.0)) throw ConfigError("contract.dividend must be non-negative");
    }
    if (problem == Problem::MeanVariance) {
        if (b_nodes.size() != nodes.size())
            throw ConfigError("grid.b_nodes: needs one entry per grid.nodes entry");
        for (std::size_t i = 0; i < b_nodes.size(); ++i) {
            (void)BGrid::level_for(b_nodes[i]);
            if (i > 0 && b_nodes[i] <= b_nodes[i - 1])
                throw ConfigError("grid.b_nodes: ladder must be strictly increasing");
        }
    }
    if (problem == Problem::MeanVariance || problem == Problem::ConstantMix) {
        if (portfolio.periods == 0) throw ConfigError("portfolio.periods must be positive");
        if (!(portfolio.injection >= 0.0)) throw ConfigError("portfolio.injection must be non-negative");
        if (!(portfolio.stock_fraction >= 0.0 && portfolio.stock_fraction <= 1.0))
            throw ConfigError("portfolio.stock_fraction must lie in [0, 1]");
        if (!(portfolio.x_below > 0.0) || !(portfolio.x_above > 0.0))
            throw ConfigError("grid.x_below and grid.x_above must be positive");
    }
}

ExperimentConfig parse_config_text(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    const Table table = read_table(in, origin);
    const Reader r(table);
    ExperimentConfig cfg;

    cfg.problem = parse_problem(r.need("experiment.problem"));
    if (const auto* m = r.find("experiment.method")) cfg.method = parse_method(*m);
    if (const auto* s = r.find("experiment.source")) cfg.source = *s;

    const bool pricing = cfg.problem == Problem::European || cfg.problem == Problem::Bermudan;
    cfg.model.sigma = r.num("model.sigma");
    cfg.model.lambda = r.num("model.lambda");
    cfg.model.rate = r.num("model.rate");
    if (!pricing) cfg.model.drift = r.num("model.drift");
    if (cfg.model.lambda > 0.0 || r.find("model.jumps")) cfg.model.jumps = read_jumps(r);

    if (const auto* p = r.find("contract.payoff")) {
        if (*p == "call") cfg.contract.payoff = PayoffKind::Call;
        else if (*p == "put") cfg.contract.payoff = PayoffKind::Put;
        else throw ConfigError("contract.payoff: expected call or put, got '" + *p + "'");
    }
    r.num("contract.strike", cfg.contract.strike);
    r.num("contract.spot", cfg.contract.spot);
    if (pricing) cfg.contract.expiry = r.num("contract.expiry");
    else r.num("contract.expiry", cfg.contract.expiry);
    r.num("contract.monitoring", cfg.contract.monitoring);
    r.num("contract.dividend", cfg.contract.dividend);

    cfg.nodes = parse_ladder(r.need("grid.nodes"));
    if (const auto* b = r.find("grid.b_nodes")) cfg.b_nodes = parse_ladder(*b);
    r.num("grid.half_width", cfg.half_width);
    r.num("grid.x_below", cfg.portfolio.x_below);
    r.num("grid.x_above", cfg.portfolio.x_above);
    if (const auto* g = r.find("grid.guard"))
        cfg.guard = *g == "none" ? std::nullopt : std::optional(parse_guard("grid.guard", *g));
    else if (cfg.problem == Problem::Bermudan)
        cfg.guard = AsymptoticForm::Zero;

    r.num("tolerance.eps1", cfg.tol.eps1);
    r.num("tolerance.eps2", cfg.tol.eps2);
    if (const auto* a = r.find("tolerance.alpha_max"))
        cfg.tol.alpha_max = static_cast<std::size_t>(to_u64("tolerance.alpha_max", *a));

    r.num("portfolio.target", cfg.portfolio.target);
    r.num("portfolio.target_mean", cfg.portfolio.target_mean);
    r.num("portfolio.injection", cfg.portfolio.injection);
    r.num("portfolio.stock_fraction", cfg.portfolio.stock_fraction);
    if (const auto* p = r.find("portfolio.periods"))
        cfg.portfolio.periods = static_cast<std::size_t>(to_u64("portfolio.periods", *p));

    if (const auto* n = r.find("mc.n_sim")) cfg.n_sim = static_cast<std::size_t>(to_u64("mc.n_sim", *n));
    if (const auto* s = r.find("mc.seed")) cfg.seed = to_u64("mc.seed", *s);
    if (const auto* d = r.find("output.dir")) cfg.out_dir = *d;

    cfg.tol.horizon = cfg.contract.expiry;
    cfg.validate();
    return cfg;
}

ExperimentConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path.string());
}

MVConfig meanvar_config(const ExperimentConfig& cfg, std::size_t nx, std::size_t b_nodes) {
    MVConfig mv;
    mv.horizon = cfg.contract.expiry;
    mv.periods = cfg.portfolio.periods;
    mv.injections.assign(mv.periods, cfg.portfolio.injection);
    mv.rate = cfg.model.rate;
    mv.params = cfg.process();
    mv.target = cfg.portfolio.target;
    mv.x_min = std::log(cfg.contract.spot) - cfg.portfolio.x_below;
    mv.x_max = std::log(cfg.contract.spot) + cfg.portfolio.x_above;
    mv.nx = nx;
    mv.b_level = BGrid::level_for(b_nodes);
    mv.tol = cfg.tol;
    mv.tol.horizon = mv.horizon;
    mv.validate();
    return mv;
}

} // namespace mfourier
