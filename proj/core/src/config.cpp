#include "mpbs/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "mpbs/errors.hpp"

namespace mpbs {

namespace {

std::string trim(std::string_view s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string_view::npos) return {};
    const auto end = s.find_last_not_of(" \t\r");
    return std::string(s.substr(begin, end - begin + 1));
}

std::string strip_comment(const std::string& line) {
    const auto pos = line.find_first_of("#;");
    return pos == std::string::npos ? line : line.substr(0, pos);
}

double to_double(const std::string& where, const std::string& text) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
        throw ConfigError(where + ": '" + text + "' is not a finite number");
    }
    return value;
}

long long to_integer(const std::string& where, const std::string& text) {
    long long value = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        throw ConfigError(where + ": '" + text + "' is not an integer");
    }
    return value;
}

bool to_bool(const std::string& where, std::string text) {
    std::transform(text.begin(), text.end(), text.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (text == "true" || text == "yes" || text == "on" || text == "1") return true;
    if (text == "false" || text == "no" || text == "off" || text == "0") return false;
    throw ConfigError(where + ": '" + text + "' is not a boolean");
}

std::vector<double> to_list(const std::string& where, const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const std::string t = trim(item);
        if (t.empty()) throw ConfigError(where + ": empty list entry");
        out.push_back(to_double(where, t));
    }
    return out;
}

class Reader {
public:
    explicit Reader(const IniDocument& doc) : doc_(doc) {}

    std::optional<double> number(const std::string& section, const std::string& key) const {
        if (auto v = doc_.get(section, key)) return to_double(section + "." + key, *v);
        return std::nullopt;
    }
    std::optional<long long> integer(const std::string& section, const std::string& key) const {
        if (auto v = doc_.get(section, key)) return to_integer(section + "." + key, *v);
        return std::nullopt;
    }
    std::optional<bool> flag(const std::string& section, const std::string& key) const {
        if (auto v = doc_.get(section, key)) return to_bool(section + "." + key, *v);
        return std::nullopt;
    }
    std::optional<std::vector<double>> list(const std::string& section, const std::string& key) const {
        if (auto v = doc_.get(section, key)) return to_list(section + "." + key, *v);
        return std::nullopt;
    }
    std::optional<std::string> text(const std::string& section, const std::string& key) const {
        return doc_.get(section, key);
    }
    double required(const std::string& section, const std::string& key) const {
        if (auto v = number(section, key)) return *v;
        throw ConfigError("missing required key " + section + "." + key);
    }

private:
    const IniDocument& doc_;
};

}  // namespace

IniDocument IniDocument::parse(std::istream& in, const std::string& source) {
    IniDocument doc;
    std::string line;
    std::string section;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const std::string body = trim(strip_comment(line));
        if (body.empty()) continue;
        const std::string where = source + ":" + std::to_string(number);
        if (body.front() == '[') {
            if (body.back() != ']' || body.size() < 3) throw ConfigError(where + ": malformed section header");
            section = trim(std::string_view(body).substr(1, body.size() - 2));
            continue;
        }
        const auto eq = body.find('=');
        if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
        if (section.empty()) throw ConfigError(where + ": key outside of any section");
        const std::string key = trim(std::string_view(body).substr(0, eq));
        const std::string value = trim(std::string_view(body).substr(eq + 1));
        if (key.empty()) throw ConfigError(where + ": empty key");
        if (value.empty()) throw ConfigError(where + ": empty value for " + key);
        if (doc.values_[section].count(key)) throw ConfigError(where + ": duplicate key " + key);
        doc.values_[section][key] = value;
    }
    return doc;
}

bool IniDocument::has(const std::string& section, const std::string& key) const {
    return get(section, key).has_value();
}

std::optional<std::string> IniDocument::get(const std::string& section, const std::string& key) const {
    touched_[section][key] = true;
    const auto s = values_.find(section);
    if (s == values_.end()) return std::nullopt;
    const auto k = s->second.find(key);
    if (k == s->second.end()) return std::nullopt;
    return k->second;
}

std::vector<std::string> IniDocument::unused_keys() const {
    std::vector<std::string> out;
    for (const auto& [section, keys] : values_) {
        for (const auto& [key, value] : keys) {
            const auto s = touched_.find(section);
            if (s == touched_.end() || !s->second.count(key)) out.push_back(section + "." + key);
        }
    }
    return out;
}

Domain RunConfig::effective_domain() const {
    if (domain) return *domain;
    return default_domain(instrument, market, domain_sigmas);
}

Resolution RunConfig::resolution() const {
    const Domain d = effective_domain();
    if (timesteps) return size_grid_steps(*timesteps, lambda_squared, market, instrument.tenure, d);
    if (target_courant) return size_grid(*target_courant, lambda_squared, market, instrument.tenure, d);
    throw ConfigError("numerics needs either target_courant or timesteps");
}

void RunConfig::validate() const {
    instrument.validate();
    market.validate();
    mpdata.validate();
    if (!(spot > 0.0)) throw ConfigError("market.spot must be positive");
    if (!(lambda_squared > 0.0)) throw ConfigError("numerics.lambda_squared must be positive");
    if (target_courant && !(*target_courant > 0.0)) {
        throw ConfigError("numerics.target_courant must be positive");
    }
    if (timesteps && *timesteps == 0) throw ConfigError("numerics.timesteps must be positive");
    if (target_courant && timesteps) {
        throw ConfigError("give only one of numerics.target_courant and numerics.timesteps");
    }
    if (!(domain_sigmas > 0.0)) throw ConfigError("numerics.domain_sigmas must be positive");
    if (domain && !(domain->s_min > 0.0 && domain->s_max > domain->s_min)) {
        throw ConfigError("numerics.s_min/s_max must satisfy 0 < s_min < s_max");
    }
    if (binomial_steps < 1) throw ConfigError("numerics.binomial_steps must be positive");
    for (double c : courants) {
        if (!(c > 0.0)) throw ConfigError("numerics.courants entries must be positive");
    }
    for (double t : table_tenures) {
        if (!(t > 0.0)) throw ConfigError("instrument.tenures entries must be positive");
    }
    for (double s : table_spots) {
        if (!(s > 0.0)) throw ConfigError("market.spots entries must be positive");
    }
    for (double l : lambdas) {
        if (!(l > 0.0)) throw ConfigError("numerics.lambdas entries must be positive");
    }
    if (precision < 1 || precision > 17) throw ConfigError("output.precision must be in [1, 17]");
}

RunConfig parse_run_config(std::istream& in, const std::string& source) {
    const IniDocument doc = IniDocument::parse(in, source);
    const Reader read(doc);
    RunConfig cfg;

    const auto kind = read.text("instrument", "kind");
    if (!kind) throw ConfigError("missing required key instrument.kind");
    cfg.instrument.kind = parse_instrument_kind(*kind);
    if (cfg.instrument.kind == InstrumentKind::corridor) {
        cfg.instrument.lower_strike = read.required("instrument", "lower_strike");
        cfg.instrument.upper_strike = read.required("instrument", "upper_strike");
    } else {
        cfg.instrument.strike = read.required("instrument", "strike");
    }
    cfg.instrument.tenure = read.required("instrument", "tenure");
    cfg.instrument.notional = read.number("instrument", "notional").value_or(1.0);

    cfg.market.r = read.required("market", "r");
    cfg.market.sigma = read.required("market", "sigma");
    cfg.spot = read.required("market", "spot");
    if (auto l = read.list("instrument", "tenures")) cfg.table_tenures = *l;
    if (auto l = read.list("market", "spots")) cfg.table_spots = *l;

    cfg.lambda_squared = read.number("numerics", "lambda_squared").value_or(2.0);
    cfg.target_courant = read.number("numerics", "target_courant");
    if (auto n = read.integer("numerics", "timesteps")) {
        if (*n <= 0) throw ConfigError("numerics.timesteps must be positive");
        cfg.timesteps = static_cast<std::size_t>(*n);
    }
    if (auto n = read.integer("numerics", "n_iterations")) cfg.mpdata.n_iterations = static_cast<int>(*n);
    if (auto b = read.flag("numerics", "non_oscillatory")) cfg.mpdata.non_oscillatory = *b;
    if (auto b = read.flag("numerics", "infinite_gauge")) cfg.mpdata.infinite_gauge = *b;
    if (auto b = read.flag("numerics", "third_order")) cfg.mpdata.third_order = *b;
    if (auto e = read.number("numerics", "epsilon")) cfg.mpdata.epsilon = *e;
    cfg.domain_sigmas = read.number("numerics", "domain_sigmas").value_or(kDefaultDomainSigmas);
    const auto s_min = read.number("numerics", "s_min");
    const auto s_max = read.number("numerics", "s_max");
    if (s_min.has_value() != s_max.has_value()) {
        throw ConfigError("numerics.s_min and numerics.s_max must be given together");
    }
    if (s_min) cfg.domain = Domain{*s_min, *s_max};
    if (auto b = read.text("numerics", "boundary")) cfg.boundary = parse_boundary(*b);
    if (auto b = read.flag("numerics", "allow_unstable")) cfg.allow_unstable = *b;
    if (auto n = read.integer("numerics", "binomial_steps")) cfg.binomial_steps = static_cast<int>(*n);
    if (auto l = read.list("numerics", "courants")) cfg.courants = *l;
    if (auto l = read.list("numerics", "lambdas")) cfg.lambdas = *l;

    if (auto p = read.text("output", "csv")) cfg.csv_path = *p;
    if (auto p = read.integer("output", "precision")) cfg.precision = static_cast<int>(*p);

    const auto unused = doc.unused_keys();
    if (!unused.empty()) throw ConfigError(source + ": unknown key " + unused.front());

    cfg.validate();
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    return parse_run_config(in, path.string());
}

}  // namespace mpbs
