#include "indiff/config.hpp"

#include <cmath>
#include <set>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace indiff {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

using Section = std::map<std::string, std::string>;

std::map<std::string, Section> parse_ini(const std::string& text) {
    std::map<std::string, Section> out;
    std::istringstream in(text);
    std::string line, section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::invalid_argument("config line " + std::to_string(line_no)
                                            + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            out[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(line_no)
                                        + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        if (section.empty())
            throw std::invalid_argument("config line " + std::to_string(line_no)
                                        + ": key outside any [section]");
        out[section][key] = trim(line.substr(eq + 1));
    }
    return out;
}

class SectionReader {
public:
    SectionReader(const std::string& name, const Section* s) : name_(name), sec_(s) {}

    bool present() const { return sec_ != nullptr; }

    std::optional<std::string> raw(const std::string& key) {
        if (!sec_) return std::nullopt;
        auto it = sec_->find(key);
        if (it == sec_->end()) return std::nullopt;
        seen_.insert(key);
        return it->second;
    }

    double number(const std::string& key, double fallback) {
        auto v = raw(key);
        if (!v) return fallback;
        return to_number(key, *v);
    }

    std::optional<double> number_opt(const std::string& key) {
        auto v = raw(key);
        if (!v) return std::nullopt;
        return to_number(key, *v);
    }

    long integer(const std::string& key, long fallback) {
        const double v = number(key, static_cast<double>(fallback));
        if (v != std::floor(v))
            throw std::invalid_argument(path(key) + ": expected an integer");
        return static_cast<long>(v);
    }

    bool boolean(const std::string& key, bool fallback) {
        auto v = raw(key);
        if (!v) return fallback;
        if (*v == "true" || *v == "1" || *v == "yes") return true;
        if (*v == "false" || *v == "0" || *v == "no") return false;
        throw std::invalid_argument(path(key) + ": expected true/false");
    }

    std::string text(const std::string& key, const std::string& fallback) {
        auto v = raw(key);
        return v ? *v : fallback;
    }

    void reject_unknown() const {
        if (!sec_) return;
        for (const auto& [key, value] : *sec_)
            if (!seen_.count(key))
                throw std::invalid_argument(path(key) + ": unknown key");
    }

private:
    double to_number(const std::string& key, const std::string& v) {
        try {
            size_t used = 0;
            const double x = std::stod(v, &used);
            if (used != v.size()) throw std::invalid_argument("");
            return x;
        } catch (...) {
            throw std::invalid_argument(path(key) + ": cannot parse number '" + v + "'");
        }
    }
    std::string path(const std::string& key) const { return name_ + "." + key; }

    std::string name_;
    const Section* sec_;
    std::set<std::string> seen_;
};

std::vector<JumpAtom> parse_atoms(const std::string& text) {
    std::vector<JumpAtom> atoms;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        const auto colon = item.find(':');
        if (colon == std::string::npos)
            throw std::invalid_argument("model.atoms: expected size:mass pairs");
        atoms.push_back({std::stod(item.substr(0, colon)),
                         std::stod(item.substr(colon + 1))});
    }
    if (atoms.empty()) throw std::invalid_argument("model.atoms: empty list");
    return atoms;
}

}  // namespace

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return from_string(buf.str());
}

RunConfig RunConfig::from_string(const std::string& text) {
    const auto sections = parse_ini(text);
    for (const auto& [name, _] : sections)
        if (name != "model" && name != "option" && name != "grid" && name != "run")
            throw std::invalid_argument("unknown config section [" + name + "]");

    auto section = [&](const char* n) {
        auto it = sections.find(n);
        return SectionReader(n, it == sections.end() ? nullptr : &it->second);
    };

    RunConfig cfg;

    SectionReader model = section("model");
    cfg.model.type = model.text("type", "merton");
    if (cfg.model.type != "merton" && cfg.model.type != "atoms")
        throw std::invalid_argument("model.type: must be merton or atoms");
    cfg.model.merton.sigma = model.number("sigma", 0.0);
    cfg.model.merton.intensity = model.number("lambda_m", 0.0);
    cfg.model.merton.jump_mean = model.number("gamma_j", 0.0);
    cfg.model.merton.jump_std = model.number("delta_j", 0.1);
    cfg.model.atoms_sigma = cfg.model.merton.sigma;
    cfg.model.mu = model.number_opt("mu");
    cfg.model.martingale = model.boolean("martingale", !cfg.model.mu.has_value());
    if (cfg.model.mu && cfg.model.martingale)
        throw std::invalid_argument("model: give either mu or martingale=true, not both");
    cfg.model.truncation_mult = model.number("truncation_mult", 8.0);
    cfg.model.apply_memm = model.boolean("apply_memm", true);
    if (auto atoms = model.raw("atoms")) cfg.model.atoms = parse_atoms(*atoms);
    if (cfg.model.type == "atoms" && cfg.model.atoms.empty())
        throw std::invalid_argument("model.atoms: required when type = atoms");
    model.reject_unknown();

    SectionReader option = section("option");
    const std::string kind = option.text("kind", "put");
    if (kind == "put") cfg.option.kind = OptionKind::put;
    else if (kind == "call") cfg.option.kind = OptionKind::call;
    else throw std::invalid_argument("option.kind: must be put or call");
    cfg.option.strike = option.number("strike", 1.0);
    cfg.option.maturity = option.number("maturity", 1.0);
    cfg.option.spot = option.number("spot", 1.0);
    option.reject_unknown();

    SectionReader grid = section("grid");
    cfg.grid.n_time = static_cast<int>(grid.integer("n_time", 40));
    cfg.grid.m_half = static_cast<int>(grid.integer("m_half", 100));
    cfg.grid.k_half = static_cast<int>(grid.integer("k_half", 50));
    cfg.grid.dx = grid.number("dx", 0.02);
    cfg.grid.alpha = grid.number("alpha", 1.0);
    const std::string x0 = grid.text("x0", "auto");
    if (x0 == "auto") {
        cfg.grid_x0_auto = true;
        cfg.grid.x0 = std::log(cfg.option.strike) - cfg.grid.m_half * cfg.grid.dx;
    } else {
        cfg.grid_x0_auto = false;
        cfg.grid.x0 = std::stod(x0);
    }
    grid.reject_unknown();

    SectionReader run = section("run");
    cfg.run.command = run.text("command", "");
    cfg.run.format = run.text("format", "csv");
    cfg.run.out = run.text("out", "");
    cfg.run.seed = static_cast<std::uint64_t>(run.integer("seed", 42));
    cfg.run.threads = static_cast<int>(run.integer("threads", 1));
    cfg.run.with_pide = run.boolean("with_pide", true);
    cfg.run.sweep = run.text("sweep", "");
    run.reject_unknown();

    cfg.validate();
    return cfg;
}

void RunConfig::validate() const {
    if (model.type == "merton") model.merton.validate();
    option.validate();
    grid.validate();
    if (run.format != "csv" && run.format != "json")
        throw std::invalid_argument("run.format: must be csv or json");
    if (run.threads < 1) throw std::invalid_argument("run.threads: must be >= 1");
}

LevyModel RunConfig::build_model() const {
    if (model.type == "merton") {
        MertonParams p = model.merton;
        p.drift = model.martingale ? std::nullopt : model.mu;
        if (!model.martingale && !model.mu)
            throw std::invalid_argument("model: needs mu or martingale=true");
        return LevyModel::merton(p, model.truncation_mult);
    }
    std::optional<double> gamma;
    if (!model.martingale) {
        if (!model.mu) throw std::invalid_argument("model: needs mu or martingale=true");
        // mu is the drift between jumps; convert to the truncated convention
        JumpMeasure nu = JumpMeasure::atoms(model.atoms);
        gamma = *model.mu + nu.moment(1) - nu.mean_above(1.0);
    }
    return LevyModel::from_atoms(model.atoms_sigma, model.atoms, gamma);
}

LevyModel RunConfig::pricing_model() const {
    LevyModel m = build_model();
    if (!model.apply_memm) return m;
    const double phi = find_memm_tilt(m, grid.alpha);
    return tilt_measure(m, grid.alpha, phi);
}

GroupParams RunConfig::group_params() const {
    LevyModel m = pricing_model();
    if (model.type == "merton" && m.measure().tilt() == 0.0)
        return group_params_merton(model.merton);
    return group_params_numeric(m);
}

SweepRequest parse_sweep(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos)
        throw std::invalid_argument("sweep: expected KEY=a:b:n");
    SweepRequest req;
    req.key = trim(text.substr(0, eq));
    const std::string rest = text.substr(eq + 1);
    const auto c1 = rest.find(':');
    const auto c2 = rest.find(':', c1 == std::string::npos ? 0 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
        throw std::invalid_argument("sweep: expected KEY=a:b:n");
    try {
        req.from = std::stod(rest.substr(0, c1));
        req.to = std::stod(rest.substr(c1 + 1, c2 - c1 - 1));
        req.count = std::stoi(rest.substr(c2 + 1));
    } catch (...) {
        throw std::invalid_argument("sweep: cannot parse '" + text + "'");
    }
    if (req.count < 1) throw std::invalid_argument("sweep: n must be >= 1");
    return req;
}

}  // namespace indiff
