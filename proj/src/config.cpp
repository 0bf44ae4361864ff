#include "conwave/config.hpp"

#include <fstream>
#include <sstream>

#include "conwave/csv.hpp"

namespace conwave {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& value, const std::string& where) {
    try {
        std::size_t used = 0;
        double v = std::stod(value, &used);
        if (used != value.size())
            throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(where + ": expected a number, got '" + value + "'");
    }
}

std::size_t parse_size(const std::string& value, const std::string& where) {
    try {
        std::size_t used = 0;
        long long v = std::stoll(value, &used);
        if (used != value.size() || v < 0)
            throw std::invalid_argument("bad count");
        return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
        throw ConfigError(where + ": expected a non-negative integer, got '" + value + "'");
    }
}

int parse_int(const std::string& value, const std::string& where) {
    try {
        std::size_t used = 0;
        int v = std::stoi(value, &used);
        if (used != value.size())
            throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(where + ": expected an integer, got '" + value + "'");
    }
}

bool parse_bool(const std::string& value, const std::string& where) {
    if (value == "on" || value == "true" || value == "1")
        return true;
    if (value == "off" || value == "false" || value == "0")
        return false;
    throw ConfigError(where + ": expected on/off, got '" + value + "'");
}

std::vector<std::string> parse_list(const std::string& value) {
    std::vector<std::string> out;
    std::stringstream ss(value);
    std::string token;
    while (ss >> token)
        out.push_back(token);
    return out;
}

} // namespace

ExperimentConfig ExperimentConfig::parse(const std::string& text,
                                         const std::string& origin) {
    ExperimentConfig config;
    config.checks.run.clear();

    std::istringstream in(text);
    std::string line, section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t comment = line.find('#');
        if (comment != std::string::npos)
            line = line.substr(0, comment);
        line = trim(line);
        if (line.empty())
            continue;

        std::string where = origin + ":" + std::to_string(line_no);
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(where + ": malformed section header '" + line + "'");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(where + ": expected 'key = value', got '" + line + "'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        std::string full = where + ": key '" + section + "." + key + "'";

        if (section == "model") {
            if (key == "N") config.model.N = parse_int(value, full);
            else if (key == "a") config.model.a = parse_double(value, full);
            else if (key == "perturbation") config.model.perturbation = parse_bool(value, full);
            else throw ConfigError(full + " is not recognized");
        } else if (section == "data") {
            if (key == "family") config.data.family = value;
            else if (key == "u0") config.data.u0 = parse_double(value, full);
            else if (key == "u1") config.data.u1 = parse_double(value, full);
            else if (key == "amplitude") config.data.amplitude = parse_double(value, full);
            else if (key == "sigma") config.data.sigma = parse_double(value, full);
            else if (key == "t_ref") config.data.t_ref = parse_double(value, full);
            else if (key == "epsilon") config.data.epsilon = parse_double(value, full);
            else throw ConfigError(full + " is not recognized");
        } else if (section == "physical") {
            if (key == "nodes") config.physical.nodes = parse_size(value, full);
            else if (key == "domain_end") config.physical.domain_end = parse_double(value, full);
            else if (key == "cfl") config.physical.cfl = parse_double(value, full);
            else if (key == "threshold") config.physical.threshold = parse_double(value, full);
            else if (key == "horizon") config.physical.horizon = parse_double(value, full);
            else if (key == "shrink_factor") config.physical.shrink_factor = parse_double(value, full);
            else if (key == "snapshot_stride") config.physical.snapshot_stride = parse_size(value, full);
            else throw ConfigError(full + " is not recognized");
        } else if (section == "similarity") {
            if (key == "nodes") config.similarity.nodes = parse_size(value, full);
            else if (key == "cfl") config.similarity.cfl = parse_double(value, full);
            else if (key == "s_window") config.similarity.s_window = parse_double(value, full);
            else if (key == "report_ds") config.similarity.report_ds = parse_double(value, full);
            else if (key == "start_fraction") config.similarity.start_fraction = parse_double(value, full);
            else if (key == "residual_window") config.similarity.residual_window = parse_double(value, full);
            else if (key == "residual_stride") config.similarity.residual_stride = parse_size(value, full);
            else throw ConfigError(full + " is not recognized");
        } else if (section == "functionals") {
            if (key == "eta") config.functionals.eta = parse_double(value, full);
            else if (key == "b") config.functionals.b = parse_double(value, full);
            else if (key == "theta") config.functionals.theta = parse_double(value, full);
            else if (key == "sigma") config.functionals.sigma = parse_double(value, full);
            else throw ConfigError(full + " is not recognized");
        } else if (section == "checks") {
            if (key == "run") config.checks.run = parse_list(value);
            else if (key == "burn_in") config.checks.burn_in = parse_double(value, full);
            else if (key == "slope_tol") config.checks.slope_tol = parse_double(value, full);
            else if (key == "rel_allowance") config.checks.rel_allowance = parse_double(value, full);
            else if (key == "identity_tol") config.checks.identity_tol = parse_double(value, full);
            else if (key == "rate_span") config.checks.rate_span = parse_double(value, full);
            else throw ConfigError(full + " is not recognized");
        } else if (section == "output") {
            if (key == "directory") config.output.directory = value;
            else if (key == "seed") config.output.seed = parse_size(value, full);
            else if (key == "trajectory_stride") config.output.trajectory_stride = parse_size(value, full);
            else throw ConfigError(full + " is not recognized");
        } else if (section.empty()) {
            throw ConfigError(where + ": key '" + key + "' appears before any [section]");
        } else {
            throw ConfigError(where + ": section '" + section + "' is not recognized");
        }
    }
    config.validate();
    return config;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str(), path);
}

std::string ExperimentConfig::serialize() const {
    std::ostringstream out;
    auto d = [](double v) { return format_double(v); };
    out << "[model]\n";
    out << "N = " << model.N << "\n";
    out << "a = " << d(model.a) << "\n";
    out << "perturbation = " << (model.perturbation ? "on" : "off") << "\n";
    out << "\n[data]\n";
    out << "family = " << data.family << "\n";
    out << "u0 = " << d(data.u0) << "\n";
    out << "u1 = " << d(data.u1) << "\n";
    out << "amplitude = " << d(data.amplitude) << "\n";
    out << "sigma = " << d(data.sigma) << "\n";
    out << "t_ref = " << d(data.t_ref) << "\n";
    out << "epsilon = " << d(data.epsilon) << "\n";
    out << "\n[physical]\n";
    out << "nodes = " << physical.nodes << "\n";
    out << "domain_end = " << d(physical.domain_end) << "\n";
    out << "cfl = " << d(physical.cfl) << "\n";
    out << "threshold = " << d(physical.threshold) << "\n";
    out << "horizon = " << d(physical.horizon) << "\n";
    out << "shrink_factor = " << d(physical.shrink_factor) << "\n";
    out << "snapshot_stride = " << physical.snapshot_stride << "\n";
    out << "\n[similarity]\n";
    out << "nodes = " << similarity.nodes << "\n";
    out << "cfl = " << d(similarity.cfl) << "\n";
    out << "s_window = " << d(similarity.s_window) << "\n";
    out << "report_ds = " << d(similarity.report_ds) << "\n";
    out << "start_fraction = " << d(similarity.start_fraction) << "\n";
    out << "residual_window = " << d(similarity.residual_window) << "\n";
    out << "residual_stride = " << similarity.residual_stride << "\n";
    out << "\n[functionals]\n";
    out << "eta = " << d(functionals.eta) << "\n";
    out << "b = " << d(functionals.b) << "\n";
    out << "theta = " << d(functionals.theta) << "\n";
    out << "sigma = " << d(functionals.sigma) << "\n";
    out << "\n[checks]\n";
    out << "run =";
    for (const auto& name : checks.run)
        out << ' ' << name;
    out << "\n";
    out << "burn_in = " << d(checks.burn_in) << "\n";
    out << "slope_tol = " << d(checks.slope_tol) << "\n";
    out << "rel_allowance = " << d(checks.rel_allowance) << "\n";
    out << "identity_tol = " << d(checks.identity_tol) << "\n";
    out << "rate_span = " << d(checks.rate_span) << "\n";
    out << "\n[output]\n";
    out << "directory = " << output.directory << "\n";
    out << "seed = " << output.seed << "\n";
    out << "trajectory_stride = " << output.trajectory_stride << "\n";
    return out.str();
}

void ExperimentConfig::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out)
        throw ConfigError("cannot write config file '" + path + "'");
    out << serialize();
}

void ExperimentConfig::validate() const {
    if (model.N < 2)
        throw ConfigError("config: model.N must be >= 2");
    if (model.perturbation && !(model.a > 1.0))
        throw ConfigError("config: model.a must be > 1");
    const std::string& family = data.family;
    if (family != "constant" && family != "gaussian" && family != "self_similar" &&
        family != "steady" && family != "zero")
        throw ConfigError("config: data.family '" + family + "' is not recognized");
    if (physical.nodes < 9)
        throw ConfigError("config: physical.nodes must be >= 9");
    if (!(physical.cfl > 0.0) || physical.cfl > 1.0)
        throw ConfigError("config: physical.cfl must lie in (0, 1]");
    if (similarity.nodes < 9)
        throw ConfigError("config: similarity.nodes must be >= 9");
    if (!(similarity.cfl > 0.0) || similarity.cfl > 0.5)
        throw ConfigError("config: similarity.cfl must lie in (0, 0.5]");
    if (!(similarity.start_fraction > 0.0) || !(similarity.start_fraction < 1.0))
        throw ConfigError("config: similarity.start_fraction must lie in (0, 1)");
    if (similarity.residual_stride < 1)
        throw ConfigError("config: similarity.residual_stride must be >= 1");
    if (!(functionals.eta > 0.0) || !(functionals.eta <= 1.0))
        throw ConfigError("config: functionals.eta must lie in (0, 1]");
    if (!(functionals.b > 1.0) || !(functionals.b < model.a))
        throw ConfigError("config: functionals.b must lie in (1, model.a)");
}

} // namespace conwave
