#include "nsul/config.hpp"

#include "nsul/csvio.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nsul {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
    std::ostringstream os;
    os << origin << ":" << line << ": " << msg;
    throw std::invalid_argument(os.str());
}

double to_double(const std::string& origin, int line, const std::string& key,
                 const std::string& v) {
    try {
        size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return d;
    } catch (const std::exception&) {
        fail(origin, line, "key '" + key + "': not a number: '" + v + "'");
    }
}

int to_int(const std::string& origin, int line, const std::string& key,
           const std::string& v) {
    try {
        size_t pos = 0;
        int i = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return i;
    } catch (const std::exception&) {
        fail(origin, line, "key '" + key + "': not an integer: '" + v + "'");
    }
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

}  // namespace

SolverConfig ExperimentConfig::solver() const {
    SolverConfig s;
    s.nu = nu;
    s.dt = dt;
    s.t_end = t_end;
    s.scheme = scheme;
    return s;
}

ExperimentConfig parse_config_text(const std::string& text, const std::string& origin) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string line;
    int ln = 0;
    while (std::getline(in, line)) {
        ++ln;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) fail(origin, ln, "expected key=value: '" + line + "'");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));

        if (key == "grid.n1") cfg.grid.n1 = to_int(origin, ln, key, val);
        else if (key == "grid.n2") cfg.grid.n2 = to_int(origin, ln, key, val);
        else if (key == "grid.l1") cfg.grid.l1 = to_double(origin, ln, key, val);
        else if (key == "grid.l2") cfg.grid.l2 = to_double(origin, ln, key, val);
        else if (key == "physics.nu") cfg.nu = to_double(origin, ln, key, val);
        else if (key == "physics.u_inf1") cfg.u_inf[0] = to_double(origin, ln, key, val);
        else if (key == "physics.u_inf2") cfg.u_inf[1] = to_double(origin, ln, key, val);
        else if (key == "ic.family") cfg.ic.family = val;
        else if (key == "ic.amplitude") cfg.ic.amplitude = to_double(origin, ln, key, val);
        else if (key == "ic.u1") cfg.ic.u1 = to_double(origin, ln, key, val);
        else if (key == "ic.u2") cfg.ic.u2 = to_double(origin, ln, key, val);
        else if (key == "ic.sigma") cfg.ic.sigma = to_double(origin, ln, key, val);
        else if (key == "ic.circulation")
            cfg.ic.circulation = to_double(origin, ln, key, val);
        else if (key == "ic.kmin") cfg.ic.kmin = to_int(origin, ln, key, val);
        else if (key == "ic.kmax") cfg.ic.kmax = to_int(origin, ln, key, val);
        else if (key == "ic.seed")
            cfg.ic.seed = static_cast<std::uint64_t>(
                std::stoull(val));
        else if (key == "scheme.name") {
            if (val == "picard") cfg.scheme = Scheme::picard;
            else if (val == "etd_vorticity") cfg.scheme = Scheme::etd_vorticity;
            else if (val == "heat") cfg.scheme = Scheme::heat;
            else fail(origin, ln, "scheme.name: unknown scheme '" + val + "'");
        } else if (key == "scheme.dt") cfg.dt = to_double(origin, ln, key, val);
        else if (key == "scheme.t_end") cfg.t_end = to_double(origin, ln, key, val);
        else if (key == "monitors.list") cfg.monitors = split_list(val);
        else if (key == "monitors.c7") cfg.c7 = to_double(origin, ln, key, val);
        else if (key == "output.every") cfg.output_every = to_int(origin, ln, key, val);
        else if (key == "output.dir") cfg.out_dir = val;
        else if (key == "output.snapshot_times") {
            cfg.snapshot_times.clear();
            for (const auto& s : split_list(val))
                cfg.snapshot_times.push_back(to_double(origin, ln, key, s));
        } else if (key == "output.ladder_kind") cfg.ladder_kind = val;
        else if (key == "output.ensemble_size")
            cfg.ensemble_size = to_int(origin, ln, key, val);
        else
            fail(origin, ln, "unknown key '" + key + "'");
    }
    cfg.grid.validate();
    if (!(cfg.nu > 0.0)) fail(origin, 0, "physics.nu must be positive");
    if (!(cfg.dt > 0.0)) fail(origin, 0, "scheme.dt must be positive");
    if (!(cfg.t_end >= 0.0)) fail(origin, 0, "scheme.t_end must be nonnegative");
    if (cfg.output_every < 1) fail(origin, 0, "output.every must be >= 1");
    for (const auto& m : cfg.monitors)
        if (m != "thm1" && m != "thm2" && m != "ul_energy" && m != "enstrophy" &&
            m != "thm3" && m != "heat_ul")
            fail(origin, 0, "monitors.list: unknown monitor '" + m + "'");
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path);
}

std::string config_echo(const ExperimentConfig& cfg) {
    std::ostringstream os;
    os << "grid.n1 = " << cfg.grid.n1 << "\n";
    os << "grid.n2 = " << cfg.grid.n2 << "\n";
    os << "grid.l1 = " << format_double(cfg.grid.l1) << "\n";
    os << "grid.l2 = " << format_double(cfg.grid.l2) << "\n";
    os << "physics.nu = " << format_double(cfg.nu) << "\n";
    os << "physics.u_inf1 = " << format_double(cfg.u_inf[0]) << "\n";
    os << "physics.u_inf2 = " << format_double(cfg.u_inf[1]) << "\n";
    os << "ic.family = " << cfg.ic.family << "\n";
    os << "ic.amplitude = " << format_double(cfg.ic.amplitude) << "\n";
    os << "ic.u1 = " << format_double(cfg.ic.u1) << "\n";
    os << "ic.u2 = " << format_double(cfg.ic.u2) << "\n";
    os << "ic.sigma = " << format_double(cfg.ic.sigma) << "\n";
    os << "ic.circulation = " << format_double(cfg.ic.circulation) << "\n";
    os << "ic.kmin = " << cfg.ic.kmin << "\n";
    os << "ic.kmax = " << cfg.ic.kmax << "\n";
    os << "ic.seed = " << cfg.ic.seed << "\n";
    os << "scheme.name = "
       << (cfg.scheme == Scheme::picard
               ? "picard"
               : cfg.scheme == Scheme::heat ? "heat" : "etd_vorticity")
       << "\n";
    os << "scheme.dt = " << format_double(cfg.dt) << "\n";
    os << "scheme.t_end = " << format_double(cfg.t_end) << "\n";
    if (!cfg.monitors.empty()) {
        os << "monitors.list = ";
        for (size_t i = 0; i < cfg.monitors.size(); ++i)
            os << (i ? "," : "") << cfg.monitors[i];
        os << "\n";
    }
    os << "monitors.c7 = " << format_double(cfg.c7) << "\n";
    os << "output.every = " << cfg.output_every << "\n";
    os << "output.dir = " << cfg.out_dir << "\n";
    if (!cfg.snapshot_times.empty()) {
        os << "output.snapshot_times = ";
        for (size_t i = 0; i < cfg.snapshot_times.size(); ++i)
            os << (i ? "," : "") << format_double(cfg.snapshot_times[i]);
        os << "\n";
    }
    os << "output.ladder_kind = " << cfg.ladder_kind << "\n";
    os << "output.ensemble_size = " << cfg.ensemble_size << "\n";
    return os.str();
}

}  // namespace nsul
