#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

#include "dwalk/error.hpp"
#include "dwalk/experiment.hpp"
#include "dwalk/format.hpp"
#include "dwalk/rng.hpp"

namespace dwalk {

namespace {

const std::map<std::string, ExperimentKind>& kind_names() {
    static const std::map<std::string, ExperimentKind> names{
        {"pi-convergence", ExperimentKind::pi_convergence},
        {"cover-convergence", ExperimentKind::cover_convergence},
        {"mixing-scan", ExperimentKind::mixing_scan},
        {"z-ratio", ExperimentKind::z_ratio},
        {"contraction", ExperimentKind::contraction},
        {"connectivity-threshold", ExperimentKind::connectivity_threshold},
    };
    return names;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(std::size_t line, const std::string& key, const std::string& what) {
    throw ValidationError("spec line " + std::to_string(line) + ", key '" + key + "': " + what);
}

double parse_double(const std::string& v, std::size_t line, const std::string& key) {
    double out = 0.0;
    auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size() || !std::isfinite(out)) {
        fail(line, key, "expected a finite number, got '" + v + "'");
    }
    return out;
}

std::uint64_t parse_uint(const std::string& v, std::size_t line, const std::string& key) {
    std::uint64_t out = 0;
    auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) {
        fail(line, key, "expected a non-negative integer, got '" + v + "'");
    }
    return out;
}

std::vector<GridPoint> parse_grid(const std::string& v, std::size_t line, ExperimentKind kind) {
    std::vector<GridPoint> grid;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        GridPoint pt;
        const auto colon = item.find(':');
        pt.n = parse_uint(trim(item.substr(0, colon)), line, "grid");
        if (colon == std::string::npos) {
            if (kind != ExperimentKind::connectivity_threshold) {
                fail(line, "grid", "entry '" + item + "' needs the form n:d");
            }
            pt.d = 0.0;
        } else {
            const std::string dv = trim(item.substr(colon + 1));
            if (dv == "ln") {
                pt.d_is_log_n = true;
            } else {
                pt.d = parse_double(dv, line, "grid");
            }
        }
        grid.push_back(pt);
    }
    return grid;
}

} // namespace

ExperimentKind parse_experiment_kind(const std::string& name) {
    auto it = kind_names().find(name);
    if (it == kind_names().end()) throw ValidationError("unknown experiment kind '" + name + "'");
    return it->second;
}

std::string to_string(ExperimentKind kind) {
    for (const auto& [name, k] : kind_names()) {
        if (k == kind) return name;
    }
    return "?";
}

double GridPoint::effective_d() const { return d_is_log_n ? std::log(static_cast<double>(n)) : d; }

double GridPoint::p() const { return edge_probability(n, effective_d()); }

std::string ExperimentSpec::canonical() const {
    std::ostringstream os;
    os << "kind=" << to_string(kind) << "\n";
    os << "grid=";
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (i) os << ",";
        os << grid[i].n << ":" << (grid[i].d_is_log_n ? std::string("ln") : format_real(grid[i].d));
    }
    os << "\nruns=" << runs_per_point << "\nmaster_seed=" << master_seed << "\nmethod=" << to_string(method)
       << "\nepsilon=" << format_real(epsilon) << "\nwalks=" << walks << "\npairs=" << pairs
       << "\nstationary_tol=" << format_real(stationary_tol)
       << "\nmix_threshold=" << (mix_threshold ? format_real(*mix_threshold) : std::string("auto"))
       << "\neta=" << format_real(eta) << "\nz_mode=" << (z_up ? "up" : "low") << "\nwindow=" << format_real(window)
       << "\n";
    return os.str();
}

ExperimentSpec parse_spec(const std::string& text) {
    ExperimentSpec spec;
    std::map<std::string, std::pair<std::size_t, std::string>> entries;
    std::istringstream in(text);
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail(line_no, line, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) fail(line_no, key, "empty key");
        if (auto it = entries.find(key); it != entries.end()) {
            fail(line_no, key, "duplicate key (first defined on line " + std::to_string(it->second.first) + ")");
        }
        entries[key] = {line_no, value};
    }

    static const std::vector<std::string> known{"kind",  "grid",  "runs",           "master_seed",   "output",
                                                "method", "epsilon", "walks",       "pairs",         "stationary_tol",
                                                "mix_threshold", "eta", "z_mode",   "window"};
    for (const auto& [key, lv] : entries) {
        if (std::find(known.begin(), known.end(), key) == known.end()) fail(lv.first, key, "unknown key");
    }

    auto kind_it = entries.find("kind");
    if (kind_it == entries.end()) throw ValidationError("spec: missing required key 'kind'");
    try {
        spec.kind = parse_experiment_kind(kind_it->second.second);
    } catch (const ValidationError& e) {
        fail(kind_it->second.first, "kind", e.what());
    }
    auto grid_it = entries.find("grid");
    if (grid_it == entries.end()) throw ValidationError("spec: missing required key 'grid'");
    spec.grid = parse_grid(grid_it->second.second, grid_it->second.first, spec.kind);

    for (const auto& [key, lv] : entries) {
        const auto& [line, v] = lv;
        if (key == "runs") spec.runs_per_point = parse_uint(v, line, key);
        else if (key == "master_seed") spec.master_seed = parse_uint(v, line, key);
        else if (key == "output") spec.output = v;
        else if (key == "method") {
            try {
                spec.method = parse_gen_method(v);
            } catch (const ValidationError& e) {
                fail(line, key, e.what());
            }
        } else if (key == "epsilon") spec.epsilon = parse_double(v, line, key);
        else if (key == "walks") spec.walks = parse_uint(v, line, key);
        else if (key == "pairs") spec.pairs = parse_uint(v, line, key);
        else if (key == "stationary_tol") spec.stationary_tol = parse_double(v, line, key);
        else if (key == "mix_threshold") {
            if (v != "auto") spec.mix_threshold = parse_double(v, line, key);
        } else if (key == "eta") spec.eta = parse_double(v, line, key);
        else if (key == "z_mode") {
            if (v != "low" && v != "up") fail(line, key, "expected low or up");
            spec.z_up = v == "up";
        } else if (key == "window") spec.window = parse_double(v, line, key);
    }

    try {
        validate(spec);
    } catch (const ValidationError& e) {
        // Attach the line of the key most likely responsible.
        const std::string msg = e.what();
        for (const auto& [key, lv] : entries) {
            if (msg.rfind(key + ":", 0) == 0) fail(lv.first, key, msg.substr(key.size() + 2));
        }
        throw;
    }
    return spec;
}

void validate(const ExperimentSpec& spec) {
    if (spec.grid.empty()) throw ValidationError("grid: must contain at least one point");
    if (spec.runs_per_point < 1) throw ValidationError("runs: must be at least 1");
    for (std::size_t i = 0; i < spec.grid.size(); ++i) {
        const auto& pt = spec.grid[i];
        const std::string where = "point " + std::to_string(i) + " (n=" + std::to_string(pt.n) + ")";
        if (pt.n < 16) throw ValidationError("grid: " + where + ": n must be at least 16");
        const bool has_d = pt.d_is_log_n || spec.kind != ExperimentKind::connectivity_threshold || pt.d != 0.0;
        if (has_d && !(pt.effective_d() > 1.0)) {
            throw ValidationError("grid: " + where + ": d must exceed 1 (np = d ln n must lie above the strong-"
                                  "connectivity threshold for the cover-time asymptotics)");
        }
    }
    if (!(spec.epsilon >= 0.0 && spec.epsilon < 1.0)) throw ValidationError("epsilon: must lie in [0,1)");
    if (spec.walks < 1) throw ValidationError("walks: must be at least 1");
    if (spec.pairs < 1) throw ValidationError("pairs: must be at least 1");
    if (!(spec.stationary_tol > 0.0)) throw ValidationError("stationary_tol: must be positive");
    if (spec.mix_threshold && !(*spec.mix_threshold > 0.0)) throw ValidationError("mix_threshold: must be positive");
    if (!(spec.eta > 0.0 && spec.eta <= 1.0 / 250.0)) throw ValidationError("eta: must lie in (0, 1/250]");
    if (!(spec.window > 0.0)) throw ValidationError("window: must be positive");
}

std::uint64_t run_seed(const ExperimentSpec& spec, std::size_t point_index, std::size_t run_index) {
    return derive_seed(spec.master_seed, point_index, run_index);
}

} // namespace dwalk
