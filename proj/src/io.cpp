#include "srbloch/io.hpp"

#include <cerrno>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace srbloch {

namespace fs = std::filesystem;

double parse_time(const std::string& text) {
    std::string s = text;
    double factor = 1.0;
    if (s.size() > 2 && s.compare(s.size() - 2, 2, "ms") == 0) {
        factor = 1e-3;
        s.resize(s.size() - 2);
    } else if (s.size() > 1 && s.back() == 's') {
        s.resize(s.size() - 1);
    }
    std::size_t pos = 0;
    double value = 0.0;
    try {
        value = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw ConfigParse("cannot parse time value '" + text + "'");
    }
    if (pos != s.size()) throw ConfigParse("trailing junk in time value '" + text + "'");
    return value * factor;
}

std::vector<double> SweepSpec::make_grid() const {
    if (points < 3) throw ConfigParse("sweep grid needs >= 3 points");
    if (!(hi > lo) || lo <= 0.0) throw ConfigParse("sweep grid needs 0 < lo < hi");
    return linspace(lo, hi, points);
}

namespace {

const char* const kKnownKinds[] = {"steady",     "sweep-t12",  "sweep-omega1",
                                   "simulate",   "long-pulse", "measure-t1",
                                   "measure-t2"};

bool known_kind(const std::string& k) {
    for (const char* s : kKnownKinds) {
        if (k == s) return true;
    }
    return false;
}

double parse_number(const std::string& value, const std::string& key, int line) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("junk");
        return v;
    } catch (const std::exception&) {
        std::ostringstream os;
        os << "line " << line << ": bad numeric value for key '" << key << "'";
        throw ConfigParse(os.str());
    }
}

void apply_key(ExperimentSpec& e, const std::string& key, const std::string& value,
               int line) {
    auto num = [&] { return parse_number(value, key, line); };
    if (key == "id") {
        e.id = value;
    } else if (key == "kind") {
        e.kind = value;
    } else if (key == "output") {
        e.output = value;
    } else if (key == "larmor_hz") {
        e.params.omega0 = hz_to_rad(num());
        e.params.omega_drive = e.params.omega0;
    } else if (key == "drive_hz") {
        e.params.omega_drive = hz_to_rad(num());
    } else if (key == "rabi_hz") {
        e.params.omega1 = hz_to_rad(num());
    } else if (key == "seq") {
        e.params.s_eq = num();
    } else if (key == "t1") {
        e.params.t1 = parse_time(value);
    } else if (key == "t2") {
        e.params.t2 = parse_time(value);
    } else if (key == "t12") {
        e.params.t1 = e.params.t2 = parse_time(value);
    } else if (key == "control") {
        if (!e.sweep) e.sweep.emplace();
        if (value == "t12") e.sweep->control = SweepControl::T12;
        else if (value == "omega1") e.sweep->control = SweepControl::Omega1;
        else if (value == "t1") e.sweep->control = SweepControl::T1;
        else if (value == "t2") e.sweep->control = SweepControl::T2;
        else {
            std::ostringstream os;
            os << "line " << line << ": unknown sweep control '" << value << "'";
            throw ConfigParse(os.str());
        }
    } else if (key == "grid") {
        if (!e.sweep) e.sweep.emplace();
        const auto c1 = value.find(':');
        const auto c2 = value.rfind(':');
        if (c1 == std::string::npos || c2 == c1) {
            std::ostringstream os;
            os << "line " << line << ": grid must be 'lo:hi:count'";
            throw ConfigParse(os.str());
        }
        e.sweep->lo = parse_number(value.substr(0, c1), key, line);
        e.sweep->hi = parse_number(value.substr(c1 + 1, c2 - c1 - 1), key, line);
        e.sweep->points =
            static_cast<std::size_t>(parse_number(value.substr(c2 + 1), key, line));
    } else if (key == "abs_tol") {
        e.integrator.abs_tol = num();
    } else if (key == "rel_tol") {
        e.integrator.rel_tol = num();
    } else if (key == "noise_seed") {
        e.noise_seed = static_cast<std::uint64_t>(num());
    } else if (key == "noise_sigma") {
        e.noise_sigma = num();
    } else if (key == "label") {
        e.label = num();
    } else {
        std::ostringstream os;
        os << "line " << line << ": unknown key '" << key << "'";
        throw ConfigParse(os.str());
    }
}

void finalize(ExperimentManifest& m) {
    std::vector<std::string> problems;
    std::vector<std::string> seen_ids;
    for (ExperimentSpec& e : m.experiments) {
        if (e.id.empty()) problems.push_back("experiment without id");
        for (const std::string& id : seen_ids) {
            if (id == e.id) problems.push_back("duplicate id '" + e.id + "'");
        }
        seen_ids.push_back(e.id);
        if (!known_kind(e.kind)) {
            problems.push_back("experiment '" + e.id + "': unknown kind '" + e.kind + "'");
        }
        try {
            e.params = validate_params(e.params);
        } catch (const ValidationError& err) {
            problems.push_back("experiment '" + e.id + "': " + err.what());
        }
    }
    if (!problems.empty()) {
        std::string msg = "manifest validation failed:";
        for (const std::string& p : problems) msg += "\n  - " + p;
        throw ValidationFailed(msg);
    }
}

}  // namespace

ExperimentManifest load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoFailure("cannot open manifest '" + path + "'");
    ExperimentManifest m;
    ExperimentSpec* current = nullptr;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto last = line.find_last_not_of(" \t\r");
        std::string body = line.substr(first, last - first + 1);
        if (body.front() == '[') {
            if (body != "[experiment]") {
                std::ostringstream os;
                os << "line " << lineno << ": unknown section '" << body << "'";
                throw ConfigParse(os.str());
            }
            m.experiments.emplace_back();
            current = &m.experiments.back();
            continue;
        }
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            std::ostringstream os;
            os << "line " << lineno << ": expected 'key = value'";
            throw ConfigParse(os.str());
        }
        if (!current) {
            std::ostringstream os;
            os << "line " << lineno << ": key outside [experiment] section";
            throw ConfigParse(os.str());
        }
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t");
            const auto b = s.find_last_not_of(" \t");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        apply_key(*current, trim(body.substr(0, eq)), trim(body.substr(eq + 1)), lineno);
    }
    if (m.experiments.empty()) throw ConfigParse("manifest holds no [experiment] section");
    finalize(m);
    return m;
}

ExperimentManifest builtin_manifest(const std::string& name) {
    // Water/CuSO4 sample set: concentration (mM) -> common relaxation time.
    static const std::pair<double, double> kSamples[] = {
        {40.0, 45.5e-3}, {50.0, 36.5e-3}, {60.0, 28.5e-3},
        {75.0, 25.0e-3}, {100.0, 18.0e-3}};
    static const double kDriveHz[] = {6.3, 5.5, 4.8};
    static const double kFig2T12[] = {18.0e-3, 28.5e-3, 45.5e-3};

    ExperimentManifest m;
    auto base_params = [](double t12, double rabi_hz) {
        SystemParams p;
        p.omega0 = hz_to_rad(400e6);
        p.omega_drive = p.omega0;
        p.omega1 = hz_to_rad(rabi_hz);
        p.t1 = p.t2 = t12;
        p.s_eq = 1.0;
        return validate_params(p);
    };

    if (name == "table1") {
        for (const auto& [conc, t12] : kSamples) {
            ExperimentSpec e;
            std::ostringstream id;
            id << "table1-" << conc << "mM";
            e.id = id.str();
            e.kind = "steady";
            e.params = base_params(t12, 6.3);
            e.label = conc;
            e.output = "table1.csv";
            m.experiments.push_back(std::move(e));
        }
    } else if (name == "fig1") {
        for (double hz : kDriveHz) {
            ExperimentSpec e;
            std::ostringstream id, out;
            id << "fig1-" << hz << "Hz";
            out << "fig1_rabi_" << hz << "Hz.csv";
            e.id = id.str();
            e.kind = "sweep-t12";
            e.params = base_params(25.0e-3, hz);
            // 0.05 ms pitch keeps the grid row nearest the peak within 1e-6
            // of the closed-form maximum.
            e.sweep = SweepSpec{SweepControl::T12, 5.0, 80.0, 1501};  // ms
            e.label = hz;
            e.output = out.str();
            m.experiments.push_back(std::move(e));
        }
    } else if (name == "fig2") {
        for (double t12 : kFig2T12) {
            ExperimentSpec e;
            std::ostringstream id, out;
            id << "fig2-" << t12 * 1e3 << "ms";
            out << "fig2_t12_" << t12 * 1e3 << "ms.csv";
            e.id = id.str();
            e.kind = "sweep-omega1";
            e.params = base_params(t12, 6.3);
            e.sweep = SweepSpec{SweepControl::Omega1, 0.5, 30.0, 301};  // Hz
            e.label = t12 * 1e3;
            e.output = out.str();
            m.experiments.push_back(std::move(e));
        }
    } else {
        throw ConfigParse("unknown built-in manifest '" + name + "'");
    }
    finalize(m);
    return m;
}

namespace {

void atomic_write(const std::string& path, const std::string& content) {
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoFailure("cannot open '" + tmp.string() + "' for writing");
        out << content;
        if (!out) throw IoFailure("write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) throw IoFailure("rename to '" + path + "' failed: " + ec.message());
}

std::string fmt(double x) {
    std::ostringstream os;
    os << std::setprecision(14) << x;
    return os.str();
}

}  // namespace

void write_sweep_csv(const SweepResult& r, double s_eq, const std::string& path) {
    if (r.grid.empty()) throw EmptyGrid("write_sweep_csv: empty sweep");
    const std::string unit = (r.control == SweepControl::Omega1) ? "rad/s" : "s";
    std::ostringstream os;
    os << "# control,unit,response_eta_over_seq\n";
    const double norm = (s_eq != 0.0) ? std::abs(s_eq) : 1.0;
    for (std::size_t i = 0; i < r.grid.size(); ++i) {
        os << fmt(r.grid[i]) << ',' << unit << ',' << fmt(r.response[i] / norm) << '\n';
    }
    if (r.extremum.kind == ExtremumKind::Max) {
        os << "# extremum_kind,max\n";
        os << "# extremum_location," << fmt(r.extremum.location) << '\n';
        os << "# extremum_eta_over_seq," << fmt(r.extremum.value / norm) << '\n';
    } else {
        os << "# extremum_kind,none\n";
    }
    atomic_write(path, os.str());
}

void write_series_csv(const std::vector<double>& t, const std::vector<double>& v,
                      const std::string& t_name, const std::string& v_name,
                      const std::string& path) {
    std::ostringstream os;
    os << "# " << t_name << ',' << v_name << '\n';
    for (std::size_t i = 0; i < t.size(); ++i) {
        os << fmt(t[i]) << ',' << fmt(v[i]) << '\n';
    }
    atomic_write(path, os.str());
}

}  // namespace srbloch
