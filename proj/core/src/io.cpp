#include "temple/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "temple/errors.hpp"

namespace temple::io {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, sep)) out.push_back(field);
    return out;
}

double parse_double(const std::string& s, const std::string& path) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw Error(ErrorCode::BadInput,
                    "malformed numeric field '" + s + "' in " + path);
    }
}

std::vector<std::vector<double>> load_csv(const std::string& path,
                                          std::size_t columns) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::BadInput, "cannot open " + path);
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw Error(ErrorCode::BadInput, "empty file " + path);
    }
    if (split(line, ',').size() != columns) {
        throw Error(ErrorCode::BadInput, "unexpected column count in " + path);
    }
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto fields = split(line, ',');
        if (fields.size() != columns) {
            throw Error(ErrorCode::BadInput,
                        "unexpected column count in " + path);
        }
        std::vector<double> row;
        row.reserve(columns);
        for (const auto& f : fields) row.push_back(parse_double(f, path));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw Error(ErrorCode::BadInput, "no data rows in " + path);
    }
    return rows;
}

ordered_json control_to_json(const BoundaryControl& c) {
    ordered_json j;
    j["t"] = c.times;
    j["w"] = ordered_json::array();
    for (const auto& v : c.values) j["w"].push_back(v);
    return j;
}

BoundaryControl control_from_json(const ordered_json& j) {
    BoundaryControl c;
    c.times = j.at("t").get<std::vector<double>>();
    for (const auto& v : j.at("w")) c.values.push_back(v.get<WVec>());
    if (c.times.size() != c.values.size() || c.times.empty()) {
        throw Error(ErrorCode::BadInput, "malformed control schedule");
    }
    return c;
}

ordered_json profile_to_json(const Profile& p) {
    ordered_json j;
    j["a"] = p.a();
    j["b"] = p.b();
    j["breaks"] = p.breakpoints();
    j["values"] = ordered_json::array();
    for (const auto& v : p.values()) j["values"].push_back(v);
    return j;
}

}  // namespace

Profile load_profile_csv(const std::string& path, double a, double b, int n) {
    auto rows = load_csv(path, static_cast<std::size_t>(n) + 1);
    // Drop the sentinel row at x = b when present.
    if (rows.size() > 1 && rows.back()[0] >= b - 1e-12) rows.pop_back();

    std::vector<double> breaks;
    std::vector<WVec> values;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const double x = rows[r][0];
        if (r == 0) {
            if (std::abs(x - a) > 1e-12) {
                throw Error(ErrorCode::BadInput,
                            "first row must start at x = a in " + path);
            }
        } else {
            const double prev = breaks.empty() ? a : breaks.back();
            if (!(x > prev) || !(x < b)) {
                throw Error(ErrorCode::BadInput,
                            "breakpoints must increase inside (a,b) in " + path);
            }
            breaks.push_back(x);
        }
        values.emplace_back(rows[r].begin() + 1, rows[r].end());
    }
    return Profile(a, b, std::move(breaks), std::move(values));
}

void save_profile_csv(const std::string& path, const Profile& profile) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::BadInput, "cannot write " + path);
    out << "x_left";
    for (int i = 1; i <= profile.dim(); ++i) out << ",w" << i;
    out << "\n";
    auto row = [&](double x, const WVec& v) {
        out << fmt(x);
        for (double c : v) out << "," << fmt(c);
        out << "\n";
    };
    row(profile.a(), profile.values()[0]);
    for (std::size_t k = 0; k < profile.breakpoints().size(); ++k) {
        row(profile.breakpoints()[k], profile.values()[k + 1]);
    }
    row(profile.b(), profile.values().back());
}

BoundaryControl load_control_csv(const std::string& path, int n) {
    auto rows = load_csv(path, static_cast<std::size_t>(n) + 1);
    BoundaryControl c;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const double t = rows[r][0];
        if (r == 0 && std::abs(t) > 1e-12) {
            throw Error(ErrorCode::BadInput,
                        "first control segment must start at t = 0 in " + path);
        }
        if (r > 0 && !(t > c.times.back())) {
            throw Error(ErrorCode::BadInput,
                        "control times must increase in " + path);
        }
        c.times.push_back(r == 0 ? 0.0 : t);
        c.values.emplace_back(rows[r].begin() + 1, rows[r].end());
    }
    return c;
}

void save_control_csv(const std::string& path, const BoundaryControl& control) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::BadInput, "cannot write " + path);
    out << "t";
    const int n = control.values.empty()
                      ? 0
                      : static_cast<int>(control.values[0].size());
    for (int i = 1; i <= n; ++i) out << ",w" << i;
    out << "\n";
    for (std::size_t k = 0; k < control.times.size(); ++k) {
        out << fmt(control.times[k]);
        for (double c : control.values[k]) out << "," << fmt(c);
        out << "\n";
    }
}

void save_event_log_jsonl(const std::string& path,
                          const std::vector<Event>& events) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::BadInput, "cannot write " + path);
    for (const auto& ev : events) {
        ordered_json j;
        j["t"] = ev.time;
        switch (ev.kind) {
            case EventKind::Interaction: j["kind"] = "interaction"; break;
            case EventKind::BoundaryHit: j["kind"] = "boundary-hit"; break;
            case EventKind::ControlJumpLeft: j["kind"] = "control-jump-left"; break;
            case EventKind::ControlJumpRight: j["kind"] = "control-jump-right"; break;
        }
        j["x"] = ev.position;
        auto fams = ordered_json::array();
        for (int f : ev.families) fams.push_back(f + 1);
        j["families"] = fams;
        j["pre_fronts"] = ev.pre_fronts;
        j["post_fronts"] = ev.post_fronts;
        out << j.dump() << "\n";
    }
}

void save_segments_csv(const std::string& path,
                       const std::vector<FrontSegment>& segments) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::BadInput, "cannot write " + path);
    out << "t0,x0,t1,x1,family,kind\n";
    for (const auto& s : segments) {
        out << fmt(s.t0) << "," << fmt(s.x0) << "," << fmt(s.t1) << ","
            << fmt(s.x1) << "," << s.family + 1 << ","
            << (s.kind == FrontKind::Shock ? "shock" : "rarefaction") << "\n";
    }
}

std::string validation_report_json(const ValidationReport& report) {
    ordered_json j;
    j["pass"] = report.pass;
    j["checks"] = ordered_json::array();
    for (const auto& c : report.checks) {
        ordered_json cj;
        cj["name"] = c.name;
        cj["pass"] = c.pass;
        if (!c.detail.empty()) cj["witness"] = c.detail;
        j["checks"].push_back(cj);
    }
    if (report.bounds) {
        j["lambda_min"] = report.bounds->lambda_min;
        j["lambda_max"] = report.bounds->lambda_max;
    }
    return j.dump(2) + "\n";
}

std::string oleinik_report_json(const OleinikReport& report, int n_nu) {
    ordered_json j;
    j["pass"] = report.pass;
    j["required_C"] = report.required_C;
    j["worst_margin"] = report.worst_margin;
    j["n_nu"] = n_nu;
    j["slack"] = report.slack;
    if (report.worst.family >= 0) {
        ordered_json w;
        w["family"] = report.worst.family + 1;
        w["time_probe"] = report.worst.time_probe;
        w["t"] = report.worst.t;
        w["x"] = report.worst.x;
        w["y"] = report.worst.y;
        w["increment"] = report.worst.increment;
        w["bound"] = report.worst.bound;
        j["worst"] = w;
    }
    return j.dump(2) + "\n";
}

std::string oleinik_report_text(const OleinikReport& report, int n_nu) {
    std::ostringstream os;
    os << (report.pass ? "[PASS]" : "[FAIL]")
       << " one-sided decay estimates\n"
       << "  required C   : " << report.required_C << "\n"
       << "  worst margin : " << report.worst_margin << "\n"
       << "  slack        : " << report.slack << " (N_nu = " << n_nu << ")\n";
    if (report.worst.family >= 0) {
        os << "  worst pair   : family " << report.worst.family + 1 << ", "
           << (report.worst.time_probe ? "time section" : "space pair")
           << " (" << report.worst.x << ", " << report.worst.y << ") at t = "
           << report.worst.t << ", increment " << report.worst.increment
           << " vs bound " << report.worst.bound << "\n";
    }
    return os.str();
}

std::string k_rho_report_json(const KRhoReport& report, double rho,
                              const std::string& mode) {
    ordered_json j;
    j["member"] = report.member;
    j["rho"] = rho;
    j["mode"] = mode;
    j["min_rho"] = report.min_rho;
    if (report.worst.family >= 0) {
        ordered_json w;
        w["family"] = report.worst.family + 1;
        w["x"] = report.worst.x;
        w["y"] = report.worst.y;
        w["quotient"] = report.worst.quotient;
        w["bound"] = report.worst.bound;
        j["worst"] = w;
    }
    return j.dump(2) + "\n";
}

std::string plan_json(const SynthesisPlan& plan, double a, double b) {
    ordered_json j;
    j["interval"] = {a, b};
    j["nu"] = plan.grid.nu;
    j["T"] = plan.T;
    j["tau"] = plan.tau;
    j["rho_prime"] = plan.constants.rho_prime;
    j["constants"] = {{"C", plan.constants.oleinik_C},
                      {"C1", plan.constants.spread_C1}};
    j["omega"] = plan.omega;
    j["omega_prime"] = plan.omega_prime;
    j["omega_tilde"] = plan.omega_tilde;
    j["controls"] = {{"a", control_to_json(plan.control_a)},
                     {"b", control_to_json(plan.control_b)}};
    j["target_quantized"] = profile_to_json(plan.target_quantized);
    return j.dump(2) + "\n";
}

PlanData load_plan_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::BadInput, "cannot open " + path);
    ordered_json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw Error(ErrorCode::BadInput,
                    std::string("malformed plan JSON: ") + e.what());
    }
    try {
        PlanData pd;
        pd.a = j.at("interval").at(0).get<double>();
        pd.b = j.at("interval").at(1).get<double>();
        pd.tau = j.at("tau").get<double>();
        pd.nu = j.at("nu").get<int>();
        pd.control_a = control_from_json(j.at("controls").at("a"));
        pd.control_b = control_from_json(j.at("controls").at("b"));
        return pd;
    } catch (const ordered_json::exception& e) {
        throw Error(ErrorCode::BadInput,
                    std::string("plan JSON missing fields: ") + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::BadInput, "cannot write " + path);
    out << content;
}

}  // namespace temple::io
