#include "floquet/cli.hpp"

#include "floquet/bounds.hpp"
#include "floquet/error.hpp"
#include "floquet/oracle.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <set>
#include <thread>

namespace floquet::cli {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

// JSON has no NaN or infinity; such values are written as null.
json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::ostream& log_stream(const Output& out) { return out.log ? *out.log : std::cout; }

void say(const Output& out, const std::string& line)
{
    if (!out.quiet)
        log_stream(out) << line << '\n';
}

std::filesystem::path prepare(const Output& out)
{
    std::filesystem::path dir(out.dir);
    std::filesystem::create_directories(dir);
    return dir;
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw Error("cannot write " + path.string());
    f << text;
}

void write_json(const std::filesystem::path& path, const json& doc) { write_text(path, doc.dump(2) + "\n"); }

json drive_json(const DriveSpec& d)
{
    json hs = json::array();
    for (const auto& h : d.harmonics())
        hs.push_back(json::array({h.n, h.f.real(), h.f.imag()}));
    return {{"omega", d.omega()}, {"harmonics", hs}};
}

void append_table(std::string& csv, const std::string& name, const FourierSeries& s)
{
    for (int m = -s.m_max(); m <= s.m_max(); ++m)
        csv += name + "," + std::to_string(m) + "," + format_double(s[m].real()) + "," + format_double(s[m].imag()) + "\n";
}

double get_positive(const json& j, const char* key, double fallback)
{
    if (!j.contains(key))
        return fallback;
    const double v = j.at(key).get<double>();
    if (!(v > 0.0))
        throw Error(std::string("config: ") + key + " must be positive");
    return v;
}

int get_int(const json& j, const char* key, int fallback, int lo)
{
    if (!j.contains(key))
        return fallback;
    const int v = j.at(key).get<int>();
    if (v < lo)
        throw Error(std::string("config: ") + key + " must be at least " + std::to_string(lo));
    return v;
}

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where)
{
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key()))
            throw Error("config: unknown key '" + it.key() + "' in " + where);
}

DriveSpec parse_drive(const json& j)
{
    reject_unknown(j, {"omega", "harmonics", "cos_sin"}, "drive");
    const double omega = get_positive(j, "omega", 1.0);
    if (j.contains("cos_sin")) {
        const auto& cs = j.at("cos_sin");
        if (!cs.is_array() || cs.size() != 2)
            throw Error("config: drive.cos_sin must be [phi1, phi2]");
        return DriveSpec::cos_sin(omega, cs[0].get<double>(), cs[1].get<double>());
    }
    std::vector<Harmonic> hs;
    if (j.contains("harmonics")) {
        for (const auto& h : j.at("harmonics")) {
            if (!h.is_array() || h.size() != 3)
                throw Error("config: each harmonic is [n, re, im]");
            hs.push_back({h[0].get<int>(), cplx(h[1].get<double>(), h[2].get<double>())});
        }
    }
    return DriveSpec(omega, std::move(hs));
}

int thread_count()
{
    int n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    if (const char* env = std::getenv("FLOQUET_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1)
            n = v;
    }
    return n;
}

template <class Fn>
void parallel_for(int count, Fn&& fn)
{
    const int workers = std::min(thread_count(), std::max(count, 1));
    std::atomic<int> next{0};
    auto body = [&] {
        for (int i = next++; i < count; i = next++)
            fn(i);
    };
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w)
        pool.emplace_back(body);
    body();
    for (auto& t : pool)
        t.join();
}

struct Check {
    std::string name;
    double value;
    double threshold;
    bool pass;
};

} // namespace

std::string format_double(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

SolveOptions RunConfig::solve_options() const
{
    SolveOptions o;
    o.order = order;
    o.m_max = m_max;
    o.branch = branch;
    o.tol_case = tol.tol_case;
    o.propagator.p_max = p_max;
    o.propagator.cap = mode_cap;
    o.propagator.tol_res_rel = tol.tol_res;
    return o;
}

RunConfig parse_config(const json& doc)
{
    if (!doc.is_object())
        throw Error("config: top level must be an object");
    reject_unknown(doc, {"drive", "epsilon", "order", "m_max", "p_max", "mode_cap", "tolerances", "grid", "trace",
                         "alpha_branch", "sweep", "validate", "bounds"},
                   "top level");
    if (!doc.contains("drive"))
        throw Error("config: missing drive");
    RunConfig c;
    c.drive = parse_drive(doc.at("drive"));
    c.epsilon = doc.value("epsilon", 0.0);
    c.order = get_int(doc, "order", c.order, 1);
    c.m_max = get_int(doc, "m_max", c.m_max, 0);
    c.p_max = get_int(doc, "p_max", c.p_max, 1);
    c.mode_cap = get_int(doc, "mode_cap", c.mode_cap, 1);
    c.grid = get_int(doc, "grid", c.grid, 8);
    if (doc.contains("tolerances")) {
        const auto& t = doc.at("tolerances");
        reject_unknown(t, {"case", "unit", "res", "integrator"}, "tolerances");
        c.tol.tol_case = get_positive(t, "case", c.tol.tol_case);
        c.tol.tol_unit = get_positive(t, "unit", c.tol.tol_unit);
        c.tol.tol_res = get_positive(t, "res", c.tol.tol_res);
        c.tol.integrator = get_positive(t, "integrator", c.tol.integrator);
    }
    if (doc.contains("trace")) {
        const auto& t = doc.at("trace");
        reject_unknown(t, {"periods", "points_per_period"}, "trace");
        c.trace_periods = get_positive(t, "periods", c.trace_periods);
        c.trace_points_per_period = get_int(t, "points_per_period", c.trace_points_per_period, 1);
    }
    if (doc.contains("alpha_branch")) {
        const auto b = doc.at("alpha_branch").get<std::string>();
        if (b == "principal")
            c.branch = AlphaBranch::Principal;
        else if (b == "negated")
            c.branch = AlphaBranch::Negated;
        else
            throw Error("config: alpha_branch must be \"principal\" or \"negated\"");
    }
    if (doc.contains("sweep")) {
        const auto& s = doc.at("sweep");
        reject_unknown(s, {"kind", "from", "to", "points", "angle"}, "sweep");
        c.sweep.kind = s.value("kind", c.sweep.kind);
        if (c.sweep.kind != "amplitude" && c.sweep.kind != "epsilon")
            throw Error("config: sweep.kind must be \"amplitude\" or \"epsilon\"");
        c.sweep.from = s.value("from", 0.0);
        c.sweep.to = s.value("to", c.sweep.from);
        c.sweep.points = get_int(s, "points", 1, 1);
        c.sweep.angle = s.value("angle", 0.0);
    }
    if (doc.contains("validate")) {
        const auto& v = doc.at("validate");
        reject_unknown(v, {"tol_riccati", "tol_oracle", "tol_consistency", "tol_initial", "tol_im_omega",
                           "tol_symbolic", "tol_schrodinger", "oracle_periods", "oracle_points_per_period"},
                       "validate");
        auto& o = c.validate;
        o.tol_riccati = get_positive(v, "tol_riccati", o.tol_riccati);
        o.tol_oracle = get_positive(v, "tol_oracle", o.tol_oracle);
        o.tol_consistency = get_positive(v, "tol_consistency", o.tol_consistency);
        o.tol_initial = get_positive(v, "tol_initial", o.tol_initial);
        o.tol_im_omega = get_positive(v, "tol_im_omega", o.tol_im_omega);
        o.tol_symbolic = get_positive(v, "tol_symbolic", o.tol_symbolic);
        o.tol_schrodinger = get_positive(v, "tol_schrodinger", o.tol_schrodinger);
        o.oracle_periods = get_positive(v, "oracle_periods", o.oracle_periods);
        o.oracle_points_per_period = get_int(v, "oracle_points_per_period", o.oracle_points_per_period, 1);
    }
    if (doc.contains("bounds")) {
        const auto& b = doc.at("bounds");
        reject_unknown(b, {"n_max", "catalan_max", "constants", "chi", "m_range", "cutoff"}, "bounds");
        auto& o = c.bounds;
        o.n_max = get_int(b, "n_max", o.n_max, 3);
        o.catalan_max = get_int(b, "catalan_max", o.catalan_max, 2);
        o.m_range = get_int(b, "m_range", o.m_range, 0);
        o.cutoff = get_int(b, "cutoff", o.cutoff, 100);
        if (b.contains("constants")) {
            o.constants.clear();
            for (const auto& p : b.at("constants")) {
                if (!p.is_array() || p.size() != 2)
                    throw Error("config: bounds.constants entries are [C1, C2]");
                o.constants.emplace_back(p[0].get<double>(), p[1].get<double>());
            }
        }
        if (b.contains("chi"))
            o.chi = b.at("chi").get<std::vector<double>>();
    }
    return c;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream f(path);
    if (!f)
        throw Error("config: cannot open " + path);
    try {
        return parse_config(json::parse(f));
    } catch (const json::exception& e) {
        throw Error(std::string("config: ") + e.what());
    }
}

int cmd_classify(const RunConfig& cfg, const Output& out)
{
    const auto dir = prepare(out);
    const QData qd = compute_qdata(cfg.drive, cfg.m_max, cfg.tol.tol_case);
    const Classification c = classify(cfg.drive, qd, cfg.tol.tol_case);
    json doc = {{"command", "classify"},
                {"drive", drive_json(cfg.drive)},
                {"gamma_f", qd.gamma_f},
                {"M_q2", to_json(qd.mean_q2)},
                {"abs_M_q2", c.abs_mean_q2},
                {"M_Q1", qd.mean_Q1 ? to_json(*qd.mean_Q1) : json(nullptr)},
                {"abs_M_Q1", c.abs_mean_Q1 ? json(*c.abs_mean_Q1) : json(nullptr)},
                {"threshold", c.threshold},
                {"case", to_string(c.label)},
                {"m_max", qd.m_max},
                {"phi", qd.phi},
                {"calN", qd.calN}};
    if (!cfg.drive.empty()) {
        const double chi = fit_chi(qd.Q);
        doc["chi"] = chi;
        doc["Q_decay_constant"] = num(decay_fit(qd.Q, chi).constant);
        doc["Q2_decay_constant"] = num(decay_fit(qd.Q2, chi).constant);
    }
    write_json(dir / "classify.json", doc);

    std::string csv = "m,re_Q,im_Q,re_Q2,im_Q2\n";
    for (int m = -qd.m_max; m <= qd.m_max; ++m)
        csv += std::to_string(m) + "," + format_double(qd.Q[m].real()) + "," + format_double(qd.Q[m].imag()) + ","
               + format_double(qd.Q2[m].real()) + "," + format_double(qd.Q2[m].imag()) + "\n";
    write_text(dir / "q_tables.csv", csv);

    say(out, "case " + to_string(c.label) + "  |M(q^2)| = " + format_double(c.abs_mean_q2)
                 + (c.abs_mean_Q1 ? "  |M(Q1)| = " + format_double(*c.abs_mean_Q1) : std::string()));
    return c.label == CaseLabel::Unsupported ? kUnsupported : kOk;
}

int cmd_solve(const RunConfig& cfg, const Output& out)
{
    const auto dir = prepare(out);
    const FloquetSolution s = solve(cfg.drive, cfg.epsilon, cfg.solve_options());
    const auto& p = s.prop;

    const double T = p.period();
    const int rows = static_cast<int>(std::lround(cfg.trace_periods * cfg.trace_points_per_period));
    std::string trace = "t,re_U11,im_U11,re_U12,im_U12,unitarity_defect\n";
    double worst_unit = 0.0;
    for (int j = 0; j <= rows; ++j) {
        const double t = T * j / cfg.trace_points_per_period;
        const Mat2 U = evaluate_U(p, t);
        const double du = unitarity_defect(U);
        worst_unit = std::max(worst_unit, du);
        trace += format_double(t) + "," + format_double(U.a11.real()) + "," + format_double(U.a11.imag()) + ","
                 + format_double(U.a12.real()) + "," + format_double(U.a12.imag()) + "," + format_double(du) + "\n";
    }
    write_text(dir / "trace.csv", trace);

    std::string tables = "table,m,re,im\n";
    for (int n = 1; n <= s.ps.order; ++n)
        append_table(tables, (s.ps.case_label == CaseLabel::CaseII ? "E" : "C") + std::to_string(n), s.ps.C(n));
    for (int n = 1; n <= s.ps.order; ++n)
        append_table(tables, "G" + std::to_string(n), s.ps.Gn(n));
    append_table(tables, "H", p.H);
    append_table(tables, "R", p.R);
    append_table(tables, "Rm2", p.Rm2);
    append_table(tables, "S", p.S);
    append_table(tables, "V", p.V);
    append_table(tables, "u11_minus", p.u11_minus);
    append_table(tables, "u11_plus", p.u11_plus);
    append_table(tables, "u12_minus", p.u12_minus);
    append_table(tables, "u12_plus", p.u12_plus);
    write_text(dir / "tables.csv", tables);

    json series = json::array();
    for (const auto& z : secular_frequency_series(s.ps))
        series.push_back(to_json(z));
    double radius = kNaN;
    if (s.ps.order >= 4)
        radius = radius_estimate(s.ps);
    const double residual = riccati_residual(s.g, cfg.drive, cfg.epsilon, cfg.grid);

    json doc = {{"command", "solve"},
                {"drive", drive_json(cfg.drive)},
                {"case", to_string(s.ps.case_label)},
                {"epsilon", cfg.epsilon},
                {"order", s.ps.order},
                {"epsilon_power_step", s.ps.epsilon_power_step},
                {"m_max", s.qd.m_max},
                {"Omega", to_json(p.Omega)},
                {"Omega_series", series},
                {"gamma_eps", to_json(p.gamma_eps)},
                {"sigma0", to_json(p.sigma0)},
                {"g0", to_json(p.g0)},
                {"radius", num(radius)},
                {"riccati_residual", residual},
                {"unitarity_defect", worst_unit},
                {"initial_defect", (evaluate_U(p, 0.0) - Mat2::identity()).frobenius()},
                {"error_budget", std::max(p.error_budget, s.ps.truncation_budget())}};
    if (s.ps.case_label == CaseLabel::CaseI)
        doc["alpha1"] = to_json(s.ps.alpha1);
    else
        doc["calR"] = to_json(s.ps.calR);
    if (std::isfinite(radius) && std::abs(cfg.epsilon) > radius)
        doc["warning"] = "epsilon exceeds the estimated radius";
    write_json(dir / "summary.json", doc);

    say(out, "case " + to_string(s.ps.case_label) + "  Omega = " + format_double(p.Omega.real()) + " + "
                 + format_double(p.Omega.imag()) + "i  unitarity defect " + format_double(worst_unit));
    if (doc.contains("warning"))
        say(out, "warning: epsilon exceeds the estimated radius " + format_double(radius));
    return kOk;
}

int cmd_validate(const RunConfig& cfg, const Output& out)
{
    const auto dir = prepare(out);
    const auto& v = cfg.validate;
    const FloquetSolution s = solve(cfg.drive, cfg.epsilon, cfg.solve_options());
    const auto& p = s.prop;
    const double T = p.period();
    std::vector<Check> checks;
    auto add = [&](std::string name, double value, double threshold) {
        checks.push_back({std::move(name), value, threshold, value <= threshold});
    };

    add("riccati_residual", riccati_residual(s.g, cfg.drive, cfg.epsilon, cfg.grid), v.tol_riccati);
    add("schrodinger_residual", schrodinger_residual(p, 0.0, T, cfg.grid + 1), v.tol_schrodinger);
    add("unitarity_defect",
        max_unitarity_defect(p, 0.0, cfg.trace_periods * T,
                             static_cast<int>(cfg.trace_periods * cfg.trace_points_per_period) + 1),
        cfg.tol.tol_unit);
    add("initial_defect", (evaluate_U(p, 0.0) - Mat2::identity()).frobenius(), v.tol_initial);
    add("floquet_consistency",
        std::max({floquet_consistency(p, 0.3), floquet_consistency(p, 1.7), floquet_consistency(p, 9.2)}),
        v.tol_consistency);

    std::vector<double> ts;
    const int n = static_cast<int>(std::lround(v.oracle_periods * v.oracle_points_per_period));
    for (int j = 0; j <= n; ++j)
        ts.push_back(T * j / v.oracle_points_per_period);
    const auto orc = integrate_propagator(Hamiltonian2{cfg.drive, cfg.epsilon}, ts, cfg.tol.integrator);
    double worst = 0.0;
    for (std::size_t j = 0; j < ts.size(); ++j)
        worst = std::max(worst, (evaluate_U(p, ts[j]) - orc[j].U).frobenius());
    add("oracle_difference", worst, v.tol_oracle);

    add("im_omega", std::abs(p.Omega.imag()) / std::max(1.0, std::abs(p.Omega)), v.tol_im_omega);

    const BoundsReport br = bounds_report(s.qd, s.ps, &p);
    checks.push_back({"decay_constants_finite", br.all_finite ? 0.0 : 1.0, 0.0, br.all_finite});

    if (s.ps.case_label == CaseLabel::CaseI && !cfg.drive.empty()) {
        const int N = std::min(3, s.ps.order);
        const auto sym = symbolic_small_order(cfg.drive, N, 4, cfg.branch == AlphaBranch::Negated);
        double diff = 0.0;
        for (int k = 1; k <= N; ++k)
            for (int m = -4; m <= 4; ++m)
                diff = std::max(diff, std::abs(sym[static_cast<std::size_t>(k - 1)][m] - s.ps.C(k)[m]));
        add("symbolic_small_order", diff, v.tol_symbolic);
    }

    bool ok = true;
    json arr = json::array();
    for (const auto& c : checks) {
        ok = ok && c.pass;
        arr.push_back({{"name", c.name}, {"value", c.value}, {"threshold", c.threshold}, {"pass", c.pass}});
        say(out, std::string(c.pass ? "PASS " : "FAIL ") + c.name + " " + format_double(c.value)
                     + " <= " + format_double(c.threshold));
    }
    write_json(dir / "validate.json", {{"command", "validate"},
                                       {"drive", drive_json(cfg.drive)},
                                       {"case", to_string(s.ps.case_label)},
                                       {"epsilon", cfg.epsilon},
                                       {"order", s.ps.order},
                                       {"checks", arr},
                                       {"pass", ok}});
    return ok ? kOk : kValidationFailure;
}

int cmd_sweep(const RunConfig& cfg, const Output& out)
{
    const auto dir = prepare(out);
    const auto& sw = cfg.sweep;
    const int points = (sw.from == sw.to) ? 1 : sw.points;
    auto param = [&](int i) { return points == 1 ? sw.from : sw.from + (sw.to - sw.from) * i / (points - 1); };

    struct Row {
        double param = 0, abs_mq2 = kNaN, abs_mQ1 = kNaN, re_om = kNaN, im_om = kNaN, radius = kNaN;
        std::string label;
    };
    std::vector<Row> rows(static_cast<std::size_t>(points));
    const SolveOptions so = cfg.solve_options();

    if (sw.kind == "amplitude") {
        parallel_for(points, [&](int i) {
            Row& r = rows[static_cast<std::size_t>(i)];
            r.param = param(i);
            const auto d = DriveSpec::cos_sin(cfg.drive.omega(), r.param * std::cos(sw.angle),
                                              r.param * std::sin(sw.angle));
            const QData qd = compute_qdata(d, cfg.m_max, cfg.tol.tol_case);
            const Classification c = classify(d, qd, cfg.tol.tol_case);
            r.abs_mq2 = c.abs_mean_q2;
            if (c.abs_mean_Q1)
                r.abs_mQ1 = *c.abs_mean_Q1;
            r.label = to_string(c.label);
            if (c.label == CaseLabel::Unsupported)
                return;
            try {
                const auto ps = solve_perturbative(qd, cfg.order, qd.m_max, cfg.branch);
                const cplx om = secular_frequency(ps, cfg.epsilon);
                r.re_om = om.real();
                r.im_om = om.imag();
                if (ps.order >= 4)
                    r.radius = radius_estimate(ps);
            } catch (const Error&) {
                // A denominator at the edge of the case threshold; the row keeps its NaN entries.
            }
        });
    } else {
        const QData qd = compute_qdata(cfg.drive, cfg.m_max, cfg.tol.tol_case);
        const Classification c = classify(cfg.drive, qd, cfg.tol.tol_case);
        if (c.label == CaseLabel::Unsupported)
            throw Error("unsupported drive class");
        const auto ps = solve_perturbative(qd, so.order, qd.m_max, so.branch);
        const double radius = ps.order >= 4 ? radius_estimate(ps) : kNaN;
        parallel_for(points, [&](int i) {
            Row& r = rows[static_cast<std::size_t>(i)];
            r.param = param(i);
            r.abs_mq2 = c.abs_mean_q2;
            if (c.abs_mean_Q1)
                r.abs_mQ1 = *c.abs_mean_Q1;
            r.label = to_string(c.label);
            const cplx om = secular_frequency(ps, r.param);
            r.re_om = om.real();
            r.im_om = om.imag();
            r.radius = radius;
        });
    }

    std::string csv = "index,parameter,abs_M_q2,abs_M_Q1,case,re_Omega,im_Omega,radius\n";
    for (int i = 0; i < points; ++i) {
        const Row& r = rows[static_cast<std::size_t>(i)];
        csv += std::to_string(i) + "," + format_double(r.param) + "," + format_double(r.abs_mq2) + ","
               + format_double(r.abs_mQ1) + "," + r.label + "," + format_double(r.re_om) + ","
               + format_double(r.im_om) + "," + format_double(r.radius) + "\n";
    }
    write_text(dir / "sweep.csv", csv);
    say(out, "sweep: " + std::to_string(points) + " points written to " + (dir / "sweep.csv").string());
    return kOk;
}

int cmd_bounds(const RunConfig& cfg, const Output& out)
{
    const auto dir = prepare(out);
    const auto& b = cfg.bounds;
    bool ok = true;

    const auto rec = catalan_recursive(b.catalan_max);
    json cat = json::array();
    bool cat_equal = true;
    for (int n = 2; n <= b.catalan_max; ++n) {
        const BigInt closed = catalan(n);
        cat_equal = cat_equal && closed == rec[static_cast<std::size_t>(n)];
        cat.push_back({{"n", n}, {"c", closed.str()}});
    }
    ok = ok && cat_equal;
    const int asym_n = std::min(40, b.catalan_max);
    const double asym = catalan_asymptotic_ratio(asym_n);

    json seqs = json::array();
    for (const auto& [C1, C2] : b.constants) {
        const KSequence s = k_sequence(C1, C2, b.n_max);
        bool k_le_l = true, monotone = true;
        json K = json::array(), L = json::array();
        for (int n = 1; n <= b.n_max; ++n) {
            const auto i = static_cast<std::size_t>(n);
            if (s.K_exact) {
                K.push_back((*s.K_exact)[i].str());
                L.push_back((*s.L_exact)[i].str());
                k_le_l = k_le_l && (*s.K_exact)[i] <= (*s.L_exact)[i];
                if (n >= 3)
                    monotone = monotone && (*s.K_exact)[i] >= (*s.K_exact)[i - 1];
            } else {
                K.push_back(format_double(static_cast<double>(s.K[i])));
                L.push_back(format_double(static_cast<double>(s.L[i])));
                k_le_l = k_le_l && s.log_K[i] <= s.log_L[i] + 1e-12L;
                if (n >= 3)
                    monotone = monotone && s.K[i] >= s.K[i - 1];
            }
        }
        const double k3 = static_cast<double>(s.K[3]);
        const bool k3_ok = std::abs(k3 - 3 * C2 * C1 * C1) <= 1e-12 * k3;
        ok = ok && k_le_l && monotone && k3_ok;
        seqs.push_back({{"C1", C1}, {"C2", C2}, {"K", K}, {"L", L}, {"K3_equals_3C2C1sq", k3_ok},
                        {"K_le_L", k_le_l}, {"K_nondecreasing", monotone}});
    }

    json lemma = json::array();
    for (double chi : b.chi) {
        const auto c = check_conv_lemma(chi, b.m_range, b.cutoff);
        ok = ok && c.holds && c.symmetric;
        lemma.push_back({{"chi", chi}, {"B0", c.B0}, {"worst_ratio", c.worst_ratio}, {"worst_m", c.worst_m},
                         {"symmetric", c.symmetric}, {"holds", c.holds}});
    }

    write_json(dir / "bounds.json", {{"command", "bounds"},
                                     {"catalan", cat},
                                     {"catalan_closed_equals_recursion", cat_equal},
                                     {"catalan_asymptotic_n", asym_n},
                                     {"catalan_asymptotic_ratio", asym},
                                     {"sequences", seqs},
                                     {"convolution_lemma", lemma},
                                     {"pass", ok}});
    say(out, std::string(ok ? "bounds: all checks hold" : "bounds: a check failed") + "  catalan ratio at n="
                 + std::to_string(asym_n) + ": " + format_double(asym));
    return ok ? kOk : kValidationFailure;
}

int run(int argc, char** argv)
{
    CLI::App app{"Perturbative Floquet solver for a driven two-level system"};
    app.require_subcommand(1);
    std::string config_path;
    Output out;

    struct Verb {
        const char* name;
        const char* help;
        int (*fn)(const RunConfig&, const Output&);
    };
    const Verb verbs[] = {
        {"classify", "Phase data and Case I / Case II classification", cmd_classify},
        {"solve", "Riccati series, propagator tables and a U(t) trace", cmd_solve},
        {"validate", "Run every invariant check; exit 3 on failure", cmd_validate},
        {"sweep", "Sweep drive amplitude or epsilon", cmd_sweep},
        {"bounds", "Catalan, K/L sequences and convolution-lemma checks", cmd_bounds},
    };
    std::vector<std::pair<CLI::App*, const Verb*>> subs;
    for (const auto& v : verbs) {
        CLI::App* sub = app.add_subcommand(v.name, v.help);
        sub->add_option("--config", config_path, "Configuration file (JSON)")->required();
        sub->add_option("--out", out.dir, "Output directory");
        sub->add_flag("--quiet", out.quiet, "Suppress console output");
        subs.emplace_back(sub, &v);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    RunConfig cfg;
    try {
        cfg = load_config(config_path);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfigError;
    }

    for (const auto& [sub, verb] : subs) {
        if (!sub->parsed())
            continue;
        try {
            return verb->fn(cfg, out);
        } catch (const Error& e) {
            std::cerr << "error: " << e.what() << '\n';
            return std::string(e.what()) == "unsupported drive class" ? kUnsupported : kValidationFailure;
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << '\n';
            return kValidationFailure;
        }
    }
    return kConfigError;
}

} // namespace floquet::cli
