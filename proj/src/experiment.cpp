#include "snse/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace snse {

namespace {

std::string trim(const std::string& s) {
    const size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

double to_double(const std::string& s, const std::string& field) {
    try {
        size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (...) {
        throw ConfigError("field '" + field + "': not a number: '" + s + "'");
    }
}

long long to_int(const std::string& s, const std::string& field) {
    try {
        size_t pos = 0;
        const long long v = std::stoll(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (...) {
        throw ConfigError("field '" + field + "': not an integer: '" + s + "'");
    }
}

Method parse_method(const std::string& s) {
    if (s == "A" || s == "a") return Method::A;
    if (s == "B" || s == "b") return Method::B;
    if (s == "C" || s == "c") return Method::C;
    throw ConfigError("field 'method': expected A, B or C, got '" + s + "'");
}

char method_letter(Method m) {
    return m == Method::A ? 'A' : (m == Method::B ? 'B' : 'C');
}

int steps_for(double T, double h, const std::string& field) {
    if (h <= 0.0) throw ConfigError("field '" + field + "': step must be positive");
    const long long N = std::llround(T / h);
    if (std::abs(N * h - T) > 1e-9 * std::max(T, 1.0))
        throw ConfigError("field '" + field + "': h=" + std::to_string(h) +
                          " does not divide T=" + std::to_string(T));
    return static_cast<int>(N);
}

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

double sum_sq(const SpectralField& u) {
    double s = 0.0;
    for (const Complex& c : u.raw()) s += std::norm(c);
    return s;
}

double diff_sq(const SpectralField& a, const SpectralField& b) {
    const int M = std::max(a.cutoff(), b.cutoff());
    return sum_sq(embedded(a, M) - embedded(b, M));
}

PathSummary summary_at_end(const WienerPath& path) {
    PathSummary ps;
    ps.w.resize(path.q);
    for (int r = 0; r < path.q; ++r) ps.w[r] = path.value(path.N, r);
    ps.integral = path.has_integral() ? path.i_values[path.N] : 0.0;
    return ps;
}

struct SweepSetup {
    ProblemSpec problem;
    MethodParams params;
    bool with_integral = false;
};

SweepSetup make_setup(const ExperimentConfig& config) {
    SweepSetup s{build_problem(config), {}, config.model == "2"};
    s.params.sigma = config.sigma;
    s.params.M = config.M;
    s.params.method = config.method;
    s.params.blowup_bound = config.blowup_bound;
    return s;
}

TrajectoryErrors trajectory_errors(const ProblemSpec& problem, const MethodParams& params,
                                   const WienerPath& path) {
    const auto states = run_solver(problem, params, path, /*with_pressure=*/false);
    const PathSummary ps = summary_at_end(path);
    const SpectralField exact_v = problem.exact->velocity_at(problem.T, ps);
    const SpectralField exact_p = problem.exact->pressure_at(problem.T, ps);
    const LayerState& last = states.back();
    TrajectoryErrors te;
    te.num_v = diff_sq(last.velocity, exact_v);
    te.den_v = sum_sq(exact_v);
    te.num_p = diff_sq(*last.pressure, exact_p);
    te.den_p = sum_sq(exact_p);
    return te;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::ios_base::failure("cannot open output file: " + path);
    return out;
}

void write_loglog_sidecar(const std::string& out_path, const std::vector<ErrorReport>& reports) {
    if (out_path.empty()) return;
    std::ofstream gp(out_path + ".loglog");
    if (!gp) return;
    gp << "# log(h) log(err_v) log(err_p)\n";
    for (const auto& r : reports)
        gp << fmt(std::log(r.h)) << ' ' << fmt(std::log(r.err_v)) << ' '
           << (r.err_p > 0.0 ? fmt(std::log(r.err_p)) : "nan") << '\n';
}

}  // namespace

std::optional<std::string> KeyValueFile::get(const std::string& key) const {
    for (const auto& [k, v] : entries)
        if (k == key) return v;
    return std::nullopt;
}

std::vector<std::string> KeyValueFile::get_all(const std::string& key) const {
    std::vector<std::string> out;
    for (const auto& [k, v] : entries)
        if (k == key) out.push_back(v);
    return out;
}

KeyValueFile parse_key_values(std::istream& in) {
    KeyValueFile kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']') continue;  // section marker
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        kv.entries.emplace_back(key, value);
    }
    return kv;
}

ExperimentConfig parse_config(std::istream& in) {
    const KeyValueFile kv = parse_key_values(in);
    ExperimentConfig c;
    for (const auto& [key, value] : kv.entries) {
        if (key == "model") c.model = value;
        else if (key == "method") c.method = parse_method(value);
        else if (key == "sigma") c.sigma = to_double(value, key);
        else if (key == "A") c.A = to_double(value, key);
        else if (key == "kappa") c.kappa = static_cast<int>(to_int(value, key));
        else if (key == "L") c.L = to_double(value, key);
        else if (key == "T") c.T = to_double(value, key);
        else if (key == "gamma1") c.gamma1 = to_double(value, key);
        else if (key == "gamma2") c.gamma2 = to_double(value, key);
        else if (key == "M") c.M = static_cast<int>(to_int(value, key));
        else if (key == "K") c.K = static_cast<int>(to_int(value, key));
        else if (key == "seed") c.seed = static_cast<uint64_t>(to_int(value, key));
        else if (key == "out") c.out_path = value;
        else if (key == "master_refine") c.master_refine = static_cast<int>(to_int(value, key));
        else if (key == "blowup_bound") c.blowup_bound = to_double(value, key);
        else if (key == "h_list") {
            c.h_list.clear();
            for (const auto& tok : split_ws(value)) c.h_list.push_back(to_double(tok, key));
        } else {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }
    return c;
}

void emit_config(const ExperimentConfig& c, std::ostream& out) {
    char buf[48];
    const auto num = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    out << "[experiment]\n";
    out << "model = " << c.model << "\n";
    out << "method = " << method_letter(c.method) << "\n";
    out << "sigma = " << num(c.sigma) << "\n";
    out << "A = " << num(c.A) << "\n";
    out << "kappa = " << c.kappa << "\n";
    out << "L = " << num(c.L) << "\n";
    out << "T = " << num(c.T) << "\n";
    out << "gamma1 = " << num(c.gamma1) << "\n";
    out << "gamma2 = " << num(c.gamma2) << "\n";
    out << "M = " << c.M << "\n";
    out << "h_list =";
    for (double h : c.h_list) out << ' ' << num(h);
    out << "\n";
    out << "K = " << c.K << "\n";
    out << "seed = " << c.seed << "\n";
    if (!c.out_path.empty()) out << "out = " << c.out_path << "\n";
    out << "master_refine = " << c.master_refine << "\n";
    out << "blowup_bound = " << num(c.blowup_bound) << "\n";
}

void validate_config(const ExperimentConfig& c, bool fixed_trajectory) {
    if (c.sigma <= 0.0) throw ConfigError("field 'sigma': must be positive");
    if (c.L <= 0.0) throw ConfigError("field 'L': must be positive");
    if (c.T < 0.0) throw ConfigError("field 'T': must be nonnegative");
    if (c.M < 1) throw ConfigError("field 'M': must be >= 1");
    if (c.h_list.empty()) throw ConfigError("field 'h_list': must be nonempty");
    for (double h : c.h_list) steps_for(c.T, h, "h_list");
    if (fixed_trajectory) {
        double h_min = c.h_list.front();
        for (size_t i = 1; i < c.h_list.size(); ++i) {
            if (c.h_list[i] > c.h_list[i - 1])
                throw ConfigError("field 'h_list': must be sorted descending");
            h_min = c.h_list[i];
        }
        for (double h : c.h_list) {
            const double ratio = h / h_min;
            if (std::abs(ratio - std::llround(ratio)) > 1e-9)
                throw ConfigError("field 'h_list': h=" + std::to_string(h) +
                                  " is not an integer multiple of the finest step");
        }
        if (c.master_refine < 1) throw ConfigError("field 'master_refine': must be >= 1");
    }
    if (c.model != "1" && c.model != "2") {
        std::ifstream probe(c.model);
        if (!probe) throw ConfigError("field 'model': expected 1, 2, or a readable problem file");
    }
}

ProblemSpec build_problem(const ExperimentConfig& c) {
    if (c.model == "1") return model1(c.sigma, c.A, c.kappa, c.L, c.T, c.M);
    if (c.model == "2") return model2(c.sigma, c.A, c.kappa, c.L, c.T, c.gamma1, c.gamma2, c.M);
    return load_problem_file(c.model);
}

ProblemSpec load_problem_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot open problem file: " + path);
    const KeyValueFile kv = parse_key_values(in);

    const auto scalar = [&](const std::string& key, double fallback,
                            bool required) -> double {
        const auto v = kv.get(key);
        if (!v) {
            if (required) throw ConfigError("problem file: missing '" + key + "'");
            return fallback;
        }
        return to_double(*v, key);
    };
    ProblemSpec p;
    p.sigma = scalar("sigma", 0.0, true);
    p.L = scalar("L", 1.0, false);
    p.T = scalar("T", 0.0, true);
    p.M = static_cast<int>(scalar("M", 2, false));
    p.q = static_cast<int>(scalar("q", 1, false));
    if (p.M < 1) throw ConfigError("problem file: M must be >= 1");
    if (p.q < 1) throw ConfigError("problem file: q must be >= 1");

    const auto parse_field = [&](const std::string& key) {
        SpectralField field(p.M, p.L, 2);
        for (const auto& row : kv.get_all(key)) {
            const auto toks = split_ws(row);
            if (toks.size() != 6)
                throw ConfigError("problem file: '" + key +
                                  "' rows need n1 n2 re1 im1 re2 im2");
            const int n1 = static_cast<int>(to_int(toks[0], key));
            const int n2 = static_cast<int>(to_int(toks[1], key));
            if (!field.in_band(n1, n2))
                throw ConfigError("problem file: '" + key + "' mode out of band");
            field.at(n1, n2, 0) += Complex(to_double(toks[2], key), to_double(toks[3], key));
            field.at(n1, n2, 1) += Complex(to_double(toks[4], key), to_double(toks[5], key));
        }
        return field;
    };

    p.phi = parse_field("phi");
    SpectralField f = parse_field("f");
    p.forcing = [f](double) { return f; };
    std::vector<SpectralField> gammas;
    for (int r = 1; r <= p.q; ++r) gammas.push_back(parse_field("gamma" + std::to_string(r)));
    p.noise_coeffs = [gammas](double) { return gammas; };
    validate_problem(p);
    return p;
}

std::vector<ErrorReport> converge_reports(const ExperimentConfig& config) {
    validate_config(config, /*fixed_trajectory=*/true);
    if (config.model != "1" && config.model != "2")
        throw ConfigError("field 'model': convergence sweeps need a model with an exact solution");
    SweepSetup setup = make_setup(config);

    const double h_min = config.h_list.back();
    const int N_min = steps_for(config.T, h_min, "h_list");
    const int N_master = N_min * config.master_refine;
    const WienerPath master = generate_path(setup.problem.q, config.T, N_master, config.seed, 0,
                                            setup.with_integral);
    std::vector<ErrorReport> reports;
    for (double h : config.h_list) {
        const int N = steps_for(config.T, h, "h_list");
        const WienerPath path = coarsen_path(master, N_master / N);
        setup.params.h = h;
        const TrajectoryErrors te = trajectory_errors(setup.problem, setup.params, path);
        ErrorReport rep;
        rep.h = h;
        rep.runs = 1;
        rep.seed = config.seed;
        rep.err_v = std::sqrt(te.num_v / te.den_v);
        rep.denom_v = std::sqrt(te.den_v);
        if (te.den_p > 0.0) {
            rep.err_p = std::sqrt(te.num_p / te.den_p);
            rep.denom_p = std::sqrt(te.den_p);
        }
        reports.push_back(rep);
    }
    return reports;
}

std::vector<ErrorReport> mc_reports(const ExperimentConfig& config) {
    validate_config(config, /*fixed_trajectory=*/false);
    if (config.model != "1" && config.model != "2")
        throw ConfigError("field 'model': Monte Carlo sweeps need a model with an exact solution");
    if (config.K < 2) throw ConfigError("field 'K': must be >= 2");
    SweepSetup setup = make_setup(config);

    std::vector<ErrorReport> reports;
    for (double h : config.h_list) {
        const int N = steps_for(config.T, h, "h_list");
        MethodParams params = setup.params;
        params.h = h;
        const ProblemSpec& problem = setup.problem;
        const bool with_integral = setup.with_integral;
        const uint64_t seed = config.seed;
        const auto runner = [&problem, params, N, with_integral, seed,
                             T = config.T](uint64_t run_index) {
            const WienerPath path = generate_path(problem.q, T, N, seed, run_index, with_integral);
            return trajectory_errors(problem, params, path);
        };
        reports.push_back(mean_square_error(runner, config.K, config.seed, h));
    }
    return reports;
}

void write_report_csv(const ExperimentConfig& config, const std::vector<ErrorReport>& reports,
                      std::ostream& out, const std::optional<OrderFit>& fit_v,
                      const std::optional<OrderFit>& fit_p) {
    out << "model,method,h,N,K,seed,err_v,halfwidth_v,err_p,halfwidth_p,denom_v,denom_p\n";
    for (const auto& r : reports) {
        const int N = steps_for(config.T, r.h, "h_list");
        out << config.model << ',' << method_letter(config.method) << ',' << fmt(r.h) << ',' << N
            << ',' << r.runs << ',' << r.seed << ',' << fmt(r.err_v) << ',' << fmt(r.halfwidth_v)
            << ',' << fmt(r.err_p) << ',' << fmt(r.halfwidth_p) << ',' << fmt(r.denom_v) << ','
            << fmt(r.denom_p) << '\n';
    }
    if (fit_v)
        out << "order," << method_letter(config.method) << ",0,0," << (reports.empty() ? 0 : reports.front().runs)
            << ',' << config.seed << ',' << fmt(fit_v->slope) << ",0,"
            << (fit_p ? fmt(fit_p->slope) : "0") << ",0,0,0\n";
}

int cmd_run(const ExperimentConfig& config, std::ostream& diagnostics) {
    try {
        validate_config(config, /*fixed_trajectory=*/false);
        if (config.h_list.size() != 1)
            throw ConfigError("field 'h_list': run takes exactly one step size");
        SweepSetup setup = make_setup(config);
        setup.params.h = config.h_list.front();
        if (config.model != "1" && config.model != "2") setup.with_integral = false;
        const int N = steps_for(config.T, setup.params.h, "h_list");
        const WienerPath path = generate_path(setup.problem.q, config.T, N, config.seed, 0,
                                              setup.with_integral);

        std::ostream* out = &std::cout;
        std::ofstream file;
        if (!config.out_path.empty()) {
            file = open_output(config.out_path);
            out = &file;
        }
        *out << "k,t_k,div_residual,max_abs_v,coeffs\n";
        char buf[64];
        const auto num = [&](double v) {
            std::snprintf(buf, sizeof(buf), "%.17g", v);
            return std::string(buf);
        };
        try {
            const auto states = run_solver(setup.problem, setup.params, path, true);
            for (const auto& st : states) {
                const double vnorm = parseval_norm(st.velocity);
                const double div_res =
                    vnorm > 0.0 ? parseval_norm(divergence(st.velocity)) / vnorm : 0.0;
                *out << st.k << ',' << num(st.t) << ',' << num(div_res) << ','
                     << num(max_pointwise_norm(st.velocity)) << ',';
                bool first = true;
                const int M = st.velocity.cutoff();
                for (int n1 = -M; n1 < M; ++n1)
                    for (int n2 = -M; n2 < M; ++n2)
                        for (int c = 0; c < 2; ++c) {
                            const Complex z = st.velocity.at(n1, n2, c);
                            if (z == Complex(0.0, 0.0)) continue;
                            if (!first) *out << ';';
                            first = false;
                            *out << "v:" << n1 << ':' << n2 << ':' << c << ':'
                                 << num(z.real()) << ':' << num(z.imag());
                        }
                if (st.pressure) {
                    const int Mp = st.pressure->cutoff();
                    for (int n1 = -Mp; n1 < Mp; ++n1)
                        for (int n2 = -Mp; n2 < Mp; ++n2) {
                            const Complex z = st.pressure->at(n1, n2);
                            if (z == Complex(0.0, 0.0)) continue;
                            if (!first) *out << ';';
                            first = false;
                            *out << "p:" << n1 << ':' << n2 << ':' << num(z.real()) << ':'
                                 << num(z.imag());
                        }
                }
                *out << '\n';
            }
        } catch (const BlowUpError& e) {
            *out << "# aborted: " << e.what() << '\n';
            diagnostics << "blow-up: " << e.what() << '\n';
            return kBlowUp;
        }
        return kOk;
    } catch (const ConfigError& e) {
        diagnostics << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::ios_base::failure& e) {
        diagnostics << "I/O error: " << e.what() << '\n';
        return kIoError;
    }
}

namespace {

int cmd_sweep(const ExperimentConfig& config, std::ostream& diagnostics, bool monte_carlo) {
    try {
        const std::vector<ErrorReport> reports =
            monte_carlo ? mc_reports(config) : converge_reports(config);
        std::optional<OrderFit> fit_v, fit_p;
        if (!monte_carlo && reports.size() >= 3) {
            fit_v = fit_order(reports, false);
            bool have_p = true;
            for (const auto& r : reports) have_p = have_p && r.err_p > 0.0;
            if (have_p) fit_p = fit_order(reports, true);
        }
        std::ostream* out = &std::cout;
        std::ofstream file;
        if (!config.out_path.empty()) {
            file = open_output(config.out_path);
            out = &file;
        }
        write_report_csv(config, reports, *out, fit_v, fit_p);
        write_loglog_sidecar(config.out_path, reports);
        return kOk;
    } catch (const ConfigError& e) {
        diagnostics << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const BlowUpError& e) {
        diagnostics << "blow-up: " << e.what() << '\n';
        return kBlowUp;
    } catch (const std::ios_base::failure& e) {
        diagnostics << "I/O error: " << e.what() << '\n';
        return kIoError;
    }
}

}  // namespace

int cmd_converge(const ExperimentConfig& config, std::ostream& diagnostics) {
    return cmd_sweep(config, diagnostics, false);
}

int cmd_mc(const ExperimentConfig& config, std::ostream& diagnostics) {
    return cmd_sweep(config, diagnostics, true);
}

}  // namespace snse
