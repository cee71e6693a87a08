#include "anomal/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "anomal/exponents.hpp"
#include "anomal/oracle.hpp"
#include "anomal/profile.hpp"
#include "anomal/validate.hpp"

namespace anomal {

namespace {

std::string num12(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

std::string join12(const std::vector<double>& xs, const char* sep = ";") {
    std::string s;
    for (size_t i = 0; i < xs.size(); ++i) {
        if (i) s += sep;
        s += num12(xs[i]);
    }
    return s;
}

void check_config(const RunConfig& c) {
    if (!(c.gamma > -1.0 && c.gamma < 1.0))
        throw CLI::ValidationError("--gamma must lie in (-1, 1)");
    if (c.samples < 2) throw CLI::ValidationError("--samples must be >= 2");
    if (!(c.tol >= 1e-12 && c.tol <= 1e-4))
        throw CLI::ValidationError("--tol must lie in [1e-12, 1e-4]");
    if (c.dim < 1) throw CLI::ValidationError("--dim must be >= 1");
}

BuildOptions build_opts(const RunConfig& c) {
    BuildOptions o;
    if (c.eta_max > 0.0) o.eta_max = c.eta_max;
    return o;
}

int dispatch(const RunConfig& config, std::ostream& out) {
    if (config.command == "profile") return cmd_profile(config, out);
    if (config.command == "exponents") return cmd_exponents(config, out);
    if (config.command == "classify") return cmd_classify(config, out);
    if (config.command == "validate") return cmd_validate(config, out);
    if (config.command == "sweep") return cmd_sweep(config, out);
    return 2;
}

nlohmann::ordered_json certificate_json(const ExponentEntry& e) {
    return {{"pass", e.certificate.pass()},
            {"breakpoint_count_ok", e.certificate.breakpoint_count_ok},
            {"tricomi_ok", e.certificate.tricomi_ok},
            {"sign_ok", e.certificate.sign_ok},
            {"tricomi_residual", e.certificate.tricomi_residual}};
}

} // namespace

int worker_count() {
    const char* env = std::getenv("ANOMAL_THREADS");
    int n = env ? std::atoi(env) : 0;
    if (n <= 0) n = int(std::thread::hardware_concurrency());
    return std::max(1, n);
}

namespace {

/// Ordered parallel map: results keep index order regardless of scheduling.
template <class Fn>
void parallel_for(int n, Fn&& fn) {
    const int workers = std::min(worker_count(), n);
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    for (auto& t : pool) t.join();
}

} // namespace

int cmd_profile(const RunConfig& config, std::ostream& out) {
    if (!config.alpha) throw CLI::ValidationError("profile requires --alpha");
    const ProblemParams p{config.gamma, config.dim, *config.alpha};
    const BuildOptions opts = build_opts(config);
    const double eta_max = config.eta_max > 0.0 ? config.eta_max : default_eta_max(config.gamma);

    const PiecewiseProfile prof = build_profile(p, opts);
    const OracleTrajectory traj = integrate_barenblatt(p, eta_max, config.tol);

    struct Row {
        double eta, f, fp, fo;
        int seg;
    };
    std::vector<Row> rows(config.samples);
    for (int i = 0; i < config.samples; ++i) {
        const double eta = eta_max * double(i) / (config.samples - 1);
        const ProfileEval e = evaluate(prof, eta);
        size_t seg = 0;
        while (seg < prof.breakpoints.size() && prof.breakpoints[seg] <= eta) ++seg;
        rows[i] = {eta, e.f, e.f_prime, traj.value_at(std::max(eta, traj.etas.front())),
                   int(seg) + 1};
    }

    if (config.output_format == OutputFormat::csv) {
        out << "# anomal profile\n";
        out << "# gamma = " << num12(p.gamma) << "\n";
        out << "# dim = " << p.dim << "\n";
        out << "# alpha = " << num12(p.alpha) << "\n";
        out << "# breakpoints = " << join12(prof.breakpoints) << "\n";
        out << "eta,f_closed,f_prime_closed,f_oracle,segment_index\n";
        for (const Row& r : rows)
            out << num12(r.eta) << ',' << num12(r.f) << ',' << num12(r.fp) << ','
                << num12(r.fo) << ',' << r.seg << "\n";
    } else {
        nlohmann::ordered_json j;
        j["command"] = "profile";
        j["gamma"] = p.gamma;
        j["dim"] = p.dim;
        j["alpha"] = p.alpha;
        j["breakpoints"] = prof.breakpoints;
        auto& jr = j["rows"] = nlohmann::ordered_json::array();
        for (const Row& r : rows)
            jr.push_back({{"eta", r.eta},
                          {"f_closed", r.f},
                          {"f_prime_closed", r.fp},
                          {"f_oracle", r.fo},
                          {"segment_index", r.seg}});
        out << j.dump(2) << "\n";
    }
    return 0;
}

int cmd_exponents(const RunConfig& config, std::ostream& out) {
    if (!config.k_max) throw CLI::ValidationError("exponents requires --k-max");
    ExponentSearchOptions opts;
    opts.build = build_opts(config);
    const ExponentTable table = build_exponent_table(config.gamma, config.dim, *config.k_max, opts);

    if (config.output_format == OutputFormat::csv) {
        out << "# anomal exponents\n";
        out << "# gamma = " << num12(config.gamma) << "\n";
        out << "# dim = " << config.dim << "\n";
        out << "# k_max = " << *config.k_max << "\n";
        out << "k,alpha_k,gauss_rate,certificate_pass,n_roots,eta_roots\n";
        for (const ExponentEntry& e : table.entries)
            out << e.k << ',' << num12(e.alpha_k) << ',' << num12(e.gauss_rate) << ','
                << (e.certificate.pass() ? "true" : "false") << ',' << e.eta_roots.size() << ','
                << join12(e.eta_roots) << "\n";
    } else {
        nlohmann::ordered_json j;
        j["command"] = "exponents";
        j["gamma"] = config.gamma;
        j["dim"] = config.dim;
        j["k_max"] = *config.k_max;
        auto& jr = j["entries"] = nlohmann::ordered_json::array();
        for (const ExponentEntry& e : table.entries)
            jr.push_back({{"k", e.k},
                          {"alpha_k", e.alpha_k},
                          {"gauss_rate", e.gauss_rate},
                          {"eta_roots", e.eta_roots},
                          {"certificate", certificate_json(e)}});
        out << j.dump(2) << "\n";
    }
    return 0;
}

int cmd_classify(const RunConfig& config, std::ostream& out) {
    if (!config.alpha) throw CLI::ValidationError("classify requires --alpha");
    const ProblemParams p{config.gamma, config.dim, *config.alpha};
    ExponentSearchOptions opts;
    opts.build = build_opts(config);

    // extend the table until it brackets alpha
    ExponentTable table;
    table.gamma = config.gamma;
    table.dim = config.dim;
    double lower = std::max(0.0, double(config.dim - 2));
    for (int k = 0; k <= 32; ++k) {
        ExponentEntry e = find_exponent(k, config.gamma, config.dim, opts);
        table.entries.push_back(e);
        lower = e.alpha_k;
        if (lower > *config.alpha) break;
    }
    const BehaviorReport rep = classify(p, table, opts.build);

    if (config.output_format == OutputFormat::csv) {
        out << "# anomal classify\n";
        out << "# gamma = " << num12(p.gamma) << "\n";
        out << "# dim = " << p.dim << "\n";
        out << "alpha,tail_kind,tail_constant,rate,zero_count,zero_count_theorem2,"
               "bracket_alpha_lo,bracket_alpha_hi\n";
        out << num12(p.alpha) << ','
            << (rep.kind == TailKind::PowerLaw ? "power_law" : "gaussian") << ','
            << num12(rep.tail_constant) << ',' << num12(rep.rate) << ',' << rep.zero_count << ','
            << rep.zero_count_theorem2 << ',' << num12(rep.alpha_lo) << ','
            << num12(rep.alpha_hi) << "\n";
    } else {
        nlohmann::ordered_json j;
        j["command"] = "classify";
        j["gamma"] = p.gamma;
        j["dim"] = p.dim;
        j["alpha"] = p.alpha;
        j["tail_kind"] = rep.kind == TailKind::PowerLaw ? "power_law" : "gaussian";
        j["tail_constant"] = rep.tail_constant;
        j["rate"] = rep.rate;
        j["zero_count"] = rep.zero_count;
        j["zero_count_theorem2"] = rep.zero_count_theorem2;
        j["bracket_alpha_lo"] = rep.alpha_lo;
        j["bracket_alpha_hi"] = rep.alpha_hi;
        out << j.dump(2) << "\n";
    }
    return 0;
}

int cmd_validate(const RunConfig& config, std::ostream& out) {
    const auto results = run_validation_suites(config.suites);
    if (results.empty()) {
        out << "no matching suites\n";
        return 2;
    }
    bool all_pass = true;
    for (const SuiteResult& r : results) {
        out << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << "  worst=" << num12(r.worst)
            << " tol=" << num12(r.tolerance);
        if (!r.pass && !r.detail.empty()) out << "  (" << r.detail << ")";
        out << "\n";
        all_pass = all_pass && r.pass;
    }
    out << (all_pass ? "ALL SUITES PASSED\n" : "SUITE FAILURES PRESENT\n");
    return all_pass ? 0 : 1;
}

int cmd_sweep(const RunConfig& config, std::ostream& out) {
    struct Point {
        double gamma;
        int dim;
    };
    std::vector<Point> points;
    for (double g : config.sweep_gammas)
        for (int d : config.sweep_dims) points.push_back({g, d});

    std::vector<std::string> chunks(points.size());
    const bool exponent_sweep = config.sweep_alphas.empty();
    if (exponent_sweep && !config.k_max)
        throw CLI::ValidationError("sweep requires --k-max or --alphas");

    parallel_for(int(points.size()), [&](int i) {
        const Point pt = points[i];
        std::string s;
        if (exponent_sweep) {
            const ExponentTable t = build_exponent_table(pt.gamma, pt.dim, *config.k_max);
            for (const ExponentEntry& e : t.entries)
                s += num12(pt.gamma) + "," + std::to_string(pt.dim) + ",,alpha_" +
                     std::to_string(e.k) + "," + num12(e.alpha_k) + "\n";
        } else {
            for (double alpha : config.sweep_alphas) {
                const ProblemParams p{pt.gamma, pt.dim, alpha};
                const double C = tail_coefficient(p);
                const int zeros = count_zeros(p);
                s += num12(pt.gamma) + "," + std::to_string(pt.dim) + "," + num12(alpha) +
                     ",tail_coefficient," + num12(C) + "\n";
                s += num12(pt.gamma) + "," + std::to_string(pt.dim) + "," + num12(alpha) +
                     ",zero_count," + std::to_string(zeros) + "\n";
            }
        }
        chunks[i] = std::move(s);
    });

    out << "# anomal sweep\n";
    out << "gamma,dim,alpha,quantity,value\n";
    for (const std::string& s : chunks) out << s;
    return 0;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Closed-form similarity profiles and anomalous exponents of the "
                 "Barenblatt equation u_t + gamma |u_t| = Delta u"};
    app.require_subcommand(1);
    RunConfig config;

    auto add_common = [&](CLI::App* sub, bool needs_gamma) {
        if (needs_gamma) {
            sub->add_option("--gamma", config.gamma, "discontinuity parameter in (-1,1)");
            sub->add_option("--dim", config.dim, "spatial dimension N >= 1");
        }
        sub->add_option("--eta-max", config.eta_max, "scan/sample horizon (0 = default)");
        sub->add_option("--samples", config.samples, "number of sample rows");
        sub->add_option("--tol", config.tol, "oracle integration tolerance");
        sub->add_option("--format", [&config](const std::vector<std::string>& v) {
                if (v[0] == "csv") config.output_format = OutputFormat::csv;
                else if (v[0] == "json") config.output_format = OutputFormat::json;
                else return false;
                return true;
            }, "output format: csv|json");
        sub->add_option("--output", config.output_path, "output file path (default stdout)");
    };

    auto* profile = app.add_subcommand("profile", "tabulate one profile against the ODE oracle");
    add_common(profile, true);
    profile->add_option("--alpha", config.alpha, "similarity exponent alpha > 0")->required();

    auto* exponents = app.add_subcommand("exponents", "anomalous exponent table alpha_0..alpha_k");
    add_common(exponents, true);
    exponents->add_option("--k-max", config.k_max, "largest exponent index")->required();

    auto* classify = app.add_subcommand("classify", "tail behavior report for one alpha");
    add_common(classify, true);
    classify->add_option("--alpha", config.alpha, "similarity exponent alpha > 0")->required();

    auto* validate = app.add_subcommand("validate", "run the invariant suites");
    add_common(validate, false);
    validate->add_option("--suite", config.suites, "run only the named suites");

    auto* sweep = app.add_subcommand("sweep", "tidy long-format parameter sweep");
    add_common(sweep, false);
    sweep->add_option("--gammas", [&config](const std::vector<std::string>& v) {
            config.sweep_gammas.clear();
            for (const auto& item : v) {
                std::stringstream ss(item);
                std::string tok;
                while (std::getline(ss, tok, ',')) config.sweep_gammas.push_back(std::stod(tok));
            }
            return !config.sweep_gammas.empty();
        }, "comma-separated gamma values");
    sweep->add_option("--dims", [&config](const std::vector<std::string>& v) {
            config.sweep_dims.clear();
            for (const auto& item : v) {
                std::stringstream ss(item);
                std::string tok;
                while (std::getline(ss, tok, ',')) config.sweep_dims.push_back(std::stoi(tok));
            }
            return !config.sweep_dims.empty();
        }, "comma-separated dimensions");
    sweep->add_option("--alphas", [&config](const std::vector<std::string>& v) {
            config.sweep_alphas.clear();
            for (const auto& item : v) {
                std::stringstream ss(item);
                std::string tok;
                while (std::getline(ss, tok, ',')) config.sweep_alphas.push_back(std::stod(tok));
            }
            return !config.sweep_alphas.empty();
        }, "comma-separated alpha values (tail-coefficient sweep)");
    sweep->add_option("--k-max", config.k_max, "exponent sweep up to k");

    try {
        app.parse(argc, argv);
        for (auto* sub : {profile, exponents, classify, sweep})
            if (sub->parsed()) check_config(config);
        config.command = app.get_subcommands().front()->get_name();

        std::ostringstream buffer;
        const int rc = dispatch(config, buffer);
        if (config.output_path) {
            std::ofstream f(*config.output_path, std::ios::binary);
            if (!f) {
                err << "error: cannot open output path " << *config.output_path << "\n";
                return 2;
            }
            f << buffer.str();
        } else {
            out << buffer.str();
        }
        return rc;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {   // --help
            out << app.help();
            return 0;
        }
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const numerical_error& e) {
        err << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << "\n";
        return 3;
    }
}

} // namespace anomal
