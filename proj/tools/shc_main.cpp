// Command line front end: reproducible tail/density/heat-content experiments
// with CSV/JSON output, expansion-coefficient evaluation and extraction, and
// the validation suite.

#include "shc/asymptotics.hpp"
#include "shc/heatcontent.hpp"
#include "shc/specfun.hpp"
#include "shc/stable_index.hpp"
#include "shc/subordinator.hpp"
#include "shc/supremum.hpp"
#include "shc/validation.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr const char* kVersion = "0.1.0";

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string spec_hash(const ordered_json& spec) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(spec.dump())));
    return buf;
}

void write_text(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << content;
}

std::string metadata_header(const ordered_json& spec, std::uint64_t seed) {
    std::ostringstream os;
    os << "# shc-version=" << kVersion << "\n";
    os << "# spec-hash=" << spec_hash(spec) << "\n";
    os << "# seed=" << seed << "\n";
    return os.str();
}

ordered_json load_spec_file(const std::string& path, const std::string& command) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open spec file: " + path);
    ordered_json spec = ordered_json::parse(in);
    if (spec.value("command", "") != command)
        throw std::runtime_error("spec file is for command '" + spec.value("command", "") +
                                 "', not '" + command + "'");
    return spec;
}

void maybe_save_spec(const std::string& path, const ordered_json& spec) {
    if (path.empty()) return;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open spec output file: " + path);
    out << spec.dump(2) << "\n";
}

std::pair<double, double> parse_interval(const std::string& s) {
    const auto comma = s.find(',');
    if (comma == std::string::npos)
        throw CLI::ValidationError("--interval expects 'a,b'");
    return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
}

std::vector<double> grid_from(double lo, double hi, int points, bool log_spaced) {
    if (points < 2) return {lo};
    std::vector<double> g;
    for (int i = 0; i < points; ++i) {
        const double w = static_cast<double>(i) / (points - 1);
        g.push_back(log_spaced ? lo * std::pow(hi / lo, w) : lo + (hi - lo) * w);
    }
    return g;
}

struct TailArgs {
    std::string kind = "bm";
    double alpha = 1.0;
    std::vector<double> u_values;
    double u_min = 0.1, u_max = 10.0;
    int u_points = 0;
    bool u_log = false;
    std::uint64_t seed = 0;
    std::string out, save_spec, from_spec;
};

int cmd_tail(TailArgs a) {
    ordered_json spec;
    if (!a.from_spec.empty()) {
        spec = load_spec_file(a.from_spec, "tail");
        a.kind = spec.at("kind");
        a.alpha = spec.at("alpha");
        a.u_values = spec.at("u").get<std::vector<double>>();
        a.seed = spec.at("seed");
    } else {
        if (a.u_points > 0) {
            auto g = grid_from(a.u_min, a.u_max, a.u_points, a.u_log);
            a.u_values.insert(a.u_values.end(), g.begin(), g.end());
        }
        if (a.u_values.empty())
            throw CLI::ValidationError("tail: provide --u or a --u-points grid");
        spec["command"] = "tail";
        spec["kind"] = a.kind;
        spec["alpha"] = a.alpha;
        spec["u"] = a.u_values;
        spec["seed"] = a.seed;
    }
    maybe_save_spec(a.save_spec, spec);

    std::optional<shc::sup::TailFunction> tail;
    if (a.kind == "bm") {
        tail = shc::sup::bm_sup_tail();
    } else if (a.kind == "cauchy-sup") {
        tail = shc::sup::cauchy_sup_tail();
    } else if (a.kind == "skbm-sup") {
        tail = shc::sup::skbm_sup_tail(shc::StableIndex(a.alpha));
    } else {
        throw CLI::ValidationError("tail: unknown --kind '" + a.kind + "'");
    }

    std::ostringstream os;
    os << metadata_header(spec, a.seed);
    os << "u,survival,stderr\n";
    for (double u : a.u_values) {
        os << fmt(u) << ',' << fmt(tail->survival(u)) << ',';
        if (auto se = tail->stderr_at(u)) os << fmt(*se);
        os << '\n';
    }
    write_text(a.out, os.str());
    return 0;
}

struct DensityArgs {
    double alpha = 1.5;
    double x_min = 0.1, x_max = 100.0;
    int x_points = 64;
    std::vector<double> x_values;
    std::string out, save_spec, from_spec;
};

int cmd_density(DensityArgs a) {
    ordered_json spec;
    if (!a.from_spec.empty()) {
        spec = load_spec_file(a.from_spec, "density");
        a.alpha = spec.at("alpha");
        a.x_values = spec.at("x").get<std::vector<double>>();
    } else {
        if (a.x_values.empty()) a.x_values = grid_from(a.x_min, a.x_max, a.x_points, true);
        spec["command"] = "density";
        spec["alpha"] = a.alpha;
        spec["x"] = a.x_values;
        spec["seed"] = 0;
    }
    maybe_save_spec(a.save_spec, spec);

    const shc::StableIndex idx(a.alpha);
    const shc::subord::DensityEvalConfig cfg;
    std::ostringstream os;
    os << metadata_header(spec, 0);
    os << "# series-crossover=" << fmt(shc::subord::series_crossover(idx, cfg.series_terms))
       << "\n";
    os << "x,density,method\n";
    for (double x : a.x_values) {
        const auto m = shc::subord::density_method(idx, x, cfg);
        const char* name = m == shc::subord::DensityMethod::Series ? "series"
                           : m == shc::subord::DensityMethod::TailAsymptote ? "tail"
                                                                            : "integral";
        os << fmt(x) << ',' << fmt(shc::subord::density(idx, x, cfg)) << ',' << name << '\n';
    }
    write_text(a.out, os.str());
    return 0;
}

struct HeatArgs {
    std::string process = "sk";
    std::string method = "series";
    double alpha = 1.5;
    std::string interval = "0,1";
    double t_min = 1e-4, t_max = 1e-1;
    int points = 9;
    long long paths = 100000, steps = 512;
    int strata = 64;
    std::uint64_t seed = 0;
    int threads = 0;
    std::string out, save_spec, from_spec;
};

int cmd_heat(HeatArgs a) {
    ordered_json spec;
    if (!a.from_spec.empty()) {
        spec = load_spec_file(a.from_spec, "heat");
        a.process = spec.at("process");
        a.method = spec.at("method");
        a.alpha = spec.at("alpha");
        a.interval = spec.at("interval");
        a.t_min = spec.at("t_min");
        a.t_max = spec.at("t_max");
        a.points = spec.at("points");
        a.paths = spec.at("paths");
        a.steps = spec.at("steps");
        a.strata = spec.at("strata");
        a.seed = spec.at("seed");
    } else {
        spec["command"] = "heat";
        spec["process"] = a.process;
        spec["method"] = a.method;
        spec["alpha"] = a.alpha;
        spec["interval"] = a.interval;
        spec["t_min"] = a.t_min;
        spec["t_max"] = a.t_max;
        spec["points"] = a.points;
        spec["paths"] = a.paths;
        spec["steps"] = a.steps;
        spec["strata"] = a.strata;
        spec["seed"] = a.seed;
    }
    maybe_save_spec(a.save_spec, spec);

    const shc::StableIndex idx(a.alpha);
    const auto [ia, ib] = parse_interval(a.interval);
    const shc::heat::Interval D(ia, ib);
    const auto grid = shc::heat::log_grid(a.t_min, a.t_max, a.points);

    shc::heat::HeatCurve curve;
    if (a.method == "series") {
        if (a.process != "sk")
            throw CLI::ValidationError("heat: the eigenseries exists for --process sk only");
        curve = shc::heat::heat_curve_series(idx, D, grid);
    } else if (a.method == "mc") {
        shc::heat::McConfig cfg;
        cfg.paths = a.paths;
        cfg.n_steps = a.steps;
        cfg.x_strata = a.strata;
        cfg.seed = a.seed;
        cfg.threads = a.threads;
        const auto kind = a.process == "ks" ? shc::heat::ProcessKind::KilledSubordinate
                        : a.process == "sk" ? shc::heat::ProcessKind::SubordinateKilled
                                            : throw CLI::ValidationError("heat: --process ks|sk");
        curve = shc::heat::heat_curve_mc(kind, idx, D, grid, cfg);
    } else {
        throw CLI::ValidationError("heat: --method series|mc");
    }

    std::ostringstream os;
    os << metadata_header(spec, a.seed);
    os << "t,value,stderr,provenance,bias_diag\n";
    const char* prov = curve.provenance == shc::heat::Provenance::Series ? "series"
                       : curve.provenance == shc::heat::Provenance::Quadrature ? "quadrature"
                                                                               : "mc";
    for (const auto& p : curve.points) {
        os << fmt(p.t) << ',' << fmt(p.value) << ',' << fmt(p.stderr_) << ',' << prov << ',';
        if (curve.provenance == shc::heat::Provenance::MonteCarlo) os << fmt(p.bias_diag);
        os << '\n';
    }
    write_text(a.out, os.str());
    return 0;
}

const char* prov_name(shc::asym::CoeffProvenance p) {
    switch (p) {
        case shc::asym::CoeffProvenance::ClosedForm: return "closed-form";
        case shc::asym::CoeffProvenance::Quadrature: return "quadrature";
        case shc::asym::CoeffProvenance::MonteCarlo: return "monte-carlo";
        default: return "n/a";
    }
}

struct ExpandArgs {
    std::string process = "skbm";
    double alpha = 1.5;
    std::string interval = "0,1";
    long long paths = 2'000'000, steps = 2048;
    std::uint64_t seed = 0xA5A5A5A5ULL;
    int threads = 0;
    std::string out, save_spec, from_spec;
};

int cmd_expand(ExpandArgs a) {
    ordered_json spec;
    if (!a.from_spec.empty()) {
        spec = load_spec_file(a.from_spec, "expand");
        a.process = spec.at("process");
        a.alpha = spec.at("alpha");
        a.interval = spec.at("interval");
        a.paths = spec.at("paths");
        a.steps = spec.at("steps");
        a.seed = spec.at("seed");
    } else {
        spec["command"] = "expand";
        spec["process"] = a.process;
        spec["alpha"] = a.alpha;
        spec["interval"] = a.interval;
        spec["paths"] = a.paths;
        spec["steps"] = a.steps;
        spec["seed"] = a.seed;
    }
    maybe_save_spec(a.save_spec, spec);

    if (a.alpha < 1.0) {
        std::cerr << "expand: third-order theorem coefficients are unknown for alpha in "
                     "(0,1); only alpha in [1,2) is supported\n";
        return 1;
    }
    const shc::StableIndex idx(a.alpha);
    const auto [ia, ib] = parse_interval(a.interval);
    const shc::heat::Interval D(ia, ib);
    const auto kind = a.process == "ksbm" ? shc::heat::ProcessKind::KilledSubordinate
                    : a.process == "skbm" ? shc::heat::ProcessKind::SubordinateKilled
                                          : throw CLI::ValidationError("expand: --process ksbm|skbm");
    shc::asym::ExpansionResources res;
    res.mc.paths = a.paths;
    res.mc.n_steps = a.steps;
    res.mc.seed = a.seed;
    res.mc.threads = a.threads;
    const auto e = shc::asym::theorem_expansion(kind, idx, D, res);

    ordered_json j;
    j["metadata"] = {{"shc-version", kVersion}, {"spec-hash", spec_hash(spec)}, {"seed", a.seed}};
    j["process"] = a.process;
    j["alpha"] = e.alpha;
    j["interval"] = {{"a", D.a}, {"b", D.b}};
    j["defect_model"] = "c1 - Q(t) ~ c2*t^(1/alpha) + c2log*t*ln(1/t) + c3*t";
    j["c1"] = e.c1;
    j["c2"] = e.c2;
    j["c2log"] = e.c2log;
    j["c3"] = e.c3;
    j["c2_stderr"] = e.c2_stderr;
    j["constant_provenance"] = {{"c2", prov_name(e.c2_prov)}, {"c3", prov_name(e.c3_prov)}};
    write_text(a.out, j.dump(2) + "\n");
    return 0;
}

struct FitArgs {
    std::string input;
    std::string basis = "p,t";
    std::string window = "1e-6,1e-3";
    std::string process = "sk";
    double alpha = 1.5;
    std::string interval = "0,1";
    std::string out, save_spec, from_spec;
};

shc::heat::HeatCurve read_heat_csv(const std::string& path, const FitArgs& a) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("fit: cannot open input " + path);
    shc::heat::HeatCurve c;
    c.alpha = a.alpha;
    const auto [ia, ib] = parse_interval(a.interval);
    c.interval = shc::heat::Interval(ia, ib);
    c.kind = a.process == "ks" ? shc::heat::ProcessKind::KilledSubordinate
                               : shc::heat::ProcessKind::SubordinateKilled;
    std::string line;
    bool saw_mc = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line[0] == 't') continue;
        std::istringstream ls(line);
        std::string f0, f1, f2, f3;
        std::getline(ls, f0, ',');
        std::getline(ls, f1, ',');
        std::getline(ls, f2, ',');
        std::getline(ls, f3, ',');
        shc::heat::HeatPoint p;
        p.t = std::stod(f0);
        p.value = std::stod(f1);
        p.stderr_ = f2.empty() ? 0.0 : std::stod(f2);
        saw_mc = saw_mc || f3 == "mc";
        c.points.push_back(p);
    }
    c.provenance = saw_mc ? shc::heat::Provenance::MonteCarlo : shc::heat::Provenance::Series;
    return c;
}

int cmd_fit(FitArgs a) {
    ordered_json spec;
    if (!a.from_spec.empty()) {
        spec = load_spec_file(a.from_spec, "fit");
        a.input = spec.at("input");
        a.basis = spec.at("basis");
        a.window = spec.at("window");
        a.process = spec.at("process");
        a.alpha = spec.at("alpha");
        a.interval = spec.at("interval");
    } else {
        spec["command"] = "fit";
        spec["input"] = a.input;
        spec["basis"] = a.basis;
        spec["window"] = a.window;
        spec["process"] = a.process;
        spec["alpha"] = a.alpha;
        spec["interval"] = a.interval;
        spec["seed"] = 0;
    }
    maybe_save_spec(a.save_spec, spec);

    std::vector<shc::asym::BasisTerm> basis;
    std::istringstream bs(a.basis);
    std::string token;
    while (std::getline(bs, token, ',')) {
        if (token == "p" || token == "t^(1/alpha)") basis.push_back(shc::asym::BasisTerm::PowerInvAlpha);
        else if (token == "tlog") basis.push_back(shc::asym::BasisTerm::TLogInvT);
        else if (token == "t") basis.push_back(shc::asym::BasisTerm::Linear);
        else throw CLI::ValidationError("fit: unknown basis token '" + token + "'");
    }
    const auto [w_lo, w_hi] = parse_interval(a.window);
    const auto curve = read_heat_csv(a.input, a);
    const auto fit = shc::asym::fit_coefficients(curve, basis, w_lo, w_hi);

    ordered_json j;
    j["metadata"] = {{"shc-version", kVersion}, {"spec-hash", spec_hash(spec)}};
    j["window"] = {{"t_min", fit.t_min}, {"t_max", fit.t_max}};
    j["points_used"] = fit.points_used;
    j["condition"] = fit.condition;
    j["residual_norm"] = fit.residual_norm;
    ordered_json coeffs = ordered_json::array();
    for (size_t i = 0; i < fit.basis.size(); ++i) {
        coeffs.push_back({{"term", shc::asym::basis_name(fit.basis[i])},
                          {"estimate", fit.coeff[i]},
                          {"stderr", fit.coeff_stderr[i]}});
    }
    j["coefficients"] = coeffs;
    write_text(a.out, j.dump(2) + "\n");
    return 0;
}

struct ValidateArgs {
    std::string suite = "fast";
    std::string report;
    int threads = 0;
};

int cmd_validate(const ValidateArgs& a) {
    if (a.suite != "fast" && a.suite != "full")
        throw CLI::ValidationError("validate: --suite fast|full");
    bool all_pass = true;
    ordered_json rows = ordered_json::array();
    for (const auto& id : shc::validation::criteria_ids(a.suite)) {
        const auto r = shc::validation::run_criterion(id, a.threads);
        all_pass = all_pass && r.pass;
        std::printf("[%s] %-4s %-70s measured=%.6g tol=%.6g (%.1fs)\n",
                    r.pass ? "PASS" : "FAIL", r.id.c_str(), r.description.c_str(), r.measured,
                    r.tolerance, r.seconds);
        std::fflush(stdout);
        rows.push_back({{"id", r.id},
                        {"description", r.description},
                        {"pass", r.pass},
                        {"measured", r.measured},
                        {"tolerance", r.tolerance},
                        {"detail", r.detail},
                        {"seconds", r.seconds}});
    }
    ordered_json evidence = ordered_json::array();
    for (const auto& row : shc::validation::arctan_below_one_table()) {
        evidence.push_back({{"u", row.u},
                            {"quadrature", row.quadrature},
                            {"arctan", row.arctan},
                            {"difference", row.difference}});
    }
    ordered_json j;
    j["suite"] = a.suite;
    j["all_pass"] = all_pass;
    j["criteria"] = rows;
    j["arctan_below_one_evidence"] = evidence;
    if (!a.report.empty()) write_text(a.report, j.dump(2) + "\n");
    return all_pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral heat content laboratory for stable-subordinated Brownian motion"};
    app.require_subcommand(1);

    TailArgs tail_args;
    auto* tail = app.add_subcommand("tail", "survival function of a supremum functional");
    tail->add_option("--kind", tail_args.kind, "bm | cauchy-sup | skbm-sup");
    tail->add_option("--alpha", tail_args.alpha, "stability index");
    tail->add_option("--u", tail_args.u_values, "abscissa (repeatable)");
    tail->add_option("--u-min", tail_args.u_min);
    tail->add_option("--u-max", tail_args.u_max);
    tail->add_option("--u-points", tail_args.u_points);
    tail->add_flag("--u-log", tail_args.u_log, "log-spaced u grid");
    tail->add_option("--seed", tail_args.seed);
    tail->add_option("--out", tail_args.out);
    tail->add_option("--save-spec", tail_args.save_spec);
    tail->add_option("--spec", tail_args.from_spec);

    DensityArgs dens_args;
    auto* dens = app.add_subcommand("density", "subordinator density at time 1");
    dens->add_option("--alpha", dens_args.alpha);
    dens->add_option("--x", dens_args.x_values, "abscissa (repeatable)");
    dens->add_option("--x-min", dens_args.x_min);
    dens->add_option("--x-max", dens_args.x_max);
    dens->add_option("--x-points", dens_args.x_points);
    dens->add_option("--out", dens_args.out);
    dens->add_option("--save-spec", dens_args.save_spec);
    dens->add_option("--spec", dens_args.from_spec);

    HeatArgs heat_args;
    auto* heat = app.add_subcommand("heat", "heat content curve over a log t grid");
    heat->add_option("--process", heat_args.process, "ks | sk");
    heat->add_option("--method", heat_args.method, "series | mc");
    heat->add_option("--alpha", heat_args.alpha);
    heat->add_option("--interval", heat_args.interval, "a,b");
    heat->add_option("--t-min", heat_args.t_min);
    heat->add_option("--t-max", heat_args.t_max);
    heat->add_option("--points", heat_args.points);
    heat->add_option("--paths", heat_args.paths);
    heat->add_option("--steps", heat_args.steps);
    heat->add_option("--strata", heat_args.strata);
    heat->add_option("--seed", heat_args.seed);
    heat->add_option("--threads", heat_args.threads);
    heat->add_option("--out", heat_args.out);
    heat->add_option("--save-spec", heat_args.save_spec);
    heat->add_option("--spec", heat_args.from_spec);

    ExpandArgs expand_args;
    auto* expand = app.add_subcommand("expand", "theorem expansion coefficients");
    expand->add_option("--process", expand_args.process, "ksbm | skbm");
    expand->add_option("--alpha", expand_args.alpha);
    expand->add_option("--interval", expand_args.interval, "a,b");
    expand->add_option("--paths", expand_args.paths);
    expand->add_option("--steps", expand_args.steps);
    expand->add_option("--seed", expand_args.seed);
    expand->add_option("--threads", expand_args.threads);
    expand->add_option("--out", expand_args.out);
    expand->add_option("--save-spec", expand_args.save_spec);
    expand->add_option("--spec", expand_args.from_spec);

    FitArgs fit_args;
    auto* fit = app.add_subcommand("fit", "least-squares coefficients from a heat CSV");
    fit->add_option("--input", fit_args.input, "heat CSV file");
    fit->add_option("--basis", fit_args.basis, "comma list of p, tlog, t");
    fit->add_option("--window", fit_args.window, "t_min,t_max");
    fit->add_option("--process", fit_args.process, "ks | sk");
    fit->add_option("--alpha", fit_args.alpha);
    fit->add_option("--interval", fit_args.interval, "a,b");
    fit->add_option("--out", fit_args.out);
    fit->add_option("--save-spec", fit_args.save_spec);
    fit->add_option("--spec", fit_args.from_spec);

    ValidateArgs val_args;
    auto* val = app.add_subcommand("validate", "run the acceptance criteria");
    val->add_option("--suite", val_args.suite, "fast | full");
    val->add_option("--report", val_args.report, "JSON report path");
    val->add_option("--threads", val_args.threads);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(tail)) return cmd_tail(tail_args);
        if (app.got_subcommand(dens)) return cmd_density(dens_args);
        if (app.got_subcommand(heat)) return cmd_heat(heat_args);
        if (app.got_subcommand(expand)) return cmd_expand(expand_args);
        if (app.got_subcommand(fit)) return cmd_fit(fit_args);
        if (app.got_subcommand(val)) return cmd_validate(val_args);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
