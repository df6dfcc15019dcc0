// optodicke: command-line front end. Every subcommand reads one parameter
// table plus its own [<command>] table, validates everything, computes, and
// writes CSV/JSON files into --out.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "optodicke/config.hpp"
#include "optodicke/csv.hpp"
#include "optodicke/dynamics.hpp"
#include "optodicke/error.hpp"
#include "optodicke/exec.hpp"
#include "optodicke/experiment.hpp"
#include "optodicke/fockcheck.hpp"
#include "optodicke/meanfield.hpp"
#include "optodicke/quantum1d.hpp"
#include "optodicke/stability.hpp"

using namespace optodicke;
using config::json;
namespace fs = std::filesystem;

namespace {

// Keys accepted in each command table; each also becomes a --flag.
const std::map<std::string, std::vector<std::string>> command_keys = {
    {"potential", {"lambdas", "x_min", "x_max", "n_points"}},
    {"sweep", {"mu_min", "mu_max", "n_points", "log_near_one"}},
    {"spectrum", {"mu_min", "mu_max", "n_points"}},
    {"groundstate", {"n_points", "domain", "x_min", "x_max", "dtau", "tol", "max_steps", "squeezing_lambdas"}},
    {"wigner", {"n_points", "domain", "x_min", "x_max", "dtau", "tol", "max_steps", "p_min", "p_max", "n_p",
                "x_stride"}},
    {"fock", {"n_max_a", "n_max_b", "n_max_c", "budget", "operator"}},
    {"lab", {"P_over_Pc"}},
    {"cat", {"P_over_Pc"}},
    {"dynamics", {"t_end", "dt", "stride", "t_max", "residual_tol", "x0", "p0", "re_a0", "im_a0", "re_b0", "im_b0",
                  "relax", "bifurcation"}},
};

// Inline parameter flags and the config key they set.
const std::vector<std::pair<std::string, std::string>> parameter_flags = {
    {"g", "dimensionless.g"},         {"kappa", "dimensionless.kappa"}, {"eta", "dimensionless.eta"},
    {"eta-a", "dimensionless.eta_a"}, {"eta-b", "dimensionless.eta_b"}, {"lambda", "dimensionless.lambda"},
    {"mu", "dimensionless.mu"},       {"V", "dimensionless.V"},         {"delta", "dimensionless.delta"},
    {"gamma", "dimensionless.gamma"},
};

std::string flag_name(std::string key) {
    for (auto& c : key)
        if (c == '_') c = '-';
    return key;
}

// Flag values are TOML; "1,2,3" is shorthand for [1,2,3] and a bare word
// that is not a TOML value is taken as a string.
std::string as_toml(const std::string& v) {
    if (v.find(',') != std::string::npos && v.front() != '[' && v.front() != '"' && v.front() != '\'')
        return "[" + v + "]";
    const bool word = std::all_of(v.begin(), v.end(), [](char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; });
    if (word && v != "true" && v != "false") return "\"" + v + "\"";
    return v;
}

// Doubles that are too small to represent are reported as null.
json number_or_null(double v) { return std::isfinite(v) && v != 0.0 ? json(v) : json(nullptr); }

struct Run {
    std::string command;
    json root;
    fs::path out;
    config::ParameterSet params;

    double num(const char* key, double fallback) const { return config::get_number(root, command, key, fallback); }
    long integer(const char* key, long fallback) const { return config::get_integer(root, command, key, fallback); }
    std::size_t count(const char* key, long fallback) const {
        const long v = integer(key, fallback);
        require(v > 0, command + "." + key + " must be > 0");
        return static_cast<std::size_t>(v);
    }

    void write(const std::string& name, const std::string& text) const { write_text(out / name, text); }
    void write_json(const std::string& name, json j) const {
        j["input"] = echo();
        write(name, j.dump(2) + "\n");
    }

    json echo() const {
        json e;
        e["command"] = command;
        e["config"] = root;
        const auto p = params.as_dimensionless();
        e["dimensionless"] = {{"g", p.g},       {"kappa", p.kappa}, {"eta_a", p.eta_a}, {"eta_b", p.eta_b},
                              {"lambda", p.lambda}, {"V", p.V},     {"delta", p.delta}, {"gamma", p.gamma},
                              {"mu", nullptr},  {"eps0", nullptr}};
        if (p.eta_a != 0.0 || p.eta_b != 0.0) {
            e["dimensionless"]["mu"] = mu(p);
            e["dimensionless"]["eps0"] = epsilon0(p);
        }
        if (params.kind == config::ParameterSet::Kind::physical) {
            const auto& pp = params.physical;
            e["physical"] = {{"L", pp.L},       {"m", pp.m},          {"omega", pp.omega},
                             {"omega_centre", pp.omega_centre},       {"R_membrane", pp.R_membrane},
                             {"P", pp.P},       {"Q", pp.Q},          {"V", pp.V},
                             {"g", params.g},   {"kappa", params.kappa}};
        }
        return e;
    }
};

quantum1d::Grid1D grid_for(const Run& r, const DimensionlessParams& p) {
    const auto dom = config::get_string(r.root, r.command, "domain", "full");
    require(dom == "full" || dom == "half", r.command + ".domain must be \"full\" or \"half\"");
    const auto n = r.count("n_points", 2048);
    auto grid = quantum1d::default_grid(p, dom == "half" ? quantum1d::Domain::half : quantum1d::Domain::full, n);
    grid.x_min = r.num("x_min", grid.x_min);
    grid.x_max = r.num("x_max", grid.x_max);
    grid.validate();
    return grid;
}

quantum1d::ImagTimeConfig itc_for(const Run& r) {
    quantum1d::ImagTimeConfig c;
    c.dtau = r.num("dtau", c.dtau);
    c.tol = r.num("tol", c.tol);
    c.max_steps = r.count("max_steps", static_cast<long>(c.max_steps));
    require(c.dtau > 0.0 && c.tol > 0.0, r.command + ".dtau and tol must be > 0");
    return c;
}

void cmd_potential(const Run& r) {
    auto p = r.params.as_dimensionless();
    const auto lambdas = config::get_numbers(r.root, "potential", "lambdas", {0.5, 1.0, 2.0, 10.0});
    require(!lambdas.empty(), "potential.lambdas must not be empty");
    double reach = 0.0;
    for (double l : lambdas) {
        require(std::isfinite(l) && l >= 0.0, "potential.lambdas must be finite and >= 0");
        auto q = p;
        q.lambda = l;
        for (const auto& s : meanfield::steady_positions(q)) reach = std::max(reach, std::abs(s.x_ss));
    }
    const double half = std::max(10.0, 1.5 * reach);
    const double x_min = r.num("x_min", -half), x_max = r.num("x_max", half);
    const auto n = r.count("n_points", 401);
    require(x_min < x_max && n >= 2, "potential grid needs x_min < x_max and n_points >= 2");
    for (std::size_t k = 0; k < lambdas.size(); ++k) {
        p.lambda = lambdas[k];
        std::vector<std::string> lines(n);
        for_each_index(n, Exec::parallel, [&](std::size_t i) {
            const double x = x_min + (x_max - x_min) * static_cast<double>(i) / static_cast<double>(n - 1);
            lines[i] = format_double(x) + "," + format_double(meanfield::effective_potential(p, x)) + "\n";
        });
        std::string csv = "x,v_eff\n";
        for (const auto& l : lines) csv += l;
        char name[64];
        std::snprintf(name, sizeof name, "potential_%02zu.csv", k);
        r.write(name, csv);
    }
}

void cmd_sweep(const Run& r) {
    meanfield::GridSpec g;
    g.mu_min = r.num("mu_min", g.mu_min);
    g.mu_max = r.num("mu_max", g.mu_max);
    g.n_points = r.count("n_points", static_cast<long>(g.n_points));
    g.log_near_one = config::get_bool(r.root, "sweep", "log_near_one", false);
    r.write("sweep.csv", meanfield::sweep_csv(meanfield::sweep(r.params.as_dimensionless(), g)));
}

void cmd_spectrum(const Run& r) {
    meanfield::GridSpec g;
    g.mu_min = r.num("mu_min", 0.0);
    g.mu_max = r.num("mu_max", 3.0);
    g.n_points = r.count("n_points", 301);
    const auto t = stability::scan_spectrum(r.params.as_dimensionless(), meanfield::make_mu_grid(g));
    r.write("spectrum.csv", stability::spectrum_csv(t));
}

void cmd_groundstate(const Run& r) {
    const auto p = r.params.as_dimensionless();
    const auto grid = grid_for(r, p);
    const auto itc = itc_for(r);
    const auto lambdas = config::get_numbers(r.root, "groundstate", "squeezing_lambdas", {});
    const auto wf = quantum1d::ground_state(p, grid, itc);
    r.write("wavefunction.csv", quantum1d::wavefunction_csv(wf));
    const auto m = quantum1d::moments(wf);
    r.write_json("groundstate.json", {{"energy", wf.energy},
                                      {"steps", wf.steps},
                                      {"mean_x", m.mean_x},
                                      {"dx", m.dx},
                                      {"mean_p", m.mean_p},
                                      {"dp", m.dp},
                                      {"grid", {{"x_min", grid.x_min}, {"x_max", grid.x_max}, {"n_points", grid.n_points}}}});
    if (!lambdas.empty())
        r.write("squeezing.csv", quantum1d::squeezing_csv(quantum1d::squeezing_sweep(p, lambdas, grid.n_points)));
}

void cmd_wigner(const Run& r) {
    const auto p = r.params.as_dimensionless();
    const auto grid = grid_for(r, p);
    quantum1d::WignerOptions opt;
    opt.p_min = r.num("p_min", opt.p_min);
    opt.p_max = r.num("p_max", opt.p_max);
    opt.n_p = r.count("n_p", static_cast<long>(opt.n_p));
    opt.x_stride = r.count("x_stride", static_cast<long>(opt.x_stride));
    require(opt.p_min < opt.p_max, "wigner.p_min must be < p_max");
    const auto wf = quantum1d::ground_state(p, grid, itc_for(r));
    r.write("wigner.csv", quantum1d::wigner_csv(quantum1d::wigner(wf, opt)));
}

void cmd_fock(const Run& r) {
    const auto p = r.params.as_dimensionless();
    fockcheck::FockTruncation t;
    t.n_max_a = static_cast<int>(r.integer("n_max_a", t.n_max_a));
    t.n_max_b = static_cast<int>(r.integer("n_max_b", t.n_max_b));
    t.n_max_c = static_cast<int>(r.integer("n_max_c", t.n_max_c));
    t.budget = r.count("budget", static_cast<long>(t.budget));
    const auto op = config::get_string(r.root, "fock", "operator", "hamiltonian");
    const std::map<std::string, std::function<fockcheck::OperatorMatrix()>> ops = {
        {"hamiltonian", [&] { return fockcheck::build_hamiltonian(p, t); }},
        {"dicke", [&] { return fockcheck::build_dicke_hamiltonian(p, t); }},
        {"number", [&] { return fockcheck::total_photon_number(t); }},
        {"parity_minus", [&] { return fockcheck::parity_operator(t, -1); }},
        {"parity_plus", [&] { return fockcheck::parity_operator(t, +1); }},
        {"sx", [&] { return fockcheck::schwinger_operators(t).sx; }},
        {"sy", [&] { return fockcheck::schwinger_operators(t).sy; }},
        {"sz", [&] { return fockcheck::schwinger_operators(t).sz; }},
    };
    const auto it = ops.find(op);
    require(op == "none" || it != ops.end(), "fock.operator '" + op + "' is not known");

    json rep;
    rep["truncation"] = {{"n_max_a", t.n_max_a}, {"n_max_b", t.n_max_b}, {"n_max_c", t.n_max_c}};
    rep["number_conservation"] = fockcheck::check_number_conservation(p, t);
    try {
        rep["dicke_equivalence"] = fockcheck::check_dicke_equivalence(p, t);
    } catch (const ValidationError&) {
        rep["dicke_equivalence"] = nullptr; // defined only without pumping
    }
    rep["parity_minus"] = fockcheck::check_parity(p, t, -1);
    rep["parity_plus"] = fockcheck::check_parity(p, t, +1);
    const auto s = fockcheck::check_schwinger(t);
    rep["schwinger"] = {{"commutator", s.commutator}, {"sz_number", s.sz_number}, {"casimir", s.casimir}};
    if (it != ops.end()) {
        const auto m = it->second();
        rep["dimension"] = m.rows();
        rep["operator"] = op;
        r.write("operator_" + op + ".csv", fockcheck::operator_csv(m));
    }
    r.write_json("fock_report.json", rep);
}

json lab_json(const experiment::LabEstimate& e) {
    return {{"lambda", e.lambda}, {"lambda_c", e.lambda_c}, {"P_c", e.P_c},           {"P", e.P},
            {"mu_P", e.mu_P},     {"mu", e.mu},             {"eta", e.eta},           {"R_snr", e.R_snr},
            {"n_tot", e.n_tot},   {"n_diff", e.n_diff},     {"n_c", e.n_c},           {"mech_loss_W", e.mech_loss_W},
            {"opt_loss_W", e.opt_loss_W}};
}

double power_ratio(const Run& r) {
    require(r.params.kind == config::ParameterSet::Kind::physical, r.command + " needs a [physical] table");
    const auto& pp = r.params.physical;
    const double fallback = r.params.P_over_Pc ? *r.params.P_over_Pc : pp.P / critical_power(pp, r.params.g, r.params.kappa);
    const double ratio = r.num("P_over_Pc", fallback);
    require(std::isfinite(ratio) && ratio > 0.0, r.command + ".P_over_Pc must be > 0");
    return ratio;
}

void cmd_lab(const Run& r) {
    const double ratio = power_ratio(r);
    r.write_json("lab.json", lab_json(experiment::lab_report(r.params.physical, r.params.g, r.params.kappa, ratio)));
}

void cmd_cat(const Run& r) {
    experiment::CatSensitivity c;
    if (r.params.kind == config::ParameterSet::Kind::physical)
        c = experiment::cat_sensitivity(r.params.physical, r.params.g, r.params.kappa, power_ratio(r));
    else
        c = experiment::cat_sensitivity(r.params.dimensionless);
    json j;
    j["wkb"] = {{"Omega", c.wkb.Omega},
                {"E_well", c.wkb.E_well},
                {"a_turn", c.wkb.a_turn},
                {"dE_split", number_or_null(c.wkb.dE_split)},
                {"log10_dE_split", c.wkb.log10_dE_split}};
    if (c.has_imbalance)
        j["imbalance"] = {{"dE_imb", c.imbalance.dE_imb},
                          {"eta_sq_diff_critical", number_or_null(c.imbalance.eta_sq_diff_critical)},
                          {"log10_abs_eta_sq_diff_critical", c.imbalance.log10_abs_eta_sq_diff_critical}};
    else
        j["imbalance"] = nullptr;
    if (c.has_power)
        j["power"] = {{"dP_W", c.power.representable ? json(c.power.dP_W) : json(nullptr)},
                      {"representable", c.power.representable},
                      {"log10_dP", c.power.log10_dP},
                      {"C1", c.power.C1},
                      {"C2", c.power.C2}};
    r.write_json("cat.json", j);
}

void cmd_dynamics(const Run& r) {
    const auto p = r.params.as_dimensionless();
    dynamics::IntegratorConfig cfg;
    cfg.dt = r.num("dt", cfg.dt);
    cfg.t_max = r.num("t_max", cfg.t_max);
    cfg.residual_tol = r.num("residual_tol", cfg.residual_tol);
    cfg.stride = r.count("stride", static_cast<long>(cfg.stride));
    const double t_end = r.num("t_end", 100.0);
    const dynamics::StateVector init{r.num("x0", 0.1),   r.num("p0", 0.0),    r.num("re_a0", 0.0),
                                     r.num("im_a0", 0.0), r.num("re_b0", 0.0), r.num("im_b0", 0.0)};
    const bool relax = config::get_bool(r.root, "dynamics", "relax", false);
    const auto bracket = config::get_numbers(r.root, "dynamics", "bifurcation", {});
    require(bracket.empty() || bracket.size() == 2, "dynamics.bifurcation must be [lambda_lo, lambda_hi]");
    require(std::isfinite(t_end) && t_end > 0.0, "dynamics.t_end must be > 0");

    r.write("trajectory.csv", dynamics::trajectory_csv(dynamics::integrate(p, init, t_end, cfg)));
    json summary;
    if (relax) {
        const auto res = dynamics::relax_to_steady(p, init, cfg);
        summary["relax"] = {{"x_ss", res.steady.x_ss},
                            {"n_a", res.steady.n_a},
                            {"n_b", res.steady.n_b},
                            {"n_c", res.steady.n_c},
                            {"branch", meanfield::to_string(res.steady.branch)},
                            {"t", res.t},
                            {"mean_residual", res.mean_residual}};
    }
    if (!bracket.empty()) {
        const double lb = dynamics::locate_bifurcation(p, {bracket[0], bracket[1]}, cfg);
        summary["bifurcation"] = {{"lambda", lb}, {"lambda_over_lambda_c", lb / critical_coupling(p)}};
    }
    if (!summary.empty()) r.write_json("dynamics.json", summary);
}

const std::map<std::string, std::function<void(const Run&)>> handlers = {
    {"potential", cmd_potential}, {"sweep", cmd_sweep}, {"spectrum", cmd_spectrum},
    {"groundstate", cmd_groundstate}, {"wigner", cmd_wigner}, {"fock", cmd_fock},
    {"lab", cmd_lab}, {"cat", cmd_cat}, {"dynamics", cmd_dynamics},
};

const std::map<std::string, std::string> descriptions = {
    {"potential", "effective potential curves for a list of lambda"},
    {"sweep", "mean-field steady states over a mu grid"},
    {"spectrum", "linear excitation spectrum over a mu grid"},
    {"groundstate", "imaginary-time ground state and squeezing"},
    {"wigner", "Wigner function of the ground state"},
    {"fock", "truncated Fock space symmetry checks"},
    {"lab", "laboratory estimates from physical parameters"},
    {"cat", "tunnel splitting and pump-imbalance sensitivity"},
    {"dynamics", "semi-classical trajectory, relaxation, bifurcation"},
};

void report_error(const char* kind, const std::string& message, const std::map<std::string, double>& diag = {}) {
    json e = {{"error", kind}, {"message", message}};
    if (!diag.empty()) {
        json d = json::object();
        for (const auto& [k, v] : diag) d[k] = v;
        e["diagnostics"] = d;
    }
    std::cerr << e.dump() << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optomechanical Dicke-model simulator", "optodicke"};
    app.require_subcommand(1, 1);
    std::string config_path, out_dir = ".";
    int threads = 0;
    std::vector<std::string> sets;
    std::map<std::string, std::string> inline_values;
    app.add_option("--config", config_path, "TOML or JSON config file")->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--threads", threads, "OpenMP threads (default: all)");
    app.add_option("--set", sets, "override, e.g. physical.P_over_Pc=1.1");
    for (const auto& [flag, key] : parameter_flags)
        app.add_option("--" + flag, inline_values[key], "sets " + key);

    for (const auto& [name, keys] : command_keys) {
        auto* sub = app.add_subcommand(name, descriptions.at(name));
        sub->fallthrough();
        for (const auto& k : keys) sub->add_option("--" + flag_name(k), inline_values[name + "." + k], "sets " + name + "." + k);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << app.help();
        report_error("usage", e.what());
        return 1;
    }

    Run run;
    run.command = app.get_subcommands().front()->get_name();
    try {
        if (threads != 0) set_thread_count(threads);
        run.root = config_path.empty() ? json::object() : config::load_file(config_path);
        for (const auto& [key, value] : inline_values)
            if (!value.empty()) config::apply_override(run.root, key + "=" + as_toml(value));
        for (const auto& s : sets) config::apply_override(run.root, s);

        for (const auto& [k, v] : run.root.items())
            if (k != "dimensionless" && k != "physical" && !command_keys.count(k))
                throw ValidationError("unknown table '" + k + "'");
        for (const auto& [name, keys] : command_keys) config::check_keys(run.root, name, keys);
        run.params = config::parameters_from(run.root);
        run.out = out_dir;
        handlers.at(run.command)(run);
    } catch (const ValidationError& e) {
        report_error("validation", e.what());
        return 1;
    } catch (const NumericalError& e) {
        report_error("numerical", e.what(), e.diagnostics());
        return 2;
    } catch (const std::exception& e) {
        report_error("validation", e.what());
        return 1;
    }
    return 0;
}
