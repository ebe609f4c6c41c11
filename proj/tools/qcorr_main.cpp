#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qcorr/experiment.hpp"
#include "qcorr/validate.hpp"

namespace {

// locale-independent, 12 significant digits
std::string fmt(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 12);
    return std::string(buf, res.ptr);
}

// flat key = value file; keys mirror the long flags without the dashes.
// applied only where neither a flag nor an environment variable set the
// option, so the precedence is flags > environment > file > defaults.
std::vector<std::pair<std::string, std::string>> parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read config file " + path);
    std::vector<std::pair<std::string, std::string>> entries;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto strip = [](std::string s) {
            size_t a = s.find_first_not_of(" \t\r");
            size_t b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        std::string text = strip(line);
        if (text.empty() || text[0] == '#') continue;
        auto eq = text.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": expected key = value");
        entries.emplace_back(strip(text.substr(0, eq)), strip(text.substr(eq + 1)));
    }
    return entries;
}

struct RunOptions {
    std::string config_path;
    std::string model = "bose";
    std::string state = "PsiB";
    std::string noise = "none";
    double gamma0 = 0.1;
    int nf = 20;
    int alpha = 0;  // 0 = inferred from the noise kind
    std::vector<double> v{0.0};
    int histories = 2000;
    bool histories_given = false;
    double dt = 0.01;
    double tmax = 0.0;  // 0 = kind-dependent default
    int stride = 0;     // 0 = about 400 samples
    std::string measured = "B";
    std::uint64_t seed = 0;
    std::string out = "-";
    double gamma_inf = 1.25e-4;
    double gamma_sup = 1.25e2;
    bool fixed_rates = false;
    int threads = 0;
    int grid_theta = 64;
    int grid_phi = 128;
    int refine_rounds = 3;
    double disc_tol = 1e-4;
};

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) values.push_back(std::stod(item));
    if (values.empty()) throw std::runtime_error("empty list value");
    return values;
}

void apply_config_entry(RunOptions& opt, const std::string& key, const std::string& value) {
    if (key == "model") opt.model = value;
    else if (key == "state") opt.state = value;
    else if (key == "noise") opt.noise = value;
    else if (key == "gamma0") opt.gamma0 = std::stod(value);
    else if (key == "nf") opt.nf = std::stoi(value);
    else if (key == "alpha") opt.alpha = std::stoi(value);
    else if (key == "v") opt.v = parse_double_list(value);
    else if (key == "histories") { opt.histories = std::stoi(value); opt.histories_given = true; }
    else if (key == "dt") opt.dt = std::stod(value);
    else if (key == "tmax") opt.tmax = std::stod(value);
    else if (key == "stride") opt.stride = std::stoi(value);
    else if (key == "measured-party") opt.measured = value;
    else if (key == "seed") opt.seed = std::stoull(value);
    else if (key == "out") opt.out = value;
    else if (key == "gamma-inf") opt.gamma_inf = std::stod(value);
    else if (key == "gamma-sup") opt.gamma_sup = std::stod(value);
    else if (key == "fixed-rates") opt.fixed_rates = (value == "true" || value == "1");
    else if (key == "threads") opt.threads = std::stoi(value);
    else if (key == "grid-theta") opt.grid_theta = std::stoi(value);
    else if (key == "grid-phi") opt.grid_phi = std::stoi(value);
    else if (key == "refine-rounds") opt.refine_rounds = std::stoi(value);
    else if (key == "disc-tol") opt.disc_tol = std::stod(value);
    else throw std::runtime_error("unknown config key: " + key);
}

qcorr::Scenario resolve_scenario(RunOptions& opt) {
    qcorr::Scenario s;
    if (opt.model == "bose") {
        s.params.model = qcorr::LatticeModel::BoseRing;
        s.params.sites = 4;
    } else if (opt.model == "fermi") {
        s.params.model = qcorr::LatticeModel::FermiDimer;
    } else {
        throw CLI::ValidationError("--model", "expected bose or fermi");
    }
    s.state = qcorr::parse_state(opt.state);
    s.noise.kind = qcorr::parse_noise(opt.noise);
    s.noise.gamma0 = opt.gamma0;
    s.noise.n_fluctuators = opt.nf;
    s.noise.band = {opt.gamma_inf, opt.gamma_sup};
    s.noise.redraw_rates = !opt.fixed_rates;
    if (opt.alpha != 0) {
        bool ok = (opt.alpha == 1 && s.noise.kind == qcorr::NoiseKind::Pink) ||
                  (opt.alpha == 2 && s.noise.kind == qcorr::NoiseKind::Brown);
        if (!ok) throw CLI::ValidationError("--alpha", "must match the noise kind (pink=1, brown=2)");
    }
    s.v_list = opt.v;
    if (opt.tmax <= 0.0) {
        bool colored = s.noise.kind == qcorr::NoiseKind::Pink ||
                       s.noise.kind == qcorr::NoiseKind::Brown;
        opt.tmax = colored ? 50.0 : 20.0;
    }
    if (!opt.histories_given && s.noise.kind == qcorr::NoiseKind::None)
        opt.histories = 1;  // all noiseless histories are identical

    int n_steps = std::max(1, static_cast<int>(std::llround(opt.tmax / opt.dt)));
    if (opt.stride <= 0) opt.stride = std::max(1, (n_steps + 200) / 400);
    n_steps = ((n_steps + opt.stride - 1) / opt.stride) * opt.stride;

    s.evolution.dt = opt.dt;
    s.evolution.n_steps = n_steps;
    s.evolution.histories = opt.histories;
    s.evolution.record_stride = opt.stride;
    s.evolution.threads = opt.threads;
    if (opt.measured == "A") s.measured = qcorr::MeasuredParty::A;
    else if (opt.measured == "B") s.measured = qcorr::MeasuredParty::B;
    else throw CLI::ValidationError("--measured-party", "expected A or B");
    s.discord = {opt.grid_theta, opt.grid_phi, opt.refine_rounds, opt.disc_tol};
    s.seed = opt.seed;
    return s;
}

void write_header(std::ostream& os, const RunOptions& opt, const qcorr::Scenario& s,
                  double v) {
    os << "# qcorr run\n";
    os << "# model = " << opt.model << "\n";
    os << "# state = " << opt.state << "\n";
    os << "# noise = " << qcorr::noise_name(s.noise.kind) << "\n";
    if (s.noise.kind == qcorr::NoiseKind::Rtn)
        os << "# gamma0 = " << fmt(s.noise.gamma0) << "\n";
    if (s.noise.kind == qcorr::NoiseKind::Pink || s.noise.kind == qcorr::NoiseKind::Brown) {
        os << "# nf = " << s.noise.n_fluctuators << "\n";
        os << "# gamma_inf = " << fmt(s.noise.band.gamma_inf) << "\n";
        os << "# gamma_sup = " << fmt(s.noise.band.gamma_sup) << "\n";
        os << "# rates = " << (s.noise.redraw_rates ? "redrawn-per-history" : "fixed") << "\n";
    }
    os << "# v = " << fmt(v) << "\n";
    os << "# histories = " << s.evolution.histories << "\n";
    os << "# dt = " << fmt(s.evolution.dt) << "\n";
    os << "# tmax = " << fmt(s.evolution.n_steps * s.evolution.dt) << "\n";
    os << "# stride = " << s.evolution.record_stride << "\n";
    os << "# measured-party = " << (s.measured == qcorr::MeasuredParty::A ? "A" : "B") << "\n";
    os << "# discord-grid = " << s.discord.grid_theta << "x" << s.discord.grid_phi
       << " rounds " << s.discord.refine_rounds << " tol " << fmt(s.discord.tol) << "\n";
    os << "# seed = " << s.seed << "\n";
    os << "tau,P11,E_modes,E_P,D_P,purity,S_D,conv\n";
}

void write_records(std::ostream& os, const std::vector<qcorr::CorrelationRecord>& records) {
    for (const auto& r : records) {
        os << fmt(r.tau) << ',' << fmt(r.p11) << ',' << fmt(r.e_modes) << ','
           << fmt(r.e_p) << ',' << fmt(r.d_p) << ',' << fmt(r.purity) << ','
           << fmt(r.s_d) << ',' << fmt(r.conv) << '\n';
    }
}

std::string path_for_v(const std::string& out, double v, bool multiple) {
    if (!multiple) return out;
    std::string tag = "_v" + fmt(v);
    auto dot = out.find_last_of('.');
    if (dot == std::string::npos || dot == 0) return out + tag;
    return out.substr(0, dot) + tag + out.substr(dot);
}

int command_run(RunOptions& opt) {
    qcorr::Scenario scenario = resolve_scenario(opt);
    std::vector<qcorr::ScenarioResult> results = qcorr::run_scenario(scenario);
    bool multiple = results.size() > 1;
    for (const auto& result : results) {
        int flagged = qcorr::convergence_flags(result);
        if (flagged > 0)
            std::cerr << "warning: " << flagged
                      << " samples above the convergence threshold at v = "
                      << fmt(result.v) << "\n";
        if (opt.out == "-") {
            write_header(std::cout, opt, scenario, result.v);
            write_records(std::cout, result.records);
        } else {
            std::string path = path_for_v(opt.out, result.v, multiple);
            std::ofstream os(path, std::ios::binary);
            if (!os) {
                std::cerr << "error: cannot open " << path << "\n";
                return 1;
            }
            write_header(os, opt, scenario, result.v);
            write_records(os, result.records);
        }
    }
    return 0;
}

struct SpectrumOptions {
    std::string noise = "pink";
    double gamma0 = 0.1;
    int nf = 20;
    int alpha = 0;
    double gamma_inf = 1.25e-4;
    double gamma_sup = 1.25e2;
    double dt = 0.1;
    int samples = 32768;
    int realizations = 64;
    std::vector<double> band{0.04, 0.4};
    std::uint64_t seed = 0;
    std::string out = "-";
};

int command_spectrum(SpectrumOptions& opt) {
    qcorr::NoiseParams params;
    params.kind = qcorr::parse_noise(opt.noise);
    if (params.kind == qcorr::NoiseKind::None)
        throw CLI::ValidationError("--noise", "constant channel has no spectrum");
    params.gamma0 = opt.gamma0;
    params.n_fluctuators = opt.nf;
    params.band = {opt.gamma_inf, opt.gamma_sup};
    if (opt.alpha != 0) {
        bool ok = (opt.alpha == 1 && params.kind == qcorr::NoiseKind::Pink) ||
                  (opt.alpha == 2 && params.kind == qcorr::NoiseKind::Brown);
        if (!ok) throw CLI::ValidationError("--alpha", "must match the noise kind (pink=1, brown=2)");
    }
    if (opt.band.size() != 2) throw CLI::ValidationError("--band", "expected f1,f2");

    qcorr::PsdEstimate est =
        qcorr::estimate_psd(params, opt.dt, opt.samples, opt.realizations, opt.seed);
    double slope = qcorr::spectral_slope(est, opt.band[0], opt.band[1]);

    std::ostringstream body;
    body << "# qcorr spectrum\n";
    body << "# noise = " << qcorr::noise_name(params.kind) << "\n";
    if (params.kind == qcorr::NoiseKind::Rtn)
        body << "# gamma0 = " << fmt(params.gamma0) << "\n";
    else {
        body << "# nf = " << params.n_fluctuators << "\n";
        body << "# gamma_inf = " << fmt(params.band.gamma_inf) << "\n";
        body << "# gamma_sup = " << fmt(params.band.gamma_sup) << "\n";
    }
    body << "# dt = " << fmt(opt.dt) << "\n";
    body << "# samples = " << opt.samples << "\n";
    body << "# realizations = " << opt.realizations << "\n";
    body << "# fit-band = " << fmt(opt.band[0]) << "," << fmt(opt.band[1]) << "\n";
    body << "# alpha_hat = " << fmt(slope) << "\n";
    body << "# seed = " << opt.seed << "\n";
    body << "frequency,psd\n";
    for (size_t k = 0; k < est.frequency.size(); ++k)
        body << fmt(est.frequency[k]) << ',' << fmt(est.psd[k]) << '\n';

    if (opt.out == "-") {
        std::cout << body.str();
    } else {
        std::ofstream os(opt.out, std::ios::binary);
        if (!os) {
            std::cerr << "error: cannot open " << opt.out << "\n";
            return 1;
        }
        os << body.str();
    }
    return 0;
}

int report(const std::vector<qcorr::CheckResult>& checks) {
    bool all = true;
    for (const auto& c : checks) {
        std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name;
        if (!c.detail.empty()) std::cout << ": " << c.detail;
        std::cout << "\n";
        all = all && c.pass;
    }
    return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-particle Hubbard dynamics under classical noise: "
                 "entanglement and discord of identical particles"};
    app.require_subcommand(1);

    RunOptions run_opt;
    CLI::App* run = app.add_subcommand("run", "simulate a scenario and emit CSV records");
    run->add_option("--config", run_opt.config_path, "flat key=value configuration file");
    run->add_option("--model", run_opt.model, "bose|fermi")->envname("QCORR_MODEL");
    run->add_option("--state", run_opt.state,
                    "PsiB|XiB|PsiBprime|PsiF|XiF|UpsilonF")->envname("QCORR_STATE");
    run->add_option("--noise", run_opt.noise, "none|rtn|pink|brown")->envname("QCORR_NOISE");
    run->add_option("--gamma0", run_opt.gamma0,
                    "fluctuator switching rate, units of |T|")->envname("QCORR_GAMMA0");
    run->add_option("--nf", run_opt.nf, "fluctuators per channel")->envname("QCORR_NF");
    run->add_option("--alpha", run_opt.alpha, "spectral exponent, 1|2")->envname("QCORR_ALPHA");
    run->add_option("--v", run_opt.v, "interaction strengths V/T")
        ->delimiter(',')->envname("QCORR_V");
    run->add_option("--histories", run_opt.histories, "Monte-Carlo histories")
        ->envname("QCORR_HISTORIES");
    run->add_option("--dt", run_opt.dt, "step, units of 1/|T|")->envname("QCORR_DT");
    run->add_option("--tmax", run_opt.tmax, "horizon in tau")->envname("QCORR_TMAX");
    run->add_option("--stride", run_opt.stride, "steps between samples (0 = auto)")
        ->envname("QCORR_STRIDE");
    run->add_option("--measured-party", run_opt.measured, "A|B")
        ->envname("QCORR_MEASURED_PARTY");
    run->add_option("--seed", run_opt.seed, "master seed")->envname("QCORR_SEED");
    run->add_option("--out", run_opt.out, "output path (- for stdout)")->envname("QCORR_OUT");
    run->add_option("--gamma-inf", run_opt.gamma_inf, "rate window lower edge")
        ->envname("QCORR_GAMMA_INF");
    run->add_option("--gamma-sup", run_opt.gamma_sup, "rate window upper edge")
        ->envname("QCORR_GAMMA_SUP");
    run->add_flag("--fixed-rates", run_opt.fixed_rates,
                  "draw ensemble rates once instead of per history")
        ->envname("QCORR_FIXED_RATES");
    run->add_option("--threads", run_opt.threads, "worker threads (0 = hardware)")
        ->envname("QCORR_THREADS");
    run->add_option("--grid-theta", run_opt.grid_theta, "discord grid, polar points")
        ->envname("QCORR_GRID_THETA");
    run->add_option("--grid-phi", run_opt.grid_phi, "discord grid, azimuthal points")
        ->envname("QCORR_GRID_PHI");
    run->add_option("--refine-rounds", run_opt.refine_rounds, "discord refinement rounds")
        ->envname("QCORR_REFINE_ROUNDS");
    run->add_option("--disc-tol", run_opt.disc_tol, "discord refinement tolerance")
        ->envname("QCORR_DISC_TOL");

    SpectrumOptions spec_opt;
    CLI::App* spectrum = app.add_subcommand("spectrum",
                                            "estimate a noise power spectrum as CSV");
    spectrum->add_option("--noise", spec_opt.noise, "rtn|pink|brown");
    spectrum->add_option("--gamma0", spec_opt.gamma0, "fluctuator switching rate");
    spectrum->add_option("--nf", spec_opt.nf, "fluctuators per channel");
    spectrum->add_option("--alpha", spec_opt.alpha, "spectral exponent, 1|2");
    spectrum->add_option("--gamma-inf", spec_opt.gamma_inf, "rate window lower edge");
    spectrum->add_option("--gamma-sup", spec_opt.gamma_sup, "rate window upper edge");
    spectrum->add_option("--dt", spec_opt.dt, "sampling step");
    spectrum->add_option("--samples", spec_opt.samples, "grid points (power of two)");
    spectrum->add_option("--realizations", spec_opt.realizations, "averaged periodograms");
    spectrum->add_option("--band", spec_opt.band, "slope fit band f1,f2")->delimiter(',');
    spectrum->add_option("--seed", spec_opt.seed, "master seed");
    spectrum->add_option("--out", spec_opt.out, "output path (- for stdout)");

    int props_states = 200;
    std::uint64_t props_seed = 0;
    CLI::App* props = app.add_subcommand("props",
                                         "run the discord property suite on random states");
    props->add_option("--states", props_states, "random states per property");
    props->add_option("--seed", props_seed, "master seed");

    std::uint64_t oracle_seed = 0;
    CLI::App* oracle = app.add_subcommand("oracle", "run small brute-force cross-checks");
    oracle->add_option("--seed", oracle_seed, "master seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            run_opt.histories_given = run->count("--histories") > 0;
            if (!run_opt.config_path.empty()) {
                for (const auto& [key, value] : parse_config_file(run_opt.config_path)) {
                    if (run->count("--" + key) > 0) continue;  // flag or env wins
                    apply_config_entry(run_opt, key, value);
                }
            }
            return command_run(run_opt);
        }
        if (spectrum->parsed()) return command_spectrum(spec_opt);
        if (props->parsed()) return report(qcorr::property_suite(props_states, props_seed));
        if (oracle->parsed()) return report(qcorr::oracle_checks(oracle_seed));
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
