#include "lurq/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "lurq/counts.hpp"
#include "lurq/measures.hpp"
#include "lurq/optics.hpp"
#include "lurq/tomography.hpp"

namespace lurq::cli {

namespace {

using Json = nlohmann::ordered_json;

// Bad flags, unreadable files and other caller mistakes (exit 2).
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct StateOptions {
    std::string family;
    std::optional<double> theta_deg;
    std::string state_name;
    std::string damp;
    std::vector<std::string> hwp;
    std::vector<std::string> qwp;
};

struct SimOptions {
    std::string noise = "exact";
    double n = 5000.0;
    std::uint64_t seed = 1;
};

struct GridOptions {
    double start = 0.0;
    double stop = 45.0;
    int steps = 10;
};

struct LocalOps {
    Operator2 a = Operator2::Identity();
    Operator2 b = Operator2::Identity();
    bool any = false;
};

std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::optional<Ket4> named_ket(std::string_view name) {
    if (name == "singlet" || name == "psi-") return states::singlet();
    if (name == "psi+") return Ket4((states::hv() + states::vh()) / std::sqrt(2.0));
    if (name == "phi+") return states::phi_plus();
    if (name == "phi-") return Ket4((states::hh() - states::vv()) / std::sqrt(2.0));
    if (name == "hh") return states::hh();
    if (name == "hv") return states::hv();
    if (name == "vh") return states::vh();
    if (name == "vv") return states::vv();
    return std::nullopt;
}

std::optional<DensityMatrix> named_state(std::string_view name) {
    if (name == "mixed") {
        return DensityMatrix::maximally_mixed();
    }
    if (auto ket = named_ket(name)) {
        return pure_to_density(*ket);
    }
    return std::nullopt;
}

double parse_real(std::string_view text, std::string_view what) {
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size() || !std::isfinite(v)) {
        throw UsageError(std::string(what) + ": '" + std::string(text) + "' is not a number");
    }
    return v;
}

ChannelSpec parse_damp(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) {
        throw UsageError("--damp expects x:<p> or z:<p>");
    }
    const std::string_view basis = text.substr(0, colon);
    DampingBasis b;
    if (basis == "x" || basis == "X") {
        b = DampingBasis::X;
    } else if (basis == "z" || basis == "Z") {
        b = DampingBasis::Z;
    } else {
        throw UsageError("--damp basis must be x or z");
    }
    const double p = parse_real(text.substr(colon + 1), "--damp");
    if (p < 0.0 || p > 1.0) {
        throw UsageError("--damp probability must lie in [0, 1]");
    }
    return ChannelSpec(b, p);
}

// Waveplates act in the order given, HWPs before QWPs.
LocalOps parse_waveplates(const std::vector<std::string>& hwp, const std::vector<std::string>& qwp) {
    LocalOps ops;
    auto apply = [&ops](const std::string& text, WaveplateKind kind, std::string_view flag) {
        const auto colon = text.find(':');
        if (colon == std::string::npos) {
            throw UsageError(std::string(flag) + " expects <arm>:<deg> with arm A or B");
        }
        const std::string arm = text.substr(0, colon);
        const double deg = parse_real(std::string_view(text).substr(colon + 1), flag);
        const Operator2 u = waveplate_unitary({kind, deg_to_rad(deg)});
        if (arm == "A" || arm == "a") {
            ops.a = u * ops.a;
        } else if (arm == "B" || arm == "b") {
            ops.b = u * ops.b;
        } else {
            throw UsageError(std::string(flag) + " arm must be A or B");
        }
        ops.any = true;
    };
    for (const auto& w : hwp) apply(w, WaveplateKind::HWP, "--hwp");
    for (const auto& w : qwp) apply(w, WaveplateKind::QWP, "--qwp");
    return ops;
}

Ket4 family_ket(std::string_view family, double theta_deg) {
    if (family == "parallel") return prepare_parallel(deg_to_rad(theta_deg));
    if (family == "antiparallel") return prepare_antiparallel(deg_to_rad(theta_deg));
    throw UsageError("--family must be parallel or antiparallel");
}

// The prepared state after the damping channel, before any waveplate.
DensityMatrix source_state(const StateOptions& o, std::optional<double> theta_override = std::nullopt) {
    std::optional<DensityMatrix> rho;
    if (!o.state_name.empty()) {
        if (!o.family.empty()) {
            throw UsageError("--state and --family are mutually exclusive");
        }
        rho = named_state(o.state_name);
        if (!rho) {
            throw UsageError("unknown state '" + o.state_name + "'");
        }
    } else {
        const auto theta = theta_override ? theta_override : o.theta_deg;
        if (o.family.empty() || !theta) {
            throw UsageError("a state needs --state <name> or --family with --theta");
        }
        rho = pure_to_density(family_ket(o.family, *theta));
    }
    if (!o.damp.empty()) {
        rho = phase_damping(*rho, parse_damp(o.damp));
    }
    return *rho;
}

DensityMatrix prepared_state(const StateOptions& o, std::optional<double> theta_override = std::nullopt) {
    const DensityMatrix rho = source_state(o, theta_override);
    const LocalOps ops = parse_waveplates(o.hwp, o.qwp);
    return ops.any ? apply_local_unitary(rho, ops.a, ops.b) : rho;
}

SimConfig sim_config(const SimOptions& s, std::uint64_t seed_offset = 0) {
    const auto noise = parse_noise_model(s.noise);
    if (!noise) {
        throw UsageError("--noise must be exact or poisson");
    }
    if (!(s.n > 0.0) || !std::isfinite(s.n)) {
        throw UsageError("--n must be positive");
    }
    return {s.n, *noise, RandomSeed{s.seed + seed_offset}};
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw UsageError("cannot read '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

CountsTable load_table(const std::string& path) { return parse_counts_csv(read_file(path)); }

void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
    if (out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(out_path, std::ios::binary);
    if (!file) {
        throw UsageError("cannot write '" + out_path + "'");
    }
    file << text;
}

Json matrix_json(const Eigen::Matrix3d& m) {
    Json rows = Json::array();
    for (int r = 0; r < 3; ++r) {
        rows.push_back({m(r, 0), m(r, 1), m(r, 2)});
    }
    return rows;
}

Json vector_json(const Eigen::Vector4d& v) { return {v(0), v(1), v(2), v(3)}; }

Json table_inputs(const std::string& path, const CountsTable& t) {
    Json j;
    j["file"] = path;
    if (!t.metadata.source.empty()) j["source"] = t.metadata.source;
    if (t.metadata.noise) j["noise"] = std::string(to_string(*t.metadata.noise));
    if (t.metadata.seed) j["seed"] = t.metadata.seed->value;
    return j;
}

Json k_json(const KResult& k, const SchmidtCoeffs& s) {
    Json j;
    j["value"] = k.k;
    if (k.delta_k) j["delta_k"] = *k.delta_k;
    j["bound"] = k.bound;
    j["a"] = s.a();
    j["b"] = s.b();
    j["expectations"] = {k.expectations[0], k.expectations[1], k.expectations[2], k.expectations[3]};
    return j;
}

// Noise can push the counts estimate of G slightly outside [0, 3].
double safe_concurrence_from_g(double g) { return concurrence_from_g(std::clamp(g, 0.0, 3.0)); }

std::vector<double> theta_grid(const GridOptions& g) {
    if (g.steps < 2) {
        throw UsageError("--steps must be at least 2");
    }
    if (!(g.start >= 0.0 && g.stop <= 45.0 && g.start < g.stop)) {
        throw UsageError("theta grid must satisfy 0 <= start < stop <= 45");
    }
    std::vector<double> out;
    for (int k = 0; k < g.steps; ++k) {
        out.push_back(k + 1 == g.steps ? g.stop : g.start + (g.stop - g.start) * k / (g.steps - 1));
    }
    return out;
}

std::string join_args(std::span<const std::string> args) {
    std::string s = "lurq";
    for (const auto& a : args) {
        s += ' ';
        s += a;
    }
    return s;
}

void add_state_flags(CLI::App* cmd, StateOptions& o, bool with_theta = true) {
    cmd->add_option("--family", o.family, "State family: parallel | antiparallel");
    if (with_theta) {
        cmd->add_option("--theta", o.theta_deg, "Pump HWP angle in degrees");
    }
    cmd->add_option("--state", o.state_name, "Named state: singlet, psi+, phi+, phi-, hh, hv, vh, vv, mixed");
    cmd->add_option("--damp", o.damp, "Phase damping on both arms: x:<p> | z:<p>");
    cmd->add_option("--hwp", o.hwp, "Half-wave plate <arm>:<deg>, repeatable");
    cmd->add_option("--qwp", o.qwp, "Quarter-wave plate <arm>:<deg>, repeatable");
}

void add_sim_flags(CLI::App* cmd, SimOptions& s) {
    cmd->add_option("--noise", s.noise, "exact | poisson")->capture_default_str();
    cmd->add_option("--n", s.n, "Mean pair flux per setting")->capture_default_str();
    cmd->add_option("--seed", s.seed, "Random seed")->capture_default_str();
}

void add_grid_flags(CLI::App* cmd, GridOptions& g) {
    cmd->add_option("--start", g.start, "First theta in degrees")->capture_default_str();
    cmd->add_option("--stop", g.stop, "Last theta in degrees")->capture_default_str();
    cmd->add_option("--steps", g.steps, "Number of grid points")->capture_default_str();
}

Json sim_json(const SimConfig& cfg) {
    Json j;
    j["noise"] = std::string(to_string(cfg.noise));
    j["n"] = cfg.n_per_setting;
    if (cfg.noise == NoiseModel::Poisson) j["seed"] = cfg.seed.value;
    return j;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Two-qubit entanglement from polarization coincidence counts", "lurq"};
    app.require_subcommand(1);

    std::string out_path;
    StateOptions state;
    SimOptions sim;
    GridOptions grid;

    // analyze
    std::string analyze_file;
    bool analyze_tomo = false;
    std::optional<double> analyze_theta;
    auto* analyze = app.add_subcommand("analyze", "G, its error and derived concurrence from a counts file");
    analyze->add_option("counts_file", analyze_file)->required();
    analyze->add_flag("--tomo", analyze_tomo, "Also report the tomography concurrence");
    analyze->add_option("--theta", analyze_theta, "Evaluate K against (cos 2t, sin 2t), t in degrees");
    analyze->add_option("--out", out_path, "Write the report here instead of stdout");

    // simulate
    std::string settings_mode = "full";
    auto* simulate = app.add_subcommand("simulate", "Simulate a counts table");
    add_state_flags(simulate, state);
    add_sim_flags(simulate, sim);
    simulate->add_option("--settings", settings_mode, "full (36) | k (12)")->capture_default_str();
    simulate->add_option("--out", out_path, "Write the CSV here instead of stdout");

    // sweep-g
    auto* sweep_g = app.add_subcommand("sweep-g", "G and concurrence over the pump angle");
    add_state_flags(sweep_g, state, false);
    add_sim_flags(sweep_g, sim);
    add_grid_flags(sweep_g, grid);
    sweep_g->add_option("--out", out_path, "Write the CSV here instead of stdout");

    // sweep-k
    GridOptions k_grid{2.5, 42.5, 17};
    auto* sweep_k = app.add_subcommand("sweep-k", "K for the target family and two product states");
    add_state_flags(sweep_k, state, false);
    add_sim_flags(sweep_k, sim);
    add_grid_flags(sweep_k, k_grid);
    sweep_k->add_option("--out", out_path, "Write the CSV here instead of stdout");

    // ilut-check
    std::vector<std::string> ilut_files;
    double ilut_k = 3.0;
    auto* ilut = app.add_subcommand("ilut-check", "Compare G before and after a local transformation");
    ilut->add_option("counts_files", ilut_files, "Two counts files to compare");
    add_state_flags(ilut, state);
    add_sim_flags(ilut, sim);
    ilut->add_option("--k", ilut_k, "Verdict threshold in combined sigmas")->capture_default_str();
    ilut->add_option("--out", out_path, "Write the report here instead of stdout");

    // tomo
    std::string tomo_file;
    std::string reference;
    auto* tomo = app.add_subcommand("tomo", "Reconstruct the density matrix from a counts file");
    tomo->add_option("counts_file", tomo_file)->required();
    tomo->add_option("--reference", reference, "Named state or counts file to compare against");
    tomo->add_option("--out", out_path, "Write the report here instead of stdout");

    std::vector<const char*> argv = {"lurq"};
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (analyze->parsed()) {
            const CountsTable table = load_table(analyze_file);
            const GResult g = g_from_counts(table);
            Json r;
            r["command"] = "analyze";
            r["inputs"] = table_inputs(analyze_file, table);
            r["g"] = g.g;
            r["delta_g"] = g.delta_g.value_or(0.0);
            r["covariance"] = matrix_json(g.covariance);
            r["concurrence_from_g"] = safe_concurrence_from_g(g.g);
            if (analyze_tomo) {
                r["tomo_concurrence"] = tomo_concurrence(table);
            }
            if (analyze_theta) {
                const SchmidtCoeffs s = SchmidtCoeffs::from_pump_angle(deg_to_rad(*analyze_theta));
                r["k"] = k_json(k_from_counts(table, s), s);
            }
            emit(r.dump(2) + "\n", out_path, out);
        } else if (simulate->parsed()) {
            const DensityMatrix rho = prepared_state(state);
            std::vector<Setting> settings;
            if (settings_mode == "full") {
                settings = full_settings();
            } else if (settings_mode == "k") {
                settings = k_mode_settings();
            } else {
                throw UsageError("--settings must be full or k");
            }
            CountsTable table = simulate_counts(rho, settings, sim_config(sim));
            table.metadata.source = join_args(args);
            emit(write_counts_csv(table), out_path, out);
        } else if (sweep_g->parsed()) {
            if (state.family.empty()) {
                state.family = "parallel";
            }
            std::ostringstream csv;
            csv << "theta_deg,g,delta_g,c_from_g,c_true,c_tomo\n";
            const auto thetas = theta_grid(grid);
            for (std::size_t k = 0; k < thetas.size(); ++k) {
                const DensityMatrix rho = prepared_state(state, thetas[k]);
                const SimConfig cfg = sim_config(sim, k);
                const auto settings = full_settings();
                const CountsTable table = simulate_counts(rho, settings, cfg);
                const GResult g = g_from_counts(table);
                csv << format_number(thetas[k]) << ',' << format_number(g.g) << ','
                    << format_number(g.delta_g.value_or(0.0)) << ',' << format_number(safe_concurrence_from_g(g.g)) << ','
                    << format_number(concurrence(rho)) << ',' << format_number(tomo_concurrence(table)) << '\n';
            }
            emit(csv.str(), out_path, out);
        } else if (sweep_k->parsed()) {
            if (state.family.empty()) {
                state.family = "parallel";
            }
            if (!state.state_name.empty()) {
                throw UsageError("sweep-k takes --family, not --state");
            }
            std::ostringstream csv;
            csv << "theta_deg,k0,k1,k2,bound\n";
            const auto thetas = theta_grid(k_grid);
            const auto settings = k_mode_settings();
            StateOptions hh_opts = state;
            hh_opts.family.clear();
            hh_opts.state_name = "hh";
            StateOptions vh_opts = hh_opts;
            vh_opts.state_name = "vh";
            const DensityMatrix rho_hh = prepared_state(hh_opts);
            const DensityMatrix rho_vh = prepared_state(vh_opts);
            for (std::size_t k = 0; k < thetas.size(); ++k) {
                const SchmidtCoeffs s = SchmidtCoeffs::from_pump_angle(deg_to_rad(thetas[k]));
                const DensityMatrix rho0 = prepared_state(state, thetas[k]);
                // Three independent tables per grid point.
                const double k0 = k_from_counts(simulate_counts(rho0, settings, sim_config(sim, 3 * k)), s).k;
                const double k1 = k_from_counts(simulate_counts(rho_hh, settings, sim_config(sim, 3 * k + 1)), s).k;
                const double k2 = k_from_counts(simulate_counts(rho_vh, settings, sim_config(sim, 3 * k + 2)), s).k;
                csv << format_number(thetas[k]) << ',' << format_number(k0) << ',' << format_number(k1) << ','
                    << format_number(k2) << ',' << format_number(k_separable_bound(s)) << '\n';
            }
            emit(csv.str(), out_path, out);
        } else if (ilut->parsed()) {
            Json r;
            r["command"] = "ilut-check";
            CountsTable before;
            CountsTable after;
            if (ilut_files.size() == 2) {
                before = load_table(ilut_files[0]);
                after = load_table(ilut_files[1]);
                r["inputs"] = {table_inputs(ilut_files[0], before), table_inputs(ilut_files[1], after)};
            } else if (ilut_files.empty()) {
                const DensityMatrix rho = source_state(state);
                const LocalOps ops = parse_waveplates(state.hwp, state.qwp);
                const DensityMatrix rho_t = ops.any ? apply_local_unitary(rho, ops.a, ops.b) : rho;
                const auto settings = full_settings();
                const SimConfig cfg = sim_config(sim);
                before = simulate_counts(rho, settings, cfg);
                after = simulate_counts(rho_t, settings, sim_config(sim, 1));
                Json in;
                in["command_line"] = join_args(args);
                in["simulation"] = sim_json(cfg);
                r["inputs"] = in;
            } else {
                throw UsageError("ilut-check takes two counts files or a state specification");
            }
            if (!(ilut_k > 0.0)) {
                throw UsageError("--k must be positive");
            }
            const GResult g = g_from_counts(before);
            const GResult gp = g_from_counts(after);
            const double diff = std::abs(g.g - gp.g);
            const double sigma = std::hypot(g.delta_g.value_or(0.0), gp.delta_g.value_or(0.0));
            // Exact tables have zero sigma; rounding still needs a floor.
            const double threshold = std::max(ilut_k * sigma, 1e-9);
            r["g"] = g.g;
            r["delta_g"] = g.delta_g.value_or(0.0);
            r["g_prime"] = gp.g;
            r["delta_g_prime"] = gp.delta_g.value_or(0.0);
            r["difference"] = diff;
            r["combined_sigma"] = sigma;
            r["k"] = ilut_k;
            r["threshold"] = threshold;
            r["verdict"] = diff <= threshold ? "pass" : "fail";
            emit(r.dump(2) + "\n", out_path, out);
        } else if (tomo->parsed()) {
            const CountsTable table = load_table(tomo_file);
            const Operator4 raw = linear_inversion(pauli_vector_from_counts(table));
            const DensityMatrix rho = project_to_physical(raw);
            Eigen::SelfAdjointEigenSolver<Operator4> raw_es(0.5 * (raw + raw.adjoint()), Eigen::EigenvaluesOnly);
            Json r;
            r["command"] = "tomo";
            r["inputs"] = table_inputs(tomo_file, table);
            r["raw_eigenvalues"] = vector_json(raw_es.eigenvalues());
            r["eigenvalues"] = vector_json(rho.eigenvalues());
            r["purity"] = rho.purity();
            r["tomo_concurrence"] = concurrence(rho);
            Json re = Json::array();
            Json im = Json::array();
            for (int i = 0; i < 4; ++i) {
                Json rr = Json::array();
                Json ii = Json::array();
                for (int j = 0; j < 4; ++j) {
                    rr.push_back(rho.matrix()(i, j).real());
                    ii.push_back(rho.matrix()(i, j).imag());
                }
                re.push_back(rr);
                im.push_back(ii);
            }
            r["density_matrix"] = {{"real", re}, {"imag", im}};
            if (!reference.empty()) {
                const auto named = named_state(reference);
                const DensityMatrix ref = named ? *named : reconstruct_state(load_table(reference));
                r["reference"] = reference;
                r["fidelity"] = fidelity(rho, ref);
            }
            emit(r.dump(2) + "\n", out_path, out);
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return e.code() == ErrorCode::MissingSetting ? kExitIncomplete : kExitInput;
    }
    return kExitOk;
}

}  // namespace lurq::cli
