// Copyright 2026 The qcharm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qcharm/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>

#include "CLI11.hpp"
#include "qcharm/io.hpp"
#include "qcharm/mitigation.hpp"
#include "qcharm/parallel.hpp"
#include "qcharm/vqite.hpp"

namespace qcharm::cli {

namespace fs = std::filesystem;
using io::json;

namespace {

constexpr double kLiteralOmega = 1.2;

class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct NonConvergence {};

std::string utc_now() {
    const std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::uint64_t parse_seed(std::string_view text, std::string_view what) {
    std::uint64_t v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
        throw UsageError(std::string(what) + " is not an unsigned integer: " + std::string(text));
    return v;
}

ChannelId parse_channel(const std::string& s) {
    try {
        return channel_from_label(s).id;
    } catch (const std::invalid_argument&) {
        throw UsageError("unknown channel '" + s + "' (expected 1S0, 3S1 or 1P1)");
    }
}

std::vector<ChannelId> parse_channels(const std::string& s) {
    if (s == "all") return {kAllChannels.begin(), kAllChannels.end()};
    return {parse_channel(s)};
}

Source parse_source(const std::string& s) {
    if (s == "literal") return Source::Literal;
    if (s == "computed") return Source::Computed;
    throw UsageError("unknown source '" + s + "' (expected literal or computed)");
}

std::string_view source_name(Source s) { return s == Source::Literal ? "literal" : "computed"; }

Mode parse_mode(const std::string& s) {
    if (s == "exact") return Mode::Exact;
    if (s == "sampled") return Mode::Sampled;
    throw UsageError("unknown mode '" + s + "' (expected exact or sampled)");
}

std::string channel_label(ChannelId id) { return std::string(channel(id).label); }

// Options shared by every artifact-producing command.
struct Common {
    std::string out = "out";
    std::optional<std::string> seed;
    int jobs = 1;

    void attach(CLI::App* app) {
        app->add_option("--out", out, "Output directory")->capture_default_str();
        app->add_option("--seed", seed, "Master seed (falls back to $QVQITE_SEED, then 0)");
        app->add_option("--jobs", jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
    }
};

// Collects outputs and input hashes and writes the run manifest.
class Run {
  public:
    Run(std::string tag, const std::vector<std::string>& args, const Common& common, std::ostream& out)
        : tag_(std::move(tag)), args_(args), dir_(common.out), jobs_(common.jobs), out_(out), started_(utc_now()) {
        if (common.seed) {
            seed_ = parse_seed(*common.seed, "--seed");
        } else if (const char* env = std::getenv("QVQITE_SEED"); env && *env) {
            seed_ = parse_seed(env, "QVQITE_SEED");
        }
        config_ = json::object();
    }

    std::uint64_t seed() const { return seed_; }
    int jobs() const { return jobs_; }
    StreamKey key() const { return StreamKey(seed_); }
    json& config() { return config_; }
    std::ostream& out() { return out_; }

    std::string input(const fs::path& p) {
        auto text = io::read_file(p);
        inputs_.push_back({{"path", p.generic_string()}, {"fnv1a", io::fnv1a_hex(text)}});
        return text;
    }

    json input_json(const fs::path& p) {
        const auto text = input(p);
        try {
            return io::parse_json(text);
        } catch (const io::FormatError& e) {
            throw io::FormatError(p.generic_string() + ": " + e.what());
        }
    }

    void write(const std::string& name, const std::string& content) {
        io::write_file(dir_ / name, content);
        outputs_.push_back({{"file", name}, {"fnv1a", io::fnv1a_hex(content)}});
    }

    void finish(int exit_code) {
        json m;
        m["tool"] = kToolName;
        m["version"] = kVersion;
        m["command"] = args_;
        m["config"] = config_;
        m["seed"] = seed_;
        m["jobs"] = jobs_;
        m["inputs"] = inputs_;
        m["started"] = started_;
        m["finished"] = utc_now();
        m["exit_code"] = exit_code;
        m["outputs"] = outputs_;
        io::write_file(dir_ / ("manifest_" + tag_ + ".json"), io::dump(m));
    }

  private:
    std::string tag_;
    std::vector<std::string> args_;
    fs::path dir_;
    int jobs_;
    std::ostream& out_;
    std::string started_;
    std::uint64_t seed_ = 0;
    json config_;
    json inputs_ = json::array();
    json outputs_ = json::array();
};

std::optional<NoiseModel> parse_noise(const std::string& spec, Run& run) {
    if (spec.empty() || spec == "none") return std::nullopt;
    if (spec == "default-readout") return NoiseModel::default_readout();
    if (spec == "default-depol") return NoiseModel::default_depolarizing();
    if (spec == "default-full") return NoiseModel::default_full();
    return io::noise_from_json(run.input_json(spec));
}

// Readout calibration for every (register, measured set) the command uses.
struct CalibrationSet {
    int n_qubits;
    std::vector<int> measured;
};

std::unique_ptr<CalibratedCorrector> build_corrector(const std::vector<CalibrationSet>& sets, const NoiseModel& noise,
                                                     std::uint64_t shots, StreamKey key, Run& run) {
    auto corr = std::make_unique<CalibratedCorrector>();
    json cals = json::array();
    for (std::size_t i = 0; i < sets.size(); ++i) {
        auto cal = calibrate(sets[i].n_qubits, sets[i].measured, shots, noise, key.child(i));
        cals.push_back(io::to_json(cal));
        corr->add(std::move(cal));
    }
    run.write("calibration.json", io::dump(cals));
    return corr;
}

json theta_json(const Theta& t) { return json(t); }

// ---- model ---------------------------------------------------------------------

struct ModelOpts {
    Common common;
    std::string action;
    std::string channel = "all";
    std::string source;
    double omega = kLiteralOmega;
    int levels = 4;
    int dim = 4;
    double omega_min = 0.8, omega_max = 2.0, omega_step = 0.05;
    bool dipole = false;
};

void check_literal_omega(Source s, double omega) {
    if (s == Source::Literal && std::abs(omega - kLiteralOmega) > 1e-12)
        throw UsageError("literal matrices exist only at omega = 1.2 fm^-1");
}

int cmd_model(const ModelOpts& o, Run& run) {
    const auto channels = parse_channels(o.channel);
    const ModelParams params = ModelParams::charmonium();
    auto& cfg = run.config();
    cfg["action"] = o.action;
    cfg["channel"] = o.channel;
    cfg["omega"] = o.omega;
    std::ostream& out = run.out();

    if (o.action == "matrices") {
        std::vector<Source> sources;
        const std::string src = o.source.empty() ? "both" : o.source;
        if (src == "both")
            sources = {Source::Literal, Source::Computed};
        else
            sources = {parse_source(src)};
        cfg["source"] = src;
        for (Source s : sources) {
            const double omega = s == Source::Literal ? kLiteralOmega : o.omega;
            for (ChannelId id : channels) {
                const auto name = "matrix_" + channel_label(id) + "_" + std::string(source_name(s)) + ".json";
                run.write(name, io::dump(io::to_json(channel_hamiltonian(id, s, omega, o.dim))));
                out << name << '\n';
            }
            if (o.dipole || o.channel == "all") {
                const auto name = "dipole_" + std::string(source_name(s)) + ".json";
                run.write(name, io::dump(io::to_json(dipole_matrix(s, omega, o.dim))));
                out << name << '\n';
            }
        }
        return kExitOk;
    }

    if (o.action == "exact") {
        if (o.levels < 1) throw UsageError("--levels must be >= 1");
        cfg["levels"] = o.levels;
        for (ChannelId id : channels) {
            io::CsvTable csv({"channel", "level", "energy_fm_inv", "mass_mev"});
            for (const auto& s : solve_radial(channel(id), params, o.levels)) {
                const double mass = mass_from_energy(s.energy, params);
                csv.row({channel_label(id), std::int64_t{s.level + 1}, s.energy, mass});
                out << channel_label(id) << " n=" << s.level + 1 << "  E = " << io::format_double(s.energy, 6)
                    << " fm^-1  M = " << io::format_double(mass, 6) << " MeV\n";
            }
            run.write("exact_" + channel_label(id) + ".csv", csv.str());
        }
        return kExitOk;
    }

    if (o.action == "diag") {
        const Source s = parse_source(o.source.empty() ? "literal" : o.source);
        check_literal_omega(s, o.omega);
        cfg["source"] = source_name(s);
        cfg["dim"] = o.dim;
        for (ChannelId id : channels) {
            const auto spec = diagonalize(channel_hamiltonian(id, s, o.omega, o.dim));
            std::vector<std::string> header;
            for (std::size_t k = 0; k < spec.values.size(); ++k) header.push_back("E" + std::to_string(k + 1));
            io::CsvTable csv(header);
            std::vector<io::CsvCell> row(spec.values.begin(), spec.values.end());
            csv.row(row);
            run.write("diag_" + channel_label(id) + "_" + std::string(source_name(s)) + ".csv", csv.str());
            out << channel_label(id) << ' ' << source_name(s) << ':';
            for (double v : spec.values) out << ' ' << io::format_double(v, 6);
            out << '\n';
        }
        return kExitOk;
    }

    // sweep
    if (!(o.omega_step > 0.0) || !(o.omega_min > 0.0) || o.omega_max < o.omega_min)
        throw UsageError("sweep needs 0 < omega-min <= omega-max and a positive step");
    std::vector<double> omegas;
    const int n = static_cast<int>(std::floor((o.omega_max - o.omega_min) / o.omega_step + 1e-9)) + 1;
    for (int k = 0; k < n; ++k) omegas.push_back(o.omega_min + k * o.omega_step);
    cfg["omega_min"] = o.omega_min;
    cfg["omega_max"] = o.omega_max;
    cfg["omega_step"] = o.omega_step;
    cfg["dim"] = o.dim;
    for (ChannelId id : channels) {
        const auto rows = sweep_omega(channel(id), omegas, params, o.dim, run.jobs());
        std::vector<std::string> header{"omega"};
        for (int k = 0; k < o.dim; ++k) header.push_back("E" + std::to_string(k + 1));
        io::CsvTable csv(header);
        for (const auto& r : rows) {
            std::vector<io::CsvCell> row{r.omega};
            for (double v : r.eigenvalues) row.emplace_back(v);
            csv.row(row);
        }
        run.write("sweep_" + channel_label(id) + ".csv", csv.str());
        out << "sweep_" << channel_label(id) << ".csv: " << rows.size() << " rows\n";
    }
    return kExitOk;
}

// ---- pauli ---------------------------------------------------------------------

struct PauliOpts {
    Common common;
    std::string input;
    std::string channel;
    std::string source = "literal";
    double omega = kLiteralOmega;
    bool dipole = false;
    bool roundtrip = false;
};

int cmd_pauli(const PauliOpts& o, Run& run) {
    HamiltonianMatrix m;
    std::string name;
    auto& cfg = run.config();
    if (!o.input.empty()) {
        m = io::matrix_from_json(run.input_json(o.input));
        name = fs::path(o.input).stem().string();
        cfg["input"] = o.input;
    } else {
        const Source s = parse_source(o.source);
        check_literal_omega(s, o.omega);
        cfg["source"] = source_name(s);
        cfg["omega"] = o.omega;
        if (o.dipole) {
            m = dipole_matrix(s, o.omega);
            name = "dipole_" + std::string(source_name(s));
        } else {
            if (o.channel.empty()) throw UsageError("pauli needs --input, --channel or --dipole");
            const ChannelId id = parse_channel(o.channel);
            m = channel_hamiltonian(id, s, o.omega);
            name = channel_label(id) + "_" + std::string(source_name(s));
            cfg["channel"] = o.channel;
        }
    }
    const PauliSum sum = decompose(m.entries);
    run.write("pauli_" + name + ".json", io::dump(io::to_json(sum)));

    std::string table;
    for (const auto& t : sum.terms()) {
        table += t.string.str() + "  ";
        if (t.coeff.real() == 0.0 && t.coeff.imag() != 0.0)
            table += io::format_double(t.coeff.imag(), 6) + "i";
        else if (t.coeff.imag() != 0.0)
            table += io::format_double(t.coeff.real(), 6) + "  " + io::format_double(t.coeff.imag(), 6) + "i";
        else
            table += io::format_double(t.coeff.real(), 6);
        table += '\n';
    }
    run.write("pauli_" + name + ".txt", table);
    run.out() << table;
    if (o.roundtrip)
        run.out() << "roundtrip max deviation: " << io::format_double(max_abs_diff(reconstruct(sum), m.entries), 3)
                  << '\n';
    return kExitOk;
}

// ---- vqite ---------------------------------------------------------------------

struct ExecOpts {
    std::string mode = "exact";
    std::uint64_t shots = 20000;
    int trials = 1;
    std::string noise;
    bool mitigate = false;
    std::uint64_t calib_shots = 0;

    void attach(CLI::App* app) {
        app->add_option("--mode", mode, "exact or sampled")->capture_default_str();
        app->add_option("--shots", shots, "Shots per circuit")->capture_default_str()->check(CLI::PositiveNumber);
        app->add_option("--trials", trials, "Independent repetitions")->capture_default_str()->check(CLI::PositiveNumber);
        app->add_option("--noise", noise, "Noise model: JSON path, none, default-readout, default-depol, default-full");
        app->add_flag("--mitigate-readout", mitigate, "Correct readout with a calibration run");
        app->add_option("--calib-shots", calib_shots, "Calibration shots per basis state (default: --shots)");
    }
};

Exec make_exec(const ExecOpts& o, Run& run) {
    Exec exec;
    exec.config.mode = parse_mode(o.mode);
    exec.config.shots = o.shots;
    exec.config.seed = run.seed();
    exec.config.trials = o.trials;
    exec.config.noise = parse_noise(o.noise, run);
    if (exec.config.noise && exec.exact()) throw UsageError("--noise needs --mode sampled");
    if (o.mitigate && (exec.exact() || !exec.config.noise || !exec.config.noise->has_readout()))
        throw UsageError("--mitigate-readout needs --mode sampled and a noise model with readout error");
    auto& cfg = run.config();
    cfg["mode"] = o.mode;
    cfg["shots"] = exec.exact() ? 0 : o.shots;
    cfg["trials"] = exec.exact() ? 1 : o.trials;
    cfg["noise"] = exec.config.noise ? io::to_json(*exec.config.noise) : json(nullptr);
    cfg["mitigate_readout"] = o.mitigate;
    return exec;
}

struct VqiteOpts {
    Common common;
    ExecOpts exec;
    std::string channel;
    std::string hamiltonian;
    std::string source = "literal";
    double omega = kLiteralOmega;
    int states = 1;
    std::vector<std::string> deflate;
    EvolutionConfig evo;
    double epsilon = -1.0;
};

int cmd_vqite(const VqiteOpts& o, Run& run) {
    auto& cfg = run.config();
    PauliSum h;
    std::string label;
    if (!o.hamiltonian.empty()) {
        const json j = run.input_json(o.hamiltonian);
        h = j.contains("terms") ? io::pauli_from_json(j) : decompose(io::matrix_from_json(j).entries);
        label = fs::path(o.hamiltonian).stem().string();
        cfg["hamiltonian"] = o.hamiltonian;
    } else {
        if (o.channel.empty()) throw UsageError("vqite needs --channel or --hamiltonian");
        const ChannelId id = parse_channel(o.channel);
        const Source s = parse_source(o.source);
        check_literal_omega(s, o.omega);
        h = decompose(channel_hamiltonian(id, s, o.omega).entries);
        label = channel_label(id);
        cfg["channel"] = label;
        cfg["source"] = source_name(s);
        cfg["omega"] = o.omega;
    }
    if (h.n_qubits() != 2) throw UsageError("the ansatz needs a two-qubit Hamiltonian");

    std::vector<Theta> prior;
    for (const auto& p : o.deflate) {
        const json j = run.input_json(p);
        if (!j.contains("states")) throw io::FormatError(p + ": no \"states\" array");
        for (const auto& s : j.at("states")) prior.push_back(s.at("theta").get<Theta>());
    }

    EvolutionConfig evo = o.evo;
    if (o.epsilon >= 0.0) evo.epsilon = o.epsilon;
    evo.validate();
    Exec exec = make_exec(o.exec, run);
    cfg["states"] = o.states;
    cfg["dtau"] = evo.dtau;
    cfg["max_steps"] = evo.max_steps;
    cfg["theta_init"] = evo.theta_init;
    cfg["penalty_alpha"] = evo.penalty_alpha;
    cfg["epsilon"] = evo.regularization(exec);
    cfg["deflate"] = o.deflate;

    std::unique_ptr<CalibratedCorrector> corr;
    if (o.exec.mitigate) {
        corr = build_corrector({{2, {0}}, {2, {1}}, {2, {0, 1}}}, *exec.config.noise,
                               o.exec.calib_shots ? o.exec.calib_shots : o.exec.shots, run.key().child(1), run);
        exec.corrector = corr.get();
    }

    const int trials = exec.exact() ? 1 : o.exec.trials;
    std::vector<SpectrumRun> runs(static_cast<std::size_t>(trials));
    const StreamKey base = run.key().child(0);
    parallel_for(runs.size(), run.jobs(),
                 [&](std::size_t t) { runs[t] = spectrum(h, evo, o.states, exec, base.child(t), prior); });

    bool converged = true;
    for (std::size_t t = 0; t < runs.size(); ++t) {
        converged = converged && runs[t].all_converged;
        for (std::size_t k = 0; k < runs[t].states.size(); ++k) {
            io::CsvTable csv({"step", "tau", "E", "theta0", "theta1", "theta2", "theta_dot_norm"});
            for (const auto& r : runs[t].states[k].trace.rows)
                csv.row({std::int64_t{r.step}, r.tau, r.energy, r.theta[0], r.theta[1], r.theta[2], r.theta_dot_norm});
            run.write("trace_" + label + "_s" + std::to_string(k) + "_t" + std::to_string(t) + ".csv", csv.str());
        }
    }

    json summary;
    summary["channel"] = label;
    summary["mode"] = o.exec.mode;
    summary["trials"] = trials;
    json states = json::array();
    for (int k = 0; k < o.states; ++k) {
        std::vector<double> es;
        for (const auto& r : runs) es.push_back(r.states[static_cast<std::size_t>(k)].energy);
        double mean = 0.0;
        for (double e : es) mean += e;
        mean /= static_cast<double>(es.size());
        double err = runs[0].states[static_cast<std::size_t>(k)].energy_error;
        if (es.size() > 1) {
            double ss = 0.0;
            for (double e : es) ss += (e - mean) * (e - mean);
            err = std::sqrt(ss / static_cast<double>(es.size() - 1) / static_cast<double>(es.size()));
        }
        const auto& st0 = runs[0].states[static_cast<std::size_t>(k)];
        bool conv = true;
        for (const auto& r : runs) conv = conv && r.states[static_cast<std::size_t>(k)].converged;
        states.push_back({{"index", k},
                          {"energy", mean},
                          {"energy_error", err},
                          {"theta", theta_json(st0.theta)},
                          {"steps", st0.trace.rows.size()},
                          {"converged", conv},
                          {"per_trial", es}});
        run.out() << label << " state " << k << ": E = " << io::format_double(mean, 6);
        if (!exec.exact()) run.out() << " +- " << io::format_double(err, 2);
        run.out() << (conv ? "" : "  (not converged)") << '\n';
    }
    summary["states"] = std::move(states);
    summary["converged"] = converged;
    run.write("summary_" + label + ".json", io::dump(summary));
    if (!converged) throw NonConvergence{};
    return kExitOk;
}

// ---- amp -----------------------------------------------------------------------

struct AmpOpts {
    Common common;
    ExecOpts exec;
    std::string kind;
    std::string method;
    std::string theta_source = "eigvec";
    std::string source = "literal";
    double omega = kLiteralOmega;
};

AmpMethod parse_method(const std::string& s) {
    if (s == "direct") return AmpMethod::Direct;
    if (s == "swap") return AmpMethod::Swap;
    if (s == "hadamard") return AmpMethod::Hadamard;
    throw UsageError("unknown method '" + s + "' (expected direct, swap or hadamard)");
}

// Fills the thetas of `specs` from eigenvectors or from vqite summaries in a directory.
void bind_thetas(std::vector<TransitionSpec>& specs, const std::string& theta_source, Source source, double omega,
                 Run& run) {
    std::map<ChannelId, std::vector<Theta>> cache;
    auto thetas = [&](ChannelId id) -> const std::vector<Theta>& {
        auto it = cache.find(id);
        if (it != cache.end()) return it->second;
        std::vector<Theta> v;
        if (theta_source == "eigvec") {
            v = eigvec_thetas(id, source, omega);
        } else {
            const auto path = fs::path(theta_source) / ("summary_" + channel_label(id) + ".json");
            if (!fs::exists(path)) throw UsageError("missing " + path.generic_string());
            for (const auto& s : run.input_json(path).at("states")) v.push_back(s.at("theta").get<Theta>());
        }
        return cache.emplace(id, std::move(v)).first->second;
    };
    auto bind = [&](StateRef& ref) {
        const auto& v = thetas(ref.channel);
        if (ref.index >= static_cast<int>(v.size()))
            throw UsageError("no theta for state " + ref.label() + " in " + theta_source);
        ref.theta = v[static_cast<std::size_t>(ref.index)];
    };
    for (auto& s : specs) {
        bind(s.initial);
        bind(s.final_state);
    }
}

int cmd_amp(const AmpOpts& o, Run& run) {
    const TransitionKind kind = o.kind == "m1" ? TransitionKind::M1 : TransitionKind::E1;
    const AmpMethod method = parse_method(o.method.empty() ? (kind == TransitionKind::M1 ? "direct" : "hadamard") : o.method);
    if ((kind == TransitionKind::M1) == (method == AmpMethod::Hadamard))
        throw UsageError("method " + std::string(to_string(method)) + " does not apply to " + o.kind + " transitions");
    const Source source = parse_source(o.source);
    check_literal_omega(source, o.omega);
    auto& cfg = run.config();
    cfg["kind"] = o.kind;
    cfg["method"] = to_string(method);
    cfg["theta_source"] = o.theta_source;
    cfg["source"] = source_name(source);
    cfg["omega"] = o.omega;
    Exec exec = make_exec(o.exec, run);

    auto specs = kind == TransitionKind::M1 ? default_m1_transitions() : default_e1_transitions();
    bind_thetas(specs, o.theta_source, source, o.omega, run);
    const PauliSum op = decompose(dipole_matrix(source, o.omega).entries);

    std::unique_ptr<CalibratedCorrector> corr;
    if (o.exec.mitigate) {
        std::vector<CalibrationSet> sets;
        if (method == AmpMethod::Direct)
            sets = {{2, {0, 1}}};
        else
            sets = {{method == AmpMethod::Swap ? 5 : 3, {0}}};
        corr = build_corrector(sets, *exec.config.noise, o.exec.calib_shots ? o.exec.calib_shots : o.exec.shots,
                               run.key().child(1), run);
        exec.corrector = corr.get();
    }

    std::vector<AmplitudeResult> results(specs.size());
    const StreamKey base = run.key().child(0);
    parallel_for(specs.size(), run.jobs(),
                 [&](std::size_t i) { results[i] = evaluate_transition(specs[i], method, op, exec, base.child(i)); });

    io::CsvTable csv({"transition", "method", "mode", "shots", "trials", "value", "stderr"});
    for (const auto& r : results) {
        csv.row({r.transition, std::string(to_string(r.method)), o.exec.mode,
                 static_cast<std::int64_t>(exec.exact() ? 0 : o.exec.shots), std::int64_t{r.trials}, r.value, r.error});
        run.out() << r.transition << "  " << io::format_double(r.value, 6);
        if (!exec.exact()) run.out() << " +- " << io::format_double(r.error, 2);
        run.out() << '\n';
    }
    run.write("amp_" + o.kind + "_" + std::string(to_string(method)) + "_" + o.exec.mode + ".csv", csv.str());
    return kExitOk;
}

// ---- zne -----------------------------------------------------------------------

struct ZneOpts {
    Common common;
    std::string target = "direct";
    int transition = 0;
    std::string noise = "default-depol";
    std::vector<int> scales{1, 3, 5, 7};
    std::vector<int> orders{1, 2};
    std::uint64_t shots = 20000;
    int trials = 10;
    int bootstrap = 200;
    std::string theta_source = "eigvec";
};

int cmd_zne(const ZneOpts& o, Run& run) {
    if (o.target != "direct" && o.target != "swap") throw UsageError("--target must be direct or swap");
    auto specs = default_m1_transitions();
    if (o.transition < 0 || o.transition >= static_cast<int>(specs.size()))
        throw UsageError("--transition must index the M1 list (0.." + std::to_string(specs.size() - 1) + ")");
    auto spec = specs[static_cast<std::size_t>(o.transition)];
    std::vector<TransitionSpec> one{spec};
    bind_thetas(one, o.theta_source, Source::Literal, kLiteralOmega, run);
    spec = one[0];

    FoldingPlan plan;
    plan.scales = o.scales;
    plan.orders = o.orders;
    plan.trials = o.trials;
    plan.bootstrap = o.bootstrap;
    if (!std::is_sorted(plan.scales.begin(), plan.scales.end()) || plan.scales.front() != 1)
        throw UsageError("--scales must be ascending and start at 1");
    try {
        plan.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    const auto noise = parse_noise(o.noise, run);

    auto& cfg = run.config();
    cfg["target"] = o.target;
    cfg["transition"] = spec.name();
    cfg["theta_source"] = o.theta_source;
    cfg["noise"] = noise ? io::to_json(*noise) : json(nullptr);
    cfg["scales"] = o.scales;
    cfg["orders"] = o.orders;
    cfg["shots"] = o.shots;
    cfg["trials"] = o.trials;
    cfg["bootstrap"] = o.bootstrap;

    const bool swap = o.target == "swap";
    const Circuit base = swap ? swap_test_circuit(spec.initial.theta, spec.final_state.theta)
                              : overlap_circuit(spec.initial.theta, spec.final_state.theta);
    const std::vector<int> measured = swap ? std::vector<int>{0} : std::vector<int>{0, 1};
    const double reference = m1_direct(spec.initial.theta, spec.final_state.theta, Exec{}, run.key()).value;

    const StreamKey eval_key = run.key().child(0);
    auto evaluate = [&](int scale, int trial) {
        ShotData d = sample_outcome(fold(base, scale), measured, 0, o.shots, noise ? &*noise : nullptr,
                                    eval_key.child({static_cast<std::uint64_t>(scale), static_cast<std::uint64_t>(trial)}));
        if (swap) {
            d.a = 2.0;
            d.b = -1.0;
        }
        return d;
    };
    const ZneResult res = zne(evaluate, plan, run.key().child(1), run.jobs());

    io::CsvTable csv({"row", "scale", "order", "value", "error", "physical"});
    io::CsvTable series({"series", "scale", "value"});
    for (const auto& p : res.points) {
        csv.row({"point", std::int64_t{p.scale}, "", p.mean, p.error, ""});
        series.row({"measured", std::int64_t{p.scale}, p.mean});
        run.out() << "scale " << p.scale << ": " << io::format_double(p.mean, 6) << " +- "
                  << io::format_double(p.error, 2) << '\n';
    }
    for (const auto& f : res.fits) {
        csv.row({"fit", std::int64_t{0}, std::int64_t{f.order}, f.value, f.bootstrap_std, f.physical ? "1" : "0"});
        if (f.physical) series.row({"order" + std::to_string(f.order), std::int64_t{0}, f.value});
        run.out() << "order " << f.order << " extrapolation: " << io::format_double(f.value, 6) << " +- "
                  << io::format_double(f.bootstrap_std, 2) << (f.physical ? "" : "  (unphysical)") << '\n';
    }
    csv.row({"reference", std::int64_t{0}, "", reference, 0.0, "1"});
    series.row({"noise_free", std::int64_t{0}, reference});
    run.out() << "noise-free: " << io::format_double(reference, 6) << '\n';
    run.write("zne_" + o.target + ".csv", csv.str());
    run.write("zne_" + o.target + "_series.csv", series.str());
    return kExitOk;
}

// ---- replay --------------------------------------------------------------------

struct ReplayOpts {
    std::string manifest;
    std::string out;
    std::optional<int> jobs;
};

int cmd_replay(const ReplayOpts& o, std::ostream& out, std::ostream& err) {
    const json m = io::read_json(o.manifest);
    const auto original = m.at("command").get<std::vector<std::string>>();
    const fs::path dir = o.out.empty() ? fs::path(o.manifest).parent_path() / "replay" : fs::path(o.out);

    static const std::set<std::string> kStripped{"--out", "--seed", "--jobs"};
    std::vector<std::string> args;
    for (std::size_t i = 0; i < original.size(); ++i) {
        const auto& a = original[i];
        const auto eq = a.find('=');
        if (kStripped.contains(a.substr(0, eq))) {
            if (eq == std::string::npos) ++i;  // skip the value too
            continue;
        }
        args.push_back(a);
    }
    args.insert(args.end(), {"--out", dir.generic_string(), "--seed", std::to_string(m.at("seed").get<std::uint64_t>()),
                             "--jobs", std::to_string(o.jobs.value_or(m.at("jobs").get<int>()))});
    const int code = run(args, out, err);
    if (code != m.at("exit_code").get<int>()) {
        err << "replay: exit code " << code << " differs from recorded " << m.at("exit_code").get<int>() << '\n';
        return kExitFailure;
    }
    bool same = true;
    for (const auto& f : m.at("outputs")) {
        const auto name = f.at("file").get<std::string>();
        const auto path = dir / name;
        const bool ok = fs::exists(path) && io::fnv1a_hex(io::read_file(path)) == f.at("fnv1a").get<std::string>();
        out << (ok ? "identical " : "DIFFERS   ") << name << '\n';
        same = same && ok;
    }
    return same ? kExitOk : kExitFailure;
}

}  // namespace

HamiltonianMatrix channel_hamiltonian(ChannelId id, Source source, double omega, int dim) {
    if (source == Source::Literal) {
        if (dim != 4) throw std::invalid_argument("literal matrices are 4x4");
        return literal_hamiltonian(id);
    }
    const ModelParams params = ModelParams::charmonium();
    const Channel ch = channel(id);
    return ho_matrix(ch, BasisSpec::make(ch, omega, params, dim), params);
}

HamiltonianMatrix dipole_matrix(Source source, double omega, int dim) {
    if (source == Source::Literal) {
        if (dim != 4) throw std::invalid_argument("literal matrices are 4x4");
        return literal_e1();
    }
    const double mu = ModelParams::charmonium().mu;
    return e1_matrix(BasisSpec::make(0, omega, mu, dim), BasisSpec::make(1, omega, mu, dim));
}

std::vector<Theta> eigvec_thetas(ChannelId id, Source source, double omega) {
    const auto spec = diagonalize(channel_hamiltonian(id, source, omega, 4));
    std::vector<Theta> out;
    for (std::size_t k = 0; k < spec.values.size(); ++k) {
        std::vector<double> v(4);
        for (std::size_t i = 0; i < 4; ++i) v[i] = spec.vectors(i, k);
        out.push_back(theta_from_amplitudes(v));
    }
    return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Charmonium spectroscopy and transitions on a simulated quantum register", std::string(kToolName)};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    ModelOpts model;
    auto* model_cmd = app.add_subcommand("model", "Oscillator-basis matrices, exact levels, truncated spectra, omega sweeps");
    model_cmd->add_option("action", model.action, "matrices, exact, diag or sweep")
        ->required()
        ->check(CLI::IsMember({"matrices", "exact", "diag", "sweep"}));
    model_cmd->add_option("--channel", model.channel, "1S0, 3S1, 1P1 or all")->capture_default_str();
    model_cmd->add_option("--source", model.source, "literal, computed (matrices also accepts both)");
    model_cmd->add_option("--omega", model.omega, "Oscillator frequency, fm^-1")->capture_default_str();
    model_cmd->add_option("--levels", model.levels, "Radial levels for exact")->capture_default_str();
    model_cmd->add_option("--dim", model.dim, "Basis size for computed matrices")->capture_default_str()->check(CLI::Range(1, 64));
    model_cmd->add_option("--omega-min", model.omega_min)->capture_default_str();
    model_cmd->add_option("--omega-max", model.omega_max)->capture_default_str();
    model_cmd->add_option("--omega-step", model.omega_step)->capture_default_str();
    model_cmd->add_flag("--dipole", model.dipole, "Also write the dipole matrix");
    model.common.attach(model_cmd);

    PauliOpts pauli;
    auto* pauli_cmd = app.add_subcommand("pauli", "Pauli decomposition of a matrix");
    pauli_cmd->add_option("--input", pauli.input, "Matrix JSON file");
    pauli_cmd->add_option("--channel", pauli.channel, "Built-in channel Hamiltonian");
    pauli_cmd->add_option("--source", pauli.source)->capture_default_str();
    pauli_cmd->add_option("--omega", pauli.omega)->capture_default_str();
    pauli_cmd->add_flag("--dipole", pauli.dipole, "Decompose the dipole matrix");
    pauli_cmd->add_flag("--roundtrip", pauli.roundtrip, "Report the reconstruction error");
    pauli.common.attach(pauli_cmd);

    VqiteOpts vq;
    auto* vq_cmd = app.add_subcommand("vqite", "Variational imaginary-time evolution");
    vq_cmd->add_option("--channel", vq.channel);
    vq_cmd->add_option("--hamiltonian", vq.hamiltonian, "Matrix or Pauli-sum JSON");
    vq_cmd->add_option("--source", vq.source)->capture_default_str();
    vq_cmd->add_option("--omega", vq.omega)->capture_default_str();
    vq_cmd->add_option("--states", vq.states, "Number of states")->capture_default_str()->check(CLI::Range(1, 4));
    vq_cmd->add_option("--deflate", vq.deflate, "Summary JSON files whose states are penalized");
    vq_cmd->add_option("--dtau", vq.evo.dtau)->capture_default_str();
    vq_cmd->add_option("--max-steps", vq.evo.max_steps)->capture_default_str();
    vq_cmd->add_option("--theta-init", vq.evo.theta_init)->capture_default_str();
    vq_cmd->add_option("--alpha", vq.evo.penalty_alpha, "Deflation penalty, fm^-1")->capture_default_str();
    vq_cmd->add_option("--epsilon", vq.epsilon, "Regularization (default 1e-6 exact, 1e-3 sampled)");
    vq.exec.attach(vq_cmd);
    vq.common.attach(vq_cmd);

    AmpOpts amp;
    auto* amp_cmd = app.add_subcommand("amp", "M1 and E1 transition amplitudes");
    amp_cmd->add_option("kind", amp.kind, "m1 or e1")->required()->check(CLI::IsMember({"m1", "e1"}));
    amp_cmd->add_option("--method", amp.method, "direct, swap or hadamard");
    amp_cmd->add_option("--theta-source", amp.theta_source, "eigvec or a vqite output directory")->capture_default_str();
    amp_cmd->add_option("--source", amp.source)->capture_default_str();
    amp_cmd->add_option("--omega", amp.omega)->capture_default_str();
    amp.exec.attach(amp_cmd);
    amp.common.attach(amp_cmd);

    ZneOpts zn;
    auto* zne_cmd = app.add_subcommand("zne", "Zero-noise extrapolation of an M1 overlap");
    zne_cmd->add_option("--target", zn.target, "direct or swap")->capture_default_str();
    zne_cmd->add_option("--transition", zn.transition, "Index into the M1 list")->capture_default_str();
    zne_cmd->add_option("--noise", zn.noise)->capture_default_str();
    zne_cmd->add_option("--scales", zn.scales)->delimiter(',')->capture_default_str();
    zne_cmd->add_option("--orders", zn.orders)->delimiter(',')->capture_default_str();
    zne_cmd->add_option("--shots", zn.shots)->capture_default_str()->check(CLI::PositiveNumber);
    zne_cmd->add_option("--trials", zn.trials)->capture_default_str()->check(CLI::PositiveNumber);
    zne_cmd->add_option("--bootstrap", zn.bootstrap)->capture_default_str();
    zne_cmd->add_option("--theta-source", zn.theta_source)->capture_default_str();
    zn.common.attach(zne_cmd);

    ReplayOpts rp;
    auto* replay_cmd = app.add_subcommand("replay", "Re-run a manifest and compare outputs");
    replay_cmd->add_option("manifest", rp.manifest)->required();
    replay_cmd->add_option("--out", rp.out, "Replay directory (default: <manifest dir>/replay)");
    replay_cmd->add_option("--jobs", rp.jobs, "Override the recorded job count")->check(CLI::PositiveNumber);

    try {
        app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    std::unique_ptr<Run> run_ptr;
    try {
        if (*replay_cmd) return cmd_replay(rp, out, err);
        auto start = [&](const std::string& tag, const Common& c) {
            run_ptr = std::make_unique<Run>(tag, args, c, out);
            return std::ref(*run_ptr);
        };
        int code = kExitOk;
        if (*model_cmd)
            code = cmd_model(model, start("model_" + model.action, model.common));
        else if (*pauli_cmd)
            code = cmd_pauli(pauli, start("pauli", pauli.common));
        else if (*vq_cmd)
            code = cmd_vqite(vq, start("vqite", vq.common));
        else if (*amp_cmd)
            code = cmd_amp(amp, start("amp_" + amp.kind, amp.common));
        else if (*zne_cmd)
            code = cmd_zne(zn, start("zne_" + zn.target, zn.common));
        run_ptr->finish(code);
        return code;
    } catch (const NonConvergence&) {
        err << "error: evolution did not converge within max-steps\n";
        if (run_ptr) run_ptr->finish(kExitNoConvergence);
        return kExitNoConvergence;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
    } catch (const io::FormatError& e) {
        err << "input error: " << e.what() << '\n';
    } catch (const json::exception& e) {
        err << "input error: " << e.what() << '\n';
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << '\n';
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitUsage;
}

int run_cli(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace qcharm::cli
