#include "pescado/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "pescado/hamiltonian.hpp"

namespace pescado {
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& meta, const std::string& header)
        : f_(std::fopen(path.c_str(), "w")), path_(path) {
        if (!f_) throw std::runtime_error("cannot write '" + path + "'");
        for (const auto& m : meta) std::fprintf(f_, "# %s\n", m.c_str());
        std::fprintf(f_, "%s\n", header.c_str());
    }
    ~CsvWriter() {
        if (f_) std::fclose(f_);
    }
    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;

    void row(std::initializer_list<double> values) {
        bool first = true;
        for (double v : values) {
            std::fprintf(f_, first ? "%.12e" : ",%.12e", v);
            first = false;
        }
        std::fputc('\n', f_);
    }
    void row(const std::vector<double>& values) {
        for (size_t i = 0; i < values.size(); ++i) std::fprintf(f_, i ? ",%.12e" : "%.12e", values[i]);
        std::fputc('\n', f_);
    }
    void close() {
        if (std::fclose(f_) != 0) throw std::runtime_error("short write on '" + path_ + "'");
        f_ = nullptr;
    }

private:
    std::FILE* f_;
    std::string path_;
};

std::vector<std::string> csv_meta(const SimulationConfig& c, const std::string& hash) {
    std::ostringstream rc, g0, cc;
    rc << c.cap.R_c;
    g0 << c.cap.gamma0;
    cc << c.cutoff_c;
    return {"config_hash: " + hash,
            "R_c: " + rc.str(),
            "gamma0: " + g0.str(),
            "cutoff_c: " + cc.str(),
            std::string("restrict_re_positive: ") + (c.restrict_re_positive ? "true" : "false"),
            std::string("halved_cap: ") + (c.halved_cap ? "true" : "false"),
            std::string("project_bound: ") + (c.project_bound ? "true" : "false")};
}

void write_complex_block(std::ostream& out, const MatrixXcd& m) {
    std::vector<double> row(2 * static_cast<size_t>(m.cols()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            row[2 * j] = m(i, j).real();
            row[2 * j + 1] = m(i, j).imag();
        }
        out.write(reinterpret_cast<const char*>(row.data()), std::streamsize(row.size() * sizeof(double)));
    }
}

void read_complex_block(std::istream& in, MatrixXcd& m, const std::string& path) {
    std::vector<double> row(2 * static_cast<size_t>(m.cols()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        in.read(reinterpret_cast<char*>(row.data()), std::streamsize(row.size() * sizeof(double)));
        if (!in) throw std::runtime_error("'" + path + "' is truncated");
        for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = cplx(row[2 * j], row[2 * j + 1]);
    }
}

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

json block_diagnostics(const EffectiveBlockDecomposition& d, const AfterInputs& in) {
    json arr = json::array();
    for (size_t l = 0; l < d.blocks.size(); ++l) {
        const BlockDiagnostics& b = d.blocks[l].diag;
        arr.push_back({{"ell", l},
                       {"eigen_residual", b.eigen_residual},
                       {"biorth_deviation", b.biorth_deviation},
                       {"rcond", b.rcond},
                       {"inverse", b.pseudo_inverse ? "pseudo" : "lu"},
                       {"truncated", b.truncated},
                       {"max_imag", b.max_imag},
                       {"active", l < in.blocks.size() ? in.blocks[l].active.size() : 0}});
    }
    return arr;
}

// Relative spread (max - min) / max |.| across columns, per row.
struct Spread {
    double abs = 0.0, rel = 0.0;
};
Spread spread_of(const std::vector<double>& v) {
    if (v.empty()) return {};
    double lo = v[0], hi = v[0], mag = 0.0;
    for (double x : v) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
        mag = std::max(mag, std::abs(x));
    }
    return {hi - lo, mag > 0.0 ? (hi - lo) / mag : 0.0};
}

}  // namespace

std::string format_rc(double rc) {
    std::ostringstream s;
    s << rc;
    return s.str();
}

PulseStage run_pulse(const SimulationConfig& config, std::ostream* log) {
    const auto t0 = Clock::now();
    PulseStage s;
    s.basis = std::make_shared<ContinuumBasis>(config.grid, EnergyGrid(config.energy), config.L_max,
                                                   config.project_bound);
    for (int l = 0; l <= config.L_max; ++l) s.basis->waves(l);
    s.acc = std::make_shared<BeforeAccumulator>(*s.basis, config.effective_cap());
    GroundState gs = ground_state(config.grid, config.L_max);
    s.ground_energy = gs.energy;
    s.norm_0 = gs.state.norm_squared();
    if (log) *log << "ground state energy " << std::setprecision(10) << gs.energy << "\n";

    BeforeAccumulator& acc = *s.acc;
    const int total = config.total_steps();
    s.psi = propagate_pulse(
        gs.state, config, [&](const PartialWaveState& st, double, double w) { acc.add(st, w); },
        [&](int step, double t, double norm) {
            if (log)
                *log << "step " << step << "/" << total << " t=" << std::setprecision(6) << t
                     << " norm=" << std::setprecision(12) << norm << std::endl;
        });
    s.seconds = seconds_since(t0);
    return s;
}

void extend_partition(PulseStage& stage, const SimulationConfig& config, int steps) {
    BeforeAccumulator& acc = *stage.acc;
    stage.psi = propagate_field_free(stage.psi, config, steps,
                                     [&](const PartialWaveState& st, double, double w) { acc.add(st, w); });
}

AfterStage run_after(const SimulationConfig& config, const PulseStage& pulse,
                     std::shared_ptr<EffectiveBlockDecomposition> decomp) {
    AfterStage a;
    auto t0 = Clock::now();
    a.decomp = decomp ? std::move(decomp)
                      : std::make_shared<EffectiveBlockDecomposition>(
                            eigendecompose_all(config.grid, config.effective_cap(), config.L_max));
    a.seconds_eigen = seconds_since(t0);
    t0 = Clock::now();
    a.inputs = build_after_inputs(*a.decomp, pulse.psi, *pulse.basis, config.cutoff_c, config.restrict_re_positive);
    a.parts = after_parts(a.inputs, CoherentTerms::full, true);
    a.inputs.select(config.cutoff_c, !config.restrict_re_positive);
    a.absorption_after_alt = absorption_total(after_parts(a.inputs, CoherentTerms::none, true).Z);
    a.inputs.select(config.cutoff_c, config.restrict_re_positive);
    a.seconds_after = seconds_since(t0);
    return a;
}

void write_accumulators(const std::string& path, const BeforeAccumulator& acc, double norm_0,
                        const std::string& hash) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    const MatrixXcd& C = acc.C();
    const MatrixXcd& M = acc.M();
    out << "C_rows:" << C.rows() << "\nC_cols:" << C.cols() << "\nM_size:" << M.rows() << "\nnorm_0:" << fmt17(norm_0)
        << "\nsamples:" << acc.samples() << "\nconfig_hash:" << hash << "\n\n";
    write_complex_block(out, M);
    write_complex_block(out, C);
    if (!out) throw std::runtime_error("short write on '" + path + "'");
}

StoredAccumulators read_accumulators(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::map<std::string, std::string> header;
    std::string line;
    while (std::getline(in, line) && !line.empty()) {
        const auto colon = line.find(':');
        if (colon == std::string::npos) throw std::runtime_error("malformed header line in '" + path + "'");
        header[line.substr(0, colon)] = line.substr(colon + 1);
    }
    for (const char* key : {"C_rows", "C_cols", "M_size", "norm_0"})
        if (!header.count(key)) throw std::runtime_error(std::string("'") + path + "' misses header key " + key);
    StoredAccumulators s;
    s.M.resize(std::stoi(header["M_size"]), std::stoi(header["M_size"]));
    s.C.resize(std::stoi(header["C_rows"]), std::stoi(header["C_cols"]));
    s.norm_0 = std::strtod(header["norm_0"].c_str(), nullptr);
    s.config_hash = header["config_hash"];
    read_complex_block(in, s.M, path);
    read_complex_block(in, s.C, path);
    return s;
}

RunSummary cmd_run(const SimulationConfig& config, const RunOptions& opt) {
    config.validate();
    const std::string started = utc_now();
    const auto t_start = Clock::now();
    const fs::path out = opt.out_dir.empty() ? fs::path(".") : fs::path(opt.out_dir);
    fs::create_directories(out);
    const std::string hash = config_hash(config);

    RunSummary summary;
    json stages = json::object();
    PulseStage pulse;
    SpectralParts before;

    if (!opt.from_checkpoint.empty()) {
        auto t0 = Clock::now();
        Checkpoint cp = read_checkpoint(opt.from_checkpoint);
        if (cp.state.N() != config.grid.N || cp.state.L_max() != config.L_max || cp.state.h != config.grid.h)
            throw ConfigError("from-checkpoint", 0, "checkpoint grid does not match the configuration");
        if (cp.config_hash != hash)
            summary.warnings.push_back("checkpoint was written with a different configuration hash");
        const fs::path acc_path = fs::path(opt.from_checkpoint).parent_path() / "accumulators.bin";
        StoredAccumulators stored = read_accumulators(acc_path.string());
        pulse.basis = std::make_shared<ContinuumBasis>(config.grid, EnergyGrid(config.energy), config.L_max,
                                                   config.project_bound);
        for (int l = 0; l <= config.L_max; ++l) pulse.basis->waves(l);
        const int L = config.L_max;
        if (stored.C.rows() != pulse.basis->energies().size() || stored.C.cols() != (L + 1) * (L + 1))
            throw ConfigError("from-checkpoint", 0, "stored accumulators do not match the energy grid");
        pulse.psi = std::move(cp.state);
        pulse.norm_0 = stored.norm_0;
        before = {2.0 * stored.C, 2.0 * stored.M};
        stages["load"] = seconds_since(t0);
    } else {
        pulse = run_pulse(config, opt.log);
        stages["propagation"] = pulse.seconds;
        const std::string chk = (out / "psi_T.chk").string();
        write_checkpoint(chk, pulse.psi, hash);
        write_accumulators((out / "accumulators.bin").string(), *pulse.acc, pulse.norm_0, hash);
        summary.outputs.push_back("psi_T.chk");
        summary.outputs.push_back("accumulators.bin");
        before = before_parts(*pulse.acc);
    }

    const double norm_T = pulse.psi.norm_squared();
    const double absorbed = absorption_total(before.Z);
    const double lost = pulse.norm_0 - norm_T;
    if (std::abs(lost - absorbed) > 1e-6)
        summary.warnings.push_back("norm audit off by " + fmt17(lost - absorbed));
    const double residual = coulomb_residual(coulomb_wave(0, config.energy.max, config.grid), 0, config.energy.max,
                                             config.grid);
    if (residual > kCoulombResidualWarn)
        summary.warnings.push_back("coarse grid: Coulomb-wave residual " + fmt17(residual) + " at the top energy");

    json manifest = {{"config_hash", hash},
                     {"config", serialize_config(config)},
                     {"started", started},
                     {"norm_audit",
                      {{"norm_0", pulse.norm_0},
                       {"norm_T", norm_T},
                       {"norm_lost", lost},
                       {"absorbed_during_pulse", absorbed},
                       {"difference", lost - absorbed}}},
                     {"coulomb", {{"residual_top_energy", residual}, {"worst_fit", pulse.basis->worst_fit()}}}};

    if (!opt.skip_after) {
        AfterStage after = run_after(config, pulse);
        stages["eigendecomposition"] = after.seconds_eigen;
        stages["after_analysis"] = after.seconds_after;
        auto t0 = Clock::now();
        const VectorXd theta = uniform_theta(config.theta_points);
        summary.spectra = assemble(before, after.parts, *pulse.basis, theta, norm_T);
        summary.absorption_after_alt = after.absorption_after_alt;
        const SpectraBundle& s = summary.spectra;

        size_t active = 0;
        for (const auto& b : after.inputs.blocks) active += b.active.size();
        if (active == 0) summary.warnings.push_back("after-pulse active set is empty; after parts are zero");
        if (s.negative_probability)
            summary.warnings.push_back("negative probabilities: min dP/deps = " + fmt17(s.min_over_peak) +
                                       " of the peak");
        for (const auto& b : after.decomp->blocks)
            if (b.diag.pseudo_inverse)
                summary.warnings.push_back("l = " + std::to_string(b.ell) + ": left states from the pseudoinverse");

        const auto meta = csv_meta(config, hash);
        {
            CsvWriter w((out / "dPdE.csv").string(), meta, "eps,before,after,total");
            for (Eigen::Index j = 0; j < s.eps.size(); ++j)
                w.row({s.eps[j], s.dPdE_before[j], s.dPdE_after[j], s.dPdE_total[j]});
            w.close();
        }
        {
            CsvWriter w((out / "d2P.csv").string(), meta, "eps,theta_k,value");
            for (Eigen::Index j = 0; j < s.eps.size(); ++j)
                for (Eigen::Index i = 0; i < theta.size(); ++i) w.row({s.eps[j], theta[i], s.d2P(j, i)});
            w.close();
        }
        {
            CsvWriter w((out / "dPdOmegaK.csv").string(), meta, "theta_k,before,after,total");
            for (Eigen::Index i = 0; i < theta.size(); ++i)
                w.row({theta[i], s.dPdOmegaK_before[i], s.dPdOmegaK_after[i], s.dPdOmegaK_total[i]});
            w.close();
        }
        {
            CsvWriter w((out / "dPdOmegaAbs.csv").string(), meta, "theta,before,after,total");
            for (Eigen::Index i = 0; i < theta.size(); ++i)
                w.row({theta[i], s.dPdOmega_before[i], s.dPdOmega_after[i], s.dPdOmega_total[i]});
            w.close();
        }
        for (const char* f : {"dPdE.csv", "d2P.csv", "dPdOmegaK.csv", "dPdOmegaAbs.csv"}) summary.outputs.push_back(f);
        stages["assemble_and_write"] = seconds_since(t0);

        const double alt_total = s.absorption_before + after.absorption_after_alt;
        const double total = s.absorption_before + s.absorption_after;
        manifest["eigensolver"] = block_diagnostics(*after.decomp, after.inputs);
        manifest["totals"] = {{"ionization", s.ionization},
                              {"absorption_before", s.absorption_before},
                              {"absorption_after", s.absorption_after},
                              {"absorption_total", total},
                              {config.restrict_re_positive ? "absorption_total_unrestricted"
                                                           : "absorption_total_re_positive",
                               alt_total}};
        manifest["negative_probability"] = {{"min_over_peak", s.min_over_peak}, {"flag", s.negative_probability}};
    }

    stages["total"] = seconds_since(t_start);
    manifest["stage_seconds"] = stages;
    manifest["finished"] = utc_now();
    manifest["warnings"] = summary.warnings;
    json files = json::array();
    for (const auto& f : summary.outputs) {
        const std::string bytes = read_file((out / f).string());
        files.push_back({{"file", f}, {"bytes", bytes.size()}, {"sha256", sha256_hex(bytes)}});
    }
    manifest["outputs"] = files;
    std::ofstream((out / "manifest.json").string()) << manifest.dump(2) << "\n";
    summary.outputs.push_back("manifest.json");
    if (opt.log)
        for (const auto& w : summary.warnings) *opt.log << "warning: " << w << "\n";
    return summary;
}

std::vector<RunSummary> cmd_scan_rc(const SimulationConfig& base, const std::vector<double>& rc_list,
                                    const RunOptions& opt) {
    if (rc_list.empty()) throw ConfigError("rc", 0, "R_c list is empty");
    for (double rc : rc_list)
        if (!(rc > 0.0 && rc < base.grid.R()))
            throw ConfigError("rc", 0, "R_c = " + format_rc(rc) + " lies outside (0, R)");
    const fs::path out = opt.out_dir.empty() ? fs::path(".") : fs::path(opt.out_dir);
    fs::create_directories(out);

    std::vector<RunSummary> runs;
    for (double rc : rc_list) {
        SimulationConfig c = base;
        c.cap.R_c = rc;
        RunOptions o = opt;
        o.out_dir = (out / ("rc" + format_rc(rc))).string();
        o.from_checkpoint.clear();
        if (opt.log) *opt.log << "R_c = " << rc << "\n";
        runs.push_back(cmd_run(c, o));
    }
    if (opt.skip_after) return runs;

    const std::string hash = config_hash(base);
    std::vector<std::string> meta = {"config_hash: " + hash, "scan over R_c; spread = max - min across runs"};
    std::string cols;
    for (double rc : rc_list) cols += ",rc" + format_rc(rc);

    auto table = [&](const std::string& name, const std::string& x_name, const VectorXd& x,
                     auto value_of) {
        CsvWriter w((out / name).string(), meta, x_name + cols + ",spread,rel_spread");
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            std::vector<double> row{x[i]};
            std::vector<double> vals;
            for (const auto& r : runs) vals.push_back(value_of(r.spectra, i));
            row.insert(row.end(), vals.begin(), vals.end());
            const Spread sp = spread_of(vals);
            row.push_back(sp.abs);
            row.push_back(sp.rel);
            w.row(row);
        }
        w.close();
    };
    const SpectraBundle& ref = runs.back().spectra;
    table("rc_dPdE.csv", "eps", ref.eps, [](const SpectraBundle& s, Eigen::Index i) { return s.dPdE_total[i]; });
    table("rc_dPdOmegaK.csv", "theta_k", ref.theta,
          [](const SpectraBundle& s, Eigen::Index i) { return s.dPdOmegaK_total[i]; });
    table("rc_dPdOmegaAbs.csv", "theta", ref.theta,
          [](const SpectraBundle& s, Eigen::Index i) { return s.dPdOmega_total[i]; });

    const std::vector<int> peaks = ati_peaks(ref.eps, ref.dPdE_total, base.pulse.omega);
    VectorXd peak_eps(peaks.size());
    for (size_t p = 0; p < peaks.size(); ++p) peak_eps[p] = ref.eps[peaks[p]];
    table("rc_peaks.csv", "eps_peak", peak_eps,
          [&](const SpectraBundle& s, Eigen::Index p) { return s.dPdE_total[peaks[p]]; });

    {
        CsvWriter w((out / "rc_absorption.csv").string(), meta,
                    "R_c,ionization,absorption_total,absorption_total_re_positive");
        for (size_t i = 0; i < runs.size(); ++i) {
            const SpectraBundle& s = runs[i].spectra;
            const double total = s.absorption_before + s.absorption_after;
            const double alt = s.absorption_before + runs[i].absorption_after_alt;
            const double all = base.restrict_re_positive ? alt : total;
            const double pos = base.restrict_re_positive ? total : alt;
            w.row({rc_list[i], s.ionization, all, pos});
        }
        w.close();
    }
    return runs;
}

std::vector<ValidationItem> cmd_validate(const SimulationConfig& config) {
    config.validate();
    std::vector<ValidationItem> items;
    auto add = [&](std::string name, bool ok, std::string detail, bool warn_only = false) {
        items.push_back({std::move(name), ok ? "PASS" : (warn_only ? "WARN" : "FAIL"), std::move(detail)});
    };

    // Hermiticity of H(t) at the pulse centre on random states.
    {
        const Hamiltonian H(config.grid, config.L_max, config.pulse);
        std::mt19937_64 rng(12345);
        std::normal_distribution<double> nd;
        auto random_state = [&]() {
            PartialWaveState s(config.grid, config.L_max);
            for (Eigen::Index i = 0; i < s.data.size(); ++i) s.data.data()[i] = cplx(nd(rng), nd(rng));
            return s;
        };
        const double t = 0.5 * config.pulse.duration() + 0.3;
        double worst = 0.0;
        for (int k = 0; k < 20; ++k) {
            PartialWaveState a = random_state(), b = random_state();
            PartialWaveState Ha = a, Hb = b;
            H.apply(a.data, t, Ha.data);
            H.apply(b.data, t, Hb.data);
            const cplx lhs = a.inner(Hb), rhs = Ha.inner(b);
            worst = std::max(worst, std::abs(lhs - rhs) / std::sqrt(a.norm_squared() * Hb.norm_squared()));
        }
        add("hermiticity", worst < 1e-11, "max relative asymmetry " + fmt17(worst));
    }

    {
        const GroundState gs = ground_state(config.grid, config.L_max);
        add("ground_state", std::abs(gs.energy + 0.5) < 5e-3, "E = " + fmt17(gs.energy), true);
    }

    const CapParams cap = config.effective_cap();
    double max_imag = -1e300, worst_res = 0.0, worst_bi = 0.0;
    std::string pseudo;
    for (int l = 0; l <= config.L_max; ++l) {
        const EigenBlock b = eigendecompose_field_free(config.grid, cap, l);
        max_imag = std::max(max_imag, b.diag.max_imag);
        worst_res = std::max(worst_res, b.diag.eigen_residual);
        if (b.diag.pseudo_inverse)
            pseudo += " l=" + std::to_string(l);
        else
            worst_bi = std::max(worst_bi, b.diag.biorth_deviation);
    }
    add("eigenvalue_half_plane", max_imag <= 1e-10, "max Im eps = " + fmt17(max_imag));
    add("eigen_residual", worst_res <= 1e-8, "max relative residual " + fmt17(worst_res));
    add("biorthonormality", worst_bi < 1e-8,
        "max |h P~^+ P - I| = " + fmt17(worst_bi) + (pseudo.empty() ? "" : "; pseudoinverse used for" + pseudo));

    try {
        double worst = 0.0;
        for (int l : {0, config.L_max}) {
            const VectorXd u = coulomb_wave(l, config.energy.max, config.grid);
            worst = std::max(worst, coulomb_residual(u, l, config.energy.max, config.grid));
        }
        add("coulomb_residual", worst <= kCoulombResidualWarn,
            "relative 3-point residual " + fmt17(worst) + " at eps = " + fmt17(config.energy.max) +
                (worst > kCoulombResidualWarn ? " (coarse grid)" : ""),
            true);
    } catch (const NumericalError& e) {
        add("coulomb_residual", false, e.what());
    }
    return items;
}

std::string describe(const SimulationConfig& c) {
    std::ostringstream s;
    const EnergyGrid eg(c.energy);
    const double basis_mb = 8.0 * eg.size() * c.grid.N * (c.L_max + 1) / 1e6;
    const double eigen_mb = 2 * 16.0 * c.grid.N * double(c.grid.N) * (c.L_max + 1) / 1e6;
    s << "grid: N = " << c.grid.N << ", h = " << c.grid.h << ", R = " << c.grid.R() << ", L = " << c.L_max << "\n"
      << "pulse: E0 = " << c.pulse.E0 << ", omega = " << c.pulse.omega << ", cycles = " << c.pulse.n_cycles
      << ", T = " << c.pulse.duration() << "\n"
      << "absorber: gamma0 = " << c.cap.gamma0 << ", R_c = " << c.cap.R_c << ", effective factor "
      << c.cap_scale() << " (" << (c.halved_cap ? "halved" : "as printed") << " split)\n"
      << "time: dt = " << c.dt() << ", steps = " << c.total_steps() << ", krylov = " << c.krylov_dim
      << ", stride = " << c.analysis_stride << "\n"
      << "energies: " << eg.size() << " points in [" << c.energy.min << ", " << c.energy.max << "]\n"
      << "angles: " << c.theta_points << " points\n"
      << "analysis: cutoff c = " << c.cutoff_c << ", Re eps > 0 only: " << (c.restrict_re_positive ? "yes" : "no")
      << "\n"
      << "memory: continuum basis ~" << std::fixed << std::setprecision(0) << basis_mb << " MB, eigenvectors ~"
      << eigen_mb << " MB\n"
      << "config hash: " << config_hash(c) << "\n";
    return s.str();
}

}  // namespace pescado
