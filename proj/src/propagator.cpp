#include "pescado/propagator.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

namespace pescado {

KrylovWorkspace::KrylovWorkspace(int N, int L_max, int k_dim) : N_(N), L_max_(L_max), k_dim_(k_dim) {
    if (k_dim < 1) throw std::invalid_argument("KrylovWorkspace: k_dim must be positive");
    const Eigen::Index dim = Eigen::Index(N) * (L_max + 1);
    basis_.resize(dim, k_dim + 1);
    hess_ = MatrixXcd::Zero(k_dim + 1, k_dim);
    w_.resize(N, L_max + 1);
    scratch_.resize(N, L_max + 1);
}

VectorXd cap_half_factor(const RadialGrid& grid, const CapParams& cap, double dt) {
    VectorXd f(grid.N);
    for (int i = 0; i < grid.N; ++i) f[i] = std::exp(-cap_profile(grid.r(i), cap) * dt);
    return f;
}

void cap_half_step(PartialWaveState& state, const VectorXd& cap_factor) {
    state.data = cap_factor.asDiagonal() * state.data;
}

PartialWaveState hermitian_exp_step(const PartialWaveState& state, double t_mid, double dt, KrylovWorkspace& ws,
                                    const Hamiltonian& H) {
    const Eigen::Index n = state.N();
    const Eigen::Index cols = state.data.cols();
    const Eigen::Index dim = n * cols;
    if (n != ws.N_ || cols != ws.L_max_ + 1) throw std::invalid_argument("hermitian_exp_step: workspace shape mismatch");
    const double h = state.h;
    const double sqrt_h = std::sqrt(h);

    Eigen::Map<const VectorXcd> v0(state.data.data(), dim);
    const double beta = sqrt_h * v0.norm();
    if (!(beta > 0.0)) throw NumericalError("hermitian_exp_step: Arnoldi breakdown on a zero input vector");

    const double a = vector_potential(t_mid, H.pulse());
    ws.hess_.setZero();
    ws.basis_.col(0) = v0 / beta;
    int m = ws.k_dim_;
    for (int j = 0; j < ws.k_dim_; ++j) {
        Eigen::Map<const MatrixXcd> vj(ws.basis_.col(j).data(), n, cols);
        ws.scratch_ = vj;
        H.apply_with_field(ws.scratch_, a, ws.w_);
        Eigen::Map<VectorXcd> w(ws.w_.data(), dim);
        // Modified Gram-Schmidt followed by one reorthogonalization sweep.
        for (int pass = 0; pass < 2; ++pass) {
            for (int i = 0; i <= j; ++i) {
                const cplx c = h * ws.basis_.col(i).dot(w);
                ws.hess_(i, j) += c;
                w -= c * ws.basis_.col(i);
            }
        }
        const double next = sqrt_h * w.norm();
        ws.hess_(j + 1, j) = next;
        if (next < 1e-14) {
            m = j + 1;
            break;
        }
        ws.basis_.col(j + 1) = w / next;
    }
    ws.last_dim_ = m;

    const MatrixXcd small = (-kI * dt) * ws.hess_.topLeftCorner(m, m);
    const VectorXcd coef = small.exp().col(0);
    PartialWaveState out = state;
    Eigen::Map<VectorXcd> y(out.data.data(), dim);
    y.noalias() = beta * (ws.basis_.leftCols(m) * coef);
    return out;
}

PartialWaveState propagate(PartialWaveState state, const Hamiltonian& H, const CapParams& absorber,
                           const PropagationOptions& opt, const SampleHook& sample, const ProgressHook& progress) {
    if (opt.steps < 0 || !(opt.dt > 0.0)) throw std::invalid_argument("propagate: bad step count or time step");
    const int stride = std::max(1, opt.sample_stride);
    const VectorXd half = cap_half_factor(H.grid(), absorber, 0.5 * opt.dt);
    KrylovWorkspace ws(state.N(), state.L_max(), opt.krylov_dim);
    const double t0 = state.t;

    // Sample steps 0, stride, 2*stride, ..., steps; trapezoid weights on them.
    std::vector<int> samples;
    for (int k = 0; k <= opt.steps; k += stride) samples.push_back(k);
    if (samples.back() != opt.steps) samples.push_back(opt.steps);
    auto weight = [&](size_t j) {
        const int prev = samples[j == 0 ? 0 : j - 1];
        const int next = samples[j + 1 == samples.size() ? j : j + 1];
        return 0.5 * opt.dt * (next - prev);
    };

    size_t next_sample = 0;
    if (sample && samples.size() > 1) sample(state, state.t, weight(next_sample));
    ++next_sample;

    for (int k = 1; k <= opt.steps; ++k) {
        const double t = t0 + (k - 1) * opt.dt;
        cap_half_step(state, half);
        state = hermitian_exp_step(state, t + 0.5 * opt.dt, opt.dt, ws, H);
        cap_half_step(state, half);
        state.t = t0 + k * opt.dt;
        if (sample && next_sample < samples.size() && samples[next_sample] == k) {
            sample(state, state.t, weight(next_sample));
            ++next_sample;
        }
        if (progress && ((opt.progress_every > 0 && k % opt.progress_every == 0) || k == opt.steps))
            progress(k, state.t, state.norm_squared());
    }
    return state;
}

PartialWaveState propagate_pulse(const PartialWaveState& initial, const SimulationConfig& config,
                                 const SampleHook& sample, const ProgressHook& progress) {
    const Hamiltonian H(config.grid, config.L_max, config.pulse, initial.m);
    PropagationOptions opt;
    opt.steps = config.total_steps();
    opt.dt = config.dt();
    opt.krylov_dim = config.krylov_dim;
    opt.sample_stride = config.analysis_stride;
    opt.progress_every = config.steps_per_cycle;
    PartialWaveState start = initial;
    start.t = 0.0;
    return propagate(std::move(start), H, config.effective_cap(), opt, sample, progress);
}

PartialWaveState propagate_field_free(const PartialWaveState& initial, const SimulationConfig& config, int steps,
                                      const SampleHook& sample) {
    PulseParams off = config.pulse;
    off.E0 = 0.0;
    const Hamiltonian H(config.grid, config.L_max, off, initial.m);
    PropagationOptions opt;
    opt.steps = steps;
    opt.dt = config.dt();
    opt.krylov_dim = config.krylov_dim;
    opt.sample_stride = config.analysis_stride;
    return propagate(initial, H, config.effective_cap(), opt, sample);
}

namespace {

static_assert(std::endian::native == std::endian::little, "checkpoint IO assumes a little-endian host");

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

void write_checkpoint(const std::string& path, const PartialWaveState& state, const std::string& hash) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write checkpoint '" + path + "'");
    out << "N:" << state.N() << "\n"
        << "L:" << state.L_max() << "\n"
        << "h:" << format_double(state.h) << "\n"
        << "m:" << state.m << "\n"
        << "t:" << format_double(state.t) << "\n"
        << "config_hash:" << hash << "\n\n";
    std::vector<double> row(2 * static_cast<size_t>(state.data.cols()));
    for (Eigen::Index i = 0; i < state.data.rows(); ++i) {
        for (Eigen::Index l = 0; l < state.data.cols(); ++l) {
            row[2 * l] = state.data(i, l).real();
            row[2 * l + 1] = state.data(i, l).imag();
        }
        out.write(reinterpret_cast<const char*>(row.data()), std::streamsize(row.size() * sizeof(double)));
    }
    if (!out) throw std::runtime_error("short write on checkpoint '" + path + "'");
}

Checkpoint read_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open checkpoint '" + path + "'");
    std::map<std::string, std::string> header;
    std::string line;
    while (std::getline(in, line) && !line.empty()) {
        const auto colon = line.find(':');
        if (colon == std::string::npos) throw std::runtime_error("malformed checkpoint header line '" + line + "'");
        header[line.substr(0, colon)] = line.substr(colon + 1);
    }
    for (const char* key : {"N", "L", "h", "m", "t"})
        if (!header.count(key)) throw std::runtime_error(std::string("checkpoint header misses '") + key + "'");

    Checkpoint cp;
    const int N = std::stoi(header["N"]);
    const int L = std::stoi(header["L"]);
    cp.state.data.resize(N, L + 1);
    cp.state.h = std::strtod(header["h"].c_str(), nullptr);
    cp.state.m = std::stoi(header["m"]);
    cp.state.t = std::strtod(header["t"].c_str(), nullptr);
    cp.config_hash = header.count("config_hash") ? header["config_hash"] : "";

    std::vector<double> row(2 * static_cast<size_t>(L + 1));
    for (int i = 0; i < N; ++i) {
        in.read(reinterpret_cast<char*>(row.data()), std::streamsize(row.size() * sizeof(double)));
        if (!in) throw std::runtime_error("checkpoint '" + path + "' is truncated");
        for (int l = 0; l <= L; ++l) cp.state.data(i, l) = cplx(row[2 * l], row[2 * l + 1]);
    }
    return cp;
}

}  // namespace pescado
