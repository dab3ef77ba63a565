#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <random>

#include "pescado/config.hpp"
#include "pescado/propagator.hpp"

using namespace pescado;

namespace {

PartialWaveState random_state(const RadialGrid& g, int L, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n;
    PartialWaveState s(g, L);
    for (int c = 0; c <= L; ++c)
        for (int i = 0; i < g.N; ++i) s.data(i, c) = cplx(n(rng), n(rng));
    s.data /= std::sqrt(s.norm_squared());
    return s;
}

// exp(-i H dt) through the dense Hermitian eigendecomposition.
MatrixXcd dense_unitary(const MatrixXcd& H, double dt) {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(H);
    VectorXcd ph(es.eigenvalues().size());
    for (Eigen::Index i = 0; i < ph.size(); ++i) ph[i] = std::exp(-kI * es.eigenvalues()[i] * dt);
    return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

VectorXcd flat(const PartialWaveState& s) {
    return Eigen::Map<const VectorXcd>(s.data.data(), s.data.size());
}

SimulationConfig small_config() {
    SimulationConfig c = load_config(
        "grid.R = 40\ngrid.L_max = 3\npulse.E0 = 0.1\npulse.omega = 0.228\npulse.n_cycles = 1\n"
        "cap.R_c = 20\npropagation.steps_per_cycle = 400\n");
    return c;
}

}  // namespace

TEST_CASE("absorber factors") {
    const RadialGrid g = RadialGrid::from_box(0.2, 40.0);
    const CapParams cap{1e-4, 20.0};
    const VectorXd f = cap_half_factor(g, cap, 0.1);
    for (int i = 0; i < g.N; ++i) {
        if (g.r(i) <= 20.0) CHECK(f[i] == 1.0);
        CHECK(f[i] <= 1.0);
        CHECK(f[i] > 0.0);
    }
    // r = 30: gamma = 1e-2, exp(-1e-3)
    CHECK(f[149] == doctest::Approx(std::exp(-1e-3)).epsilon(1e-14));
    PartialWaveState s = random_state(g, 2, 3);
    const PartialWaveState before = s;
    cap_half_step(s, VectorXd::Ones(g.N));
    CHECK(s.data == before.data);
}

TEST_CASE("Krylov step matches the dense exponential") {
    const RadialGrid g = RadialGrid::from_box(0.2, 4.2);
    REQUIRE(g.N == 20);
    const int L = 1;
    const PulseParams p{0.1, 0.228, 1};
    const Hamiltonian H(g, L, p);
    const double t_mid = 0.3 * p.duration();
    const double dt = 0.05;
    KrylovWorkspace ws(g.N, L, 40);
    for (unsigned seed = 1; seed <= 5; ++seed) {
        const PartialWaveState s = random_state(g, L, seed);
        const PartialWaveState out = hermitian_exp_step(s, t_mid, dt, ws, H);
        const VectorXcd ref = dense_unitary(H.dense(t_mid), dt) * flat(s);
        CHECK((flat(out) - ref).norm() <= 1e-12 * ref.norm());
    }
}

TEST_CASE("Krylov step on an eigenvector is a phase") {
    const RadialGrid g = RadialGrid::from_box(0.2, 60.0);
    const GroundState gs = ground_state(g, 2);
    const Hamiltonian H(g, 2, PulseParams{0.0, 0.114, 1});
    KrylovWorkspace ws(g.N, 2, 20);
    const double dt = 0.0551;
    const PartialWaveState out = hermitian_exp_step(gs.state, 1.0, dt, ws, H);
    const VectorXcd expect = std::exp(-kI * gs.energy * dt) * flat(gs.state);
    CHECK((flat(out) - expect).norm() * std::sqrt(g.h) <= 1e-12);
    CHECK(ws.last_dim() < 20);  // happy breakdown
}

TEST_CASE("Krylov step conserves the norm") {
    const SimulationConfig c = small_config();
    const Hamiltonian H(c.grid, c.L_max, c.pulse);
    KrylovWorkspace ws(c.grid.N, c.L_max, c.krylov_dim);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> tt(0.0, c.pulse.duration());
    for (unsigned seed = 0; seed < 10; ++seed) {
        const PartialWaveState s = random_state(c.grid, c.L_max, 100 + seed);
        const PartialWaveState out = hermitian_exp_step(s, tt(rng), c.dt(), ws, H);
        CHECK(std::abs(out.norm_squared() - s.norm_squared()) <= 1e-12);
    }
    PartialWaveState zero(c.grid, c.L_max);
    CHECK_THROWS_AS(hermitian_exp_step(zero, 0.0, c.dt(), ws, H), NumericalError);
}

TEST_CASE("field-free propagation without absorber is stationary") {
    const RadialGrid g = RadialGrid::from_box(0.2, 60.0);
    const GroundState gs = ground_state(g, 1);
    const Hamiltonian H(g, 1, PulseParams{0.0, 0.114, 1});
    PropagationOptions opt;
    opt.steps = 200;
    opt.dt = 0.0551;
    const PartialWaveState out = propagate(gs.state, H, CapParams{0.0, 40.0}, opt);
    const cplx overlap = gs.state.inner(out);
    CHECK(std::abs(std::abs(overlap) - 1.0) <= 1e-10);
    CHECK(std::abs(out.norm_squared() - 1.0) <= 1e-10);
    CHECK(out.t == doctest::Approx(200 * 0.0551));
}

TEST_CASE("norm decays monotonically under the absorber") {
    const SimulationConfig c = small_config();
    const Hamiltonian H(c.grid, c.L_max, c.pulse);
    const GroundState gs = ground_state(c.grid, c.L_max);
    PropagationOptions opt;
    opt.steps = c.total_steps();
    opt.dt = c.dt();
    opt.sample_stride = 1;
    double prev = 1.0 + 1e-15;
    bool monotone = true;
    const PartialWaveState out = propagate(gs.state, H, c.effective_cap(), opt,
                                           [&](const PartialWaveState& s, double, double) {
                                               const double n = s.norm_squared();
                                               if (n > prev + 1e-13) monotone = false;
                                               prev = n;
                                           });
    CHECK(monotone);
    CHECK(out.norm_squared() < 1.0);
}

TEST_CASE("sample weights realize the trapezoid rule") {
    const RadialGrid g = RadialGrid::from_box(0.2, 20.0);
    const GroundState gs = ground_state(g, 1);
    const Hamiltonian H(g, 1, PulseParams{0.0, 0.114, 1});
    for (int stride : {1, 3, 5, 7}) {
        PropagationOptions opt;
        opt.steps = 23;
        opt.dt = 0.1;
        opt.sample_stride = stride;
        double wsum = 0.0, tw = 0.0, last_t = -1.0;
        int count = 0;
        propagate(gs.state, H, CapParams{0.0, 10.0}, opt, [&](const PartialWaveState&, double t, double w) {
            wsum += w;
            tw += w * t;
            ++count;
            CHECK(t > last_t);
            last_t = t;
        });
        CHECK(wsum == doctest::Approx(2.3).epsilon(1e-13));
        // Trapezoid is exact for linear integrands.
        CHECK(tw == doctest::Approx(0.5 * 2.3 * 2.3).epsilon(1e-13));
        CHECK(last_t == doctest::Approx(2.3));
        CHECK(count == (22 / stride) + 2);
    }
}

TEST_CASE("second-order convergence in dt") {
    SimulationConfig c = small_config();
    c.cap.R_c = 30.0;
    const Hamiltonian H(c.grid, c.L_max, c.pulse);
    const GroundState gs = ground_state(c.grid, c.L_max);
    auto run = [&](int steps) {
        PropagationOptions opt;
        opt.steps = steps;
        opt.dt = c.pulse.duration() / steps;
        return propagate(gs.state, H, c.effective_cap(), opt);
    };
    const PartialWaveState a = run(800), b = run(1600), d = run(3200);
    const double e1 = std::sqrt(c.grid.h) * (a.data - b.data).norm();
    const double e2 = std::sqrt(c.grid.h) * (b.data - d.data).norm();
    MESSAGE("Richardson ratio " << e1 / e2);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("Krylov dimension 20 is converged") {
    SimulationConfig c = small_config();
    const Hamiltonian H(c.grid, c.L_max, c.pulse);
    const GroundState gs = ground_state(c.grid, c.L_max);
    PropagationOptions opt;
    opt.steps = c.total_steps();
    opt.dt = c.dt();
    opt.krylov_dim = 20;
    const PartialWaveState a = propagate(gs.state, H, c.effective_cap(), opt);
    opt.krylov_dim = 30;
    const PartialWaveState b = propagate(gs.state, H, c.effective_cap(), opt);
    CHECK(std::sqrt(c.grid.h) * (a.data - b.data).norm() <= 1e-9);
}

TEST_CASE("checkpoint round trip is bit-exact") {
    const RadialGrid g = RadialGrid::from_box(0.2, 20.0);
    PartialWaveState s = random_state(g, 3, 42);
    s.t = 551.1573;
    const auto path = std::filesystem::temp_directory_path() / "pescado_chk_test.chk";
    write_checkpoint(path.string(), s, "abc123");
    const Checkpoint back = read_checkpoint(path.string());
    CHECK(back.config_hash == "abc123");
    CHECK(back.state.t == s.t);
    CHECK(back.state.h == s.h);
    CHECK(back.state.m == s.m);
    REQUIRE(back.state.data.rows() == s.data.rows());
    REQUIRE(back.state.data.cols() == s.data.cols());
    CHECK(std::memcmp(back.state.data.data(), s.data.data(), sizeof(cplx) * s.data.size()) == 0);
    std::filesystem::remove(path);
    CHECK_THROWS(read_checkpoint(path.string()));
}
