#include <doctest.h>

#include <cmath>

#include <gsl/gsl_sf_coulomb.h>

#include "pescado/continuum.hpp"
#include "pescado/hamiltonian.hpp"

using namespace pescado;

namespace {

// arg Gamma(1 + iy) = -gamma_E y + sum_n (y/n - atan(y/n)), summed from the tail.
double phase0_series(double y) {
    const long M = 2000000;
    double s = y * y * y / (6.0 * double(M) * M);  // tail estimate
    for (long n = M; n >= 1; --n) s += y / n - std::atan(y / n);
    return -0.57721566490153286 * y + s;
}

double phase_series(int ell, double eps) {
    const double y = 1.0 / std::sqrt(2.0 * eps);
    double s = phase0_series(y);
    for (int j = 1; j <= ell; ++j) s += std::atan(y / j);
    return s;
}

struct Asym {
    double f, g;
};

// Asymptotic expansion of the Coulomb functions for large rho (A&S 14.5).
Asym coulomb_asymptotic(int ell, double eta, double rho) {
    double f = 1.0, g = 0.0, fk = 1.0, gk = 0.0, last = 1.0;
    for (int k = 0; k < 30; ++k) {
        const double a = (2.0 * k + 1.0) * eta / ((2.0 * k + 2.0) * rho);
        const double b = (ell * (ell + 1.0) - k * (k + 1.0) + eta * eta) / ((2.0 * k + 2.0) * rho);
        const double fn = a * fk - b * gk;
        const double gn = a * gk + b * fk;
        const double size = std::abs(fn) + std::abs(gn);
        if (size > last || size < 1e-17) break;
        fk = fn, gk = gn, last = size;
        f += fk, g += gk;
    }
    return {f, g};
}

double legendre_bonnet(int ell, double x) {
    double p0 = 1.0, p1 = x;
    if (ell == 0) return p0;
    for (int n = 1; n < ell; ++n) {
        const double p2 = ((2.0 * n + 1.0) * x * p1 - n * p0) / (n + 1.0);
        p0 = p1, p1 = p2;
    }
    return p1;
}

}  // namespace

TEST_CASE("energy grid") {
    const EnergyGrid e(EnergyGridSpec{});
    CHECK(e.size() == 1491);
    CHECK(e.eps[0] == doctest::Approx(0.01));
    CHECK(e.eps[1490] == doctest::Approx(1.5));
    CHECK(e.k[0] == doctest::Approx(std::sqrt(0.02)));
    CHECK_THROWS(EnergyGrid(VectorXd::Constant(2, 0.5)));
}

TEST_CASE("Coulomb phase against the product series") {
    CHECK(coulomb_phase(0, 0.5) == doctest::Approx(-0.30164).epsilon(1e-4));
    for (double eps : {0.005, 0.05, 0.3, 0.5, 1.0, 1.5})
        for (int ell : {0, 1, 4, 12}) CHECK(std::abs(coulomb_phase(ell, eps) - phase_series(ell, eps)) <= 1e-10);
}

TEST_CASE("Coulomb phase recurrence and continuity") {
    for (double eps = 0.01; eps <= 1.5; eps += 0.0371) {
        const double y = 1.0 / std::sqrt(2.0 * eps);
        for (int ell = 0; ell < 12; ++ell)
            CHECK(std::abs(coulomb_phase(ell + 1, eps) - coulomb_phase(ell, eps) - std::atan(y / (ell + 1))) <= 1e-12);
    }
    double prev = coulomb_phase(3, 0.01);
    for (int j = 1; j <= 1490; ++j) {
        const double cur = coulomb_phase(3, 0.01 + j * 1e-3);
        CHECK(std::abs(cur - prev) < 1.0);  // no 2 pi wraps
        prev = cur;
    }
}

TEST_CASE("zero charge gives Riccati-Bessel waves") {
    const RadialGrid g = RadialGrid::from_box(0.2, 150.0);
    for (double eps : {0.05, 0.5, 1.5}) {
        const double k = std::sqrt(2.0 * eps);
        const double amp = std::sqrt(2.0 / (kPi * k));
        const VectorXd u0 = coulomb_wave(0, eps, g, 0.0);
        const VectorXd u1 = coulomb_wave(1, eps, g, 0.0);
        double e0 = 0.0, e1 = 0.0;
        for (int i = 0; i < g.N; ++i) {
            const double x = k * g.r(i);
            e0 = std::max(e0, std::abs(u0[i] - amp * std::sin(x)));
            e1 = std::max(e1, std::abs(u1[i] - amp * (std::sin(x) / x - std::cos(x))));
        }
        CHECK(e0 <= 1e-8 * amp);
        CHECK(e1 <= 1e-8 * amp);
    }
}

TEST_CASE("Coulomb waves are regular and follow F_l on the whole grid") {
    const RadialGrid g = RadialGrid::from_box(0.2, 150.0);
    for (int ell : {0, 2, 7}) {
        for (double eps : {0.01, 0.3, 1.5}) {
            const double k = std::sqrt(2.0 * eps);
            const double amp = std::sqrt(2.0 / (kPi * k));
            CoulombFit fit;
            const VectorXd u = coulomb_wave(ell, eps, g, 1.0, &fit);
            CHECK(fit.irregular_ratio <= 1e-6);
            double err = 0.0;
            for (int i = 0; i < g.N; ++i) {
                double F = 0.0, ex = 0.0;
                gsl_sf_coulomb_wave_F_array(ell, 0, -1.0 / k, k * g.r(i), &F, &ex);
                err = std::max(err, std::abs(u[i] - amp * F * std::exp(ex)));
            }
            CHECK(err <= 1e-6 * amp);
            // u ~ r^{l+1} at the origin.
            const double r0 = g.r(0), r1 = g.r(1);
            CHECK(u[1] / u[0] == doctest::Approx(std::pow(r1 / r0, ell + 1)).epsilon(0.3));
        }
    }
}

TEST_CASE("asymptotic amplitude and phase") {
    const RadialGrid g = RadialGrid::from_box(0.2, 400.0);
    for (int ell : {0, 3}) {
        for (double eps : {0.1, 0.5, 1.2}) {
            const double k = std::sqrt(2.0 * eps);
            const double eta = -1.0 / k;
            const VectorXd u = coulomb_wave(ell, eps, g, 1.0);
            // Least squares u = alpha Fhat + beta Ghat on r in [250, R), where the
            // hats carry the asymptotic phase without sigma.
            Eigen::Matrix2d A = Eigen::Matrix2d::Zero();
            Eigen::Vector2d b = Eigen::Vector2d::Zero();
            for (int i = 0; i < g.N; ++i) {
                const double r = g.r(i);
                if (r < 250.0) continue;
                const double rho = k * r;
                const Asym s = coulomb_asymptotic(ell, eta, rho);
                const double th = rho - eta * std::log(2.0 * rho) - ell * kPi / 2.0;
                const Eigen::Vector2d basis(s.g * std::cos(th) + s.f * std::sin(th),
                                            s.f * std::cos(th) - s.g * std::sin(th));
                A += basis * basis.transpose();
                b += basis * u[i];
            }
            const Eigen::Vector2d ab = A.ldlt().solve(b);
            const double amp = std::hypot(ab[0], ab[1]);
            const double delta = std::atan2(ab[1], ab[0]);
            CHECK(amp == doctest::Approx(std::sqrt(2.0 / (kPi * k))).epsilon(1e-4));
            // asymptote sin(kr + ln(2kr)/k - l pi/2 - sigma_l)
            const double diff = std::remainder(delta + coulomb_phase(ell, eps), 2.0 * kPi);
            CHECK(std::abs(diff) <= 1e-4);
        }
    }
}

TEST_CASE("energy normalization on a long box") {
    const RadialGrid g = RadialGrid::from_box(0.2, 2000.0);
    const double h = g.h;
    const VectorXd a = coulomb_wave(0, 0.5, g);
    const double diag = h * a.squaredNorm();
    CHECK(diag == doctest::Approx(2000.0 / kPi).epsilon(0.01));  // R/(pi k), k = 1
    for (double other : {0.3, 0.7, 1.0}) {
        const VectorXd b = coulomb_wave(0, other, g);
        CHECK(std::abs(h * a.dot(b)) <= 1e-2 * diag);
    }
    const VectorXd c = coulomb_wave(2, 0.2, g);
    const VectorXd d = coulomb_wave(2, 0.4, g);
    CHECK(std::abs(h * c.dot(d)) <= 1e-2 * h * c.squaredNorm());

    // (psi_eps | psi_eps') integrated over eps' around eps approximates 1.
    double integral = 0.0;
    const double step = 2e-4;
    for (int j = -100; j <= 100; ++j) {
        const VectorXd b = coulomb_wave(0, 0.5 + j * step, g);
        integral += (std::abs(j) == 100 ? 0.5 : 1.0) * step * h * a.dot(b);
    }
    CHECK(integral == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("discrete residual is second order") {
    const double eps = 1.5;
    const int ell = 2;
    const RadialGrid g4 = RadialGrid::from_box(0.4, 60.0);
    const RadialGrid g2 = RadialGrid::from_box(0.2, 60.0);
    const RadialGrid g1 = RadialGrid::from_box(0.1, 60.0);
    const double r4 = coulomb_residual(coulomb_wave(ell, eps, g4), ell, eps, g4);
    const double r2 = coulomb_residual(coulomb_wave(ell, eps, g2), ell, eps, g2);
    const double r1 = coulomb_residual(coulomb_wave(ell, eps, g1), ell, eps, g1);
    CHECK(r2 / r1 == doctest::Approx(4.0).epsilon(0.1));
    CHECK(r2 < kCoulombResidualWarn);
    CHECK(r4 > kCoulombResidualWarn);
}

TEST_CASE("continuum basis tables") {
    const RadialGrid g = RadialGrid::from_box(0.2, 30.0);
    const ContinuumBasis basis(g, EnergyGrid(EnergyGridSpec{0.1, 0.5, 0.1}), 2);
    CHECK(basis.energies().size() == 5);
    const MatrixXd& w = basis.waves(2);
    CHECK(w.rows() == 5);
    CHECK(w.cols() == g.N);
    CHECK((w.row(3).transpose() - coulomb_wave(2, 0.4, g)).norm() == 0.0);
    CHECK(basis.phases(1)[0] == coulomb_phase(1, 0.1));
    CHECK(basis.worst_fit() <= 1e-6);
    CHECK_THROWS_AS(basis.waves(3), std::out_of_range);
}

TEST_CASE("spherical harmonics") {
    const VectorXd theta = uniform_theta(181);
    CHECK(theta[0] == 0.0);
    CHECK(theta[180] == doctest::Approx(kPi));
    for (int ell = 0; ell <= 12; ++ell) {
        const VectorXd y = legendre_spherical(ell, 0, theta);
        const double norm = std::sqrt((2.0 * ell + 1.0) / (4.0 * kPi));
        for (Eigen::Index i = 0; i < theta.size(); ++i)
            CHECK(std::abs(y[i] - norm * legendre_bonnet(ell, std::cos(theta[i]))) <= 1e-12 * std::max(1.0, norm));
    }
    const VectorXd y11 = legendre_spherical(1, 1, theta);
    CHECK(y11[90] == doctest::Approx(-std::sqrt(3.0 / (8.0 * kPi))));

    const Quadrature q = gauss_legendre(20);
    CHECK(q.weights.sum() == doctest::Approx(2.0).epsilon(1e-14));
    VectorXd th(q.nodes.size());
    for (Eigen::Index i = 0; i < th.size(); ++i) th[i] = std::acos(q.nodes[i]);
    for (int a = 0; a <= 12; ++a)
        for (int b = 0; b <= 12; ++b) {
            const VectorXd ya = legendre_spherical(a, 0, th), yb = legendre_spherical(b, 0, th);
            const double s = 2.0 * kPi * (q.weights.array() * ya.array() * yb.array()).sum();
            CHECK(std::abs(s - (a == b ? 1.0 : 0.0)) <= 1e-12);
        }
}

TEST_CASE("bound-state projection") {
    const RadialGrid g = RadialGrid::from_box(0.2, 60.0);
    const EnergyGrid e(EnergyGridSpec{0.05, 1.0, 0.05});
    const ContinuumBasis plain(g, e, 1), projected(g, e, 1, true);
    for (int ell : {0, 1}) {
        const FieldFreeBlock b = build_field_free_block(g, ell, CapParams{0.0, 30.0}, false);
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(b.dense_hermitian());
        int bound = 0;
        while (es.eigenvalues()[bound] < 0.0) ++bound;
        CHECK(bound >= 3);
        const MatrixXd V = es.eigenvectors().leftCols(bound);
        const double scale = plain.waves(ell).norm();
        // O(h^2) overlaps before, none after.
        CHECK((plain.waves(ell) * V).norm() > 1e-4 * scale);
        CHECK((projected.waves(ell) * V).norm() <= 1e-12 * scale);
        CHECK((projected.waves(ell) - plain.waves(ell)).norm() <= 5e-2 * scale);
    }
}
