#include "pescado/continuum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>
#include <gsl/gsl_sf_coulomb.h>
#include <gsl/gsl_sf_legendre.h>

#include "pescado/hamiltonian.hpp"
#include "pescado/linalg.hpp"

namespace pescado {
namespace {

struct GslQuiet {
    GslQuiet() { gsl_set_error_handler_off(); }
};
const GslQuiet gsl_quiet;

// Regular series u = r^{l+1} sum a_j r^j of u'' = [l(l+1)/r^2 - 2Z/r - k^2] u, a_0 = 1.
double series_start(int ell, double Z, double k2, double r) {
    double a_prev2 = 0.0, a_prev = 1.0, sum = 1.0, rp = 1.0;
    for (int j = 1; j < 200; ++j) {
        const double a = (-2.0 * Z * a_prev - k2 * a_prev2) / (double(j) * (j + 2 * ell + 1));
        rp *= r;
        const double term = a * rp;
        sum += term;
        a_prev2 = a_prev;
        a_prev = a;
        if (std::abs(term) < 1e-18 * std::abs(sum) && j > 2) break;
    }
    return std::pow(r, ell + 1) * sum;
}

struct FG {
    double F, G;
};

FG coulomb_fg(int ell, double eta, double x) {
    gsl_sf_result F, Fp, G, Gp;
    double eF = 0.0, eG = 0.0;
    const int status = gsl_sf_coulomb_wave_FG_e(eta, x, ell, 0, &F, &Fp, &G, &Gp, &eF, &eG);
    if (status != GSL_SUCCESS && status != GSL_EOVRFLW)
        throw NumericalError("coulomb_wave: GSL F/G evaluation failed at x = " + std::to_string(x));
    return {F.val * std::exp(eF), G.val * std::exp(eG)};
}

// Unit-norm eigenvectors of the Hermitian block with negative energy.
MatrixXd bound_vectors(const RadialGrid& grid, int ell) {
    const FieldFreeBlock b = build_field_free_block(grid, ell, CapParams{0.0, grid.R()}, false);
    int count = std::min(grid.N, 64);
    for (;;) {
        const auto e = linalg::sym_tridiag_lowest(b.diag, VectorXd::Constant(grid.N - 1, b.offdiag), count);
        int neg = 0;
        while (neg < count && e.values[neg] < 0.0) ++neg;
        if (neg < count || count == grid.N) return e.vectors.leftCols(neg);
        count = std::min(grid.N, 2 * count);
    }
}

}  // namespace

EnergyGrid::EnergyGrid(const EnergyGridSpec& spec) {
    const int n = static_cast<int>(std::floor((spec.max - spec.min) / spec.step + 1e-9)) + 1;
    eps.resize(n);
    for (int j = 0; j < n; ++j) eps[j] = spec.min + j * spec.step;
    k = (2.0 * eps).cwiseSqrt();
}

EnergyGrid::EnergyGrid(VectorXd energies) : eps(std::move(energies)) {
    for (Eigen::Index j = 0; j < eps.size(); ++j) {
        if (!(eps[j] > 0.0)) throw std::invalid_argument("EnergyGrid: energies must be positive");
        if (j > 0 && !(eps[j] > eps[j - 1])) throw std::invalid_argument("EnergyGrid: energies must increase");
    }
    k = (2.0 * eps).cwiseSqrt();
}

double coulomb_phase(int ell, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("coulomb_phase: energy must be positive");
    const double y = 1.0 / std::sqrt(2.0 * eps);
    // Shift to Re z >= 20, Stirling there, then pull the args of the shifted factors back out.
    const int shift = std::max(0, 20 - (ell + 1));
    const cplx w(ell + 1.0 + shift, y);
    const cplx w2 = w * w;
    cplx lg = (w - 0.5) * std::log(w) - w + 0.5 * std::log(2.0 * kPi);
    static const double b2k[] = {1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66, -691.0 / 2730, 7.0 / 6};
    cplx wp = w;
    for (int k = 1; k <= 7; ++k) {
        lg += b2k[k - 1] / (2.0 * k * (2.0 * k - 1.0) * wp);
        wp *= w2;
    }
    double arg = lg.imag();
    for (int j = 0; j < shift; ++j) arg -= std::atan2(y, ell + 1.0 + j);
    return arg;
}

VectorXd coulomb_wave(int ell, double eps, const RadialGrid& grid, double Z, CoulombFit* fit) {
    if (!(eps > 0.0)) throw std::invalid_argument("coulomb_wave: energy must be positive");
    if (ell < 0) throw std::invalid_argument("coulomb_wave: ell must be non-negative");
    const double k = std::sqrt(2.0 * eps);
    const double k2 = k * k;
    const int m = std::max(1, static_cast<int>(std::ceil(grid.h / 0.005 - 1e-9)));
    const double d = grid.h / m;
    const double d12 = d * d / 12.0;
    const long last = long(m) * grid.N;  // fine index of r_N
    const double L2 = double(ell) * (ell + 1);

    // Second match point a quarter wavelength inside, on the fine grid.
    const long gap = std::clamp(long(std::lround(0.5 * kPi / k / d)), 1L, last / 2);
    const long first_match = last - gap;

    auto Q = [&](double s) { return L2 / (s * s) - 2.0 * Z / s - k2; };

    VectorXd out(grid.N);
    double u_match1 = 0.0;
    auto keep = [&](long j, double u) {
        if (j % m == 0 && j / m <= grid.N) out[j / m - 1] = u;
        if (j == first_match) u_match1 = u;
    };
    double u_prev = series_start(ell, Z, k2, d);
    double u_cur = series_start(ell, Z, k2, 2 * d);
    keep(1, u_prev);
    keep(2, u_cur);
    double w_prev = (1.0 - d12 * Q(d)) * u_prev;
    double q_cur = Q(2 * d);
    double w_cur = (1.0 - d12 * q_cur) * u_cur;
    for (long j = 2; j < last; ++j) {
        const double w_next = 2.0 * w_cur - w_prev + 12.0 * d12 * q_cur * u_cur;
        q_cur = Q((j + 1) * d);
        u_cur = w_next / (1.0 - d12 * q_cur);
        w_prev = w_cur;
        w_cur = w_next;
        keep(j + 1, u_cur);
    }

    const double eta = -Z / k;
    const FG a = coulomb_fg(ell, eta, k * first_match * d);
    const FG b = coulomb_fg(ell, eta, k * last * d);
    const double u2 = out[grid.N - 1];
    const double det = a.F * b.G - b.F * a.G;
    const double A = (u_match1 * b.G - u2 * a.G) / det;
    const double B = (a.F * u2 - b.F * u_match1) / det;
    if (!std::isfinite(A) || A == 0.0) throw NumericalError("coulomb_wave: normalization match failed");
    const double ratio = std::abs(B / A);
    if (fit) *fit = {A, ratio};
    if (ratio > 1e-6)
        throw NumericalError("coulomb_wave: asymptotic fit leaves an irregular part " + std::to_string(ratio) +
                             " (l = " + std::to_string(ell) + ", eps = " + std::to_string(eps) + ")");
    return out * (std::sqrt(2.0 / (kPi * k)) / A);
}

double coulomb_residual(const VectorXd& u, int ell, double eps, const RadialGrid& grid) {
    const double k2 = 2.0 * eps;
    const double h2 = grid.h * grid.h;
    const double L2 = double(ell) * (ell + 1);
    double res = 0.0, ref = 0.0;
    for (int i = 0; i + 1 < grid.N; ++i) {
        const double r = grid.r(i);
        const double left = i > 0 ? u[i - 1] : 0.0;
        const double lap = (u[i + 1] - 2.0 * u[i] + left) / h2;
        const double e = lap - (L2 / (r * r) - 2.0 / r - k2) * u[i];
        res += e * e;
        ref += k2 * k2 * u[i] * u[i];
    }
    return std::sqrt(res / ref);
}

ContinuumBasis::ContinuumBasis(const RadialGrid& grid, const EnergyGrid& energies, int L_max, bool project_bound)
    : grid_(grid),
      energies_(energies),
      L_max_(L_max),
      project_bound_(project_bound),
      phases_(L_max + 1),
      waves_(L_max + 1),
      built_(L_max + 1, false) {
    for (int l = 0; l <= L_max; ++l) {
        phases_[l].resize(energies.size());
        for (int j = 0; j < energies.size(); ++j) phases_[l][j] = coulomb_phase(l, energies.eps[j]);
    }
}

const MatrixXd& ContinuumBasis::waves(int ell) const {
    if (ell < 0 || ell > L_max_) throw std::out_of_range("ContinuumBasis: ell outside 0..L");
    if (!built_[ell]) {
        MatrixXd& w = waves_[ell];
        w.resize(energies_.size(), grid_.N);
        for (int j = 0; j < energies_.size(); ++j) {
            CoulombFit fit;
            w.row(j) = coulomb_wave(ell, energies_.eps[j], grid_, 1.0, &fit).transpose();
            worst_fit_ = std::max(worst_fit_, fit.irregular_ratio);
        }
        if (project_bound_) {
            const MatrixXd V = bound_vectors(grid_, ell);
            if (V.cols() > 0) w -= (w * V) * V.transpose();
        }
        built_[ell] = true;
    }
    return waves_[ell];
}

VectorXd legendre_spherical(int ell, int m, const VectorXd& theta) {
    if (ell < 0 || std::abs(m) > ell) throw std::invalid_argument("legendre_spherical: need |m| <= l");
    const int am = std::abs(m);
    const double sign = (m < 0 && am % 2) ? -1.0 : 1.0;
    VectorXd y(theta.size());
    for (Eigen::Index i = 0; i < theta.size(); ++i) y[i] = sign * gsl_sf_legendre_sphPlm(ell, am, std::cos(theta[i]));
    return y;
}

VectorXd uniform_theta(int n) {
    if (n < 2) throw std::invalid_argument("uniform_theta: need at least two points");
    return VectorXd::LinSpaced(n, 0.0, kPi);
}

Quadrature gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: need at least one node");
    gsl_integration_glfixed_table* table = gsl_integration_glfixed_table_alloc(n);
    Quadrature q{VectorXd(n), VectorXd(n)};
    for (int i = 0; i < n; ++i) gsl_integration_glfixed_point(-1.0, 1.0, i, &q.nodes[i], &q.weights[i], table);
    gsl_integration_glfixed_table_free(table);
    return q;
}

}  // namespace pescado
