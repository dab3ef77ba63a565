#include "pescado/analysis.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "pescado/hamiltonian.hpp"
#include "pescado/linalg.hpp"

namespace pescado {
namespace {

inline int pair_col(int l, int lp, int L) { return l + (L + 1) * lp; }

// Complex product of a real matrix with a complex one, as two real GEMMs.
MatrixXcd real_times_complex(const Eigen::Ref<const MatrixXd>& a, const Eigen::Ref<const MatrixXcd>& b) {
    const MatrixXd re = a * b.real();
    const MatrixXd im = a * b.imag();
    MatrixXcd out(re.rows(), re.cols());
    out.real() = re;
    out.imag() = im;
    return out;
}

}  // namespace

BeforeAccumulator::BeforeAccumulator(const ContinuumBasis& basis, const CapParams& absorber, int batch)
    : basis_(basis), batch_(std::max(1, batch)) {
    const RadialGrid& grid = basis.grid();
    gamma_ = cap_on_grid(grid, absorber);
    first_row_ = cap_first_row(grid, absorber);
    const int L = basis.L_max();
    pending_.assign(L + 1, MatrixXd(grid.N, 2 * batch_));
    C_ = MatrixXcd::Zero(basis.energies().size(), (L + 1) * (L + 1));
    M_ = MatrixXcd::Zero(L + 1, L + 1);
}

void BeforeAccumulator::add(const PartialWaveState& state, double weight) {
    const int L = basis_.L_max();
    if (state.N() != basis_.grid().N || state.L_max() != L)
        throw std::invalid_argument("BeforeAccumulator::add: state shape does not match the continuum basis");
    const int b = static_cast<int>(weights_.size());
    for (int l = 0; l <= L; ++l) {
        pending_[l].col(b) = state.data.col(l).real();
        pending_[l].col(batch_ + b) = state.data.col(l).imag();
    }
    weights_.push_back(weight);
    ++samples_;
    if (static_cast<int>(weights_.size()) == batch_) flush();
}

void BeforeAccumulator::flush() const {
    const int nb = static_cast<int>(weights_.size());
    if (nb == 0) return;
    const int L = basis_.L_max();
    const int N = basis_.grid().N;
    const int ncap = N - first_row_;
    const double h = basis_.grid().h;
    const Eigen::Map<const VectorXd> w(weights_.data(), nb);

    std::vector<MatrixXcd> a(L + 1), g(L + 1), fc(L + 1);
    for (int l = 0; l <= L; ++l) {
        MatrixXd F(N, 2 * nb);
        F.leftCols(nb) = pending_[l].leftCols(nb);
        F.rightCols(nb) = pending_[l].middleCols(batch_, nb);
        fc[l].resize(N, nb);
        fc[l].real() = F.leftCols(nb);
        fc[l].imag() = F.rightCols(nb);

        const MatrixXd& psi = basis_.waves(l);
        const MatrixXd A = h * (psi * F);
        a[l].resize(A.rows(), nb);
        a[l].real() = A.leftCols(nb);
        a[l].imag() = A.rightCols(nb);
        if (ncap > 0) {
            const MatrixXd GF = gamma_.tail(ncap).asDiagonal() * F.bottomRows(ncap);
            const MatrixXd G = h * (psi.rightCols(ncap) * GF);
            g[l].resize(G.rows(), nb);
            g[l].real() = G.leftCols(nb);
            g[l].imag() = G.rightCols(nb);
        } else {
            g[l] = MatrixXcd::Zero(a[l].rows(), nb);
        }
    }
    if (ncap > 0) {
        for (int l = 0; l <= L; ++l) {
            const MatrixXcd gf = gamma_.tail(ncap).asDiagonal() * fc[l].bottomRows(ncap);
            for (int lp = 0; lp <= L; ++lp) {
                const VectorXcd per_sample = (fc[lp].bottomRows(ncap).conjugate().cwiseProduct(gf)).colwise().sum();
                M_(l, lp) += h * w.cast<cplx>().dot(per_sample);
                C_.col(pair_col(l, lp, L)).noalias() += g[l].cwiseProduct(a[lp].conjugate()) * w.cast<cplx>();
            }
        }
    }
    weights_.clear();
}

const MatrixXcd& BeforeAccumulator::C() const {
    flush();
    return C_;
}

const MatrixXcd& BeforeAccumulator::M() const {
    flush();
    return M_;
}

double BeforeAccumulator::absorbed() const { return 2.0 * M().trace().real(); }

EigenBlock eigendecompose_field_free(const RadialGrid& grid, const CapParams& absorber, int ell, double cond_limit) {
    const FieldFreeBlock block = build_field_free_block(grid, ell, absorber, true);
    const MatrixXcd A = block.dense();
    const linalg::GeneralEigen eig = linalg::general_eigen(A);
    const int n = grid.N;

    // Ascending real part, for stable output ordering.
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int x, int y) { return eig.values[x].real() < eig.values[y].real(); });

    EigenBlock out;
    out.ell = ell;
    out.values.resize(n);
    out.P.resize(n, n);
    for (int j = 0; j < n; ++j) {
        out.values[j] = eig.values[order[j]];
        out.P.col(j) = eig.vectors.col(order[j]);
    }

    const linalg::InverseResult inv = linalg::robust_inverse(out.P, cond_limit);
    out.P_inv = inv.inverse;
    out.diag.rcond = inv.rcond;
    out.diag.pseudo_inverse = inv.pseudo;
    out.diag.truncated = inv.truncated;
    out.diag.max_imag = out.values.imag().maxCoeff();

    VectorXcd y(n);
    double worst = 0.0;
    for (int j = 0; j < n; ++j) {
        block.apply_hermitian(out.P.col(j), y);
        y -= kI * block.cap.cast<cplx>().cwiseProduct(out.P.col(j));
        y -= out.values[j] * out.P.col(j);
        worst = std::max(worst, y.norm() / out.P.col(j).norm());
    }
    out.diag.eigen_residual = worst;
    MatrixXcd prod = out.P_inv * out.P;
    prod.diagonal().array() -= 1.0;
    out.diag.biorth_deviation = prod.cwiseAbs().maxCoeff();
    return out;
}

EffectiveBlockDecomposition eigendecompose_all(const RadialGrid& grid, const CapParams& absorber, int L_max,
                                               double cond_limit) {
    EffectiveBlockDecomposition d{grid, absorber, {}};
    d.blocks.reserve(L_max + 1);
    for (int l = 0; l <= L_max; ++l) d.blocks.push_back(eigendecompose_field_free(grid, absorber, l, cond_limit));
    return d;
}

void AfterInputs::select(double c, bool re_positive) {
    cutoff_c = c;
    restrict_re_positive = re_positive;
    for (size_t l = 0; l < blocks.size(); ++l) {
        const VectorXcd& e = decomp->blocks[l].values;
        blocks[l].active.clear();
        for (int n = 0; n < e.size(); ++n) {
            if (!(e[n].imag() < -c)) continue;
            if (re_positive && !(e[n].real() > 0.0)) continue;
            blocks[l].active.push_back(n);
        }
    }
}

AfterInputs build_after_inputs(const EffectiveBlockDecomposition& decomp, const PartialWaveState& psi_T,
                               const ContinuumBasis& basis, double cutoff_c, bool restrict_re_positive) {
    const RadialGrid& grid = decomp.grid;
    if (psi_T.N() != grid.N || !(basis.grid() == grid))
        throw std::invalid_argument("build_after_inputs: grid mismatch");
    const int L = psi_T.L_max();
    if (L + 1 > static_cast<int>(decomp.blocks.size()) || L > basis.L_max())
        throw std::invalid_argument("build_after_inputs: decomposition or basis has too few partial waves");

    const VectorXd gamma = cap_on_grid(grid, decomp.absorber);
    const int first = cap_first_row(grid, decomp.absorber);
    const int ncap = grid.N - first;
    const double h = grid.h;

    AfterInputs in;
    in.decomp = &decomp;
    in.basis = &basis;
    in.blocks.resize(L + 1);
    for (int l = 0; l <= L; ++l) {
        const EigenBlock& eb = decomp.blocks[l];
        AfterBlock& b = in.blocks[l];
        b.c = eb.P_inv * psi_T.data.col(l);
        const MatrixXd& psi = basis.waves(l);
        b.q = h * real_times_complex(psi, eb.P);
        if (ncap > 0) {
            const MatrixXcd gp = gamma.tail(ncap).asDiagonal() * eb.P.bottomRows(ncap);
            b.g = h * real_times_complex(psi.rightCols(ncap), gp);
        } else {
            b.g = MatrixXcd::Zero(psi.rows(), grid.N);
        }
    }
    in.select(cutoff_c, restrict_re_positive);
    return in;
}

SpectralParts before_parts(const BeforeAccumulator& acc) {
    return {2.0 * acc.C(), 2.0 * acc.M()};
}

SpectralParts after_parts(const AfterInputs& in, CoherentTerms terms, bool with_absorption) {
    const int L = static_cast<int>(in.blocks.size()) - 1;
    const int ne = in.basis->energies().size();
    const RadialGrid& grid = in.decomp->grid;
    const VectorXd gamma = cap_on_grid(grid, in.decomp->absorber);
    const int first = cap_first_row(grid, in.decomp->absorber);
    const int ncap = grid.N - first;
    const double h = grid.h;

    SpectralParts out{MatrixXcd::Zero(ne, (L + 1) * (L + 1)), MatrixXcd::Zero(L + 1, L + 1)};

    // conj(c_n' q_n'(eps)) and conj(c_n' phi_n'(r_i)) per l'.
    std::vector<MatrixXcd> qbar(L + 1), pbar(L + 1);
    for (int l = 0; l <= L; ++l) {
        const AfterBlock& b = in.blocks[l];
        if (terms != CoherentTerms::none) qbar[l] = (b.q * b.c.asDiagonal()).conjugate();
        if (with_absorption && ncap > 0)
            pbar[l] = (in.decomp->blocks[l].P.bottomRows(ncap) * b.c.asDiagonal()).conjugate();
    }

    for (int l = 0; l <= L; ++l) {
        const AfterBlock& b = in.blocks[l];
        const int na = static_cast<int>(b.active.size());
        if (na == 0) continue;
        const VectorXcd& el = in.decomp->blocks[l].values;
        const MatrixXcd& Pl = in.decomp->blocks[l].P;

        // X(eps, a) = c_n g_n(eps) and the CAP-row analogue c_n phi_n(r_i), n = active[a].
        MatrixXcd X(ne, na), Xp(ncap, na);
        for (int a = 0; a < na; ++a) {
            const int n = b.active[a];
            X.col(a) = b.c[n] * b.g.col(n);
            if (with_absorption && ncap > 0) Xp.col(a) = b.c[n] * Pl.col(n).tail(ncap);
        }
        for (int lp = 0; lp <= L; ++lp) {
            const bool coherent = terms == CoherentTerms::full || (terms == CoherentTerms::diagonal && lp == l);
            if (!coherent && !(with_absorption && ncap > 0)) continue;
            const VectorXcd& elp = in.decomp->blocks[lp].values;
            const int np = static_cast<int>(elp.size());
            // Kt(n', a) = 1 / (eps_n - conj eps_n')
            MatrixXcd Kt(np, na);
            for (int a = 0; a < na; ++a) {
                const cplx en = el[b.active[a]];
                for (int m = 0; m < np; ++m) Kt(m, a) = 1.0 / (en - std::conj(elp[m]));
            }
            if (coherent) {
                const MatrixXcd T = qbar[lp] * Kt;
                out.W.col(pair_col(l, lp, L)) = cplx(0.0, -2.0) * X.cwiseProduct(T).rowwise().sum();
            }
            if (with_absorption && ncap > 0) {
                const MatrixXcd Tp = pbar[lp] * Kt;
                const cplx s = h * (gamma.tail(ncap).cast<cplx>().asDiagonal() * Xp.cwiseProduct(Tp)).sum();
                out.Z(l, lp) = cplx(0.0, -2.0) * s;
            }
        }
    }
    return out;
}

VectorXd energy_spectrum(const MatrixXcd& W, int L) {
    VectorXd s = VectorXd::Zero(W.rows());
    for (int l = 0; l <= L; ++l) s += W.col(pair_col(l, l, L)).real();
    return s;
}

MatrixXd doubly_differential(const MatrixXcd& W, const ContinuumBasis& basis, const VectorXd& theta) {
    const int L = basis.L_max();
    if (W.cols() != (L + 1) * (L + 1)) throw std::invalid_argument("doubly_differential: W has the wrong width");
    const int ne = static_cast<int>(W.rows());
    MatrixXd Y(L + 1, theta.size());
    for (int l = 0; l <= L; ++l) Y.row(l) = legendre_spherical(l, 0, theta).transpose();

    MatrixXd out(ne, theta.size());
    VectorXcd phi(L + 1);
    MatrixXd R(L + 1, L + 1);
    for (int j = 0; j < ne; ++j) {
        cplx mi = 1.0;
        for (int l = 0; l <= L; ++l) {
            phi[l] = mi * std::polar(1.0, -basis.phases(l)[j]);
            mi *= cplx(0.0, -1.0);
        }
        for (int lp = 0; lp <= L; ++lp)
            for (int l = 0; l <= L; ++l) R(l, lp) = (phi[l] * std::conj(phi[lp]) * W(j, pair_col(l, lp, L))).real();
        out.row(j) = (Y.cwiseProduct(R * Y)).colwise().sum();
    }
    return out;
}

VectorXd absorption_angle(const MatrixXcd& Z, const VectorXd& theta) {
    const int L = static_cast<int>(Z.rows()) - 1;
    MatrixXd Y(L + 1, theta.size());
    for (int l = 0; l <= L; ++l) Y.row(l) = legendre_spherical(l, 0, theta).transpose();
    const MatrixXd R = Z.real();
    return (Y.cwiseProduct(R * Y)).colwise().sum().transpose();
}

double absorption_total(const MatrixXcd& Z) { return Z.trace().real(); }

VectorXd after_energy_spectrum(const AfterInputs& inputs) {
    const SpectralParts p = after_parts(inputs, CoherentTerms::diagonal, false);
    return energy_spectrum(p.W, static_cast<int>(inputs.blocks.size()) - 1);
}

MatrixXd after_doubly_differential(const AfterInputs& inputs, const VectorXd& theta) {
    return doubly_differential(after_parts(inputs, CoherentTerms::full, false).W, *inputs.basis, theta);
}

VectorXd after_absorption_angle(const AfterInputs& inputs, const VectorXd& theta) {
    const SpectralParts p = after_parts(inputs, CoherentTerms::none, true);
    return absorption_angle(p.Z, theta);
}

std::vector<int> ati_peaks(const VectorXd& eps, const VectorXd& spectrum, double omega, double floor_rel) {
    std::vector<int> peaks;
    const Eigen::Index n = spectrum.size();
    if (n == 0) return peaks;
    const double floor = floor_rel * spectrum.maxCoeff();
    const double half = 0.4 * omega;
    for (Eigen::Index i = 1; i + 1 < n; ++i) {
        if (!(spectrum[i] > floor)) continue;
        bool top = true;
        for (Eigen::Index j = i - 1; top && j >= 0 && eps[i] - eps[j] <= half; --j) top = spectrum[j] < spectrum[i];
        for (Eigen::Index j = i + 1; top && j < n && eps[j] - eps[i] <= half; ++j) top = spectrum[j] <= spectrum[i];
        // Maxima pinned at the grid edges are not resolved peaks.
        if (top && eps[i] - eps[0] > half && eps[n - 1] - eps[i] > half) peaks.push_back(static_cast<int>(i));
    }
    return peaks;
}

double trapezoid(const VectorXd& x, const VectorXd& y) {
    double s = 0.0;
    for (Eigen::Index i = 1; i < x.size(); ++i) s += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
    return s;
}

SpectraBundle assemble(const SpectralParts& before, const SpectralParts& after, const ContinuumBasis& basis,
                       const VectorXd& theta, double norm_T) {
    if (before.W.rows() != after.W.rows() || before.W.cols() != after.W.cols() || before.Z.rows() != after.Z.rows())
        throw std::invalid_argument("assemble: before and after parts live on different grids");
    const int L = basis.L_max();
    SpectraBundle s;
    s.eps = basis.energies().eps;
    s.theta = theta;
    s.dPdE_before = energy_spectrum(before.W, L);
    s.dPdE_after = energy_spectrum(after.W, L);
    s.dPdE_total = s.dPdE_before + s.dPdE_after;

    const MatrixXd d2_before = doubly_differential(before.W, basis, theta);
    const MatrixXd d2_after = doubly_differential(after.W, basis, theta);
    s.d2P = d2_before + d2_after;
    s.dPdOmegaK_before.resize(theta.size());
    s.dPdOmegaK_after.resize(theta.size());
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
        s.dPdOmegaK_before[i] = trapezoid(s.eps, d2_before.col(i));
        s.dPdOmegaK_after[i] = trapezoid(s.eps, d2_after.col(i));
    }
    s.dPdOmegaK_total = s.dPdOmegaK_before + s.dPdOmegaK_after;

    s.dPdOmega_before = absorption_angle(before.Z, theta);
    s.dPdOmega_after = absorption_angle(after.Z, theta);
    s.dPdOmega_total = s.dPdOmega_before + s.dPdOmega_after;

    s.absorbed_during_pulse = absorption_total(before.Z);
    s.absorption_before = s.absorbed_during_pulse;
    s.absorption_after = absorption_total(after.Z);
    s.norm_T = norm_T;
    s.ionization = trapezoid(s.eps, s.dPdE_total);
    const double peak = s.dPdE_total.maxCoeff();
    s.min_over_peak = peak > 0.0 ? s.dPdE_total.minCoeff() / peak : 0.0;
    s.negative_probability = s.min_over_peak < -kNegativeTolerance;
    return s;
}

}  // namespace pescado
