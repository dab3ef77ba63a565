#include "pescado/hamiltonian.hpp"

#include <cmath>
#include <stdexcept>

#include "pescado/linalg.hpp"

namespace pescado {
namespace {

// y = D x with the antisymmetric central difference and Dirichlet walls.
void central_derivative(const Eigen::Ref<const VectorXcd>& x, Eigen::Ref<VectorXcd> y, double h) {
    const Eigen::Index n = x.size();
    const double s = 0.5 / h;
    y[0] = s * x[1];
    y.segment(1, n - 2) = s * (x.tail(n - 2) - x.head(n - 2));
    y[n - 1] = -s * x[n - 2];
}

}  // namespace

FieldFreeBlock build_field_free_block(const RadialGrid& grid, int ell, const CapParams& cap, bool include_cap) {
    if (ell < 0) throw std::invalid_argument("build_field_free_block: ell must be non-negative");
    FieldFreeBlock b;
    b.ell = ell;
    b.h = grid.h;
    b.include_cap = include_cap;
    b.offdiag = -0.5 / (grid.h * grid.h);
    b.diag.resize(grid.N);
    const double centrifugal = 0.5 * ell * (ell + 1);
    for (int i = 0; i < grid.N; ++i) {
        const double r = grid.r(i);
        b.diag[i] = 1.0 / (grid.h * grid.h) + centrifugal / (r * r) - 1.0 / r;
    }
    if (include_cap) b.cap = cap_on_grid(grid, cap);
    return b;
}

MatrixXd FieldFreeBlock::dense_hermitian() const {
    const int n = N();
    MatrixXd a = MatrixXd::Zero(n, n);
    a.diagonal() = diag;
    a.diagonal(1).setConstant(offdiag);
    a.diagonal(-1).setConstant(offdiag);
    return a;
}

MatrixXcd FieldFreeBlock::dense() const {
    MatrixXcd a = dense_hermitian().cast<cplx>();
    if (include_cap) a.diagonal() -= kI * cap.cast<cplx>();
    return a;
}

void FieldFreeBlock::apply_hermitian(const Eigen::Ref<const VectorXcd>& x, Eigen::Ref<VectorXcd> y) const {
    const Eigen::Index n = x.size();
    y = diag.cwiseProduct(x);
    y.head(n - 1) += offdiag * x.tail(n - 1);
    y.tail(n - 1) += offdiag * x.head(n - 1);
}

DipoleCoupling::DipoleCoupling(const RadialGrid& grid, int L, int m_) : L_max(L), m(m_), h(grid.h) {
    coeff.assign(L + 1, 0.0);
    for (int l = 1; l <= L; ++l) {
        const double num = double(l) * l - double(m) * m;
        coeff[l] = num > 0.0 ? std::sqrt(num / ((2.0 * l - 1.0) * (2.0 * l + 1.0))) : 0.0;
    }
    inv_r = grid.radii().cwiseInverse();
}

void DipoleCoupling::apply_pz(const MatrixXcd& x, MatrixXcd& out, cplx scale) const {
    const Eigen::Index n = x.rows();
    VectorXcd dx(n);
    for (int l = 0; l <= L_max; ++l) {
        central_derivative(x.col(l), dx, h);
        // p_z = -i d/dz; (d/dz)_{l+1<-l} = c (D - (l+1)/r), (d/dz)_{l-1<-l} = c' (D + l/r).
        if (l < L_max && coeff[l + 1] != 0.0) {
            const cplx s = -kI * scale * coeff[l + 1];
            out.col(l + 1) += s * (dx - (l + 1.0) * inv_r.cwiseProduct(x.col(l)));
        }
        if (l > 0 && coeff[l] != 0.0) {
            const cplx s = -kI * scale * coeff[l];
            out.col(l - 1) += s * (dx + double(l) * inv_r.cwiseProduct(x.col(l)));
        }
    }
}

MatrixXcd DipoleCoupling::dense_pz() const {
    const Eigen::Index n = inv_r.size();
    const Eigen::Index dim = n * (L_max + 1);
    MatrixXcd p(dim, dim);
    MatrixXcd e = MatrixXcd::Zero(n, L_max + 1);
    MatrixXcd y(n, L_max + 1);
    for (Eigen::Index j = 0; j < dim; ++j) {
        e.setZero();
        e(j % n, j / n) = 1.0;
        y.setZero();
        apply_pz(e, y, 1.0);
        p.col(j) = Eigen::Map<const VectorXcd>(y.data(), dim);
    }
    return p;
}

Hamiltonian::Hamiltonian(const RadialGrid& grid, int L_max, const PulseParams& pulse, int m)
    : grid_(grid), L_max_(L_max), pulse_(pulse), coupling_(grid, L_max, m) {
    blocks_.reserve(L_max + 1);
    for (int l = 0; l <= L_max; ++l) blocks_.push_back(build_field_free_block(grid, l, CapParams{0.0, grid.R()}, false));
}

void Hamiltonian::apply_with_field(const MatrixXcd& x, double a, MatrixXcd& out) const {
    out.resize(x.rows(), x.cols());
    for (int l = 0; l <= L_max_; ++l) blocks_[l].apply_hermitian(x.col(l), out.col(l));
    if (a != 0.0) coupling_.apply_pz(x, out, a);
}

void Hamiltonian::apply(const MatrixXcd& x, double t, MatrixXcd& out) const {
    apply_with_field(x, vector_potential(t, pulse_), out);
}

MatrixXcd Hamiltonian::dense(double t) const {
    const Eigen::Index n = grid_.N;
    MatrixXcd h = vector_potential(t, pulse_) * coupling_.dense_pz();
    for (int l = 0; l <= L_max_; ++l) h.block(l * n, l * n, n, n) += blocks_[l].dense();
    return h;
}

MatrixXcd apply_effective_hamiltonian(const PartialWaveState& state, double t, const Hamiltonian& H) {
    if (state.N() != H.N() || state.L_max() != H.L_max())
        throw std::invalid_argument("apply_effective_hamiltonian: state shape does not match the Hamiltonian");
    MatrixXcd out;
    H.apply(state.data, t, out);
    return out;
}

VectorXd bound_energies(const RadialGrid& grid, int ell, int count) {
    const FieldFreeBlock b = build_field_free_block(grid, ell, CapParams{0.0, grid.R()}, false);
    VectorXd off = VectorXd::Constant(grid.N - 1, b.offdiag);
    return linalg::sym_tridiag_lowest(b.diag, off, count).values;
}

GroundState ground_state(const RadialGrid& grid, int L_max) {
    const FieldFreeBlock b = build_field_free_block(grid, 0, CapParams{0.0, grid.R()}, false);
    VectorXd off = VectorXd::Constant(grid.N - 1, b.offdiag);
    const auto eig = linalg::sym_tridiag_lowest(b.diag, off, 1);
    VectorXd v = eig.vectors.col(0);
    if (v.sum() < 0.0) v = -v;
    v /= std::sqrt(grid.h * v.squaredNorm());

    GroundState gs{PartialWaveState(grid, L_max), eig.values[0]};
    gs.state.data.col(0) = v.cast<cplx>();
    return gs;
}

}  // namespace pescado
