#include "pescado/linalg.hpp"

#include <string>
#include <vector>

#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace pescado::linalg {

SymTridiagEigen sym_tridiag_lowest(const VectorXd& diag, const VectorXd& offdiag, int count) {
    const lapack_int n = static_cast<lapack_int>(diag.size());
    if (count < 1 || count > n) throw std::invalid_argument("sym_tridiag_lowest: bad eigenpair count");
    VectorXd d = diag;
    VectorXd e(n);
    e.setZero();
    e.head(n - 1) = offdiag.head(n - 1);
    lapack_int m = 0;
    SymTridiagEigen out;
    out.values.resize(n);
    out.vectors.resize(n, count);
    std::vector<lapack_int> isuppz(2 * static_cast<size_t>(count));
    const lapack_int info = LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'I', n, d.data(), e.data(), 0.0, 0.0, 1, count,
                                           0.0, &m, out.values.data(), out.vectors.data(), n, isuppz.data());
    if (info != 0 || m != count) throw NumericalError("dstevr failed, info = " + std::to_string(info));
    out.values.conservativeResize(count);
    return out;
}

GeneralEigen general_eigen(const MatrixXcd& a) {
    const lapack_int n = static_cast<lapack_int>(a.rows());
    MatrixXcd work = a;
    GeneralEigen out;
    out.values.resize(n);
    out.vectors.resize(n, n);
    const lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'V', n, work.data(), n, out.values.data(), nullptr,
                                          1, out.vectors.data(), n);
    if (info != 0) throw NumericalError("zgeev failed, info = " + std::to_string(info));
    return out;
}

MatrixXcd pseudo_inverse(const MatrixXcd& a, double rtol, int* truncated) {
    const lapack_int m = static_cast<lapack_int>(a.rows());
    const lapack_int n = static_cast<lapack_int>(a.cols());
    const lapack_int k = std::min(m, n);
    MatrixXcd work = a;
    VectorXd s(k);
    MatrixXcd u(m, k), vt(k, n);
    const lapack_int info =
        LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'S', m, n, work.data(), m, s.data(), u.data(), m, vt.data(), k);
    if (info != 0) throw NumericalError("zgesdd failed, info = " + std::to_string(info));
    const double cut = rtol * (k > 0 ? s[0] : 0.0);
    VectorXd sinv(k);
    int dropped = 0;
    for (lapack_int i = 0; i < k; ++i) {
        if (s[i] > cut) {
            sinv[i] = 1.0 / s[i];
        } else {
            sinv[i] = 0.0;
            ++dropped;
        }
    }
    if (truncated) *truncated = dropped;
    return vt.adjoint() * sinv.asDiagonal() * u.adjoint();
}

InverseResult robust_inverse(const MatrixXcd& a, double cond_limit, double pinv_rtol) {
    const lapack_int n = static_cast<lapack_int>(a.rows());
    InverseResult out;
    out.inverse = a;
    const double anorm = a.cwiseAbs().colwise().sum().maxCoeff();
    std::vector<lapack_int> ipiv(n);
    lapack_int info = LAPACKE_zgetrf(LAPACK_COL_MAJOR, n, n, out.inverse.data(), n, ipiv.data());
    if (info == 0) {
        info = LAPACKE_zgecon(LAPACK_COL_MAJOR, '1', n, out.inverse.data(), n, anorm, &out.rcond);
        if (info == 0 && out.rcond * cond_limit >= 1.0) {
            info = LAPACKE_zgetri(LAPACK_COL_MAJOR, n, out.inverse.data(), n, ipiv.data());
            if (info == 0) return out;
        }
    } else {
        out.rcond = 0.0;
    }
    out.pseudo = true;
    out.inverse = pseudo_inverse(a, pinv_rtol, &out.truncated);
    return out;
}

}  // namespace pescado::linalg
