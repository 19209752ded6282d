#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "twinsim/field_state.hpp"

namespace twinsim {

struct PhysicalityReport {
    bool ok = false;
    double nu_min = 0.0; // minimum symplectic eigenvalue
};

// Uncertainty-principle tolerance: nu_min >= 1 - kPhysicalityTol. Absorbs the
// floating-point drift of ~1e3 chained channel applications.
inline constexpr double kPhysicalityTol = 1e-9;

namespace detail {

// Applies the symplectic form to the rows of A for the [X_p|P_p|X_c|P_c]
// layout: Omega = diag over beams of [[0, I], [-I, 0]] on (X, P).
inline Eigen::MatrixXd omega_times(const Eigen::MatrixXd& a, int n_pixels) {
    const int n = n_pixels;
    Eigen::MatrixXd out(a.rows(), a.cols());
    out.middleRows(0, n) = a.middleRows(n, n);
    out.middleRows(n, n) = -a.middleRows(0, n);
    out.middleRows(2 * n, n) = a.middleRows(3 * n, n);
    out.middleRows(3 * n, n) = -a.middleRows(2 * n, n);
    return out;
}

// Symplectic spectrum via a Schur-free route: with C = L L^T, the eigenvalues
// of i Omega C equal those of the Hermitian i L^T Omega L, so the nu_j^2 are
// the eigenvalues of M^T M with M = L^T Omega L (each doubled).
inline Eigen::VectorXd symplectic_spectrum_cholesky(const Eigen::MatrixXd& cov,
                                                    int n_pixels) {
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success) {
        Eigen::MatrixXd jittered = cov;
        jittered.diagonal().array() += 1e-12;
        llt.compute(jittered);
        if (llt.info() != Eigen::Success)
            throw numerical_error("symplectic spectrum: covariance is not positive "
                                  "definite");
    }
    const Eigen::MatrixXd l = llt.matrixL();
    const Eigen::MatrixXd m = l.transpose() * omega_times(l, n_pixels);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.transpose() * m,
                                                      Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
}

// Fallback for covariances that are not positive definite (corrupted states):
// direct complex spectrum of Omega C, whose eigenvalues are +/- i nu.
inline double nu_min_direct(const Eigen::MatrixXd& cov, int n_pixels) {
    const Eigen::MatrixXd oc = omega_times(cov, n_pixels);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(oc.cast<std::complex<double>>(),
                                                   false);
    return es.eigenvalues().imag().cwiseAbs().minCoeff();
}

} // namespace detail

// Full symplectic spectrum of the state covariance (2N values, ascending).
inline Eigen::VectorXd symplectic_eigenvalues(const FieldState& st) {
    st.require_symmetric();
    Eigen::VectorXd nus = detail::symplectic_spectrum_cholesky(st.cov, st.pixels());
    // Each symplectic eigenvalue appears twice in the 4N-dim spectrum.
    Eigen::VectorXd half(nus.size() / 2);
    std::sort(nus.data(), nus.data() + nus.size());
    for (int i = 0; i < half.size(); ++i) half[i] = nus[2 * i];
    return half;
}

// Uncertainty-principle check. Throws on a non-symmetric covariance (contract
// violation); returns ok = false for physically invalid but well-formed input.
inline PhysicalityReport check_physicality(const FieldState& st) {
    st.require_symmetric();
    PhysicalityReport rep;
    try {
        rep.nu_min = detail::symplectic_spectrum_cholesky(st.cov, st.pixels()).minCoeff();
    } catch (const numerical_error&) {
        rep.nu_min = detail::nu_min_direct(st.cov, st.pixels());
    }
    rep.ok = rep.nu_min >= 1.0 - kPhysicalityTol;
    return rep;
}

} // namespace twinsim
