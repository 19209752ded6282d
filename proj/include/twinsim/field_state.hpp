#pragma once

#include <complex>
#include <Eigen/Dense>

#include "twinsim/errors.hpp"
#include "twinsim/grid.hpp"

namespace twinsim {

enum class Beam { Probe, Conjugate, Both };

// Gaussian state of the probe/conjugate pair on a 1D pixel lattice.
//
// Quadrature convention: X = a + a^dag, P = -i(a - a^dag), so the vacuum has
// unit variance in every quadrature and QNL-relative noise is a pure ratio.
// cov is (4N)x(4N), ordered [X_probe | P_probe | X_conj | P_conj], one block
// of N pixels each. Means are complex amplitudes in sqrt(photon-flux) units;
// <X_i> = 2 Re(alpha_i), <P_i> = 2 Im(alpha_i).
//
// States are values: every channel returns a new (or moved-through) state, so
// read-only sharing across threads is safe without locks.
struct FieldState {
    Grid1D grid;
    Eigen::VectorXcd mean_probe;
    Eigen::VectorXcd mean_conj;
    Eigen::MatrixXd cov;

    int pixels() const { return grid.pixel_count; }
    int dim() const { return 4 * grid.pixel_count; }

    // Quadrature indices of pixel i.
    int ix(Beam b, int i) const { return (b == Beam::Probe ? 0 : 2) * pixels() + i; }
    int ip(Beam b, int i) const { return (b == Beam::Probe ? 1 : 3) * pixels() + i; }

    const Eigen::VectorXcd& mean(Beam b) const {
        return b == Beam::Probe ? mean_probe : mean_conj;
    }
    Eigen::VectorXcd& mean(Beam b) {
        return b == Beam::Probe ? mean_probe : mean_conj;
    }

    // Relative symmetry defect of the covariance matrix.
    double symmetry_defect() const {
        const double scale = std::max(1.0, cov.cwiseAbs().maxCoeff());
        return (cov - cov.transpose()).cwiseAbs().maxCoeff() / scale;
    }

    void require_symmetric(double tol = 1e-10) const {
        if (symmetry_defect() > tol)
            throw numerical_error("FieldState: covariance matrix is not symmetric "
                                  "(defect " + std::to_string(symmetry_defect()) + ")");
    }
};

// Vacuum on the given grid: zero means, identity covariance.
inline FieldState make_vacuum(const Grid1D& grid) {
    grid.validate();
    FieldState st;
    st.grid = grid;
    st.mean_probe = Eigen::VectorXcd::Zero(grid.pixel_count);
    st.mean_conj = Eigen::VectorXcd::Zero(grid.pixel_count);
    st.cov = Eigen::MatrixXd::Identity(4 * grid.pixel_count, 4 * grid.pixel_count);
    return st;
}

// Mean quadrature vector (2 Re alpha, 2 Im alpha per pixel) in cov ordering.
inline Eigen::VectorXd mean_quadratures(const FieldState& st) {
    const int n = st.pixels();
    Eigen::VectorXd r(4 * n);
    for (int i = 0; i < n; ++i) {
        r[i] = 2.0 * st.mean_probe[i].real();
        r[n + i] = 2.0 * st.mean_probe[i].imag();
        r[2 * n + i] = 2.0 * st.mean_conj[i].real();
        r[3 * n + i] = 2.0 * st.mean_conj[i].imag();
    }
    return r;
}

inline void set_means_from_quadratures(FieldState& st, const Eigen::VectorXd& r) {
    const int n = st.pixels();
    for (int i = 0; i < n; ++i) {
        st.mean_probe[i] = std::complex<double>(0.5 * r[i], 0.5 * r[n + i]);
        st.mean_conj[i] = std::complex<double>(0.5 * r[2 * n + i], 0.5 * r[3 * n + i]);
    }
}

} // namespace twinsim
