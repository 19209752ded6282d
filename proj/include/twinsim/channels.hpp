#pragma once

#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "twinsim/field_state.hpp"

namespace twinsim {

// Explicit Gaussian channel: r -> m r, C -> m C m^T + added_noise.
// Container form used by tests and by channels that are genuinely matrix-
// valued (imaging blur); the elementary channels below act in place instead.
struct ChannelMap {
    Eigen::MatrixXd m;
    Eigen::MatrixXd added_noise;
};

// Complete-positivity test: added_noise + i(Omega - m Omega m^T) >= 0,
// checked to numerical tolerance on the minimum eigenvalue.
inline bool is_valid_gaussian_channel(const ChannelMap& ch, int n_pixels,
                                      double tol = 1e-8) {
    const int dim = static_cast<int>(ch.m.rows());
    if (ch.m.cols() != dim || ch.added_noise.rows() != dim ||
        ch.added_noise.cols() != dim)
        return false;
    Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(dim, dim);
    const int n = n_pixels;
    omega.block(0, n, n, n).setIdentity();
    omega.block(n, 0, n, n) = -Eigen::MatrixXd::Identity(n, n);
    omega.block(2 * n, 3 * n, n, n).setIdentity();
    omega.block(3 * n, 2 * n, n, n) = -Eigen::MatrixXd::Identity(n, n);

    const Eigen::MatrixXd defect = omega - ch.m * omega * ch.m.transpose();
    Eigen::MatrixXcd h = ch.added_noise.cast<std::complex<double>>();
    h += std::complex<double>(0.0, 1.0) * defect.cast<std::complex<double>>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -tol;
}

inline FieldState apply_channel_map(FieldState st, const ChannelMap& ch) {
    Eigen::VectorXd r = ch.m * mean_quadratures(st);
    st.cov = ch.m * st.cov * ch.m.transpose() + ch.added_noise;
    st.cov = 0.5 * (st.cov + st.cov.transpose()).eval();
    set_means_from_quadratures(st, r);
    return st;
}

namespace detail {

inline void for_each_beam(Beam b, auto&& fn) {
    if (b == Beam::Probe || b == Beam::Both) fn(Beam::Probe);
    if (b == Beam::Conjugate || b == Beam::Both) fn(Beam::Conjugate);
}

} // namespace detail

// Pure loss as the beamsplitter-with-vacuum channel: means scale by sqrt(eta),
// variances go to eta*V + (1-eta), cross terms scale by sqrt(eta_i eta_j).
inline FieldState apply_loss(FieldState st, Beam beam,
                             const Eigen::VectorXd& transmission) {
    const int n = st.pixels();
    if (transmission.size() != n)
        throw config_error("apply_loss: transmission vector size mismatch");
    if ((transmission.array() < 0.0).any() || (transmission.array() > 1.0).any())
        throw std::domain_error("apply_loss: transmission must be in [0, 1]");

    Eigen::VectorXd s = Eigen::VectorXd::Ones(st.dim());
    const Eigen::VectorXd root = transmission.cwiseSqrt();
    detail::for_each_beam(beam, [&](Beam b) {
        const int x0 = st.ix(b, 0), p0 = st.ip(b, 0);
        s.segment(x0, n) = root;
        s.segment(p0, n) = root;
        st.mean(b) = st.mean(b).cwiseProduct(root.cast<std::complex<double>>());
    });
    st.cov = s.asDiagonal() * st.cov * s.asDiagonal();
    st.cov.diagonal() += (1.0 - s.array().square()).matrix();
    return st;
}

inline FieldState apply_loss(FieldState st, Beam beam, double transmission) {
    const int n = st.pixels();
    return apply_loss(std::move(st), beam, Eigen::VectorXd::Constant(n, transmission));
}

// Per-pixel phase shift: alpha -> e^{i theta} alpha and the (X, P) pair
// rotates by theta. Exactly symplectic, so physicality is preserved.
inline FieldState apply_phase(FieldState st, Beam beam,
                              const Eigen::VectorXd& theta) {
    const int n = st.pixels();
    if (theta.size() != n)
        throw config_error("apply_phase: theta vector size mismatch");
    if (!theta.allFinite())
        throw std::domain_error("apply_phase: theta must be finite");

    const Eigen::VectorXd c = theta.array().cos();
    const Eigen::VectorXd s = theta.array().sin();
    detail::for_each_beam(beam, [&](Beam b) {
        const int x0 = st.ix(b, 0), p0 = st.ip(b, 0);
        // Rows: [X'; P'] = [[c, -s], [s, c]] [X; P], then the same on columns.
        Eigen::MatrixXd xr = st.cov.middleRows(x0, n);
        Eigen::MatrixXd pr = st.cov.middleRows(p0, n);
        st.cov.middleRows(x0, n) = c.asDiagonal() * xr - s.asDiagonal() * pr;
        st.cov.middleRows(p0, n) = s.asDiagonal() * xr + c.asDiagonal() * pr;
        Eigen::MatrixXd xc = st.cov.middleCols(x0, n);
        Eigen::MatrixXd pc = st.cov.middleCols(p0, n);
        st.cov.middleCols(x0, n) = xc * c.asDiagonal() - pc * s.asDiagonal();
        st.cov.middleCols(p0, n) = xc * s.asDiagonal() + pc * c.asDiagonal();
        for (int i = 0; i < n; ++i)
            st.mean(b)[i] *= std::complex<double>(c[i], s[i]);
    });
    return st;
}

inline FieldState apply_phase(FieldState st, Beam beam, double theta) {
    const int n = st.pixels();
    return apply_phase(std::move(st), beam, Eigen::VectorXd::Constant(n, theta));
}

// Energy-conserving mixing of two pixels of one beam: the 2x2 rotation
// cos/sin(angle) acts identically on the X block, the P block and the means.
inline FieldState apply_beamsplitter(FieldState st, Beam beam, int pixel_i,
                                     int pixel_j, double angle) {
    const int n = st.pixels();
    if (beam == Beam::Both)
        throw std::invalid_argument("apply_beamsplitter: pick one beam");
    if (pixel_i < 0 || pixel_i >= n || pixel_j < 0 || pixel_j >= n)
        throw std::out_of_range("apply_beamsplitter: pixel index out of range");
    if (pixel_i == pixel_j)
        throw std::invalid_argument("apply_beamsplitter: pixels must differ");

    const double c = std::cos(angle), s = std::sin(angle);
    auto rotate_rows = [&](int a, int b) {
        const Eigen::RowVectorXd ra = st.cov.row(a);
        const Eigen::RowVectorXd rb = st.cov.row(b);
        st.cov.row(a) = c * ra - s * rb;
        st.cov.row(b) = s * ra + c * rb;
    };
    auto rotate_cols = [&](int a, int b) {
        const Eigen::VectorXd ca = st.cov.col(a);
        const Eigen::VectorXd cb = st.cov.col(b);
        st.cov.col(a) = c * ca - s * cb;
        st.cov.col(b) = s * ca + c * cb;
    };
    rotate_rows(st.ix(beam, pixel_i), st.ix(beam, pixel_j));
    rotate_rows(st.ip(beam, pixel_i), st.ip(beam, pixel_j));
    rotate_cols(st.ix(beam, pixel_i), st.ix(beam, pixel_j));
    rotate_cols(st.ip(beam, pixel_i), st.ip(beam, pixel_j));

    auto& mean = st.mean(beam);
    const std::complex<double> mi = mean[pixel_i], mj = mean[pixel_j];
    mean[pixel_i] = c * mi - s * mj;
    mean[pixel_j] = s * mi + c * mj;
    return st;
}

// Tunable loss on one arm (the half-wave-plate + polarizer pair in front of
// the detector): uniform loss with transmission a.
struct AttenuatorSetting {
    double transmission = 1.0;

    void validate() const {
        if (!(transmission >= 0.0 && transmission <= 1.0))
            throw config_error("attenuator.transmission: must be in [0, 1]");
    }
};

inline FieldState apply_attenuator(FieldState st, Beam beam, AttenuatorSetting a) {
    a.validate();
    return apply_loss(std::move(st), beam, a.transmission);
}

// Detector quantum efficiency: uniform loss on both beams.
inline FieldState apply_detector_efficiency(FieldState st, double qe) {
    if (!(qe >= 0.0 && qe <= 1.0))
        throw std::domain_error("detector_qe: must be in [0, 1]");
    return apply_loss(std::move(st), Beam::Both, qe);
}

} // namespace twinsim
