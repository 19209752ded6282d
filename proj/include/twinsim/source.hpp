#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "twinsim/field_state.hpp"

namespace twinsim {

// Four-wave-mixing amplifier parameters. pump_waist_um and seed_waist_um are
// 1/e^2 intensity radii; pump_waist_um = infinity selects a uniform gain.
struct SourceParams {
    double gain_peak = 1.5;
    double pump_waist_um = std::numeric_limits<double>::infinity();
    double coherence_cell_um = 64.0;
    double seed_waist_um = 400.0;
    double seed_power = 1e6;
    double wavelength_nm = 795.0; // documentation only in the 1D model

    void validate(const Grid1D& grid) const {
        if (!(gain_peak > 1.0))
            throw config_error("source.gain_peak: must be > 1");
        if (!(coherence_cell_um >= 2.0 * grid.pitch_um))
            throw config_error("source.coherence_cell_um: need at least two pixels "
                               "per coherence cell");
        if (!(seed_waist_um > coherence_cell_um))
            throw config_error("source.seed_waist_um: the beam must span many "
                               "coherence cells");
        if (!(pump_waist_um > 0.0))
            throw config_error("source.pump_waist_um: must be > 0");
        if (!(seed_power >= 0.0))
            throw config_error("source.seed_power: must be >= 0");
    }
};

// Contiguous run of pixels forming one coherence cell.
struct CoherenceCell {
    int first = 0;
    int count = 0;
    double center_um = 0.0;
};

// Partition of the grid into cells of the given width, counted from the left
// grid edge; the last cell may be shorter.
inline std::vector<CoherenceCell> partition_cells(const Grid1D& grid,
                                                  double cell_width_um) {
    std::vector<CoherenceCell> cells;
    const double left = grid.left_edge();
    int i = 0;
    while (i < grid.pixel_count) {
        const int k = static_cast<int>((grid.coord(i) - left) / cell_width_um);
        int j = i;
        while (j < grid.pixel_count &&
               static_cast<int>((grid.coord(j) - left) / cell_width_um) == k)
            ++j;
        const double lo = left + k * cell_width_um;
        const double hi = std::min(lo + cell_width_um, grid.right_edge());
        cells.push_back({i, j - i, 0.5 * (lo + hi)});
        i = j;
    }
    return cells;
}

inline double local_gain(const SourceParams& p, double x_um) {
    if (std::isinf(p.pump_waist_um)) return p.gain_peak;
    const double u = x_um / p.pump_waist_um;
    return 1.0 + (p.gain_peak - 1.0) * std::exp(-2.0 * u * u);
}

// Bright multimode two-mode squeezed state. Each coherence cell carries an
// independent two-mode squeezer with r = arccosh(sqrt(G_k)) acting on the
// cell's normalized top-hat mode, pairing the probe cell with the conjugate
// cell at the same position. Applied to vacuum this gives, per cell mode,
// Var(X) = Var(P) = 2G-1 on each beam and <X_p X_c> = -<P_p P_c> =
// 2 sqrt(G(G-1)). Means: probe sqrt(G)*seed, conjugate sqrt(G-1)*seed.
inline FieldState build_twin_beams(const Grid1D& grid, const SourceParams& p) {
    p.validate(grid);
    FieldState st = make_vacuum(grid);
    const int n = grid.pixel_count;

    // Seed amplitude profile, normalized to total flux = seed_power.
    Eigen::VectorXd seed(n);
    for (int i = 0; i < n; ++i) {
        const double u = grid.coord(i) / p.seed_waist_um;
        seed[i] = std::exp(-u * u);
    }
    const double norm = seed.squaredNorm();
    if (norm > 0.0) seed *= std::sqrt(p.seed_power / norm);

    const int xp0 = st.ix(Beam::Probe, 0), pp0 = st.ip(Beam::Probe, 0);
    const int xc0 = st.ix(Beam::Conjugate, 0), pc0 = st.ip(Beam::Conjugate, 0);

    for (const CoherenceCell& cell : partition_cells(grid, p.coherence_cell_um)) {
        const double g = local_gain(p, cell.center_um);
        const double c2 = 2.0 * g - 1.0;               // cosh(2r)
        const double s2 = 2.0 * std::sqrt(g * (g - 1.0)); // sinh(2r)
        const double uu = 1.0 / cell.count;            // u u^T entry of the top-hat mode

        for (int a = 0; a < cell.count; ++a) {
            const int i = cell.first + a;
            for (int b = 0; b < cell.count; ++b) {
                const int j = cell.first + b;
                st.cov(xp0 + i, xp0 + j) += (c2 - 1.0) * uu;
                st.cov(pp0 + i, pp0 + j) += (c2 - 1.0) * uu;
                st.cov(xc0 + i, xc0 + j) += (c2 - 1.0) * uu;
                st.cov(pc0 + i, pc0 + j) += (c2 - 1.0) * uu;
                st.cov(xp0 + i, xc0 + j) += s2 * uu;
                st.cov(xc0 + j, xp0 + i) += s2 * uu;
                st.cov(pp0 + i, pc0 + j) -= s2 * uu;
                st.cov(pc0 + j, pp0 + i) -= s2 * uu;
            }
            st.mean_probe[i] = std::sqrt(g) * seed[i];
            st.mean_conj[i] = std::sqrt(g - 1.0) * seed[i];
        }
    }
    return st;
}

// QNL-relative intensity-difference variance of the seeded phase-insensitive
// amplifier after independent transmissions eta_p, eta_c (linearized bright-
// beam result; the analytic oracle for the covariance engine).
inline double closed_form_noise(double gain, double eta_p, double eta_c) {
    if (!(gain > 1.0))
        throw std::domain_error("closed_form_noise: gain must be > 1");
    if (!(eta_p >= 0.0 && eta_p <= 1.0 && eta_c >= 0.0 && eta_c <= 1.0))
        throw std::domain_error("closed_form_noise: transmissions must be in [0, 1]");
    const double g = gain;
    const double den = eta_p * g + eta_c * (g - 1.0);
    if (!(den > 0.0))
        throw std::domain_error("closed_form_noise: no flux reaches the detector");
    const double num = eta_p * eta_p * g * (2.0 * g - 1.0) +
                       eta_c * eta_c * (g - 1.0) * (2.0 * g - 1.0) -
                       4.0 * eta_p * eta_c * g * (g - 1.0) +
                       eta_p * (1.0 - eta_p) * g +
                       eta_c * (1.0 - eta_c) * (g - 1.0);
    return num / den;
}

inline double to_decibel(double variance_ratio) {
    return 10.0 * std::log10(variance_ratio);
}

} // namespace twinsim
