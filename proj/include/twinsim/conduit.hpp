#pragma once

#include <cstdint>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "twinsim/channels.hpp"
#include "twinsim/rng.hpp"
#include "twinsim/source.hpp"

namespace twinsim {

// Imaging fiber bundle. fill_transmission * facet_transmission is the total
// mean-power transmission; the defaults are calibrated to a combined ~0.30.
struct ConduitParams {
    double fiber_pitch_um = 12.0;
    double fill_transmission = 0.35;
    double facet_transmission = 0.857;
    double crosstalk_angle = 0.15; // radians; inter-fiber coupling strength
    std::uint64_t phase_seed = 0x7157A11C01DULL;
    double output_na = 0.55; // documentation / far-field renderer only
    double core_fraction = 0.8; // core diameter / fiber pitch (renderer only)

    double total_transmission() const { return fill_transmission * facet_transmission; }

    void validate() const {
        if (!(fiber_pitch_um > 0.0))
            throw config_error("conduit.fiber_pitch_um: must be > 0");
        const double t = total_transmission();
        if (!(t > 0.0 && t <= 1.0))
            throw config_error("conduit.fill_transmission*facet_transmission: must be "
                               "in (0, 1]");
        if (!(crosstalk_angle >= 0.0))
            throw config_error("conduit.crosstalk_angle: must be >= 0");
        if (!(core_fraction > 0.0 && core_fraction <= 1.0))
            throw config_error("conduit.core_fraction: must be in (0, 1]");
    }
};

// One random phase per fiber, drawn uniformly from [0, 2 pi).
struct PhaseScreen {
    std::vector<double> theta;
};

inline std::vector<CoherenceCell> partition_fibers(const Grid1D& grid,
                                                   const ConduitParams& p) {
    return partition_cells(grid, p.fiber_pitch_um);
}

inline PhaseScreen make_phase_screen(int fiber_count, std::uint64_t seed) {
    PhaseScreen screen;
    screen.theta.resize(fiber_count);
    Rng rng(stream_seed(seed, 0));
    for (double& th : screen.theta) th = rng.uniform(0.0, 2.0 * std::numbers::pi);
    return screen;
}

inline void write_phase_screen_csv(const std::string& path, const PhaseScreen& s) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw config_error("cannot open phase screen file for writing: " + path);
    std::fputs("fiber_index,theta_radians\n", f);
    for (std::size_t i = 0; i < s.theta.size(); ++i)
        std::fprintf(f, "%zu,%.17g\n", i, s.theta[i]);
    std::fclose(f);
}

inline PhaseScreen read_phase_screen_csv(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) throw config_error("cannot open phase screen file: " + path);
    PhaseScreen s;
    char line[256];
    if (!std::fgets(line, sizeof line, f)) {
        std::fclose(f);
        throw config_error("phase screen file is empty: " + path);
    }
    while (std::fgets(line, sizeof line, f)) {
        unsigned long idx = 0;
        double th = 0.0;
        if (std::sscanf(line, "%lu,%lg", &idx, &th) == 2) {
            if (s.theta.size() <= idx) s.theta.resize(idx + 1, 0.0);
            s.theta[idx] = th;
        }
    }
    std::fclose(f);
    return s;
}

// Everything the conduit does to the probe, as a deterministic composition:
//   1. uniform loss fill*facet,
//   2. one random phase per fiber (pixels grouped by the fiber partition),
//   3. crosstalk beamsplitters of angle eps between facing boundary pixels of
//      adjacent fibers.
// The boundary-pixel pairs of distinct fiber joints are disjoint, so step 3
// is order-independent. Cross-talk conserves energy, hence the total mean
// power transmission stays fill*facet.
//
// The observer, when set, is called after each internal channel; the
// acceptance suite uses it to audit physicality stage by stage.
using StageObserver =
    std::function<void(const std::string& stage, const FieldState& st)>;

inline FieldState apply_conduit(FieldState st, Beam beam, const ConduitParams& p,
                                const PhaseScreen& screen,
                                const StageObserver& observe = {}) {
    p.validate();
    if (!(st.grid.pitch_um <= p.fiber_pitch_um / 3.0 + 1e-12))
        throw config_error("conduit: grid pitch must be <= fiber_pitch/3 "
                           "(at least 3 pixels per fiber)");
    const auto fibers = partition_fibers(st.grid, p);
    if (screen.theta.size() != fibers.size())
        throw config_error("conduit: phase screen has " +
                           std::to_string(screen.theta.size()) + " entries for " +
                           std::to_string(fibers.size()) + " fibers");

    st = apply_loss(std::move(st), beam, p.total_transmission());
    if (observe) observe("conduit.loss", st);

    Eigen::VectorXd theta(st.pixels());
    for (std::size_t f = 0; f < fibers.size(); ++f)
        for (int a = 0; a < fibers[f].count; ++a)
            theta[fibers[f].first + a] = screen.theta[f];
    st = apply_phase(std::move(st), beam, theta);
    if (observe) observe("conduit.phase_screen", st);

    if (p.crosstalk_angle != 0.0) {
        for (std::size_t f = 0; f + 1 < fibers.size(); ++f) {
            const int left = fibers[f].first + fibers[f].count - 1;
            const int right = fibers[f + 1].first;
            st = apply_beamsplitter(std::move(st), beam, left, right,
                                    p.crosstalk_angle);
        }
    }
    if (observe) observe("conduit.crosstalk", st);
    return st;
}

inline FieldState apply_conduit(FieldState st, Beam beam, const ConduitParams& p,
                                const StageObserver& observe = {}) {
    const auto screen = make_phase_screen(
        static_cast<int>(partition_fibers(st.grid, p).size()), p.phase_seed);
    return apply_conduit(std::move(st), beam, p, screen, observe);
}

} // namespace twinsim
