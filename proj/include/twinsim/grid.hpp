#pragma once

#include <cstdint>
#include <string>

#include "twinsim/errors.hpp"

namespace twinsim {

// 1D transverse pixel lattice. Coordinates are in micrometres; pixel i is
// centred at origin_um + i * pitch_um.
struct Grid1D {
    int pixel_count = 0;
    double pitch_um = 0.0;
    double origin_um = 0.0;

    double coord(int i) const { return origin_um + i * pitch_um; }
    double left_edge() const { return origin_um - 0.5 * pitch_um; }
    double right_edge() const { return coord(pixel_count - 1) + 0.5 * pitch_um; }
    double extent() const { return pixel_count * pitch_um; }

    void validate() const {
        if (pixel_count < 2)
            throw config_error("grid.pixel_count: must be >= 2, got " +
                               std::to_string(pixel_count));
        if (!(pitch_um > 0.0))
            throw config_error("grid.pitch_um: must be > 0");
    }
};

// 2D pixel raster used only by the near/far-field renderer.
struct Grid2D {
    int nx = 0;
    int ny = 0;
    double pitch_um = 0.0;

    static constexpr std::int64_t kMaxPixels = std::int64_t(1) << 22;

    void validate() const {
        if (nx < 2 || ny < 2)
            throw config_error("render.grid: nx and ny must be >= 2");
        if (!(pitch_um > 0.0))
            throw config_error("render.grid: pitch_um must be > 0");
        if (std::int64_t(nx) * std::int64_t(ny) > kMaxPixels)
            throw config_error("render.grid: nx*ny exceeds the pixel budget of 2^22");
    }
};

} // namespace twinsim
