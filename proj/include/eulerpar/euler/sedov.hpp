#pragma once

#include <eulerpar/euler/grid.hpp>
#include <eulerpar/euler/state.hpp>

#include <cmath>

namespace eulerpar::euler {

//! A disk of constant density.
struct DensityDisk {
    double cx = 0.0;
    double cy = 0.0;
    double radius = 0.0;
    double rho = 1.0;
    bool enabled = true;

    friend bool operator==(const DensityDisk&, const DensityDisk&) = default;
};

/*!
  Blast set-up: gas at rest, unit background density with a dense hill on the
  left and a light basin on the right, and a sharp Gaussian pressure pulse in
  the middle. Lengths are in domain units; the default sigma corresponds to
  20.48 cells of a 1024-wide grid.
*/
struct SedovParams {
    double background_rho = 1.0;
    double background_p = 1e-4;
    DensityDisk hill{0.25, 0.5, 0.1, 100.0, true};
    DensityDisk basin{0.75, 0.5, 0.1, 0.01, true};
    double peak_p = 1200.0;
    double sigma = 20.48 / 1024.0;
    double center_x = 0.5;
    double center_y = 0.5;
    //! Uniform background flow; zero for the demo problem.
    double drift_u = 0.0;
    double drift_v = 0.0;

    //! Only the centred pressure pulse, no density features.
    static SedovParams pulse_only()
    {
        SedovParams p;
        p.hill.enabled = false;
        p.basin.enabled = false;
        return p;
    }

    friend bool operator==(const SedovParams&, const SedovParams&) = default;
};

inline FieldState init_sedov(const GridSpec& grid, const SedovParams& params = {},
                             const GasModel& gas = GasModel{})
{
    FieldState field(grid, gas);
    const double two_sigma2 = 2.0 * params.sigma * params.sigma;
    auto inside = [](const DensityDisk& d, double x, double y) {
        const double rx = x - d.cx;
        const double ry = y - d.cy;
        return d.enabled && rx * rx + ry * ry <= d.radius * d.radius;
    };
    for (std::size_t i = 0; i < grid.ny(); ++i) {
        const double y = grid.y_center(i);
        for (std::size_t j = 0; j < grid.nx(); ++j) {
            const double x = grid.x_center(j);
            double rho = params.background_rho;
            if (inside(params.hill, x, y))
                rho = params.hill.rho;
            else if (inside(params.basin, x, y))
                rho = params.basin.rho;
            const double rx = x - params.center_x;
            const double ry = y - params.center_y;
            const double p = params.background_p + params.peak_p * std::exp(-(rx * rx + ry * ry) / two_sigma2);
            field.at(i, j) = {rho, params.drift_u, params.drift_v, p};
        }
    }
    return field;
}

}  // namespace eulerpar::euler
