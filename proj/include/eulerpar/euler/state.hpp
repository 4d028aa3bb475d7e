#pragma once

/*!
  \file state.hpp
  \brief Ideal-gas state vectors, conversions and physical fluxes of the
  two-dimensional Euler equations.
*/

#include <eulerpar/errors.hpp>

#include <array>
#include <cmath>
#include <sstream>
#include <string>

namespace eulerpar::euler {

//! Ideal gas closure p = (gamma - 1) * rho * e_internal.
class GasModel {
  public:
    constexpr GasModel() = default;

    explicit GasModel(double gamma) : gamma_(gamma)
    {
        if (!(gamma > 1.0))
            throw InvalidArgument("GasModel: gamma must exceed 1");
    }

    constexpr double gamma() const noexcept { return gamma_; }

    friend constexpr bool operator==(const GasModel&, const GasModel&) = default;

  private:
    double gamma_ = 1.4;
};

enum class Axis { X, Y };

//! Physical variables of one cell.
struct PrimitiveState {
    double rho = 1.0;
    double u = 0.0;
    double v = 0.0;
    double p = 1.0;

    friend constexpr bool operator==(const PrimitiveState&, const PrimitiveState&) = default;

    bool valid() const noexcept { return rho > 0.0 && p > 0.0 && std::isfinite(rho) && std::isfinite(p); }
};

//! Conserved variables (rho, rho u, rho v, E) of one cell.
struct ConservedState {
    double rho = 0.0;
    double mx = 0.0;
    double my = 0.0;
    double e = 0.0;

    friend constexpr bool operator==(const ConservedState&, const ConservedState&) = default;
};

//! Flux vector, ordered like ConservedState (mass, x-momentum, y-momentum, energy).
using Flux = std::array<double, 4>;

inline std::string to_string(const PrimitiveState& s)
{
    std::ostringstream os;
    os.precision(17);
    os << "(rho=" << s.rho << ", u=" << s.u << ", v=" << s.v << ", p=" << s.p << ")";
    return os.str();
}

inline ConservedState prim_to_cons(const PrimitiveState& s, const GasModel& gas) noexcept
{
    const double kinetic = 0.5 * s.rho * (s.u * s.u + s.v * s.v);
    return {s.rho, s.rho * s.u, s.rho * s.v, kinetic + s.p / (gas.gamma() - 1.0)};
}

//! Inverse of prim_to_cons. Throws NonPhysicalState when density or the
//! recovered pressure is not strictly positive.
inline PrimitiveState cons_to_prim(const ConservedState& c, const GasModel& gas)
{
    if (!(c.rho > 0.0) || !std::isfinite(c.rho)) {
        std::ostringstream os;
        os << "non-physical density " << c.rho;
        throw NonPhysicalState(os.str());
    }
    const double u = c.mx / c.rho;
    const double v = c.my / c.rho;
    const double p = (gas.gamma() - 1.0) * (c.e - 0.5 * (c.mx * u + c.my * v));
    if (!(p > 0.0) || !std::isfinite(p)) {
        std::ostringstream os;
        os << "non-physical pressure " << p << " (rho=" << c.rho << ", E=" << c.e << ")";
        throw NonPhysicalState(os.str());
    }
    return {c.rho, u, v, p};
}

inline double sound_speed(const PrimitiveState& s, const GasModel& gas) noexcept
{
    return std::sqrt(gas.gamma() * s.p / s.rho);
}

//! F(U) for Axis::X and G(U) for Axis::Y.
inline Flux physical_flux(const ConservedState& c, Axis axis, const GasModel& gas)
{
    const PrimitiveState w = cons_to_prim(c, gas);
    if (axis == Axis::X) {
        return {c.mx, c.mx * w.u + w.p, c.mx * w.v, w.u * (c.e + w.p)};
    }
    return {c.my, c.my * w.u, c.my * w.v + w.p, w.v * (c.e + w.p)};
}

}  // namespace eulerpar::euler
