#pragma once

/*!
  \file riemann.hpp
  \brief Exact Riemann solver for the split one-dimensional Euler equations.

  The star-region pressure is the root of

      f(p) = f_L(p) + f_R(p) + (un_R - un_L),

  where f_K is the shock (Rankine-Hugoniot) branch for p > p_K and the
  isentropic rarefaction branch otherwise. The root is found by Newton
  iteration from the two-rarefaction estimate; if that does not settle within
  the iteration budget the solver falls back to bisection.

  All sums over the two sides are written so that swapping the states and
  negating their normal velocities reproduces the same operation sequence.
  Mirrored problems therefore give bitwise identical pressures.
*/

#include <eulerpar/errors.hpp>
#include <eulerpar/euler/state.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace eulerpar::euler {

//! A primitive state expressed in the frame of a sweep axis.
struct AxisState {
    double rho = 1.0;
    double un = 0.0;  //!< velocity along the sweep axis
    double ut = 0.0;  //!< transverse velocity, advected passively
    double p = 1.0;

    friend constexpr bool operator==(const AxisState&, const AxisState&) = default;
};

enum class WaveKind { shock, rarefaction };

struct RiemannFan {
    double p_star = 0.0;
    double u_star = 0.0;
    WaveKind left_wave = WaveKind::rarefaction;
    WaveKind right_wave = WaveKind::rarefaction;
    int iterations = 0;
    bool used_bisection = false;
};

struct RiemannSettings {
    double tolerance = 1e-10;
    int max_newton_iterations = 100;
    int max_bisection_iterations = 400;
};

inline AxisState to_axis(const PrimitiveState& s, Axis axis) noexcept
{
    return axis == Axis::X ? AxisState{s.rho, s.u, s.v, s.p} : AxisState{s.rho, s.v, s.u, s.p};
}

inline PrimitiveState from_axis(const AxisState& s, Axis axis) noexcept
{
    return axis == Axis::X ? PrimitiveState{s.rho, s.un, s.ut, s.p}
                           : PrimitiveState{s.rho, s.ut, s.un, s.p};
}

namespace detail {

struct SideConstants {
    double rho;
    double p;
    double a;
    double shock_a;  // 2 / ((gamma + 1) rho)
    double shock_b;  // (gamma - 1) / (gamma + 1) p
};

inline SideConstants side_constants(const AxisState& s, double gamma) noexcept
{
    return {s.rho, s.p, std::sqrt(gamma * s.p / s.rho), 2.0 / ((gamma + 1.0) * s.rho),
            (gamma - 1.0) / (gamma + 1.0) * s.p};
}

struct BranchValue {
    double f;
    double df;
};

// f_K and its derivative.
inline BranchValue pressure_branch(const SideConstants& k, double p, double gamma) noexcept
{
    if (p > k.p) {
        const double root = std::sqrt(k.shock_a / (p + k.shock_b));
        return {(p - k.p) * root, root * (1.0 - 0.5 * (p - k.p) / (p + k.shock_b))};
    }
    const double ratio = p / k.p;
    const double z = (gamma - 1.0) / (2.0 * gamma);
    return {2.0 * k.a / (gamma - 1.0) * (std::pow(ratio, z) - 1.0),
            std::pow(ratio, -(gamma + 1.0) / (2.0 * gamma)) / (k.rho * k.a)};
}

inline double residual_bound(double p, double tol) noexcept { return tol * std::max(1.0, p); }

}  // namespace detail

//! Solve for the star region of the Riemann problem (left | right).
inline RiemannFan solve_star(const AxisState& left, const AxisState& right, const GasModel& gas,
                             const RiemannSettings& settings = {})
{
    if (!(left.rho > 0.0 && left.p > 0.0 && right.rho > 0.0 && right.p > 0.0)) {
        std::ostringstream os;
        os << "solve_star: invalid input states (rho_L=" << left.rho << ", p_L=" << left.p
           << ", rho_R=" << right.rho << ", p_R=" << right.p << ")";
        throw NonPhysicalState(os.str());
    }

    const double g = gas.gamma();
    const double du = right.un - left.un;

    if (left.rho == right.rho && left.p == right.p && du == 0.0) {
        // Identical normal states: no waves, the star state is the input.
        return {left.p, left.un, WaveKind::rarefaction, WaveKind::rarefaction, 0, false};
    }

    const detail::SideConstants kl = detail::side_constants(left, g);
    const detail::SideConstants kr = detail::side_constants(right, g);

    if (2.0 / (g - 1.0) * (kl.a + kr.a) <= du) {
        std::ostringstream os;
        os << "solve_star: vacuum generated (du=" << du << ", a_L=" << kl.a << ", a_R=" << kr.a << ")";
        throw VacuumGenerated(os.str());
    }

    auto eval = [&](double p) {
        const detail::BranchValue fl = detail::pressure_branch(kl, p, g);
        const detail::BranchValue fr = detail::pressure_branch(kr, p, g);
        return detail::BranchValue{(fl.f + fr.f) + du, fl.df + fr.df};
    };

    const double p_floor = 1e-12 * std::min(left.p, right.p);
    const double tol = settings.tolerance;

    // Two-rarefaction estimate.
    const double z = (g - 1.0) / (2.0 * g);
    double p = std::pow((kl.a + kr.a - 0.5 * (g - 1.0) * du) /
                            (kl.a / std::pow(left.p, z) + kr.a / std::pow(right.p, z)),
                        1.0 / z);
    if (!(p > p_floor))
        p = p_floor;

    RiemannFan fan;
    bool converged = false;
    for (int it = 1; it <= settings.max_newton_iterations; ++it) {
        const detail::BranchValue fv = eval(p);
        double next = p - fv.f / fv.df;
        if (!(next > p_floor))
            next = p_floor;
        const double change = 2.0 * std::abs(next - p) / (next + p);
        p = next;
        fan.iterations = it;
        if (change <= tol && std::abs(eval(p).f) <= detail::residual_bound(p, tol)) {
            converged = true;
            break;
        }
    }

    if (!converged) {
        double lo = p_floor;
        double hi = 10.0 * std::max(left.p, right.p);
        for (int grow = 0; eval(hi).f < 0.0; ++grow) {
            if (grow > 60)
                throw NoConvergence("solve_star: could not bracket the star pressure");
            hi *= 10.0;
        }
        fan.used_bisection = true;
        for (int it = 0; it < settings.max_bisection_iterations; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double fm = eval(mid).f;
            p = mid;
            if (std::abs(fm) <= detail::residual_bound(mid, tol)) {
                converged = true;
                break;
            }
            if (mid <= lo || mid >= hi)
                break;
            (fm < 0.0 ? lo : hi) = mid;
        }
        if (!converged) {
            std::ostringstream os;
            os.precision(17);
            os << "solve_star: no convergence, last p=" << p << " residual=" << eval(p).f;
            throw NoConvergence(os.str());
        }
    }

    const double fl = detail::pressure_branch(kl, p, g).f;
    const double fr = detail::pressure_branch(kr, p, g).f;
    fan.p_star = p;
    fan.u_star = 0.5 * (left.un + right.un) + 0.5 * (fr - fl);
    fan.left_wave = p > left.p ? WaveKind::shock : WaveKind::rarefaction;
    fan.right_wave = p > right.p ? WaveKind::shock : WaveKind::rarefaction;
    return fan;
}

/*!
  Sample the self-similar solution on the interface (x/t = 0).

  The transverse velocity follows the contact: it is taken from the left
  state when u_star >= 0 and from the right state otherwise.
*/
inline AxisState sample_interface(const RiemannFan& fan, const AxisState& left, const AxisState& right,
                                  const GasModel& gas)
{
    const double g = gas.gamma();
    const double ps = fan.p_star;
    const double us = fan.u_star;

    if (us >= 0.0) {
        const double a = std::sqrt(g * left.p / left.rho);
        const double ratio = ps / left.p;
        if (ps > left.p) {
            const double speed =
                left.un - a * std::sqrt((g + 1.0) / (2.0 * g) * ratio + (g - 1.0) / (2.0 * g));
            if (speed >= 0.0)
                return left;
            const double gm = (g - 1.0) / (g + 1.0);
            return {left.rho * ((ratio + gm) / (gm * ratio + 1.0)), us, left.ut, ps};
        }
        if (left.un - a >= 0.0)
            return left;
        const double a_star = a * std::pow(ratio, (g - 1.0) / (2.0 * g));
        if (us - a_star <= 0.0)
            return {left.rho * std::pow(ratio, 1.0 / g), us, left.ut, ps};
        // Inside the left rarefaction fan.
        const double c = 2.0 / (g + 1.0) * (a + 0.5 * (g - 1.0) * left.un);
        return {left.rho * std::pow(c / a, 2.0 / (g - 1.0)), c, left.ut,
                left.p * std::pow(c / a, 2.0 * g / (g - 1.0))};
    }

    const double a = std::sqrt(g * right.p / right.rho);
    const double ratio = ps / right.p;
    if (ps > right.p) {
        const double speed =
            right.un + a * std::sqrt((g + 1.0) / (2.0 * g) * ratio + (g - 1.0) / (2.0 * g));
        if (speed <= 0.0)
            return right;
        const double gm = (g - 1.0) / (g + 1.0);
        return {right.rho * ((ratio + gm) / (gm * ratio + 1.0)), us, right.ut, ps};
    }
    if (right.un + a <= 0.0)
        return right;
    const double a_star = a * std::pow(ratio, (g - 1.0) / (2.0 * g));
    if (us + a_star >= 0.0)
        return {right.rho * std::pow(ratio, 1.0 / g), us, right.ut, ps};
    // Inside the right rarefaction fan.
    const double c = 2.0 / (g + 1.0) * (a - 0.5 * (g - 1.0) * right.un);
    return {right.rho * std::pow(c / a, 2.0 / (g - 1.0)), -c, right.ut,
            right.p * std::pow(c / a, 2.0 * g / (g - 1.0))};
}

//! Godunov flux through the interface between `left` and `right`, in the
//! global component order for the given sweep axis.
inline Flux godunov_interface_flux(const AxisState& left, const AxisState& right, Axis axis,
                                   const GasModel& gas)
{
    const RiemannFan fan = solve_star(left, right, gas);
    const AxisState w = sample_interface(fan, left, right, gas);
    return physical_flux(prim_to_cons(from_axis(w, axis), gas), axis, gas);
}

//! Interface flux between two neighbouring cells along `axis`.
inline Flux interface_flux(const PrimitiveState& lower, const PrimitiveState& upper, Axis axis,
                           const GasModel& gas)
{
    return godunov_interface_flux(to_axis(lower, axis), to_axis(upper, axis), axis, gas);
}

}  // namespace eulerpar::euler
