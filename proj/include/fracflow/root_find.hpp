#ifndef FRACFLOW_ROOT_FIND_HPP
#define FRACFLOW_ROOT_FIND_HPP

#include <cmath>
#include <functional>
#include <optional>
#include <utility>

#include <fracflow/errors.hpp>
#include <fracflow/numeric.hpp>

namespace fracflow
{

struct RootOptions
{
    double rel_tol = 1e-14;
    int max_iterations = 60;
    int max_bracket_expansions = 60;
};

// Solve fn(y) = target starting from `guess`: Newton steps (derivative
// given, or central difference) kept inside a sign-change bracket, with a
// bisection step whenever Newton leaves the bracket or fails to shrink the
// residual. Throws domain_error when no bracket is found around the guess.
template <typename Real>
Real safeguarded_solve(const std::function<Real(const Real &)> &fn, const Real &target, const Real &guess,
                       const std::function<Real(const Real &)> &deriv = {}, const RootOptions &opt = {})
{
    using std::abs;
    using std::max;
    auto resid = [&](const Real &y) { return fn(y) - target; };

    Real r0 = resid(guess);
    if (r0 == 0) {
        return guess;
    }
    // Expand a bracket [lo, hi] geometrically around the guess.
    Real step = max(abs(guess) * Real(1e-6), Real(1e-12));
    Real lo = guess, hi = guess, rlo = r0, rhi = r0;
    bool found = false;
    for (int i = 0; i < opt.max_bracket_expansions && !found; ++i) {
        const Real a = guess - step, b = guess + step;
        Real ra, rb;
        bool ok_a = true, ok_b = true;
        try {
            ra = resid(a);
        } catch (const domain_error &) {
            ok_a = false;
        }
        try {
            rb = resid(b);
        } catch (const domain_error &) {
            ok_b = false;
        }
        if (ok_a && (ra == 0 || (ra < 0) != (r0 < 0))) {
            lo = a, rlo = ra, hi = guess, rhi = r0, found = true;
        } else if (ok_b && (rb == 0 || (rb < 0) != (r0 < 0))) {
            lo = guess, rlo = r0, hi = b, rhi = rb, found = true;
        }
        step *= 2;
    }
    if (!found) {
        throw domain_error("root finding: no sign change near initial guess", to_double(guess));
    }
    if (rlo == 0) {
        return lo;
    }
    if (rhi == 0) {
        return hi;
    }

    Real y = abs(rlo) < abs(rhi) ? lo : hi;
    Real ry = abs(rlo) < abs(rhi) ? rlo : rhi;
    for (int it = 0; it < opt.max_iterations; ++it) {
        Real d;
        if (deriv) {
            d = deriv(y);
        } else {
            const Real h = Real(1e-7) * max(Real(1), abs(y));
            d = (fn(y + h) - fn(y - h)) / (2 * h);
        }
        Real next = (d != 0) ? Real(y - ry / d) : Real((lo + hi) / 2);
        if (!(next > lo && next < hi)) {
            next = (lo + hi) / 2;
        }
        Real rn = resid(next);
        if (abs(rn) > abs(ry) / 2) {
            // Newton stalled: bisect and keep the better point.
            const Real mid = (lo + hi) / 2;
            const Real rm = resid(mid);
            if (abs(rm) < abs(rn)) {
                next = mid, rn = rm;
            }
        }
        if ((rn < 0) == (rlo < 0)) {
            lo = next, rlo = rn;
        } else {
            hi = next, rhi = rn;
        }
        const Real delta = abs(next - y);
        y = next, ry = rn;
        if (rn == 0 || delta <= Real(opt.rel_tol) * max(abs(y), Real(1e-300))
            || hi - lo <= Real(opt.rel_tol) * max(abs(y), Real(1e-300))) {
            return y;
        }
    }
    return y;
}

} // namespace fracflow

#endif
