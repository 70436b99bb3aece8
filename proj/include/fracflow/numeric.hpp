#ifndef FRACFLOW_NUMERIC_HPP
#define FRACFLOW_NUMERIC_HPP

#include <cmath>
#include <string>
#include <string_view>
#include <type_traits>

#include <gmpxx.h>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace fracflow
{

// Exact rational scalar; gmpxx keeps every result canonical (lowest terms,
// positive denominator) as long as values are built through make_rational.
using Rational = mpq_class;

// 50 significant digits. Used where a relative error below double epsilon
// must be resolved (deep-conjugation errors at small x).
using Extended = boost::multiprecision::cpp_bin_float_50;

template <typename T>
inline constexpr bool is_real_v = std::is_same_v<T, double> || std::is_same_v<T, Extended>;

Rational make_rational(long num, long den = 1);

// Accepts "p/q", integer and decimal notation with optional exponent.
// Decimal strings are converted exactly ("0.1" -> 1/10).
Rational parse_rational(std::string_view text);

std::string to_string(const Rational &q);

// Shortest decimal string that round-trips to the same double.
std::string format_double(double v);

double rational_to_double(const Rational &q);
Extended rational_to_extended(const Rational &q);

template <typename Real>
Real rational_to(const Rational &q)
{
    if constexpr (std::is_same_v<Real, double>) {
        return rational_to_double(q);
    } else if constexpr (std::is_same_v<Real, Extended>) {
        return rational_to_extended(q);
    } else {
        return Real(q);
    }
}

// Conversion from any scalar ring (Rational, double, Extended) to Real.
template <typename Real, typename S>
Real to_real_of(const S &s)
{
    if constexpr (std::is_same_v<S, Rational>) {
        return rational_to<Real>(s);
    } else {
        return static_cast<Real>(s);
    }
}

// log |q| for q != 0, safe for numerators/denominators beyond double range.
double log_abs(const Rational &q);

inline bool is_zero(const Rational &q)
{
    return sgn(q) == 0;
}

template <typename Real>
    requires is_real_v<Real>
bool is_zero(const Real &v)
{
    return v == 0;
}

template <typename Real>
Real to_real_scalar(double v)
{
    return Real(v);
}

inline double to_double(double v)
{
    return v;
}
inline double to_double(const Extended &v)
{
    return static_cast<double>(v);
}
inline double to_double(const Rational &q)
{
    return rational_to_double(q);
}

} // namespace fracflow

#endif
