#ifndef FRACFLOW_TPOLYNOMIAL_HPP
#define FRACFLOW_TPOLYNOMIAL_HPP

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include <fracflow/numeric.hpp>

namespace fracflow
{

// Polynomial in the flow parameter t with exact rational coefficients.
// Index i of the coefficient vector holds the coefficient of t^i; trailing
// zeros are always stripped, so the zero polynomial is the empty vector.
class TPolynomial
{
public:
    TPolynomial() = default;
    TPolynomial(std::initializer_list<Rational> coeffs);
    explicit TPolynomial(std::vector<Rational> coeffs);
    // Constant polynomial.
    explicit TPolynomial(const Rational &c);
    explicit TPolynomial(long c) : TPolynomial(Rational(c)) {}

    static TPolynomial monomial(const Rational &c, std::size_t power);

    const std::vector<Rational> &coeffs() const noexcept
    {
        return m_coeffs;
    }
    bool is_zero() const noexcept
    {
        return m_coeffs.empty();
    }
    // -1 for the zero polynomial.
    long degree() const noexcept
    {
        return static_cast<long>(m_coeffs.size()) - 1;
    }
    // Coefficient of t^i (zero beyond the degree).
    Rational coeff(std::size_t i) const;

    Rational eval(const Rational &t) const;

    template <typename Real>
    Real eval_real(const Real &t) const
    {
        Real acc(0);
        for (auto it = m_coeffs.rbegin(); it != m_coeffs.rend(); ++it) {
            acc = acc * t + rational_to<Real>(*it);
        }
        return acc;
    }

    TPolynomial derivative() const;

    TPolynomial &operator+=(const TPolynomial &other);
    TPolynomial &operator-=(const TPolynomial &other);
    TPolynomial &operator*=(const TPolynomial &other);
    TPolynomial &operator*=(const Rational &c);
    TPolynomial &operator/=(const Rational &c);

    friend TPolynomial operator+(TPolynomial a, const TPolynomial &b)
    {
        return a += b;
    }
    friend TPolynomial operator-(TPolynomial a, const TPolynomial &b)
    {
        return a -= b;
    }
    friend TPolynomial operator-(TPolynomial a)
    {
        for (auto &c : a.m_coeffs) {
            c = -c;
        }
        return a;
    }
    friend TPolynomial operator*(const TPolynomial &a, const TPolynomial &b);
    friend TPolynomial operator*(TPolynomial a, const Rational &c)
    {
        return a *= c;
    }
    friend TPolynomial operator*(const Rational &c, TPolynomial a)
    {
        return a *= c;
    }
    friend TPolynomial operator/(TPolynomial a, const Rational &c)
    {
        return a /= c;
    }
    friend bool operator==(const TPolynomial &a, const TPolynomial &b)
    {
        return a.m_coeffs == b.m_coeffs;
    }

    // Canonical text, highest power first: "t^3", "1/24*t^2 - 1/30*t", "0".
    std::string to_string(const std::string &var = "t") const;

private:
    void strip();

    std::vector<Rational> m_coeffs;
};

inline bool is_zero(const TPolynomial &p)
{
    return p.is_zero();
}

} // namespace fracflow

#endif
