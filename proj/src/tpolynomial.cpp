#include <fracflow/tpolynomial.hpp>

#include <algorithm>
#include <utility>

#include <fracflow/errors.hpp>

namespace fracflow
{

TPolynomial::TPolynomial(std::initializer_list<Rational> coeffs) : m_coeffs(coeffs)
{
    strip();
}

TPolynomial::TPolynomial(std::vector<Rational> coeffs) : m_coeffs(std::move(coeffs))
{
    strip();
}

TPolynomial::TPolynomial(const Rational &c)
{
    if (!fracflow::is_zero(c)) {
        m_coeffs.push_back(c);
    }
}

TPolynomial TPolynomial::monomial(const Rational &c, std::size_t power)
{
    if (fracflow::is_zero(c)) {
        return {};
    }
    std::vector<Rational> v(power + 1);
    v[power] = c;
    return TPolynomial(std::move(v));
}

void TPolynomial::strip()
{
    while (!m_coeffs.empty() && fracflow::is_zero(m_coeffs.back())) {
        m_coeffs.pop_back();
    }
}

Rational TPolynomial::coeff(std::size_t i) const
{
    return i < m_coeffs.size() ? m_coeffs[i] : Rational(0);
}

Rational TPolynomial::eval(const Rational &t) const
{
    Rational acc(0);
    for (auto it = m_coeffs.rbegin(); it != m_coeffs.rend(); ++it) {
        acc = acc * t + *it;
    }
    return acc;
}

TPolynomial TPolynomial::derivative() const
{
    if (m_coeffs.size() <= 1) {
        return {};
    }
    std::vector<Rational> d(m_coeffs.size() - 1);
    for (std::size_t i = 1; i < m_coeffs.size(); ++i) {
        d[i - 1] = m_coeffs[i] * static_cast<unsigned long>(i);
    }
    return TPolynomial(std::move(d));
}

TPolynomial &TPolynomial::operator+=(const TPolynomial &other)
{
    if (other.m_coeffs.size() > m_coeffs.size()) {
        m_coeffs.resize(other.m_coeffs.size());
    }
    for (std::size_t i = 0; i < other.m_coeffs.size(); ++i) {
        m_coeffs[i] += other.m_coeffs[i];
    }
    strip();
    return *this;
}

TPolynomial &TPolynomial::operator-=(const TPolynomial &other)
{
    if (other.m_coeffs.size() > m_coeffs.size()) {
        m_coeffs.resize(other.m_coeffs.size());
    }
    for (std::size_t i = 0; i < other.m_coeffs.size(); ++i) {
        m_coeffs[i] -= other.m_coeffs[i];
    }
    strip();
    return *this;
}

TPolynomial operator*(const TPolynomial &a, const TPolynomial &b)
{
    if (a.is_zero() || b.is_zero()) {
        return {};
    }
    std::vector<Rational> out(a.m_coeffs.size() + b.m_coeffs.size() - 1);
    Rational tmp;
    for (std::size_t i = 0; i < a.m_coeffs.size(); ++i) {
        if (fracflow::is_zero(a.m_coeffs[i])) {
            continue;
        }
        for (std::size_t j = 0; j < b.m_coeffs.size(); ++j) {
            mpq_mul(tmp.get_mpq_t(), a.m_coeffs[i].get_mpq_t(), b.m_coeffs[j].get_mpq_t());
            out[i + j] += tmp;
        }
    }
    return TPolynomial(std::move(out));
}

TPolynomial &TPolynomial::operator*=(const TPolynomial &other)
{
    *this = *this * other;
    return *this;
}

TPolynomial &TPolynomial::operator*=(const Rational &c)
{
    if (fracflow::is_zero(c)) {
        m_coeffs.clear();
        return *this;
    }
    for (auto &x : m_coeffs) {
        x *= c;
    }
    return *this;
}

TPolynomial &TPolynomial::operator/=(const Rational &c)
{
    if (fracflow::is_zero(c)) {
        throw usage_error("TPolynomial division by zero");
    }
    for (auto &x : m_coeffs) {
        x /= c;
    }
    return *this;
}

std::string TPolynomial::to_string(const std::string &var) const
{
    if (m_coeffs.empty()) {
        return "0";
    }
    std::string out;
    for (std::size_t k = m_coeffs.size(); k-- > 0;) {
        const Rational &c = m_coeffs[k];
        if (fracflow::is_zero(c)) {
            continue;
        }
        const bool neg = sgn(c) < 0;
        const Rational mag = abs(c);
        if (out.empty()) {
            if (neg) {
                out += "-";
            }
        } else {
            out += neg ? " - " : " + ";
        }
        std::string mono;
        if (k >= 1) {
            mono = var;
            if (k >= 2) {
                mono += "^" + std::to_string(k);
            }
        }
        if (k == 0) {
            out += fracflow::to_string(mag);
        } else if (mag == 1) {
            out += mono;
        } else {
            out += fracflow::to_string(mag) + "*" + mono;
        }
    }
    return out;
}

} // namespace fracflow
