#include <fracflow/numeric.hpp>

#include <array>
#include <charconv>
#include <cctype>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <fracflow/errors.hpp>

namespace fracflow
{

Rational make_rational(long num, long den)
{
    if (den == 0) {
        throw usage_error("rational with zero denominator");
    }
    Rational q(num, den);
    q.canonicalize();
    return q;
}

namespace
{

mpz_class pow10(unsigned long e)
{
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
    return r;
}

Rational parse_decimal(std::string_view s, std::string_view whole)
{
    std::size_t i = 0;
    bool neg = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
        neg = s[i] == '-';
        ++i;
    }
    std::string digits;
    long frac_digits = 0;
    bool seen_dot = false;
    bool any_digit = false;
    for (; i < s.size(); ++i) {
        const char c = s[i];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            digits.push_back(c);
            any_digit = true;
            if (seen_dot) {
                ++frac_digits;
            }
        } else if (c == '.' && !seen_dot) {
            seen_dot = true;
        } else {
            break;
        }
    }
    if (!any_digit) {
        throw usage_error("not a number: '" + std::string(whole) + "'");
    }
    long exponent = 0;
    if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        ++i;
        const auto *first = s.data() + i;
        const auto *last = s.data() + s.size();
        if (first != last && *first == '+') {
            ++first;
        }
        const auto res = std::from_chars(first, last, exponent);
        if (res.ec != std::errc{} || res.ptr != last) {
            throw usage_error("bad exponent in '" + std::string(whole) + "'");
        }
        i = s.size();
    }
    if (i != s.size()) {
        throw usage_error("not a number: '" + std::string(whole) + "'");
    }
    mpz_class num(digits, 10);
    if (neg) {
        num = -num;
    }
    const long e = exponent - frac_digits;
    Rational q;
    if (e >= 0) {
        q = Rational(num * pow10(static_cast<unsigned long>(e)));
    } else {
        q = Rational(num, pow10(static_cast<unsigned long>(-e)));
        q.canonicalize();
    }
    return q;
}

} // namespace

Rational parse_rational(std::string_view text)
{
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        return parse_decimal(text, text);
    }
    const Rational num = parse_decimal(text.substr(0, slash), text);
    const Rational den = parse_decimal(text.substr(slash + 1), text);
    if (is_zero(den)) {
        throw usage_error("zero denominator in '" + std::string(text) + "'");
    }
    return num / den;
}

std::string to_string(const Rational &q)
{
    return q.get_str();
}

std::string format_double(double v)
{
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

double rational_to_double(const Rational &q)
{
    // Both parts exactly representable: one correctly rounded division.
    const auto &num = q.get_num();
    const auto &den = q.get_den();
    if (mpz_sizeinbase(num.get_mpz_t(), 2) <= 53 && mpz_sizeinbase(den.get_mpz_t(), 2) <= 53) {
        return num.get_d() / den.get_d();
    }
    return static_cast<double>(rational_to_extended(q));
}

Extended rational_to_extended(const Rational &q)
{
    const Extended num(q.get_num().get_str());
    const Extended den(q.get_den().get_str());
    return num / den;
}

double log_abs(const Rational &q)
{
    if (is_zero(q)) {
        return -std::numeric_limits<double>::infinity();
    }
    auto log_mpz = [](const mpz_class &z) {
        long exp2 = 0;
        const double mant = mpz_get_d_2exp(&exp2, z.get_mpz_t());
        return std::log(std::fabs(mant)) + static_cast<double>(exp2) * std::log(2.0);
    };
    return log_mpz(q.get_num()) - log_mpz(q.get_den());
}

} // namespace fracflow
