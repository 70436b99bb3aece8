#include <fracflow/schroeder.hpp>

namespace fracflow
{

ParabolicPsiExpansion parabolic_psi(const TruncatedSeries<Rational> &v)
{
    std::size_t m = 0;
    for (std::size_t k = 1; k <= v.order(); ++k) {
        if (!is_zero(v[k])) {
            m = k;
            break;
        }
    }
    if (m == 0) {
        throw usage_error("parabolic_psi: velocity series is identically zero");
    }
    if (m < 2) {
        throw usage_error("parabolic_psi: velocity must start at x^m with m >= 2");
    }
    const std::size_t n = v.order();
    // v = a_m x^m W(x), W(0) = 1, W known through x^{n-m}.
    const Rational am = v[m];
    std::vector<Rational> w(n - m + 1);
    for (std::size_t k = m; k <= n; ++k) {
        w[k - m] = v[k] / am;
    }
    const auto inv = detail::dense_reciprocal(w, n - m);

    // 1/v = sum_j L_j x^j, j = -m .. n - 2m, with L_j = inv[j + m] / a_m.
    ParabolicPsiExpansion out;
    out.tscale_index = m;
    const long lo = -static_cast<long>(m);
    const long hi = static_cast<long>(n) - 2 * static_cast<long>(m);
    for (long j = lo; j <= hi; ++j) {
        const Rational l = inv[static_cast<std::size_t>(j + static_cast<long>(m))] / am;
        if (j == -1) {
            out.rho = l;
        } else {
            Rational pk = l / Rational(j + 1);
            out.p.emplace(static_cast<int>(j + 1), pk);
        }
    }
    return out;
}

} // namespace fracflow
