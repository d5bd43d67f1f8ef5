#include "mlcalc/special_functions.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace mlcalc {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr long double kPiL = 3.141592653589793238462643383279502884L;

bool is_nonpositive_integer(double x) {
    return x <= 0.0 && x == std::floor(x);
}

// sin(pi*x) with reduction around the nearest integer; exact zeros at the
// integers, full accuracy near them.
double sin_pi(double x) {
    double k = std::round(x);
    double r = x - k;
    double s = std::sin(kPi * r);
    return (static_cast<long long>(k) % 2 == 0) ? s : -s;
}

long double sin_pi_ld(long double x) {
    long double k = std::round(x);
    long double r = x - k;
    long double s = std::sin(kPiL * r);
    return (static_cast<long long>(k) % 2 == 0) ? s : -s;
}

Cplx sin_pi(Cplx z) {
    if (z.imag() == 0.0) return {sin_pi(z.real()), 0.0};
    double k = std::round(z.real());
    Cplx r = z - k;
    Cplx s = std::sin(kPi * r);
    return (static_cast<long long>(k) % 2 == 0) ? s : -s;
}

// 1/Gamma in long double, poles mapped to exact 0. Arguments stay within
// tgammal's range for every series this library sums.
long double gamma_reciprocal_ld(long double w) {
    if (w <= 0.0L && w == std::floor(w)) return 0.0L;
    if (w >= 0.5L) {
        if (w < 1750.0L) return 1.0L / std::tgamma(w);
        return std::exp(-std::lgamma(w));
    }
    // reflection: 1/Gamma(w) = Gamma(1-w) sin(pi w) / pi, 1-w >= 0.5
    long double g = (1.0L - w < 1750.0L) ? std::tgamma(1.0L - w)
                                         : std::exp(std::lgamma(1.0L - w));
    return g * sin_pi_ld(w) / kPiL;
}

// Lanczos g=7, n=9; ~1e-14 relative on the right half plane.
constexpr double kLanczosG = 7.0;
constexpr double kLanczos[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

Cplx gamma_lanczos_right(Cplx z) {
    z -= 1.0;
    Cplx acc = kLanczos[0];
    for (int i = 1; i < 9; ++i) acc += kLanczos[i] / (z + static_cast<double>(i));
    Cplx t = z + kLanczosG + 0.5;
    return std::sqrt(2.0 * kPi) * std::pow(t, z + 0.5) * std::exp(-t) * acc;
}

} // namespace

double gamma_reciprocal(double x) {
    if (is_nonpositive_integer(x)) return 0.0;
    return static_cast<double>(gamma_reciprocal_ld(static_cast<long double>(x)));
}

Cplx gamma_reciprocal(Cplx z) {
    if (z.imag() == 0.0) return {gamma_reciprocal(z.real()), 0.0};
    if (z.real() >= 0.5) return 1.0 / gamma_lanczos_right(z);
    return gamma_lanczos_right(1.0 - z) * sin_pi(z) / kPi;
}

namespace detail {

bool ml_series(double beta, double gamma, std::complex<long double> z,
               int max_terms, long double tol,
               std::complex<long double>& sum, long double& err_estimate) {
    using CLD = std::complex<long double>;
    constexpr long double eps_ld = std::numeric_limits<long double>::epsilon();
    CLD term_pow = 1.0L; // z^n
    CLD acc = 0.0L;
    long double peak = 0.0L;
    int small_streak = 0;
    int n = 0;
    bool converged = false;
    for (; n < max_terms; ++n) {
        long double g = gamma_reciprocal_ld(
            static_cast<long double>(beta) * n + static_cast<long double>(gamma));
        CLD term = term_pow * g;
        acc += term;
        long double mag = std::abs(term);
        if (mag > peak) peak = mag;
        if (std::abs(term_pow) > 1e4000L) { // not recoverable in this precision
            sum = acc;
            err_estimate = std::numeric_limits<long double>::infinity();
            return false;
        }
        // |term| is unimodal in n for this series, so a short streak of
        // sub-tolerance terms means the tail is gone.
        if (mag < tol) {
            if (++small_streak >= 3) {
                converged = true;
                ++n;
                break;
            }
        } else {
            small_streak = 0;
        }
        term_pow *= z;
    }
    sum = acc;
    err_estimate = peak * eps_ld * std::sqrt(static_cast<long double>(n) + 1.0L) * 4.0L;
    return converged && err_estimate <= tol;
}

double ml_spectral_negative(double beta, double x, int max_nodes) {
    // Completely monotone representation E_beta(-x) = int_0^inf e^{-r x^{1/b}}
    // K_b(r) dr with the rational spectral density K_b; substituting u = r^b
    // and u = e^t gives
    //   E_beta(-x) = sin(pi b)/(b pi) *
    //                int exp(-(x e^t)^{1/b}) e^t / (e^{2t} + 2 e^t cos(pi b) + 1) dt.
    // Trapezoid on the t-line; the integrand is analytic in a strip of
    // half-width min(pi(1-b), pi b/2), so the error decays like e^{-2 pi d/h}.
    const double b = beta;
    const double cosb = std::cos(kPi * b);
    const double pref = std::sin(kPi * b) / (b * kPi);
    const double strip = std::min(kPi * (1.0 - b), kPi * b / 2.0) * 0.8;
    double h = 2.0 * kPi * strip / 40.0;
    const double t_lo = -46.0; // integrand ~ e^t for t -> -inf
    const double lx = std::log(x);
    // exponent passes 46 once (log x + t)/b > log 46
    double t_hi = b * std::log(46.0) - lx + 2.0;
    if (t_hi < 2.0) t_hi = 2.0;
    int nodes = static_cast<int>((t_hi - t_lo) / h) + 1;
    if (nodes > max_nodes) {
        nodes = max_nodes;
        h = (t_hi - t_lo) / (nodes - 1);
    }
    long double acc = 0.0L;
    for (int i = 0; i < nodes; ++i) {
        double t = t_lo + h * i;
        double u = std::exp(t);
        double expo = -std::exp((lx + t) / b);
        if (expo < -745.0) continue;
        double den = u * u + 2.0 * u * cosb + 1.0;
        acc += static_cast<long double>(std::exp(expo) * u / den);
    }
    return pref * static_cast<double>(acc) * h;
}

void m_wright_series(const MLParams& params, double x, double& value,
                     double& err_estimate, bool& converged) {
    constexpr long double eps_ld = std::numeric_limits<long double>::epsilon();
    const long double xl = static_cast<long double>(x);
    const long double lx = (x > 0.0) ? std::log(xl) : 0.0L;
    const long double ltol = std::log(static_cast<long double>(params.series_tol));
    long double acc = 0.0L;
    long double peak_log = -1e30L; // log of |term| peak, for the noise estimate
    long double severity = 0.0L;   // largest |log_pow| + lgamma seen; the
                                   // per-term accuracy decays with it
    int small_streak = 0;
    converged = false;
    int n = 0;
    long double log_pow = 0.0L; // log(x^n / n!)
    for (; n < params.max_terms; ++n) {
        long double w = 1.0L - params.beta - static_cast<long double>(params.beta) * n;
        long double sign = (n % 2 == 0) ? 1.0L : -1.0L;
        long double term;
        long double log_env; // log of the sin-free envelope x^n/n! Gamma(1-w)/pi
        if (w > 0.5L) {
            long double g = 1.0L / std::tgamma(w);
            term = sign * std::exp(log_pow) * g;
            log_env = log_pow + std::log(std::fabs(g) + 1e-30L);
        } else {
            // reflection in log space: |1/Gamma(w)| = Gamma(1-w) |sin(pi w)| / pi;
            // Gamma(1-w) alone overflows long before the term does
            long double lg = std::lgamma(1.0L - w);
            log_env = log_pow + lg - std::log(kPiL);
            if (log_env > 9000.0L) { // term genuinely out of range
                err_estimate = std::numeric_limits<double>::infinity();
                value = static_cast<double>(acc);
                return;
            }
            severity = std::max(severity, std::fabs(log_pow) + lg);
            long double s = sin_pi_ld(w); // exact 0 on pole terms
            term = sign * s * std::exp(log_env);
        }
        acc += term;
        if (term != 0.0L) {
            long double lmag = std::log(std::fabs(term));
            if (lmag > peak_log) peak_log = lmag;
        }
        if (log_env < ltol) {
            if (++small_streak >= 3) {
                converged = true;
                break;
            }
        } else {
            small_streak = 0;
        }
        if (x == 0.0) { // only the n = 0 term contributes
            converged = true;
            break;
        }
        log_pow += lx - std::log(static_cast<long double>(n + 1));
    }
    long double peak = (peak_log > -1e29L) ? std::exp(std::min(peak_log, 11000.0L))
                                           : 0.0L;
    // random-walk rounding noise; once the log magnitudes get extreme the
    // accuracy of the exp/lgamma route drops toward double precision
    long double unit = 4.0L * eps_ld + (severity > 5000.0L ? 2.3e-16L : 0.0L);
    long double err = peak * unit * std::sqrt(static_cast<long double>(n) + 1.0L);
    // crude super-exponential ceiling from the M-Wright large-x asymptotics:
    // anything above it, or below the noise floor, is cancellation residue
    const long double b = params.beta;
    long double c_decay = (1.0L - b) * std::pow(b, b / (1.0L - b));
    long double ceiling =
        10.0L * (1.0L + static_cast<long double>(x) * x) *
        std::exp(-c_decay * std::pow(static_cast<long double>(x), 1.0L / (1.0L - b)));
    if (std::fabs(acc) <= 2.0L * err || std::fabs(acc) > ceiling) {
        err = std::max(err, std::fabs(acc));
        acc = 0.0L;
    }
    value = static_cast<double>(acc);
    err_estimate = static_cast<double>(err);
}

} // namespace detail

namespace {

double validated_radius(double beta) { return beta >= 0.25 ? 50.0 : 5.0; }

Cplx ml_general_impl(const MLParams& params, double gamma, Cplx z, bool allow_fallback) {
    params.validate();
    if (z == Cplx(0.0, 0.0)) return Cplx(gamma_reciprocal(gamma), 0.0);
    if (std::abs(z) > validated_radius(params.beta))
        throw NonConvergent("argument outside validated range |z| <= " +
                            std::to_string(validated_radius(params.beta)));

    std::complex<long double> sum;
    long double err;
    bool ok = detail::ml_series(params.beta, gamma,
                                std::complex<long double>(z.real(), z.imag()),
                                params.max_terms,
                                static_cast<long double>(params.series_tol), sum, err);
    if (ok) {
        if (std::abs(sum) > 1.7e308L) throw NonConvergent("result overflows double");
        return Cplx(static_cast<double>(sum.real()), static_cast<double>(sum.imag()));
    }

    if (allow_fallback) {
        if (params.beta == 1.0) return std::exp(z); // exact special case
        if (z.imag() == 0.0 && z.real() < 0.0 && params.beta <= 0.9) {
            return Cplx(detail::ml_spectral_negative(params.beta, -z.real(),
                                                     params.quad_points), 0.0);
        }
    }
    throw NonConvergent("series term bound not met within max_terms");
}

} // namespace

Cplx mittag_leffler(const MLParams& params, Cplx z) {
    return ml_general_impl(params, 1.0, z, /*allow_fallback=*/true);
}

Cplx mittag_leffler_general(const MLParams& params, double gamma, Cplx z) {
    if (!(gamma > 0.0)) throw InvalidArgument("gamma must be positive");
    return ml_general_impl(params, gamma, z, /*allow_fallback=*/false);
}

Cplx ml_derivative(const MLParams& params, Cplx z) {
    return ml_general_impl(params, params.beta, z, /*allow_fallback=*/false) / params.beta;
}

MWrightResult m_wright_full(const MLParams& params, double x) {
    params.validate();
    if (!(params.beta < 1.0))
        throw BetaOutOfRange("m_wright requires beta in (0,1)");
    if (x < 0.0) throw InvalidArgument("m_wright requires x >= 0");

    MWrightResult r;
    bool converged = false;
    detail::m_wright_series(params, x, r.value, r.err_estimate, converged);
    if (!converged)
        throw NonConvergent("M-Wright series did not converge within max_terms");
    if (r.err_estimate > params.series_tol) r.range_warning = true;
    // below the cancellation floor the sign carries no information
    if (r.value < 0.0 && std::fabs(r.value) <= 2.0 * r.err_estimate) r.value = 0.0;
    return r;
}

double m_wright(const MLParams& params, double x) {
    return m_wright_full(params, x).value;
}

double laplace_identity_residual(const MLParams& params, double s) {
    params.validate();
    if (params.beta == 1.0)
        throw BetaOutOfRange("beta = 1 is the degenerate point-mass case");
    if (s < 0.0 || s > 10.0) throw InvalidArgument("s must lie in [0, 10]");

    const double tol = 1e-7; // 0.1 * contract tolerance
    double T = 3.0;
    const double T_cap = 40.0;
    bool ok = false;
    while (T <= T_cap) {
        double val, err;
        bool conv;
        detail::m_wright_series(params, T, val, err, conv);
        if (conv) {
            double bound = std::exp(-s * T) * (std::fabs(val) + err) * T;
            if (bound < tol) {
                ok = true;
                break;
            }
        }
        T *= 1.05;
    }
    if (!ok) throw QuadratureFailure("tail bound not met before T cap");

    // Composite 16-point Gauss-Legendre over [0, T].
    static const double gl_x[8] = {
        0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
        0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
        0.9445750230732326, 0.9894009349916499};
    static const double gl_w[8] = {
        0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
        0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
        0.0622535239386479, 0.0271524594117541};

    int panels = std::max(8, params.quad_points / 16);
    double width = T / panels;
    long double integral = 0.0L;
    for (int p = 0; p < panels; ++p) {
        double a = p * width, b = a + width;
        double c = 0.5 * (a + b), hw = 0.5 * (b - a);
        long double part = 0.0L;
        for (int i = 0; i < 8; ++i) {
            for (double sgn : {-1.0, 1.0}) {
                double tau = c + sgn * hw * gl_x[i];
                double val, err;
                bool conv;
                detail::m_wright_series(params, tau, val, err, conv);
                if (!conv) throw QuadratureFailure("density series diverged at node");
                part += static_cast<long double>(gl_w[i] * std::exp(-s * tau) * val);
            }
        }
        integral += part * hw;
    }
    double lhs = static_cast<double>(integral);
    double rhs = mittag_leffler(params, Cplx(-s, 0.0)).real();
    return std::fabs(lhs - rhs);
}

} // namespace mlcalc
