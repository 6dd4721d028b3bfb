#include "radialfs/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "radialfs/quadrature.hpp"

namespace radialfs {

namespace {

constexpr double kEuler = 0.57721566490153286061;
constexpr double kBig = 1e250;

// (sum, log of leading term) for the ascending series of I_n(s)
std::pair<double, double> i_series(int n, double s) {
    const double q = 0.25 * s * s;
    double t = 1.0, sum = 1.0;
    for (int m = 1; m < 500; ++m) {
        t *= q / (m * double(n + m));
        sum += t;
        if (t < 1e-17 * sum) break;
    }
    return {sum, n * std::log(0.5 * s) - std::lgamma(n + 1.0)};
}

// K_0(s), K_1(s) unscaled, s <= 2
void k01_series(double s, double& k0, double& k1) {
    const double q = 0.25 * s * s;
    const double lg = std::log(0.5 * s);
    // psi(m+1) = -gamma + H_m
    double t0 = 1.0, sum0 = -kEuler, i0 = 1.0;
    double t1 = 1.0, sum1 = (-kEuler) + (1.0 - kEuler), i1 = 1.0;
    double hm = 0.0;
    for (int m = 1; m < 200; ++m) {
        hm += 1.0 / m;
        t0 *= q / (double(m) * m);
        t1 *= q / (double(m) * (m + 1));
        i0 += t0;
        i1 += t1;
        const double psi_m1 = -kEuler + hm;
        const double psi_m2 = psi_m1 + 1.0 / (m + 1);
        sum0 += t0 * psi_m1;
        sum1 += t1 * (psi_m1 + psi_m2);
        if (t0 < 1e-18 && t1 < 1e-18) break;
    }
    i1 *= 0.5 * s;
    k0 = -lg * i0 + sum0;
    k1 = 1.0 / s + lg * i1 - 0.25 * s * sum1;
}

// e^s K_0(s), e^s K_1(s) for s > 2 by Steed's continued fraction
void k01_cf2(double x, double& k0, double& k1) {
    const double a1 = 0.25;
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d, delh = d;
    double q1 = 0.0, q2 = 1.0;
    double q = a1, c = a1, a = -a1;
    double sum = 1.0 + q * delh;
    for (int i = 2; i < 100000; ++i) {
        a -= 2.0 * (i - 1);
        c = -a * c / i;
        const double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const double dels = q * delh;
        sum += dels;
        if (std::abs(dels / sum) < 1e-17) break;
    }
    h = a1 * h;
    k0 = std::sqrt(std::numbers::pi / (2.0 * x)) / sum;
    k1 = k0 * (x + 0.5 - h) / x;
}

// Hankel asymptotic expansion; caller guarantees x large against k
double j_asymptotic(int k, double x) {
    const double mu = 4.0 * k * k;
    const double z8 = 8.0 * x;
    double p = 1.0, q = 0.0;
    double term = 1.0;
    double prev = std::numeric_limits<double>::infinity();
    for (int m = 1; m < 200; ++m) {
        const double f = (mu - (2.0 * m - 1) * (2.0 * m - 1)) / (m * z8);
        term *= f;
        const double at = std::abs(term);
        if (at > prev) break;
        prev = at;
        // odd m feed Q, even m feed P, signs alternate in pairs
        const int r = m % 4;
        if (r == 1) q += term;
        else if (r == 2) p -= term;
        else if (r == 3) q -= term;
        else p += term;
        if (at < 1e-17) break;
    }
    const double chi = x - (0.5 * k + 0.25) * std::numbers::pi;
    return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

double j_series(int k, double x) {
    const double q = -0.25 * x * x;
    double t = 1.0, sum = 1.0;
    for (int m = 1; m < 200; ++m) {
        t *= q / (m * double(k + m));
        sum += t;
        if (std::abs(t) < 1e-18 * std::abs(sum)) break;
    }
    return sum * std::exp(k * std::log(0.5 * x) - std::lgamma(k + 1.0));
}

double j_miller(int k, double x) {
    const int n0 = std::max(k, static_cast<int>(x));
    int nstart = n0 + 20 + static_cast<int>(8.0 * std::cbrt(double(n0) + 1.0));
    if (nstart % 2) ++nstart;
    double jp1 = 0.0, j = 1e-300, result = 0.0, norm = 0.0;
    const double two_over_x = 2.0 / x;
    for (int n = nstart; n >= 1; --n) {
        const double jm1 = n * two_over_x * j - jp1;
        jp1 = j;
        j = jm1;
        // j now holds J_{n-1}
        if (n - 1 == k) result = j;
        if ((n - 1) % 2 == 0 && n - 1 > 0) norm += 2.0 * j;
        if (std::abs(j) > kBig) {
            j /= kBig;
            jp1 /= kBig;
            result /= kBig;
            norm /= kBig;
        }
    }
    norm += j;
    return result / norm;
}

}  // namespace

SpecFunValue SpecFunValue::make(double mantissa, double log_scale) {
    SpecFunValue v;
    if (mantissa == 0.0 || !std::isfinite(mantissa)) {
        v.mantissa = mantissa;
        v.log_scale = 0.0;
        return v;
    }
    const double e = std::round(std::log(std::abs(mantissa)));
    v.mantissa = mantissa * std::exp(-e);
    v.log_scale = log_scale + e;
    return v;
}

double SpecFunValue::value() const { return mantissa * std::exp(log_scale); }

double SpecFunValue::log_abs() const {
    if (mantissa == 0.0) return -std::numeric_limits<double>::infinity();
    return std::log(std::abs(mantissa)) + log_scale;
}

double SpecFunValue::scaled(double shift) const {
    return mantissa * std::exp(log_scale - shift);
}

SpecFunValue operator*(const SpecFunValue& a, const SpecFunValue& b) {
    return SpecFunValue::make(a.mantissa * b.mantissa, a.log_scale + b.log_scale);
}

SpecFunValue operator/(const SpecFunValue& a, const SpecFunValue& b) {
    if (b.mantissa == 0.0) throw std::domain_error("SpecFunValue: division by zero");
    return SpecFunValue::make(a.mantissa / b.mantissa, a.log_scale - b.log_scale);
}

SpecFunValue operator+(const SpecFunValue& a, const SpecFunValue& b) {
    if (a.mantissa == 0.0) return b;
    if (b.mantissa == 0.0) return a;
    const double l = std::max(a.log_scale, b.log_scale);
    return SpecFunValue::make(a.mantissa * std::exp(a.log_scale - l) + b.mantissa * std::exp(b.log_scale - l), l);
}

SpecFunValue operator-(const SpecFunValue& a) { return SpecFunValue::make(-a.mantissa, a.log_scale); }

SpecFunValue operator-(const SpecFunValue& a, const SpecFunValue& b) { return a + (-b); }

SpecFunValue scaled_pow(double x, double p) {
    if (!(x > 0.0)) throw std::domain_error("scaled_pow: requires x > 0");
    return SpecFunValue::make(1.0, p * std::log(x));
}

double bessel_j(int k, double x) {
    if (k < 0) throw std::domain_error("bessel_j: negative order");
    if (!(x >= 0.0) || !std::isfinite(x)) throw std::domain_error("bessel_j: argument must be finite and >= 0");
    if (x == 0.0) return k == 0 ? 1.0 : 0.0;
    if (x < 1.0 || (x < 8.0 && 0.25 * x * x < 0.1 * (k + 1))) return j_series(k, x);
    if (x > 25.0 + double(k) * k) return j_asymptotic(k, x);
    return j_miller(k, x);
}

double bessel_j_signed(int m, double x) {
    if (m >= 0) return bessel_j(m, x);
    const double v = bessel_j(-m, x);
    return (m % 2) ? -v : v;
}

std::vector<double> bessel_i_exp_seq(int kmax, double s) {
    if (kmax < 0) throw std::domain_error("bessel_i: negative order");
    if (!(s >= 0.0)) throw std::domain_error("bessel_i: argument must be >= 0");
    std::vector<double> out(kmax + 1, 0.0);
    if (s == 0.0) {
        out[0] = 1.0;
        return out;
    }
    if (s <= 2.0) {
        for (int n = 0; n <= kmax; ++n) {
            auto [sum, lt] = i_series(n, s);
            out[n] = sum * std::exp(lt - s);
        }
        return out;
    }
    const int nstart = kmax + 30 + static_cast<int>(10.0 * std::sqrt(s));
    double ip1 = 0.0, i = 1e-300, norm = 0.0;
    for (int n = nstart; n >= 1; --n) {
        const double im1 = ip1 + (2.0 * n / s) * i;
        ip1 = i;
        i = im1;
        if (n - 1 <= kmax) out[n - 1] = i;
        if (n - 1 >= 1) norm += 2.0 * i;
        if (i > kBig) {
            i /= kBig;
            ip1 /= kBig;
            norm /= kBig;
            for (int m = n - 1; m <= kmax; ++m) out[m] /= kBig;
        }
    }
    norm += i;
    for (double& v : out) v /= norm;
    return out;
}

std::vector<double> bessel_k_exp_seq(int kmax, double s) {
    if (kmax < 0) throw std::domain_error("bessel_k: negative order");
    if (!(s > 0.0)) throw std::domain_error("bessel_k: argument must be > 0");
    std::vector<double> out(std::max(kmax + 1, 2));
    double k0, k1;
    if (s <= 2.0) {
        k01_series(s, k0, k1);
        const double es = std::exp(s);
        k0 *= es;
        k1 *= es;
    } else {
        k01_cf2(s, k0, k1);
    }
    out[0] = k0;
    out[1] = k1;
    for (int n = 1; n < kmax; ++n) out[n + 1] = out[n - 1] + (2.0 * n / s) * out[n];
    out.resize(kmax + 1);
    return out;
}

double bessel_i_exp(int k, double s) { return bessel_i_exp_seq(k, s)[k]; }
double bessel_k_exp(int k, double s) { return bessel_k_exp_seq(k, s)[k]; }

SpecFunValue bessel_i_scaled(int k, double s) {
    if (k < 0) throw std::domain_error("bessel_i: negative order");
    if (!(s >= 0.0)) throw std::domain_error("bessel_i: argument must be >= 0");
    if (s == 0.0) return SpecFunValue::make(k == 0 ? 1.0 : 0.0, 0.0);
    if (s <= 2.0) {
        auto [sum, lt] = i_series(k, s);
        return SpecFunValue::make(sum, lt);
    }
    return SpecFunValue::make(bessel_i_exp(k, s), s);
}

SpecFunValue bessel_k_scaled(int k, double s) {
    if (k < 0) throw std::domain_error("bessel_k: negative order");
    if (!(s > 0.0)) throw std::domain_error("bessel_k: requires s > 0");
    double k0, k1;
    if (s <= 2.0) {
        k01_series(s, k0, k1);
        const double es = std::exp(s);
        k0 *= es;
        k1 *= es;
    } else {
        k01_cf2(s, k0, k1);
    }
    if (k == 0) return SpecFunValue::make(k0, -s);
    double scale = -s;
    double km = k0, kc = k1;
    for (int n = 1; n < k; ++n) {
        const double kn = km + (2.0 * n / s) * kc;
        km = kc;
        kc = kn;
        if (std::abs(kc) > kBig) {
            kc /= kBig;
            km /= kBig;
            scale += std::log(kBig);
        }
    }
    return SpecFunValue::make(kc, scale);
}

namespace {

const GaussRule& gl_cached(int n) {
    static const GaussRule g32 = gauss_legendre(32);
    static const GaussRule g64 = gauss_legendre(64);
    return n == 32 ? g32 : g64;
}

double struve_panel(int k, double s, double a, double b, int n) {
    const GaussRule& g = gl_cached(n);
    const double h = 0.5 * (b - a), c = 0.5 * (b + a);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double phi = c + h * g.x[i];
        const double cp = std::cos(phi);
        sum += g.w[i] * std::exp(-s * std::sin(phi)) * std::pow(cp * cp, k);
    }
    return h * sum;
}

double struve_adapt(int k, double s, double a, double b, double tol, int depth) {
    const double coarse = struve_panel(k, s, a, b, 32);
    const double fine = struve_panel(k, s, a, b, 64);
    if (std::abs(fine - coarse) <= tol || depth > 12) return fine;
    const double m = 0.5 * (a + b);
    return struve_adapt(k, s, a, m, tol, depth + 1) + struve_adapt(k, s, m, b, tol, depth + 1);
}

}  // namespace

double struve_m_reduced(int k, double s) {
    if (k < 0) throw std::domain_error("struve_m: negative order");
    if (!(s >= 0.0)) throw std::domain_error("struve_m: argument must be >= 0");
    if (k == 0 && s == 0.0) throw std::domain_error("struve_m: M_0 undefined at s = 0");
    // substitute t = pi/2 - phi; boundary layer of width 1/s at phi = 0
    const double half_pi = 0.5 * std::numbers::pi;
    std::vector<double> breaks{0.0};
    if (s > 0.0) {
        for (double b = 1.0 / s; b < half_pi; b *= 2.0) breaks.push_back(b);
    }
    breaks.push_back(half_pi);
    // crude magnitude for the absolute tolerance
    const double mag = std::max(struve_panel(k, s, 0.0, breaks[1], 64), 1e-300);
    double total = 0.0;
    for (size_t j = 0; j + 1 < breaks.size(); ++j)
        total += struve_adapt(k, s, breaks[j], breaks[j + 1], 1e-14 * mag, 0);
    return total;
}

namespace {

void struve_panel_seq(int kmax, double s, double a, double b, int n, std::vector<double>& out) {
    const GaussRule& g = gl_cached(n);
    const double h = 0.5 * (b - a), c = 0.5 * (b + a);
    std::fill(out.begin(), out.end(), 0.0);
    for (int i = 0; i < n; ++i) {
        const double phi = c + h * g.x[i];
        const double cp = std::cos(phi);
        double t = h * g.w[i] * std::exp(-s * std::sin(phi));
        for (int k = 0; k <= kmax; ++k) {
            out[k] += t;
            t *= cp * cp;
        }
    }
}

void struve_adapt_seq(int kmax, double s, double a, double b, const std::vector<double>& tol, int depth,
                      std::vector<double>& acc) {
    std::vector<double> coarse(kmax + 1), fine(kmax + 1);
    struve_panel_seq(kmax, s, a, b, 32, coarse);
    struve_panel_seq(kmax, s, a, b, 64, fine);
    bool ok = depth > 12;
    if (!ok) {
        ok = true;
        for (int k = 0; k <= kmax; ++k) ok = ok && std::abs(fine[k] - coarse[k]) <= tol[k];
    }
    if (ok) {
        for (int k = 0; k <= kmax; ++k) acc[k] += fine[k];
        return;
    }
    const double m = 0.5 * (a + b);
    struve_adapt_seq(kmax, s, a, m, tol, depth + 1, acc);
    struve_adapt_seq(kmax, s, m, b, tol, depth + 1, acc);
}

}  // namespace

std::vector<double> struve_m_seq(int kmax, double s) {
    if (kmax < 0) throw std::domain_error("struve_m: negative order");
    if (!(s > 0.0)) throw std::domain_error("struve_m_seq: requires s > 0");
    const double half_pi = 0.5 * std::numbers::pi;
    std::vector<double> breaks{0.0};
    for (double b = 1.0 / s; b < half_pi; b *= 2.0) breaks.push_back(b);
    breaks.push_back(half_pi);
    std::vector<double> mag(kmax + 1);
    struve_panel_seq(kmax, s, 0.0, breaks[1], 64, mag);
    for (double& m : mag) m = 1e-14 * std::max(m, 1e-300);
    std::vector<double> acc(kmax + 1, 0.0);
    for (size_t j = 0; j + 1 < breaks.size(); ++j) struve_adapt_seq(kmax, s, breaks[j], breaks[j + 1], mag, 0, acc);
    double sk = 1.0;
    for (int k = 0; k <= kmax; ++k) {
        acc[k] *= sk;
        sk *= s;
    }
    return acc;
}

double struve_m(int k, double s) {
    const double red = struve_m_reduced(k, s);
    if (k == 0) return red;
    if (s == 0.0) return 0.0;
    return red * std::pow(s, k);
}

double struve_l_series(int k, double s) {
    if (s == 0.0) return 0.0;
    const double h = 0.5 * s;
    double sum = 0.0;
    for (int m = 0; m < 400; ++m) {
        const double lt = (2.0 * m + k + 1) * std::log(h) - std::lgamma(m + 1.5) - std::lgamma(m + k + 1.5);
        const double t = std::exp(lt);
        sum += t;
        if (m > 2 && t < 1e-18 * sum) break;
    }
    return sum;
}

}  // namespace radialfs
