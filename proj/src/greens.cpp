#include "radialfs/greens.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace radialfs {

GreensKernel::GreensKernel(int k, double xi) : k_(k), s_(std::abs(xi)) {
    if (k < 0) throw std::domain_error("GreensKernel: order must be >= 0");
    if (!std::isfinite(xi)) throw std::domain_error("GreensKernel: frequency must be finite");
    if (s_ > 0.0) c_ = bessel_k_scaled(k, s_) / bessel_i_scaled(k, s_);
}

double GreensKernel::static_value(double r, double rho) const {
    const double lo = std::min(r, rho), hi = std::max(r, rho);
    if (k_ == 0) return std::log(hi);
    return -(std::pow(lo / hi, k_) - std::pow(lo * hi, k_)) / (2.0 * k_);
}

double GreensKernel::operator()(double r, double rho) const {
    if (!(r > 0.0 && rho > 0.0)) throw std::domain_error("GreensKernel: arguments must be positive");
    if (is_static()) return static_value(r, rho);
    const double lo = std::min(r, rho), hi = std::max(r, rho);
    const SpecFunValue i_lo = bessel_i_scaled(k_, s_ * lo);
    return -(i_lo * tilde_k(k_, s_ * hi)).value();
}

double GreensKernel::boundary(double r) const {
    if (is_static()) return std::pow(r, k_);
    if (r == 0.0) return k_ == 0 ? (SpecFunValue::make(1.0, 0.0) / bessel_i_scaled(0, s_)).value() : 0.0;
    return (bessel_i_scaled(k_, s_ * r) / bessel_i_scaled(k_, s_)).value();
}

SpecFunValue GreensKernel::tilde_k(int i, double x) const {
    if (is_static()) throw std::domain_error("GreensKernel: tilde-K undefined at xi = 0");
    const int a = std::abs(i);
    const SpecFunValue corr = c_ * bessel_i_scaled(a, x);
    const SpecFunValue kv = bessel_k_scaled(a, x);
    return ((k_ - a) % 2 == 0) ? kv - corr : kv + corr;
}

Eigen::MatrixXd GreensKernel::matrix(std::span<const double> r, std::span<const double> rho) const {
    Eigen::MatrixXd G(r.size(), rho.size());
    if (is_static()) {
        for (size_t a = 0; a < r.size(); ++a)
            for (size_t b = 0; b < rho.size(); ++b) G(a, b) = static_value(r[a], rho[b]);
        return G;
    }
    struct Pair {
        SpecFunValue i, k;
    };
    auto eval = [&](std::span<const double> pts) {
        std::vector<Pair> out;
        out.reserve(pts.size());
        for (double p : pts) {
            if (!(p > 0.0)) throw std::domain_error("GreensKernel: arguments must be positive");
            out.push_back({bessel_i_scaled(k_, s_ * p), bessel_k_scaled(k_, s_ * p)});
        }
        return out;
    };
    const auto pr = eval(r), pq = eval(rho);
    for (size_t a = 0; a < r.size(); ++a) {
        for (size_t b = 0; b < rho.size(); ++b) {
            const bool left = r[a] <= rho[b];
            const Pair& lo = left ? pr[a] : pq[b];
            const Pair& hi = left ? pq[b] : pr[a];
            // -I(lo) [K(hi) - c I(hi)]
            const double t1 = lo.i.mantissa * hi.k.mantissa * std::exp(lo.i.log_scale + hi.k.log_scale);
            const double t2 = c_.mantissa * lo.i.mantissa * hi.i.mantissa *
                              std::exp(c_.log_scale + lo.i.log_scale + hi.i.log_scale);
            G(a, b) = t2 - t1;
        }
    }
    return G;
}

}  // namespace radialfs
