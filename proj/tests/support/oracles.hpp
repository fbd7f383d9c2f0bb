#pragma once

// Independent numerical oracles used only by tests: quadrature for the disc
// integral operator, finite-difference derivative probes, and a seeded RNG
// wrapper. Nothing here may call into the closed-form code paths it guards.

#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "acdisc/algebra.hpp"

namespace acdisc::testing {

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on P_n.
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
    std::vector<double> x(n), w(n);
    for (int i = 0; i < n; ++i) {
        double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (t * p1 - p0) / (t * t - 1.0);
            double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        x[i] = t;
        w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
    return {x, w};
}

// Quadrature of (1/2 pi i) * Int_Delta phi(eta)/(eta - zeta) deta ^ detabar
// = -(1/pi) * Int_Delta phi(eta)/(eta - zeta) dA(eta), in polar coordinates
// centered at zeta so the integrand is smooth. |zeta| < 1 required.
inline cx cg_quadrature(const DiscMap& phi, cx zeta, int n_r = 64, int n_theta = 512) {
    if (phi.value_dim() != 1) throw std::invalid_argument("cg_quadrature: scalar only");
    if (std::abs(zeta) >= 1.0) throw std::invalid_argument("cg_quadrature: interior point only");
    auto [gx, gw] = gauss_legendre(n_r);
    cx total(0.0);
    for (int j = 0; j < n_theta; ++j) {
        double theta = 2.0 * M_PI * j / n_theta;
        cx dir = std::polar(1.0, theta);
        double b = (std::conj(zeta) * dir).real();
        double rmax = -b + std::sqrt(b * b + 1.0 - std::norm(zeta));
        cx inner(0.0);
        for (int i = 0; i < n_r; ++i) {
            double r = 0.5 * rmax * (gx[i] + 1.0);
            inner += gw[i] * phi.eval_scalar(zeta + r * dir);
        }
        inner *= 0.5 * rmax;
        total += std::conj(dir) * inner * (2.0 * M_PI / n_theta);
    }
    return total * (-1.0 / M_PI);
}

// Wirtinger pair (df/dz_j, df/dzbar_j) of a black-box map at a point, by
// central differences along the real and imaginary axes of slot j.
template <typename F>
std::pair<std::vector<cx>, std::vector<cx>> fd_wirtinger(const F& f, std::vector<cx> z, int j,
                                                         double h = 1e-5) {
    auto shift = [&](cx dz) {
        auto zz = z;
        zz[j] += dz;
        return f(zz);
    };
    auto fp = shift(cx(h, 0.0)), fm = shift(cx(-h, 0.0));
    auto gp = shift(cx(0.0, h)), gm = shift(cx(0.0, -h));
    size_t m = fp.size();
    std::vector<cx> dz(m), dzb(m);
    for (size_t k = 0; k < m; ++k) {
        cx d_re = (fp[k] - fm[k]) / (2.0 * h);
        cx d_im = (gp[k] - gm[k]) / (cx(0.0, 2.0 * h));
        dz[k] = 0.5 * (d_re + d_im);
        dzb[k] = 0.5 * (d_re - d_im);
    }
    return {dz, dzb};
}

// Central difference of a scalar function of one real parameter.
template <typename F>
double fd_central(const F& f, double x, double h = 1e-5) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

struct Rng {
    std::mt19937_64 gen;
    explicit Rng(uint64_t seed) : gen(seed) {}
    double uniform(double lo = -1.0, double hi = 1.0) {
        return std::uniform_real_distribution<double>(lo, hi)(gen);
    }
    cx complex_in_disc(double radius = 1.0) {
        while (true) {
            cx z(uniform(), uniform());
            if (std::abs(z) < 1.0) return radius * z;
        }
    }
    cx complex_box(double scale = 1.0) { return cx(uniform(), uniform()) * scale; }
    std::vector<cx> complex_vector(int n, double scale = 1.0) {
        std::vector<cx> v(n);
        for (auto& c : v) c = complex_box(scale);
        return v;
    }
};

inline DiscMap random_disc_map(Rng& rng, int value_dim, int cap, double scale = 1.0) {
    DiscMap d(value_dim, cap);
    for (int p = 0; p <= cap; ++p)
        for (int q = 0; q <= cap; ++q)
            for (int k = 0; k < value_dim; ++k) d.set_coeff(p, q, k, rng.complex_box(scale));
    return d;
}

inline PolyMap random_poly_map(Rng& rng, int num_vars, int value_dim, int max_degree,
                               double scale = 1.0) {
    PolyMap f(num_vars, value_dim);
    std::function<void(BiIndex&, int, int)> fill = [&](BiIndex& ix, int slot, int budget) {
        if (slot == 2 * num_vars) {
            std::vector<cx> v(value_dim);
            for (auto& c : v) c = rng.complex_box(scale);
            f.add_term(ix, v);
            return;
        }
        int& e = slot < num_vars ? ix.p[slot] : ix.q[slot - num_vars];
        for (e = 0; e <= budget; ++e) fill(ix, slot + 1, budget - e);
        e = 0;
    };
    BiIndex ix{std::vector<int>(num_vars, 0), std::vector<int>(num_vars, 0)};
    fill(ix, 0, max_degree);
    return f;
}

}  // namespace acdisc::testing
