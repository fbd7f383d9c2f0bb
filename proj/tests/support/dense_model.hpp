#pragma once

// Dense real-coordinate view of the model boundary operator, shared by the
// recursion tests and the acceptance suite. The coefficient basis enumerates
// the holomorphic pieces feeding the interior assembly; stacking the three
// boundary tables into one real vector turns the linearized problem into an
// ordinary least-squares system that can be solved without the recursion.

#include <Eigen/Dense>
#include <complex>

#include "acdisc/rhmodel.hpp"
#include "support/oracles.hpp"

namespace acdisc::testing {

inline BoundaryData random_data(Rng& rng, int n, int hw) {
    BoundaryData d(n, hw);
    d.phi0.set(0, 0, cx(rng.uniform(), 0.0));
    d.phin.set(0, 0, cx(rng.uniform(), 0.0));
    for (int m = 1; m <= hw; ++m) {
        cx c0 = rng.complex_box();
        d.phi0.set(m, 0, c0);
        d.phi0.set(-m, 0, std::conj(c0));
        cx cn = rng.complex_box();
        d.phin.set(m, 0, cn);
        d.phin.set(-m, 0, std::conj(cn));
    }
    for (int k = 0; k < n - 1; ++k)
        for (int m = -hw; m <= hw; ++m) d.phia.set(m, k, rng.complex_box());
    return d;
}

inline FreeParams random_free(Rng& rng, int n) {
    FreeParams fp = FreeParams::zero(n);
    for (auto& v : fp.h0) v = rng.complex_box();
    for (auto& v : fp.h1) v = rng.complex_box();
    fp.im_ah1 = rng.uniform();
    fp.re_kn1 = rng.uniform();
    return fp;
}

// real coordinates for the holomorphic pieces feeding the interior assembly
struct CoeffBasis {
    int n, N;
    int ch, chn, ckn, ckt;

    CoeffBasis(int dim, int cap)
        : n(dim), N(cap), ch((dim - 1) * cap), chn(cap + 1), ckn(cap), ckt((dim - 1) * (cap + 1)) {}

    int real_dim() const { return 2 * (ch + chn + ckn + ckt); }
    int pos_h(int al, int m) const { return 2 * (al * N + m); }
    int pos_hn(int m) const { return 2 * (ch + m); }
    int pos_kn(int m) const { return 2 * (ch + chn + m); }
    int pos_kt(int al, int m) const { return 2 * (ch + chn + ckn + al * (N + 1) + m); }

    LiftedDisc disc(const ModelProblem& p, const BasePoint& b, const Eigen::VectorXd& x) const {
        DiscMap hd(n - 1, N - 1), hnd(1, N), knd(1, N - 1), ktd(n - 1, N);
        for (int al = 0; al < n - 1; ++al)
            for (int m = 0; m < N; ++m) {
                int c = pos_h(al, m);
                hd.set_coeff(m, 0, al, cx(x[c], x[c + 1]));
            }
        for (int m = 0; m <= N; ++m) {
            int c = pos_hn(m);
            hnd.set_coeff(m, 0, 0, cx(x[c], x[c + 1]));
        }
        for (int m = 0; m < N; ++m) {
            int c = pos_kn(m);
            knd.set_coeff(m, 0, 0, cx(x[c], x[c + 1]));
        }
        for (int al = 0; al < n - 1; ++al)
            for (int m = 0; m <= N; ++m) {
                int c = pos_kt(al, m);
                ktd.set_coeff(m, 0, al, cx(x[c], x[c + 1]));
            }
        return assemble_interior_solution(p, b, hd, hnd, knd, ktd);
    }
};

// fixed row layout for the three boundary tables; real-valued tables only
// store modes m >= 0 (mode zero contributes a single real row)
inline int stack_rows(int n, int w) { return 2 * (1 + 2 * w) + (n - 1) * 2 * (2 * w + 1); }

inline Eigen::VectorXd stack_tables(const LaurentTable& m0, const LaurentTable& ma,
                                    const LaurentTable& mn, int n, int w) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(stack_rows(n, w));
    int r = 0;
    v[r++] = m0.at(0, 0).real();
    for (int m = 1; m <= w; ++m) {
        v[r++] = m0.at(m, 0).real();
        v[r++] = m0.at(m, 0).imag();
    }
    for (int k = 0; k < n - 1; ++k)
        for (int m = -w; m <= w; ++m) {
            v[r++] = ma.at(m, k).real();
            v[r++] = ma.at(m, k).imag();
        }
    v[r++] = mn.at(0, 0).real();
    for (int m = 1; m <= w; ++m) {
        v[r++] = mn.at(m, 0).real();
        v[r++] = mn.at(m, 0).imag();
    }
    return v;
}

}  // namespace acdisc::testing
