#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "acdisc/cotangent.hpp"

namespace acdisc {

// Quadric surface paired with its compatible linear-in-zbar structure,
// truncated at Fourier degree N.  The coupling matrix is antisymmetric with
// first diagonal entry zero, so the first tangential slot never couples to
// itself.
struct ModelProblem {
    int n;
    Mat A;
    int N;

    ModelProblem(int dim, Mat coupling, int cap) : n(dim), A(std::move(coupling)), N(cap) {
        if (n < 2) throw std::invalid_argument("ModelProblem: need n >= 2");
        if (A.rows() != n - 1 || A.cols() != n - 1)
            throw std::invalid_argument("ModelProblem: coupling must be (n-1) x (n-1)");
        double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
        if ((A + A.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
            throw std::invalid_argument("ModelProblem: coupling must be antisymmetric");
        if (N < 4) throw std::invalid_argument("ModelProblem: degree cap below the kernel degree");
    }

    AcsModel structure() const { return AcsModel::model_structure(n, A); }
    HypersurfaceModel surface() const { return HypersurfaceModel::quadric_model(n); }
    LiftedStructure lifted_structure() const { return model_lifted_structure(n, A); }
};

// Centre direction and conormal scale of one disc in the explicit family.
struct BasePoint {
    cx a;
    double lambda;

    BasePoint(cx dir, double scale) : a(dir), lambda(scale) {
        if (!(std::abs(a) > 0.0)) throw std::invalid_argument("BasePoint: direction must be nonzero");
        if (!(lambda != 0.0) || !std::isfinite(lambda))
            throw std::invalid_argument("BasePoint: conormal scale must be nonzero");
    }
};

// Right-hand sides of the boundary system: one real table, n-1 complex
// tables, and the purely imaginary normal slot stored as its quotient by i
// (hence also a real table).  Real-valued tables satisfy c_m = conj(c_{-m}).
struct BoundaryData {
    LaurentTable phi0;
    LaurentTable phia;
    LaurentTable phin;

    BoundaryData(int n, int hw) : phi0(1, hw), phia(n - 1, hw), phin(1, hw) {}
    static BoundaryData zero(int n, int hw) { return BoundaryData(n, hw); }

    void validate(int n, double tol = 1e-12) const {
        if (phi0.value_dim != 1 || phin.value_dim != 1 || phia.value_dim != n - 1)
            throw std::invalid_argument("BoundaryData: component mismatch");
        double scale = std::max({1.0, phi0.max_abs(), phin.max_abs()});
        if (phi0.real_defect() > tol * scale || phin.real_defect() > tol * scale)
            throw std::invalid_argument("BoundaryData: real-valued tables need c_m = conj(c_{-m})");
    }
};

// One entry per kernel direction (4n real slots in total): the centre values
// h^i(0), the order-one values not pinned by the zero mode, and the two real
// slots the reality constraints leave undetermined.
struct FreeParams {
    std::vector<cx> h0;   // n entries: tangential slots, then the normal slot
    std::vector<cx> h1;   // n-1 entries: tangential slots 2..n-1, then the normal slot
    double im_ah1 = 0.0;  // Im(conj(a) h^1_1)
    double re_kn1 = 0.0;  // Re of the order-one normal fibre coefficient

    static FreeParams zero(int n) {
        FreeParams f;
        f.h0.assign(static_cast<size_t>(n), cx(0.0));
        f.h1.assign(static_cast<size_t>(n - 1), cx(0.0));
        return f;
    }
};

namespace detail {

inline DiscMap mono(int zp, int zq) {
    DiscMap m(1, std::max(zp, zq));
    m.set_coeff(zp, zq, 0, cx(1.0));
    return m;
}

}  // namespace detail

// The closed-form stationary disc through (0, ..., 0, |a|^2/2) with tangent
// direction a e_1 and conormal scale lambda.
inline LiftedDisc explicit_disc(const ModelProblem& p, const BasePoint& b) {
    const int n = p.n;
    DiscMap f(n, p.N), g(n, p.N);
    f.set_coeff(1, 0, 0, b.a);
    f.set_coeff(0, 0, n - 1, cx(0.5 * std::norm(b.a)));
    g.set_coeff(0, 0, 0, -b.lambda * std::conj(b.a));
    for (int al = 1; al < n - 1; ++al) {
        cx c = cx(0.0, 0.5 * b.lambda) * std::conj(p.A(al, 0)) * b.a;
        g.add_coeff(2, 0, al, -c);
        g.add_coeff(1, 1, al, -c);
        g.add_coeff(0, 0, al, 2.0 * c);
    }
    g.set_coeff(1, 0, n - 1, b.lambda);
    return LiftedDisc(f, g);
}

// The four first-order families vanishing exactly on lifted model discs:
// tangential base, normal base, tangential fibre, normal fibre (2n scalars).
inline std::vector<DiscMap> model_pde_residual(const ModelProblem& p, const LiftedDisc& d) {
    const int n = p.n;
    if (d.dim() != n) throw std::invalid_argument("model_pde_residual: dimension mismatch");
    const DiscMap fb = d.f.wirtinger(true);
    const DiscMap fz = d.f.wirtinger(false);
    const DiscMap gb = d.g.wirtinger(true);
    const int cap = 2 * std::max(1, d.f.degree_cap());

    std::vector<DiscMap> out;
    out.reserve(static_cast<size_t>(2 * n));
    for (int al = 0; al < n - 1; ++al) out.push_back(fb.component(al));

    DiscMap en = fb.component(n - 1).with_cap(cap);
    for (int al = 0; al < n - 1; ++al)
        for (int be = 0; be < n - 1; ++be) {
            cx c = cx(0.0, -0.5) * p.A(al, be);
            if (is_exact_zero(c)) continue;
            en += DiscMap::multiply(d.f.component(be).conjugated(),
                                    fz.component(al).conjugated()).scaled(c);
        }
    out.push_back(en);

    const DiscMap gnzc = d.g.wirtinger(false).component(n - 1).conjugated();
    for (int al = 0; al < n - 1; ++al) {
        DiscMap ea = gb.component(al).with_cap(cap);
        for (int be = 0; be < n - 1; ++be) {
            cx c = cx(0.0, 0.5) * std::conj(p.A(al, be));
            if (is_exact_zero(c)) continue;
            ea += DiscMap::multiply(d.f.component(be), gnzc).scaled(c);
        }
        out.push_back(ea);
    }
    out.push_back(gb.component(n - 1));
    return out;
}

// Derivative of the interior system at the explicit disc, applied to a
// variation (h, k) = (d.f, d.g).  Returns the base and fibre families.
inline std::pair<DiscMap, DiscMap> linearized_interior(const ModelProblem& p, const BasePoint& b,
                                                       const LiftedDisc& d) {
    const int n = p.n;
    if (d.dim() != n) throw std::invalid_argument("linearized_interior: dimension mismatch");
    const cx a = b.a, ab = std::conj(b.a);
    const DiscMap hb = d.f.wirtinger(true);
    const DiscMap hz = d.f.wirtinger(false);
    const DiscMap kb = d.g.wirtinger(true);
    const DiscMap kz = d.g.wirtinger(false);
    const int cap = d.f.degree_cap() + 1;
    const DiscMap zeta = detail::mono(1, 0);
    const DiscMap zbar = detail::mono(0, 1);

    DiscMap base(n, cap), fibre(n, cap);
    for (int al = 0; al < n - 1; ++al) base.set_component(al, hb.component(al));

    DiscMap hn = hb.component(n - 1).with_cap(cap);
    for (int al = 0; al < n - 1; ++al) {
        cx c = p.A(0, al);
        if (is_exact_zero(c)) continue;
        hn += d.f.component(al).conjugated().scaled(cx(0.0, -0.5) * ab * c).with_cap(cap);
        hn += DiscMap::multiply(zbar, hz.component(al).conjugated()).scaled(cx(0.0, 0.5) * ab * c);
    }
    base.set_component(n - 1, hn);

    const DiscMap knzc = kz.component(n - 1).conjugated();
    for (int al = 0; al < n - 1; ++al) {
        DiscMap ka = kb.component(al).with_cap(cap);
        cx c1 = std::conj(p.A(al, 0));
        if (!is_exact_zero(c1)) ka += DiscMap::multiply(zeta, knzc).scaled(cx(0.0, 0.5) * a * c1);
        for (int be = 0; be < n - 1; ++be) {
            cx c2 = std::conj(p.A(al, be));
            if (is_exact_zero(c2)) continue;
            ka += d.f.component(be).scaled(cx(0.0, 0.5) * b.lambda * c2).with_cap(cap);
        }
        fibre.set_component(al, ka);
    }
    fibre.set_component(n - 1, kb.component(n - 1));
    return {base, fibre};
}

// Boundary pairings of a variation, as Fourier tables: the real surface slot,
// the n-1 complex tangential slots, and the imaginary normal slot divided by
// i (stored real).
struct ModelBoundaryTables {
    LaurentTable m0;
    LaurentTable ma;
    LaurentTable mn;
};

inline ModelBoundaryTables linearized_boundary(const ModelProblem& p, const BasePoint& b,
                                               const LiftedDisc& d) {
    const int n = p.n;
    if (d.dim() != n) throw std::invalid_argument("linearized_boundary: dimension mismatch");
    const cx a = b.a, ab = std::conj(b.a);
    const double lam = b.lambda;
    const int cap = d.f.degree_cap() + 1;
    const DiscMap zeta = detail::mono(1, 0);
    const DiscMap zbar = detail::mono(0, 1);
    const DiscMap h1 = d.f.component(0);
    const DiscMap hn = d.f.component(n - 1);
    const DiscMap kn = d.g.component(n - 1);

    DiscMap m0d(1, cap);
    m0d += hn;
    m0d += hn.conjugated();
    m0d += DiscMap::multiply(zbar, h1).scaled(-ab);
    m0d += DiscMap::multiply(zeta, h1.conjugated()).scaled(-a);

    DiscMap mad(n - 1, cap);
    for (int al = 0; al < n - 1; ++al) {
        DiscMap comp = d.g.component(al).with_cap(cap);
        if (al == 0) comp += DiscMap::multiply(zbar, kn).scaled(ab);
        cx c1 = std::conj(p.A(al, 0));
        if (!is_exact_zero(c1))
            comp += DiscMap::multiply(zeta, kn + kn.conjugated().scaled(-1.0)).scaled(cx(0.0, 0.5) * a * c1);
        comp += DiscMap::multiply(zeta, d.f.component(al).conjugated()).scaled(lam);
        for (int be = 0; be < n - 1; ++be) {
            cx c2 = std::conj(p.A(al, be));
            if (is_exact_zero(c2)) continue;
            comp += DiscMap::multiply(zeta, d.f.component(be)).scaled(cx(0.0, 0.5) * lam * c2);
            comp += DiscMap::multiply(zbar, d.f.component(be)).scaled(cx(0.0, -0.5) * lam * c2);
        }
        mad.set_component(al, comp);
    }

    DiscMap mnd = DiscMap::multiply(zbar, kn).scaled(cx(0.0, -1.0)) +
                  DiscMap::multiply(zeta, kn.conjugated()).scaled(cx(0.0, 1.0));

    return {boundary_fourier(m0d), boundary_fourier(mad), boundary_fourier(mnd)};
}

// General solution of the interior system at a base point: holomorphic data
// plus the antiholomorphic corrections that the coupling forces on the
// normal base slot and the tangential fibre slots.
inline LiftedDisc assemble_interior_solution(const ModelProblem& p, const BasePoint& b,
                                             const DiscMap& h_tan, const DiscMap& hn_free,
                                             const DiscMap& kn, const DiscMap& k_free) {
    const int n = p.n;
    if (h_tan.value_dim() != n - 1 || k_free.value_dim() != n - 1 ||
        hn_free.value_dim() != 1 || kn.value_dim() != 1)
        throw std::invalid_argument("assemble_interior_solution: component mismatch");
    if (!h_tan.is_holomorphic() || !hn_free.is_holomorphic() ||
        !kn.is_holomorphic() || !k_free.is_holomorphic())
        throw std::invalid_argument("assemble_interior_solution: holomorphic input required");
    const cx a = b.a, ab = std::conj(b.a);
    const int cap = std::max({h_tan.degree_cap() + 1, hn_free.degree_cap(),
                              kn.degree_cap() + 1, k_free.degree_cap()});
    const DiscMap zeta = detail::mono(1, 0);
    const DiscMap zbar = detail::mono(0, 1);

    DiscMap f(n, cap), g(n, cap);
    for (int al = 0; al < n - 1; ++al) f.set_component(al, h_tan.component(al));

    DiscMap hn = hn_free.with_cap(cap);
    for (int al = 0; al < n - 1; ++al) {
        cx c = p.A(0, al);
        if (is_exact_zero(c)) continue;
        hn += DiscMap::multiply(zbar, h_tan.component(al).conjugated()).scaled(cx(0.0, -0.5) * ab * c);
        hn += antiderivative_I(h_tan.component(al)).conjugated().scaled(cx(0.0, 1.0) * ab * c);
    }
    f.set_component(n - 1, hn);

    const DiscMap knc = kn.conjugated();
    for (int al = 0; al < n - 1; ++al) {
        DiscMap ka = k_free.component(al).with_cap(cap);
        cx c1 = std::conj(p.A(al, 0));
        if (!is_exact_zero(c1)) ka += DiscMap::multiply(zeta, knc).scaled(cx(0.0, -0.5) * a * c1);
        for (int be = 0; be < n - 1; ++be) {
            cx c2 = std::conj(p.A(al, be));
            if (is_exact_zero(c2)) continue;
            ka += DiscMap::multiply(zbar, h_tan.component(be)).scaled(cx(0.0, -0.5) * b.lambda * c2);
        }
        g.set_component(al, ka);
    }
    g.set_component(n - 1, kn.with_cap(cap));
    return LiftedDisc(f, g);
}

// Mode-by-mode solution of the linearized boundary problem.  Data supported
// on modes |m| <= N-2 is matched exactly; anything beyond has no solution
// slot and is rejected.  The free parameters select one element of the 4n
// dimensional kernel.
inline LiftedDisc solve_linearized(const ModelProblem& p, const BasePoint& b,
                                   const BoundaryData& phi, const FreeParams& fp) {
    const int n = p.n, N = p.N;
    phi.validate(n);
    {
        std::string dropped;
        auto scan = [&](const LaurentTable& t, const char* name) {
            for (int m = -t.half_width; m <= t.half_width; ++m) {
                if (std::abs(m) <= N - 2) continue;
                for (int k = 0; k < t.value_dim; ++k)
                    if (std::abs(t.at(m, k)) != 0.0) {
                        if (!dropped.empty()) dropped += ", ";
                        dropped += name;
                        if (t.value_dim > 1) dropped += "[" + std::to_string(k) + "]";
                        dropped += " mode " + std::to_string(m);
                    }
            }
        };
        scan(phi.phi0, "phi0");
        scan(phi.phia, "phia");
        scan(phi.phin, "phin");
        if (!dropped.empty())
            throw std::invalid_argument("solve_linearized: data beyond mode " +
                                        std::to_string(N - 2) + " has no solution slot: " + dropped);
    }
    if (static_cast<int>(fp.h0.size()) != n || static_cast<int>(fp.h1.size()) != n - 1)
        throw std::invalid_argument("solve_linearized: free parameter count");

    const cx a = b.a, ab = std::conj(b.a);
    const double lam = b.lambda;
    const cx iu(0.0, 1.0);

    std::vector<std::vector<cx>> h(static_cast<size_t>(n - 1), std::vector<cx>(static_cast<size_t>(N), cx(0.0)));
    std::vector<cx> hn(static_cast<size_t>(N + 1), cx(0.0));
    std::vector<cx> kn(static_cast<size_t>(N), cx(0.0));
    std::vector<std::vector<cx>> kt(static_cast<size_t>(n - 1), std::vector<cx>(static_cast<size_t>(N + 1), cx(0.0)));

    auto hat = [&](int al, int m) { return (m >= 0 && m < N) ? h[al][m] : cx(0.0); };
    auto knat = [&](int m) { return (m >= 0 && m < N) ? kn[m] : cx(0.0); };
    auto p0 = [&](int m) { return phi.phi0.at(m, 0); };
    auto pa = [&](int al, int m) { return phi.phia.at(m, al); };
    auto pn = [&](int m) { return phi.phin.at(m, 0); };

    for (int al = 0; al < n - 1; ++al) h[al][0] = fp.h0[al];
    hn[0] = fp.h0[n - 1];
    for (int al = 1; al < n - 1; ++al) h[al][1] = fp.h1[al - 1];
    hn[1] = fp.h1[n - 2];

    // zero mode of the real slot pins one real part; its partner stays free
    const cx ah11(hn[0].real() - 0.5 * p0(0).real(), fp.im_ah1);
    h[0][1] = ah11 / ab;

    // first positive mode of the real slot, solved for the order-two entry
    {
        cx s(0.0);
        for (int al = 0; al < n - 1; ++al) s += std::conj(p.A(0, al)) * h[al][0];
        h[0][2] = (hn[1] - cx(0.0, 0.5) * a * s - a * std::conj(h[0][0]) - p0(1)) / ab;
    }

    // normal fibre modes, seeded by the first negative tangential mode (the
    // first slot carries no self-coupling, so it closes on its own)
    {
        cx s(0.0);
        for (int be = 0; be < n - 1; ++be) s += std::conj(p.A(0, be)) * h[be][0];
        kn[0] = (lam / ab) * (iu * s - std::conj(h[0][2])) + pa(0, -1) / ab;
    }
    kn[1] = cx(fp.re_kn1, 0.5 * pn(0).real());
    kn[2] = std::conj(kn[0]) + iu * pn(1);
    for (int m = 3; m < N; ++m) kn[m] = iu * pn(m - 1);

    // remaining order-two tangential entries from the first negative modes
    for (int al = 1; al < n - 1; ++al) {
        cx s(0.0);
        for (int be = 0; be < n - 1; ++be) s += std::conj(p.A(al, be)) * h[be][0];
        h[al][2] = std::conj(iu * s + (iu * a / lam) * std::conj(p.A(al, 0)) * std::conj(kn[2]) +
                             pa(al, -1) / lam);
    }
    for (int m = 3; m < N; ++m)
        for (int al = 0; al < n - 1; ++al)
            h[al][m] = std::conj(pa(al, 1 - m) / lam +
                                 (iu * a / lam) * std::conj(p.A(al, 0)) * std::conj(kn[m]));

    // normal base modes from the positive modes of the real slot
    for (int m = 2; m <= N; ++m) {
        cx s(0.0);
        for (int al = 0; al < n - 1; ++al) s += std::conj(p.A(0, al)) * h[al][m - 1];
        hn[m] = iu * a * s * (1.0 / m - 0.5) + ab * hat(0, m + 1) + p0(m);
    }

    // tangential fibre modes from the non-negative tangential modes
    for (int al = 0; al < n - 1; ++al) {
        const cx cA = std::conj(p.A(al, 0));
        const double d1 = (al == 0) ? 1.0 : 0.0;
        {
            cx s(0.0);
            for (int be = 0; be < n - 1; ++be) s += std::conj(p.A(al, be)) * h[be][1];
            kt[al][0] = iu * a * cA * std::conj(kn[1]) - d1 * ab * kn[1] + iu * lam * s -
                        lam * std::conj(h[al][1]) + pa(al, 0);
        }
        {
            cx s(0.0);
            for (int be = 0; be < n - 1; ++be) s += std::conj(p.A(al, be)) * (h[be][2] - 0.5 * h[be][0]);
            kt[al][1] = iu * a * cA * std::conj(kn[0]) - d1 * ab * kn[2] - cx(0.0, 0.5) * a * cA * kn[0] +
                        iu * lam * s - lam * std::conj(h[al][0]) + pa(al, 1);
        }
        for (int m = 2; m <= N; ++m) {
            cx s(0.0);
            for (int be = 0; be < n - 1; ++be)
                s += std::conj(p.A(al, be)) * (hat(be, m + 1) - 0.5 * h[be][m - 1]);
            kt[al][m] = -d1 * ab * knat(m + 1) - cx(0.0, 0.5) * a * cA * kn[m - 1] + iu * lam * s +
                        pa(al, m);
        }
    }

    DiscMap hd(n - 1, N - 1), hnd(1, N), knd(1, N - 1), ktd(n - 1, N);
    for (int al = 0; al < n - 1; ++al)
        for (int m = 0; m < N; ++m) {
            if (!is_exact_zero(h[al][m])) hd.set_coeff(m, 0, al, h[al][m]);
            if (!is_exact_zero(kt[al][m])) ktd.set_coeff(m, 0, al, kt[al][m]);
        }
    for (int al = 0; al < n - 1; ++al)
        if (!is_exact_zero(kt[al][N])) ktd.set_coeff(N, 0, al, kt[al][N]);
    for (int m = 0; m <= N; ++m)
        if (!is_exact_zero(hn[m])) hnd.set_coeff(m, 0, 0, hn[m]);
    for (int m = 0; m < N; ++m)
        if (!is_exact_zero(kn[m])) knd.set_coeff(m, 0, 0, kn[m]);
    return assemble_interior_solution(p, b, hd, hnd, knd, ktd);
}

// Basis of the solution space with vanishing data: one solve per free slot.
inline std::vector<LiftedDisc> kernel_basis(const ModelProblem& p, const BasePoint& b, int cap) {
    const ModelProblem q(p.n, p.A, cap);
    const BoundaryData phi = BoundaryData::zero(p.n, std::max(1, cap - 2));
    std::vector<LiftedDisc> out;
    out.reserve(static_cast<size_t>(4 * p.n));
    auto push = [&](const FreeParams& fp) { out.push_back(solve_linearized(q, b, phi, fp)); };
    for (int i = 0; i < p.n; ++i)
        for (int r = 0; r < 2; ++r) {
            FreeParams fp = FreeParams::zero(p.n);
            fp.h0[i] = r ? cx(0.0, 1.0) : cx(1.0, 0.0);
            push(fp);
        }
    for (int i = 0; i + 1 < p.n; ++i)
        for (int r = 0; r < 2; ++r) {
            FreeParams fp = FreeParams::zero(p.n);
            fp.h1[i] = r ? cx(0.0, 1.0) : cx(1.0, 0.0);
            push(fp);
        }
    {
        FreeParams fp = FreeParams::zero(p.n);
        fp.im_ah1 = 1.0;
        push(fp);
    }
    {
        FreeParams fp = FreeParams::zero(p.n);
        fp.re_kn1 = 1.0;
        push(fp);
    }
    return out;
}

// Centre data of a lifted disc: the centre itself, the tangential derivative
// block normalized against the real part of its first slot, and the conormal
// scale read off the fibre.  The scalar action dividing by a is taken in the
// chart where the structure is standard along the normal axis.
struct EvaluationData {
    std::vector<cx> centre;
    std::vector<cx> ratio;
    double scale = 0.0;
};

inline EvaluationData evaluation_map(const LiftedDisc& d, cx a) {
    const int n = d.dim();
    if (!(std::abs(a) > 0.0)) throw std::invalid_argument("evaluation_map: direction must be nonzero");
    EvaluationData out;
    out.centre = d.f.eval(cx(0.0));
    std::vector<cx> v = d.f.wirtinger(false).eval(cx(0.0));
    double vmax = 1.0;
    for (int k = 0; k < n; ++k) {
        v[k] /= a;
        vmax = std::max(vmax, std::abs(v[k]));
    }
    const double den = v[0].real();
    if (std::abs(den) < 1e-12 * vmax)
        throw std::runtime_error("evaluation_map: transversal normalization failed");
    out.ratio.assign(v.begin(), v.end() - 1);
    for (auto& r : out.ratio) r /= den;
    out.scale = d.g.wirtinger(false).eval(cx(0.0))[static_cast<size_t>(n - 1)].real();
    return out;
}

}  // namespace acdisc
