#pragma once

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "acdisc/structures.hpp"

namespace acdisc {

// Substitute the components of a disc map for the variables of p. Exact: the
// result cap is deg(p) * cap(args).
inline DiscMap compose_with_disc(const PolyMap& p, const DiscMap& args) {
    if (p.num_vars() != args.value_dim())
        throw std::invalid_argument("compose_with_disc: variable count mismatch");
    const int nv = p.num_vars();
    std::vector<int> need_p(nv, 0), need_q(nv, 0);
    int deg = 0;
    for (const auto& [ix, v] : p.terms()) {
        (void)v;
        for (int j = 0; j < nv; ++j) {
            need_p[j] = std::max(need_p[j], ix.p[j]);
            need_q[j] = std::max(need_q[j], ix.q[j]);
        }
        deg = std::max(deg, ix.total_degree());
    }
    const int cap = deg * args.degree_cap();
    if (cap > 128) throw std::invalid_argument("compose_with_disc: degree cap overflow");

    DiscMap one(1, 0);
    one.set_coeff(0, 0, cx(1.0));
    std::vector<std::vector<DiscMap>> pw(nv), pwc(nv);
    for (int j = 0; j < nv; ++j) {
        pw[j].push_back(one);
        pwc[j].push_back(one);
        if (need_p[j] > 0 || need_q[j] > 0) {
            DiscMap cj = args.component(j);
            for (int e = 1; e <= need_p[j]; ++e) pw[j].push_back(DiscMap::multiply(pw[j][e - 1], cj));
            DiscMap cjc = cj.conjugated();
            for (int e = 1; e <= need_q[j]; ++e) pwc[j].push_back(DiscMap::multiply(pwc[j][e - 1], cjc));
        }
    }

    DiscMap out(p.value_dim(), cap);
    for (const auto& [ix, coeffs] : p.terms()) {
        DiscMap prod = one;
        for (int j = 0; j < nv; ++j) {
            if (ix.p[j] > 0) prod = DiscMap::multiply(prod, pw[j][ix.p[j]]);
            if (ix.q[j] > 0) prod = DiscMap::multiply(prod, pwc[j][ix.q[j]]);
        }
        for (int a = 0; a <= prod.degree_cap(); ++a)
            for (int b = 0; b <= prod.degree_cap(); ++b) {
                cx pv = prod.coeff(a, b);
                if (is_exact_zero(pv)) continue;
                for (int k = 0; k < p.value_dim(); ++k)
                    if (!is_exact_zero(coeffs[k])) out.add_coeff(a, b, k, pv * coeffs[k]);
            }
    }
    return out;
}

// Re-embed a polynomial into a larger variable set (new variables unused).
inline PolyMap extend_vars(const PolyMap& p, int num_vars) {
    if (num_vars < p.num_vars()) throw std::invalid_argument("extend_vars: cannot drop variables");
    PolyMap r(num_vars, p.value_dim());
    for (const auto& [ix, v] : p.terms()) {
        BiIndex jx = ix;
        jx.p.resize(num_vars, 0);
        jx.q.resize(num_vars, 0);
        r.add_term(jx, v);
    }
    return r;
}

// Disc into the cotangent chart: base path f and fibre path g of equal value
// dimension, held at a common degree cap.
struct LiftedDisc {
    DiscMap f, g;

    LiftedDisc(DiscMap base, DiscMap fibre) : f(std::move(base)), g(std::move(fibre)) {
        if (f.value_dim() != g.value_dim())
            throw std::invalid_argument("LiftedDisc: base/fibre dimension mismatch");
        int cap = std::max(f.degree_cap(), g.degree_cap());
        if (f.degree_cap() != cap) f = f.with_cap(cap);
        if (g.degree_cap() != cap) g = g.with_cap(cap);
    }

    int dim() const { return f.value_dim(); }

    // components ordered (z_1..z_n, P_1..P_n)
    DiscMap stacked() const {
        const int n = dim();
        DiscMap r(2 * n, f.degree_cap());
        for (int k = 0; k < n; ++k) {
            r.set_component(k, f.component(k));
            r.set_component(n + k, g.component(k));
        }
        return r;
    }
};

// Structure on the cotangent chart in the complex frame: on holomorphic
// components (dz, dP) the action is w -> T1 w + T2 conj(w), blocks 2n x 2n
// over the 2n variables (z_1..z_n, P_1..P_n).
struct LiftedStructure {
    int n = 1;
    MatrixPoly T1, T2;

    RealLinearField field() const { return {T1, T2}; }
    RealLinearOp eval(const std::vector<cx>& zp) const { return {T1.eval(zp), T2.eval(zp)}; }
    RealLinearOp eval(const std::vector<cx>& z, const std::vector<cx>& p) const {
        std::vector<cx> zp = z;
        zp.insert(zp.end(), p.begin(), p.end());
        return eval(zp);
    }
};

enum class VectorSide { tangent, cotangent };

// Multiplication by the scalar zeta through the structure at one point.
// Tangent vectors use the structure itself; covectors use the transpose
// action, so that pairing with the tangent action is preserved.
inline Vec complex_action(cx zeta, const Vec& w, const RealLinearOp& j,
                          VectorSide side = VectorSide::tangent) {
    if (j.rows() != w.size() || j.cols() != w.size())
        throw std::invalid_argument("complex_action: dimension mismatch");
    Vec jw = (side == VectorSide::tangent) ? Vec(j.A * w + j.B * w.conjugate())
                                           : Vec(j.A.transpose() * w + j.B.adjoint() * w.conjugate());
    return zeta.real() * w + zeta.imag() * jw;
}

inline Vec complex_action(cx zeta, const Vec& w, const AcsModel& j, const std::vector<cx>& x,
                          VectorSide side = VectorSide::tangent) {
    return complex_action(zeta, w, j.eval(x), side);
}

namespace detail {

inline void set_block(MatrixPoly& dst, int r0, int c0, const MatrixPoly& blk) {
    for (int r = 0; r < blk.rows(); ++r)
        for (int c = 0; c < blk.cols(); ++c) dst.at(r0 + r, c0 + c) = blk.at(r, c);
}

// d/dx^m (m < n) or d/dy^(m-n) in Wirtinger form
inline PolyMap real_partial(const PolyMap& f, int m, int n) {
    if (m < n) return f.wirtinger(m, false) + f.wirtinger(m, true);
    return (f.wirtinger(m - n, false) - f.wirtinger(m - n, true)).scaled(cx(0.0, 1.0));
}

}  // namespace detail

// Canonical lift of an almost complex structure to the cotangent chart: base
// block J, fibre block J^T, and a mixed block built from the first
// derivatives of J, assembled in real coordinates and returned in the complex
// frame. The fibre coordinates enter the mixed block linearly.
inline LiftedStructure lift_structure(const AcsModel& j, double tol_involution = 1e-8) {
    const int n = j.n, m = 2 * n, nv = 2 * n;
    {
        auto rep = validate_acs(j, default_validation_samples(n), tol_involution);
        if (!rep.pass) {
            std::ostringstream os;
            os << "lift_structure: base structure fails the involution check (residual "
               << rep.max_residual << ")";
            throw std::invalid_argument(os.str());
        }
    }

    MatrixPoly j1(n, n, nv), j2(n, n, nv);
    {
        MatrixPoly lb = j.linear_block(), ab = j.antilinear_block();
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) {
                j1.at(r, c) = extend_vars(lb.at(r, c), nv);
                j2.at(r, c) = extend_vars(ab.at(r, c), nv);
            }
    }

    auto re_part = [](const MatrixPoly& x) { return (x + x.conjugated()).scaled(cx(0.5)); };
    auto im_part = [](const MatrixPoly& x) { return (x - x.conjugated()).scaled(cx(0.0, -0.5)); };

    // real-frame base block on coordinates (x, y)
    MatrixPoly jr(m, m, nv);
    detail::set_block(jr, 0, 0, re_part(j1 + j2));
    detail::set_block(jr, 0, n, im_part(j2 - j1));
    detail::set_block(jr, n, 0, im_part(j1 + j2));
    detail::set_block(jr, n, n, re_part(j1 - j2));

    // first derivatives of the base block by real coordinate
    std::vector<MatrixPoly> dj(m, MatrixPoly(m, m, nv));
    for (int mu = 0; mu < m; ++mu)
        for (int r = 0; r < m; ++r)
            for (int c = 0; c < m; ++c)
                if (!jr.at(r, c).is_zero()) dj[mu].at(r, c) = detail::real_partial(jr.at(r, c), mu, n);

    // fibre coordinates as polynomials in P: u_a = P_a + conj P_a,
    // v_a = i (P_a - conj P_a)
    std::vector<PolyMap> pa;
    pa.reserve(m);
    for (int a = 0; a < n; ++a)
        pa.push_back(PolyMap::variable(nv, n + a, false) + PolyMap::variable(nv, n + a, true));
    for (int a = 0; a < n; ++a)
        pa.push_back((PolyMap::variable(nv, n + a, false) - PolyMap::variable(nv, n + a, true))
                         .scaled(cx(0.0, 1.0)));

    // mixed block, row p_j column x^i: (1/2) sum_a p_a C^a_{ij} with
    // C^a_{ij} = -dJ^a_i/dx^j + dJ^a_j/dx^i
    //            + sum_{l,m} J^a_l (dJ^l_i/dx^m J^m_j - dJ^l_j/dx^m J^m_i),
    // antisymmetric in (i, j)
    MatrixPoly mixed(m, m, nv);
    for (int i = 0; i < m; ++i)
        for (int jx = i + 1; jx < m; ++jx) {
            std::vector<PolyMap> g(m, PolyMap(nv, 1));
            for (int l = 0; l < m; ++l)
                for (int mu = 0; mu < m; ++mu) {
                    if (!dj[mu].at(l, i).is_zero() && !jr.at(mu, jx).is_zero())
                        g[l] += dj[mu].at(l, i) * jr.at(mu, jx);
                    if (!dj[mu].at(l, jx).is_zero() && !jr.at(mu, i).is_zero())
                        g[l] += (dj[mu].at(l, jx) * jr.at(mu, i)).scaled(cx(-1.0));
                }
            for (int a = 0; a < m; ++a) {
                PolyMap c = dj[i].at(a, jx) - dj[jx].at(a, i);
                for (int l = 0; l < m; ++l)
                    if (!jr.at(a, l).is_zero() && !g[l].is_zero()) c += jr.at(a, l) * g[l];
                if (c.is_zero()) continue;
                PolyMap half = PolyMap::multiply(pa[a], c).scaled(cx(0.5));
                mixed.at(jx, i) += half;
                mixed.at(i, jx) += half.scaled(cx(-1.0));
            }
        }

    // full real-frame matrix on (x, y, u, v) and change to the complex frame
    MatrixPoly rr(2 * m, 2 * m, nv);
    detail::set_block(rr, 0, 0, jr);
    detail::set_block(rr, m, 0, mixed);
    detail::set_block(rr, m, m, jr.transposed());

    const cx I(0.0, 1.0);
    Mat tf = Mat::Zero(2 * m, 2 * m), ti = Mat::Zero(2 * m, 2 * m);
    for (int k = 0; k < n; ++k) {
        tf(k, k) = 1.0;              tf(k, n + k) = I;              // z row
        tf(n + k, k) = 1.0;          tf(n + k, n + k) = -I;         // conj z row
        tf(m + k, m + k) = 0.5;      tf(m + k, m + n + k) = -0.5 * I;   // P row
        tf(m + n + k, m + k) = 0.5;  tf(m + n + k, m + n + k) = 0.5 * I; // conj P row
        ti(k, k) = 0.5;              ti(k, n + k) = 0.5;            // x row
        ti(n + k, k) = -0.5 * I;     ti(n + k, n + k) = 0.5 * I;    // y row
        ti(m + k, m + k) = 1.0;      ti(m + k, m + n + k) = 1.0;    // u row
        ti(m + n + k, m + k) = I;    ti(m + n + k, m + n + k) = -I; // v row
    }
    MatrixPoly mc = (tf * rr) * ti;

    LiftedStructure out;
    out.n = n;
    out.T1 = MatrixPoly(m, m, nv);
    out.T2 = MatrixPoly(m, m, nv);
    auto hol = [&](int r) { return r < n ? r : n + r; };
    auto anti = [&](int c) { return c < n ? n + c : m + c; };
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c) {
            out.T1.at(r, c) = mc.at(hol(r), hol(c));
            out.T2.at(r, c) = mc.at(hol(r), anti(c));
        }
    return out;
}

// Closed-form lifted blocks of the osculating model structure. The fibre
// block carries the sign that makes conormal-valued model discs holomorphic,
// matching the boundary-value problem solved by the model operators.
inline LiftedStructure model_lifted_structure(int n, const Mat& a) {
    if (a.rows() != n - 1 || a.cols() != n - 1)
        throw std::invalid_argument("model_lifted_structure: tensor slice must be (n-1) x (n-1)");
    if (n > 1 && (a + a.transpose()).cwiseAbs().maxCoeff() > 1e-12)
        throw std::invalid_argument("model_lifted_structure: tensor slice must be antisymmetric");
    const int m = 2 * n, nv = 2 * n;
    LiftedStructure s;
    s.n = n;
    s.T1 = MatrixPoly::identity(m, nv).scaled(cx(0.0, 1.0));
    s.T2 = MatrixPoly(m, m, nv);
    for (int al = 0; al + 1 < n; ++al)
        for (int be = 0; be + 1 < n; ++be) {
            cx v = a(al, be);
            if (is_exact_zero(v)) continue;
            s.T2.at(n - 1, al) += PolyMap::variable(nv, be, true).scaled(v);
            s.T2.at(n + al, m - 1) += PolyMap::variable(nv, be, false).scaled(-std::conj(v));
        }
    return s;
}

namespace detail {

inline void check_chart(const DiscMap& d, double chart_radius, const char* who) {
    double worst = 0.0;
    cx where(0.0);
    for (int ir = 0; ir <= 8; ++ir) {
        double rad = ir / 8.0;
        int na = (ir == 0) ? 1 : 64;
        for (int ia = 0; ia < na; ++ia) {
            cx z = std::polar(rad, 2.0 * M_PI * ia / na);
            for (cx v : d.eval(z))
                if (std::abs(v) > worst) {
                    worst = std::abs(v);
                    where = z;
                }
        }
    }
    if (worst > chart_radius) {
        std::ostringstream os;
        os << who << ": disc leaves the coordinate chart at zeta = (" << where.real() << ", "
           << where.imag() << "), |value| = " << worst << " > " << chart_radius;
        throw std::runtime_error(os.str());
    }
}

// (T1 + i Id) dbar d + (T1 - i Id) d d + T2 conj(dbar d + d d), exact
inline DiscMap holo_residual_core(const MatrixPoly& t1, const MatrixPoly& t2, const DiscMap& d) {
    const int m = t1.rows();
    const DiscMap wp = d.wirtinger(true), wm = d.wirtinger(false);
    const int edeg = std::max({t1.max_total_degree(), t2.max_total_degree(), 0});
    const int cap = (edeg + 1) * d.degree_cap();
    if (cap > 128) throw std::invalid_argument("holo_residual: degree cap overflow");
    DiscMap out(m, cap);
    for (int r = 0; r < m; ++r) {
        DiscMap acc(1, cap);
        for (int c = 0; c < m; ++c) {
            DiscMap wsum = wp.component(c) + wm.component(c);
            const PolyMap& e1 = t1.at(r, c);
            if (!e1.is_zero())
                acc += DiscMap::multiply(compose_with_disc(e1, d), wsum).with_cap(cap);
            const PolyMap& e2 = t2.at(r, c);
            if (!e2.is_zero())
                acc += DiscMap::multiply(compose_with_disc(e2, d), wsum.conjugated()).with_cap(cap);
        }
        acc += (wp.component(r) - wm.component(r)).scaled(cx(0.0, 1.0)).with_cap(cap);
        out.set_component(r, acc);
    }
    return out;
}

}  // namespace detail

// Holomorphy defect of a disc with respect to the structure, as an exact
// polynomial map; identically zero iff the disc is pseudoholomorphic.
inline DiscMap holo_residual(const AcsModel& j, const DiscMap& d, double chart_radius = 2.0) {
    if (d.value_dim() != j.n) throw std::invalid_argument("holo_residual: dimension mismatch");
    detail::check_chart(d, chart_radius, "holo_residual");
    return detail::holo_residual_core(j.linear_block(), j.antilinear_block(), d);
}

inline DiscMap holo_residual(const LiftedStructure& s, const LiftedDisc& d,
                             double chart_radius = 2.0) {
    if (d.dim() != s.n) throw std::invalid_argument("holo_residual: dimension mismatch");
    detail::check_chart(d.f, chart_radius, "holo_residual");
    return detail::holo_residual_core(s.T1, s.T2, d.stacked());
}

// Alignment of the fibre path with the conormal direction of the hypersurface
// along the boundary, with the positive scale factor eliminated pointwise.
struct ConormalResidual {
    double r0 = 0.0;   // defining function at the base point
    RVec r;            // 2n-1 real alignment components
    double lambda = 0.0;  // eliminated conormal scale
};

inline ConormalResidual conormal_residual(const HypersurfaceModel& s, const AcsModel& j,
                                          const LiftedDisc& d, cx zeta,
                                          double tol_section = -1.0) {
    const int n = s.n;
    if (j.n != n || d.dim() != n)
        throw std::invalid_argument("conormal_residual: dimension mismatch");
    if (std::abs(std::abs(zeta) - 1.0) > 1e-12)
        throw std::invalid_argument("conormal_residual: zeta must lie on the unit circle");

    if (tol_section < 0.0) {
        double gmax = 0.0;
        for (int k = 0; k < 64; ++k) {
            cx zk = std::polar(1.0, 2.0 * M_PI * k / 64);
            for (cx v : d.g.eval(zk)) gmax = std::max(gmax, std::abs(v));
        }
        tol_section = 1e-8 * gmax + 1e-300;
    }

    const std::vector<cx> fz = d.f.eval(zeta);
    const std::vector<cx> gzv = d.g.eval(zeta);
    Vec gz(n);
    for (int k = 0; k < n; ++k) gz(k) = gzv[k];

    const PolyMap rho = s.defining_function();
    Vec dcov(n);
    for (int k = 0; k < n; ++k) dcov(k) = rho.wirtinger(k, false).eval_scalar(fz);

    const Vec chi = complex_action(zeta, dcov, j, fz, VectorSide::cotangent);
    const cx zb = std::conj(zeta);
    // the defining function is normalized with a unit normal coefficient, so
    // the conormal frame scale is bounded below by 1 near the surface
    const double den = (zb * chi(n - 1)).real();
    if (std::abs(den) < 1e-12 * std::max(1.0, dcov.cwiseAbs().maxCoeff()))
        throw std::runtime_error("conormal_residual: conormal frame degenerate at this point");
    const double lam = (zb * gz(n - 1)).real() / den;
    if (std::abs(lam) < tol_section)
        throw std::runtime_error("conormal_residual: fibre path hits the zero section");

    ConormalResidual out;
    out.r0 = rho.eval_scalar(fz).real();
    out.lambda = lam;
    out.r = RVec(2 * n - 1);
    for (int al = 0; al + 1 < n; ++al) {
        cx rc = gz(al) - lam * chi(al);
        out.r(2 * al) = rc.real();
        out.r(2 * al + 1) = rc.imag();
    }
    out.r(2 * n - 2) = (zb * gz(n - 1)).imag() - lam * (zb * chi(n - 1)).imag();
    return out;
}

}  // namespace acdisc
