#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/QR>

#include "acdisc/rhmodel.hpp"

namespace acdisc {

// Signal for homotopy step failures that call for a smaller step rather than
// an abort: chart exit, conormal frame breakdown, damping stall, iteration cap.
struct StepRejected : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Homotopy data: standard-form target pair, the centre/direction/scale
// normalization targets, and the solver policy.
struct ContinuationProblem {
    AcsModel structure;
    HypersurfaceModel surface;
    std::vector<cx> target_point;      // (0,...,0,x), x > 0: centre on the normal axis
    std::vector<cx> target_direction;  // desired real line of the centre x-derivative
    int N = 8;                         // degree cap of the unknown coefficients
    std::vector<double> schedule{0.05, 0.1, 0.2, 0.4, 0.7, 1.0};
    double newton_tol = 1e-10;
    double residual_tol = 1e-8;
    int max_newton = 25;
    double min_step = 1e-3;      // bisection floor for rejected steps
    double chart_radius = 1.0;   // admissible base-point radius
    double lambda_target = 1.0;  // conormal scale pinned at the centre

    ContinuationProblem(AcsModel j, HypersurfaceModel s, std::vector<cx> zo, std::vector<cx> v)
        : structure(std::move(j)), surface(std::move(s)), target_point(std::move(zo)),
          target_direction(std::move(v)) {}

    void validate() const {
        const int n = structure.n;
        if (surface.n != n || static_cast<int>(target_point.size()) != n ||
            static_cast<int>(target_direction.size()) != n)
            throw std::invalid_argument("ContinuationProblem: dimension mismatch");
        if (N < 4 || N > 16)
            throw std::invalid_argument("ContinuationProblem: need 4 <= N <= 16");
        StandardFormReport rep = is_standard_form(structure, surface, 1e-9);
        if (!rep.ok)
            throw std::invalid_argument("ContinuationProblem: pair not in standard form: " +
                                        rep.violations.front());
        for (int k = 0; k + 1 < n; ++k)
            if (std::abs(target_point[k]) > 1e-12)
                throw std::invalid_argument(
                    "ContinuationProblem: centre must lie on the normal axis");
        const cx zn = target_point[n - 1];
        if (!(zn.real() > 0.0) || std::abs(zn.imag()) > 1e-12)
            throw std::invalid_argument(
                "ContinuationProblem: centre needs a positive real normal part");
        if (!(std::abs(zn) < chart_radius))
            throw std::invalid_argument("ContinuationProblem: centre leaves the chart");
        if (!(surface.defining_function().eval_scalar(target_point).real() > 0.0))
            throw std::invalid_argument(
                "ContinuationProblem: centre is not on the positive side of the surface");
        double vmax = 0.0, vtan = 0.0;
        for (int k = 0; k < n; ++k) {
            const double m = std::abs(target_direction[k]);
            if (!std::isfinite(m))
                throw std::invalid_argument("ContinuationProblem: direction not finite");
            vmax = std::max(vmax, m);
            if (k + 1 < n) vtan = std::max(vtan, m);
        }
        if (vtan <= 1e-10 * vmax || vmax == 0.0)
            throw std::invalid_argument(
                "ContinuationProblem: direction has no tangential component");
        if (schedule.empty() || schedule.front() > 0.1 + 1e-12 ||
            std::abs(schedule.back() - 1.0) > 1e-12)
            throw std::invalid_argument(
                "ContinuationProblem: schedule must start at or below 0.1 and end at 1");
        for (size_t i = 0; i < schedule.size(); ++i)
            if (!(schedule[i] > 0.0) || schedule[i] > 1.0 ||
                (i > 0 && schedule[i] <= schedule[i - 1]))
                throw std::invalid_argument(
                    "ContinuationProblem: schedule must increase within (0, 1]");
        if (!(newton_tol > 0.0) || !(residual_tol > 0.0) || !(min_step > 0.0) ||
            !(chart_radius > 0.0) || !(lambda_target > 0.0) || max_newton < 1)
            throw std::invalid_argument("ContinuationProblem: bad solver policy");
    }
};

struct ContinuationStep {
    double t = 0.0;
    int iterations = 0;
    double residual = 0.0;  // max-norm at the end of the attempt
    bool accepted = false;
    std::string note;  // failure reason for rejected attempts
};

struct ContinuationTrace {
    std::vector<ContinuationStep> steps;
    std::vector<LiftedDisc> snapshots;  // discs at accepted steps, in step order
    bool converged = false;
    std::string message;
};

struct NewtonInfo {
    int iterations = 0;
    double residual = std::numeric_limits<double>::quiet_NaN();
    double condition = 0.0;        // estimate from the last factorization
    std::vector<double> history;   // max-norm residual per accepted iterate
};

struct StationarityGroup {
    std::string name;
    double residual = 0.0;
    bool pass = false;
};

struct StationarityReport {
    StationarityGroup projection, interior, boundary;
    double tol = 0.0;
    bool pass = false;
};

namespace detail {

// Interior system of the homotopy: the literal cotangent lift with the
// antilinear fibre-fibre block negated. The sign matches the boundary value
// problem the model operators solve; off the model the remaining blocks stay
// literal, so this is a residual recipe rather than an involutive structure.
struct DiscSystem {
    int n = 1;
    MatrixPoly t1, t2;
};

inline DiscSystem effective_system(const AcsModel& j, double tol_involution = 1e-8) {
    LiftedStructure s = lift_structure(j, tol_involution);
    DiscSystem out{s.n, s.T1, s.T2};
    for (int r = s.n; r < 2 * s.n; ++r)
        for (int c = s.n; c < 2 * s.n; ++c) out.t2.at(r, c) = out.t2.at(r, c).scaled(cx(-1.0));
    return out;
}

// real coordinates for the full coefficient rectangle p, q <= cap of (f, g)
struct CoeffLayout {
    int n = 0, cap = 0;

    int real_count() const { return 4 * n * (cap + 1) * (cap + 1); }
    int slot(int p, int q, int k, bool fibre) const {
        return ((p * (cap + 1) + q) * 2 + (fibre ? 1 : 0)) * n + k;
    }

    RVec pack(const LiftedDisc& d) const {
        const DiscMap f = d.f.with_cap(cap), g = d.g.with_cap(cap);
        RVec x = RVec::Zero(real_count());
        for (int p = 0; p <= cap; ++p)
            for (int q = 0; q <= cap; ++q)
                for (int k = 0; k < n; ++k) {
                    const cx cf = f.coeff(p, q, k), cg = g.coeff(p, q, k);
                    const int sf = 2 * slot(p, q, k, false), sg = 2 * slot(p, q, k, true);
                    x(sf) = cf.real();
                    x(sf + 1) = cf.imag();
                    x(sg) = cg.real();
                    x(sg + 1) = cg.imag();
                }
        return x;
    }

    LiftedDisc unpack(const RVec& x) const {
        DiscMap f(n, cap), g(n, cap);
        for (int p = 0; p <= cap; ++p)
            for (int q = 0; q <= cap; ++q)
                for (int k = 0; k < n; ++k) {
                    const int sf = 2 * slot(p, q, k, false), sg = 2 * slot(p, q, k, true);
                    f.set_coeff(p, q, k, cx(x(sf), x(sf + 1)));
                    g.set_coeff(p, q, k, cx(x(sg), x(sg + 1)));
                }
        return {f, g};
    }
};

// coefficientwise tangential frame change: f -> diag(u, 1) f, g -> conj(diag(u, 1)) g
inline LiftedDisc apply_frame(const Mat& u, const LiftedDisc& d) {
    const int n = d.dim(), cap = d.f.degree_cap();
    if (u.rows() != n - 1 || u.cols() != n - 1)
        throw std::invalid_argument("apply_frame: frame must be (n-1)x(n-1)");
    DiscMap f(n, cap), g(n, cap);
    for (int p = 0; p <= cap; ++p)
        for (int q = 0; q <= cap; ++q) {
            for (int al = 0; al + 1 < n; ++al) {
                cx vf(0.0), vg(0.0);
                for (int be = 0; be + 1 < n; ++be) {
                    vf += u(al, be) * d.f.coeff(p, q, be);
                    vg += std::conj(u(al, be)) * d.g.coeff(p, q, be);
                }
                f.set_coeff(p, q, al, vf);
                g.set_coeff(p, q, al, vg);
            }
            f.set_coeff(p, q, n - 1, d.f.coeff(p, q, n - 1));
            g.set_coeff(p, q, n - 1, d.g.coeff(p, q, n - 1));
        }
    return {f, g};
}

// deterministic unitary frame with prescribed first column
inline Mat frame_with_first_column(const Vec& w) {
    const int m = static_cast<int>(w.size());
    if (!(w.norm() > 0.0))
        throw std::invalid_argument("frame_with_first_column: zero direction");
    Mat u = Mat::Zero(m, m);
    u.col(0) = w / w.norm();
    int filled = 1;
    for (int k = 0; k < m && filled < m; ++k) {
        Vec c = Vec::Zero(m);
        c(k) = 1.0;
        for (int j = 0; j < filled; ++j) c -= u.col(j) * u.col(j).dot(c);
        const double nn = c.norm();
        if (nn > 0.25) u.col(filled++) = c / nn;
    }
    if (filled < m) throw std::logic_error("frame_with_first_column: completion failed");
    return u;
}

// collocation data of one homotopy parameter: dilated pair, effective system
// with its entrywise Wirtinger derivatives, nodes, and normalization targets
struct ContinuationWorkspace {
    int n, cap;
    double t;
    AcsModel jt;
    HypersurfaceModel rt;
    PolyMap rho;
    std::vector<PolyMap> rho_dz;  // holomorphic Wirtinger derivatives of rho
    DiscSystem sys;
    std::vector<MatrixPoly> d1h, d1a, d2h, d2a;  // d t1 / d u_v, d t1 / d conj u_v, same for t2
    std::vector<cx> inodes, bnodes;
    std::vector<cx> zo;
    cx a;
    RVec uhat;  // unit realified direction of the transformed target
    double lambda_target, chart_radius;
    CoeffLayout layout;

    ContinuationWorkspace(double t_, const ContinuationProblem& prob)
        : n(prob.structure.n), cap(prob.N), t(t_), jt(prob.structure), rt(prob.surface),
          rho(prob.structure.n, 1) {
        if (t_ < 0.0 || t_ > 1.0)
            throw std::invalid_argument("continuation: t must lie in [0, 1]");
        if (t_ == 0.0) {
            jt = osculating_pair(prob.structure, prob.surface, 1e-9).structure();
            rt = HypersurfaceModel::quadric_model(n);
        } else if (t_ < 1.0) {
            auto pair = dilate(prob.structure, prob.surface, t_, 1e-9);
            jt = pair.first;
            rt = pair.second;
        }
        rho = rt.defining_function();
        for (int k = 0; k < n; ++k) rho_dz.push_back(rho.wirtinger(k, false));
        sys = effective_system(jt);

        const int m = 2 * n;
        for (int v = 0; v < m; ++v) {
            MatrixPoly e1h(m, m, m), e1a(m, m, m), e2h(m, m, m), e2a(m, m, m);
            for (int r = 0; r < m; ++r)
                for (int c = 0; c < m; ++c) {
                    e1h.at(r, c) = sys.t1.at(r, c).wirtinger(v, false);
                    e1a.at(r, c) = sys.t1.at(r, c).wirtinger(v, true);
                    e2h.at(r, c) = sys.t2.at(r, c).wirtinger(v, false);
                    e2a.at(r, c) = sys.t2.at(r, c).wirtinger(v, true);
                }
            d1h.push_back(std::move(e1h));
            d1a.push_back(std::move(e1a));
            d2h.push_back(std::move(e2h));
            d2a.push_back(std::move(e2a));
        }

        // Gauss radii for the interior grid, roots of unity on the boundary
        static const double radii[8] = {
            0.0198550717512319, 0.1016667612931866, 0.2372337950418355, 0.4082826787521751,
            0.5917173212478249, 0.7627662049581645, 0.8983332387068134, 0.9801449282487681};
        const int na = 2 * cap + 1, nb = 4 * cap + 1;
        for (double r : radii)
            for (int j = 0; j < na; ++j) inodes.push_back(std::polar(r, 2.0 * M_PI * j / na));
        for (int k = 0; k < nb; ++k) bnodes.push_back(std::polar(1.0, 2.0 * M_PI * k / nb));

        zo = prob.target_point;
        a = cx(std::sqrt(2.0 * zo[n - 1].real()), 0.0);
        Vec v(n);
        for (int k = 0; k < n; ++k) v(k) = prob.target_direction[k];
        const Vec u = complex_action(cx(1.0) / a, v, jt, zo);
        double utan = 0.0;
        for (int k = 0; k + 1 < n; ++k) utan = std::max(utan, std::abs(u(k)));
        if (utan <= 1e-10 * u.cwiseAbs().maxCoeff())
            throw std::invalid_argument(
                "continuation: transformed direction has no tangential component");
        uhat = RVec(m);
        for (int k = 0; k < n; ++k) {
            uhat(k) = u(k).real();
            uhat(n + k) = u(k).imag();
        }
        uhat /= uhat.norm();
        lambda_target = prob.lambda_target;
        chart_radius = prob.chart_radius;
        layout = CoeffLayout{n, cap};
    }

    int interior_rows() const { return 4 * n * static_cast<int>(inodes.size()); }
    int boundary_rows() const { return 2 * n * static_cast<int>(bnodes.size()); }
    int norm_rows() const { return 4 * n + 1; }
    int rows() const { return interior_rows() + boundary_rows() + norm_rows(); }

    void require_chart(const std::vector<cx>& fz) const {
        for (const cx& v : fz)
            if (!(std::abs(v) <= chart_radius))
                throw StepRejected("step rejected: base disc leaves the chart");
    }

    RVec interior(const LiftedDisc& fd) const {
        const DiscMap fp = fd.f.wirtinger(true), fm = fd.f.wirtinger(false);
        const DiscMap gp = fd.g.wirtinger(true), gm = fd.g.wirtinger(false);
        const int m = 2 * n;
        RVec out(interior_rows());
        std::vector<cx> u(m);
        Vec s(m), dv(m);
        int row = 0;
        for (cx z : inodes) {
            const std::vector<cx> fz = fd.f.eval(z), gz = fd.g.eval(z);
            require_chart(fz);
            const std::vector<cx> fpz = fp.eval(z), fmz = fm.eval(z);
            const std::vector<cx> gpz = gp.eval(z), gmz = gm.eval(z);
            for (int k = 0; k < n; ++k) {
                u[k] = fz[k];
                u[n + k] = gz[k];
                s(k) = fpz[k] + fmz[k];
                dv(k) = fpz[k] - fmz[k];
                s(n + k) = gpz[k] + gmz[k];
                dv(n + k) = gpz[k] - gmz[k];
            }
            const Mat m1 = sys.t1.eval(u), m2 = sys.t2.eval(u);
            const Vec r = m1 * s + cx(0.0, 1.0) * dv + m2 * s.conjugate();
            for (int k = 0; k < m; ++k) {
                out(row++) = r(k).real();
                out(row++) = r(k).imag();
            }
        }
        return out;
    }

    // boundary rows mirror conormal_residual with the surface data hoisted out
    // of the node loop; equivalence is pinned by a test
    RVec tail(const LiftedDisc& fd) const {
        RVec out(boundary_rows() + norm_rows());
        int row = 0;
        double gmax = 0.0;
        for (cx z : bnodes)
            for (cx v : fd.g.eval(z)) gmax = std::max(gmax, std::abs(v));
        const double tol_section = 1e-8 * gmax + 1e-300;
        for (cx z : bnodes) {
            const std::vector<cx> fz = fd.f.eval(z), gzv = fd.g.eval(z);
            require_chart(fz);
            Vec gz(n), dcov(n);
            for (int k = 0; k < n; ++k) {
                gz(k) = gzv[k];
                dcov(k) = rho_dz[k].eval_scalar(fz);
            }
            const Vec chi = complex_action(z, dcov, jt, fz, VectorSide::cotangent);
            const cx zb = std::conj(z);
            const double den = (zb * chi(n - 1)).real();
            if (std::abs(den) < 1e-12 * std::max(1.0, dcov.cwiseAbs().maxCoeff()))
                throw StepRejected("step rejected: conormal frame degenerate on the boundary");
            const double lam = (zb * gz(n - 1)).real() / den;
            if (std::abs(lam) < tol_section)
                throw StepRejected("step rejected: fibre path hits the zero section");
            out(row++) = rho.eval_scalar(fz).real();
            for (int al = 0; al + 1 < n; ++al) {
                const cx rc = gz(al) - lam * chi(al);
                out(row++) = rc.real();
                out(row++) = rc.imag();
            }
            out(row++) = (zb * gz(n - 1)).imag() - lam * (zb * chi(n - 1)).imag();
        }

        // normalization rows: centre, direction projected off the target line, scale
        const std::vector<cx> f0 = fd.f.eval(cx(0.0));
        for (int k = 0; k < n; ++k) {
            const cx d = f0[k] - zo[k];
            out(row++) = d.real();
            out(row++) = d.imag();
        }
        const std::vector<cx> dxm = fd.f.wirtinger(false).eval(cx(0.0));
        const std::vector<cx> dxp = fd.f.wirtinger(true).eval(cx(0.0));
        Vec dx(n);
        for (int k = 0; k < n; ++k) dx(k) = dxm[k] + dxp[k];
        const Vec w = complex_action(cx(1.0) / a, dx, jt, f0);
        RVec wr(2 * n);
        for (int k = 0; k < n; ++k) {
            wr(k) = w(k).real();
            wr(n + k) = w(k).imag();
        }
        const RVec perp = wr - uhat.dot(wr) * uhat;
        for (int k = 0; k < 2 * n; ++k) out(row++) = perp(k);
        out(row++) = fd.g.wirtinger(false).eval(cx(0.0))[n - 1].real() - lambda_target;
        return out;
    }

    RVec residual(const LiftedDisc& fd) const {
        RVec r(rows());
        r.head(interior_rows()) = interior(fd);
        r.tail(boundary_rows() + norm_rows()) = tail(fd);
        return r;
    }

    // interior columns by the chain rule through the lift blocks; boundary and
    // normalization columns by forward differences in coefficient space
    RMat jacobian(const LiftedDisc& fd) const {
        const int m = 2 * n, cols = layout.real_count();
        RMat jac = RMat::Zero(rows(), cols);
        const DiscMap fp = fd.f.wirtinger(true), fm = fd.f.wirtinger(false);
        const DiscMap gp = fd.g.wirtinger(true), gm = fd.g.wirtinger(false);
        std::vector<cx> u(m);
        Vec s(m), dv(m);
        std::vector<Vec> dh(m), da(m);
        std::vector<cx> zp(cap + 1), zq(cap + 1);
        int row = 0;
        for (cx z : inodes) {
            const std::vector<cx> fz = fd.f.eval(z), gz = fd.g.eval(z);
            require_chart(fz);
            const std::vector<cx> fpz = fp.eval(z), fmz = fm.eval(z);
            const std::vector<cx> gpz = gp.eval(z), gmz = gm.eval(z);
            for (int k = 0; k < n; ++k) {
                u[k] = fz[k];
                u[n + k] = gz[k];
                s(k) = fpz[k] + fmz[k];
                dv(k) = fpz[k] - fmz[k];
                s(n + k) = gpz[k] + gmz[k];
                dv(n + k) = gpz[k] - gmz[k];
            }
            const Mat m1 = sys.t1.eval(u), m2 = sys.t2.eval(u);
            const Vec sc = s.conjugate();
            for (int v = 0; v < m; ++v) {
                dh[v] = d1h[v].eval(u) * s + d2h[v].eval(u) * sc;
                da[v] = d1a[v].eval(u) * s + d2a[v].eval(u) * sc;
            }
            zp[0] = zq[0] = cx(1.0);
            for (int p = 1; p <= cap; ++p) zp[p] = zp[p - 1] * z;
            for (int q = 1; q <= cap; ++q) zq[q] = zq[q - 1] * std::conj(z);
            for (int p = 0; p <= cap; ++p)
                for (int q = 0; q <= cap; ++q) {
                    const cx mono = zp[p] * zq[q];
                    const cx mp = (q > 0) ? cx(static_cast<double>(q)) * zp[p] * zq[q - 1] : cx(0.0);
                    const cx mm = (p > 0) ? cx(static_cast<double>(p)) * zp[p - 1] * zq[q] : cx(0.0);
                    const cx sig = mp + mm, del = mp - mm;
                    for (int v = 0; v < m; ++v) {
                        const int c0 = 2 * layout.slot(p, q, v % n, v >= n);
                        Vec colh = mono * dh[v] + sig * m1.col(v);
                        colh(v) += cx(0.0, 1.0) * del;
                        const Vec cola = std::conj(mono) * da[v] + std::conj(sig) * m2.col(v);
                        const Vec cre = colh + cola;
                        const Vec cim = cx(0.0, 1.0) * (colh - cola);
                        for (int r2 = 0; r2 < m; ++r2) {
                            jac(row + 2 * r2, c0) = cre(r2).real();
                            jac(row + 2 * r2 + 1, c0) = cre(r2).imag();
                            jac(row + 2 * r2, c0 + 1) = cim(r2).real();
                            jac(row + 2 * r2 + 1, c0 + 1) = cim(r2).imag();
                        }
                    }
                }
            row += 2 * m;
        }

        const RVec x0 = layout.pack(fd);
        const RVec t0 = tail(fd);
        for (int c = 0; c < cols; ++c) {
            const double h = 1e-7 * (1.0 + std::abs(x0(c)));
            RVec x = x0;
            x(c) += h;
            const RVec tc = tail(layout.unpack(x));
            jac.col(c).tail(t0.size()) = (tc - t0) / h;
        }
        return jac;
    }
};

}  // namespace detail

// Stacked real residual of the t-problem: interior block (effective system at
// the Gauss-radius grid), boundary block (surface value and conormal alignment
// at roots of unity), normalization block (centre, direction, scale targets).
inline RVec assemble_residual(double t, const LiftedDisc& fd, const ContinuationProblem& prob) {
    prob.validate();
    return detail::ContinuationWorkspace(t, prob).residual(fd);
}

// Seed disc matched to the targets: the explicit model solution in the unitary
// frame sending e_1 to the tangential part of the requested direction.
inline LiftedDisc initial_disc(const ContinuationProblem& prob) {
    prob.validate();
    const int n = prob.structure.n;
    const OsculatingPair osc = osculating_pair(prob.structure, prob.surface, 1e-9);
    Vec vtan(n - 1);
    for (int k = 0; k + 1 < n; ++k) vtan(k) = prob.target_direction[k];
    const Mat u = detail::frame_with_first_column(vtan);
    Mat a2 = u.adjoint() * osc.A * u.conjugate();
    a2 = 0.5 * (a2 - a2.transpose().eval());  // strip rounding residue
    const double ar = std::sqrt(2.0 * prob.target_point[n - 1].real());
    const LiftedDisc d =
        explicit_disc(ModelProblem(n, a2, prob.N), BasePoint(cx(ar, 0.0), prob.lambda_target));
    return detail::apply_frame(u, d);
}

// Damped Gauss-Newton on the coefficient rectangle, rank-revealing least
// squares per step. Throws StepRejected on chart exit, conormal breakdown,
// damping stall, or the iteration cap; plain runtime_error when the Jacobian
// is ill-conditioned (the condition estimate is reported in the message).
inline LiftedDisc newton_solve(double t, const LiftedDisc& fd0, const ContinuationProblem& prob,
                               NewtonInfo* info = nullptr) {
    prob.validate();
    const detail::ContinuationWorkspace ws(t, prob);
    LiftedDisc fd(fd0.f.with_cap(ws.cap), fd0.g.with_cap(ws.cap));
    RVec x = ws.layout.pack(fd);
    RVec r = ws.residual(fd);
    double rn = r.lpNorm<Eigen::Infinity>();
    NewtonInfo local;
    NewtonInfo& out = info ? *info : local;
    out = NewtonInfo{};
    out.residual = rn;
    out.history.push_back(rn);
    while (rn > prob.newton_tol) {
        if (out.iterations >= prob.max_newton) {
            std::ostringstream os;
            os << "newton_solve: residual " << rn << " after " << out.iterations << " iterations";
            throw StepRejected(os.str());
        }
        const RMat jac = ws.jacobian(fd);
        Eigen::ColPivHouseholderQR<RMat> qr(jac);
        const int mm = static_cast<int>(std::min(jac.rows(), jac.cols()));
        const double rtop = std::abs(qr.matrixR()(0, 0));
        const double rbot = std::abs(qr.matrixR()(mm - 1, mm - 1));
        out.condition = rbot > 0.0 ? rtop / rbot : std::numeric_limits<double>::infinity();
        if (!(out.condition < 1e14)) {
            std::ostringstream os;
            os << "newton_solve: jacobian ill-conditioned (estimate " << out.condition << ")";
            throw std::runtime_error(os.str());
        }
        const RVec step = qr.solve(-r);
        const double rnorm = r.norm();
        bool advanced = false;
        std::string last;
        double alpha = 1.0;
        for (int half = 0; half < 12 && !advanced; ++half, alpha *= 0.5) {
            const RVec xt = x + alpha * step;
            const LiftedDisc ft = ws.layout.unpack(xt);
            try {
                const RVec rt = ws.residual(ft);
                const double rtn = rt.lpNorm<Eigen::Infinity>();
                if (rtn <= prob.newton_tol || rt.norm() < rnorm) {
                    x = xt;
                    fd = ft;
                    r = rt;
                    rn = rtn;
                    advanced = true;
                }
            } catch (const StepRejected& e) {
                last = e.what();
            }
        }
        if (!advanced)
            throw StepRejected(last.empty() ? "newton_solve: damping stalled without decrease"
                                            : last);
        ++out.iterations;
        out.residual = rn;
        out.history.push_back(rn);
    }
    return fd;
}

// Stationarity certificate for a candidate disc: (a) it projects to a genuine
// disc of the chart, (b) its lift solves the interior system on a refined
// interior grid, (c) the boundary values pair into the conormal bundle off the
// zero section (surface value, alignment, and section checks).
inline StationarityReport verify_stationary(const AcsModel& j, const HypersurfaceModel& rho,
                                            const LiftedDisc& fd, double tol) {
    if (j.n != rho.n || fd.dim() != j.n)
        throw std::invalid_argument("verify_stationary: dimension mismatch");
    const int cap = std::max(fd.f.degree_cap(), 4);
    const int na = 4 * cap + 1;
    const double chart = 1.0;
    StationarityReport rep;
    rep.tol = tol;

    double excess = 0.0, rint = 0.0;
    const detail::DiscSystem sys = detail::effective_system(j);
    const DiscMap res = detail::holo_residual_core(sys.t1, sys.t2, fd.stacked());
    for (int i = 0; i < 12; ++i) {
        const double r = (i + 1) / 13.0;
        for (int k = 0; k < na; ++k) {
            const cx z = std::polar(r, 2.0 * M_PI * k / na);
            for (cx v : fd.f.eval(z)) excess = std::max(excess, std::abs(v) - chart);
            for (cx v : res.eval(z)) rint = std::max(rint, std::abs(v));
        }
    }

    double rbnd = 0.0;
    for (int k = 0; k < 4 * na; ++k) {
        const cx z = std::polar(1.0, 2.0 * M_PI * k / (4 * na));
        for (cx v : fd.f.eval(z)) excess = std::max(excess, std::abs(v) - chart);
        try {
            const ConormalResidual c = conormal_residual(rho, j, fd, z);
            rbnd = std::max(rbnd, std::abs(c.r0));
            rbnd = std::max(rbnd, c.r.cwiseAbs().maxCoeff());
        } catch (const std::runtime_error&) {
            rbnd = std::numeric_limits<double>::infinity();
        }
    }

    excess = std::max(excess, 0.0);
    rep.projection = {"projection", excess, excess <= tol};
    rep.interior = {"interior", rint, rint <= tol};
    rep.boundary = {"boundary", rbnd, rbnd <= tol};
    rep.pass = rep.projection.pass && rep.interior.pass && rep.boundary.pass;
    return rep;
}

// Homotopy continuation from the osculating model to the target pair. Rejected
// steps bisect the schedule down to min_step; the final disc is certified with
// verify_stationary against the t = 1 pair.
inline std::pair<LiftedDisc, ContinuationTrace> continue_disc(const ContinuationProblem& prob) {
    prob.validate();
    ContinuationTrace trace;
    LiftedDisc disc = initial_disc(prob);
    double t_prev = 0.0;
    std::vector<double> agenda(prob.schedule.rbegin(), prob.schedule.rend());
    while (!agenda.empty()) {
        const double tt = agenda.back();
        NewtonInfo info;
        try {
            LiftedDisc next = newton_solve(tt, disc, prob, &info);
            trace.steps.push_back({tt, info.iterations, info.residual, true, ""});
            trace.snapshots.push_back(next);
            disc = next;
            t_prev = tt;
            agenda.pop_back();
        } catch (const std::runtime_error& e) {
            trace.steps.push_back({tt, info.iterations, info.residual, false, e.what()});
            if (tt - t_prev <= prob.min_step) {
                std::ostringstream os;
                os << "no progress at t = " << tt << " with minimal step: " << e.what();
                trace.message = os.str();
                trace.converged = false;
                return {disc, trace};
            }
            agenda.push_back(0.5 * (t_prev + tt));
        }
    }
    const StationarityReport rep =
        verify_stationary(prob.structure, prob.surface, disc, prob.residual_tol);
    trace.converged = rep.pass;
    trace.message =
        rep.pass ? "reached t = 1" : "reached t = 1 but stationarity verification failed";
    return {disc, trace};
}

}  // namespace acdisc
