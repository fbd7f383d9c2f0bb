#pragma once

#include <random>
#include <string>
#include <utility>

#include "acdisc/reallinear.hpp"

namespace acdisc {

// coefficients indexed [i][j][k], all in 0..n-1; slot (i,j,k) multiplies the
// variable z_k (mixed) or conj(z_k) (anti) in entry (i,j) of the antilinear block
class Tensor3 {
public:
    Tensor3() = default;
    explicit Tensor3(int n) : n_(n), v_(static_cast<size_t>(n) * n * n, cx(0.0)) {}

    int dim() const { return n_; }
    cx& at(int i, int j, int k) { return v_.at(idx(i, j, k)); }
    cx at(int i, int j, int k) const { return v_.at(idx(i, j, k)); }
    double max_abs() const {
        double m = 0.0;
        for (const auto& c : v_) m = std::max(m, std::abs(c));
        return m;
    }

private:
    size_t idx(int i, int j, int k) const {
        if (i < 0 || i >= n_ || j < 0 || j >= n_ || k < 0 || k >= n_)
            throw std::out_of_range("Tensor3::at");
        return (static_cast<size_t>(i) * n_ + j) * n_ + k;
    }
    int n_ = 0;
    std::vector<cx> v_;
};

inline PolyMap degree_slice(const PolyMap& p, int lo, int hi) {
    PolyMap r(p.num_vars(), p.value_dim());
    for (const auto& [ix, v] : p.terms()) {
        int d = ix.total_degree();
        if (d >= lo && d <= hi) r.add_term(ix, v);
    }
    return r;
}

inline MatrixPoly degree_slice(const MatrixPoly& m, int lo, int hi) {
    MatrixPoly r(m.rows(), m.cols(), m.num_vars());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) r.at(i, j) = degree_slice(m.at(i, j), lo, hi);
    return r;
}

// Almost complex structure in graded chart form: J(z) = J_st + linear antilinear
// part from the L tensors + entries of degree >= 2. Component n-1 plays the role
// of the distinguished ("normal") coordinate.
struct AcsModel {
    int n;
    Tensor3 L_mixed;      // coefficient of z_k in antilinear entry (i,j)
    Tensor3 L_anti;       // coefficient of conj(z_k) in antilinear entry (i,j)
    MatrixPoly higher1;   // linear-block entries of degree >= 2
    MatrixPoly higher2;   // antilinear-block entries of degree >= 2

    explicit AcsModel(int n_)
        : n(n_), L_mixed(n_), L_anti(n_), higher1(n_, n_, n_), higher2(n_, n_, n_) {
        if (n_ < 2) throw std::invalid_argument("AcsModel: need n >= 2");
    }

    static AcsModel standard(int n_) { return AcsModel(n_); }

    // antilinear block confined to the last row with coefficients conj(z^beta):
    // squares to -Id exactly for any matrix a
    static AcsModel model_structure(int n_, const Mat& a) {
        AcsModel j(n_);
        if (a.rows() != n_ - 1 || a.cols() != n_ - 1)
            throw std::invalid_argument("model_structure: matrix must be (n-1)x(n-1)");
        for (int al = 0; al < n_ - 1; ++al)
            for (int be = 0; be < n_ - 1; ++be) j.L_anti.at(n_ - 1, al, be) = a(al, be);
        return j;
    }

    MatrixPoly linear_block() const {  // J1(z) = i Id + higher1
        MatrixPoly m = MatrixPoly::constant(cx(0.0, 1.0) * Mat::Identity(n, n), n);
        return m + higher1;
    }
    MatrixPoly antilinear_block() const {  // J2(z) = L-part + higher2
        MatrixPoly m(n, n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    cx cm = L_mixed.at(i, j, k), ca = L_anti.at(i, j, k);
                    if (!is_exact_zero(cm))
                        m.at(i, j) += PolyMap::variable(n, k, false).scaled(cm);
                    if (!is_exact_zero(ca))
                        m.at(i, j) += PolyMap::variable(n, k, true).scaled(ca);
                }
        return m + higher2;
    }
    RealLinearField field() const { return {linear_block(), antilinear_block()}; }
    RealLinearOp eval(const std::vector<cx>& z) const { return field().eval(z); }

    // rebuild the graded representation from evaluated blocks; sub-tolerance
    // off-grade residue (constants, linear terms in the linear block) is dropped
    static AcsModel from_fields(int n_, const MatrixPoly& j1, const MatrixPoly& j2,
                                double tol_grade = 1e-9) {
        AcsModel out(n_);
        std::vector<cx> zero(n_, cx(0.0));
        Mat c1 = j1.eval(zero) - cx(0.0, 1.0) * Mat::Identity(n_, n_);
        Mat c2 = j2.eval(zero);
        double defect = std::max({c1.cwiseAbs().maxCoeff(), c2.cwiseAbs().maxCoeff(),
                                  degree_slice(j1, 1, 1).max_abs_coeff()});
        if (defect > tol_grade)
            throw std::invalid_argument("AcsModel::from_fields: blocks not in graded form, defect " +
                                        std::to_string(defect));
        MatrixPoly lin2 = degree_slice(j2, 1, 1);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j)
                for (int k = 0; k < n_; ++k) {
                    BiIndex zk{std::vector<int>(n_, 0), std::vector<int>(n_, 0)};
                    zk.p[k] = 1;
                    out.L_mixed.at(i, j, k) = lin2.at(i, j).coeff(zk)[0];
                    std::swap(zk.p, zk.q);
                    out.L_anti.at(i, j, k) = lin2.at(i, j).coeff(zk)[0];
                }
        int top1 = std::max(2, j1.max_total_degree()), top2 = std::max(2, j2.max_total_degree());
        out.higher1 = degree_slice(j1, 2, top1);
        out.higher2 = degree_slice(j2, 2, top2);
        return out;
    }
};

// Defining function rho = 2 Re(z^n) - Re(K z'.z') - <H z', conj z'> + remainder
struct HypersurfaceModel {
    int n;
    Mat K;              // symmetric (n-1)x(n-1)
    Mat H;              // Hermitian (n-1)x(n-1)
    PolyMap remainder;  // real-valued, vanishing order >= 3
    int orientation = 1;

    explicit HypersurfaceModel(int n_)
        : n(n_), K(Mat::Zero(n_ - 1, n_ - 1)), H(Mat::Identity(n_ - 1, n_ - 1)),
          remainder(n_, 1) {
        if (n_ < 2) throw std::invalid_argument("HypersurfaceModel: need n >= 2");
    }

    static HypersurfaceModel quadric_model(int n_) { return HypersurfaceModel(n_); }

    void validate(double tol = 1e-12) const {
        if ((K - K.transpose()).cwiseAbs().maxCoeff() > tol)
            throw std::invalid_argument("HypersurfaceModel: K not symmetric");
        if ((H - H.adjoint()).cwiseAbs().maxCoeff() > tol)
            throw std::invalid_argument("HypersurfaceModel: H not Hermitian");
        if (!remainder.is_zero() && remainder.min_total_degree() < 3)
            throw std::invalid_argument("HypersurfaceModel: remainder order < 3");
        if (remainder.real_defect() > tol)
            throw std::invalid_argument("HypersurfaceModel: remainder not real-valued");
    }

    PolyMap defining_function() const {
        int n1 = n - 1;
        PolyMap r(n, 1);
        BiIndex ix{std::vector<int>(n, 0), std::vector<int>(n, 0)};
        ix.p[n1] = 1;
        r.add_scalar_term(ix, cx(1.0));
        std::swap(ix.p, ix.q);
        r.add_scalar_term(ix, cx(1.0));
        for (int a = 0; a < n1; ++a)
            for (int b = 0; b < n1; ++b) {
                if (!is_exact_zero(K(a, b))) {
                    BiIndex kk{std::vector<int>(n, 0), std::vector<int>(n, 0)};
                    kk.p[a] += 1;
                    kk.p[b] += 1;
                    r.add_scalar_term(kk, -0.5 * K(a, b));
                    std::swap(kk.p, kk.q);
                    r.add_scalar_term(kk, -0.5 * std::conj(K(a, b)));
                }
                if (!is_exact_zero(H(a, b))) {
                    BiIndex hh{std::vector<int>(n, 0), std::vector<int>(n, 0)};
                    hh.p[a] = 1;
                    hh.q[b] = 1;
                    r.add_scalar_term(hh, -H(a, b));
                }
            }
        return r + remainder;
    }

    // rebuild from a scalar defining function in graded shape; checks the linear
    // part is exactly the model one and no quadratic terms touch the normal slot
    static HypersurfaceModel from_defining_function(int n_, const PolyMap& p,
                                                    double tol_grade = 1e-9) {
        double scale = std::max(1.0, p.max_abs_coeff());
        if (p.real_defect() > tol_grade * scale)
            throw std::invalid_argument("HypersurfaceModel: input not real-valued");
        PolyMap sym = (p + p.conjugated()).scaled(cx(0.5));
        HypersurfaceModel out(n_);
        out.K = Mat::Zero(n_ - 1, n_ - 1);
        out.H = Mat::Zero(n_ - 1, n_ - 1);
        PolyMap rem(n_, 1);
        double defect = 0.0;
        for (const auto& [ix, v] : sym.terms()) {
            int d = ix.total_degree();
            cx c = v[0];
            if (d >= 3) {
                rem.add_term(ix, v);
                continue;
            }
            int pn = ix.p[n_ - 1], qn = ix.q[n_ - 1];
            if (d == 1 && pn == 1) {
                defect = std::max(defect, std::abs(c - cx(1.0)));
                continue;
            }
            if (d == 1 && qn == 1) continue;  // conjugate partner, checked above
            if (d == 0 || d == 1 || pn > 0 || qn > 0) {
                defect = std::max(defect, std::abs(c));
                continue;
            }
            // quadratic in the tangential slots
            int pa = -1, pb = -1, qa = -1, qb = -1;
            for (int k = 0; k < n_ - 1; ++k) {
                if (ix.p[k] == 2) pa = pb = k;
                if (ix.p[k] == 1) (pa < 0 ? pa : pb) = k;
                if (ix.q[k] == 2) qa = qb = k;
                if (ix.q[k] == 1) (qa < 0 ? qa : qb) = k;
            }
            if (pa >= 0 && pb >= 0 && qa < 0) {
                cx kval = (pa == pb) ? -2.0 * c : -c;
                out.K(pa, pb) = kval;
                out.K(pb, pa) = kval;
            } else if (pa >= 0 && qa >= 0 && pb < 0) {
                out.H(pa, qa) = -c;
            }
            // pure conjugate quadratic recovered from symmetry of K
        }
        BiIndex lin{std::vector<int>(n_, 0), std::vector<int>(n_, 0)};
        lin.p[n_ - 1] = 1;
        if (sym.coeff(lin)[0] == cx(0.0)) defect = std::max(defect, 1.0);
        if (defect > tol_grade * scale)
            throw std::invalid_argument(
                "HypersurfaceModel::from_defining_function: not graded, defect " +
                std::to_string(defect));
        out.remainder = rem;
        out.validate(1e-9 * scale);
        return out;
    }
};

struct OsculatingPair {
    int n;
    Mat A;  // antisymmetric (n-1)x(n-1)

    OsculatingPair(int n_, Mat a) : n(n_), A(std::move(a)) {
        if (A.rows() != n - 1 || A.cols() != n - 1)
            throw std::invalid_argument("OsculatingPair: shape");
        if ((A + A.transpose()).cwiseAbs().maxCoeff() > 1e-12)
            throw std::invalid_argument("OsculatingPair: matrix not antisymmetric");
    }
    AcsModel structure() const { return AcsModel::model_structure(n, A); }
    HypersurfaceModel surface() const { return HypersurfaceModel::quadric_model(n); }
};

// ---------------------------------------------------------------------------
// validation

struct AcsValidationReport {
    double max_residual = 0.0;
    std::vector<cx> worst_point;
    double tol = 0.0;
    bool pass = false;
};

// fixed set of 100 points in the polydisc of radius 0.5, same on every call
inline std::vector<std::vector<cx>> default_validation_samples(int n) {
    std::mt19937_64 gen(12345);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    std::vector<std::vector<cx>> pts(100, std::vector<cx>(n));
    for (auto& p : pts)
        for (auto& z : p) {
            double re = u(gen), im = u(gen);
            z = cx(re, im);
        }
    return pts;
}

inline AcsValidationReport validate_acs(const AcsModel& j,
                                        const std::vector<std::vector<cx>>& samples,
                                        double tol = 1e-10) {
    AcsValidationReport rep;
    rep.tol = tol;
    RealLinearField f = j.field();
    for (const auto& z : samples) {
        double r = f.eval(z).involution_defect();
        if (r >= rep.max_residual) {
            rep.max_residual = r;
            rep.worst_point = z;
        }
    }
    rep.pass = rep.max_residual <= tol;
    return rep;
}

// ---------------------------------------------------------------------------
// Levi form

namespace detail {

// theta = d(rho) o J as the component functions Theta_k with theta(w) = 2 Re(sum Theta_k w_k)
inline std::vector<PolyMap> contact_components(const AcsModel& j, const HypersurfaceModel& s) {
    int n = j.n;
    PolyMap rho = s.defining_function();
    MatrixPoly j1 = j.linear_block(), j2 = j.antilinear_block();
    std::vector<PolyMap> theta(n, PolyMap(n, 1));
    for (int k = 0; k < n; ++k)
        for (int jj = 0; jj < n; ++jj) {
            PolyMap rj = rho.wirtinger(jj, false);
            if (!rj.is_zero() && !j1.at(jj, k).is_zero())
                theta[k] += PolyMap::multiply(rj, j1.at(jj, k));
            PolyMap rjb = rho.wirtinger(jj, true);
            PolyMap j2c = j2.at(jj, k).conjugated();
            if (!rjb.is_zero() && !j2c.is_zero()) theta[k] += PolyMap::multiply(rjb, j2c);
        }
    return theta;
}

}  // namespace detail

// basis of the complex-tangency distribution at x: kernel of d(rho) and d(rho) o J
inline std::vector<Vec> holo_tangent(const AcsModel& j, const HypersurfaceModel& s,
                                     const std::vector<cx>& x, double tol_on_surface = 1e-9) {
    int n = j.n;
    PolyMap rho = s.defining_function();
    cx rx = rho.eval_scalar(x);
    if (std::abs(rx) > tol_on_surface)
        throw std::invalid_argument("holo_tangent: point not on the hypersurface");
    std::vector<cx> drho(n), theta(n);
    for (int k = 0; k < n; ++k) drho[k] = rho.wirtinger(k, false).eval_scalar(x);
    auto tc = detail::contact_components(j, s);
    for (int k = 0; k < n; ++k) theta[k] = tc[k].eval_scalar(x);
    double dscale = 0.0;
    for (const auto& c : drho) dscale = std::max(dscale, std::abs(c));
    if (dscale < 1e-12) throw std::runtime_error("holo_tangent: degenerate differential");

    RMat m(2, 2 * n);
    for (int k = 0; k < n; ++k) {
        m(0, k) = 2.0 * drho[k].real();
        m(0, n + k) = -2.0 * drho[k].imag();
        m(1, k) = 2.0 * theta[k].real();
        m(1, n + k) = -2.0 * theta[k].imag();
    }
    Eigen::FullPivLU<RMat> lu(m);
    RMat ker = lu.kernel();
    if (ker.cols() != 2 * n - 2)
        throw std::runtime_error("holo_tangent: tangency distribution has wrong rank");
    Eigen::HouseholderQR<RMat> qr(ker);
    RMat q = qr.householderQ() * RMat::Identity(2 * n, ker.cols());
    std::vector<Vec> basis;
    for (int c = 0; c < q.cols(); ++c) {
        Vec v(n);
        for (int k = 0; k < n; ++k) v(k) = cx(q(k, c), q(n + k, c));
        basis.push_back(v);
    }
    return basis;
}

// Levi form oracle: -d theta(v, Jv) at x with theta = d(rho) o J, evaluated by
// exact Wirtinger differentiation of the Theta components
inline double levi_numeric(const AcsModel& j, const HypersurfaceModel& s,
                           const std::vector<cx>& x, const Vec& v) {
    int n = j.n;
    if (v.size() != n) throw std::invalid_argument("levi_numeric: vector size");
    PolyMap rho = s.defining_function();
    auto tc = detail::contact_components(j, s);
    cx dr(0.0), th(0.0);
    for (int k = 0; k < n; ++k) {
        dr += rho.wirtinger(k, false).eval_scalar(x) * v(k);
        th += tc[k].eval_scalar(x) * v(k);
    }
    double vscale = std::max(1.0, v.cwiseAbs().maxCoeff());
    if (std::abs(2.0 * dr.real()) > 1e-8 * vscale || std::abs(2.0 * th.real()) > 1e-8 * vscale)
        throw std::invalid_argument("levi_numeric: vector not complex-tangent at x");

    Vec w = j.eval(x).apply(v);
    cx acc(0.0);
    for (int k = 0; k < n; ++k)
        for (int m = 0; m < n; ++m) {
            cx dm = tc[k].wirtinger(m, false).eval_scalar(x);
            cx dmb = tc[k].wirtinger(m, true).eval_scalar(x);
            acc += dm * (v(m) * w(k) - w(m) * v(k));
            acc += dmb * (std::conj(v(m)) * w(k) - std::conj(w(m)) * v(k));
        }
    return -2.0 * acc.real();
}

// difference the graded antilinear row induces in the Levi form at 0
inline double levi_correction(const AcsModel& j, const Vec& v) {
    int n1 = j.n - 1;
    if (v.size() != n1) throw std::invalid_argument("levi_correction: vector size");
    cx acc(0.0);
    for (int a = 0; a < n1; ++a)
        for (int b = 0; b < n1; ++b)
            acc += std::conj(v(a)) * v(b) *
                   (j.L_mixed.at(n1, a, b) - std::conj(j.L_mixed.at(n1, b, a)));
    return (cx(0.0, 2.0) * acc).real();
}

// ---------------------------------------------------------------------------
// standard form

struct StandardFormReport {
    bool ok = true;
    std::vector<std::string> violations;
};

inline StandardFormReport is_standard_form(const AcsModel& j, const HypersurfaceModel& s,
                                           double tol = 1e-12) {
    StandardFormReport rep;
    int n1 = j.n - 1;
    auto flag = [&rep](const std::string& msg) {
        rep.ok = false;
        rep.violations.push_back(msg);
    };
    for (int a = 0; a < n1; ++a)
        for (int b = 0; b < n1; ++b) {
            if (std::abs(j.L_mixed.at(n1, a, b)) > tol)
                flag("mixed antilinear coefficient (" + std::to_string(a + 1) + "," +
                     std::to_string(b + 1) + ") of the normal row is nonzero");
            cx symm = j.L_anti.at(n1, a, b) + j.L_anti.at(n1, b, a);
            if (std::abs(symm) > tol && a <= b)
                flag("antilinear coefficient (" + std::to_string(a + 1) + "," +
                     std::to_string(b + 1) + ") of the normal row is not antisymmetric");
        }
    if (s.K.cwiseAbs().maxCoeff() > tol) flag("quadratic holomorphic part K is nonzero");
    if ((s.H - Mat::Identity(n1, n1)).cwiseAbs().maxCoeff() > tol)
        flag("Hermitian part H is not the identity");
    return rep;
}

struct NormalizationResult {
    AcsModel structure;
    HypersurfaceModel surface;
    std::vector<PolyMap> chart;  // original coordinates as functions of the new ones
};

namespace detail {

inline std::vector<PolyMap> identity_chart(int n) {
    std::vector<PolyMap> c;
    for (int k = 0; k < n; ++k) c.push_back(PolyMap::variable(n, k, false));
    return c;
}

inline std::vector<PolyMap> compose_charts(const std::vector<PolyMap>& outer,
                                           const std::vector<PolyMap>& inner) {
    std::vector<PolyMap> r;
    for (const auto& c : outer) r.push_back(c.composed(inner));
    return r;
}

inline RealLinearField chart_differential(const std::vector<PolyMap>& chart) {
    int n = static_cast<int>(chart.size());
    MatrixPoly a(n, n, n), b(n, n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            a.at(i, j) = chart[i].wirtinger(j, false);
            b.at(i, j) = chart[i].wirtinger(j, true);
        }
    return {a, b};
}

// pushforward of (J, rho) through z = chart(w); structure retained to degree 4,
// defining function to degree 5
inline std::pair<AcsModel, HypersurfaceModel> pushforward(const AcsModel& j,
                                                          const HypersurfaceModel& s,
                                                          const std::vector<PolyMap>& chart) {
    RealLinearField dphi = chart_differential(chart);
    RealLinearField dphi_inv = dphi.inverse_graded(4);
    RealLinearField jw = j.field().composed(chart).truncated(4);
    RealLinearField jp = dphi_inv.compose(jw).truncated(4).compose(dphi).truncated(4);
    PolyMap rp = s.defining_function().composed(chart).truncated(5);
    return {AcsModel::from_fields(j.n, jp.A, jp.B),
            HypersurfaceModel::from_defining_function(j.n, rp)};
}

}  // namespace detail

// Three successive coordinate changes: a quadratic shear of the normal
// coordinate removing the non-antisymmetric normal-row coefficients, a linear
// change making the Hermitian part the identity, and a holomorphic shear
// removing the symmetric quadratic part.
inline NormalizationResult normalize_to_standard_form(const AcsModel& j,
                                                      const HypersurfaceModel& s) {
    int n = j.n, n1 = j.n - 1;
    s.validate();

    std::vector<PolyMap> chart1 = detail::identity_chart(n);
    for (int a = 0; a < n1; ++a)
        for (int b = 0; b < n1; ++b) {
            cx cm = j.L_mixed.at(n1, a, b);
            if (!is_exact_zero(cm)) {
                BiIndex ix{std::vector<int>(n, 0), std::vector<int>(n, 0)};
                ix.q[a] += 1;
                ix.p[b] += 1;
                chart1[n1].add_scalar_term(ix, cx(0.0, 0.5) * cm);
            }
            cx ca = j.L_anti.at(n1, a, b);
            if (!is_exact_zero(ca)) {
                BiIndex ix{std::vector<int>(n, 0), std::vector<int>(n, 0)};
                ix.q[a] += 1;
                ix.q[b] += 1;
                chart1[n1].add_scalar_term(ix, cx(0.0, 0.25) * ca);
            }
        }
    auto [j1, s1] = detail::pushforward(j, s, chart1);

    Mat u = Mat::Identity(n1, n1);
    if ((s1.H - Mat::Identity(n1, n1)).cwiseAbs().maxCoeff() > 0.0) {
        Eigen::SelfAdjointEigenSolver<Mat> es(s1.H.conjugate());
        if (es.eigenvalues().minCoeff() <= 0.0)
            throw std::runtime_error("normalize_to_standard_form: not strongly pseudoconvex");
        u = es.eigenvectors() *
            es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
            es.eigenvectors().adjoint();
    }
    std::vector<PolyMap> chart2 = detail::identity_chart(n);
    for (int a = 0; a < n1; ++a) {
        PolyMap row(n, 1);
        for (int b = 0; b < n1; ++b)
            if (!is_exact_zero(u(a, b))) row += PolyMap::variable(n, b, false).scaled(u(a, b));
        chart2[a] = row;
    }
    auto [j2, s2] = detail::pushforward(j1, s1, chart2);

    std::vector<PolyMap> chart3 = detail::identity_chart(n);
    for (int a = 0; a < n1; ++a)
        for (int b = 0; b < n1; ++b) {
            cx kv = s2.K(a, b);
            if (!is_exact_zero(kv)) {
                BiIndex ix{std::vector<int>(n, 0), std::vector<int>(n, 0)};
                ix.p[a] += 1;
                ix.p[b] += 1;
                chart3[n1].add_scalar_term(ix, 0.5 * kv);
            }
        }
    auto [j3, s3] = detail::pushforward(j2, s2, chart3);

    NormalizationResult out{std::move(j3), std::move(s3),
                            detail::compose_charts(chart1, detail::compose_charts(chart2, chart3))};
    StandardFormReport rep = is_standard_form(out.structure, out.surface, 1e-9);
    if (!rep.ok)
        throw std::runtime_error("normalize_to_standard_form: residual violation: " +
                                 rep.violations.front());
    return out;
}

inline OsculatingPair osculating_pair(const AcsModel& j, const HypersurfaceModel& s,
                                      double tol = 1e-12) {
    StandardFormReport rep = is_standard_form(j, s, tol);
    if (!rep.ok)
        throw std::invalid_argument("osculating_pair: pair not in standard form: " +
                                    rep.violations.front());
    int n1 = j.n - 1;
    Mat a(n1, n1);
    for (int al = 0; al < n1; ++al)
        for (int be = 0; be < n1; ++be) a(al, be) = j.L_anti.at(j.n - 1, al, be);
    a = 0.5 * (a - a.transpose().eval());  // strip sub-tolerance symmetric residue
    return {j.n, a};
}

// anisotropic dilation: tangential slots scale like 1/t, the normal one like
// 1/t^2; coefficients converge to the osculating model as t -> 0
inline std::pair<AcsModel, HypersurfaceModel> dilate(const AcsModel& j,
                                                     const HypersurfaceModel& s, double t,
                                                     double tol = 1e-12) {
    if (t == 0.0) throw std::invalid_argument("dilate: t must be nonzero, use osculating_pair");
    if (std::abs(t) > 1.0) throw std::invalid_argument("dilate: need 0 < |t| <= 1");
    StandardFormReport rep = is_standard_form(j, s, tol);
    if (!rep.ok)
        throw std::invalid_argument("dilate: pair not in standard form: " +
                                    rep.violations.front());
    int n = j.n;
    std::vector<PolyMap> sub;  // w -> (t w', t^2 w^n)
    std::vector<double> weight(n, 1.0);
    weight[n - 1] = 2.0;
    for (int k = 0; k < n; ++k)
        sub.push_back(PolyMap::variable(n, k, false).scaled(std::pow(t, weight[k])));

    MatrixPoly a1 = j.linear_block().composed(sub), a2 = j.antilinear_block().composed(sub);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            double f = std::pow(t, weight[k] - weight[i]);
            a1.at(i, k) = a1.at(i, k).scaled(f);
            a2.at(i, k) = a2.at(i, k).scaled(f);
        }
    PolyMap rp = s.defining_function().composed(sub).scaled(1.0 / (t * t));
    return {AcsModel::from_fields(n, a1, a2),
            HypersurfaceModel::from_defining_function(n, rp)};
}

inline double coefficient_distance(const AcsModel& a, const AcsModel& b) {
    double d = (a.linear_block() - b.linear_block()).max_abs_coeff();
    return std::max(d, (a.antilinear_block() - b.antilinear_block()).max_abs_coeff());
}

inline double coefficient_distance(const HypersurfaceModel& a, const HypersurfaceModel& b) {
    return (a.defining_function() - b.defining_function()).max_abs_coeff();
}

}  // namespace acdisc
