#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

#include "acdisc/algebra.hpp"

namespace acdisc {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

// Real-linear operator on C^m: w -> A w + B conj(w).
struct RealLinearOp {
    Mat A, B;

    RealLinearOp() = default;
    RealLinearOp(Mat a, Mat b) : A(std::move(a)), B(std::move(b)) {
        if (A.rows() != B.rows() || A.cols() != B.cols())
            throw std::invalid_argument("RealLinearOp: block shape mismatch");
    }
    static RealLinearOp zero(int m) { return {Mat::Zero(m, m), Mat::Zero(m, m)}; }
    static RealLinearOp identity(int m) { return {Mat::Identity(m, m), Mat::Zero(m, m)}; }
    // w -> s w + t conj(w)
    static RealLinearOp scalar(cx s, cx t, int m) {
        return {s * Mat::Identity(m, m), t * Mat::Identity(m, m)};
    }

    int rows() const { return static_cast<int>(A.rows()); }
    int cols() const { return static_cast<int>(A.cols()); }

    Vec apply(const Vec& w) const { return A * w + B * w.conjugate(); }

    // this after o
    RealLinearOp compose(const RealLinearOp& o) const {
        return {A * o.A + B * o.B.conjugate(), A * o.B + B * o.A.conjugate()};
    }

    RealLinearOp operator+(const RealLinearOp& o) const { return {A + o.A, B + o.B}; }
    RealLinearOp operator-(const RealLinearOp& o) const { return {A - o.A, B - o.B}; }
    RealLinearOp scaled(cx s) const { return {s * A, s * B}; }

    // matrix on stacked real coordinates (Re w, Im w)
    RMat realified() const {
        int m = rows(), c = cols();
        RMat M(2 * m, 2 * c);
        M.topLeftCorner(m, c) = (A + B).real();
        M.topRightCorner(m, c) = (B - A).imag();
        M.bottomLeftCorner(m, c) = (A + B).imag();
        M.bottomRightCorner(m, c) = (A - B).real();
        return M;
    }
    static RealLinearOp from_realified(const RMat& M) {
        if (M.rows() % 2 != 0 || M.cols() % 2 != 0)
            throw std::invalid_argument("from_realified: odd size");
        int m = static_cast<int>(M.rows()) / 2, c = static_cast<int>(M.cols()) / 2;
        RMat m11 = M.topLeftCorner(m, c), m12 = M.topRightCorner(m, c);
        RMat m21 = M.bottomLeftCorner(m, c), m22 = M.bottomRightCorner(m, c);
        Mat A = 0.5 * ((m11 + m22).cast<cx>() + cx(0, 1) * (m21 - m12).cast<cx>());
        Mat B = 0.5 * ((m11 - m22).cast<cx>() + cx(0, 1) * (m21 + m12).cast<cx>());
        return {A, B};
    }

    RealLinearOp inverse() const {
        if (rows() != cols()) throw std::invalid_argument("RealLinearOp::inverse: not square");
        RMat M = realified();
        Eigen::FullPivLU<RMat> lu(M);
        if (!lu.isInvertible()) throw std::runtime_error("RealLinearOp::inverse: singular");
        return from_realified(lu.inverse());
    }

    double operator_norm() const {
        Eigen::JacobiSVD<RMat> svd(realified());
        return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
    }
    // ||J^2 + Id|| in operator norm
    double involution_defect() const {
        RealLinearOp sq = compose(*this);
        sq.A += Mat::Identity(rows(), cols());
        return sq.operator_norm();
    }
};

// Matrix with scalar PolyMap entries over a common variable set.
class MatrixPoly {
public:
    MatrixPoly() = default;
    MatrixPoly(int rows, int cols, int num_vars)
        : rows_(rows), cols_(cols), num_vars_(num_vars), e_(rows * cols, PolyMap(num_vars, 1)) {}

    static MatrixPoly constant(const Mat& m, int num_vars) {
        MatrixPoly r(static_cast<int>(m.rows()), static_cast<int>(m.cols()), num_vars);
        for (int i = 0; i < m.rows(); ++i)
            for (int j = 0; j < m.cols(); ++j)
                if (!is_exact_zero(m(i, j)))
                    r.at(i, j) = PolyMap::scalar_constant(num_vars, m(i, j));
        return r;
    }
    static MatrixPoly identity(int m, int num_vars) {
        return constant(Mat::Identity(m, m), num_vars);
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int num_vars() const { return num_vars_; }

    PolyMap& at(int i, int j) { return e_.at(static_cast<size_t>(i) * cols_ + j); }
    const PolyMap& at(int i, int j) const { return e_.at(static_cast<size_t>(i) * cols_ + j); }

    Mat eval(const std::vector<cx>& z) const {
        Mat m(rows_, cols_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) m(i, j) = at(i, j).eval_scalar(z);
        return m;
    }

    MatrixPoly operator+(const MatrixPoly& o) const {
        require_shape(o);
        MatrixPoly r = *this;
        for (size_t k = 0; k < e_.size(); ++k) r.e_[k] += o.e_[k];
        return r;
    }
    MatrixPoly operator-(const MatrixPoly& o) const { return *this + o.scaled(cx(-1.0)); }
    MatrixPoly scaled(cx s) const {
        MatrixPoly r = *this;
        for (auto& p : r.e_) p = p.scaled(s);
        return r;
    }
    MatrixPoly conjugated() const {
        MatrixPoly r = *this;
        for (auto& p : r.e_) p = p.conjugated();
        return r;
    }
    MatrixPoly transposed() const {
        MatrixPoly r(cols_, rows_, num_vars_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
        return r;
    }

    MatrixPoly operator*(const MatrixPoly& o) const {
        if (cols_ != o.rows_ || num_vars_ != o.num_vars_)
            throw std::invalid_argument("MatrixPoly: product shape");
        MatrixPoly r(rows_, o.cols_, num_vars_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < o.cols_; ++j)
                for (int k = 0; k < cols_; ++k)
                    if (!at(i, k).is_zero() && !o.at(k, j).is_zero())
                        r.at(i, j) += PolyMap::multiply(at(i, k), o.at(k, j));
        return r;
    }

    friend MatrixPoly operator*(const Mat& c, const MatrixPoly& m) {
        MatrixPoly r(static_cast<int>(c.rows()), m.cols_, m.num_vars_);
        for (int i = 0; i < c.rows(); ++i)
            for (int j = 0; j < m.cols_; ++j)
                for (int k = 0; k < c.cols(); ++k)
                    if (!is_exact_zero(c(i, k)) && !m.at(k, j).is_zero())
                        r.at(i, j) += m.at(k, j).scaled(c(i, k));
        return r;
    }
    friend MatrixPoly operator*(const MatrixPoly& m, const Mat& c) {
        MatrixPoly r(m.rows_, static_cast<int>(c.cols()), m.num_vars_);
        for (int i = 0; i < m.rows_; ++i)
            for (int j = 0; j < c.cols(); ++j)
                for (int k = 0; k < m.cols_; ++k)
                    if (!m.at(i, k).is_zero() && !is_exact_zero(c(k, j)))
                        r.at(i, j) += m.at(i, k).scaled(c(k, j));
        return r;
    }

    MatrixPoly truncated(int max_degree) const {
        MatrixPoly r = *this;
        for (auto& p : r.e_) p = p.truncated(max_degree);
        return r;
    }
    MatrixPoly composed(const std::vector<PolyMap>& args) const {
        MatrixPoly r(rows_, cols_, args.empty() ? num_vars_ : args[0].num_vars());
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j)
                if (!at(i, j).is_zero()) r.at(i, j) = at(i, j).composed(args);
        return r;
    }
    double max_abs_coeff() const {
        double m = 0.0;
        for (const auto& p : e_) m = std::max(m, p.max_abs_coeff());
        return m;
    }
    int max_total_degree() const {
        int d = 0;
        for (const auto& p : e_) d = std::max(d, p.max_total_degree());
        return d;
    }
    bool is_zero() const {
        for (const auto& p : e_)
            if (!p.is_zero()) return false;
        return true;
    }

private:
    void require_shape(const MatrixPoly& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_ || num_vars_ != o.num_vars_)
            throw std::invalid_argument("MatrixPoly: shape mismatch");
    }

    int rows_ = 0, cols_ = 0, num_vars_ = 1;
    std::vector<PolyMap> e_;
};

// Point-dependent real-linear operator w -> A(z) w + B(z) conj(w).
struct RealLinearField {
    MatrixPoly A, B;

    static RealLinearField identity(int m, int num_vars) {
        return {MatrixPoly::identity(m, num_vars), MatrixPoly(m, m, num_vars)};
    }
    static RealLinearField constant(const RealLinearOp& op, int num_vars) {
        return {MatrixPoly::constant(op.A, num_vars), MatrixPoly::constant(op.B, num_vars)};
    }

    int dim() const { return A.rows(); }
    RealLinearOp eval(const std::vector<cx>& z) const { return {A.eval(z), B.eval(z)}; }

    // pointwise composition: this(z) after o(z)
    RealLinearField compose(const RealLinearField& o) const {
        return {A * o.A + B * o.B.conjugated(), A * o.B + B * o.A.conjugated()};
    }
    RealLinearField operator+(const RealLinearField& o) const { return {A + o.A, B + o.B}; }
    RealLinearField operator-(const RealLinearField& o) const { return {A - o.A, B - o.B}; }
    RealLinearField scaled(cx s) const { return {A.scaled(s), B.scaled(s)}; }
    RealLinearField truncated(int max_degree) const {
        return {A.truncated(max_degree), B.truncated(max_degree)};
    }
    RealLinearField composed(const std::vector<PolyMap>& args) const {
        return {A.composed(args), B.composed(args)};
    }

    // graded inverse: valid when the constant term is invertible; exact through max_degree
    RealLinearField inverse_graded(int max_degree) const {
        int m = dim();
        int nv = A.num_vars();
        RealLinearOp c0 = eval(std::vector<cx>(nv, cx(0.0)));
        RealLinearField cinv = constant(c0.inverse(), nv);
        RealLinearField r = cinv.compose(*this) - identity(m, nv);  // vanishes at 0
        RealLinearField acc = identity(m, nv);
        RealLinearField pw = identity(m, nv);
        int min_deg = 1;
        for (int k = 1; k <= max_degree && min_deg * k <= max_degree; ++k) {
            pw = pw.compose(r).truncated(max_degree);
            acc = acc + pw.scaled(cx(k % 2 == 0 ? 1.0 : -1.0));
        }
        return acc.compose(cinv).truncated(max_degree);
    }
};

}  // namespace acdisc
