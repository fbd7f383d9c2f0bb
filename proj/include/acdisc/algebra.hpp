#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace acdisc {

using cx = std::complex<double>;

inline bool is_exact_zero(const cx& c) { return c.real() == 0.0 && c.imag() == 0.0; }

// Exponents of (z_1..z_n) and (conj z_1..conj z_n).
struct BiIndex {
    std::vector<int> p, q;

    int total_degree() const {
        return std::accumulate(p.begin(), p.end(), 0) + std::accumulate(q.begin(), q.end(), 0);
    }
    friend bool operator<(const BiIndex& a, const BiIndex& b) {
        if (a.p != b.p) return a.p < b.p;
        return a.q < b.q;
    }
    friend bool operator==(const BiIndex& a, const BiIndex& b) { return a.p == b.p && a.q == b.q; }
};

// Polynomial map in n complex variables and their conjugates, vector-valued.
// Coefficients stay exact: only exact zeros are pruned, never epsilon-small ones.
class PolyMap {
public:
    PolyMap() = default;
    PolyMap(int num_vars, int value_dim) : num_vars_(num_vars), value_dim_(value_dim) {
        if (num_vars < 1 || value_dim < 1) throw std::invalid_argument("PolyMap: bad dimensions");
    }

    static PolyMap constant(int num_vars, const std::vector<cx>& value) {
        PolyMap r(num_vars, static_cast<int>(value.size()));
        r.add_term(BiIndex{std::vector<int>(num_vars, 0), std::vector<int>(num_vars, 0)}, value);
        return r;
    }
    static PolyMap scalar_constant(int num_vars, cx value) { return constant(num_vars, {value}); }
    // z_j or conj(z_j) as a scalar map
    static PolyMap variable(int num_vars, int j, bool conjugated = false) {
        if (j < 0 || j >= num_vars) throw std::invalid_argument("PolyMap::variable: index");
        BiIndex ix{std::vector<int>(num_vars, 0), std::vector<int>(num_vars, 0)};
        (conjugated ? ix.q : ix.p)[j] = 1;
        PolyMap r(num_vars, 1);
        r.add_term(ix, {cx(1.0, 0.0)});
        return r;
    }

    int num_vars() const { return num_vars_; }
    int value_dim() const { return value_dim_; }
    const std::map<BiIndex, std::vector<cx>>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    std::vector<cx> coeff(const BiIndex& ix) const {
        auto it = terms_.find(ix);
        if (it == terms_.end()) return std::vector<cx>(value_dim_, cx(0.0));
        return it->second;
    }

    void add_term(const BiIndex& ix, const std::vector<cx>& value) {
        check_index(ix);
        if (static_cast<int>(value.size()) != value_dim_)
            throw std::invalid_argument("PolyMap::add_term: value size");
        auto it = terms_.find(ix);
        if (it == terms_.end()) {
            bool all_zero = std::all_of(value.begin(), value.end(), is_exact_zero);
            if (!all_zero) terms_.emplace(ix, value);
            return;
        }
        bool all_zero = true;
        for (int k = 0; k < value_dim_; ++k) {
            it->second[k] += value[k];
            if (!is_exact_zero(it->second[k])) all_zero = false;
        }
        if (all_zero) terms_.erase(it);
    }
    void add_scalar_term(const BiIndex& ix, cx value) { add_term(ix, {value}); }

    PolyMap& operator+=(const PolyMap& o) {
        require_same_shape(o);
        for (const auto& [ix, v] : o.terms_) add_term(ix, v);
        return *this;
    }
    friend PolyMap operator+(PolyMap a, const PolyMap& b) { a += b; return a; }
    friend PolyMap operator-(PolyMap a, const PolyMap& b) { a += b.scaled(cx(-1.0)); return a; }

    PolyMap scaled(cx s) const {
        PolyMap r(num_vars_, value_dim_);
        if (is_exact_zero(s)) return r;
        for (const auto& [ix, v] : terms_) {
            std::vector<cx> w(v);
            for (auto& c : w) c *= s;
            r.terms_.emplace(ix, std::move(w));
        }
        return r;
    }

    // complex conjugate of the map: swaps (p,q), conjugates coefficients
    PolyMap conjugated() const {
        PolyMap r(num_vars_, value_dim_);
        for (const auto& [ix, v] : terms_) {
            std::vector<cx> w(v);
            for (auto& c : w) c = std::conj(c);
            r.terms_.emplace(BiIndex{ix.q, ix.p}, std::move(w));
        }
        return r;
    }

    PolyMap component(int k) const {
        if (k < 0 || k >= value_dim_) throw std::invalid_argument("PolyMap::component");
        PolyMap r(num_vars_, 1);
        for (const auto& [ix, v] : terms_)
            if (!is_exact_zero(v[k])) r.terms_.emplace(ix, std::vector<cx>{v[k]});
        return r;
    }

    // product; at least one factor must be scalar-valued
    static PolyMap multiply(const PolyMap& a, const PolyMap& b) {
        if (a.num_vars_ != b.num_vars_) throw std::invalid_argument("PolyMap::multiply: vars");
        if (a.value_dim_ != 1 && b.value_dim_ != 1)
            throw std::invalid_argument("PolyMap::multiply: needs a scalar factor");
        const PolyMap& s = (a.value_dim_ == 1) ? a : b;
        const PolyMap& v = (a.value_dim_ == 1) ? b : a;
        PolyMap r(a.num_vars_, v.value_dim_);
        for (const auto& [si, sv] : s.terms_)
            for (const auto& [vi, vv] : v.terms_) {
                BiIndex ix = vi;
                for (int j = 0; j < a.num_vars_; ++j) { ix.p[j] += si.p[j]; ix.q[j] += si.q[j]; }
                std::vector<cx> w(vv);
                for (auto& c : w) c *= sv[0];
                r.add_term(ix, w);
            }
        return r;
    }
    friend PolyMap operator*(const PolyMap& a, const PolyMap& b) { return multiply(a, b); }

    // formal partial derivative with respect to z_var (or conj z_var)
    PolyMap wirtinger(int var, bool conjugated) const {
        if (var < 0 || var >= num_vars_) throw std::invalid_argument("PolyMap::wirtinger: index");
        PolyMap r(num_vars_, value_dim_);
        for (const auto& [ix, v] : terms_) {
            int e = conjugated ? ix.q[var] : ix.p[var];
            if (e == 0) continue;
            BiIndex jx = ix;
            (conjugated ? jx.q : jx.p)[var] = e - 1;
            std::vector<cx> w(v);
            for (auto& c : w) c *= static_cast<double>(e);
            r.add_term(jx, w);
        }
        return r;
    }

    std::vector<cx> eval(const std::vector<cx>& z) const {
        if (static_cast<int>(z.size()) != num_vars_)
            throw std::invalid_argument("PolyMap::eval: point dimension");
        std::vector<cx> zb(z.size());
        for (size_t j = 0; j < z.size(); ++j) zb[j] = std::conj(z[j]);
        std::vector<cx> out(value_dim_, cx(0.0));
        for (const auto& [ix, v] : terms_) {
            cx m(1.0, 0.0);
            for (int j = 0; j < num_vars_; ++j) {
                for (int e = 0; e < ix.p[j]; ++e) m *= z[j];
                for (int e = 0; e < ix.q[j]; ++e) m *= zb[j];
            }
            for (int k = 0; k < value_dim_; ++k) out[k] += m * v[k];
        }
        return out;
    }
    cx eval_scalar(const std::vector<cx>& z) const {
        if (value_dim_ != 1) throw std::logic_error("PolyMap::eval_scalar: not scalar");
        return eval(z)[0];
    }

    PolyMap truncated(int max_total_degree) const {
        PolyMap r(num_vars_, value_dim_);
        for (const auto& [ix, v] : terms_)
            if (ix.total_degree() <= max_total_degree) r.terms_.emplace(ix, v);
        return r;
    }

    // substitute z_j := args[j] (scalar maps in a common new variable set)
    PolyMap composed(const std::vector<PolyMap>& args) const {
        if (static_cast<int>(args.size()) != num_vars_)
            throw std::invalid_argument("PolyMap::composed: argument count");
        int nv = args[0].num_vars();
        for (const auto& a : args)
            if (a.value_dim() != 1 || a.num_vars() != nv)
                throw std::invalid_argument("PolyMap::composed: arguments must be scalar, same vars");
        // power tables per variable, computed on demand
        std::vector<std::vector<PolyMap>> pw(num_vars_), pwc(num_vars_);
        auto power = [&](int j, int e, bool conj_side) -> const PolyMap& {
            auto& tab = conj_side ? pwc[j] : pw[j];
            if (tab.empty()) {
                tab.push_back(PolyMap::scalar_constant(nv, cx(1.0)));
                tab.push_back(conj_side ? args[j].conjugated() : args[j]);
            }
            while (static_cast<int>(tab.size()) <= e) tab.push_back(multiply(tab.back(), tab[1]));
            return tab[e];
        };
        PolyMap r(nv, value_dim_);
        for (const auto& [ix, v] : terms_) {
            PolyMap m = PolyMap::scalar_constant(nv, cx(1.0));
            for (int j = 0; j < num_vars_; ++j) {
                if (ix.p[j] > 0) m = multiply(m, power(j, ix.p[j], false));
                if (ix.q[j] > 0) m = multiply(m, power(j, ix.q[j], true));
            }
            for (const auto& [mi, mv] : m.terms_) {
                std::vector<cx> w(v);
                for (auto& c : w) c *= mv[0];
                r.add_term(mi, w);
            }
        }
        return r;
    }

    int max_total_degree() const {
        int d = 0;
        for (const auto& [ix, v] : terms_) d = std::max(d, ix.total_degree());
        return d;
    }
    int min_total_degree() const {
        int d = terms_.empty() ? 0 : std::numeric_limits<int>::max();
        for (const auto& [ix, v] : terms_) d = std::min(d, ix.total_degree());
        return d;
    }
    double max_abs_coeff() const {
        double m = 0.0;
        for (const auto& [ix, v] : terms_)
            for (const auto& c : v) m = std::max(m, std::abs(c));
        return m;
    }
    // deviation from coeff(p,q) = conj(coeff(q,p)); zero for genuinely real-valued maps
    double real_defect() const {
        double m = 0.0;
        for (const auto& [ix, v] : terms_) {
            auto w = coeff(BiIndex{ix.q, ix.p});
            for (int k = 0; k < value_dim_; ++k) m = std::max(m, std::abs(v[k] - std::conj(w[k])));
        }
        return m;
    }

private:
    void check_index(const BiIndex& ix) const {
        if (static_cast<int>(ix.p.size()) != num_vars_ || static_cast<int>(ix.q.size()) != num_vars_)
            throw std::invalid_argument("PolyMap: index arity");
        for (int j = 0; j < num_vars_; ++j)
            if (ix.p[j] < 0 || ix.q[j] < 0) throw std::invalid_argument("PolyMap: negative exponent");
    }
    void require_same_shape(const PolyMap& o) const {
        if (num_vars_ != o.num_vars_ || value_dim_ != o.value_dim_)
            throw std::invalid_argument("PolyMap: shape mismatch");
    }

    int num_vars_ = 1;
    int value_dim_ = 1;
    std::map<BiIndex, std::vector<cx>> terms_;
};

// Map of the closed unit disc into C^m as a polynomial in (zeta, conj zeta),
// dense (N+1)^2 coefficient table. N stays small, clarity over asymptotics.
class DiscMap {
public:
    DiscMap() = default;
    DiscMap(int value_dim, int degree_cap) : value_dim_(value_dim), cap_(degree_cap) {
        if (value_dim < 1 || degree_cap < 0 || degree_cap > 128)
            throw std::invalid_argument("DiscMap: bad shape");
        c_.assign(static_cast<size_t>(cap_ + 1) * (cap_ + 1) * value_dim_, cx(0.0));
    }

    int value_dim() const { return value_dim_; }
    int degree_cap() const { return cap_; }

    cx coeff(int p, int q, int k = 0) const {
        if (p < 0 || q < 0) return cx(0.0);
        if (p > cap_ || q > cap_) return cx(0.0);
        return c_[idx(p, q, k)];
    }
    void set_coeff(int p, int q, int k, cx v) { c_[checked_idx(p, q, k)] = v; }
    void set_coeff(int p, int q, cx v) { set_coeff(p, q, 0, v); }
    void add_coeff(int p, int q, int k, cx v) { c_[checked_idx(p, q, k)] += v; }

    DiscMap& operator+=(const DiscMap& o) {
        if (o.value_dim_ != value_dim_) throw std::invalid_argument("DiscMap: dim mismatch");
        if (o.cap_ > cap_) throw std::invalid_argument("DiscMap: cap mismatch in +=");
        for (int p = 0; p <= o.cap_; ++p)
            for (int q = 0; q <= o.cap_; ++q)
                for (int k = 0; k < value_dim_; ++k) c_[idx(p, q, k)] += o.c_[o.idx(p, q, k)];
        return *this;
    }
    friend DiscMap operator+(DiscMap a, const DiscMap& b) {
        if (b.cap_ > a.cap_) { DiscMap bb = b; bb += a; return bb; }
        a += b; return a;
    }
    friend DiscMap operator-(DiscMap a, const DiscMap& b) { return a + b.scaled(cx(-1.0)); }

    DiscMap scaled(cx s) const {
        DiscMap r(*this);
        for (auto& v : r.c_) v *= s;
        return r;
    }

    DiscMap conjugated() const {
        DiscMap r(value_dim_, cap_);
        for (int p = 0; p <= cap_; ++p)
            for (int q = 0; q <= cap_; ++q)
                for (int k = 0; k < value_dim_; ++k) r.c_[r.idx(q, p, k)] = std::conj(c_[idx(p, q, k)]);
        return r;
    }

    // d/dzeta (conjugated=false) or d/dzetabar (conjugated=true)
    DiscMap wirtinger(bool conjugated) const {
        DiscMap r(value_dim_, cap_);
        for (int p = 0; p <= cap_; ++p)
            for (int q = 0; q <= cap_; ++q)
                for (int k = 0; k < value_dim_; ++k) {
                    cx v = c_[idx(p, q, k)];
                    if (is_exact_zero(v)) continue;
                    if (!conjugated && p > 0) r.c_[idx(p - 1, q, k)] += static_cast<double>(p) * v;
                    if (conjugated && q > 0) r.c_[idx(p, q - 1, k)] += static_cast<double>(q) * v;
                }
        return r;
    }

    std::vector<cx> eval(cx zeta) const {
        cx zb = std::conj(zeta);
        std::vector<cx> out(value_dim_, cx(0.0));
        // Horner in zeta, inner Horner in zetabar
        for (int k = 0; k < value_dim_; ++k) {
            cx acc(0.0);
            for (int p = cap_; p >= 0; --p) {
                cx row(0.0);
                for (int q = cap_; q >= 0; --q) row = row * zb + c_[idx(p, q, k)];
                acc = acc * zeta + row;
            }
            out[k] = acc;
        }
        return out;
    }
    cx eval_scalar(cx zeta) const {
        if (value_dim_ != 1) throw std::logic_error("DiscMap::eval_scalar: not scalar");
        return eval(zeta)[0];
    }

    DiscMap component(int k) const {
        if (k < 0 || k >= value_dim_) throw std::invalid_argument("DiscMap::component");
        DiscMap r(1, cap_);
        for (int p = 0; p <= cap_; ++p)
            for (int q = 0; q <= cap_; ++q) r.c_[r.idx(p, q, 0)] = c_[idx(p, q, k)];
        return r;
    }
    void set_component(int k, const DiscMap& s) {
        if (s.value_dim() != 1 || s.degree_cap() > cap_)
            throw std::invalid_argument("DiscMap::set_component: shape");
        for (int p = 0; p <= cap_; ++p)
            for (int q = 0; q <= cap_; ++q) c_[idx(p, q, k)] = s.coeff(p, q);
    }

    // product; at least one factor scalar; exact cap = sum of caps
    static DiscMap multiply(const DiscMap& a, const DiscMap& b) {
        if (a.value_dim_ != 1 && b.value_dim_ != 1)
            throw std::invalid_argument("DiscMap::multiply: needs a scalar factor");
        const DiscMap& s = (a.value_dim_ == 1) ? a : b;
        const DiscMap& v = (a.value_dim_ == 1) ? b : a;
        DiscMap r(v.value_dim_, s.cap_ + v.cap_);
        for (int p1 = 0; p1 <= s.cap_; ++p1)
            for (int q1 = 0; q1 <= s.cap_; ++q1) {
                cx sv = s.c_[s.idx(p1, q1, 0)];
                if (is_exact_zero(sv)) continue;
                for (int p2 = 0; p2 <= v.cap_; ++p2)
                    for (int q2 = 0; q2 <= v.cap_; ++q2)
                        for (int k = 0; k < v.value_dim_; ++k) {
                            cx vv = v.c_[v.idx(p2, q2, k)];
                            if (!is_exact_zero(vv)) r.c_[r.idx(p1 + p2, q1 + q2, k)] += sv * vv;
                        }
            }
        return r;
    }
    friend DiscMap operator*(const DiscMap& a, const DiscMap& b) { return multiply(a, b); }

    // grow freely; shrink only past exactly-zero coefficients
    DiscMap with_cap(int n) const {
        DiscMap r(value_dim_, n);
        for (int p = 0; p <= cap_; ++p)
            for (int q = 0; q <= cap_; ++q)
                for (int k = 0; k < value_dim_; ++k) {
                    cx v = c_[idx(p, q, k)];
                    if (is_exact_zero(v)) continue;
                    if (p > n || q > n) throw std::invalid_argument("DiscMap::with_cap: would drop terms");
                    r.c_[r.idx(p, q, k)] = v;
                }
        return r;
    }

    bool is_holomorphic() const {
        for (int p = 0; p <= cap_; ++p)
            for (int q = 1; q <= cap_; ++q)
                for (int k = 0; k < value_dim_; ++k)
                    if (!is_exact_zero(c_[idx(p, q, k)])) return false;
        return true;
    }

    double max_abs_coeff() const {
        double m = 0.0;
        for (const auto& v : c_) m = std::max(m, std::abs(v));
        return m;
    }

    size_t idx(int p, int q, int k) const {
        return (static_cast<size_t>(p) * (cap_ + 1) + q) * value_dim_ + k;
    }

private:
    size_t checked_idx(int p, int q, int k) const {
        if (p < 0 || q < 0 || p > cap_ || q > cap_ || k < 0 || k >= value_dim_)
            throw std::out_of_range("DiscMap: coefficient index");
        return idx(p, q, k);
    }

    int value_dim_ = 1;
    int cap_ = 0;
    std::vector<cx> c_;
};

// Laurent coefficients on the boundary circle, exponents -half_width..half_width.
struct LaurentTable {
    int value_dim = 1;
    int half_width = 0;
    std::vector<cx> c;

    LaurentTable() = default;
    LaurentTable(int dim, int hw) : value_dim(dim), half_width(hw) {
        c.assign(static_cast<size_t>(2 * hw + 1) * dim, cx(0.0));
    }

    cx at(int m, int k = 0) const {
        if (m < -half_width || m > half_width) return cx(0.0);
        return c[static_cast<size_t>(m + half_width) * value_dim + k];
    }
    void set(int m, int k, cx v) {
        c.at(static_cast<size_t>(m + half_width) * value_dim + k) = v;
    }
    void add(int m, int k, cx v) {
        c.at(static_cast<size_t>(m + half_width) * value_dim + k) += v;
    }

    LaurentTable& operator+=(const LaurentTable& o) {
        if (o.value_dim != value_dim) throw std::invalid_argument("LaurentTable: dim mismatch");
        if (o.half_width > half_width) throw std::invalid_argument("LaurentTable: width mismatch");
        for (int m = -o.half_width; m <= o.half_width; ++m)
            for (int k = 0; k < value_dim; ++k) add(m, k, o.at(m, k));
        return *this;
    }
    friend LaurentTable operator+(LaurentTable a, const LaurentTable& b) {
        if (b.half_width > a.half_width) { LaurentTable bb = b; bb += a; return bb; }
        a += b; return a;
    }
    friend LaurentTable operator-(LaurentTable a, const LaurentTable& b) { return a + b.scaled(cx(-1.0)); }

    LaurentTable scaled(cx s) const {
        LaurentTable r(*this);
        for (auto& v : r.c) v *= s;
        return r;
    }
    LaurentTable conjugated() const {
        LaurentTable r(value_dim, half_width);
        for (int m = -half_width; m <= half_width; ++m)
            for (int k = 0; k < value_dim; ++k) r.set(m, k, std::conj(at(-m, k)));
        return r;
    }
    LaurentTable component(int k) const {
        LaurentTable r(1, half_width);
        for (int m = -half_width; m <= half_width; ++m) r.set(m, 0, at(m, k));
        return r;
    }
    LaurentTable resized(int hw) const {
        LaurentTable r(value_dim, hw);
        for (int m = -std::min(hw, half_width); m <= std::min(hw, half_width); ++m)
            for (int k = 0; k < value_dim; ++k) r.set(m, k, at(m, k));
        return r;
    }

    // boundary product = convolution; one factor scalar
    static LaurentTable convolve(const LaurentTable& a, const LaurentTable& b) {
        if (a.value_dim != 1 && b.value_dim != 1)
            throw std::invalid_argument("LaurentTable::convolve: needs scalar factor");
        const LaurentTable& s = (a.value_dim == 1) ? a : b;
        const LaurentTable& v = (a.value_dim == 1) ? b : a;
        LaurentTable r(v.value_dim, s.half_width + v.half_width);
        for (int m1 = -s.half_width; m1 <= s.half_width; ++m1) {
            cx sv = s.at(m1, 0);
            if (is_exact_zero(sv)) continue;
            for (int m2 = -v.half_width; m2 <= v.half_width; ++m2)
                for (int k = 0; k < v.value_dim; ++k) {
                    cx vv = v.at(m2, k);
                    if (!is_exact_zero(vv)) r.add(m1 + m2, k, sv * vv);
                }
        }
        return r;
    }

    std::vector<cx> eval(cx zeta) const {
        std::vector<cx> out(value_dim, cx(0.0));
        cx zi = cx(1.0) / zeta;
        for (int k = 0; k < value_dim; ++k) {
            cx pos(0.0), neg(0.0);
            for (int m = half_width; m >= 1; --m) {
                pos = pos * zeta + at(m, k);
                neg = neg * zi + at(-m, k);
            }
            out[k] = pos * zeta + neg * zi + at(0, k);
        }
        return out;
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& v : c) m = std::max(m, std::abs(v));
        return m;
    }
    // deviation from c_m = conj(c_{-m})
    double real_defect() const {
        double m = 0.0;
        for (int mm = -half_width; mm <= half_width; ++mm)
            for (int k = 0; k < value_dim; ++k) m = std::max(m, std::abs(at(mm, k) - std::conj(at(-mm, k))));
        return m;
    }
};

// On the boundary circle zetabar = zeta^{-1}: mode m collects all (p, q) with p - q = m.
inline LaurentTable boundary_fourier(const DiscMap& d) {
    LaurentTable t(d.value_dim(), d.degree_cap());
    for (int p = 0; p <= d.degree_cap(); ++p)
        for (int q = 0; q <= d.degree_cap(); ++q)
            for (int k = 0; k < d.value_dim(); ++k) {
                cx v = d.coeff(p, q, k);
                if (!is_exact_zero(v)) t.add(p - q, k, v);
            }
    return t;
}

inline PolyMap wirtinger(const PolyMap& p, int var, bool conjugated) { return p.wirtinger(var, conjugated); }
inline DiscMap wirtinger(const DiscMap& d, bool conjugated) { return d.wirtinger(conjugated); }

// Right inverse of d/dzetabar on the disc, monomial rule frozen from the
// area integral of the Cauchy kernel (guarded by the quadrature oracle in tests):
//   zeta^p zetabar^q  ->  zeta^p zetabar^{q+1}/(q+1)                      (p <= q)
//   zeta^p zetabar^q  ->  (zeta^p zetabar^{q+1} - zeta^{p-q-1})/(q+1)     (p >= q+1)
inline DiscMap cauchy_green(const DiscMap& d) {
    if (d.value_dim() != 1) throw std::invalid_argument("cauchy_green: scalar input only");
    DiscMap r(1, d.degree_cap() + 1);
    for (int p = 0; p <= d.degree_cap(); ++p)
        for (int q = 0; q <= d.degree_cap(); ++q) {
            cx v = d.coeff(p, q);
            if (is_exact_zero(v)) continue;
            cx w = v / static_cast<double>(q + 1);
            r.add_coeff(p, q + 1, 0, w);
            if (p >= q + 1) r.add_coeff(p - q - 1, 0, 0, -w);
        }
    return r;
}

// Holomorphic antiderivative normalized to vanish at 0.
inline DiscMap antiderivative_I(const DiscMap& d) {
    if (d.value_dim() != 1) throw std::invalid_argument("antiderivative_I: scalar input only");
    if (!d.is_holomorphic()) throw std::invalid_argument("antiderivative_I: input not holomorphic");
    DiscMap r(1, d.degree_cap() + 1);
    for (int p = 0; p <= d.degree_cap(); ++p) {
        cx v = d.coeff(p, 0);
        if (!is_exact_zero(v)) r.set_coeff(p + 1, 0, 0, v / static_cast<double>(p + 1));
    }
    return r;
}

}  // namespace acdisc
