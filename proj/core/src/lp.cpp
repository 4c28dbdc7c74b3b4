#include "hopgdof/lp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hopgdof {

LinExpr LinExpr::var(int i, const Rational& k) {
    LinExpr e;
    if (k.sign() != 0) e.coef[i] = k;
    return e;
}

LinExpr& LinExpr::operator+=(const LinExpr& o) {
    for (const auto& [i, k] : o.coef) {
        auto it = coef.find(i);
        if (it == coef.end()) {
            coef.emplace(i, k);
        } else {
            it->second += k;
            if (it->second.sign() == 0) coef.erase(it);
        }
    }
    constant += o.constant;
    return *this;
}

LinExpr& LinExpr::operator-=(const LinExpr& o) { return *this += -LinExpr(o); }

LinExpr& LinExpr::operator*=(const Rational& k) {
    if (k.sign() == 0) {
        coef.clear();
        constant = 0;
        return *this;
    }
    for (auto& [i, v] : coef) v *= k;
    constant *= k;
    return *this;
}

Rational LinExpr::eval(const std::vector<Rational>& x) const {
    Rational s = constant;
    for (const auto& [i, k] : coef) s += k * x.at(i);
    return s;
}

int LinearProgram::add_var(std::string name) {
    names_.push_back(std::move(name));
    obj_.emplace_back(0);
    return num_vars() - 1;
}

void LinearProgram::add_le(const LinExpr& e) {
    Rational rhs = -e.constant;
    if (e.coef.empty()) {
        if (rhs.sign() < 0) {
            // 0 <= negative: keep an explicitly infeasible row
            rows_.push_back({{}, rhs});
        }
        return;
    }
    std::vector<std::pair<int, Rational>> a(e.coef.begin(), e.coef.end());
    auto it = index_.find(a);
    if (it != index_.end()) {
        if (rhs < rows_[it->second].rhs) rows_[it->second].rhs = rhs;
        return;
    }
    index_.emplace(a, rows_.size());
    rows_.push_back({std::move(a), rhs});
}

void LinearProgram::set_objective(const LinExpr& e) {
    std::fill(obj_.begin(), obj_.end(), Rational(0));
    for (const auto& [i, k] : e.coef) obj_.at(i) = k;
}

namespace {

template <class T>
struct Num;

template <>
struct Num<double> {
    static constexpr double eps = 1e-9;
    static double from(const Rational& r) { return r.to_double(); }
    static bool pos(double v) { return v > eps; }
    static bool neg(double v) { return v < -eps; }
    static bool zero(double v) { return std::fabs(v) <= eps; }
    static double mag(double v) { return std::fabs(v); }
};

template <>
struct Num<mpq_class> {
    static mpq_class from(const Rational& r) { return r.raw(); }
    static bool pos(const mpq_class& v) { return sgn(v) > 0; }
    static bool neg(const mpq_class& v) { return sgn(v) < 0; }
    static bool zero(const mpq_class& v) { return sgn(v) == 0; }
    static double mag(const mpq_class& v) { return std::fabs(v.get_d()); }
};

// Dual simplex over active row sets. Rows m..m+2n-1 are the box rows +-x_i <= bound.
template <class T>
class DualSimplex {
public:
    using N = Num<T>;

    DualSimplex(const LinearProgram& lp, long bound) : n_(lp.num_vars()), m_(static_cast<int>(lp.rows().size())) {
        for (const auto& r : lp.rows()) {
            std::vector<std::pair<int, T>> row;
            for (const auto& [i, k] : r.a) row.emplace_back(i, N::from(k));
            a_.push_back(std::move(row));
            b_.push_back(N::from(r.rhs));
        }
        for (int i = 0; i < n_; ++i) {
            a_.push_back({{i, T(1)}});
            b_.push_back(T(bound));
            a_.push_back({{i, T(-1)}});
            b_.push_back(T(bound));
        }
        for (const auto& k : lp.objective()) c_.push_back(N::from(k));
    }

    std::vector<int> box_basis() const {
        std::vector<int> bs(n_);
        for (int i = 0; i < n_; ++i) bs[i] = m_ + 2 * i + (N::neg(c_[i]) ? 1 : 0);
        return bs;
    }

    bool set_basis(const std::vector<int>& bs) {
        if (static_cast<int>(bs.size()) != n_) return false;
        for (int j : bs)
            if (j < 0 || j >= static_cast<int>(a_.size())) return false;
        basis_ = bs;
        return refactor();
    }

    bool dual_feasible() {
        compute_y();
        for (const T& v : y_)
            if (N::neg(v)) return false;
        return true;
    }

    // 1 optimal, 0 infeasible, -1 iteration limit
    int run(long max_iter) {
        std::vector<char> in_basis(a_.size(), 0);
        for (int j : basis_) in_basis[j] = 1;
        int degenerate = 0;
        bool bland = false;
        for (long it = 0; it < max_iter; ++it) {
            if (it > 0 && it % 200 == 0 && !refactor()) return -1;
            compute_x();
            compute_y();
            int enter = -1;
            T worst(0);
            for (int j = 0; j < static_cast<int>(a_.size()); ++j) {
                if (in_basis[j]) continue;
                T v = -b_[j];
                for (const auto& [i, k] : a_[j]) v += k * x_[i];
                if (!N::pos(v)) continue;
                if (bland) { enter = j; break; }
                if (enter < 0 || v > worst) { enter = j; worst = v; }
            }
            iterations_ = it;
            if (enter < 0) return 1;
            std::vector<T> w(n_, T(0));
            for (const auto& [i, k] : a_[enter])
                for (int c = 0; c < n_; ++c)
                    if (!N::zero(minv_[i * n_ + c])) w[c] += k * minv_[i * n_ + c];
            int leave = -1;
            T best(0);
            for (int r = 0; r < n_; ++r) {
                if (!N::pos(w[r])) continue;
                T ratio = y_[r] / w[r];
                if (leave < 0 || ratio < best || (!(best < ratio) && basis_[r] < basis_[leave])) {
                    leave = r;
                    best = ratio;
                }
            }
            if (leave < 0) return 0;
            degenerate = N::zero(best) ? degenerate + 1 : 0;
            if (degenerate > 60) bland = true;
            pivot(leave, w);
            in_basis[basis_[leave]] = 0;
            basis_[leave] = enter;
            in_basis[enter] = 1;
        }
        return -1;
    }

    const std::vector<int>& basis() const { return basis_; }
    const std::vector<T>& x() { compute_x(); return x_; }
    long iterations() const { return iterations_; }

private:
    bool refactor() {
        // Gauss-Jordan on the basis matrix M (rows = basis rows); minv satisfies M * minv = I.
        std::vector<T> m(n_ * n_, T(0)), inv(n_ * n_, T(0));
        for (int r = 0; r < n_; ++r) {
            for (const auto& [i, k] : a_[basis_[r]]) m[r * n_ + i] = k;
            inv[r * n_ + r] = T(1);
        }
        for (int col = 0; col < n_; ++col) {
            int piv = -1;
            double bestmag = 0;
            for (int r = col; r < n_; ++r) {
                if (N::zero(m[r * n_ + col])) continue;
                double g = N::mag(m[r * n_ + col]);
                if (piv < 0 || g > bestmag) { piv = r; bestmag = g; }
            }
            if (piv < 0) return false;
            if (piv != col) {
                for (int c = 0; c < n_; ++c) {
                    std::swap(m[piv * n_ + c], m[col * n_ + c]);
                    std::swap(inv[piv * n_ + c], inv[col * n_ + c]);
                }
            }
            T p = m[col * n_ + col];
            for (int c = 0; c < n_; ++c) {
                if (!N::zero(m[col * n_ + c])) m[col * n_ + c] /= p;
                if (!N::zero(inv[col * n_ + c])) inv[col * n_ + c] /= p;
            }
            for (int r = 0; r < n_; ++r) {
                if (r == col || N::zero(m[r * n_ + col])) continue;
                T f = m[r * n_ + col];
                for (int c = 0; c < n_; ++c) {
                    if (!N::zero(m[col * n_ + c])) m[r * n_ + c] -= f * m[col * n_ + c];
                    if (!N::zero(inv[col * n_ + c])) inv[r * n_ + c] -= f * inv[col * n_ + c];
                }
            }
        }
        // rows of M^{-1} are indexed by variable, columns by basis slot
        minv_ = std::move(inv);
        return true;
    }

    void compute_x() {
        x_.assign(n_, T(0));
        for (int i = 0; i < n_; ++i)
            for (int s = 0; s < n_; ++s)
                if (!N::zero(minv_[i * n_ + s])) x_[i] += minv_[i * n_ + s] * b_[basis_[s]];
    }

    void compute_y() {
        y_.assign(n_, T(0));
        for (int i = 0; i < n_; ++i) {
            if (N::zero(c_[i])) continue;
            for (int s = 0; s < n_; ++s)
                if (!N::zero(minv_[i * n_ + s])) y_[s] += c_[i] * minv_[i * n_ + s];
        }
    }

    void pivot(int r, const std::vector<T>& w) {
        std::vector<T> u(n_);
        for (int i = 0; i < n_; ++i) u[i] = minv_[i * n_ + r];
        const T wr = w[r];
        for (int i = 0; i < n_; ++i) {
            if (N::zero(u[i])) continue;
            T ui = u[i] / wr;
            for (int k = 0; k < n_; ++k) {
                if (k == r) continue;
                if (!N::zero(w[k])) minv_[i * n_ + k] -= ui * w[k];
            }
            minv_[i * n_ + r] = ui;
        }
    }

    int n_, m_;
    std::vector<std::vector<std::pair<int, T>>> a_;
    std::vector<T> b_, c_;
    std::vector<int> basis_;
    std::vector<T> minv_, x_, y_;
    long iterations_ = 0;
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const std::vector<int>* warm, long bound) {
    LpSolution sol;
    const int n = lp.num_vars();
    if (n == 0) {
        sol.status = LpStatus::optimal;
        for (const auto& r : lp.rows())
            if (r.rhs.sign() < 0) sol.status = LpStatus::infeasible;
        return sol;
    }

    // floating-point pass to locate the optimal basis
    std::vector<int> start;
    {
        DualSimplex<double> fp(lp, bound);
        bool ok = false;
        if (warm && fp.set_basis(*warm) && fp.dual_feasible()) {
            ok = true;
            sol.warm_used = true;
        }
        if (!ok) fp.set_basis(fp.box_basis());
        if (fp.run(100000) == 1) start = fp.basis();
        sol.iterations += static_cast<int>(fp.iterations());
    }

    // exact pass from that basis; cold start if the floating basis is unusable
    DualSimplex<mpq_class> ex(lp, bound);
    if (start.empty() || !ex.set_basis(start) || !ex.dual_feasible()) ex.set_basis(ex.box_basis());
    int res = ex.run(1000000);
    sol.iterations += static_cast<int>(ex.iterations());
    if (res < 0) throw std::runtime_error("lp: iteration limit");
    if (res == 0) {
        sol.status = LpStatus::infeasible;
        return sol;
    }
    sol.basis = ex.basis();
    const auto& x = ex.x();
    sol.status = LpStatus::optimal;
    sol.value = 0;
    for (int i = 0; i < n; ++i) {
        sol.x.emplace_back(x[i]);
        if (abs(x[i]) == bound) sol.status = LpStatus::unbounded;
        sol.value += lp.objective()[i] * sol.x.back();
    }
    return sol;
}

LpFloatSolution solve_lp_float(const LinearProgram& lp, long bound) {
    LpFloatSolution sol;
    const int n = lp.num_vars();
    if (n == 0) {
        sol.status = LpStatus::optimal;
        return sol;
    }
    DualSimplex<double> fp(lp, bound);
    fp.set_basis(fp.box_basis());
    int res = fp.run(100000);
    if (res < 0) throw std::runtime_error("lp: iteration limit");
    if (res == 0) return sol;
    sol.status = LpStatus::optimal;
    const auto& x = fp.x();
    for (int i = 0; i < n; ++i) {
        sol.x.push_back(x[i]);
        if (std::abs(x[i]) >= static_cast<double>(bound) * (1 - 1e-12)) sol.status = LpStatus::unbounded;
        sol.value += lp.objective()[i].to_double() * x[i];
    }
    return sol;
}

}  // namespace hopgdof
