#pragma once

#include "hopgdof/rational.hpp"

#include <map>
#include <string>
#include <vector>

namespace hopgdof {

// Affine expression sum_i coef[i] * x_i + constant.
struct LinExpr {
    std::map<int, Rational> coef;
    Rational constant;

    LinExpr() = default;
    LinExpr(const Rational& c) : constant(c) {}
    LinExpr(int c) : constant(c) {}
    static LinExpr var(int i, const Rational& k = 1);

    LinExpr& operator+=(const LinExpr& o);
    LinExpr& operator-=(const LinExpr& o);
    LinExpr& operator*=(const Rational& k);
    friend LinExpr operator+(LinExpr a, const LinExpr& b) { return a += b; }
    friend LinExpr operator-(LinExpr a, const LinExpr& b) { return a -= b; }
    friend LinExpr operator-(LinExpr a) { return a *= Rational(-1); }
    friend LinExpr operator*(LinExpr a, const Rational& k) { return a *= k; }
    friend LinExpr operator*(const Rational& k, LinExpr a) { return a *= k; }

    Rational eval(const std::vector<Rational>& x) const;
    bool is_constant() const { return coef.empty(); }
};

// maximize objective . x  subject to  row . x <= rhs, x free.
class LinearProgram {
public:
    struct Row {
        std::vector<std::pair<int, Rational>> a;
        Rational rhs;
    };

    int add_var(std::string name);
    int num_vars() const { return static_cast<int>(names_.size()); }
    const std::string& name(int i) const { return names_[i]; }

    void add_le(const LinExpr& e);  // e <= 0
    void add_ge(const LinExpr& e) { add_le(-e); }
    void add_eq(const LinExpr& e) { add_le(e); add_ge(e); }
    void set_objective(const LinExpr& e);

    const std::vector<Row>& rows() const { return rows_; }
    const std::vector<Rational>& objective() const { return obj_; }

private:
    std::vector<std::string> names_;
    std::vector<Row> rows_;
    std::map<std::vector<std::pair<int, Rational>>, size_t> index_;
    std::vector<Rational> obj_;
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
    LpStatus status = LpStatus::infeasible;
    std::vector<Rational> x;
    Rational value;
    std::vector<int> basis;  // active rows (indices >= rows().size() are box rows)
    int iterations = 0;
    bool warm_used = false;
};

// Every variable is boxed to |x_i| <= bound; hitting the box reports unbounded.
// A basis from an earlier solve of a program with the same rows may be passed as warm.
LpSolution solve_lp(const LinearProgram& lp, const std::vector<int>* warm = nullptr, long bound = 64);

struct LpFloatSolution {
    LpStatus status = LpStatus::infeasible;
    std::vector<double> x;
    double value = 0;
};

// Floating-point pass only; for programs whose data are measurements rather than exact values.
LpFloatSolution solve_lp_float(const LinearProgram& lp, long bound = 64);

}  // namespace hopgdof
