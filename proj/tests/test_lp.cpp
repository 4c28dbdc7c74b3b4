#include "doctest.h"

#include "hopgdof/lp.hpp"

#include <gmpxx.h>

#include <optional>
#include <random>

using namespace hopgdof;

namespace {

Rational R(long n, long d = 1) { return Rational(n, d); }

struct Row2 {
    mpq_class a, b, c;  // a x + b y <= c
};

// Vertex enumeration over every pair of boundary lines; optimum of a bounded 2-variable program.
std::optional<mpq_class> vertex_max(const std::vector<Row2>& rows, const mpq_class& cx, const mpq_class& cy) {
    std::optional<mpq_class> best;
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = i + 1; j < rows.size(); ++j) {
            mpq_class det = rows[i].a * rows[j].b - rows[i].b * rows[j].a;
            if (det == 0) continue;
            mpq_class x = (rows[i].c * rows[j].b - rows[i].b * rows[j].c) / det;
            mpq_class y = (rows[i].a * rows[j].c - rows[i].c * rows[j].a) / det;
            bool ok = true;
            for (const auto& r : rows)
                if (r.a * x + r.b * y > r.c) ok = false;
            if (!ok) continue;
            mpq_class v = cx * x + cy * y;
            if (!best || v > *best) best = v;
        }
    return best;
}

}  // namespace

TEST_SUITE("lp") {

TEST_CASE("small program") {
    LinearProgram lp;
    int x = lp.add_var("x"), y = lp.add_var("y");
    lp.add_le(LinExpr::var(x) - R(1));
    lp.add_le(LinExpr::var(y) - R(2));
    lp.add_le(LinExpr::var(x) + LinExpr::var(y) - R(5, 2));
    lp.add_ge(LinExpr::var(x));
    lp.add_ge(LinExpr::var(y));
    lp.set_objective(LinExpr::var(x) + LinExpr::var(y));
    LpSolution s = solve_lp(lp);
    REQUIRE(s.status == LpStatus::optimal);
    CHECK(s.value == R(5, 2));
    LpFloatSolution f = solve_lp_float(lp);
    REQUIRE(f.status == LpStatus::optimal);
    CHECK(f.value == doctest::Approx(2.5));
}

TEST_CASE("infeasible and unbounded") {
    LinearProgram bad;
    int x = bad.add_var("x");
    bad.add_le(LinExpr::var(x));
    bad.add_ge(LinExpr::var(x) - R(1));
    bad.set_objective(LinExpr::var(x));
    CHECK(solve_lp(bad).status == LpStatus::infeasible);
    CHECK(solve_lp_float(bad).status == LpStatus::infeasible);

    LinearProgram open;
    int y = open.add_var("y");
    open.add_ge(LinExpr::var(y));
    open.set_objective(LinExpr::var(y));
    CHECK(solve_lp(open).status == LpStatus::unbounded);
    CHECK(solve_lp_float(open).status == LpStatus::unbounded);
}

TEST_CASE("equality rows") {
    LinearProgram lp;
    int x = lp.add_var("x"), y = lp.add_var("y");
    lp.add_eq(LinExpr::var(x) + LinExpr::var(y, 2) - R(3));
    lp.add_ge(LinExpr::var(x));
    lp.add_ge(LinExpr::var(y));
    lp.set_objective(LinExpr::var(x, 3) + LinExpr::var(y, 5));
    LpSolution s = solve_lp(lp);
    REQUIRE(s.status == LpStatus::optimal);
    CHECK(s.value == R(9));
    CHECK(s.x[x] == R(3));
}

TEST_CASE("warm start gives the same optimum") {
    LinearProgram lp;
    int x = lp.add_var("x"), y = lp.add_var("y");
    lp.add_le(LinExpr::var(x, 2) + LinExpr::var(y) - R(4));
    lp.add_le(LinExpr::var(x) + LinExpr::var(y, 3) - R(6));
    lp.add_ge(LinExpr::var(x));
    lp.add_ge(LinExpr::var(y));
    lp.set_objective(LinExpr::var(x) + LinExpr::var(y));
    LpSolution cold = solve_lp(lp);
    LpSolution warm = solve_lp(lp, &cold.basis);
    CHECK(warm.value == cold.value);
    CHECK(warm.value == R(14, 5));
}

TEST_CASE("random two-variable programs against vertex enumeration") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> coef(-6, 6), rhs(1, 12);
    int compared = 0;
    for (int t = 0; t < 300; ++t) {
        LinearProgram lp;
        int x = lp.add_var("x"), y = lp.add_var("y");
        std::vector<Row2> rows;
        auto add = [&](long a, long b, long c) {
            rows.push_back({a, b, c});
            lp.add_le(LinExpr::var(x, R(a)) + LinExpr::var(y, R(b)) - R(c));
        };
        add(1, 0, 20);
        add(-1, 0, 20);
        add(0, 1, 20);
        add(0, -1, 20);
        int m = 2 + t % 5;
        for (int i = 0; i < m; ++i) add(coef(rng), coef(rng), rhs(rng));
        long cx = coef(rng), cy = coef(rng);
        lp.set_objective(LinExpr::var(x, R(cx)) + LinExpr::var(y, R(cy)));
        auto ref = vertex_max(rows, cx, cy);
        LpSolution s = solve_lp(lp);
        // the origin is always feasible, so the box makes every instance bounded and feasible
        REQUIRE(ref.has_value());
        REQUIRE(s.status == LpStatus::optimal);
        CHECK(s.value == Rational(*ref));
        LpFloatSolution f = solve_lp_float(lp);
        CHECK(f.value == doctest::Approx(ref->get_d()).epsilon(1e-9));
        ++compared;
    }
    CHECK(compared == 300);
}

TEST_CASE("duplicate rows are merged") {
    LinearProgram lp;
    int x = lp.add_var("x");
    lp.add_le(LinExpr::var(x) - R(1));
    lp.add_le(LinExpr::var(x) - R(1));
    CHECK(lp.rows().size() == 1);
}

}  // TEST_SUITE
