#include "hopgdof/formulas.hpp"

namespace hopgdof {

namespace {

void require_L(int L) {
    if (L < 2) throw DomainError("L must be at least 2");
    if (L > 4096) throw DomainError("L too large");
}

void require_alpha(const Rational& a) {
    if (a.sign() < 0) throw DomainError("alpha must be non-negative");
}

GdofValue exact(Rational v, const char* regime) { return {std::move(v), regime, GdofKind::exact}; }

// 2^L - 1
Rational mersenne(int L) { return pow2(L) - 1; }

GdofValue general_fp(const Rational& a, int L) {
    const Rational n = mersenne(L);
    if (a <= Rational(1)) {
        if (a <= Rational(1, 2)) return exact(2 - a - a / n, "weak-1");
        if (a <= weak_breakpoint(L)) return exact(1 + a - (1 - a) / n, "weak-2");
        return exact(2 - a, "weak-3");
    }
    if (L % 2 == 0) {
        if (a <= 2 - pow2(-L)) return exact(2 * a - 1, "strong-1");
        if (a <= Rational(2)) return exact(a + 1 - (a - 1) / n, "strong-2");
        return exact(2 * a - 1 - 1 / n, "strong-3");
    }
    if (a >= Rational(L + 1)) return exact(Rational(2 * L), "very-strong");
    throw OpenProblem("open-problem: odd L strong regime");
}

}  // namespace

const char* kind_name(GdofKind k) {
    switch (k) {
        case GdofKind::exact: return "exact";
        case GdofKind::converse_bound: return "converse-bound";
        case GdofKind::achievable_lower: return "achievable-lower";
    }
    return "?";
}

Rational weak_breakpoint(int L) { return pow2(L) / (pow2(L + 1) - 1); }

GdofValue theorem1(const Rational& a) {
    require_alpha(a);
    if (a > Rational(1)) throw DomainError("theorem1 covers alpha <= 1");
    if (a <= Rational(1, 2)) return exact(2 - Rational(4, 3) * a, "weak-1");
    if (a <= Rational(4, 7)) return exact(Rational(2, 3) + Rational(4, 3) * a, "weak-2");
    return exact(2 - a, "weak-3");
}

GdofValue corollary1(const Rational& a) {
    require_alpha(a);
    if (a < Rational(1)) throw DomainError("corollary1 covers alpha >= 1");
    if (a <= Rational(7, 4)) return exact(2 * a - 1, "strong-1");
    if (a <= Rational(2)) return exact(Rational(2, 3) * a + Rational(4, 3), "strong-2");
    return exact(2 * a - Rational(4, 3), "strong-3");
}

GdofValue sum_gdof_fp(const Rational& a, int L) {
    require_alpha(a);
    require_L(L);
    GdofValue g = general_fp(a, L);
    if (L == 2) {
        GdofValue t = a <= Rational(1) ? theorem1(a) : corollary1(a);
        if (t.value != g.value || t.regime != g.regime)
            throw std::logic_error("two-hop closed form disagrees with general form");
    }
    return g;
}

GdofValue sum_gdof_perfect(const Rational& a) {
    require_alpha(a);
    if (a <= Rational(1)) return exact(Rational(2), "weak");
    return exact(2 * a, "strong");
}

GdofValue sum_gdof_df_fp(const Rational& a) {
    require_alpha(a);
    if (a <= Rational(1, 2)) return exact(2 - 2 * a, "df-1");
    if (a <= Rational(2, 3)) return exact(2 * a, "df-2");
    if (a <= Rational(1)) return exact(2 - a, "df-3");
    if (a <= Rational(3, 2)) return exact(2 * a - 1, "df-4");
    if (a <= Rational(2)) return exact(Rational(2), "df-5");
    return exact(2 * a - 2, "df-6");
}

GdofValue sum_gdof_df_perfect(const Rational& a) {
    require_alpha(a);
    if (a <= Rational(1, 2)) return exact(2 - 2 * a, "df-1");
    if (a <= Rational(3, 4)) return exact(2 * a, "df-2");
    if (a <= Rational(1)) return exact((6 - 2 * a) / 3, "df-3");
    if (a <= Rational(4, 3)) return exact((6 * a - 2) / 3, "df-4");
    if (a <= Rational(2)) return exact(Rational(2), "df-5");
    return exact(2 * a - 2, "df-6");
}

GdofValue converse_bound(const Rational& a, int L) {
    require_alpha(a);
    require_L(L);
    if (a > Rational(1)) throw DomainError("converse_bound covers alpha <= 1; use the scaling map above");
    GdofValue best{2 * max(Rational(1), a), "cut", GdofKind::converse_bound};
    auto consider = [&](Rational v, const char* tag) {
        if (v < best.value) best = {std::move(v), tag, GdofKind::converse_bound};
    };
    consider(2 - a, "broadcast");
    if (a <= Rational(2, 3)) {
        Rational m = max(a, 1 - a);
        consider(1 + m - (1 - m) / mersenne(L), "recursion");
    }
    return best;
}

bool scaling_map_check(const Rational& a, int L) {
    if (a < Rational(1) || L % 2 != 0) throw DomainError("scaling map needs alpha >= 1 and even L");
    return sum_gdof_fp(a, L).value == a * sum_gdof_fp(1 / a, L).value;
}

bool min_identity_check(const Rational& a) {
    return sum_gdof_df_fp(a).value ==
           min(sum_gdof_df_perfect(a).value, sum_gdof_fp(a, 2).value);
}

}  // namespace hopgdof
