#pragma once

#include "hopgdof/rational.hpp"

#include <stdexcept>
#include <string>

namespace hopgdof {

// Odd L with 1 < alpha < L+1: no known sum-GDoF.
struct OpenProblem : std::domain_error {
    using std::domain_error::domain_error;
};

// Query outside an operation's domain.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

enum class GdofKind { exact, converse_bound, achievable_lower };

struct GdofValue {
    Rational value;
    std::string regime;
    GdofKind kind = GdofKind::exact;
};

const char* kind_name(GdofKind k);

// 2^L/(2^{L+1}-1), upper end of the second weak branch.
Rational weak_breakpoint(int L);

// Closed forms for two hops, kept separate to cross-check the general expressions.
GdofValue theorem1(const Rational& alpha);
GdofValue corollary1(const Rational& alpha);

GdofValue sum_gdof_fp(const Rational& alpha, int L);
GdofValue sum_gdof_perfect(const Rational& alpha);
GdofValue sum_gdof_df_fp(const Rational& alpha);
GdofValue sum_gdof_df_perfect(const Rational& alpha);
GdofValue converse_bound(const Rational& alpha, int L);

bool scaling_map_check(const Rational& alpha, int L);
bool min_identity_check(const Rational& alpha);

}  // namespace hopgdof
