#pragma once

#include "hopgdof/rational.hpp"

#include <string>
#include <vector>

namespace hopgdof {

struct StackItem {
    std::string id;
    Rational level;
    Rational size;
};

struct StackInstance {
    std::vector<StackItem> items;
};

struct StackCertificate {
    bool feasible = false;
    std::vector<std::string> order;  // bottom to top
    std::string witness;             // first violating item when infeasible
};

// True iff every item's stacked height (sum of sizes below it) is at most its level.
bool stack_order_ok(const StackInstance& inst, const std::vector<std::string>& order);

// Orders by level + size (the height its top reaches), then level, size, id.
StackCertificate feasible_greedy(const StackInstance& inst);
// All permutations; at most 8 items.
StackCertificate feasible_bruteforce(const StackInstance& inst);

// Interval [lambda1, lambda2] of a parent signal at power level parent_lambda.
struct SubSectionSpec {
    std::string id;
    std::string parent;
    Rational lambda1;
    Rational lambda2;
    Rational parent_lambda;

    Rational level() const { return lambda1; }
    Rational size() const { return lambda2 - lambda1; }
};

StackInstance lemma_precondition(const std::vector<SubSectionSpec>& subsections);

// Top min(alpha, 1-alpha) levels of the direct input (full power) and of the cross input (power alpha).
std::vector<SubSectionSpec> converse_subsections(const Rational& alpha);

}  // namespace hopgdof
