#include "hopgdof/stacking.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

namespace hopgdof {

namespace {

const StackItem& find_item(const StackInstance& inst, const std::string& id) {
    for (const auto& it : inst.items)
        if (it.id == id) return it;
    throw std::invalid_argument("unknown stack item " + id);
}

// first item whose constraint fails, or "" if the order is valid
std::string first_violation(const StackInstance& inst, const std::vector<std::string>& order) {
    Rational height(0);
    for (const auto& id : order) {
        const StackItem& it = find_item(inst, id);
        if (height > it.level) return id;
        height += it.size;
    }
    return {};
}

}  // namespace

bool stack_order_ok(const StackInstance& inst, const std::vector<std::string>& order) {
    if (order.size() != inst.items.size()) return false;
    std::vector<std::string> a = order, b;
    for (const auto& it : inst.items) b.push_back(it.id);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) return false;
    return first_violation(inst, order).empty();
}

StackCertificate feasible_greedy(const StackInstance& inst) {
    std::vector<StackItem> items = inst.items;
    std::sort(items.begin(), items.end(), [](const StackItem& x, const StackItem& y) {
        Rational rx = x.level + x.size, ry = y.level + y.size;
        if (rx != ry) return rx < ry;
        if (x.level != y.level) return x.level < y.level;
        if (x.size != y.size) return x.size < y.size;
        return x.id < y.id;
    });
    StackCertificate c;
    for (const auto& it : items) c.order.push_back(it.id);
    c.witness = first_violation(inst, c.order);
    c.feasible = c.witness.empty();
    if (!c.feasible) c.order.clear();
    return c;
}

StackCertificate feasible_bruteforce(const StackInstance& inst) {
    if (inst.items.size() > 8) throw std::invalid_argument("brute force limited to 8 items");
    std::vector<size_t> idx(inst.items.size());
    std::iota(idx.begin(), idx.end(), 0);
    StackCertificate c;
    do {
        std::vector<std::string> order;
        for (size_t i : idx) order.push_back(inst.items[i].id);
        if (first_violation(inst, order).empty()) {
            c.feasible = true;
            c.order = std::move(order);
            return c;
        }
    } while (std::next_permutation(idx.begin(), idx.end()));
    // report the failing item of the level-sorted order
    std::vector<StackItem> items = inst.items;
    std::stable_sort(items.begin(), items.end(),
                     [](const StackItem& x, const StackItem& y) { return x.level < y.level; });
    std::vector<std::string> order;
    for (const auto& it : items) order.push_back(it.id);
    c.witness = first_violation(inst, order);
    return c;
}

StackInstance lemma_precondition(const std::vector<SubSectionSpec>& subs) {
    std::map<std::string, std::vector<const SubSectionSpec*>> by_parent;
    StackInstance inst;
    for (const auto& s : subs) {
        if (s.lambda1.sign() < 0 || s.lambda1 > s.lambda2 || s.lambda2 > s.parent_lambda)
            throw std::invalid_argument("sub-section " + s.id + " outside 0 <= l1 <= l2 <= parent level");
        for (const SubSectionSpec* o : by_parent[s.parent])
            if (max(o->lambda1, s.lambda1) < min(o->lambda2, s.lambda2))
                throw std::invalid_argument("overlapping sub-sections " + o->id + " and " + s.id);
        by_parent[s.parent].push_back(&s);
        inst.items.push_back({s.id, s.level(), s.size()});
    }
    return inst;
}

std::vector<SubSectionSpec> converse_subsections(const Rational& alpha) {
    if (alpha.sign() < 0 || alpha > Rational(1)) throw std::invalid_argument("alpha must lie in [0, 1]");
    Rational m = min(alpha, 1 - alpha);
    return {{"U_direct", "X1", 1 - m, Rational(1), Rational(1)},
            {"U_cross", "X2", alpha - m, alpha, alpha}};
}

}  // namespace hopgdof
