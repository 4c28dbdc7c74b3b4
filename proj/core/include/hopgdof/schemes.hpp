#pragma once

#include "hopgdof/formulas.hpp"
#include "hopgdof/layering.hpp"
#include "hopgdof/lp.hpp"

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hopgdof {

struct HopStage {
    std::array<TransmitPlan, 2> plans;             // plans[i-1] is node i
    std::array<std::vector<DecodeStep>, 2> orders; // orders[k-1] is receiver k
};

// Relays re-encode what they decoded (fresh layers at hop >= 1) and forward the
// undecoded residual as a relayed layer whose top is the residual top plus its shift.
struct MultiHopScheme {
    Rational alpha;
    int L = 2;
    std::string regime;
    std::string method;  // explicit | lp | df | very-strong
    std::map<MsgId, Rational> rate;  // every id in use, halves included
    std::vector<HopStage> hops;

    std::vector<MsgId> source_messages(int user) const;
};

struct VerifyFailure {
    int hop = 0;
    int receiver = 0;
    int step = -1;  // -1 for structural failures
    std::string reason;
    Rational deficit;
};

struct VerifyReport {
    bool ok = false;
    Rational total;
    std::array<Rational, 2> per_user;
    std::optional<VerifyFailure> failure;
    std::vector<std::array<TransmitPlan, 2>> plans;  // relayed layers materialized
    std::vector<std::array<DecodeReport, 2>> reports;
};

struct VerificationError : std::runtime_error {
    VerifyFailure failure;
    explicit VerificationError(VerifyFailure f);
};

VerifyReport verify_report(const MultiHopScheme& scheme);
// Throws VerificationError with the first failing step.
GdofValue verify_scheme(const MultiHopScheme& scheme);

// Structural skeleton with symbolic rates and tops.
struct TemplateLayer {
    MsgId id;
    bool relayed = false;
    int top_var = -1;
    int group = 0;   // 0: stacked from the top, 1: stacked down onto the residual, 2: replayed helper
    int penalty = 0; // discourages use as a signal copy in the constraint generator
    Rational shift = -1;
};

struct TemplatePlan {
    NodeId node;
    std::vector<TemplateLayer> layers;
};

struct SchemeTemplate {
    std::string name;
    int L = 2;
    int K = 2;
    bool middle = true;
    std::vector<std::string> var_names;
    std::map<MsgId, LinExpr> rate;
    std::vector<std::array<TemplatePlan, 2>> plans;
    std::vector<std::array<std::vector<DecodeStep>, 2>> orders;
    LinExpr per_user;  // objective
    std::map<std::string, int> var_index;

    int var(const std::string& name) const { return var_index.at(name); }
};

// Onion-peeling skeleton: K layered sub-messages T_k, optional middle layer, K-1 bottom layers.
SchemeTemplate onion_template(int L, int K, bool middle);

LinearProgram template_program(const SchemeTemplate& tpl, const Rational& alpha);
std::vector<Rational> solve_template(const SchemeTemplate& tpl, const Rational& alpha);
MultiHopScheme instantiate(const SchemeTemplate& tpl, const Rational& alpha, const std::vector<Rational>& values,
                           std::string regime, std::string method);

MultiHopScheme synth_2hop(const Rational& alpha);
MultiHopScheme synth_Lhop(const Rational& alpha, int L);
MultiHopScheme synth_very_strong(const Rational& alpha, int L);
MultiHopScheme synth_df(const Rational& alpha, int L);
MultiHopScheme synth(const Rational& alpha, int L);

// Per-user gdofs of the explicit weak-1 split: T_1..T_L, middle, B_1..B_{L-1}.
std::vector<Rational> regime1_split(const Rational& alpha, int L);

bool end_to_end(const Rational& alpha, int L);

// Inflates one message (and its halves proportionally) by delta.
MultiHopScheme tamper(const MultiHopScheme& scheme, const MsgId& id, const Rational& delta);

std::string scheme_to_json(const MultiHopScheme& scheme, const VerifyReport* report = nullptr);
MultiHopScheme scheme_from_json(const std::string& text);

}  // namespace hopgdof
