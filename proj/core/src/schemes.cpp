#include "hopgdof/schemes.hpp"

#include <algorithm>
#include <mutex>
#include <tuple>

namespace hopgdof {

namespace {

void require_weak(const Rational& a) {
    if (a.sign() < 0 || a > Rational(1)) throw DomainError("alpha must lie in [0, 1]");
}

void require_hops(int L) {
    if (L < 2) throw DomainError("L must be at least 2");
    if (L > 64) throw DomainError("L too large for scheme synthesis");
}

MsgId W(int u, int k, int half = 0) { return {u, k, half}; }

}  // namespace

std::vector<MsgId> MultiHopScheme::source_messages(int user) const {
    std::vector<MsgId> out;
    if (hops.empty()) return out;
    for (const Layer& l : hops[0].plans[user - 1].layers)
        if (l.kind == LayerKind::fresh && l.id.user == user && l.id.half == 0) out.push_back(l.id);
    return out;
}

VerificationError::VerificationError(VerifyFailure f)
    : std::runtime_error("verification failed at hop " + std::to_string(f.hop + 1) + ", receiver " +
                         std::to_string(f.receiver) +
                         (f.step >= 0 ? ", step " + std::to_string(f.step + 1) : std::string()) + ": " + f.reason +
                         " (deficit " + f.deficit.str() + ")"),
      failure(std::move(f)) {}

VerifyReport verify_report(const MultiHopScheme& s) {
    VerifyReport rep;
    std::optional<VerifyFailure> decode_fail, struct_fail;
    auto structural = [&](int hop, int rx, std::string why) {
        if (!struct_fail) struct_fail = VerifyFailure{hop, rx, -1, std::move(why), Rational(0)};
    };
    const int L = static_cast<int>(s.hops.size());
    if (L != s.L || L < 1) {
        rep.failure = VerifyFailure{0, 0, -1, "hop count mismatch", Rational(0)};
        return rep;
    }
    for (int h = 0; h < L; ++h) {
        std::array<TransmitPlan, 2> mat = s.hops[h].plans;
        for (int i = 0; i < 2; ++i) {
            TransmitPlan& p = mat[i];
            if (p.node.hop != h || p.node.index != i + 1) structural(h, i + 1, "plan attached to the wrong node");
            std::vector<Layer> kept;
            std::optional<Layer> combination;
            for (Layer l : p.layers) {
                if (l.kind == LayerKind::relayed) {
                    if (h == 0) {
                        structural(h, i + 1, "source plan forwards a residual");
                        continue;
                    }
                    const auto& res = rep.reports[h - 1][i].residual;
                    if (!res) continue;
                    l.children = res->children;
                    l.top = res->top + l.shift;
                    combination = std::move(l);
                    continue;
                }
                if (h == 0 && l.id.user != i + 1)
                    structural(h, i + 1, "source transmits a foreign message " + l.id.str());
                if (h > 0 && !covered(rep.reports[h - 1][i].decoded, l.id))
                    structural(h, i + 1, "causality: relay re-encodes undecoded " + l.id.str());
                auto r = s.rate.find(l.id);
                if (r == s.rate.end() || r->second != l.gdof)
                    structural(h, i + 1, "layer gdof disagrees with the rate table for " + l.id.str());
                kept.push_back(std::move(l));
            }
            // the forwarded combination sits wherever its amplified top falls
            if (combination) {
                auto at = std::find_if(kept.begin(), kept.end(),
                                       [&](const Layer& x) { return x.top < combination->top; });
                kept.insert(at, std::move(*combination));
            }
            p.layers = std::move(kept);
        }
        std::array<DecodeReport, 2> reps;
        for (int k = 0; k < 2; ++k) {
            try {
                ReceiverView v = received_view(mat, s.alpha, k + 1);
                // zero-rate messages that fell below the noise floor are known trivially
                // a positive-rate one is a failed step with nothing above the floor to decode
                std::vector<DecodeStep> order;
                Knowledge trivial;
                const auto& full = s.hops[h].orders[k];
                for (size_t st = 0; st < full.size(); ++st) {
                    DecodeStep kept_ids;
                    for (const MsgId& id : full[st]) {
                        bool present = std::any_of(v.entries.begin(), v.entries.end(),
                                                   [&](const ViewEntry& e) { return e.id == id; });
                        auto r = s.rate.find(id);
                        if (present || r == s.rate.end()) {
                            kept_ids.push_back(id);
                            continue;
                        }
                        trivial.insert(id);
                        if (r->second.sign() > 0 && !decode_fail)
                            decode_fail = VerifyFailure{h, k + 1, static_cast<int>(st),
                                                        "cannot decode " + id.str() + ": below the noise floor",
                                                        r->second};
                    }
                    if (!kept_ids.empty()) order.push_back(std::move(kept_ids));
                }
                reps[k] = decode_feasible(v, order);
                if (!trivial.empty()) {
                    reps[k].decoded.insert(trivial.begin(), trivial.end());
                    reps[k].residual = residual_after(v, reps[k].decoded);
                }
            } catch (const std::invalid_argument& e) {
                structural(h, k + 1, e.what());
                reps[k].ok = false;
                continue;
            }
            if (!reps[k].ok && !decode_fail) {
                const StepRecord& st = reps[k].steps[reps[k].first_failure];
                std::string ids;
                for (const auto& id : st.ids) ids += (ids.empty() ? "" : "+") + id.str();
                decode_fail = VerifyFailure{h, k + 1, reps[k].first_failure, "cannot decode " + ids,
                                            st.required - st.sinr};
            }
        }
        rep.plans.push_back(mat);
        rep.reports.push_back(std::move(reps));
    }
    for (int h = 0; h < L; ++h)
        for (int i = 0; i < 2; ++i)
            if (auto err = validate_plan(rep.plans[h][i])) structural(h, i + 1, "invalid plan: " + *err);

    for (int u = 1; u <= 2; ++u) {
        Rational tot(0);
        for (const MsgId& m : s.source_messages(u)) {
            Rational r = s.rate.count(m) ? s.rate.at(m) : Rational(0);
            if (covered(rep.reports[L - 1][u - 1].decoded, m))
                tot += r;
            else if (r.sign() > 0)
                structural(L - 1, u, "destination misses " + m.str());
        }
        rep.per_user[u - 1] = tot;
    }
    if (rep.per_user[0] != rep.per_user[1]) structural(L - 1, 0, "asymmetric delivery");
    rep.total = rep.per_user[0] + rep.per_user[1];
    rep.failure = decode_fail ? decode_fail : struct_fail;
    rep.ok = !rep.failure;
    return rep;
}

GdofValue verify_scheme(const MultiHopScheme& s) {
    VerifyReport rep = verify_report(s);
    if (!rep.ok) throw VerificationError(*rep.failure);
    return {rep.total, s.regime, GdofKind::achievable_lower};
}

// ---------------------------------------------------------------- templates

SchemeTemplate onion_template(int L, int K, bool middle) {
    require_hops(L);
    if (K < 2 || K > L) throw DomainError("onion template needs 2 <= K <= L");
    SchemeTemplate t;
    t.L = L;
    t.K = K;
    t.middle = middle;
    t.name = "onion-L" + std::to_string(L) + "-K" + std::to_string(K) + (middle ? "-M" : "");
    auto add_var = [&](const std::string& n) {
        int idx = static_cast<int>(t.var_names.size());
        t.var_names.push_back(n);
        t.var_index[n] = idx;
        return idx;
    };
    std::vector<int> Tv(K + 1), Bv(K);
    for (int k = 1; k <= K; ++k) Tv[k] = add_var("d_T" + std::to_string(k));
    int Mv = middle ? add_var("d_M") : -1;
    for (int j = 1; j < K; ++j) Bv[j] = add_var("d_B" + std::to_string(j));

    const int Midx = K + 1;
    auto Bidx = [&](int j) { return K + 1 + j; };
    for (int u = 1; u <= 2; ++u) {
        for (int k = 1; k <= K; ++k) {
            t.rate[W(u, k)] = LinExpr::var(Tv[k]);
            t.rate[W(u, k, 1)] = LinExpr::var(Tv[k], Rational(1, 2));
            t.rate[W(u, k, 2)] = LinExpr::var(Tv[k], Rational(1, 2));
        }
        if (middle) t.rate[W(u, Midx)] = LinExpr::var(Mv);
        for (int j = 1; j < K; ++j) t.rate[W(u, Bidx(j))] = LinExpr::var(Bv[j]);
    }
    LinExpr obj;
    for (int k = 1; k <= K; ++k) obj += LinExpr::var(Tv[k]);
    if (middle) obj += LinExpr::var(Mv);
    for (int j = 1; j < K; ++j) obj += LinExpr::var(Bv[j]);
    t.per_user = obj;

    struct Item {
        MsgId id;
        int group;
        int penalty;
    };
    auto top_var = [&](int hop, int node, const MsgId& id) {
        bool shared = hop > 0 && id.half == 1;
        std::string n = shared ? "t[" + std::to_string(hop) + "," + id.str() + "]"
                               : "t[" + std::to_string(hop) + "," + std::to_string(node) + "," + id.str() + "]";
        auto it = t.var_index.find(n);
        return it != t.var_index.end() ? it->second : add_var(n);
    };
    auto make_plan = [&](int hop, int node, const std::vector<Item>& items, bool residual) {
        TemplatePlan p;
        p.node = {hop, node};
        for (const Item& it : items) {
            TemplateLayer l;
            l.id = it.id;
            l.group = it.group;
            l.penalty = it.penalty;
            l.top_var = top_var(hop, node, it.id);
            p.layers.push_back(l);
        }
        if (residual) {
            TemplateLayer r;
            r.relayed = true;
            r.group = 1;
            p.layers.push_back(r);
        }
        return p;
    };

    // first hop
    {
        std::array<TemplatePlan, 2> pl;
        std::array<std::vector<DecodeStep>, 2> od;
        for (int i = 1; i <= 2; ++i) {
            std::vector<Item> items;
            for (int k = 1; k <= K; ++k) items.push_back({W(i, k), 0, 0});
            if (middle) items.push_back({W(i, Midx), 0, 0});
            for (int j = 1; j < K; ++j) items.push_back({W(i, Bidx(j)), 1, 0});
            pl[i - 1] = make_plan(0, i, items, false);
            for (int k = 1; k <= K; ++k) od[i - 1].push_back({W(i, k)});
            if (middle) od[i - 1].push_back({W(i, Midx)});
            od[i - 1].push_back({W(3 - i, 1)});
        }
        t.plans.push_back(pl);
        t.orders.push_back(od);
    }
    // relay hops: one more interfering layer peeled per hop, then replay once the onion is exhausted
    for (int h = 1; h < L; ++h) {
        const int l = std::min(h, K - 1);
        const bool replay = h >= K;
        std::array<TemplatePlan, 2> pl;
        std::array<std::vector<DecodeStep>, 2> od;
        for (int i = 1; i <= 2; ++i) {
            const int o = 3 - i;
            std::vector<Item> items;
            items.push_back({W(i, l + 1), 0, 0});
            for (int k = 1; k <= l; ++k) {
                items.push_back({W(1, k, 1), 0, 0});
                items.push_back({W(2, k, 1), 0, 0});
            }
            for (int k = l + 2; k <= K; ++k) items.push_back({W(i, k), 0, 0});
            if (middle) items.push_back({W(i, Midx), 0, 0});
            for (int k = 1; k <= l; ++k) items.push_back({W(i, k, 2), 1, 0});
            for (int j = 1; j < l; ++j) items.push_back({W(i, Bidx(j)), 1, 0});
            if (replay) {
                items.push_back({W(i, Bidx(K - 1)), 2, 0});
                items.push_back({W(o, K), 2, 5});
            }
            pl[i - 1] = make_plan(h, i, items, !replay);

            auto& ord = od[i - 1];
            ord.push_back({W(i, l + 1)});
            for (int k = 1; k <= l; ++k) {
                ord.push_back({W(1, k, 1)});
                ord.push_back({W(2, k, 1)});
            }
            for (int k = l + 2; k <= K; ++k) ord.push_back({W(i, k)});
            if (middle) ord.push_back({W(i, Midx)});
            ord.push_back({W(o, l + 1)});
            for (int k = 1; k <= l; ++k) ord.push_back({W(i, k, 2)});
            for (int j = 1; j <= l; ++j) ord.push_back({W(i, Bidx(j))});
        }
        t.plans.push_back(pl);
        t.orders.push_back(od);
    }
    return t;
}

LinearProgram template_program(const SchemeTemplate& t, const Rational& alpha) {
    LinearProgram lp;
    for (const auto& n : t.var_names) lp.add_var(n);
    lp.set_objective(t.per_user);
    auto g = [&](const MsgId& id) { return t.rate.at(id); };

    for (const auto& [id, e] : t.rate) lp.add_ge(e);

    struct Sym {
        MsgId id;
        LinExpr exp;
        int ncross;
        bool fresh;
        int penalty;
    };
    std::array<std::vector<Sym>, 2> resid;
    for (size_t h = 0; h < t.plans.size(); ++h) {
        const auto& plans = t.plans[h];
        // power-interval constraints
        for (int i = 0; i < 2; ++i) {
            const TemplateLayer* prev = nullptr;
            bool first = true;
            for (const TemplateLayer& l : plans[i].layers) {
                if (l.relayed) {
                    for (const TemplateLayer& f : plans[i].layers)
                        if (!f.relayed) lp.add_le(g(f.id) - LinExpr::var(f.top_var) + l.shift);
                    continue;
                }
                LinExpr tv = LinExpr::var(l.top_var);
                lp.add_le(tv);
                if (first) lp.add_ge(tv);
                if (prev) lp.add_le(tv - LinExpr::var(prev->top_var) + g(prev->id));
                prev = &l;
                first = false;
            }
        }
        std::array<std::vector<Sym>, 2> next;
        for (int k = 0; k < 2; ++k) {
            std::vector<Sym> ents;
            for (int i = 0; i < 2; ++i) {
                Rational link = i == k ? Rational(1) : alpha;
                int cross = i == k ? 0 : 1;
                for (const TemplateLayer& l : plans[i].layers) {
                    if (l.relayed) {
                        for (const Sym& e : resid[i])
                            ents.push_back({e.id, LinExpr(link + l.shift) + e.exp, e.ncross + cross, false, 0});
                    } else {
                        ents.push_back({l.id, LinExpr(link) + LinExpr::var(l.top_var), cross, true, l.penalty});
                    }
                }
            }
            Knowledge known;
            for (const DecodeStep& step : t.orders[h][k]) {
                if (step.size() != 1) throw std::logic_error("template decode steps must be single");
                const MsgId& c = step[0];
                const Sym* sig = nullptr;
                for (const Sym& e : ents) {
                    if (e.id != c) continue;
                    auto key = [](const Sym& s) { return std::make_tuple(s.ncross + s.penalty, !s.fresh); };
                    if (!sig || key(e) < key(*sig)) sig = &e;
                }
                if (!sig) throw std::logic_error("template decodes an absent id " + c.str());
                LinExpr se = sig->exp;
                known.insert(c);
                lp.add_ge(se - g(c));
                for (const Sym& e : ents)
                    if (!covered(known, e.id)) lp.add_ge(se - e.exp - g(c));
            }
            for (const Sym& e : ents)
                if (!covered(known, e.id)) next[k].push_back(e);
        }
        resid = std::move(next);
    }
    return lp;
}

namespace {

std::mutex cache_mu;
std::map<std::string, std::vector<int>> basis_cache;

}  // namespace

std::vector<Rational> solve_template(const SchemeTemplate& t, const Rational& alpha) {
    LinearProgram lp = template_program(t, alpha);
    std::vector<int> warm;
    {
        std::lock_guard<std::mutex> g(cache_mu);
        auto it = basis_cache.find(t.name);
        if (it != basis_cache.end()) warm = it->second;
    }
    LpSolution sol = solve_lp(lp, warm.empty() ? nullptr : &warm);
    if (sol.status != LpStatus::optimal)
        throw std::logic_error("template " + t.name + " infeasible at alpha = " + alpha.str());
    {
        std::lock_guard<std::mutex> g(cache_mu);
        basis_cache[t.name] = sol.basis;
    }
    return sol.x;
}

MultiHopScheme instantiate(const SchemeTemplate& t, const Rational& alpha, const std::vector<Rational>& values,
                           std::string regime, std::string method) {
    if (values.size() != t.var_names.size()) throw std::invalid_argument("assignment size mismatch");
    MultiHopScheme s;
    s.alpha = alpha;
    s.L = t.L;
    s.regime = std::move(regime);
    s.method = std::move(method);
    for (const auto& [id, e] : t.rate) s.rate[id] = e.eval(values);
    for (size_t h = 0; h < t.plans.size(); ++h) {
        HopStage st;
        for (int i = 0; i < 2; ++i) {
            TransmitPlan p;
            p.node = t.plans[h][i].node;
            p.sparse = true;
            for (const TemplateLayer& tl : t.plans[h][i].layers) {
                Layer l;
                if (tl.relayed) {
                    l.kind = LayerKind::relayed;
                    l.shift = tl.shift;
                } else {
                    l.id = tl.id;
                    l.top = values[tl.top_var];
                    l.gdof = s.rate.at(tl.id);
                }
                p.layers.push_back(std::move(l));
            }
            st.plans[i] = std::move(p);
        }
        st.orders = t.orders[h];
        s.hops.push_back(std::move(st));
    }
    return s;
}

// ---------------------------------------------------------------- explicit schemes

namespace {

// Fills top variables: group 0 stacked down from 0, group 1 stacked so its last layer ends at anchor(hop).
template <class Anchor>
void stack_tops(const SchemeTemplate& t, std::vector<Rational>& v, Anchor anchor) {
    for (size_t h = 0; h < t.plans.size(); ++h) {
        for (int i = 0; i < 2; ++i) {
            const auto& ls = t.plans[h][i].layers;
            Rational cur(0);
            for (const auto& l : ls)
                if (!l.relayed && l.group == 0) {
                    v[l.top_var] = cur;
                    cur -= t.rate.at(l.id).eval(v);
                }
            Rational bottom = anchor(static_cast<int>(h));
            for (auto it = ls.rbegin(); it != ls.rend(); ++it)
                if (!it->relayed && it->group == 1) {
                    bottom += t.rate.at(it->id).eval(v);
                    v[it->top_var] = bottom;
                }
        }
    }
}

const SchemeTemplate& cached_template(int L, int K, bool middle) {
    static std::mutex mu;
    static std::map<std::tuple<int, int, bool>, SchemeTemplate> cache;
    std::lock_guard<std::mutex> g(mu);
    auto key = std::make_tuple(L, K, middle);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, onion_template(L, K, middle)).first;
    return it->second;
}

std::string regime_tag(const Rational& a, int L) { return sum_gdof_fp(a, L).regime; }

MultiHopScheme explicit_regime1(const Rational& a, int L) {
    const SchemeTemplate& t = cached_template(L, L, true);
    std::vector<Rational> d = regime1_split(a, L);
    std::vector<Rational> v(t.var_names.size(), Rational(0));
    for (int k = 1; k <= L; ++k) v[t.var("d_T" + std::to_string(k))] = d[k - 1];
    v[t.var("d_M")] = d[L];
    for (int j = 1; j < L; ++j) v[t.var("d_B" + std::to_string(j))] = d[L + j];
    stack_tops(t, v, [&](int h) {
        Rational r(-1);
        if (h > 0)
            for (int k = h + 1; k <= L; ++k) r += d[k - 1];
        return r;
    });
    return instantiate(t, a, v, regime_tag(a, L), "explicit");
}

}  // namespace

std::vector<Rational> regime1_split(const Rational& a, int L) {
    require_hops(L);
    const Rational n = pow2(L) - 1;
    std::vector<Rational> d;
    for (int k = 1; k <= L; ++k) d.push_back(a * pow2(L + 1 - k) / (2 * n));
    d.push_back(1 - 2 * a);
    for (int j = 1; j < L; ++j) d.push_back(d[j]);
    return d;
}

MultiHopScheme synth_df(const Rational& a, int L) {
    require_weak(a);
    require_hops(L);
    MultiHopScheme s;
    s.alpha = a;
    s.L = L;
    s.regime = regime_tag(a, L);
    s.method = "df";
    for (int u = 1; u <= 2; ++u) {
        s.rate[W(u, 1)] = a / 2;
        s.rate[W(u, 2)] = 1 - a;
    }
    for (int h = 0; h < L; ++h) {
        HopStage st;
        for (int i = 1; i <= 2; ++i) {
            TransmitPlan p;
            p.node = {h, i};
            p.sparse = true;
            Layer common{W(i, 1), LayerKind::fresh, Rational(0), a / 2, {}, -1};
            Layer priv{W(i, 2), LayerKind::fresh, -a, 1 - a, {}, -1};
            p.layers = {common, priv};
            st.plans[i - 1] = std::move(p);
            st.orders[i - 1] = {{W(i, 1), W(3 - i, 1), W(i, 2)}};
        }
        s.hops.push_back(std::move(st));
    }
    return s;
}

MultiHopScheme synth_2hop(const Rational& a) {
    require_weak(a);
    if (a <= Rational(1, 2)) return explicit_regime1(a, 2);
    if (a > Rational(2, 3)) return synth_df(a, 2);
    const SchemeTemplate& t = cached_template(2, 2, false);
    std::vector<Rational> v(t.var_names.size(), Rational(0));
    Rational d1, d2, d3, relay_anchor;
    if (a <= Rational(4, 7)) {
        d1 = (2 - 2 * a) / 3;
        d2 = (1 - a) / 3;
        d3 = (5 * a - 2) / 3;
        relay_anchor = -1 + d3;
    } else {
        d1 = 2 - 3 * a;
        d2 = 2 * a - 1;
        d3 = a / 2;
        relay_anchor = -a - d1 / 2;
    }
    v[t.var("d_T1")] = d1;
    v[t.var("d_T2")] = d2;
    v[t.var("d_B1")] = d3;
    stack_tops(t, v, [&](int h) { return h == 0 ? Rational(-1) : relay_anchor; });
    return instantiate(t, a, v, regime_tag(a, 2), "explicit");
}

MultiHopScheme synth_Lhop(const Rational& a, int L) {
    require_weak(a);
    require_hops(L);
    // at the shared breakpoint 1/2 the onion scheme is used: it merges the bottom layers
    if (a < Rational(1, 2)) return explicit_regime1(a, L);
    if (a > Rational(2, 3)) return synth_df(a, L);
    int K = L;
    for (int k = 2; k < L; ++k)
        if (weak_breakpoint(k) <= a) {
            K = k;
            break;
        }
    const SchemeTemplate& t = cached_template(L, K, false);
    std::vector<Rational> v = solve_template(t, a);
    Rational per_user = t.per_user.eval(v);
    if (2 * per_user != sum_gdof_fp(a, L).value)
        throw std::logic_error("template optimum " + (2 * per_user).str() + " misses the closed form at alpha = " +
                               a.str());
    return instantiate(t, a, v, regime_tag(a, L), "lp");
}

MultiHopScheme synth_very_strong(const Rational& a, int L) {
    require_hops(L);
    if (L % 2 == 0) throw DomainError("very strong scheme is for odd L");
    if (a < Rational(L + 1)) throw DomainError("very strong scheme needs alpha >= L+1");
    MultiHopScheme s;
    s.alpha = a;
    s.L = L;
    s.regime = "very-strong";
    s.method = "very-strong";
    for (int u = 1; u <= 2; ++u)
        for (int k = 1; k <= L; ++k) s.rate[W(u, k)] = 1;
    std::array<std::vector<MsgId>, 2> content;
    for (int i = 1; i <= 2; ++i)
        for (int k = 1; k <= L; ++k) content[i - 1].push_back(W(i, k));
    for (int h = 0; h < L; ++h) {
        HopStage st;
        for (int i = 0; i < 2; ++i) {
            TransmitPlan p;
            p.node = {h, i + 1};
            for (int k = 0; k < L; ++k)
                p.layers.push_back({content[i][k], LayerKind::fresh, Rational(-k), Rational(1), {}, -1});
            st.plans[i] = std::move(p);
        }
        // each receiver peels the whole cross stack, then the top direct layer
        std::array<std::vector<MsgId>, 2> next;
        for (int k = 0; k < 2; ++k) {
            const auto& cross = content[1 - k];
            for (const MsgId& m : cross) st.orders[k].push_back({m});
            st.orders[k].push_back({content[k][0]});
            next[k].assign(cross.begin() + 1, cross.end());
            next[k].push_back(content[k][0]);
        }
        content = next;
        s.hops.push_back(std::move(st));
    }
    return s;
}

namespace {

// Even L, alpha > 1: the scheme for 1/alpha with exponents scaled by alpha and relays relabelled on odd layers.
MultiHopScheme strong_even(const Rational& a, int L) {
    MultiHopScheme base = synth(1 / a, L);
    MultiHopScheme s = base;
    s.alpha = a;
    s.regime = regime_tag(a, L);
    s.method = base.method + "-swapped";
    for (auto& [id, r] : s.rate) r *= a;
    for (int h = 0; h < L; ++h) {
        const bool swap_tx = h % 2 == 1;
        const bool swap_rx = (h + 1) % 2 == 1 && h + 1 < L;
        HopStage st;
        for (int i = 0; i < 2; ++i) {
            TransmitPlan p = base.hops[h].plans[swap_tx ? 1 - i : i];
            p.node = {h, i + 1};
            for (Layer& l : p.layers) {
                l.top *= a;
                l.gdof *= a;
                l.shift *= a;
            }
            st.plans[i] = std::move(p);
            st.orders[i] = base.hops[h].orders[swap_rx ? 1 - i : i];
        }
        s.hops[h] = std::move(st);
    }
    return s;
}

}  // namespace

MultiHopScheme synth(const Rational& a, int L) {
    if (a.sign() < 0) throw DomainError("alpha must be non-negative");
    require_hops(L);
    if (a > Rational(1)) {
        if (L % 2 == 1) {
            if (a >= Rational(L + 1)) return synth_very_strong(a, L);
            sum_gdof_fp(a, L);  // raises the open-problem error
            throw OpenProblem("open-problem: odd L strong regime");
        }
        return strong_even(a, L);
    }
    return L == 2 ? synth_2hop(a) : synth_Lhop(a, L);
}

bool end_to_end(const Rational& a, int L) {
    GdofValue target = sum_gdof_fp(a, L);
    return verify_scheme(synth(a, L)).value == target.value;
}

MultiHopScheme tamper(const MultiHopScheme& scheme, const MsgId& id, const Rational& delta) {
    MultiHopScheme s = scheme;
    auto bump = [&](const MsgId& m, const Rational& d) {
        auto it = s.rate.find(m);
        if (it != s.rate.end()) it->second += d;
    };
    if (!s.rate.count(id)) throw std::invalid_argument("tamper: unknown message " + id.str());
    bump(id, delta);
    if (id.half == 0) {
        bump(id.with_half(1), delta / 2);
        bump(id.with_half(2), delta / 2);
    }
    for (auto& st : s.hops)
        for (auto& p : st.plans)
            for (auto& l : p.layers)
                if (l.kind == LayerKind::fresh) l.gdof = s.rate.at(l.id);
    return s;
}

}  // namespace hopgdof
