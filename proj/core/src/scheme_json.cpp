#include "hopgdof/schemes.hpp"

#include "json.hpp"

namespace hopgdof {

using nlohmann::json;

namespace {

json rat(const Rational& r) { return json::array({std::stoll(r.num_str()), std::stoll(r.den_str())}); }

Rational unrat(const json& j) {
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    return Rational(j.at(0).get<long>(), j.at(1).get<long>());
}

json id_json(const MsgId& id) {
    return {{"user", id.user}, {"index", id.index}, {"half", id.half}, {"label", id.str()}};
}

MsgId id_from(const json& j) { return {j.at("user").get<int>(), j.at("index").get<int>(), j.value("half", 0)}; }

json layer_json(const Layer& l) {
    json j;
    if (l.kind == LayerKind::fresh) {
        j = {{"kind", "fresh"}, {"id", id_json(l.id)}, {"top", rat(l.top)}, {"gdof", rat(l.gdof)}};
    } else {
        j = {{"kind", "relayed"}, {"shift", rat(l.shift)}};
        if (!l.children.empty()) {
            j["top"] = rat(l.top);
            json ch = json::array();
            for (const auto& c : l.children)
                ch.push_back({{"id", id_json(c.id)}, {"offset", rat(c.offset)}, {"gdof", rat(c.gdof)}});
            j["children"] = ch;
        }
    }
    return j;
}

}  // namespace

std::string scheme_to_json(const MultiHopScheme& s, const VerifyReport* rep) {
    json j;
    j["alpha"] = rat(s.alpha);
    j["L"] = s.L;
    j["regime"] = s.regime;
    j["method"] = s.method;
    json rates = json::array();
    for (const auto& [id, r] : s.rate) rates.push_back({{"id", id_json(id)}, {"gdof", rat(r)}});
    j["rates"] = rates;
    json hops = json::array();
    for (size_t h = 0; h < s.hops.size(); ++h) {
        json hj;
        hj["hop"] = h;
        json plans = json::array();
        for (int i = 0; i < 2; ++i) {
            const TransmitPlan& p = rep && h < rep->plans.size() ? rep->plans[h][i] : s.hops[h].plans[i];
            json pj{{"node", p.node.index}, {"sparse", p.sparse}};
            json ls = json::array();
            for (const Layer& l : p.layers) ls.push_back(layer_json(l));
            pj["layers"] = ls;
            plans.push_back(pj);
        }
        hj["plans"] = plans;
        json orders = json::array();
        for (int k = 0; k < 2; ++k) {
            json ok = json::array();
            for (const auto& step : s.hops[h].orders[k]) {
                json sj = json::array();
                for (const auto& id : step) sj.push_back(id_json(id));
                ok.push_back(sj);
            }
            orders.push_back(ok);
        }
        hj["orders"] = orders;
        hops.push_back(hj);
    }
    j["hops"] = hops;
    if (rep) {
        json v{{"ok", rep->ok}, {"total", rat(rep->total)},
               {"per_user", json::array({rat(rep->per_user[0]), rat(rep->per_user[1])})}};
        if (rep->failure) {
            const auto& f = *rep->failure;
            v["failure"] = {{"hop", f.hop}, {"receiver", f.receiver}, {"step", f.step},
                            {"reason", f.reason}, {"deficit", rat(f.deficit)}};
        }
        json steps = json::array();
        for (size_t h = 0; h < rep->reports.size(); ++h)
            for (int k = 0; k < 2; ++k)
                for (const auto& st : rep->reports[h][k].steps) {
                    json ids = json::array();
                    for (const auto& id : st.ids) ids.push_back(id.str());
                    steps.push_back({{"hop", h}, {"receiver", k + 1}, {"ids", ids}, {"signal", rat(st.signal)},
                                     {"interference", rat(st.interference)}, {"sinr", rat(st.sinr)},
                                     {"required", rat(st.required)}, {"pass", st.pass}});
                }
        v["steps"] = steps;
        j["verification"] = v;
    }
    return j.dump(2);
}

MultiHopScheme scheme_from_json(const std::string& text) {
    json j = json::parse(text);
    MultiHopScheme s;
    s.alpha = unrat(j.at("alpha"));
    s.L = j.at("L").get<int>();
    s.regime = j.value("regime", "");
    s.method = j.value("method", "");
    for (const auto& r : j.at("rates")) s.rate[id_from(r.at("id"))] = unrat(r.at("gdof"));
    for (const auto& hj : j.at("hops")) {
        HopStage st;
        int h = hj.at("hop").get<int>();
        const auto& plans = hj.at("plans");
        if (plans.size() != 2) throw std::invalid_argument("each hop needs two plans");
        for (int i = 0; i < 2; ++i) {
            const auto& pj = plans[i];
            TransmitPlan p;
            p.node = {h, pj.at("node").get<int>()};
            p.sparse = pj.value("sparse", false);
            for (const auto& lj : pj.at("layers")) {
                Layer l;
                if (lj.at("kind") == "relayed") {
                    l.kind = LayerKind::relayed;
                    l.shift = unrat(lj.at("shift"));
                } else {
                    l.id = id_from(lj.at("id"));
                    l.top = unrat(lj.at("top"));
                    l.gdof = unrat(lj.at("gdof"));
                }
                p.layers.push_back(std::move(l));
            }
            st.plans[i] = std::move(p);
        }
        const auto& orders = hj.at("orders");
        for (int k = 0; k < 2; ++k)
            for (const auto& sj : orders.at(k)) {
                DecodeStep step;
                for (const auto& idj : sj) step.push_back(id_from(idj));
                st.orders[k].push_back(std::move(step));
            }
        s.hops.push_back(std::move(st));
    }
    return s;
}

}  // namespace hopgdof
