#include "hopgdof/layering.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace hopgdof {

std::string MsgId::str() const {
    if (is_noise()) return "noise";
    std::string s = "W" + std::to_string(user) + "," + std::to_string(index);
    if (half) s += "^" + std::to_string(half);
    return s;
}

bool covered(const Knowledge& known, const MsgId& id) {
    if (id.is_noise()) return false;
    if (known.count(id)) return true;
    if (id.half) return known.count(id.parent()) > 0;
    return known.count(id.with_half(1)) && known.count(id.with_half(2));
}

std::optional<std::string> validate_plan(const TransmitPlan& plan) {
    const auto& ls = plan.layers;
    if (ls.empty()) return std::nullopt;
    if (ls.front().top != Rational(0)) return "first layer must sit at power exponent 0";
    for (size_t k = 0; k < ls.size(); ++k) {
        const Layer& l = ls[k];
        std::string where = "layer " + std::to_string(k);
        if (l.top > Rational(0)) return where + ": top above 0";
        if (l.kind == LayerKind::fresh) {
            if (l.gdof.sign() < 0) return where + ": negative gdof";
            if (l.id.is_noise()) return where + ": fresh layer without a message";
        } else {
            if (l.children.empty()) return where + ": empty combination";
            if (l.children.front().offset != Rational(0)) return where + ": combination offsets must start at 0";
            for (size_t c = 1; c < l.children.size(); ++c)
                if (l.children[c].offset > l.children[c - 1].offset)
                    return where + ": combination offsets not descending";
        }
        if (k == 0) continue;
        const Layer& p = ls[k - 1];
        if (l.top > p.top) return where + ": tops not descending";
        if (l.top == p.top && l.kind == LayerKind::fresh && p.kind == LayerKind::fresh && p.gdof.sign() != 0)
            return where + ": shares its top with a non-empty layer";
        if (p.kind == LayerKind::fresh && l.kind == LayerKind::fresh) {
            Rational width = p.top - l.top;
            if (p.gdof > width) return "layer " + std::to_string(k - 1) + ": gdof exceeds its width";
            if (!plan.sparse && p.gdof != width) return "layer " + std::to_string(k - 1) + ": gap in a dense plan";
        }
        // a layer directly above a combination may reach down to the amplified noise floor
        if (p.kind == LayerKind::fresh && l.kind == LayerKind::relayed && p.gdof > p.top - l.shift)
            return "layer " + std::to_string(k - 1) + ": gdof reaches below the noise floor";
    }
    return std::nullopt;
}

ReceiverView received_view(const std::array<TransmitPlan, 2>& plans, const Rational& alpha,
                           int receiver_index) {
    if (receiver_index != 1 && receiver_index != 2) throw std::invalid_argument("receiver index must be 1 or 2");
    ReceiverView v;
    v.receiver = {plans[0].node.hop, receiver_index};
    for (int t = 0; t < 2; ++t) {
        const TransmitPlan& plan = plans[t];
        for (size_t k = 0; k < plan.layers.size(); ++k) {
            if (plan.layers[k].top > Rational(0) || (k > 0 && plan.layers[k].top > plan.layers[k - 1].top))
                throw std::invalid_argument("malformed plan: non-monotone tops");
        }
        Rational link = plan.node.index == receiver_index ? Rational(1) : alpha;
        for (const Layer& l : plan.layers) {
            if (l.kind == LayerKind::fresh) {
                v.entries.push_back({l.id, link + l.top, l.gdof, plan.node.index, true});
            } else {
                for (const Child& c : l.children)
                    v.entries.push_back({c.id, link + l.top + c.offset, c.gdof, plan.node.index, false});
            }
        }
    }
    std::stable_sort(v.entries.begin(), v.entries.end(),
                     [](const ViewEntry& a, const ViewEntry& b) { return a.exponent > b.exponent; });
    return v;
}

namespace {

Rational interference_level(const ReceiverView& view, const Knowledge& known) {
    Rational inter(0);
    for (const auto& e : view.entries)
        if (!covered(known, e.id) && e.exponent > inter) inter = e.exponent;
    return inter;
}

}  // namespace

DecodeReport decode_feasible(const ReceiverView& view, const std::vector<DecodeStep>& order) {
    std::map<MsgId, Rational> rate;
    for (const auto& e : view.entries)
        rate[e.id] = max(rate.count(e.id) ? rate[e.id] : Rational(0), e.gdof);

    DecodeReport rep;
    Knowledge known;
    for (const DecodeStep& step : order) {
        if (step.empty()) throw std::invalid_argument("empty decode step");
        std::vector<Rational> sig;
        for (const MsgId& id : step) {
            bool found = false;
            Rational s;
            for (const auto& e : view.entries)
                if (e.id == id && (!found || e.exponent > s)) { s = e.exponent; found = true; }
            if (!found) throw std::invalid_argument("decode order names an id absent at the receiver: " + id.str());
            sig.push_back(s);
        }
        Knowledge after = known;
        after.insert(step.begin(), step.end());
        StepRecord rec;
        rec.ids = step;
        rec.interference = interference_level(view, after);
        rec.pass = true;
        auto need = [&](const MsgId& id) { return rate.count(id) ? rate[id] : Rational(0); };
        if (step.size() == 1) {
            rec.signal = sig[0];
            rec.sinr = sig[0] - rec.interference;
            rec.required = need(step[0]);
            rec.pass = rec.sinr >= rec.required;
        } else {
            if (step.size() > 12) throw std::invalid_argument("joint decoding group too large");
            // every nonempty subset: sum of rates <= strongest signal in it over the interference floor
            Rational worst_slack;
            bool first = true;
            for (unsigned mask = 1; mask < (1u << step.size()); ++mask) {
                Rational sum(0), top;
                bool any = false;
                for (size_t j = 0; j < step.size(); ++j) {
                    if (!(mask >> j & 1)) continue;
                    sum += need(step[j]);
                    if (!any || sig[j] > top) { top = sig[j]; any = true; }
                }
                Rational slack = top - rec.interference - sum;
                if (first || slack < worst_slack) {
                    worst_slack = slack;
                    rec.signal = top;
                    rec.sinr = top - rec.interference;
                    rec.required = sum;
                    first = false;
                }
            }
            rec.pass = worst_slack.sign() >= 0;
        }
        if (!rec.pass && rep.ok) {
            rep.ok = false;
            rep.first_failure = static_cast<int>(rep.steps.size());
        }
        rep.steps.push_back(std::move(rec));
        known = std::move(after);
    }
    rep.decoded = known;
    rep.residual = residual_after(view, known);
    return rep;
}

std::optional<Layer> residual_after(const ReceiverView& view, const Knowledge& decoded) {
    Layer r;
    r.kind = LayerKind::relayed;
    r.gdof = 0;
    for (const auto& e : view.entries) {
        if (covered(decoded, e.id) || e.exponent.sign() <= 0) continue;
        if (r.children.empty()) r.top = e.exponent;
        r.children.push_back({e.id, e.exponent - r.top, e.gdof});
    }
    if (r.children.empty()) return std::nullopt;
    return r;
}

Layer amplify(Layer residual, const Rational& target_top) {
    residual.top = target_top;
    return residual;
}

}  // namespace hopgdof
