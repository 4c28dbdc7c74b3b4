#include "hopgdof/montecarlo.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace hopgdof::mc {

namespace {

using cplx = std::complex<double>;
using Vec = std::vector<cplx>;

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double norm2(const Vec& v) {
    double s = 0;
    for (const auto& c : v) s += std::norm(c);
    return s;
}

// Unit-variance independent Gaussian sources: one per codeword per transmitting node, one per receiver noise.
class Atoms {
public:
    int fresh(int hop, int node, const MsgId& id) {
        auto key = std::make_tuple(hop, node, id);
        auto it = fresh_.find(key);
        if (it != fresh_.end()) return it->second;
        msgs_.push_back(id);
        return fresh_[key] = static_cast<int>(msgs_.size()) - 1;
    }
    int noise() {
        msgs_.push_back(MsgId::noise());
        return static_cast<int>(msgs_.size()) - 1;
    }
    const MsgId& msg(size_t a) const { return msgs_[a]; }
    size_t size() const { return msgs_.size(); }

private:
    std::map<std::tuple<int, int, MsgId>, int> fresh_;
    std::vector<MsgId> msgs_;
};

void axpy(Vec& y, cplx a, const Vec& x) {
    if (y.size() < x.size()) y.resize(x.size());
    for (size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

// One decoding step: capacity (bits) of every nonempty subset of the jointly decoded ids.
struct Event {
    std::vector<MsgId> ids;
    std::vector<double> cap;  // indexed by subset mask
};

struct Sim {
    const MultiHopScheme& scheme;
    Atoms atoms;
    std::vector<Event> events;

    Rational rate_of(const MsgId& id) const {
        auto it = scheme.rate.find(id);
        return it == scheme.rate.end() ? Rational(0) : it->second;
    }
    bool trivially_known(const MsgId& id) const {
        return !id.is_noise() && (rate_of(id).sign() == 0 || rate_of(id.parent()).sign() == 0);
    }
    bool known(const Knowledge& k, const MsgId& id) const {
        return !id.is_noise() && (trivially_known(id) || covered(k, id));
    }

    // Walks one decode order, recording each step's multiple-access region; returns what was decoded.
    Knowledge decode(const Vec& y, const std::vector<DecodeStep>& order) {
        Knowledge k;
        for (const auto& step : order) {
            Event ev;
            for (const auto& id : step)
                if (!known(k, id) && rate_of(id).sign() > 0) ev.ids.push_back(id);
            if (!ev.ids.empty()) {
                std::vector<double> sig(ev.ids.size(), 0.0);
                double interference = 0;
                for (size_t a = 0; a < y.size(); ++a) {
                    const MsgId& m = atoms.msg(a);
                    if (known(k, m)) continue;
                    auto it = std::find(ev.ids.begin(), ev.ids.end(), m);
                    if (it != ev.ids.end())
                        sig[it - ev.ids.begin()] += std::norm(y[a]);
                    else
                        interference += std::norm(y[a]);
                }
                const size_t n = ev.ids.size();
                ev.cap.assign(size_t(1) << n, 0.0);
                for (size_t mask = 1; mask < ev.cap.size(); ++mask) {
                    double s = 0;
                    for (size_t j = 0; j < n; ++j)
                        if (mask >> j & 1) s += sig[j];
                    ev.cap[mask] = std::log2(1 + s / interference);
                }
                events.push_back(std::move(ev));
            }
            for (const auto& id : step) k.insert(id);
        }
        return k;
    }

    // Largest sum of source-message rates meeting every recorded step; halves carry half their parent's rate.
    std::array<double, 2> best_rates() const {
        std::map<MsgId, int> var;
        LinearProgram lp;
        auto v = [&](const MsgId& parent) {
            auto it = var.find(parent);
            if (it != var.end()) return it->second;
            int i = lp.add_var(parent.str());
            lp.add_ge(LinExpr::var(i));
            return var[parent] = i;
        };
        double scale = 1;
        for (const auto& ev : events)
            for (double c : ev.cap) scale = std::max(scale, 1 + c);
        for (const auto& ev : events)
            for (size_t mask = 1; mask < ev.cap.size(); ++mask) {
                LinExpr e;
                for (size_t j = 0; j < ev.ids.size(); ++j)
                    if (mask >> j & 1) e += LinExpr::var(v(ev.ids[j].parent()), ev.ids[j].half ? Rational(1, 2) : Rational(1));
                lp.add_le(e - Rational(mpq_class(ev.cap[mask] / scale)));
            }
        LinExpr obj;
        for (int u = 1; u <= 2; ++u)
            for (const auto& m : scheme.source_messages(u))
                if (rate_of(m).sign() > 0) obj += LinExpr::var(v(m.parent()));
        lp.set_objective(obj);
        LpFloatSolution sol = solve_lp_float(lp);
        if (sol.status != LpStatus::optimal) throw std::logic_error("rate allocation program not optimal");
        std::array<double, 2> out{};
        for (int u = 1; u <= 2; ++u)
            for (const auto& m : scheme.source_messages(u))
                if (rate_of(m).sign() > 0) out[u - 1] += std::max(0.0, sol.x[var.at(m.parent())] * scale);
        return out;
    }
};

// Difference form: layers sharing the j-th distinct top split P^{u_j} - P^{u_{j+1}}; empty layers get nothing.
std::vector<double> layer_powers(const TransmitPlan& plan, double P, const Sim& sim) {
    std::vector<double> tops;
    auto active = [&](const Layer& l) { return l.kind == LayerKind::relayed || sim.rate_of(l.id).sign() > 0; };
    for (const auto& l : plan.layers)
        if (active(l)) tops.push_back(l.top.to_double());
    std::sort(tops.begin(), tops.end(), std::greater<>());
    tops.erase(std::unique(tops.begin(), tops.end()), tops.end());
    std::vector<double> p(plan.layers.size(), 0.0);
    for (size_t l = 0; l < plan.layers.size(); ++l) {
        if (!active(plan.layers[l])) continue;
        double t = plan.layers[l].top.to_double();
        size_t j = std::find(tops.begin(), tops.end(), t) - tops.begin();
        double share = std::pow(P, t) - (j + 1 < tops.size() ? std::pow(P, tops[j + 1]) : 0.0);
        int count = 0;
        for (const auto& o : plan.layers)
            if (active(o) && o.top.to_double() == t) ++count;
        p[l] = share / count;
    }
    return p;
}

}  // namespace

std::vector<double> log_grid(double lo, double hi, int n) {
    if (n < 2 || !(lo > 0) || !(hi > lo)) throw std::invalid_argument("log grid needs 0 < lo < hi and n >= 2");
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = std::pow(10.0, std::log10(lo) + (std::log10(hi) - std::log10(lo)) * i / (n - 1));
    return g;
}

SimConfig default_config() {
    SimConfig c;
    c.P_grid = log_grid(1e4, 1e8, 9);
    return c;
}

void validate(const SimConfig& c) {
    if (c.P_grid.size() < 2) throw std::invalid_argument("P grid needs at least 2 points");
    for (size_t i = 0; i < c.P_grid.size(); ++i) {
        if (!(c.P_grid[i] > 0)) throw std::invalid_argument("P grid must be positive");
        if (i && !(c.P_grid[i] > c.P_grid[i - 1])) throw std::invalid_argument("P grid must be strictly increasing");
    }
    if (c.trials < 1) throw std::invalid_argument("need at least one trial");
    if (!(c.delta >= 1)) throw std::invalid_argument("delta must be at least 1");
}

ChannelRealization sample_channels(const SimConfig& config, int L, std::uint64_t trial) {
    if (!(config.delta >= 1)) throw std::invalid_argument("delta must be at least 1");
    std::mt19937_64 rng(splitmix(splitmix(config.seed) ^ trial));
    std::uniform_real_distribution<double> mag(1.0 / config.delta, config.delta);
    std::bernoulli_distribution neg(0.5);
    auto comp = [&] {
        double v = config.delta == 1 ? 1.0 : mag(rng);
        return neg(rng) ? -v : v;
    };
    ChannelRealization ch;
    ch.delta = config.delta;
    ch.hops.resize(L);
    for (auto& h : ch.hops)
        for (auto& row : h)
            for (auto& g : row) {
                double re = comp();
                g = cplx(re, comp());
            }
    return ch;
}

SimResult simulate_sumrate(const MultiHopScheme& scheme, const ChannelRealization& channels, double P) {
    if (static_cast<int>(channels.hops.size()) != scheme.L || static_cast<int>(scheme.hops.size()) != scheme.L)
        throw std::invalid_argument("scheme and channel hop counts differ");
    if (!(P > 0)) throw std::invalid_argument("P must be positive");
    VerifyReport rep = verify_report(scheme);
    if (!rep.ok) throw VerificationError(*rep.failure);

    Sim sim{scheme, {}, {}};
    SimResult out;
    const double a = scheme.alpha.to_double();
    std::array<Vec, 2> residual;
    for (int h = 0; h < scheme.L; ++h) {
        std::array<Vec, 2> x;
        for (int i = 0; i < 2; ++i) {
            const TransmitPlan& plan = rep.plans[h][i];
            std::vector<double> p = layer_powers(plan, P, sim);
            for (size_t l = 0; l < plan.layers.size(); ++l) {
                const Layer& layer = plan.layers[l];
                if (p[l] <= 0) continue;
                if (layer.kind == LayerKind::fresh) {
                    Vec e(sim.atoms.fresh(h, i + 1, layer.id) + 1);
                    e.back() = std::sqrt(p[l]);
                    axpy(x[i], 1.0, e);
                } else {
                    double r = norm2(residual[i]);
                    if (r > 0) axpy(x[i], std::sqrt(p[l] / r), residual[i]);
                }
            }
            out.max_tx_power = std::max(out.max_tx_power, norm2(x[i]));
        }
        const HopGains& g = channels.hops[h];
        for (int k = 0; k < 2; ++k) {
            const int o = 1 - k;
            Vec y;
            axpy(y, std::sqrt(P) * g[k][k] / std::sqrt(2.0), x[k]);
            axpy(y, std::sqrt(std::pow(P, a)) * g[k][o] / std::sqrt(2.0), x[o]);
            Vec z(sim.atoms.noise() + 1);
            z.back() = 1;
            axpy(y, 1.0, z);
            Knowledge known = sim.decode(y, scheme.hops[h].orders[k]);
            for (size_t at = 0; at < y.size(); ++at)
                if (sim.known(known, sim.atoms.msg(at))) y[at] = 0;
            residual[k] = std::move(y);
        }
    }
    out.per_user = sim.best_rates();
    out.sum = out.per_user[0] + out.per_user[1];
    return out;
}

std::pair<double, double> fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit needs at least 2 points");
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    if (sxx == 0) throw std::invalid_argument("fit needs distinct abscissae");
    double slope = sxy / sxx;
    return {slope, my - slope * mx};
}

SlopeEstimate estimate_slope(const MultiHopScheme& scheme, const SimConfig& config) {
    validate(config);
    SlopeEstimate est;
    est.alpha = scheme.alpha;
    est.L = scheme.L;
    est.P = config.P_grid;
    est.target = sum_gdof_fp(scheme.alpha, scheme.L).value;
    std::vector<std::vector<double>> samples(config.P_grid.size());
    for (int t = 0; t < config.trials; ++t) {
        ChannelRealization ch = sample_channels(config, scheme.L, static_cast<std::uint64_t>(t));
        for (size_t i = 0; i < config.P_grid.size(); ++i)
            samples[i].push_back(simulate_sumrate(scheme, ch, config.P_grid[i]).sum);
    }
    for (const auto& s : samples) {
        double m = 0;
        for (double v : s) m += v;
        m /= static_cast<double>(s.size());
        double var = 0;
        for (double v : s) var += (v - m) * (v - m);
        double hw = s.size() > 1 ? 1.96 * std::sqrt(var / static_cast<double>(s.size() - 1) / static_cast<double>(s.size())) : 0;
        est.mean_rate.push_back(m);
        est.ci_halfwidth.push_back(hw);
    }
    const size_t from = config.P_grid.size() / 2;
    std::vector<double> x, y;
    for (size_t i = from; i < config.P_grid.size(); ++i) {
        x.push_back(std::log2(config.P_grid[i]));
        y.push_back(est.mean_rate[i]);
    }
    std::tie(est.slope, est.intercept) = fit_line(x, y);
    return est;
}

std::string SlopeEstimate::to_csv() const {
    std::ostringstream os;
    os << "alpha,L,P,mean_rate,ci_halfwidth\n" << std::setprecision(12);
    for (size_t i = 0; i < P.size(); ++i)
        os << alpha.str() << ',' << L << ',' << P[i] << ',' << mean_rate[i] << ',' << ci_halfwidth[i] << '\n';
    return os.str();
}

std::string SlopeEstimate::to_json() const {
    nlohmann::json j{{"alpha", alpha.str()},       {"L", L},
                     {"P", P},                     {"mean_rate", mean_rate},
                     {"ci_halfwidth", ci_halfwidth}, {"slope", slope},
                     {"intercept", intercept},     {"target", target.str()},
                     {"target_value", target.to_double()}, {"error", slope - target.to_double()}};
    return j.dump(2);
}

}  // namespace hopgdof::mc
