#include "hopgdof/detmodel.hpp"

#include "json.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>
#include <unordered_map>

namespace hopgdof::det {

namespace {

std::uint64_t to_u64(const mpz_class& z) {
    if (z > mpz_class(std::to_string(UINT64_MAX))) throw std::overflow_error("power alphabet exceeds 64 bits");
    return std::stoull(z.get_str());
}

// floor and ceil of (P^p)^(1/(2q))
std::pair<mpz_class, bool> root_of_power(std::uint64_t P, const Rational& lambda) {
    if (P < 1) throw std::invalid_argument("P must be at least 1");
    if (lambda.sign() < 0) throw std::invalid_argument("lambda must be non-negative");
    mpz_class p = lambda.raw().get_num(), q = lambda.raw().get_den();
    if (!p.fits_ulong_p() || !q.fits_ulong_p()) throw std::overflow_error("lambda too large");
    unsigned long pe = p.get_ui(), qe = q.get_ui();
    if (static_cast<double>(pe) * std::log2(static_cast<double>(P) + 1) > 8192)
        throw std::overflow_error("P^lambda beyond the configured cap");
    mpz_class base(std::to_string(P)), z;
    mpz_pow_ui(z.get_mpz_t(), base.get_mpz_t(), pe);
    mpz_class r;
    int exact = mpz_root(r.get_mpz_t(), z.get_mpz_t(), 2 * qe);
    return {r, exact != 0};
}

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double draw_gain(std::mt19937_64& rng, const BoundedDensityConfig& cfg) {
    if (cfg.family == "fixed") return 1.0;
    if (cfg.family != "uniform") throw std::invalid_argument("unknown channel family " + cfg.family);
    if (cfg.delta < 1) throw std::invalid_argument("delta must be at least 1");
    std::uniform_real_distribution<double> mag(1.0 / cfg.delta, cfg.delta);
    std::bernoulli_distribution neg(0.5);
    double g = mag(rng);
    return neg(rng) ? -g : g;
}

template <class Map>
double entropy_of_map(const Map& m) {
    double h = 0;
    for (const auto& [k, p] : m)
        if (p > 0) h -= p * std::log2(p);
    return h;
}

void check_level(const Signal& x, const Rational& l) {
    if (l.sign() < 0 || l > x.alphabet.lambda) throw std::invalid_argument("level outside [0, lambda]");
}

}  // namespace

std::uint64_t pbar(std::uint64_t P, const Rational& lambda) { return to_u64(root_of_power(P, lambda).first); }

std::uint64_t pbar_ceil(std::uint64_t P, const Rational& lambda) {
    auto [r, exact] = root_of_power(P, lambda);
    return to_u64(exact ? r : r + 1);
}

Signal make_signal(std::uint64_t value, std::uint64_t P, const Rational& lambda) {
    Signal s{value, {P, lambda}};
    if (value >= s.alphabet.cardinality()) throw std::invalid_argument("value outside its power alphabet");
    return s;
}

Signal top(const Signal& x, const Rational& l2) {
    check_level(x, l2);
    return {x.value / pbar(x.alphabet.P, x.alphabet.lambda - l2), {x.alphabet.P, l2}};
}

Signal bottom(const Signal& x, const Rational& l1) {
    check_level(x, l1);
    return {x.value % pbar(x.alphabet.P, l1), {x.alphabet.P, l1}};
}

Signal mid(const Signal& x, const Rational& l1, const Rational& l2) {
    if (l1 > l2) throw std::invalid_argument("mid needs lambda1 <= lambda2");
    Signal b = bottom(x, l2);
    return {b.value / pbar(x.alphabet.P, l1), {x.alphabet.P, l2 - l1}};
}

std::uint64_t reassemble(const Signal& x, const Rational& l1, const Rational& l2) {
    const std::uint64_t P = x.alphabet.P;
    std::uint64_t a2 = pbar(P, l2), a1 = pbar(P, l1);
    return a2 * (x.value / a2) + a1 * mid(x, l1, l2).value + bottom(x, l2).value % a1;
}

long trunc_floor(double v) { return static_cast<long>(std::trunc(v)); }

ComplexInt reduce_input(std::complex<double> x, std::uint64_t P, const Rational& alpha) {
    const long M = static_cast<long>(pbar_ceil(P, max(Rational(1), alpha)));
    auto red = [&](double v) {
        long t = trunc_floor(v) % M;
        return t < 0 ? t + M : t;
    };
    return {red(x.real()), red(x.imag())};
}

std::array<ComplexInt, 2> det_transform(const ComplexInt& x1, const ComplexInt& x2, const Gains& G,
                                        const Rational& alpha, std::uint64_t P, double delta) {
    const double m = std::max(1.0, alpha.to_double());
    const double s_direct = std::pow(static_cast<double>(P), (1.0 - m) / 2);
    const double s_cross = std::pow(static_cast<double>(P), (alpha.to_double() - m) / 2);
    auto fl = [](std::complex<double> z) { return ComplexInt{trunc_floor(z.real()), trunc_floor(z.imag())}; };
    auto add = [](ComplexInt a, ComplexInt b) { return ComplexInt{a.re + b.re, a.im + b.im}; };
    std::complex<double> c1(static_cast<double>(x1.re), static_cast<double>(x1.im));
    std::complex<double> c2(static_cast<double>(x2.re), static_cast<double>(x2.im));
    std::array<ComplexInt, 2> y{add(fl(s_direct * G[0][0] * c1), fl(s_cross * G[0][1] * c2)),
                                add(fl(s_cross * G[1][0] * c1), fl(s_direct * G[1][1] * c2))};
    const double cap = 4 * std::sqrt(static_cast<double>(P)) * delta;
    for (const auto& v : y)
        if (std::hypot(static_cast<double>(v.re), static_cast<double>(v.im)) > cap)
            throw std::logic_error("deterministic output exceeds 4 sqrt(P) Delta");
    return y;
}

double entropy_bits(const std::vector<double>& probs) {
    double h = 0;
    for (double p : probs)
        if (p > 0) h -= p * std::log2(p);
    return h;
}

EntropyEstimate entropy_exhaustive(const PairDist& dist, const BoundedDensityConfig& cfg, std::uint64_t P,
                                   const Rational& alpha, int samples) {
    if (dist.size() > (1u << 20)) throw std::invalid_argument("input pair enumeration beyond 2^20");
    if (samples < 1) throw std::invalid_argument("need at least one channel sample");
    const double m = std::max(1.0, alpha.to_double());
    const double s_direct = std::pow(static_cast<double>(P), (1.0 - m) / 2);
    const double s_cross = std::pow(static_cast<double>(P), (alpha.to_double() - m) / 2);
    std::vector<double> hs;
    for (int s = 0; s < samples; ++s) {
        std::mt19937_64 rng(splitmix(cfg.seed * 1000003ULL + static_cast<std::uint64_t>(s)));
        double g11 = draw_gain(rng, cfg), g12 = draw_gain(rng, cfg);
        std::unordered_map<long, double> out;
        for (const auto& [x, p] : dist)
            out[trunc_floor(s_direct * g11 * static_cast<double>(x.first)) +
                trunc_floor(s_cross * g12 * static_cast<double>(x.second))] += p;
        hs.push_back(entropy_of_map(out));
    }
    EntropyEstimate e;
    e.samples = samples;
    for (double h : hs) e.mean += h;
    e.mean /= samples;
    if (samples > 1) {
        double v = 0;
        for (double h : hs) v += (h - e.mean) * (h - e.mean);
        e.std_error = std::sqrt(v / (samples - 1) / samples);
    }
    return e;
}

std::vector<double> input_family(const std::string& family, std::uint64_t card, std::uint64_t seed) {
    if (card == 0) throw std::invalid_argument("empty alphabet");
    std::vector<double> p(card, 0.0);
    std::mt19937_64 rng(splitmix(seed));
    if (family == "uniform") {
        std::fill(p.begin(), p.end(), 1.0 / static_cast<double>(card));
    } else if (family == "point") {
        p[std::uniform_int_distribution<std::uint64_t>(0, card - 1)(rng)] = 1.0;
    } else if (family == "random") {
        std::exponential_distribution<double> ex(1.0);
        double tot = 0;
        for (auto& v : p) tot += (v = ex(rng));
        for (auto& v : p) v /= tot;
    } else if (family == "sparse") {
        std::vector<std::uint64_t> idx(card);
        for (std::uint64_t i = 0; i < card; ++i) idx[i] = i;
        std::shuffle(idx.begin(), idx.end(), rng);
        std::uint64_t k = std::max<std::uint64_t>(1, card / 4);
        for (std::uint64_t i = 0; i < k; ++i) p[idx[i]] = 1.0 / static_cast<double>(k);
    } else if (family == "layered") {
        // uniform over the upper half of the levels, lower half fixed at zero
        auto step = static_cast<std::uint64_t>(std::floor(std::sqrt(static_cast<double>(card))));
        step = std::max<std::uint64_t>(step, 1);
        std::uint64_t n = 0;
        for (std::uint64_t v = 0; v < card; v += step) ++n;
        for (std::uint64_t v = 0; v < card; v += step) p[v] = 1.0 / static_cast<double>(n);
    } else {
        throw std::invalid_argument("unknown input family " + family);
    }
    return p;
}

double default_slack(std::uint64_t P) { return 2.0 * std::log2(std::log2(static_cast<double>(P))); }

std::string GapReport::to_json() const {
    nlohmann::json j{{"lemma", lemma},     {"P", P},         {"family", family}, {"h_first", h_first},
                     {"h_second", h_second}, {"gap", gap},   {"bound", bound},   {"slack", slack},
                     {"std_error", std_error}, {"within", within}};
    return j.dump();
}

GapReport probe_sumset1(const Rational& mu1, const Rational& mu2, const Rational& nu1, const Rational& nu2,
                        const Sumset1Config& cfg) {
    for (const Rational* r : {&mu1, &mu2, &nu1, &nu2})
        if (r->sign() < 0 || *r > Rational(1)) throw std::invalid_argument("exponents must lie in [0, 1]");
    const std::uint64_t card = pbar(cfg.P, Rational(1));
    if (card * card > (1u << 20)) throw std::invalid_argument("input pair enumeration beyond 2^20");
    std::vector<double> p1 = input_family(cfg.family, card, cfg.channel.seed * 2 + 1);
    std::vector<double> p2 = input_family(cfg.family, card, cfg.channel.seed * 2 + 2);
    std::vector<std::uint64_t> t1m(card), t2m(card), t1n(card), t2n(card);
    for (std::uint64_t x = 0; x < card; ++x) {
        Signal s = make_signal(x, cfg.P, Rational(1));
        t1m[x] = top(s, mu1).value;
        t2m[x] = top(s, mu2).value;
        t1n[x] = top(s, nu1).value;
        t2n[x] = top(s, nu2).value;
    }
    double h1 = 0, h2 = 0;
    std::vector<double> gaps;
    for (int s = 0; s < cfg.samples; ++s) {
        std::mt19937_64 rng(splitmix(cfg.channel.seed * 7919ULL + static_cast<std::uint64_t>(s)));
        double g11 = draw_gain(rng, cfg.channel), g12 = draw_gain(rng, cfg.channel);
        double g21 = draw_gain(rng, cfg.channel), g22 = draw_gain(rng, cfg.channel);
        std::unordered_map<long, double> u1, u2;
        for (std::uint64_t a = 0; a < card; ++a) {
            if (p1[a] == 0) continue;
            for (std::uint64_t b = 0; b < card; ++b) {
                if (p2[b] == 0) continue;
                double p = p1[a] * p2[b];
                u1[trunc_floor(g11 * static_cast<double>(t1m[a])) + trunc_floor(g12 * static_cast<double>(t1n[b]))] += p;
                u2[trunc_floor(g21 * static_cast<double>(t2m[a])) + trunc_floor(g22 * static_cast<double>(t2n[b]))] += p;
            }
        }
        double e1 = entropy_of_map(u1), e2 = entropy_of_map(u2);
        h1 += e1;
        h2 += e2;
        gaps.push_back(e1 - e2);
    }
    GapReport r;
    r.lemma = "sumset1";
    r.P = cfg.P;
    r.family = cfg.family;
    r.h_first = h1 / cfg.samples;
    r.h_second = h2 / cfg.samples;
    r.gap = r.h_first - r.h_second;
    Rational d = max(Rational(0), max(mu1 - mu2, nu1 - nu2));
    r.bound = d.to_double() * 0.5 * std::log2(static_cast<double>(cfg.P));
    r.slack = default_slack(cfg.P);
    if (cfg.samples > 1) {
        double v = 0;
        for (double g : gaps) v += (g - r.gap) * (g - r.gap);
        r.std_error = std::sqrt(v / (cfg.samples - 1) / cfg.samples);
    }
    r.within = r.gap <= r.bound + r.slack;
    return r;
}

GapReport probe_sumset2(const std::vector<SubSectionSpec>& subs, const Sumset2Config& cfg) {
    for (const auto& s : subs) {
        if (s.parent != "X1" && s.parent != "X2") throw std::invalid_argument("sub-section parent must be X1 or X2");
        const Rational& pw = s.parent == "X1" ? cfg.power1 : cfg.power2;
        if (s.parent_lambda != pw) throw std::invalid_argument("sub-section parent level disagrees with its power");
    }
    StackInstance inst = lemma_precondition(subs);
    if (!feasible_greedy(inst).feasible) throw std::invalid_argument("sub-sections cannot be stacked");
    const std::uint64_t c1 = pbar(cfg.P, cfg.power1), c2 = pbar(cfg.P, cfg.power2);
    if (c1 * c2 > (1u << 20)) throw std::invalid_argument("input pair enumeration beyond 2^20");
    std::vector<double> p1 = input_family(cfg.family, c1, cfg.channel.seed * 2 + 1);
    std::vector<double> p2 = input_family(cfg.family, c2, cfg.channel.seed * 2 + 2);

    // joint law of the sub-sections does not depend on the channel
    std::map<std::vector<std::uint64_t>, double> ujoint;
    for (std::uint64_t a = 0; a < c1; ++a) {
        if (p1[a] == 0) continue;
        Signal x1 = make_signal(a, cfg.P, cfg.power1);
        for (std::uint64_t b = 0; b < c2; ++b) {
            if (p2[b] == 0) continue;
            Signal x2 = make_signal(b, cfg.P, cfg.power2);
            std::vector<std::uint64_t> key;
            for (const auto& s : subs) key.push_back(mid(s.parent == "X1" ? x1 : x2, s.lambda1, s.lambda2).value);
            ujoint[key] += p1[a] * p2[b];
        }
    }
    const double hu = entropy_of_map(ujoint);

    std::vector<double> hs;
    for (int s = 0; s < cfg.samples; ++s) {
        std::mt19937_64 rng(splitmix(cfg.channel.seed * 104729ULL + static_cast<std::uint64_t>(s)));
        double g1 = draw_gain(rng, cfg.channel), g2 = draw_gain(rng, cfg.channel);
        std::unordered_map<long, double> y;
        for (std::uint64_t a = 0; a < c1; ++a) {
            if (p1[a] == 0) continue;
            for (std::uint64_t b = 0; b < c2; ++b) {
                if (p2[b] == 0) continue;
                y[trunc_floor(g1 * static_cast<double>(a)) + trunc_floor(g2 * static_cast<double>(b))] += p1[a] * p2[b];
            }
        }
        hs.push_back(entropy_of_map(y));
    }
    GapReport r;
    r.lemma = "sumset2";
    r.P = cfg.P;
    r.family = cfg.family;
    for (double h : hs) r.h_first += h;
    r.h_first /= cfg.samples;
    r.h_second = hu;
    r.gap = r.h_first - r.h_second;
    r.bound = 0;
    r.slack = default_slack(cfg.P);
    if (cfg.samples > 1) {
        double v = 0;
        for (double h : hs) v += (h - r.h_first) * (h - r.h_first);
        r.std_error = std::sqrt(v / (cfg.samples - 1) / cfg.samples);
    }
    r.within = r.gap >= -r.slack;
    return r;
}

}  // namespace hopgdof::det
