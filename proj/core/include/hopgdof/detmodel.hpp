#pragma once

#include "hopgdof/rational.hpp"
#include "hopgdof/stacking.hpp"

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace hopgdof::det {

// floor(sqrt(P^lambda)), exact for integer P.
std::uint64_t pbar(std::uint64_t P, const Rational& lambda);
// ceil(sqrt(P^lambda)).
std::uint64_t pbar_ceil(std::uint64_t P, const Rational& lambda);

struct PowerAlphabet {
    std::uint64_t P = 1;
    Rational lambda;
    std::uint64_t cardinality() const { return pbar(P, lambda); }
};

struct Signal {
    std::uint64_t value = 0;
    PowerAlphabet alphabet;
};

Signal make_signal(std::uint64_t value, std::uint64_t P, const Rational& lambda);

Signal top(const Signal& x, const Rational& lambda2);
Signal bottom(const Signal& x, const Rational& lambda1);
Signal mid(const Signal& x, const Rational& lambda1, const Rational& lambda2);

// X = pbar^{l2} floor(X / pbar^{l2}) + pbar^{l1} mid(X, l1, l2) + ((X)_{l2} mod pbar^{l1})
std::uint64_t reassemble(const Signal& x, const Rational& lambda1, const Rational& lambda2);

// Floor toward zero: the nonstandard convention for negative arguments.
long trunc_floor(double v);

struct ComplexInt {
    long re = 0;
    long im = 0;
    friend bool operator==(const ComplexInt&, const ComplexInt&) = default;
};

ComplexInt reduce_input(std::complex<double> x, std::uint64_t P, const Rational& alpha);

using Gains = std::array<std::array<std::complex<double>, 2>, 2>;  // G[k][i]: transmitter i to receiver k

std::array<ComplexInt, 2> det_transform(const ComplexInt& x1, const ComplexInt& x2, const Gains& G,
                                        const Rational& alpha, std::uint64_t P, double delta);

struct BoundedDensityConfig {
    double delta = 2;
    std::string family = "uniform";  // uniform | fixed (all gains 1)
    std::uint64_t seed = 1;
};

// Real-valued toy probes: one real component per signal.
using PairDist = std::vector<std::pair<std::pair<long, long>, double>>;

struct EntropyEstimate {
    double mean = 0;
    double std_error = 0;
    int samples = 0;
};

double entropy_bits(const std::vector<double>& probs);

// H(Y1 | G) with Y1 = floor(sqrt(P^{1-m}) g11 x1) + floor(sqrt(P^{alpha-m}) g12 x2), m = max(1, alpha).
EntropyEstimate entropy_exhaustive(const PairDist& dist, const BoundedDensityConfig& cfg, std::uint64_t P,
                                   const Rational& alpha, int samples);

// Input families for the probes (a design choice; the lemmas quantify over all inputs).
std::vector<double> input_family(const std::string& family, std::uint64_t cardinality, std::uint64_t seed);

struct GapReport {
    std::string lemma;
    std::uint64_t P = 0;
    std::string family;
    double h_first = 0;   // H(U1|G) or H(Y|G)
    double h_second = 0;  // H(U2|G) or H(U_1..U_m|G)
    double gap = 0;       // h_first - h_second
    double bound = 0;     // in bits
    double slack = 0;
    double std_error = 0;
    bool within = false;
    std::string to_json() const;
};

double default_slack(std::uint64_t P);

struct Sumset1Config {
    std::uint64_t P = 256;
    std::string family = "uniform";
    BoundedDensityConfig channel;
    int samples = 8;
};

// H(U1|G) - H(U2|G) against max(mu1-mu2, nu1-nu2)^+ (1/2) log2 P, per real dimension.
GapReport probe_sumset1(const Rational& mu1, const Rational& mu2, const Rational& nu1, const Rational& nu2,
                        const Sumset1Config& cfg);

struct Sumset2Config {
    std::uint64_t P = 256;
    std::string family = "uniform";
    BoundedDensityConfig channel;
    int samples = 8;
    Rational power1 = 1;  // X1 in X_{power1}
    Rational power2 = 1;
};

// H(Y|G) - H(U_1..U_m|G) with Y = floor(g1 X1) + floor(g2 X2); expected >= -slack.
// Sub-section parents must be "X1" or "X2"; infeasible stackings are rejected.
GapReport probe_sumset2(const std::vector<SubSectionSpec>& subsections, const Sumset2Config& cfg);

}  // namespace hopgdof::det
