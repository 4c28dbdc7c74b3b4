#pragma once

#include "hopgdof/schemes.hpp"

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace hopgdof::mc {

struct SimConfig {
    std::vector<double> P_grid;  // linear scale, strictly increasing
    int trials = 200;
    double delta = 2;
    std::uint64_t seed = 1;
};

// n log-spaced powers from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, int n);
SimConfig default_config();
void validate(const SimConfig& config);

using HopGains = std::array<std::array<std::complex<double>, 2>, 2>;  // G[k][i]: transmitter i to receiver k

struct ChannelRealization {
    double delta = 1;
    std::vector<HopGains> hops;
};

// Real and imaginary parts uniform in magnitude on [1/delta, delta] with independent random signs.
// Trial t uses a seed derived from (config.seed, t), so draws do not depend on scheduling.
ChannelRealization sample_channels(const SimConfig& config, int L, std::uint64_t trial);

struct SimResult {
    std::array<double, 2> per_user{};
    double sum = 0;
    double max_tx_power = 0;  // after normalization, over every node and hop
};

// Gaussian signaling with successive decoding along the scheme's orders. Gains enter as G / sqrt(2)
// so that a unit-magnitude component pair gives |G| = 1.
SimResult simulate_sumrate(const MultiHopScheme& scheme, const ChannelRealization& channels, double P);

struct SlopeEstimate {
    Rational alpha;
    int L = 2;
    std::vector<double> P;
    std::vector<double> mean_rate;
    std::vector<double> ci_halfwidth;  // 95% normal interval
    double slope = 0;                  // per log2 P, top half of the grid
    double intercept = 0;
    Rational target;

    std::string to_csv() const;
    std::string to_json() const;
};

SlopeEstimate estimate_slope(const MultiHopScheme& scheme, const SimConfig& config);

// Least-squares slope of y against x.
std::pair<double, double> fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace hopgdof::mc
