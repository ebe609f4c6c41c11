#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qcorr/rng.hpp"

namespace qcorr {

enum class NoiseKind { None, Rtn, Pink, Brown };

struct NoiseBand {
    double gamma_inf = 1.25e-4;
    double gamma_sup = 1.25e2;
};

struct NoiseParams {
    NoiseKind kind = NoiseKind::None;
    double gamma0 = 0.1;      // single-fluctuator switching rate, units of |T|
    int n_fluctuators = 20;   // ensemble size per channel for colored noise
    NoiseBand band{};         // rate window for colored noise
    bool redraw_rates = true; // redraw ensemble rates for every history
};

const char* noise_name(NoiseKind kind);
NoiseKind parse_noise(const std::string& name);

// Inverse-CDF sample of the switching-rate distribution: density proportional
// to 1/gamma (alpha = 1) or 1/gamma^2 (alpha = 2) on [gamma_inf, gamma_sup].
double sample_rate(int alpha, const NoiseBand& band, double u);
std::vector<double> sample_rates(int alpha, const NoiseBand& band, int count,
                                 RandomStream& stream);

// Analytic CDF of the same distribution (test oracle and KS checks).
double rate_cdf(int alpha, const NoiseBand& band, double gamma);

// Bistable fluctuator flipping between -1 and +1 with exact exponential
// waiting times. Queries must be time-ordered.
class RtnFluctuator {
public:
    RtnFluctuator(double rate, RandomStream stream);
    RtnFluctuator(double rate, int initial_value, RandomStream stream);

    double rate() const { return rate_; }

    // value at time t >= previous query time
    double value_at(double t);

    // switches that fired in (previous query, t]
    long long switch_count() const { return switches_; }

private:
    double rate_;
    int value_;
    double next_switch_;
    long long switches_ = 0;
    RandomStream stream_;
};

// Renormalized superposition q(t) = (1/N_f) sum_j eta_j(t), bounded in [-1, 1].
class FluctuatorEnsemble {
public:
    explicit FluctuatorEnsemble(std::vector<RtnFluctuator> members);
    int size() const { return static_cast<int>(members_.size()); }
    double value_at(double t);

private:
    std::vector<RtnFluctuator> members_;
};

// One stochastic signal per bond (ring) or spin (dimer). Noiseless channels
// return the constant 1.
class NoiseChannel {
public:
    static NoiseChannel constant();
    static NoiseChannel fluctuating(FluctuatorEnsemble ensemble);
    double value_at(double t);

private:
    NoiseChannel() = default;
    bool constant_ = true;
    std::vector<FluctuatorEnsemble> ensemble_;  // empty or single element
};

struct NoiseChannelSet {
    std::vector<NoiseChannel> channels;
    bool two_valued = false;  // every channel value lies in {-1, +1} (or is 1)

    void values_at(double t, std::span<double> out);
};

// Channels for one history. Fluctuator j of channel c draws from the stream
// (master, history, c, j), so histories and channels are independent and any
// execution order reproduces the same signals. With redraw_rates = false the
// ensemble rates come from a history-independent stream instead.
NoiseChannelSet make_channels(const NoiseParams& params, int n_channels,
                              std::uint64_t master_seed, std::uint64_t history);

// Signals read on a uniform grid t = k*dt, k = 0..n-1.
std::vector<double> rtn_signal(RtnFluctuator& fluctuator, double dt, int n);
std::vector<double> ensemble_signal(FluctuatorEnsemble& ensemble, double dt, int n);

// Averaged-periodogram spectral density of the configured channel signal.
struct PsdEstimate {
    std::vector<double> frequency;  // cycles per unit time, k/(n*dt)
    std::vector<double> psd;
};
PsdEstimate estimate_psd(const NoiseParams& params, double dt, int n_samples,
                         int realizations, std::uint64_t seed);

// Fitted spectral exponent: least-squares slope of log PSD against log f over
// [f1, f2], sign-flipped so 1/f^alpha reports alpha.
double spectral_slope(const PsdEstimate& estimate, double f1, double f2);

}  // namespace qcorr
