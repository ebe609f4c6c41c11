#include "qcorr/noise.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace qcorr {

const char* noise_name(NoiseKind kind) {
    switch (kind) {
        case NoiseKind::None: return "none";
        case NoiseKind::Rtn: return "rtn";
        case NoiseKind::Pink: return "pink";
        case NoiseKind::Brown: return "brown";
    }
    return "?";
}

NoiseKind parse_noise(const std::string& name) {
    if (name == "none") return NoiseKind::None;
    if (name == "rtn") return NoiseKind::Rtn;
    if (name == "pink") return NoiseKind::Pink;
    if (name == "brown") return NoiseKind::Brown;
    throw std::invalid_argument("unknown noise kind: " + name);
}

namespace {
void check_band(const NoiseBand& band) {
    if (!(band.gamma_inf > 0.0) || !(band.gamma_sup > band.gamma_inf))
        throw std::invalid_argument("need 0 < gamma_inf < gamma_sup");
}
}  // namespace

double sample_rate(int alpha, const NoiseBand& band, double u) {
    check_band(band);
    if (alpha == 1) return band.gamma_inf * std::pow(band.gamma_sup / band.gamma_inf, u);
    // cancellation-free form of 1 / (1/g_inf - u (1/g_inf - 1/g_sup))
    if (alpha == 2) return 1.0 / ((1.0 - u) / band.gamma_inf + u / band.gamma_sup);
    throw std::invalid_argument("spectral exponent must be 1 or 2");
}

std::vector<double> sample_rates(int alpha, const NoiseBand& band, int count,
                                 RandomStream& stream) {
    if (count < 1) throw std::invalid_argument("need at least one fluctuator");
    std::vector<double> rates(count);
    for (double& r : rates) r = sample_rate(alpha, band, stream.uniform());
    return rates;
}

double rate_cdf(int alpha, const NoiseBand& band, double gamma) {
    check_band(band);
    if (gamma <= band.gamma_inf) return 0.0;
    if (gamma >= band.gamma_sup) return 1.0;
    if (alpha == 1)
        return std::log(gamma / band.gamma_inf) / std::log(band.gamma_sup / band.gamma_inf);
    if (alpha == 2)
        return (1.0 / band.gamma_inf - 1.0 / gamma) /
               (1.0 / band.gamma_inf - 1.0 / band.gamma_sup);
    throw std::invalid_argument("spectral exponent must be 1 or 2");
}

RtnFluctuator::RtnFluctuator(double rate, RandomStream stream)
    : rate_(rate), value_(0), next_switch_(0.0), stream_(std::move(stream)) {
    value_ = stream_.sign();
    next_switch_ = stream_.exponential(rate_);
}

RtnFluctuator::RtnFluctuator(double rate, int initial_value, RandomStream stream)
    : rate_(rate), value_(initial_value), next_switch_(0.0), stream_(std::move(stream)) {
    if (initial_value != 1 && initial_value != -1)
        throw std::invalid_argument("fluctuator value must be +1 or -1");
    next_switch_ = stream_.exponential(rate_);
}

double RtnFluctuator::value_at(double t) {
    while (next_switch_ <= t) {
        value_ = -value_;
        ++switches_;
        next_switch_ += stream_.exponential(rate_);
    }
    return static_cast<double>(value_);
}

FluctuatorEnsemble::FluctuatorEnsemble(std::vector<RtnFluctuator> members)
    : members_(std::move(members)) {
    if (members_.empty()) throw std::invalid_argument("empty fluctuator ensemble");
}

double FluctuatorEnsemble::value_at(double t) {
    double sum = 0.0;
    for (auto& m : members_) sum += m.value_at(t);
    return sum / static_cast<double>(members_.size());
}

NoiseChannel NoiseChannel::constant() {
    NoiseChannel ch;
    ch.constant_ = true;
    return ch;
}

NoiseChannel NoiseChannel::fluctuating(FluctuatorEnsemble ensemble) {
    NoiseChannel ch;
    ch.constant_ = false;
    ch.ensemble_.push_back(std::move(ensemble));
    return ch;
}

double NoiseChannel::value_at(double t) {
    return constant_ ? 1.0 : ensemble_[0].value_at(t);
}

void NoiseChannelSet::values_at(double t, std::span<double> out) {
    if (out.size() != channels.size())
        throw std::invalid_argument("output span does not match channel count");
    for (size_t c = 0; c < channels.size(); ++c) out[c] = channels[c].value_at(t);
}

NoiseChannelSet make_channels(const NoiseParams& params, int n_channels,
                              std::uint64_t master_seed, std::uint64_t history) {
    if (n_channels < 1) throw std::invalid_argument("need at least one channel");
    NoiseChannelSet set;
    set.two_valued = params.kind == NoiseKind::None || params.kind == NoiseKind::Rtn;

    for (int c = 0; c < n_channels; ++c) {
        switch (params.kind) {
            case NoiseKind::None:
                set.channels.push_back(NoiseChannel::constant());
                break;
            case NoiseKind::Rtn: {
                RandomStream stream(stream_seed(master_seed, history, c, 0));
                std::vector<RtnFluctuator> one;
                one.emplace_back(params.gamma0, std::move(stream));
                set.channels.push_back(
                    NoiseChannel::fluctuating(FluctuatorEnsemble(std::move(one))));
                break;
            }
            case NoiseKind::Pink:
            case NoiseKind::Brown: {
                int alpha = params.kind == NoiseKind::Pink ? 1 : 2;
                if (params.n_fluctuators < 1)
                    throw std::invalid_argument("need at least one fluctuator per channel");
                std::vector<RtnFluctuator> members;
                members.reserve(params.n_fluctuators);
                for (int j = 0; j < params.n_fluctuators; ++j) {
                    RandomStream stream(stream_seed(master_seed, history, c, j));
                    double rate;
                    if (params.redraw_rates) {
                        rate = sample_rate(alpha, params.band, stream.uniform());
                    } else {
                        // history-independent rate stream; tag keeps it disjoint
                        // from the switching streams
                        RandomStream rate_stream(
                            stream_seed(master_seed, 0x7261746573ULL, c, j));
                        rate = sample_rate(alpha, params.band, rate_stream.uniform());
                    }
                    members.emplace_back(rate, std::move(stream));
                }
                set.channels.push_back(
                    NoiseChannel::fluctuating(FluctuatorEnsemble(std::move(members))));
                break;
            }
        }
    }
    return set;
}

std::vector<double> rtn_signal(RtnFluctuator& fluctuator, double dt, int n) {
    if (dt <= 0.0) throw std::invalid_argument("grid spacing must be positive");
    std::vector<double> signal(n);
    for (int k = 0; k < n; ++k) signal[k] = fluctuator.value_at(k * dt);
    return signal;
}

std::vector<double> ensemble_signal(FluctuatorEnsemble& ensemble, double dt, int n) {
    if (dt <= 0.0) throw std::invalid_argument("grid spacing must be positive");
    std::vector<double> signal(n);
    for (int k = 0; k < n; ++k) signal[k] = ensemble.value_at(k * dt);
    return signal;
}

namespace {

// in-place iterative radix-2 FFT, n a power of two
void fft(std::vector<std::complex<double>>& a) {
    size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0) throw std::invalid_argument("FFT length must be 2^k");
    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (size_t len = 2; len <= n; len <<= 1) {
        double ang = -2.0 * M_PI / static_cast<double>(len);
        std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (size_t k = 0; k < len / 2; ++k) {
                std::complex<double> u = a[i + k];
                std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

}  // namespace

PsdEstimate estimate_psd(const NoiseParams& params, double dt, int n_samples,
                         int realizations, std::uint64_t seed) {
    if (dt <= 0.0 || n_samples < 4 || (n_samples & (n_samples - 1)) != 0)
        throw std::invalid_argument("need dt > 0 and a power-of-two sample count");
    if (realizations < 1) throw std::invalid_argument("need at least one realization");
    if (params.kind == NoiseKind::None)
        throw std::invalid_argument("constant channel has no spectrum to estimate");

    size_t n = static_cast<size_t>(n_samples);
    std::vector<double> accum(n / 2, 0.0);
    std::vector<std::complex<double>> work(n);
    for (int r = 0; r < realizations; ++r) {
        NoiseChannelSet set = make_channels(params, 1, seed, static_cast<std::uint64_t>(r));
        for (size_t k = 0; k < n; ++k)
            work[k] = std::complex<double>(set.channels[0].value_at(k * dt), 0.0);
        fft(work);
        // one-sided periodogram, dt/n * |X_k|^2
        for (size_t k = 1; k < n / 2; ++k)
            accum[k] += dt / static_cast<double>(n) * std::norm(work[k]);
    }

    PsdEstimate est;
    est.frequency.reserve(n / 2 - 1);
    est.psd.reserve(n / 2 - 1);
    for (size_t k = 1; k < n / 2; ++k) {
        est.frequency.push_back(static_cast<double>(k) / (static_cast<double>(n) * dt));
        est.psd.push_back(accum[k] / realizations);
    }
    return est;
}

double spectral_slope(const PsdEstimate& estimate, double f1, double f2) {
    if (!(f1 > 0.0) || !(f2 > f1)) throw std::invalid_argument("need 0 < f1 < f2");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (size_t k = 0; k < estimate.frequency.size(); ++k) {
        double f = estimate.frequency[k];
        if (f < f1 || f > f2 || estimate.psd[k] <= 0.0) continue;
        double x = std::log(f);
        double y = std::log(estimate.psd[k]);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++n;
    }
    if (n < 4) throw std::invalid_argument("band contains too few spectral bins");
    double denom = n * sxx - sx * sx;
    return -(n * sxy - sx * sy) / denom;
}

}  // namespace qcorr
