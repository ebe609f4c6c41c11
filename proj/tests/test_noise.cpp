#include <doctest.h>

#include <cmath>

#include "qcorr/noise.hpp"

using namespace qcorr;

TEST_CASE("inverse-CDF rate sampling hits the band endpoints") {
    NoiseBand band{1.25e-4, 1.25e2};
    for (int alpha : {1, 2}) {
        CHECK(sample_rate(alpha, band, 0.0) == doctest::Approx(band.gamma_inf).epsilon(1e-12));
        CHECK(sample_rate(alpha, band, 1.0) == doctest::Approx(band.gamma_sup).epsilon(1e-12));
    }
    CHECK_THROWS(sample_rate(3, band, 0.5));
    CHECK_THROWS(sample_rate(1, NoiseBand{1.0, 0.5}, 0.5));
}

TEST_CASE("sampled rates pass a KS test against the analytic CDF") {
    NoiseBand band{1.25e-4, 1.25e2};
    for (int alpha : {1, 2}) {
        RandomStream stream(stream_seed(404, alpha, 0));
        int n = 100000;
        std::vector<double> draws = sample_rates(alpha, band, n, stream);
        std::sort(draws.begin(), draws.end());
        double ks = 0.0;
        for (int i = 0; i < n; ++i) {
            double f = rate_cdf(alpha, band, draws[i]);
            ks = std::max(ks, std::max(std::abs(f - double(i) / n),
                                       std::abs(f - double(i + 1) / n)));
        }
        CHECK(ks < 1.628 / std::sqrt(double(n)));  // 1% level
    }
}

TEST_CASE("a rate-zero fluctuator never switches") {
    RtnFluctuator f(0.0, RandomStream(5));
    std::vector<double> sig = rtn_signal(f, 0.1, 200);
    for (double v : sig) CHECK(v == sig[0]);
    CHECK(f.switch_count() == 0);
}

TEST_CASE("fluctuator autocorrelation decays as exp(-2 gamma lag)") {
    double gamma = 1.0;
    int n_traj = 10000;
    for (double lag : {0.25, 0.75}) {
        double acc = 0.0;
        for (int r = 0; r < n_traj; ++r) {
            RtnFluctuator f(gamma, RandomStream(stream_seed(21, r, 0)));
            double v0 = f.value_at(0.0);
            acc += v0 * f.value_at(lag);
        }
        CHECK(std::abs(acc / n_traj - std::exp(-2.0 * gamma * lag)) <
              4.0 / std::sqrt(double(n_traj)));
    }
}

TEST_CASE("switch count over a horizon matches the Poisson mean") {
    double gamma = 2.0, horizon = 50.0;
    int n_traj = 500;
    double mean = 0.0;
    for (int r = 0; r < n_traj; ++r) {
        RtnFluctuator f(gamma, RandomStream(stream_seed(22, r, 0)));
        f.value_at(horizon);
        mean += double(f.switch_count());
    }
    mean /= n_traj;
    CHECK(std::abs(mean - gamma * horizon) <= 3.0 * std::sqrt(gamma * horizon));
}

TEST_CASE("single-member ensemble reduces to the bare fluctuator") {
    std::uint64_t seed = stream_seed(9, 1, 2, 3);
    RtnFluctuator bare(0.8, RandomStream(seed));
    std::vector<RtnFluctuator> members;
    members.emplace_back(0.8, RandomStream(seed));
    FluctuatorEnsemble ens(std::move(members));
    std::vector<double> a = rtn_signal(bare, 0.05, 400);
    std::vector<double> b = ensemble_signal(ens, 0.05, 400);
    CHECK(a == b);
}

TEST_CASE("frozen ensembles hold a constant k over N_f value") {
    std::vector<RtnFluctuator> members;
    for (int j = 0; j < 7; ++j) members.emplace_back(0.0, RandomStream(stream_seed(1, 2, 3, j)));
    FluctuatorEnsemble ens(std::move(members));
    std::vector<double> sig = ensemble_signal(ens, 0.2, 100);
    double expected = sig[0];
    CHECK(std::abs(std::round(expected * 7.0) - expected * 7.0) < 1e-12);
    for (double v : sig) CHECK(v == expected);
}

TEST_CASE("ensemble variance at a fixed time is 1/N_f") {
    int nf = 20, n_real = 4000;
    double sum = 0.0, sum2 = 0.0;
    for (int r = 0; r < n_real; ++r) {
        std::vector<RtnFluctuator> members;
        for (int j = 0; j < nf; ++j)
            members.emplace_back(0.5, RandomStream(stream_seed(77, r, 0, j)));
        FluctuatorEnsemble ens(std::move(members));
        double q = ens.value_at(1.0);
        sum += q;
        sum2 += q * q;
    }
    double var = sum2 / n_real - (sum / n_real) * (sum / n_real);
    CHECK(std::abs(var - 1.0 / nf) < 5e-3);
}

TEST_CASE("channel signals stay in [-1, 1]") {
    for (NoiseKind kind : {NoiseKind::Rtn, NoiseKind::Pink, NoiseKind::Brown}) {
        NoiseParams params;
        params.kind = kind;
        NoiseChannelSet set = make_channels(params, 4, 31, 0);
        std::vector<double> q(4);
        for (int k = 0; k < 2000; ++k) {
            set.values_at(k * 0.05, q);
            for (double v : q) {
                CHECK(v <= 1.0);
                CHECK(v >= -1.0);
            }
        }
    }
}

TEST_CASE("identical master seeds give bit-identical signals") {
    NoiseParams params;
    params.kind = NoiseKind::Pink;
    params.n_fluctuators = 20;
    for (int rep = 0; rep < 2; ++rep) {
        NoiseChannelSet a = make_channels(params, 4, 123, 5);
        NoiseChannelSet b = make_channels(params, 4, 123, 5);
        std::vector<double> qa(4), qb(4);
        for (int k = 0; k < 500; ++k) {
            a.values_at(k * 0.01, qa);
            b.values_at(k * 0.01, qb);
            CHECK(qa == qb);
        }
    }
}

TEST_CASE("distinct channels are uncorrelated") {
    NoiseParams params;
    params.kind = NoiseKind::Rtn;
    params.gamma0 = 1.0;
    NoiseChannelSet set = make_channels(params, 2, 99, 0);
    int n = 4000;
    double acc = 0.0;
    std::vector<double> q(2);
    for (int k = 0; k < n; ++k) {
        set.values_at(k * 0.5, q);
        acc += q[0] * q[1];
    }
    CHECK(std::abs(acc / n) < 0.1);
}

TEST_CASE("noiseless channels return the constant 1") {
    NoiseParams params;  // kind None
    NoiseChannelSet set = make_channels(params, 3, 0, 0);
    std::vector<double> q(3);
    set.values_at(17.0, q);
    CHECK(q == std::vector<double>{1.0, 1.0, 1.0});
    CHECK(set.two_valued);
}

TEST_CASE("colored ensembles produce the advertised spectral slopes") {
    NoiseParams pink;
    pink.kind = NoiseKind::Pink;
    pink.n_fluctuators = 20;
    PsdEstimate est = estimate_psd(pink, 0.1, 16384, 48, 5);
    double alpha_pink = spectral_slope(est, 0.04, 0.4);
    CHECK(alpha_pink == doctest::Approx(1.0).epsilon(0.25));

    NoiseParams brown = pink;
    brown.kind = NoiseKind::Brown;
    est = estimate_psd(brown, 0.1, 16384, 48, 5);
    double alpha_brown = spectral_slope(est, 0.04, 0.4);
    CHECK(alpha_brown == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("single-fluctuator spectrum follows the analytic Lorentzian tail") {
    NoiseParams rtn;
    rtn.kind = NoiseKind::Rtn;
    rtn.gamma0 = 0.05;
    PsdEstimate est = estimate_psd(rtn, 0.1, 16384, 64, 5);
    // pointwise against S(f) = 4 gamma / (4 gamma^2 + (2 pi f)^2) mid-band
    for (double f_probe : {0.2, 0.5, 1.0}) {
        size_t best = 0;
        for (size_t k = 0; k < est.frequency.size(); ++k)
            if (std::abs(est.frequency[k] - f_probe) <
                std::abs(est.frequency[best] - f_probe)) best = k;
        double omega = 2.0 * M_PI * est.frequency[best];
        double lorentz = 4.0 * rtn.gamma0 / (4.0 * rtn.gamma0 * rtn.gamma0 + omega * omega);
        CHECK(est.psd[best] / lorentz == doctest::Approx(1.0).epsilon(0.25));
    }
    // slope approaches 2 well above the switching rate
    double slope = spectral_slope(est, 0.5, 2.5);
    CHECK(slope == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("more fluctuators track the target exponent realization by realization") {
    // the ensemble-averaged spectrum is the same for any N_f; what grows with
    // N_f is how closely each single realization follows the power law.
    // realizations whose fluctuators all froze carry no slope and are skipped.
    auto mean_slope_error = [](int nf) {
        NoiseParams params;
        params.kind = NoiseKind::Pink;
        params.n_fluctuators = nf;
        double acc = 0.0;
        int valid = 0;
        for (int r = 0; r < 16; ++r) {
            PsdEstimate est = estimate_psd(params, 0.1, 8192, 1, 1000 + 17 * r);
            double power = 0.0;
            for (double p : est.psd) power += p;
            if (power <= 1e-12) continue;
            acc += std::abs(spectral_slope(est, 0.01, 1.0) - 1.0);
            ++valid;
        }
        REQUIRE(valid >= 8);
        return acc / valid;
    };
    double err_few = mean_slope_error(2);
    double err_many = mean_slope_error(40);
    CHECK(err_many < err_few);
}

TEST_CASE("spectral estimation rejects bad input") {
    NoiseParams params;
    CHECK_THROWS(estimate_psd(params, 0.1, 1024, 4, 0));  // constant channel
    params.kind = NoiseKind::Rtn;
    CHECK_THROWS(estimate_psd(params, 0.1, 1000, 4, 0));  // not a power of two
    PsdEstimate est = estimate_psd(params, 0.1, 1024, 4, 0);
    CHECK_THROWS(spectral_slope(est, 6.0, 8.0));  // band beyond Nyquist
}
