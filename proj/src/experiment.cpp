#include "qcorr/experiment.hpp"

#include <atomic>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <thread>

namespace qcorr {

namespace {

constexpr double kSectorFloor = 1e-14;

CorrelationRecord evaluate_sample(const DensityMatrix& rho, double tau, double conv,
                                  const FockBasis& basis, const Bipartition& partition,
                                  MeasuredParty measured, const DiscordSettings& discord) {
    CorrelationRecord rec{};
    rec.tau = tau;
    rec.conv = conv;
    rec.purity = purity(rho);
    rec.s_d = decoherence_entropy(rho);

    SectorDecomposition dec = sector_decompose(rho, basis, partition);
    rec.p11 = dec.probability[1];
    if (rec.p11 <= kSectorFloor || !dec.sector[1]) {
        rec.p11 = rec.p11 <= kSectorFloor ? 0.0 : rec.p11;
        rec.e_modes = 0.0;
        rec.e_p = 0.0;
        rec.d_p = 0.0;
        return rec;
    }
    TwoQubitState reg = to_register(*dec.sector[1], basis, partition);
    rec.e_modes = entanglement_of_formation(concurrence(reg));
    rec.e_p = rec.p11 * rec.e_modes;
    rec.d_p = rec.p11 * quantum_discord(reg, measured, discord);
    return rec;
}

void parallel_samples(int n, int threads, const std::function<void(int)>& body) {
    int n_threads = threads > 0 ? threads
                                : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    n_threads = std::min(n_threads, n);
    if (n_threads <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (;;) {
            int i = next.fetch_add(1);
            if (i >= n) return;
            body(i);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

}  // namespace

std::vector<ScenarioResult> run_scenario(const Scenario& scenario) {
    if (scenario.v_list.empty()) throw std::invalid_argument("empty interaction list");
    scenario.evolution.validate();

    FockBasis basis = model_basis(scenario.params);
    Bipartition partition = scenario.partition.party_a.empty()
                                ? Bipartition::standard(scenario.params)
                                : scenario.partition;
    partition.validate(basis);
    InitialState psi0 = initial_state(scenario.state, basis);

    // The evolution runs in dimensionless form: H/|T| depends only on v and
    // sign(T), steps and noise rates are in units of 1/|T|, and the recorded
    // time is tau = |T| t directly.
    double sgn = scenario.params.hopping >= 0.0 ? 1.0 : -1.0;

    std::vector<ScenarioResult> results;
    results.reserve(scenario.v_list.size());
    for (double v : scenario.v_list) {
        HubbardParams dimless = scenario.params;
        dimless.hopping = sgn;
        dimless.interaction = v * sgn;
        HamiltonianBuilder builder(basis, dimless);

        TrajectoryAverage avg = average_density(builder, scenario.noise,
                                                psi0.amplitudes, scenario.evolution,
                                                scenario.seed);

        ScenarioResult result;
        result.v = v;
        result.records.resize(avg.rho.size());
        parallel_samples(static_cast<int>(avg.rho.size()), scenario.evolution.threads,
                         [&](int s) {
                             result.records[s] = evaluate_sample(
                                 avg.rho[s], avg.sample_times[s], avg.convergence[s],
                                 basis, partition, scenario.measured, scenario.discord);
                         });
        results.push_back(std::move(result));
    }
    return results;
}

int convergence_flags(const ScenarioResult& result, double threshold) {
    int flags = 0;
    for (const auto& rec : result.records)
        if (rec.conv > threshold) ++flags;
    return flags;
}

}  // namespace qcorr
