#include "qcorr/propagator.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include <Eigen/Eigenvalues>

namespace qcorr {

void EvolutionConfig::validate() const {
    if (dt <= 0.0) throw std::invalid_argument("time step must be positive");
    if (n_steps < 1) throw std::invalid_argument("need at least one step");
    if (histories < 1) throw std::invalid_argument("need at least one history");
    if (record_stride < 1 || n_steps % record_stride != 0)
        throw std::invalid_argument("record stride must divide the step count");
}

DensityMatrix DensityMatrix::from_matrix(const CMatrix& m, double eig_floor) {
    if (m.rows() != m.cols()) throw std::invalid_argument("density matrix must be square");
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
        throw std::invalid_argument("density matrix is not Hermitian");
    CMatrix herm = 0.5 * (m + m.adjoint());
    if (std::abs(herm.trace().real() - 1.0) > 1e-12 || std::abs(herm.trace().imag()) > 1e-12)
        throw std::invalid_argument("density matrix trace is not 1");

    Eigen::SelfAdjointEigenSolver<CMatrix> es(herm);
    double min_eig = es.eigenvalues().minCoeff();
    if (min_eig < eig_floor)
        throw std::invalid_argument("density matrix has a genuinely negative eigenvalue");
    if (min_eig < 0.0) {
        Eigen::VectorXd clipped = es.eigenvalues().cwiseMax(0.0);
        clipped /= clipped.sum();
        herm = es.eigenvectors() * clipped.asDiagonal() * es.eigenvectors().adjoint();
        herm = 0.5 * (herm + herm.adjoint());
    }
    return DensityMatrix(std::move(herm));
}

DensityMatrix DensityMatrix::pure(const CVector& psi) {
    double n2 = psi.squaredNorm();
    if (n2 <= 0.0) throw std::invalid_argument("cannot form a state from the zero vector");
    CMatrix rho = psi * psi.adjoint() / n2;
    return DensityMatrix(std::move(rho));
}

CMatrix step_unitary(const CMatrix& h, double dt) {
    if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
        throw std::invalid_argument("Hamiltonian is not Hermitian");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
    CVector phases(h.rows());
    for (int k = 0; k < h.rows(); ++k)
        phases(k) = std::polar(1.0, -es.eigenvalues()(k) * dt);
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

CMatrix step_unitary(const RMatrix& h, double dt) {
    if ((h - h.transpose()).cwiseAbs().maxCoeff() > 1e-12)
        throw std::invalid_argument("Hamiltonian is not symmetric");
    Eigen::SelfAdjointEigenSolver<RMatrix> es(h);
    CVector phases(h.rows());
    for (int k = 0; k < h.rows(); ++k)
        phases(k) = std::polar(1.0, -es.eigenvalues()(k) * dt);
    return es.eigenvectors().cast<Complex>() * phases.asDiagonal() *
           es.eigenvectors().transpose().cast<Complex>();
}

UnitaryTable::UnitaryTable(const HamiltonianBuilder& builder, double dt) {
    int c = builder.channels();
    if (c > 12) throw std::invalid_argument("too many channels to tabulate");
    table_.resize(static_cast<size_t>(1) << c);
    std::vector<double> q(c);
    RMatrix h;
    for (size_t mask = 0; mask < table_.size(); ++mask) {
        for (int b = 0; b < c; ++b) q[b] = (mask >> b) & 1 ? 1.0 : -1.0;
        builder.assemble(q, h);
        table_[mask] = step_unitary(h, dt);
    }
}

const CMatrix& UnitaryTable::lookup(std::span<const double> q) const {
    size_t mask = 0;
    for (size_t b = 0; b < q.size(); ++b)
        if (q[b] > 0.0) mask |= static_cast<size_t>(1) << b;
    return table_[mask];
}

std::vector<CVector> evolve_history(const HamiltonianBuilder& builder,
                                    NoiseChannelSet& channels, const CVector& psi0,
                                    const EvolutionConfig& config,
                                    const UnitaryTable* table) {
    config.validate();
    if (psi0.size() != builder.dimension())
        throw std::invalid_argument("state dimension does not match model");
    if (static_cast<int>(channels.channels.size()) != builder.channels())
        throw std::invalid_argument("channel count does not match model");

    std::vector<CVector> samples;
    samples.reserve(config.n_samples());
    samples.push_back(psi0);

    CVector state = psi0;
    CVector next(state.size());
    std::vector<double> q(builder.channels());
    RMatrix h;
    for (int step = 0; step < config.n_steps; ++step) {
        channels.values_at(step * config.dt, q);
        if (table != nullptr) {
            next.noalias() = table->lookup(q) * state;
            state.swap(next);
        } else {
            // exp(-i H dt) applied in factored form V e^{-i L dt} V^T psi
            builder.assemble(q, h);
            Eigen::SelfAdjointEigenSolver<RMatrix> es(h);
            next.noalias() = es.eigenvectors().transpose() * state;
            for (int k = 0; k < next.size(); ++k)
                next(k) *= std::polar(1.0, -es.eigenvalues()(k) * config.dt);
            state.noalias() = es.eigenvectors() * next;
        }
        if ((step + 1) % config.record_stride == 0) samples.push_back(state);
    }

    if (std::abs(samples.back().norm() - 1.0) > 1e-10)
        throw std::runtime_error("evolved state lost its norm");
    return samples;
}

namespace {

// chunk size is fixed so the merge order never depends on the thread count
constexpr int kChunk = 128;

struct ChunkSums {
    std::vector<CMatrix> low;   // histories in [0, M/2)
    std::vector<CMatrix> high;  // histories in [M/2, M)
};

}  // namespace

TrajectoryAverage average_density(const HamiltonianBuilder& builder,
                                  const NoiseParams& noise, const CVector& psi0,
                                  const EvolutionConfig& config,
                                  std::uint64_t master_seed) {
    config.validate();
    int m = config.histories;
    int half = m / 2;
    int n_samples = config.n_samples();
    int dim = builder.dimension();

    std::optional<UnitaryTable> table;
    NoiseChannelSet probe = make_channels(noise, builder.channels(), master_seed, 0);
    if (probe.two_valued) table.emplace(builder, config.dt);

    int n_chunks = (m + kChunk - 1) / kChunk;
    std::vector<ChunkSums> chunks(n_chunks);

    std::atomic<int> next_chunk{0};
    auto worker = [&]() {
        for (;;) {
            int c = next_chunk.fetch_add(1);
            if (c >= n_chunks) return;
            ChunkSums& sums = chunks[c];
            sums.low.assign(n_samples, CMatrix::Zero(dim, dim));
            sums.high.assign(n_samples, CMatrix::Zero(dim, dim));
            int begin = c * kChunk;
            int end = std::min(begin + kChunk, m);
            for (int h = begin; h < end; ++h) {
                NoiseChannelSet channels =
                    make_channels(noise, builder.channels(), master_seed, h);
                std::vector<CVector> traj = evolve_history(
                    builder, channels, psi0, config, table ? &*table : nullptr);
                auto& target = (h < half) ? sums.low : sums.high;
                // each history is a pure state; normalizing the projector
                // removes the slow norm drift of the accumulated product
                for (int s = 0; s < n_samples; ++s)
                    target[s].noalias() += (traj[s] * traj[s].adjoint()) / traj[s].squaredNorm();
            }
        }
    };

    int n_threads = config.threads > 0
                        ? config.threads
                        : std::max(1u, std::thread::hardware_concurrency());
    n_threads = std::min(n_threads, n_chunks);
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    // merge partial sums in chunk order
    std::vector<CMatrix> sum_low(n_samples, CMatrix::Zero(dim, dim));
    std::vector<CMatrix> sum_all(n_samples, CMatrix::Zero(dim, dim));
    for (int c = 0; c < n_chunks; ++c) {
        for (int s = 0; s < n_samples; ++s) {
            sum_low[s].noalias() += chunks[c].low[s];
            sum_all[s].noalias() += chunks[c].low[s] + chunks[c].high[s];
        }
    }

    TrajectoryAverage avg;
    avg.sample_times.resize(n_samples);
    avg.rho.reserve(n_samples);
    if (half > 0) avg.rho_half.reserve(n_samples);
    avg.convergence.assign(n_samples, 0.0);
    for (int s = 0; s < n_samples; ++s) {
        avg.sample_times[s] = s * config.record_stride * config.dt;
        avg.rho.push_back(DensityMatrix::from_matrix(sum_all[s] / m));
        if (half > 0) {
            avg.rho_half.push_back(DensityMatrix::from_matrix(sum_low[s] / half));
            avg.convergence[s] =
                trace_distance(avg.rho[s].matrix(), avg.rho_half[s].matrix());
        }
    }
    return avg;
}

double trace_distance(const CMatrix& a, const CMatrix& b) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(a - b, Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace qcorr
