#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qcorr/model.hpp"
#include "qcorr/noise.hpp"

namespace qcorr {

struct EvolutionConfig {
    double dt = 0.01;       // step, units of 1/|T|
    int n_steps = 2000;     // must be a multiple of record_stride
    int histories = 2000;
    int record_stride = 5;  // store a sample every this many steps
    int threads = 0;        // 0 = hardware concurrency

    int n_samples() const { return n_steps / record_stride + 1; }
    void validate() const;
};

// Hermitian, unit-trace, positive-semidefinite (after clipping) state.
// Eigenvalues in (eig_floor, 0) are treated as rounding noise and clipped
// with a trace renormalization; anything below eig_floor is an error.
class DensityMatrix {
public:
    static DensityMatrix from_matrix(const CMatrix& m, double eig_floor = -1e-10);
    static DensityMatrix pure(const CVector& psi);

    const CMatrix& matrix() const { return rho_; }
    int dimension() const { return static_cast<int>(rho_.rows()); }

private:
    explicit DensityMatrix(CMatrix rho) : rho_(std::move(rho)) {}
    CMatrix rho_;
};

// U = exp(-i H dt) through the eigendecomposition of H. Throws when H is not
// Hermitian to 1e-12.
CMatrix step_unitary(const CMatrix& h, double dt);
CMatrix step_unitary(const RMatrix& h, double dt);

// All step unitaries for channels restricted to values in {-1, +1}, indexed
// by the sign bitmask. Lets RTN and noiseless runs skip the per-step
// diagonalization entirely.
class UnitaryTable {
public:
    UnitaryTable(const HamiltonianBuilder& builder, double dt);
    const CMatrix& lookup(std::span<const double> q) const;

private:
    std::vector<CMatrix> table_;
};

// One stochastic trajectory: left-multiplied product of step unitaries with
// the channel values refreshed at every step start. Returns the state at
// sample times k * record_stride * dt (the initial state included).
std::vector<CVector> evolve_history(const HamiltonianBuilder& builder,
                                    NoiseChannelSet& channels, const CVector& psi0,
                                    const EvolutionConfig& config,
                                    const UnitaryTable* table = nullptr);

struct TrajectoryAverage {
    std::vector<double> sample_times;
    std::vector<DensityMatrix> rho;       // average over all histories
    std::vector<DensityMatrix> rho_half;  // average over the first half
    std::vector<double> convergence;      // trace distance rho vs rho_half
};

// Monte-Carlo average rho(t) = (1/M) sum_k |psi_k(t)><psi_k(t)|. Histories
// are split into fixed-size chunks whose partial sums are merged in index
// order, so the result is bit-identical for any thread count.
TrajectoryAverage average_density(const HamiltonianBuilder& builder,
                                  const NoiseParams& noise, const CVector& psi0,
                                  const EvolutionConfig& config,
                                  std::uint64_t master_seed);

// Trace distance (1/2) ||a - b||_1 for Hermitian a, b.
double trace_distance(const CMatrix& a, const CMatrix& b);

}  // namespace qcorr
