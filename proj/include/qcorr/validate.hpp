#pragma once

#include <string>
#include <vector>

#include "qcorr/correlations.hpp"
#include "qcorr/rng.hpp"

namespace qcorr {

struct CheckResult {
    std::string name;
    bool pass;
    std::string detail;
};

// -- random inputs ----------------------------------------------------------

CVector random_pure_state(int dim, RandomStream& stream);

// Ginibre construction G G^dag / tr, rank-limited.
DensityMatrix random_density_matrix(int dim, int rank, RandomStream& stream);
TwoQubitState random_two_qubit_state(int rank, RandomStream& stream);

// Haar-ish unitary from the QR factorization of a Ginibre matrix.
CMatrix random_unitary(int dim, RandomStream& stream);

// -- independent evaluation routes (oracles) --------------------------------

// Concurrence through the matrix-square-root spectrum
// sqrt(rho) (sy x sy) rho^* (sy x sy) sqrt(rho), the algebraic twin of the
// rho * rho_tilde route used by concurrence().
double concurrence_sqrt_route(const TwoQubitState& rho);

// Spectrum of the two-particle noiseless ring at v = 0: pair sums of the
// single-particle ring energies -2 T cos(2 pi k / L).
std::vector<double> ring_pair_spectrum(int sites, double hopping, Statistics statistics);

// Induced action of a single-particle mode unitary on the two-particle basis
// (symmetric or antisymmetric square, built from the creation-operator
// matrices).
CMatrix induced_sector_unitary(const FockBasis& basis, const CMatrix& mode_unitary);

// Block single-particle unitary: u_a on party A's modes, u_b on party B's.
CMatrix local_mode_unitary(const FockBasis& basis, const Bipartition& partition,
                           const Eigen::Matrix2cd& u_a, const Eigen::Matrix2cd& u_b);

// Embed a two-qubit register state into the (1,1) sector of the Fock basis
// (the inverse of to_register).
DensityMatrix embed_register(const TwoQubitState& reg, const FockBasis& basis,
                             const Bipartition& partition);

// -- runnable check suites ---------------------------------------------------

// Discord-quantifier properties checked on random states and sector
// mixtures: non-negativity, measured-party asymmetry, invariance under
// party-local mode unitaries, the pure-state entropy identity, vanishing on
// classical-quantum states, and the reduced-entropy upper bound, plus the
// two-route concurrence agreement.
std::vector<CheckResult> property_suite(int n_states, std::uint64_t seed);

// Small brute-force cross-checks: ring spectrum, concurrence routes, Werner
// grid consistency, rate-distribution KS test, fluctuator autocorrelation
// and switch statistics.
std::vector<CheckResult> oracle_checks(std::uint64_t seed);

}  // namespace qcorr
