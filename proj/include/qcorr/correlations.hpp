#pragma once

#include <array>
#include <optional>
#include <vector>

#include "qcorr/model.hpp"
#include "qcorr/propagator.hpp"

namespace qcorr {

// Decomposition of a two-particle state over local-particle-number sectors
// (k particles on party A, N-k on party B). Projecting onto these sectors is
// what makes the correlation measures compatible with the local-number
// superselection rule.
struct SectorDecomposition {
    std::vector<double> probability;                   // indexed by k = 0..N
    std::vector<std::optional<DensityMatrix>> sector;  // normalized; empty when P_k ~ 0
    std::vector<std::vector<int>> members;             // basis indices per sector
};

SectorDecomposition sector_decompose(const DensityMatrix& rho, const FockBasis& basis,
                                     const Bipartition& partition);

using TwoQubitState = Eigen::Matrix4cd;  // register basis |q_A q_B>, row = 2*q_A + q_B

// Mapping of the one-particle-per-party sector onto the two-qubit register:
// qubit value 0/1 records which of the party's two modes is occupied. For
// fermions the per-state sign reorders the pair into A-mode-first operator
// order, which keeps party-local mode operations local on the register.
struct RegisterMap {
    std::array<int, 4> fock_index;
    std::array<double, 4> sign;
};
RegisterMap register_map(const FockBasis& basis, const Bipartition& partition);

// Transfer a (1,1)-sector state to the register. Throws when the input has
// support outside that sector.
TwoQubitState to_register(const DensityMatrix& rho11, const FockBasis& basis,
                          const Bipartition& partition);

// Wootters concurrence from the decreasing eigenvalues of rho * rho_tilde,
// rho_tilde = (sigma_y x sigma_y) rho^* (sigma_y x sigma_y).
double concurrence(const TwoQubitState& rho);

// h((1 + sqrt(1 - C^2)) / 2) with the binary entropy in bits.
double entanglement_of_formation(double concurrence_value);

// Sector-weighted register entanglement P_11 * EoF(rho_11); zero whenever
// the (1,1) sector is empty.
double entanglement_of_particles(const DensityMatrix& rho, const FockBasis& basis,
                                 const Bipartition& partition);

// Rank-1 projective measurement direction on the Bloch sphere.
struct MeasurementBasis {
    double theta;
    double phi;
    Eigen::Matrix2cd projector0;  // onto (cos(theta/2), e^{i phi} sin(theta/2))
    Eigen::Matrix2cd projector1;  // orthogonal complement
};
MeasurementBasis make_measurement_basis(double theta, double phi);

enum class MeasuredParty { A, B };

struct DiscordSettings {
    int grid_theta = 64;
    int grid_phi = 128;
    int refine_rounds = 3;    // each round shrinks the search cell 4x
    double tol = 1e-4;        // stop refining when the gain drops below this
};

// Quantum discord of the register state: mutual information minus the
// classical correlation maximized over projective measurements on the chosen
// party (exhaustive grid plus local refinement). Clamped at zero.
double quantum_discord(const TwoQubitState& rho, MeasuredParty measured = MeasuredParty::B,
                       const DiscordSettings& settings = {});

// P_11 * discord(rho_11); zero whenever the (1,1) sector is empty.
double discord_of_particles(const DensityMatrix& rho, const FockBasis& basis,
                            const Bipartition& partition,
                            MeasuredParty measured = MeasuredParty::B,
                            const DiscordSettings& settings = {});

// Sector sum sum_k P_k D(rho_k). Sectors with an empty party have a trivial
// register on one side and contribute zero.
double general_discord_of_particles(const DensityMatrix& rho, const FockBasis& basis,
                                    const Bipartition& partition,
                                    MeasuredParty measured = MeasuredParty::B,
                                    const DiscordSettings& settings = {});

double purity(const DensityMatrix& rho);

// Von Neumann entropy normalized by log(dim): 0 for pure states, 1 for the
// maximally mixed state.
double decoherence_entropy(const DensityMatrix& rho);

// entropy in bits
double von_neumann_entropy(const CMatrix& rho);

// Entropy of one party's sector-resolved reduction: the sector-label mixing
// entropy plus the weighted per-sector register entropies.
double party_entropy(const DensityMatrix& rho, const FockBasis& basis,
                     const Bipartition& partition, MeasuredParty party);

// Partial trace of a register state over the other party.
Eigen::Matrix2cd reduce_register(const TwoQubitState& rho, MeasuredParty keep);

}  // namespace qcorr
