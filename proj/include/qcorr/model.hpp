#pragma once

#include <span>
#include <vector>

#include "qcorr/fock.hpp"

namespace qcorr {

enum class LatticeModel { BoseRing, FermiDimer };

// Two-particle Hubbard parameters. The hopping amplitude sets the system
// timescale (times below are in units of 1/|T|); only v = V/T changes the
// dynamics up to that rescaling.
struct HubbardParams {
    LatticeModel model = LatticeModel::BoseRing;
    int sites = 4;              // BoseRing length (PBC); FermiDimer is fixed at 2 sites
    double hopping = 1.0;       // T, must be nonzero
    double interaction = 0.0;   // V

    double v() const { return interaction / hopping; }
};

// Fock basis matching the model: 2 bosons in L ring sites, or 2 fermions in
// the 4 spin-orbitals (L up, L down, R up, R down) in that canonical order.
FockBasis model_basis(const HubbardParams& params);

// Number of independent noise channels: one per ring bond, or one per spin.
int channel_count(const HubbardParams& params);

// Precomputed hopping/interaction terms so the per-step Hamiltonian refresh
// is a cheap linear combination. All matrices are real symmetric in the
// occupation basis.
class HamiltonianBuilder {
public:
    HamiltonianBuilder(const FockBasis& basis, const HubbardParams& params);

    int dimension() const { return static_cast<int>(interaction_.rows()); }
    int channels() const { return static_cast<int>(bonds_.size()); }

    // H(q) = -T sum_c q_c (hop_c + hop_c^dag) + interaction part
    void assemble(std::span<const double> q, RMatrix& h) const;
    RMatrix assemble(std::span<const double> q) const;

private:
    double hopping_;
    std::vector<RMatrix> bonds_;
    RMatrix interaction_;
};

// Ring Hamiltonian with per-bond hopping modulations q (|q_i| <= 1), bond i
// joining sites i and i+1 with periodic closure. Doubly occupied sites pay V.
CMatrix bose_hubbard(const FockBasis& basis, const HubbardParams& params,
                     std::span<const double> q);

// Dimer Hamiltonian with per-spin modulations q = {q_up, q_down}; hopping
// never flips spin, and each doubly occupied site pays V/2.
CMatrix fermi_hubbard(const FockBasis& basis, const HubbardParams& params,
                      std::span<const double> q);

enum class StateLabel { PsiB, XiB, PsiBprime, PsiF, XiF, UpsilonF };

struct InitialState {
    StateLabel label;
    CVector amplitudes;  // unit norm
};

// Build one of the named two-particle states in `basis`. States are
// renormalized regardless of any textbook prefactor. Throws when the label
// statistics do not match the basis.
InitialState initial_state(StateLabel label, const FockBasis& basis);

const char* state_name(StateLabel label);
StateLabel parse_state(const std::string& name);

// Mode split between the two observers; each party holds exactly two modes
// so the one-particle-per-party sector maps onto a pair of register qubits.
struct Bipartition {
    std::vector<int> party_a;
    std::vector<int> party_b;

    static Bipartition standard(const HubbardParams& params);
    void validate(const FockBasis& basis) const;
};

}  // namespace qcorr
