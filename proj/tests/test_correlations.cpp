#include <doctest.h>

#include "qcorr/correlations.hpp"
#include "qcorr/validate.hpp"

using namespace qcorr;

namespace {

struct Fixture {
    HubbardParams ring;
    HubbardParams dimer;
    FockBasis bose;
    FockBasis fermi;
    Bipartition part_bose;
    Bipartition part_fermi;

    Fixture()
        : ring{LatticeModel::BoseRing, 4, 1.0, 0.0},
          dimer{LatticeModel::FermiDimer, 4, 1.0, 0.0},
          bose(model_basis(ring)),
          fermi(model_basis(dimer)),
          part_bose(Bipartition::standard(ring)),
          part_fermi(Bipartition::standard(dimer)) {}
};

TwoQubitState bell_phi_plus() {
    TwoQubitState rho = TwoQubitState::Zero();
    rho(0, 0) = rho(0, 3) = rho(3, 0) = rho(3, 3) = 0.5;
    return rho;
}

}  // namespace

TEST_CASE("sector probabilities of the named states") {
    Fixture fx;
    DensityMatrix psi_b = DensityMatrix::pure(initial_state(StateLabel::PsiB, fx.bose).amplitudes);
    SectorDecomposition dec = sector_decompose(psi_b, fx.bose, fx.part_bose);
    CHECK(dec.probability[1] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(dec.probability[0] == 0.0);
    CHECK(dec.probability[2] == 0.0);
    CHECK_FALSE(dec.sector[0].has_value());

    // both particles on party A
    CVector pair = CVector::Zero(fx.bose.dimension());
    pair(fx.bose.index_of(std::vector<int>{1, 1, 0, 0})) = 1.0;
    dec = sector_decompose(DensityMatrix::pure(pair), fx.bose, fx.part_bose);
    CHECK(dec.probability[2] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(dec.probability[1] == 0.0);

    DensityMatrix psi_f = DensityMatrix::pure(initial_state(StateLabel::PsiF, fx.fermi).amplitudes);
    dec = sector_decompose(psi_f, fx.fermi, fx.part_fermi);
    CHECK(dec.probability[1] == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("register transfer of the named states") {
    Fixture fx;
    // the paired two-boson state maps to a Bell pair
    DensityMatrix psi_b = DensityMatrix::pure(initial_state(StateLabel::PsiB, fx.bose).amplitudes);
    SectorDecomposition dec = sector_decompose(psi_b, fx.bose, fx.part_bose);
    TwoQubitState reg = to_register(*dec.sector[1], fx.bose, fx.part_bose);
    CHECK(concurrence(reg) == doctest::Approx(1.0).epsilon(1e-12));

    // the factorized state maps to |+>|1>
    DensityMatrix xi_b = DensityMatrix::pure(initial_state(StateLabel::XiB, fx.bose).amplitudes);
    dec = sector_decompose(xi_b, fx.bose, fx.part_bose);
    reg = to_register(*dec.sector[1], fx.bose, fx.part_bose);
    CHECK(concurrence(reg) < 1e-12);
    CHECK(reg(1, 1).real() == doctest::Approx(0.5).epsilon(1e-12));  // |0)|1>
    CHECK(reg(3, 3).real() == doctest::Approx(0.5).epsilon(1e-12));  // |1>|1>
    CHECK(reg(1, 3).real() == doctest::Approx(0.5).epsilon(1e-12));

    // a single occupation pattern maps to the matching register slot
    CVector basis_state = CVector::Zero(fx.bose.dimension());
    basis_state(fx.bose.index_of(std::vector<int>{1, 0, 0, 1})) = 1.0;
    dec = sector_decompose(DensityMatrix::pure(basis_state), fx.bose, fx.part_bose);
    reg = to_register(*dec.sector[1], fx.bose, fx.part_bose);
    CHECK(reg(1, 1).real() == doctest::Approx(1.0).epsilon(1e-13));

    // support outside the one-per-party sector is rejected
    CVector pair = CVector::Zero(fx.bose.dimension());
    pair(fx.bose.index_of(std::vector<int>{2, 0, 0, 0})) = 1.0;
    CHECK_THROWS(to_register(DensityMatrix::pure(pair), fx.bose, fx.part_bose));
}

TEST_CASE("fermionic register transfer keeps party-local operators local") {
    Fixture fx;
    // spread state including the reordered pair (L-down, R-up)
    InitialState ups = initial_state(StateLabel::UpsilonF, fx.fermi);
    DensityMatrix rho = DensityMatrix::pure(ups.amplitudes);
    SectorDecomposition dec = sector_decompose(rho, fx.fermi, fx.part_fermi);
    TwoQubitState reg = to_register(*dec.sector[1], fx.fermi, fx.part_fermi);
    // equivalent to the paired state in register terms
    CHECK(concurrence(reg) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("concurrence reference points") {
    CHECK(concurrence(bell_phi_plus()) == doctest::Approx(1.0).epsilon(1e-13));
    TwoQubitState mixed = 0.25 * TwoQubitState::Identity();
    CHECK(concurrence(mixed) == 0.0);

    double p = 0.75;
    TwoQubitState werner = p * bell_phi_plus() + (1.0 - p) * 0.25 * TwoQubitState::Identity();
    CHECK(concurrence(werner) == doctest::Approx(0.625).epsilon(1e-13));
    CHECK(concurrence_sqrt_route(werner) == doctest::Approx(0.625).epsilon(1e-13));
}

TEST_CASE("the two concurrence routes agree on random states") {
    RandomStream stream(1234);
    double worst = 0.0;
    for (int n = 0; n < 400; ++n) {
        int rank = 1 + int(stream.raw() % 4);
        TwoQubitState rho = random_two_qubit_state(rank, stream);
        worst = std::max(worst, std::abs(concurrence(rho) - concurrence_sqrt_route(rho)));
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("entanglement of formation reference points") {
    CHECK(entanglement_of_formation(0.0) == 0.0);
    CHECK(entanglement_of_formation(1.0) == doctest::Approx(1.0).epsilon(1e-13));
    // frozen value computed from the binary-entropy formula at C = 0.6
    CHECK(entanglement_of_formation(0.6) == doctest::Approx(0.468995593589).epsilon(1e-10));
    double prev = -1.0;
    for (int k = 0; k <= 50; ++k) {
        double value = entanglement_of_formation(k / 50.0);
        CHECK(value >= prev);
        prev = value;
    }
}

TEST_CASE("entanglement of particles of the named states") {
    Fixture fx;
    DensityMatrix psi_b = DensityMatrix::pure(initial_state(StateLabel::PsiB, fx.bose).amplitudes);
    CHECK(entanglement_of_particles(psi_b, fx.bose, fx.part_bose) ==
          doctest::Approx(1.0).epsilon(1e-12));

    DensityMatrix xi_b = DensityMatrix::pure(initial_state(StateLabel::XiB, fx.bose).amplitudes);
    CHECK(entanglement_of_particles(xi_b, fx.bose, fx.part_bose) < 1e-12);

    // an equal mixture of the register basis states with half the weight in
    // other sectors carries no distillable register entanglement
    CMatrix mix = CMatrix::Zero(fx.bose.dimension(), fx.bose.dimension());
    RegisterMap map = register_map(fx.bose, fx.part_bose);
    for (int slot = 0; slot < 4; ++slot) mix(map.fock_index[slot], map.fock_index[slot]) = 0.125;
    int outside = fx.bose.index_of(std::vector<int>{2, 0, 0, 0});
    mix(outside, outside) = 0.5;
    CHECK(entanglement_of_particles(DensityMatrix::from_matrix(mix), fx.bose, fx.part_bose) == 0.0);
}

TEST_CASE("measurement bases are orthogonal rank-1 projector pairs") {
    RandomStream stream(8);
    for (int rep = 0; rep < 30; ++rep) {
        MeasurementBasis mb = make_measurement_basis(M_PI * stream.uniform(),
                                                     2.0 * M_PI * stream.uniform());
        CHECK((mb.projector0 + mb.projector1 - Eigen::Matrix2cd::Identity()).norm() < 1e-14);
        CHECK((mb.projector0 * mb.projector0 - mb.projector0).norm() < 1e-14);
        CHECK((mb.projector0 - mb.projector0.adjoint()).norm() < 1e-14);
        CHECK((mb.projector0 * mb.projector1).norm() < 1e-14);
    }
}

TEST_CASE("discord reference points") {
    CHECK(quantum_discord(bell_phi_plus()) == doctest::Approx(1.0).epsilon(1e-9));

    TwoQubitState mixed = 0.25 * TwoQubitState::Identity();
    CHECK(quantum_discord(mixed) <= 1e-12);

    // grid at two resolutions agrees for the Werner family
    double p = 0.75;
    TwoQubitState werner = p * bell_phi_plus() + (1.0 - p) * 0.25 * TwoQubitState::Identity();
    double coarse = quantum_discord(werner, MeasuredParty::B, DiscordSettings{32, 64, 0, 0.0});
    double fine = quantum_discord(werner, MeasuredParty::B, DiscordSettings{128, 256, 3, 0.0});
    CHECK(std::abs(coarse - fine) <= 1e-3);

    // classical-quantum states measured on the classical side
    Eigen::Vector2cd zero(1.0, 0.0);
    Eigen::Vector2cd plus(1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0));
    TwoQubitState cq = TwoQubitState::Zero();
    cq.block<2, 2>(0, 0) = 0.5 * zero * zero.adjoint();
    cq.block<2, 2>(2, 2) = 0.5 * plus * plus.adjoint();
    CHECK(quantum_discord(cq, MeasuredParty::A) <= 1e-6);
    CHECK(quantum_discord(cq, MeasuredParty::B) > 0.05);
}

TEST_CASE("discord of particles of the named states") {
    Fixture fx;
    DensityMatrix psi_b = DensityMatrix::pure(initial_state(StateLabel::PsiB, fx.bose).amplitudes);
    CHECK(discord_of_particles(psi_b, fx.bose, fx.part_bose) ==
          doctest::Approx(1.0).epsilon(1e-9));

    DensityMatrix xi_b = DensityMatrix::pure(initial_state(StateLabel::XiB, fx.bose).amplitudes);
    CHECK(discord_of_particles(xi_b, fx.bose, fx.part_bose) <= 1e-9);

    DensityMatrix psi_f = DensityMatrix::pure(initial_state(StateLabel::PsiF, fx.fermi).amplitudes);
    CHECK(discord_of_particles(psi_f, fx.fermi, fx.part_fermi) ==
          doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("generalized discord sums sectors and drops trivial registers") {
    Fixture fx;
    DensityMatrix psi_b = DensityMatrix::pure(initial_state(StateLabel::PsiB, fx.bose).amplitudes);
    CHECK(general_discord_of_particles(psi_b, fx.bose, fx.part_bose) ==
          doctest::Approx(discord_of_particles(psi_b, fx.bose, fx.part_bose)).epsilon(1e-12));

    CVector pair = CVector::Zero(fx.bose.dimension());
    pair(fx.bose.index_of(std::vector<int>{1, 1, 0, 0})) = 1.0;
    CHECK(general_discord_of_particles(DensityMatrix::pure(pair), fx.bose, fx.part_bose) == 0.0);

    DensityMatrix bell = embed_register(bell_phi_plus(), fx.bose, fx.part_bose);
    CMatrix mix = 0.5 * bell.matrix() + 0.5 * (pair * pair.adjoint());
    double d = general_discord_of_particles(DensityMatrix::from_matrix(mix), fx.bose, fx.part_bose);
    CHECK(d == doctest::Approx(0.5).epsilon(2e-3));
}

TEST_CASE("purity and decoherence entropy landmarks") {
    Fixture fx;
    DensityMatrix pure_state = DensityMatrix::pure(initial_state(StateLabel::PsiB, fx.bose).amplitudes);
    CHECK(purity(pure_state) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(decoherence_entropy(pure_state) <= 1e-12);

    DensityMatrix mixed10 = DensityMatrix::from_matrix(CMatrix::Identity(10, 10) / 10.0);
    CHECK(purity(mixed10) == doctest::Approx(0.1).epsilon(1e-13));
    CHECK(decoherence_entropy(mixed10) == doctest::Approx(1.0).epsilon(1e-13));

    DensityMatrix mixed6 = DensityMatrix::from_matrix(CMatrix::Identity(6, 6) / 6.0);
    CHECK(purity(mixed6) == doctest::Approx(1.0 / 6.0).epsilon(1e-13));
}

TEST_CASE("register embedding inverts the register transfer") {
    Fixture fx;
    RandomStream stream(55);
    for (const FockBasis* basis : {&fx.bose, &fx.fermi}) {
        const Bipartition& part = basis == &fx.bose ? fx.part_bose : fx.part_fermi;
        TwoQubitState reg = random_two_qubit_state(4, stream);
        DensityMatrix embedded = embed_register(reg, *basis, part);
        TwoQubitState back = to_register(embedded, *basis, part);
        CHECK((back - reg).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("discord property suite passes on a random batch") {
    for (const CheckResult& r : property_suite(120, 31)) {
        INFO(r.name, ": ", r.detail);
        CHECK(r.pass);
    }
}

TEST_CASE("oracle cross-checks pass") {
    for (const CheckResult& r : oracle_checks(12)) {
        INFO(r.name, ": ", r.detail);
        CHECK(r.pass);
    }
}
