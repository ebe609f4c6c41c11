#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "qcorr/model.hpp"
#include "qcorr/rng.hpp"
#include "qcorr/validate.hpp"

using namespace qcorr;

namespace {

HubbardParams ring_params(double t, double v_int) {
    HubbardParams p;
    p.model = LatticeModel::BoseRing;
    p.sites = 4;
    p.hopping = t;
    p.interaction = v_int;
    return p;
}

HubbardParams dimer_params(double t, double v_int) {
    HubbardParams p;
    p.model = LatticeModel::FermiDimer;
    p.hopping = t;
    p.interaction = v_int;
    return p;
}

}  // namespace

TEST_CASE("ring interaction puts V on doubly occupied sites only") {
    HubbardParams p = ring_params(1.0, 3.0);
    FockBasis basis = model_basis(p);
    std::vector<double> q(4, 1.0);
    CMatrix h = bose_hubbard(basis, p, q);
    int doubly = basis.index_of(std::vector<int>{2, 0, 0, 0});
    int split = basis.index_of(std::vector<int>{1, 1, 0, 0});
    CHECK(std::abs(h(doubly, doubly) - Complex(3.0, 0.0)) < 1e-15);  // V/2 * 2 * 1
    CHECK(std::abs(h(split, split)) < 1e-15);
}

TEST_CASE("noninteracting ring spectrum matches single-particle pair sums") {
    HubbardParams p = ring_params(1.0, 0.0);
    FockBasis basis = model_basis(p);
    std::vector<double> q(4, 1.0);
    CMatrix h = bose_hubbard(basis, p, q);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
    std::vector<double> expected = ring_pair_spectrum(4, 1.0, Statistics::Bose);
    // frozen oracle values: pair sums over single energies {-2, 0, 0, 2}
    std::vector<double> frozen{-4, -2, -2, 0, 0, 0, 0, 2, 2, 4};
    for (int k = 0; k < 10; ++k) {
        CHECK(expected[k] == doctest::Approx(frozen[k]).epsilon(1e-14));
        CHECK(es.eigenvalues()(k) == doctest::Approx(frozen[k]).epsilon(1e-12));
    }
}

TEST_CASE("dimer Hamiltonian matches the printed matrix elements") {
    HubbardParams p = dimer_params(1.5, 2.0);
    FockBasis basis = model_basis(p);
    double q_up = 0.7, q_down = -0.4;
    CMatrix h = fermi_hubbard(basis, p, std::array<double, 2>{q_up, q_down});

    int doublon = basis.index_of(std::vector<int>{1, 1, 0, 0});  // both on L
    CHECK(std::abs(h(doublon, doublon) - Complex(1.0, 0.0)) < 1e-15);  // V/2

    int from = basis.index_of(std::vector<int>{0, 0, 1, 1});  // R-up R-down
    int to = basis.index_of(std::vector<int>{1, 0, 0, 1});    // L-up R-down
    CHECK(std::abs(h(to, from) - Complex(-p.hopping * q_up, 0.0)) < 1e-14);
}

TEST_CASE("dimer hopping never flips spin") {
    HubbardParams p = dimer_params(1.0, 2.5);
    FockBasis basis = model_basis(p);
    RMatrix sz = 0.5 * (number_op(basis, 0) + number_op(basis, 2) -
                        number_op(basis, 1) - number_op(basis, 3));
    RandomStream stream(7);
    for (int rep = 0; rep < 20; ++rep) {
        std::array<double, 2> q{2.0 * stream.uniform() - 1.0, 2.0 * stream.uniform() - 1.0};
        CMatrix h = fermi_hubbard(basis, p, q);
        CHECK((sz.cast<Complex>() * h - h * sz.cast<Complex>()).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("Hamiltonians are Hermitian for random modulations") {
    RandomStream stream(11);
    for (int rep = 0; rep < 25; ++rep) {
        HubbardParams pb = ring_params(1.0, 4.0 * stream.uniform() - 2.0);
        FockBasis bb = model_basis(pb);
        std::vector<double> q(4);
        for (double& x : q) x = 2.0 * stream.uniform() - 1.0;
        CMatrix h = bose_hubbard(bb, pb, q);
        CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() <= 1e-14);

        HubbardParams pf = dimer_params(1.0, 4.0 * stream.uniform() - 2.0);
        FockBasis bf = model_basis(pf);
        CMatrix hf = fermi_hubbard(bf, pf, std::array<double, 2>{q[0], q[1]});
        CHECK((hf - hf.adjoint()).cwiseAbs().maxCoeff() <= 1e-14);
    }
}

TEST_CASE("spectrum scales linearly with the common energy scale") {
    FockBasis basis = model_basis(ring_params(1.0, 0.0));
    std::vector<double> q{0.3, -0.8, 1.0, -0.2};
    CMatrix h1 = bose_hubbard(basis, ring_params(1.0, 2.0), q);
    CMatrix h2 = bose_hubbard(basis, ring_params(2.0, 4.0), q);
    Eigen::SelfAdjointEigenSolver<CMatrix> e1(h1, Eigen::EigenvaluesOnly);
    Eigen::SelfAdjointEigenSolver<CMatrix> e2(h2, Eigen::EigenvaluesOnly);
    CHECK((e2.eigenvalues() - 2.0 * e1.eigenvalues()).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("Hamiltonians conserve total particle number exactly") {
    FockBasis basis = model_basis(ring_params(1.0, 1.0));
    std::vector<double> q{1.0, 1.0, -1.0, 0.5};
    CMatrix h = bose_hubbard(basis, ring_params(1.0, 1.0), q);
    CMatrix total = total_number_op(basis).cast<Complex>();
    CHECK((total * h - h * total).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("states reachable from the paired dimer state span four basis vectors") {
    HubbardParams p = dimer_params(1.0, 1.0);
    FockBasis basis = model_basis(p);
    InitialState psi = initial_state(StateLabel::PsiF, basis);
    // repeatedly apply H with different q and track the support
    std::vector<CVector> vecs{psi.amplitudes};
    RandomStream stream(3);
    for (int rep = 0; rep < 8; ++rep) {
        std::array<double, 2> q{2.0 * stream.uniform() - 1.0, 2.0 * stream.uniform() - 1.0};
        CMatrix h = fermi_hubbard(basis, p, q);
        vecs.push_back(h * vecs.back());
    }
    int same_spin_a = basis.index_of(std::vector<int>{1, 0, 1, 0});
    int same_spin_b = basis.index_of(std::vector<int>{0, 1, 0, 1});
    for (const auto& v : vecs) {
        CHECK(std::abs(v(same_spin_a)) == 0.0);
        CHECK(std::abs(v(same_spin_b)) == 0.0);
    }
}

TEST_CASE("named states are normalized and match their creation-operator form") {
    FockBasis bose = model_basis(ring_params(1.0, 0.0));
    FockBasis fermi = model_basis(dimer_params(1.0, 0.0));

    InitialState psi_b = initial_state(StateLabel::PsiB, bose);
    CHECK(psi_b.amplitudes.norm() == doctest::Approx(1.0).epsilon(1e-14));
    int s13 = bose.index_of(std::vector<int>{1, 0, 1, 0});
    int s24 = bose.index_of(std::vector<int>{0, 1, 0, 1});
    CHECK(std::abs(psi_b.amplitudes(s13) - Complex(1.0 / std::sqrt(2.0), 0.0)) < 1e-14);
    CHECK(std::abs(psi_b.amplitudes(s24) - Complex(1.0 / std::sqrt(2.0), 0.0)) < 1e-14);

    // printed prefactor of the paired fermi state is 1/2; construction renormalizes
    InitialState psi_f = initial_state(StateLabel::PsiF, fermi);
    CHECK(psi_f.amplitudes.norm() == doctest::Approx(1.0).epsilon(1e-14));

    InitialState prime = initial_state(StateLabel::PsiBprime, bose);
    CHECK(std::abs(prime.amplitudes(s24) / prime.amplitudes(s13) - std::sqrt(3.0)) < 1e-13);

    InitialState upsilon = initial_state(StateLabel::UpsilonF, fermi);
    int s14 = fermi.index_of(std::vector<int>{1, 0, 0, 1});
    int s23 = fermi.index_of(std::vector<int>{0, 1, 1, 0});
    // canonical reordering of c_Rup+ c_Ldown+ gives the relative minus sign
    CHECK(std::abs(upsilon.amplitudes(s23) / upsilon.amplitudes(s14) + 1.0) < 1e-14);
}

TEST_CASE("state labels must match the basis statistics") {
    FockBasis bose = model_basis(ring_params(1.0, 0.0));
    FockBasis fermi = model_basis(dimer_params(1.0, 0.0));
    CHECK_THROWS(initial_state(StateLabel::PsiF, bose));
    CHECK_THROWS(initial_state(StateLabel::XiB, fermi));
    CHECK_THROWS(parse_state("nonsense"));
    CHECK(parse_state("UpsilonF") == StateLabel::UpsilonF);
}

TEST_CASE("bipartitions must split the modes into two pairs") {
    FockBasis basis = model_basis(ring_params(1.0, 0.0));
    Bipartition good{{0, 1}, {2, 3}};
    CHECK_NOTHROW(good.validate(basis));
    CHECK_THROWS(Bipartition{{0}, {1, 2, 3}}.validate(basis));
    CHECK_THROWS(Bipartition{{0, 1}, {1, 3}}.validate(basis));
    CHECK(Bipartition::standard(dimer_params(1.0, 0.0)).party_a == std::vector<int>{0, 2});
}

TEST_CASE("ring builder generalizes to longer chains") {
    HubbardParams p = ring_params(1.0, 0.0);
    p.sites = 6;
    FockBasis basis = model_basis(p);
    CHECK(basis.dimension() == 21);
    std::vector<double> q(6, 1.0);
    HamiltonianBuilder builder(basis, p);
    CHECK(builder.channels() == 6);
    RMatrix h = builder.assemble(q);
    Eigen::SelfAdjointEigenSolver<RMatrix> es(h, Eigen::EigenvaluesOnly);
    std::vector<double> expected = ring_pair_spectrum(6, 1.0, Statistics::Bose);
    for (int k = 0; k < basis.dimension(); ++k)
        CHECK(es.eigenvalues()(k) == doctest::Approx(expected[k]).epsilon(1e-12));
}
