#include "qcorr/model.hpp"

#include <algorithm>
#include <stdexcept>

namespace qcorr {

namespace {

// spin-orbital indices for the dimer, canonical order (L up, L down, R up, R down)
constexpr int kLUp = 0, kLDown = 1, kRUp = 2, kRDown = 3;

void check_params(const HubbardParams& params) {
    if (params.hopping == 0.0) throw std::invalid_argument("hopping amplitude must be nonzero");
    if (params.model == LatticeModel::BoseRing && params.sites < 3)
        throw std::invalid_argument("ring needs at least 3 sites");
}

}  // namespace

FockBasis model_basis(const HubbardParams& params) {
    check_params(params);
    if (params.model == LatticeModel::BoseRing) {
        FockBasis basis = build_basis(Statistics::Bose, params.sites, 2);
        std::vector<std::string> labels(params.sites);
        for (int i = 0; i < params.sites; ++i) labels[i] = "site" + std::to_string(i + 1);
        basis.set_mode_labels(std::move(labels));
        return basis;
    }
    FockBasis basis = build_basis(Statistics::Fermi, 4, 2);
    basis.set_mode_labels({"Lup", "Ldown", "Rup", "Rdown"});
    return basis;
}

int channel_count(const HubbardParams& params) {
    return params.model == LatticeModel::BoseRing ? params.sites : 2;
}

HamiltonianBuilder::HamiltonianBuilder(const FockBasis& basis, const HubbardParams& params)
    : hopping_(params.hopping) {
    check_params(params);
    int d = basis.dimension();
    interaction_ = RMatrix::Zero(d, d);

    if (params.model == LatticeModel::BoseRing) {
        if (basis.statistics() != Statistics::Bose || basis.modes() != params.sites)
            throw std::invalid_argument("basis does not match ring model");
        int n_sites = params.sites;
        for (int bond = 0; bond < n_sites; ++bond) {
            int next = (bond + 1) % n_sites;
            RMatrix hop = hop_op(basis, bond, next);
            bonds_.push_back(hop + hop.transpose());
        }
        for (int s = 0; s < d; ++s) {
            double u = 0.0;
            for (int n : basis.occupation(s)) u += 0.5 * params.interaction * n * (n - 1);
            interaction_(s, s) = u;
        }
    } else {
        if (basis.statistics() != Statistics::Fermi || basis.modes() != 4)
            throw std::invalid_argument("basis does not match dimer model");
        RMatrix hop_up = hop_op(basis, kLUp, kRUp);
        RMatrix hop_down = hop_op(basis, kLDown, kRDown);
        bonds_.push_back(hop_up + hop_up.transpose());
        bonds_.push_back(hop_down + hop_down.transpose());
        for (int s = 0; s < d; ++s) {
            const auto& occ = basis.occupation(s);
            interaction_(s, s) = 0.5 * params.interaction *
                                 (occ[kLUp] * occ[kLDown] + occ[kRUp] * occ[kRDown]);
        }
    }
}

void HamiltonianBuilder::assemble(std::span<const double> q, RMatrix& h) const {
    if (static_cast<int>(q.size()) != channels())
        throw std::invalid_argument("one modulation value per channel required");
    h = interaction_;
    for (size_t c = 0; c < bonds_.size(); ++c) h.noalias() -= hopping_ * q[c] * bonds_[c];
}

RMatrix HamiltonianBuilder::assemble(std::span<const double> q) const {
    RMatrix h;
    assemble(q, h);
    return h;
}

CMatrix bose_hubbard(const FockBasis& basis, const HubbardParams& params,
                     std::span<const double> q) {
    if (params.model != LatticeModel::BoseRing)
        throw std::invalid_argument("ring Hamiltonian requested for non-ring model");
    return HamiltonianBuilder(basis, params).assemble(q).cast<Complex>();
}

CMatrix fermi_hubbard(const FockBasis& basis, const HubbardParams& params,
                      std::span<const double> q) {
    if (params.model != LatticeModel::FermiDimer)
        throw std::invalid_argument("dimer Hamiltonian requested for non-dimer model");
    return HamiltonianBuilder(basis, params).assemble(q).cast<Complex>();
}

namespace {

bool bosonic_label(StateLabel label) {
    return label == StateLabel::PsiB || label == StateLabel::XiB ||
           label == StateLabel::PsiBprime;
}

// amplitudes of c_i^dag c_j^dag |0> (applied right to left) in the 2-particle basis
CVector pair_creation(const FockBasis& basis, int mode_i, int mode_j) {
    FockBasis one = build_basis(basis.statistics(), basis.modes(), 1);
    FockBasis vac = build_basis(basis.statistics(), basis.modes(), 0);
    CVector vacuum = CVector::Ones(vac.dimension());
    return creation_op(basis, mode_i) * (creation_op(one, mode_j) * vacuum);
}

}  // namespace

InitialState initial_state(StateLabel label, const FockBasis& basis) {
    bool bose = basis.statistics() == Statistics::Bose;
    if (bosonic_label(label) != bose)
        throw std::invalid_argument("state label incompatible with basis statistics");
    if (basis.particles() != 2) throw std::invalid_argument("two-particle states only");
    if (bose && basis.modes() != 4)
        throw std::invalid_argument("named ring states are defined on 4 sites");
    if (!bose && basis.modes() != 4)
        throw std::invalid_argument("dimer states need the 4 spin-orbital basis");

    CVector psi;
    switch (label) {
        case StateLabel::PsiB:  // b3+ b1+ + b4+ b2+
            psi = pair_creation(basis, 2, 0) + pair_creation(basis, 3, 1);
            break;
        case StateLabel::XiB:  // b4+ b1+ + b4+ b2+
            psi = pair_creation(basis, 3, 0) + pair_creation(basis, 3, 1);
            break;
        case StateLabel::PsiBprime:  // b1+ b3+ + sqrt(3) b2+ b4+
            psi = pair_creation(basis, 0, 2) + std::sqrt(3.0) * pair_creation(basis, 1, 3);
            break;
        case StateLabel::PsiF:  // c_Lup+ c_Ldown+ + c_Rup+ c_Rdown+
            psi = pair_creation(basis, 0, 1) + pair_creation(basis, 2, 3);
            break;
        case StateLabel::XiF:  // (c_Lup+ + c_Rup+) c_Rdown+
            psi = pair_creation(basis, 0, 3) + pair_creation(basis, 2, 3);
            break;
        case StateLabel::UpsilonF:  // c_Lup+ c_Rdown+ + c_Rup+ c_Ldown+
            psi = pair_creation(basis, 0, 3) + pair_creation(basis, 2, 1);
            break;
    }
    double norm = psi.norm();
    if (norm <= 0.0) throw std::logic_error("named state has zero norm");
    return InitialState{label, psi / norm};
}

const char* state_name(StateLabel label) {
    switch (label) {
        case StateLabel::PsiB: return "PsiB";
        case StateLabel::XiB: return "XiB";
        case StateLabel::PsiBprime: return "PsiBprime";
        case StateLabel::PsiF: return "PsiF";
        case StateLabel::XiF: return "XiF";
        case StateLabel::UpsilonF: return "UpsilonF";
    }
    return "?";
}

StateLabel parse_state(const std::string& name) {
    if (name == "PsiB") return StateLabel::PsiB;
    if (name == "XiB") return StateLabel::XiB;
    if (name == "PsiBprime") return StateLabel::PsiBprime;
    if (name == "PsiF") return StateLabel::PsiF;
    if (name == "XiF") return StateLabel::XiF;
    if (name == "UpsilonF") return StateLabel::UpsilonF;
    throw std::invalid_argument("unknown state label: " + name);
}

Bipartition Bipartition::standard(const HubbardParams& params) {
    if (params.model == LatticeModel::BoseRing) {
        if (params.sites != 4)
            throw std::invalid_argument("standard ring bipartition is defined for 4 sites");
        return Bipartition{{0, 1}, {2, 3}};  // sites {1,2} vs {3,4}
    }
    return Bipartition{{kLUp, kRUp}, {kLDown, kRDown}};  // spin up vs spin down
}

void Bipartition::validate(const FockBasis& basis) const {
    if (party_a.size() != 2 || party_b.size() != 2)
        throw std::invalid_argument("each party must hold exactly two modes");
    std::vector<int> all = party_a;
    all.insert(all.end(), party_b.begin(), party_b.end());
    std::sort(all.begin(), all.end());
    for (size_t i = 0; i < all.size(); ++i) {
        if (all[i] != static_cast<int>(i))
            throw std::invalid_argument("parties must partition the modes");
    }
    if (static_cast<int>(all.size()) != basis.modes())
        throw std::invalid_argument("parties must cover every mode");
}

}  // namespace qcorr
