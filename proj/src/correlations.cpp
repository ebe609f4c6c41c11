#include "qcorr/correlations.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace qcorr {

namespace {

constexpr double kSectorFloor = 1e-14;  // below this a sector counts as empty

double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

int party_occupation(const std::vector<int>& occ, const std::vector<int>& party) {
    int n = 0;
    for (int m : party) n += occ[m];
    return n;
}

}  // namespace

SectorDecomposition sector_decompose(const DensityMatrix& rho, const FockBasis& basis,
                                     const Bipartition& partition) {
    partition.validate(basis);
    if (rho.dimension() != basis.dimension())
        throw std::invalid_argument("state dimension does not match basis");

    int n_particles = basis.particles();
    SectorDecomposition dec;
    dec.probability.assign(n_particles + 1, 0.0);
    dec.sector.resize(n_particles + 1);
    dec.members.resize(n_particles + 1);

    for (int s = 0; s < basis.dimension(); ++s) {
        int k = party_occupation(basis.occupation(s), partition.party_a);
        dec.members[k].push_back(s);
    }

    const CMatrix& m = rho.matrix();
    for (int k = 0; k <= n_particles; ++k) {
        double p = 0.0;
        for (int s : dec.members[k]) p += m(s, s).real();
        p = std::max(p, 0.0);
        dec.probability[k] = p;
        if (p <= kSectorFloor) continue;
        CMatrix block = CMatrix::Zero(basis.dimension(), basis.dimension());
        for (int s : dec.members[k])
            for (int t : dec.members[k]) block(s, t) = m(s, t) / p;
        dec.sector[k] = DensityMatrix::from_matrix(block);
    }
    return dec;
}

RegisterMap register_map(const FockBasis& basis, const Bipartition& partition) {
    partition.validate(basis);
    if (basis.particles() != 2)
        throw std::invalid_argument("register mapping is defined for two particles");

    int a_lo = std::min(partition.party_a[0], partition.party_a[1]);
    int a_hi = std::max(partition.party_a[0], partition.party_a[1]);
    int b_lo = std::min(partition.party_b[0], partition.party_b[1]);
    int b_hi = std::max(partition.party_b[0], partition.party_b[1]);
    bool fermi = basis.statistics() == Statistics::Fermi;

    RegisterMap map{};
    map.fock_index.fill(-1);
    for (int s = 0; s < basis.dimension(); ++s) {
        const auto& occ = basis.occupation(s);
        if (party_occupation(occ, partition.party_a) != 1) continue;
        int a = occ[a_lo] == 1 ? a_lo : a_hi;
        int b = occ[b_lo] == 1 ? b_lo : b_hi;
        int slot = 2 * (a == a_hi ? 1 : 0) + (b == b_hi ? 1 : 0);
        map.fock_index[slot] = s;
        // reorder c_a^dag c_b^dag into canonical mode order; swapping the
        // fermionic pair costs a sign
        map.sign[slot] = (fermi && a > b) ? -1.0 : 1.0;
    }
    for (int slot = 0; slot < 4; ++slot)
        if (map.fock_index[slot] < 0) throw std::logic_error("incomplete register sector");
    return map;
}

TwoQubitState to_register(const DensityMatrix& rho11, const FockBasis& basis,
                          const Bipartition& partition) {
    RegisterMap map = register_map(basis, partition);
    const CMatrix& m = rho11.matrix();
    double in_sector = 0.0;
    for (int slot = 0; slot < 4; ++slot) in_sector += m(map.fock_index[slot], map.fock_index[slot]).real();
    if (std::abs(in_sector - 1.0) > 1e-10)
        throw std::invalid_argument("state has support outside the one-per-party sector");

    TwoQubitState reg;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
            reg(r, c) = map.sign[r] * map.sign[c] * m(map.fock_index[r], map.fock_index[c]);
    return reg;
}

double concurrence(const TwoQubitState& rho) {
    Eigen::Matrix4d flip = Eigen::Matrix4d::Zero();  // sigma_y x sigma_y
    flip(0, 3) = -1.0; flip(1, 2) = 1.0; flip(2, 1) = 1.0; flip(3, 0) = -1.0;
    // With rho = L L^dag the decreasing eigenvalues of rho * rho_tilde are the
    // squared singular values of K = L^T (sy x sy) L, which stay accurate even
    // on the null space where the eigenvalue route loses half the digits.
    Eigen::SelfAdjointEigenSolver<TwoQubitState> es(rho);
    Eigen::Vector4d lambda = es.eigenvalues();
    for (int k = 0; k < 4; ++k)
        lambda(k) = lambda(k) > 1e-13 ? std::sqrt(lambda(k)) : 0.0;
    TwoQubitState factor = es.eigenvectors() * lambda.asDiagonal();
    TwoQubitState k_matrix = factor.transpose() * flip * factor;
    Eigen::JacobiSVD<TwoQubitState> svd(k_matrix);
    const auto& s = svd.singularValues();
    return std::max(0.0, s(0) - s(1) - s(2) - s(3));
}

double entanglement_of_formation(double concurrence_value) {
    double c = std::clamp(concurrence_value, 0.0, 1.0);
    double x = 0.5 * (1.0 + std::sqrt(std::max(0.0, 1.0 - c * c)));
    return std::max(0.0, -xlog2x(x) - xlog2x(1.0 - x));
}

double entanglement_of_particles(const DensityMatrix& rho, const FockBasis& basis,
                                 const Bipartition& partition) {
    SectorDecomposition dec = sector_decompose(rho, basis, partition);
    double p11 = dec.probability[1];
    if (p11 <= kSectorFloor || !dec.sector[1]) return 0.0;
    TwoQubitState reg = to_register(*dec.sector[1], basis, partition);
    return p11 * entanglement_of_formation(concurrence(reg));
}

MeasurementBasis make_measurement_basis(double theta, double phi) {
    Complex e_phi = std::polar(1.0, phi);
    Eigen::Vector2cd v0(std::cos(0.5 * theta), e_phi * std::sin(0.5 * theta));
    Eigen::Vector2cd v1(-std::conj(e_phi) * std::sin(0.5 * theta), std::cos(0.5 * theta));
    return MeasurementBasis{theta, phi, v0 * v0.adjoint(), v1 * v1.adjoint()};
}

namespace {

// B-side 2x2 blocks of the register state, indexed by the A indices
struct MeasurementBlocks {
    std::array<std::array<Eigen::Matrix2cd, 2>, 2> block;
};

MeasurementBlocks split_blocks(const TwoQubitState& rho) {
    MeasurementBlocks mb;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            mb.block[i][j] = rho.block<2, 2>(2 * i, 2 * j);
    return mb;
}

// entropy terms of one outcome: -sum mu log2 mu + p log2 p for the
// unnormalized conditioned state with eigenvalues mu and weight p
double outcome_entropy(const Eigen::Matrix2cd& r) {
    double a = r(0, 0).real();
    double d = r(1, 1).real();
    double p = a + d;
    if (p <= 1e-15) return 0.0;
    double radius = std::sqrt(std::max(0.0, 0.25 * (a - d) * (a - d) + std::norm(r(0, 1))));
    double mu0 = std::max(0.0, 0.5 * p + radius);
    double mu1 = std::max(0.0, 0.5 * p - radius);
    return -xlog2x(mu0) - xlog2x(mu1) + xlog2x(p);
}

// conditional entropy sum_k p_k S(rho_k^A) after measuring B along
// (theta, phi)
double conditional_entropy(const MeasurementBlocks& mb, double theta, double phi) {
    Complex e_phi = std::polar(1.0, phi);
    Eigen::Vector2cd v0(std::cos(0.5 * theta), e_phi * std::sin(0.5 * theta));
    Eigen::Vector2cd v1(-std::conj(e_phi) * std::sin(0.5 * theta), std::cos(0.5 * theta));

    double total = 0.0;
    for (const auto& v : {v0, v1}) {
        Eigen::Matrix2cd r;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) r(i, j) = (v.adjoint() * mb.block[i][j] * v)(0, 0);
        total += outcome_entropy(r);
    }
    return total;
}

TwoQubitState swap_parties(const TwoQubitState& rho) {
    // permute |q_A q_B> -> |q_B q_A>
    std::array<int, 4> perm{0, 2, 1, 3};
    TwoQubitState out;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) out(r, c) = rho(perm[r], perm[c]);
    return out;
}

}  // namespace

double quantum_discord(const TwoQubitState& rho, MeasuredParty measured,
                       const DiscordSettings& settings) {
    TwoQubitState state = measured == MeasuredParty::B ? rho : swap_parties(rho);

    Eigen::Matrix2cd rho_b = reduce_register(state, MeasuredParty::B);
    double s_b = von_neumann_entropy(rho_b);
    double s_ab = von_neumann_entropy(state);

    MeasurementBlocks mb = split_blocks(state);

    // coarse exhaustive grid; keep a few leading cells so near-degenerate
    // optima are all refined rather than just the single incumbent
    constexpr int kStarts = 3;
    struct Cell {
        double value = std::numeric_limits<double>::infinity();
        double theta = 0.0, phi = 0.0;
    };
    std::array<Cell, kStarts> leaders;
    int gt = std::max(2, settings.grid_theta);
    int gp = std::max(2, settings.grid_phi);
    for (int i = 0; i < gt; ++i) {
        double theta = M_PI * i / (gt - 1);
        for (int j = 0; j < gp; ++j) {
            double phi = 2.0 * M_PI * j / gp;
            double e = conditional_entropy(mb, theta, phi);
            if (e < leaders.back().value) {
                leaders.back() = {e, theta, phi};
                for (int k = kStarts - 1; k > 0 && leaders[k].value < leaders[k - 1].value; --k)
                    std::swap(leaders[k], leaders[k - 1]);
            }
        }
    }

    // local refinement around each leading cell, shrinking the cell 4x per round
    double best = leaders[0].value;
    for (const Cell& start : leaders) {
        if (!std::isfinite(start.value)) continue;
        double half_theta = M_PI / (gt - 1);
        double half_phi = 2.0 * M_PI / gp;
        double local = start.value;
        double theta0 = start.theta, phi0 = start.phi;
        for (int round = 0; round < settings.refine_rounds; ++round) {
            double prev = local;
            for (int i = -4; i <= 4; ++i) {
                double theta = std::clamp(theta0 + i * half_theta / 4.0, 0.0, M_PI);
                for (int j = -4; j <= 4; ++j) {
                    double phi = phi0 + j * half_phi / 4.0;
                    double e = conditional_entropy(mb, theta, phi);
                    if (e < local) {
                        local = e;
                        theta0 = theta;
                        phi0 = phi;
                    }
                }
            }
            half_theta /= 4.0;
            half_phi /= 4.0;
            if (prev - local < settings.tol) break;
        }
        best = std::min(best, local);
    }

    // D = T - J = S(B) - S(AB) + min conditional entropy
    return std::max(0.0, s_b - s_ab + best);
}

double discord_of_particles(const DensityMatrix& rho, const FockBasis& basis,
                            const Bipartition& partition, MeasuredParty measured,
                            const DiscordSettings& settings) {
    SectorDecomposition dec = sector_decompose(rho, basis, partition);
    double p11 = dec.probability[1];
    if (p11 <= kSectorFloor || !dec.sector[1]) return 0.0;
    TwoQubitState reg = to_register(*dec.sector[1], basis, partition);
    return p11 * quantum_discord(reg, measured, settings);
}

double general_discord_of_particles(const DensityMatrix& rho, const FockBasis& basis,
                                    const Bipartition& partition, MeasuredParty measured,
                                    const DiscordSettings& settings) {
    SectorDecomposition dec = sector_decompose(rho, basis, partition);
    double total = 0.0;
    for (size_t k = 0; k < dec.probability.size(); ++k) {
        if (k != 1) continue;  // a party with 0 or 2 particles has a trivial register
        if (dec.probability[k] <= kSectorFloor || !dec.sector[k]) continue;
        TwoQubitState reg = to_register(*dec.sector[k], basis, partition);
        total += dec.probability[k] * quantum_discord(reg, measured, settings);
    }
    return total;
}

double purity(const DensityMatrix& rho) { return rho.matrix().squaredNorm(); }

double decoherence_entropy(const DensityMatrix& rho) {
    return von_neumann_entropy(rho.matrix()) / std::log2(static_cast<double>(rho.dimension()));
}

double von_neumann_entropy(const CMatrix& rho) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(rho, Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (int k = 0; k < es.eigenvalues().size(); ++k) s -= xlog2x(es.eigenvalues()(k));
    return std::max(0.0, s);
}

double party_entropy(const DensityMatrix& rho, const FockBasis& basis,
                     const Bipartition& partition, MeasuredParty party) {
    SectorDecomposition dec = sector_decompose(rho, basis, partition);
    int n_particles = basis.particles();
    double total = 0.0;
    for (int k = 0; k <= n_particles; ++k) {
        double p = dec.probability[k];
        if (p <= kSectorFloor || !dec.sector[k]) continue;
        total -= xlog2x(p);  // sector-label mixing
        int held = party == MeasuredParty::A ? k : n_particles - k;
        if (held == 0) continue;  // party holds the vacuum, a pure register
        if (held == n_particles) {
            total += p * von_neumann_entropy(dec.sector[k]->matrix());
        } else {
            TwoQubitState reg = to_register(*dec.sector[k], basis, partition);
            total += p * von_neumann_entropy(reduce_register(reg, party));
        }
    }
    return total;
}

Eigen::Matrix2cd reduce_register(const TwoQubitState& rho, MeasuredParty keep) {
    Eigen::Matrix2cd out = Eigen::Matrix2cd::Zero();
    if (keep == MeasuredParty::A) {
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int b = 0; b < 2; ++b) out(i, j) += rho(2 * i + b, 2 * j + b);
    } else {
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c)
                for (int i = 0; i < 2; ++i) out(b, c) += rho(2 * i + b, 2 * i + c);
    }
    return out;
}

}  // namespace qcorr
