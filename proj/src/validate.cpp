#include "qcorr/validate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "qcorr/model.hpp"
#include "qcorr/noise.hpp"

namespace qcorr {

namespace {

std::string format_worst(double worst, double tol) {
    std::ostringstream os;
    os << "worst " << worst << " (tol " << tol << ")";
    return os.str();
}

}  // namespace

CVector random_pure_state(int dim, RandomStream& stream) {
    CVector psi(dim);
    for (int i = 0; i < dim; ++i) psi(i) = Complex(stream.normal(), stream.normal());
    return psi / psi.norm();
}

DensityMatrix random_density_matrix(int dim, int rank, RandomStream& stream) {
    CMatrix g(dim, rank);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < rank; ++j) g(i, j) = Complex(stream.normal(), stream.normal());
    CMatrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    rho = 0.5 * (rho + rho.adjoint());
    return DensityMatrix::from_matrix(rho);
}

TwoQubitState random_two_qubit_state(int rank, RandomStream& stream) {
    return TwoQubitState(random_density_matrix(4, rank, stream).matrix());
}

CMatrix random_unitary(int dim, RandomStream& stream) {
    CMatrix g(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) g(i, j) = Complex(stream.normal(), stream.normal());
    Eigen::HouseholderQR<CMatrix> qr(g);
    CMatrix q = qr.householderQ();
    CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int k = 0; k < dim; ++k) {
        Complex d = r(k, k);
        q.col(k) *= d / std::abs(d);
    }
    return q;
}

double concurrence_sqrt_route(const TwoQubitState& rho) {
    Eigen::SelfAdjointEigenSolver<TwoQubitState> es(rho);
    Eigen::Vector4d clipped = es.eigenvalues();
    for (int k = 0; k < 4; ++k)
        clipped(k) = clipped(k) > 1e-13 ? std::sqrt(clipped(k)) : 0.0;
    TwoQubitState sqrt_rho =
        es.eigenvectors() * clipped.asDiagonal() * es.eigenvectors().adjoint();
    Eigen::Matrix4d flip = Eigen::Matrix4d::Zero();
    flip(0, 3) = -1.0; flip(1, 2) = 1.0; flip(2, 1) = 1.0; flip(3, 0) = -1.0;
    TwoQubitState eta = sqrt_rho * flip * rho.conjugate() * flip * sqrt_rho;
    Eigen::SelfAdjointEigenSolver<TwoQubitState> eta_es(eta, Eigen::EigenvaluesOnly);
    std::array<double, 4> roots{};
    for (int k = 0; k < 4; ++k) {
        double lambda = eta_es.eigenvalues()(k);
        roots[k] = lambda > 1e-13 ? std::sqrt(lambda) : 0.0;
    }
    std::sort(roots.begin(), roots.end(), std::greater<>());
    return std::max(0.0, roots[0] - roots[1] - roots[2] - roots[3]);
}

std::vector<double> ring_pair_spectrum(int sites, double hopping, Statistics statistics) {
    std::vector<double> single(sites);
    for (int k = 0; k < sites; ++k)
        single[k] = -2.0 * hopping * std::cos(2.0 * M_PI * k / sites);
    std::vector<double> pairs;
    for (int i = 0; i < sites; ++i) {
        int j0 = statistics == Statistics::Fermi ? i + 1 : i;
        for (int j = j0; j < sites; ++j) pairs.push_back(single[i] + single[j]);
    }
    std::sort(pairs.begin(), pairs.end());
    return pairs;
}

CMatrix induced_sector_unitary(const FockBasis& basis, const CMatrix& mode_unitary) {
    if (basis.particles() != 2)
        throw std::invalid_argument("induced action implemented for two particles");
    int n_modes = basis.modes();
    if (mode_unitary.rows() != n_modes || mode_unitary.cols() != n_modes)
        throw std::invalid_argument("mode unitary has the wrong dimension");

    FockBasis one = build_basis(basis.statistics(), n_modes, 1);
    std::vector<CMatrix> raise2(n_modes);
    std::vector<CVector> raise1(n_modes);
    for (int k = 0; k < n_modes; ++k) {
        raise2[k] = creation_op(basis, k);
        raise1[k] = creation_op(one, k).col(0);
    }

    CMatrix gamma(basis.dimension(), basis.dimension());
    for (int s = 0; s < basis.dimension(); ++s) {
        const auto& occ = basis.occupation(s);
        int mode_i = -1, mode_j = -1;
        for (int m = 0; m < n_modes; ++m) {
            for (int c = 0; c < occ[m]; ++c) {
                if (mode_i < 0) mode_i = m;
                else mode_j = m;
            }
        }
        double norm_factor = (mode_i == mode_j) ? 1.0 / std::sqrt(2.0) : 1.0;

        CVector transformed_one = CVector::Zero(one.dimension());
        for (int k = 0; k < n_modes; ++k)
            transformed_one += mode_unitary(k, mode_j) * raise1[k];
        CVector column = CVector::Zero(basis.dimension());
        for (int k = 0; k < n_modes; ++k)
            column += mode_unitary(k, mode_i) * (raise2[k] * transformed_one);
        gamma.col(s) = norm_factor * column;
    }
    return gamma;
}

CMatrix local_mode_unitary(const FockBasis& basis, const Bipartition& partition,
                           const Eigen::Matrix2cd& u_a, const Eigen::Matrix2cd& u_b) {
    partition.validate(basis);
    std::vector<int> a = partition.party_a;
    std::vector<int> b = partition.party_b;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    CMatrix u = CMatrix::Identity(basis.modes(), basis.modes());
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            u(a[i], a[j]) = u_a(i, j);
            u(b[i], b[j]) = u_b(i, j);
        }
    return induced_sector_unitary(basis, u);
}

DensityMatrix embed_register(const TwoQubitState& reg, const FockBasis& basis,
                             const Bipartition& partition) {
    RegisterMap map = register_map(basis, partition);
    CMatrix rho = CMatrix::Zero(basis.dimension(), basis.dimension());
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
            rho(map.fock_index[r], map.fock_index[c]) = map.sign[r] * map.sign[c] * reg(r, c);
    return DensityMatrix::from_matrix(rho);
}

namespace {

struct SuiteContext {
    FockBasis bose = build_basis(Statistics::Bose, 4, 2);
    FockBasis fermi = build_basis(Statistics::Fermi, 4, 2);
    Bipartition part_bose{{0, 1}, {2, 3}};
    Bipartition part_fermi{{0, 2}, {1, 3}};

    const FockBasis& basis(bool use_fermi) const { return use_fermi ? fermi : bose; }
    const Bipartition& partition(bool use_fermi) const {
        return use_fermi ? part_fermi : part_bose;
    }
};

// classical-quantum register state sum_i p_i P_i^A x rho_i^B with the P_i
// projectors onto a random A basis
TwoQubitState random_classical_quantum(RandomStream& stream) {
    CMatrix u = random_unitary(2, stream);
    double p = 0.1 + 0.8 * stream.uniform();
    TwoQubitState rho = TwoQubitState::Zero();
    for (int i = 0; i < 2; ++i) {
        Eigen::Vector2cd a = u.col(i);
        Eigen::Matrix2cd proj_a = a * a.adjoint();
        Eigen::Matrix2cd rho_b = random_density_matrix(2, 2, stream).matrix();
        double w = i == 0 ? p : 1.0 - p;
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c)
                rho.block<2, 2>(2 * r, 2 * c) += w * proj_a(r, c) * rho_b;
    }
    return rho;
}

}  // namespace

std::vector<CheckResult> property_suite(int n_states, std::uint64_t seed) {
    std::vector<CheckResult> results;
    SuiteContext ctx;
    DiscordSettings coarse{};                       // documented defaults
    DiscordSettings fine{64, 128, 8, 0.0};          // refinement pushed to convergence

    // (i) non-negativity and range of the sector-weighted measures
    {
        RandomStream stream(stream_seed(seed, 1, 0));
        double worst = 0.0;
        bool pass = true;
        for (int n = 0; n < n_states; ++n) {
            bool use_fermi = (n % 2) == 1;
            const FockBasis& basis = ctx.basis(use_fermi);
            int rank = 1 + static_cast<int>(stream.raw() % basis.dimension());
            DensityMatrix rho = random_density_matrix(basis.dimension(), rank, stream);
            double dp = discord_of_particles(rho, basis, ctx.partition(use_fermi),
                                             MeasuredParty::B, coarse);
            double ep = entanglement_of_particles(rho, basis, ctx.partition(use_fermi));
            if (dp < 0.0 || dp > 1.0 || ep < 0.0 || ep > 1.0) pass = false;
            worst = std::max({worst, -dp, dp - 1.0, -ep, ep - 1.0});
        }
        results.push_back({"(i) discord nonnegative, measures in [0,1]", pass,
                           format_worst(worst, 0.0)});
    }

    // (ii) asymmetry between measured parties on a classical-quantum witness
    {
        Eigen::Vector2cd zero(1.0, 0.0);
        Eigen::Vector2cd plus(1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0));
        TwoQubitState reg = TwoQubitState::Zero();
        reg.block<2, 2>(0, 0) = 0.5 * (zero * zero.adjoint());
        reg.block<2, 2>(2, 2) = 0.5 * (plus * plus.adjoint());
        DensityMatrix rho = embed_register(reg, ctx.bose, ctx.part_bose);
        double d_a = discord_of_particles(rho, ctx.bose, ctx.part_bose, MeasuredParty::A,
                                          coarse);
        double d_b = discord_of_particles(rho, ctx.bose, ctx.part_bose, MeasuredParty::B,
                                          coarse);
        bool pass = d_a <= 2e-3 && d_b > 0.05;
        std::ostringstream os;
        os << "D_A " << d_a << ", D_B " << d_b;
        results.push_back({"(ii) asymmetry under swap of measured party", pass, os.str()});
    }

    // (iii) invariance under particle-number-conserving local mode unitaries
    {
        RandomStream stream(stream_seed(seed, 3, 0));
        double worst_p = 0.0, worst_e = 0.0, worst_d = 0.0;
        for (int n = 0; n < n_states; ++n) {
            bool use_fermi = (n % 2) == 1;
            const FockBasis& basis = ctx.basis(use_fermi);
            const Bipartition& part = ctx.partition(use_fermi);
            int rank = 1 + static_cast<int>(stream.raw() % basis.dimension());
            DensityMatrix rho = random_density_matrix(basis.dimension(), rank, stream);
            CMatrix gamma = local_mode_unitary(basis, part, random_unitary(2, stream),
                                               random_unitary(2, stream));
            DensityMatrix rotated =
                DensityMatrix::from_matrix(gamma * rho.matrix() * gamma.adjoint());

            SectorDecomposition d0 = sector_decompose(rho, basis, part);
            SectorDecomposition d1 = sector_decompose(rotated, basis, part);
            for (size_t k = 0; k < d0.probability.size(); ++k)
                worst_p = std::max(worst_p, std::abs(d0.probability[k] - d1.probability[k]));
            worst_e = std::max(worst_e,
                               std::abs(entanglement_of_particles(rho, basis, part) -
                                        entanglement_of_particles(rotated, basis, part)));
            worst_d = std::max(worst_d,
                               std::abs(discord_of_particles(rho, basis, part,
                                                             MeasuredParty::B, fine) -
                                        discord_of_particles(rotated, basis, part,
                                                             MeasuredParty::B, fine)));
        }
        bool pass = worst_p <= 1e-9 && worst_e <= 1e-9 && worst_d <= 1e-9;
        std::ostringstream os;
        os << "P11 " << worst_p << ", E_P " << worst_e << ", D_P " << worst_d
           << " (tol 1e-9)";
        results.push_back({"(iii) invariance under party-local mode unitaries", pass,
                           os.str()});
    }

    // (v) pure states: discord equals the register entanglement entropy
    {
        RandomStream stream(stream_seed(seed, 5, 0));
        double worst_vn = 0.0, worst_d = 0.0;
        for (int n = 0; n < n_states; ++n) {
            bool use_fermi = (n % 2) == 1;
            const FockBasis& basis = ctx.basis(use_fermi);
            const Bipartition& part = ctx.partition(use_fermi);
            DensityMatrix rho = DensityMatrix::pure(random_pure_state(basis.dimension(), stream));
            SectorDecomposition dec = sector_decompose(rho, basis, part);
            double p11 = dec.probability[1];
            if (p11 < 1e-6 || !dec.sector[1]) continue;
            TwoQubitState reg = to_register(*dec.sector[1], basis, part);
            double ep = p11 * entanglement_of_formation(concurrence(reg));
            double ep_vn = p11 * von_neumann_entropy(reduce_register(reg, MeasuredParty::A));
            double dp = p11 * quantum_discord(reg, MeasuredParty::B, coarse);
            worst_vn = std::max(worst_vn, std::abs(ep - ep_vn));
            worst_d = std::max(worst_d, std::abs(ep_vn - dp));
        }
        bool pass = worst_vn <= 1e-9 && worst_d <= 5e-3;
        std::ostringstream os;
        os << "EoF vs entropy " << worst_vn << " (tol 1e-9), entropy vs discord "
           << worst_d << " (tol 5e-3)";
        results.push_back({"(v) pure-state discord equals entanglement entropy", pass,
                           os.str()});
    }

    // (vi) classical-quantum sector states have zero discord on the
    // classical side, also inside sector mixtures
    {
        RandomStream stream(stream_seed(seed, 6, 0));
        double worst = 0.0;
        for (int n = 0; n < n_states; ++n) {
            TwoQubitState cq = random_classical_quantum(stream);
            DensityMatrix inside = embed_register(cq, ctx.bose, ctx.part_bose);
            // blend with states from the 2+0 and 0+2 sectors
            SectorDecomposition dec =
                sector_decompose(random_density_matrix(ctx.bose.dimension(),
                                                       ctx.bose.dimension(), stream),
                                 ctx.bose, ctx.part_bose);
            double w = 0.3 + 0.7 * stream.uniform();
            CMatrix mix = w * inside.matrix();
            double rest = 1.0 - w;
            if (dec.sector[0] && dec.sector[2]) {
                mix += 0.5 * rest * dec.sector[0]->matrix() +
                       0.5 * rest * dec.sector[2]->matrix();
            } else {
                mix += rest * inside.matrix();
            }
            DensityMatrix rho = DensityMatrix::from_matrix(mix);
            worst = std::max(worst, general_discord_of_particles(
                                        rho, ctx.bose, ctx.part_bose, MeasuredParty::A,
                                        coarse));
        }
        bool pass = worst <= 2e-3;
        results.push_back({"(vi) classical-quantum states carry zero discord", pass,
                           format_worst(worst, 2e-3)});
    }

    // (vii) discord bounded by the measured party's reduced entropy
    {
        RandomStream stream(stream_seed(seed, 7, 0));
        double worst = -1.0;
        for (int n = 0; n < n_states; ++n) {
            bool use_fermi = (n % 2) == 1;
            const FockBasis& basis = ctx.basis(use_fermi);
            const Bipartition& part = ctx.partition(use_fermi);
            int rank = 1 + static_cast<int>(stream.raw() % basis.dimension());
            DensityMatrix rho = random_density_matrix(basis.dimension(), rank, stream);
            double dp = discord_of_particles(rho, basis, part, MeasuredParty::B, coarse);
            double bound = party_entropy(rho, basis, part, MeasuredParty::B);
            worst = std::max(worst, dp - bound);
        }
        bool pass = worst <= 1e-9;
        results.push_back({"(vii) discord bounded by party entropy", pass,
                           format_worst(worst, 1e-9)});
    }

    // two-route concurrence agreement
    {
        RandomStream stream(stream_seed(seed, 9, 0));
        double worst = 0.0;
        for (int n = 0; n < n_states; ++n) {
            int rank = 1 + static_cast<int>(stream.raw() % 4);
            TwoQubitState rho = random_two_qubit_state(rank, stream);
            worst = std::max(worst,
                             std::abs(concurrence(rho) - concurrence_sqrt_route(rho)));
        }
        bool pass = worst <= 1e-10;
        results.push_back({"concurrence product-spectrum vs sqrt routes", pass,
                           format_worst(worst, 1e-10)});
    }

    return results;
}

std::vector<CheckResult> oracle_checks(std::uint64_t seed) {
    std::vector<CheckResult> results;

    // two-particle ring spectrum against single-particle pair sums
    {
        HubbardParams params;
        params.model = LatticeModel::BoseRing;
        params.sites = 4;
        params.hopping = 1.0;
        params.interaction = 0.0;
        FockBasis basis = model_basis(params);
        std::vector<double> q(4, 1.0);
        CMatrix h = bose_hubbard(basis, params, q);
        Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
        std::vector<double> expected = ring_pair_spectrum(4, 1.0, Statistics::Bose);
        double worst = 0.0;
        for (int k = 0; k < basis.dimension(); ++k)
            worst = std::max(worst, std::abs(es.eigenvalues()(k) - expected[k]));
        results.push_back({"noninteracting ring spectrum vs pair sums", worst <= 1e-12,
                           format_worst(worst, 1e-12)});
    }

    // Werner family: exact concurrence and grid self-consistency
    {
        TwoQubitState bell = TwoQubitState::Zero();
        bell(0, 0) = bell(0, 3) = bell(3, 0) = bell(3, 3) = 0.5;
        double p = 0.75;
        TwoQubitState werner = p * bell + (1.0 - p) * 0.25 * TwoQubitState::Identity();
        double c = concurrence(werner);
        bool pass = std::abs(c - 0.625) <= 1e-12;
        double d_low = quantum_discord(werner, MeasuredParty::B, {32, 64, 0, 0.0});
        double d_high = quantum_discord(werner, MeasuredParty::B, {128, 256, 3, 0.0});
        pass = pass && std::abs(d_low - d_high) <= 1e-3;
        std::ostringstream os;
        os << "C " << c << ", discord grid gap " << std::abs(d_low - d_high);
        results.push_back({"Werner state concurrence and discord grids", pass, os.str()});
    }

    // switching-rate sampler against the analytic CDF (KS at the 1% level)
    for (int alpha : {1, 2}) {
        RandomStream stream(stream_seed(seed, 20 + alpha, 0));
        NoiseBand band{1.25e-4, 1.25e2};
        int n = 100000;
        std::vector<double> draws = sample_rates(alpha, band, n, stream);
        std::sort(draws.begin(), draws.end());
        double ks = 0.0;
        for (int i = 0; i < n; ++i) {
            double f = rate_cdf(alpha, band, draws[i]);
            ks = std::max(ks, std::max(std::abs(f - static_cast<double>(i) / n),
                                       std::abs(f - static_cast<double>(i + 1) / n)));
        }
        double critical = 1.628 / std::sqrt(static_cast<double>(n));
        std::ostringstream os;
        os << "KS " << ks << " (1% critical " << critical << ")";
        results.push_back({std::string("rate sampler KS test, alpha=") +
                               std::to_string(alpha),
                           ks < critical, os.str()});
    }

    // fluctuator autocorrelation exp(-2 gamma dt)
    {
        double gamma = 1.0;
        int n_traj = 10000;
        double worst = 0.0;
        for (double lag : {0.25, 0.5}) {
            double acc = 0.0;
            for (int r = 0; r < n_traj; ++r) {
                RandomStream stream(stream_seed(seed, 30, r));
                RtnFluctuator f(gamma, std::move(stream));
                double v0 = f.value_at(0.0);
                acc += v0 * f.value_at(lag);
            }
            worst = std::max(worst,
                             std::abs(acc / n_traj - std::exp(-2.0 * gamma * lag)));
        }
        bool pass = worst <= 4.0 / std::sqrt(static_cast<double>(n_traj));
        results.push_back({"fluctuator autocorrelation", pass,
                           format_worst(worst, 4.0 / std::sqrt(double(n_traj)))});
    }

    // mean switch count over a horizon is gamma * t
    {
        double gamma = 2.0, horizon = 50.0;
        int n_traj = 400;
        double mean = 0.0;
        for (int r = 0; r < n_traj; ++r) {
            RandomStream stream(stream_seed(seed, 31, r));
            RtnFluctuator f(gamma, std::move(stream));
            f.value_at(horizon);
            mean += static_cast<double>(f.switch_count());
        }
        mean /= n_traj;
        double tol = 3.0 * std::sqrt(gamma * horizon);
        bool pass = std::abs(mean - gamma * horizon) <= tol;
        std::ostringstream os;
        os << "mean " << mean << " vs " << gamma * horizon << " +/- " << tol;
        results.push_back({"fluctuator switch counting", pass, os.str()});
    }

    // renormalized ensemble variance 1/N_f at a fixed time
    {
        int nf = 20, n_real = 4000;
        double t_probe = 1.0;
        double sum = 0.0, sum2 = 0.0;
        for (int r = 0; r < n_real; ++r) {
            std::vector<RtnFluctuator> members;
            for (int j = 0; j < nf; ++j)
                members.emplace_back(0.5, RandomStream(stream_seed(seed, 32, r, j)));
            FluctuatorEnsemble ens(std::move(members));
            double q = ens.value_at(t_probe);
            sum += q;
            sum2 += q * q;
        }
        double var = sum2 / n_real - (sum / n_real) * (sum / n_real);
        bool pass = std::abs(var - 1.0 / nf) <= 5e-3;
        std::ostringstream os;
        os << "variance " << var << " vs " << 1.0 / nf;
        results.push_back({"ensemble variance 1/N_f", pass, os.str()});
    }

    // sector additivity of the generalized discord
    {
        SuiteContext ctx;
        TwoQubitState bell = TwoQubitState::Zero();
        bell(0, 0) = bell(0, 3) = bell(3, 0) = bell(3, 3) = 0.5;
        DensityMatrix inside = embed_register(bell, ctx.bose, ctx.part_bose);
        // all weight of the second component in the 2+0 sector
        CVector pair = CVector::Zero(ctx.bose.dimension());
        pair(ctx.bose.index_of(std::vector<int>{1, 1, 0, 0})) = 1.0;
        CMatrix mix = 0.5 * inside.matrix() + 0.5 * (pair * pair.adjoint());
        DensityMatrix rho = DensityMatrix::from_matrix(mix);
        double d = general_discord_of_particles(rho, ctx.bose, ctx.part_bose,
                                                MeasuredParty::B, {});
        bool pass = std::abs(d - 0.5) <= 2e-3;
        std::ostringstream os;
        os << "D " << d << " vs 0.5";
        results.push_back({"sector additivity of generalized discord", pass, os.str()});
    }

    return results;
}

}  // namespace qcorr
