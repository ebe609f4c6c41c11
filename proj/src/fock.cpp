#include "qcorr/fock.hpp"

#include <algorithm>
#include <stdexcept>

namespace qcorr {

namespace {

void enumerate(int mode, int modes, int remaining, int cap,
               std::vector<int>& current, std::vector<std::vector<int>>& out) {
    if (mode == modes) {
        if (remaining == 0) out.push_back(current);
        return;
    }
    int max_here = std::min(cap, remaining);
    for (int n = 0; n <= max_here; ++n) {
        current[mode] = n;
        enumerate(mode + 1, modes, remaining - n, cap, current, out);
    }
    current[mode] = 0;
}

long long binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

int FockBasis::index_of(std::span<const int> occupation) const {
    std::vector<int> key(occupation.begin(), occupation.end());
    auto it = std::lower_bound(states_.begin(), states_.end(), key);
    if (it == states_.end() || *it != key)
        throw std::invalid_argument("occupation vector not in basis");
    return static_cast<int>(it - states_.begin());
}

void FockBasis::set_mode_labels(std::vector<std::string> labels) {
    if (static_cast<int>(labels.size()) != modes_)
        throw std::invalid_argument("one label per mode required");
    labels_ = std::move(labels);
}

FockBasis build_basis(Statistics statistics, int modes, int particles) {
    if (modes < 1) throw std::invalid_argument("need at least one mode");
    if (particles < 0) throw std::invalid_argument("negative particle number");
    if (statistics == Statistics::Fermi && particles > modes)
        throw std::invalid_argument("exclusion principle: more fermions than modes");

    FockBasis basis;
    basis.statistics_ = statistics;
    basis.modes_ = modes;
    basis.particles_ = particles;

    int cap = (statistics == Statistics::Fermi) ? 1 : particles;
    std::vector<int> current(modes, 0);
    enumerate(0, modes, particles, cap, current, basis.states_);

    long long expected = (statistics == Statistics::Bose)
                             ? binomial(modes + particles - 1, particles)
                             : binomial(modes, particles);
    if (static_cast<long long>(basis.states_.size()) != expected)
        throw std::logic_error("basis enumeration does not match counting formula");

    basis.labels_.resize(modes);
    for (int m = 0; m < modes; ++m) basis.labels_[m] = "mode" + std::to_string(m + 1);
    return basis;
}

namespace {

// parity of the occupation preceding `mode`, used for fermionic signs
int parity_before(const std::vector<int>& occ, int mode) {
    int count = 0;
    for (int k = 0; k < mode; ++k) count += occ[k];
    return (count % 2 == 0) ? 1 : -1;
}

}  // namespace

CMatrix creation_op(const FockBasis& basis, int mode) {
    if (mode < 0 || mode >= basis.modes()) throw std::out_of_range("mode index");
    FockBasis source = build_basis(basis.statistics(), basis.modes(), basis.particles() - 1);
    CMatrix op = CMatrix::Zero(basis.dimension(), source.dimension());
    bool fermi = basis.statistics() == Statistics::Fermi;
    for (int s = 0; s < source.dimension(); ++s) {
        std::vector<int> occ = source.occupation(s);
        if (fermi && occ[mode] == 1) continue;  // (c^dag)^2 = 0
        double amp = fermi ? static_cast<double>(parity_before(occ, mode))
                           : std::sqrt(static_cast<double>(occ[mode] + 1));
        occ[mode] += 1;
        op(basis.index_of(occ), s) = amp;
    }
    return op;
}

CMatrix annihilation_op(const FockBasis& basis, int mode) {
    return creation_op(basis, mode).adjoint();
}

RMatrix number_op(const FockBasis& basis, int mode) {
    if (mode < 0 || mode >= basis.modes()) throw std::out_of_range("mode index");
    RMatrix op = RMatrix::Zero(basis.dimension(), basis.dimension());
    for (int s = 0; s < basis.dimension(); ++s)
        op(s, s) = static_cast<double>(basis.occupation(s)[mode]);
    return op;
}

RMatrix hop_op(const FockBasis& basis, int mode_i, int mode_j) {
    if (mode_i < 0 || mode_i >= basis.modes() || mode_j < 0 || mode_j >= basis.modes())
        throw std::out_of_range("mode index");
    if (mode_i == mode_j) return number_op(basis, mode_i);

    RMatrix op = RMatrix::Zero(basis.dimension(), basis.dimension());
    bool fermi = basis.statistics() == Statistics::Fermi;
    for (int s = 0; s < basis.dimension(); ++s) {
        std::vector<int> occ = basis.occupation(s);
        if (occ[mode_j] == 0) continue;
        if (fermi && occ[mode_i] == 1) continue;
        double amp;
        if (fermi) {
            amp = parity_before(occ, mode_j);
            occ[mode_j] -= 1;
            amp *= parity_before(occ, mode_i);
            occ[mode_i] += 1;
        } else {
            amp = std::sqrt(static_cast<double>(occ[mode_j]));
            occ[mode_j] -= 1;
            amp *= std::sqrt(static_cast<double>(occ[mode_i] + 1));
            occ[mode_i] += 1;
        }
        op(basis.index_of(occ), s) += amp;
    }
    return op;
}

RMatrix total_number_op(const FockBasis& basis) {
    RMatrix op = RMatrix::Zero(basis.dimension(), basis.dimension());
    for (int m = 0; m < basis.modes(); ++m) op += number_op(basis, m);
    return op;
}

}  // namespace qcorr
