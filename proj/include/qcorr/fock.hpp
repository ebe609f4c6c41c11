#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qcorr {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;

enum class Statistics { Bose, Fermi };

// Occupation-number basis for N identical particles in L modes.
// States are enumerated in lexicographic order on the occupation vector,
// which makes the enumeration deterministic and stable across runs.
class FockBasis {
public:
    Statistics statistics() const { return statistics_; }
    int modes() const { return modes_; }
    int particles() const { return particles_; }
    int dimension() const { return static_cast<int>(states_.size()); }

    const std::vector<int>& occupation(int index) const { return states_[index]; }
    const std::vector<std::vector<int>>& states() const { return states_; }

    // index -> occupation -> index round-trips to the identity
    int index_of(std::span<const int> occupation) const;

    const std::vector<std::string>& mode_labels() const { return labels_; }
    void set_mode_labels(std::vector<std::string> labels);

private:
    friend FockBasis build_basis(Statistics, int, int);

    Statistics statistics_ = Statistics::Bose;
    int modes_ = 0;
    int particles_ = 0;
    std::vector<std::vector<int>> states_;
    std::vector<std::string> labels_;
};

// Enumerate the basis. Throws std::invalid_argument for modes < 1,
// particles < 0, or a fermionic request with particles > modes.
FockBasis build_basis(Statistics statistics, int modes, int particles);

// Creation operator for `mode`, mapping the (N-1)-particle basis into the
// N-particle `basis` (dim(N) x dim(N-1)). Bosonic elements carry sqrt(n+1);
// fermionic elements carry the parity of the occupied modes preceding `mode`.
CMatrix creation_op(const FockBasis& basis, int mode);

// Adjoint map, N -> N-1 particles (dim(N-1) x dim(N)).
CMatrix annihilation_op(const FockBasis& basis, int mode);

// Diagonal number operator n_mode within the fixed-N sector.
RMatrix number_op(const FockBasis& basis, int mode);

// Sector-preserving bilinear b_i^dag b_j (c_i^dag c_j), built directly in the
// fixed-N basis. For i == j this reduces to number_op.
RMatrix hop_op(const FockBasis& basis, int mode_i, int mode_j);

// Sum of all number operators; acts as N * identity on the fixed-N sector.
RMatrix total_number_op(const FockBasis& basis);

}  // namespace qcorr
