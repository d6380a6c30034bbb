#pragma once

// Linear-inversion state tomography from the 36-setting count table, with
// the eigenvalues of the raw estimate projected onto the probability simplex
// to restore a physical state.

#include "lurq/counts.hpp"

namespace lurq {

// t(i, j) = <sigma_i x sigma_j>, i, j in {0..3}; t(0, 0) = 1.
class PauliVector {
public:
    // Throws InvalidArgument unless t(0,0) == 1 and every entry lies in
    // [-1, 1] up to 1e-9.
    explicit PauliVector(const Eigen::Matrix4d& t);

    static PauliVector identity_only();

    double operator()(int i, int j) const { return t_(i, j); }
    const Eigen::Matrix4d& coefficients() const noexcept { return t_; }

private:
    Eigen::Matrix4d t_;
};

PauliVector pauli_vector_from_counts(const CountsTable& table);
// The Pauli vector of a known state.
PauliVector pauli_vector_of(const DensityMatrix& rho);

// rho_raw = 1/4 sum_ij t(i,j) sigma_i x sigma_j. Hermitian with unit trace,
// possibly not positive.
Operator4 linear_inversion(const PauliVector& t);

// Euclidean projection of v onto {x >= 0, sum x = 1}.
Eigen::Vector4d project_to_simplex(const Eigen::Vector4d& v);

// Hermitizes, then replaces the spectrum by its simplex projection.
DensityMatrix project_to_physical(const Operator4& rho_raw);

DensityMatrix reconstruct_state(const CountsTable& table);
double tomo_concurrence(const CountsTable& table);

}  // namespace lurq
