#pragma once

// Two-qubit state and operator algebra.
//
// Basis order for two-qubit vectors and operators is |HH>, |HV>, |VH>, |VV>
// with H = |0> and V = |1>. Pauli indices follow sigma_1 = X, sigma_2 = Y,
// sigma_3 = Z, so the eigenbases of sigma_1, sigma_2, sigma_3 are {D, A},
// {R, L} and {H, V}.

#include <Eigen/Dense>

#include <complex>
#include <cstdint>

#include "lurq/errors.hpp"

namespace lurq {

using Complex = std::complex<double>;
using Ket2 = Eigen::Vector2cd;
using Ket4 = Eigen::Vector4cd;
using Operator2 = Eigen::Matrix2cd;
using Operator4 = Eigen::Matrix4cd;

// Default tolerance for exact algebra.
inline constexpr double kExactTol = 1e-10;
// Slack allowed on the smallest eigenvalue of a density matrix.
inline constexpr double kEigenvalueSlack = 1e-8;
// Normalization slack accepted for pure-state inputs.
inline constexpr double kNormTol = 1e-9;

class PauliIndex {
public:
    constexpr explicit PauliIndex(int index) : index_(index) {
        if (index < 0 || index > 3) {
            throw Error(ErrorCode::OutOfRange, "Pauli index must be in {0,1,2,3}");
        }
    }

    constexpr int value() const noexcept { return index_; }
    constexpr bool is_identity() const noexcept { return index_ == 0; }

    friend constexpr bool operator==(PauliIndex, PauliIndex) = default;

private:
    int index_;
};

struct RandomSeed {
    std::uint64_t value = 0;

    friend constexpr bool operator==(RandomSeed, RandomSeed) = default;
};

// A validated two-qubit state: Hermitian, unit trace, positive semidefinite.
// Instances are only produced by validate_density and the operations built
// on it, so every DensityMatrix in circulation satisfies the invariants.
class DensityMatrix {
public:
    const Operator4& matrix() const noexcept { return m_; }

    double purity() const;
    // Ascending order.
    Eigen::Vector4d eigenvalues() const;

    static DensityMatrix maximally_mixed();

private:
    explicit DensityMatrix(Operator4 m) : m_(std::move(m)) {}
    friend DensityMatrix validate_density(const Operator4& m, double tol);

    Operator4 m_;
};

bool is_hermitian(const Operator2& m, double tol = kExactTol);
bool is_hermitian(const Operator4& m, double tol = kExactTol);
bool is_unitary(const Operator2& m, double tol = kExactTol);

Operator2 pauli_operator(PauliIndex i);

Operator4 tensor_product(const Operator2& a, const Operator2& b);
Ket4 tensor_product(const Ket2& a, const Ket2& b);

// tr(rho m). Throws NonHermitianObservable when m is not Hermitian.
double expectation_value(const DensityMatrix& rho, const Operator4& m, double tol = kExactTol);

// Throws NotNormalized when | ||psi|| - 1 | exceeds tol.
DensityMatrix pure_to_density(const Ket4& psi, double tol = kNormTol);

// (uA x uB) rho (uA x uB)^dagger. Throws NonUnitary when either factor fails
// the unitarity check.
DensityMatrix apply_local_unitary(const DensityMatrix& rho, const Operator2& u_a,
                                  const Operator2& u_b, double tol = kExactTol);

// Accepts m when it is Hermitian and unit-trace within tol and its smallest
// eigenvalue is at least -max(tol, kEigenvalueSlack). The stored matrix is the
// Hermitian part of m.
DensityMatrix validate_density(const Operator4& m, double tol = kExactTol);

// Haar-random pure state.
Ket4 random_pure(RandomSeed seed);
// Hilbert-Schmidt random mixed state, G G^dagger / tr(G G^dagger).
DensityMatrix random_density(RandomSeed seed);
// Haar-random single-qubit unitary.
Operator2 random_unitary2(RandomSeed seed);

// Square root of a Hermitian PSD matrix. Eigenvalues at or below cutoff
// (including rounding-level negatives) are mapped to zero.
Operator4 psd_sqrt(const Operator4& m, double cutoff = 0.0);

// Uhlmann fidelity (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

namespace states {

Ket4 hh();
Ket4 hv();
Ket4 vh();
Ket4 vv();
// (|HV> - |VH>) / sqrt(2)
Ket4 singlet();
// (|HH> + |VV>) / sqrt(2)
Ket4 phi_plus();

}  // namespace states

}  // namespace lurq
