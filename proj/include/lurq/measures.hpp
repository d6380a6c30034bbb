#pragma once

// Entanglement quantities evaluated exactly on a known two-qubit state:
// Pauli covariances and the G measure, concurrence, the local uncertainty
// sum, and the nonlocal K measure.

#include <array>
#include <optional>
#include <vector>

#include "lurq/qcore.hpp"

namespace lurq {

// c(i-1, j-1) = C(sigma_i, sigma_j) for i, j in {1, 2, 3}.
using CovarianceMatrix = Eigen::Matrix3d;

struct GResult {
    double g = 0.0;
    CovarianceMatrix covariance = CovarianceMatrix::Zero();
    std::optional<double> delta_g;
};

// Amplitudes of the target state a|00> + b|11>. Both are non-negative and
// a^2 + b^2 = 1. The conventional ordering a >= b is reported by is_ordered()
// but not required, so that families like cos(2t)|HH> + sin(2t)|VV> can be
// targeted over their whole range.
class SchmidtCoeffs {
public:
    SchmidtCoeffs(double a, double b);

    // (cos 2t, sin 2t) for t in [0, pi/4].
    static SchmidtCoeffs from_pump_angle(double theta_rad);

    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }
    bool is_ordered() const noexcept { return a_ >= b_; }

private:
    double a_;
    double b_;
};

struct KObservables {
    // psi_1 = a|00> + b|11>, psi_2 = a|01> + b|10>,
    // psi_3 = -a|10> + b|01>, psi_4 = b|00> - a|11>.
    std::array<Ket4, 4> states;
    std::array<Operator4, 4> projectors;
};

struct KResult {
    double k = 0.0;
    std::array<double, 4> expectations{};
    double bound = 0.0;
    std::optional<double> delta_k;
};

class LurSpec {
public:
    LurSpec(std::vector<Operator2> a_observables, std::vector<Operator2> b_observables, double bound);

    // sigma_1, sigma_2, sigma_3 on both sides with bound kQubitPauliLurBound.
    static LurSpec pauli_triple();

    const std::vector<Operator2>& a_observables() const noexcept { return a_; }
    const std::vector<Operator2>& b_observables() const noexcept { return b_; }
    double bound() const noexcept { return bound_; }

private:
    std::vector<Operator2> a_;
    std::vector<Operator2> b_;
    double bound_;
};

// U_A + U_B for the three Pauli observables on each qubit: 2 + 2.
inline constexpr double kQubitPauliLurBound = 4.0;

struct LurResult {
    double sum = 0.0;
    bool violated = false;
};

struct GBounds {
    double lower = 0.0;
    double g = 0.0;
    double upper = 0.0;
};

// <sigma_i x sigma_j> - <sigma_i x I><I x sigma_j>; i, j must be non-identity.
double covariance(const DensityMatrix& rho, PauliIndex i, PauliIndex j);
CovarianceMatrix covariance_matrix(const DensityMatrix& rho);
GResult g_measure(const DensityMatrix& rho);

// Wootters concurrence, clamped to [0, 1].
double concurrence(const DensityMatrix& rho);

// G = c^2 (c^2 + 2) and its inverse c = sqrt(sqrt(G + 1) - 1).
double g_from_concurrence(double c);
double concurrence_from_g(double g);

// (c^2(c^2+2), G, 2c^2+1). The ordering is not asserted here.
GBounds mixed_state_bounds(const DensityMatrix& rho);

LurResult lur_sum(const DensityMatrix& rho, const LurSpec& spec);

KObservables k_observables(const SchmidtCoeffs& s);
KResult k_measure(const DensityMatrix& rho, const SchmidtCoeffs& s);
double k_separable_bound(const SchmidtCoeffs& s);
// Assembles K from the four projector expectations.
KResult k_from_expectations(const std::array<double, 4>& expectations, const SchmidtCoeffs& s);

}  // namespace lurq
