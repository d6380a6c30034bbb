#include "lurq/tomography.hpp"

#include <algorithm>
#include <functional>

namespace lurq {

namespace {
constexpr double kPauliSlack = 1e-9;
}

PauliVector::PauliVector(const Eigen::Matrix4d& t) : t_(t) {
    if (t(0, 0) != 1.0) {
        throw Error(ErrorCode::InvalidArgument, "Pauli vector must have t(0,0) = 1");
    }
    if (!t.allFinite() || t.cwiseAbs().maxCoeff() > 1.0 + kPauliSlack) {
        throw Error(ErrorCode::InvalidArgument, "Pauli vector entries must lie in [-1, 1]");
    }
}

PauliVector PauliVector::identity_only() {
    Eigen::Matrix4d t = Eigen::Matrix4d::Zero();
    t(0, 0) = 1.0;
    return PauliVector(t);
}

PauliVector pauli_vector_from_counts(const CountsTable& table) {
    Eigen::Matrix4d t = Eigen::Matrix4d::Zero();
    t(0, 0) = 1.0;
    for (int i = 1; i <= 3; ++i) {
        t(i, 0) = marginal_expectation(table, Side::A, PauliIndex(i)).value;
        t(0, i) = marginal_expectation(table, Side::B, PauliIndex(i)).value;
        for (int j = 1; j <= 3; ++j) {
            t(i, j) = joint_expectation(table, PauliIndex(i), PauliIndex(j)).value;
        }
    }
    return PauliVector(t);
}

PauliVector pauli_vector_of(const DensityMatrix& rho) {
    Eigen::Matrix4d t;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            t(i, j) = expectation_value(rho, tensor_product(pauli_operator(PauliIndex(i)), pauli_operator(PauliIndex(j))));
        }
    }
    t(0, 0) = 1.0;
    return PauliVector(t);
}

Operator4 linear_inversion(const PauliVector& t) {
    Operator4 rho = Operator4::Zero();
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            rho += t(i, j) * tensor_product(pauli_operator(PauliIndex(i)), pauli_operator(PauliIndex(j)));
        }
    }
    return 0.25 * rho;
}

Eigen::Vector4d project_to_simplex(const Eigen::Vector4d& v) {
    // Sort-based algorithm: find the largest k with u_k > (sum_{i<=k} u_i - 1)/k
    // over the descending sort u, then shift and clip.
    std::array<double, 4> u = {v(0), v(1), v(2), v(3)};
    std::sort(u.begin(), u.end(), std::greater<>());
    double cumulative = 0.0;
    double shift = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
        cumulative += u[k];
        const double candidate = (cumulative - 1.0) / static_cast<double>(k + 1);
        if (u[k] - candidate > 0.0) {
            shift = candidate;
        }
    }
    return (v.array() - shift).cwiseMax(0.0).matrix();
}

DensityMatrix project_to_physical(const Operator4& rho_raw) {
    const Operator4 hermitian = 0.5 * (rho_raw + rho_raw.adjoint());
    Eigen::SelfAdjointEigenSolver<Operator4> es(hermitian);
    const Eigen::Vector4d weights = project_to_simplex(es.eigenvalues());
    const Operator4 rho = es.eigenvectors() * weights.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
    return validate_density(rho, kExactTol);
}

DensityMatrix reconstruct_state(const CountsTable& table) {
    return project_to_physical(linear_inversion(pauli_vector_from_counts(table)));
}

double tomo_concurrence(const CountsTable& table) { return concurrence(reconstruct_state(table)); }

}  // namespace lurq
