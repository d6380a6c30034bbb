#include "lurq/measures.hpp"

#include <algorithm>
#include <cmath>

namespace lurq {

namespace {

constexpr double kSchmidtTol = 1e-12;
// Eigenvalues of a unit-trace state below this are rounding noise. Concurrence
// responds to an eigenvalue e like sqrt(e), so they must be removed exactly.
constexpr double kRankCutoff = 1e-13;

const Operator2& pauli(int i) {
    static const std::array<Operator2, 4> table = {
        pauli_operator(PauliIndex(0)), pauli_operator(PauliIndex(1)),
        pauli_operator(PauliIndex(2)), pauli_operator(PauliIndex(3))};
    return table[static_cast<std::size_t>(i)];
}

const Operator4& spin_flip() {
    static const Operator4 yy = tensor_product(pauli(2), pauli(2));
    return yy;
}

}  // namespace

SchmidtCoeffs::SchmidtCoeffs(double a, double b) : a_(a), b_(b) {
    if (!(a >= 0.0) || !(b >= 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "Schmidt coefficients must be non-negative");
    }
    if (std::abs(a * a + b * b - 1.0) > kSchmidtTol) {
        throw Error(ErrorCode::InvalidArgument, "Schmidt coefficients must satisfy a^2 + b^2 = 1");
    }
}

SchmidtCoeffs SchmidtCoeffs::from_pump_angle(double theta_rad) {
    const double a = std::cos(2.0 * theta_rad);
    const double b = std::sin(2.0 * theta_rad);
    // Clamp the endpoint rounding of cos(pi/2).
    return SchmidtCoeffs(std::max(a, 0.0), std::max(b, 0.0));
}

LurSpec::LurSpec(std::vector<Operator2> a_observables, std::vector<Operator2> b_observables, double bound)
    : a_(std::move(a_observables)), b_(std::move(b_observables)), bound_(bound) {
    if (a_.empty() || a_.size() != b_.size()) {
        throw Error(ErrorCode::InvalidArgument, "LUR observable lists must be non-empty and of equal length");
    }
}

LurSpec LurSpec::pauli_triple() {
    std::vector<Operator2> obs = {pauli(1), pauli(2), pauli(3)};
    return LurSpec(obs, obs, kQubitPauliLurBound);
}

double covariance(const DensityMatrix& rho, PauliIndex i, PauliIndex j) {
    if (i.is_identity() || j.is_identity()) {
        throw Error(ErrorCode::IdentityIndexNotAllowed, "covariance needs Pauli indices in {1,2,3}");
    }
    const Operator2& si = pauli(i.value());
    const Operator2& sj = pauli(j.value());
    const Operator2& id = pauli(0);
    const double joint = expectation_value(rho, tensor_product(si, sj));
    const double left = expectation_value(rho, tensor_product(si, id));
    const double right = expectation_value(rho, tensor_product(id, sj));
    return joint - left * right;
}

CovarianceMatrix covariance_matrix(const DensityMatrix& rho) {
    CovarianceMatrix c;
    for (int i = 1; i <= 3; ++i) {
        for (int j = 1; j <= 3; ++j) {
            c(i - 1, j - 1) = covariance(rho, PauliIndex(i), PauliIndex(j));
        }
    }
    return c;
}

GResult g_measure(const DensityMatrix& rho) {
    GResult out;
    out.covariance = covariance_matrix(rho);
    out.g = out.covariance.squaredNorm();
    return out;
}

double concurrence(const DensityMatrix& rho) {
    // The square roots of the eigenvalues of rho * Y rho^* Y are the singular
    // values of sqrt(rho) Y sqrt(rho)^*. The eigenvalue problem is defective
    // on product states; the SVD is not.
    const Operator4 root = psd_sqrt(rho.matrix(), kRankCutoff);
    const Operator4 a = root * spin_flip() * root.conjugate();
    Eigen::JacobiSVD<Operator4> svd(a);
    const Eigen::Vector4d s = svd.singularValues();  // descending
    const double c = s(0) - s(1) - s(2) - s(3);
    return std::clamp(c, 0.0, 1.0);
}

double g_from_concurrence(double c) {
    if (!(c >= 0.0 && c <= 1.0)) {
        throw Error(ErrorCode::OutOfRange, "concurrence must lie in [0, 1]");
    }
    const double c2 = c * c;
    return c2 * (c2 + 2.0);
}

double concurrence_from_g(double g) {
    if (!(g >= 0.0 && g <= 3.0)) {
        throw Error(ErrorCode::OutOfRange, "G must lie in [0, 3]");
    }
    // sqrt(g + 1) - 1 written to avoid cancellation for small g.
    const double inner = g / (std::sqrt(g + 1.0) + 1.0);
    return std::sqrt(inner);
}

GBounds mixed_state_bounds(const DensityMatrix& rho) {
    const double c = concurrence(rho);
    const double c2 = c * c;
    return {c2 * (c2 + 2.0), g_measure(rho).g, 2.0 * c2 + 1.0};
}

LurResult lur_sum(const DensityMatrix& rho, const LurSpec& spec) {
    const Operator2& id = pauli(0);
    double sum = 0.0;
    for (std::size_t k = 0; k < spec.a_observables().size(); ++k) {
        const Operator4 total = tensor_product(spec.a_observables()[k], id) +
                                tensor_product(id, spec.b_observables()[k]);
        const double mean = expectation_value(rho, total);
        const double second = expectation_value(rho, total * total);
        sum += second - mean * mean;
    }
    return {sum, sum < spec.bound() - kExactTol};
}

KObservables k_observables(const SchmidtCoeffs& s) {
    const double a = s.a();
    const double b = s.b();
    KObservables out;
    out.states[0] = a * states::hh() + b * states::vv();
    out.states[1] = a * states::hv() + b * states::vh();
    out.states[2] = -a * states::vh() + b * states::hv();
    out.states[3] = b * states::hh() - a * states::vv();
    for (std::size_t k = 0; k < 4; ++k) {
        out.projectors[k] = out.states[k] * out.states[k].adjoint();
    }
    return out;
}

double k_separable_bound(const SchmidtCoeffs& s) { return 2.0 * s.a() * s.a() * s.b() * s.b(); }

KResult k_from_expectations(const std::array<double, 4>& expectations, const SchmidtCoeffs& s) {
    KResult out;
    out.expectations = expectations;
    // Projectors satisfy M^2 = M, so the variance is <M> - <M>^2.
    for (double m : expectations) {
        out.k += m - m * m;
    }
    out.bound = k_separable_bound(s);
    return out;
}

KResult k_measure(const DensityMatrix& rho, const SchmidtCoeffs& s) {
    const KObservables obs = k_observables(s);
    std::array<double, 4> expectations{};
    for (std::size_t k = 0; k < 4; ++k) {
        expectations[k] = expectation_value(rho, obs.projectors[k]);
    }
    return k_from_expectations(expectations, s);
}

}  // namespace lurq
