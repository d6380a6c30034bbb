#include "lurq/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace lurq {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::NonHermitianObservable: return "NonHermitianObservable";
        case ErrorCode::NonUnitary: return "NonUnitary";
        case ErrorCode::NotNormalized: return "NotNormalized";
        case ErrorCode::NotHermitian: return "NotHermitian";
        case ErrorCode::BadTrace: return "BadTrace";
        case ErrorCode::NegativeEigenvalue: return "NegativeEigenvalue";
        case ErrorCode::IdentityIndexNotAllowed: return "IdentityIndexNotAllowed";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::UnknownLabel: return "UnknownLabel";
        case ErrorCode::DuplicateSetting: return "DuplicateSetting";
        case ErrorCode::MissingSetting: return "MissingSetting";
    }
    return "Unknown";
}

namespace {

template <typename Matrix>
double hermitian_defect(const Matrix& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

std::string describe(double value) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << value;
    return os.str();
}

Eigen::Matrix4cd ginibre4(std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::Matrix4cd g;
    for (int c = 0; c < 4; ++c) {
        for (int r = 0; r < 4; ++r) {
            const double re = normal(rng);
            const double im = normal(rng);
            g(r, c) = Complex(re, im);
        }
    }
    return g;
}

}  // namespace

double DensityMatrix::purity() const { return (m_ * m_).trace().real(); }

Eigen::Vector4d DensityMatrix::eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<Operator4> es(m_, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

DensityMatrix DensityMatrix::maximally_mixed() { return DensityMatrix(Operator4::Identity() / 4.0); }

bool is_hermitian(const Operator2& m, double tol) { return hermitian_defect(m) <= tol; }
bool is_hermitian(const Operator4& m, double tol) { return hermitian_defect(m) <= tol; }

bool is_unitary(const Operator2& m, double tol) {
    return (m.adjoint() * m - Operator2::Identity()).cwiseAbs().maxCoeff() <= tol;
}

Operator2 pauli_operator(PauliIndex i) {
    const Complex I(0.0, 1.0);
    Operator2 m;
    switch (i.value()) {
        case 0: m << 1.0, 0.0, 0.0, 1.0; break;
        case 1: m << 0.0, 1.0, 1.0, 0.0; break;
        case 2: m << 0.0, -I, I, 0.0; break;
        default: m << 1.0, 0.0, 0.0, -1.0; break;
    }
    return m;
}

Operator4 tensor_product(const Operator2& a, const Operator2& b) {
    Operator4 out;
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
            out.block<2, 2>(2 * r, 2 * c) = a(r, c) * b;
        }
    }
    return out;
}

Ket4 tensor_product(const Ket2& a, const Ket2& b) {
    Ket4 out;
    out << a(0) * b(0), a(0) * b(1), a(1) * b(0), a(1) * b(1);
    return out;
}

double expectation_value(const DensityMatrix& rho, const Operator4& m, double tol) {
    const double defect = hermitian_defect(m);
    if (defect > tol) {
        throw Error(ErrorCode::NonHermitianObservable,
                    "observable deviates from its adjoint by " + describe(defect));
    }
    const Complex value = (rho.matrix() * m).trace();
    // Both factors Hermitian, so the imaginary part is rounding noise.
    if (std::abs(value.imag()) >= std::max(tol, kExactTol) * std::max(1.0, m.cwiseAbs().maxCoeff())) {
        throw Error(ErrorCode::NonHermitianObservable,
                    "expectation has imaginary part " + describe(value.imag()));
    }
    return value.real();
}

DensityMatrix pure_to_density(const Ket4& psi, double tol) {
    const double norm = psi.norm();
    if (std::abs(norm - 1.0) > tol) {
        throw Error(ErrorCode::NotNormalized, "state norm is " + describe(norm));
    }
    return validate_density(psi * psi.adjoint(), kExactTol);
}

DensityMatrix apply_local_unitary(const DensityMatrix& rho, const Operator2& u_a,
                                  const Operator2& u_b, double tol) {
    if (!is_unitary(u_a, tol)) {
        throw Error(ErrorCode::NonUnitary, "arm A operator is not unitary");
    }
    if (!is_unitary(u_b, tol)) {
        throw Error(ErrorCode::NonUnitary, "arm B operator is not unitary");
    }
    const Operator4 u = tensor_product(u_a, u_b);
    return validate_density(u * rho.matrix() * u.adjoint(), kExactTol);
}

DensityMatrix validate_density(const Operator4& m, double tol) {
    if (!(tol > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
    }
    if (!m.allFinite()) {
        throw Error(ErrorCode::NotHermitian, "matrix has non-finite entries");
    }
    const double defect = hermitian_defect(m);
    if (defect > tol) {
        throw Error(ErrorCode::NotHermitian, "max |M - M^dagger| entry is " + describe(defect));
    }
    const Operator4 hermitian = 0.5 * (m + m.adjoint());
    const double trace = hermitian.trace().real();
    if (std::abs(trace - 1.0) > tol) {
        throw Error(ErrorCode::BadTrace, "trace is " + describe(trace));
    }
    Eigen::SelfAdjointEigenSolver<Operator4> es(hermitian, Eigen::EigenvaluesOnly);
    const double smallest = es.eigenvalues()(0);
    if (smallest < -std::max(tol, kEigenvalueSlack)) {
        throw Error(ErrorCode::NegativeEigenvalue, "smallest eigenvalue is " + describe(smallest));
    }
    return DensityMatrix(hermitian);
}

Ket4 random_pure(RandomSeed seed) {
    std::mt19937_64 rng(seed.value);
    std::normal_distribution<double> normal(0.0, 1.0);
    Ket4 psi;
    for (int k = 0; k < 4; ++k) {
        const double re = normal(rng);
        const double im = normal(rng);
        psi(k) = Complex(re, im);
    }
    return psi / psi.norm();
}

DensityMatrix random_density(RandomSeed seed) {
    std::mt19937_64 rng(seed.value);
    const Operator4 g = ginibre4(rng);
    const Operator4 w = g * g.adjoint();
    return validate_density(w / w.trace().real(), kExactTol);
}

Operator2 random_unitary2(RandomSeed seed) {
    std::mt19937_64 rng(seed.value);
    std::normal_distribution<double> normal(0.0, 1.0);
    Operator2 z;
    for (int c = 0; c < 2; ++c) {
        for (int r = 0; r < 2; ++r) {
            const double re = normal(rng);
            const double im = normal(rng);
            z(r, c) = Complex(re, im);
        }
    }
    // QR with the phases of R's diagonal folded back in gives Haar measure.
    Eigen::HouseholderQR<Operator2> qr(z);
    const Operator2 q = qr.householderQ();
    const Operator2 r = qr.matrixQR().triangularView<Eigen::Upper>();
    Operator2 phases = Operator2::Zero();
    for (int k = 0; k < 2; ++k) {
        phases(k, k) = r(k, k) / std::abs(r(k, k));
    }
    return q * phases;
}

Operator4 psd_sqrt(const Operator4& m, double cutoff) {
    Eigen::SelfAdjointEigenSolver<Operator4> es(m);
    const Eigen::Vector4d roots = es.eigenvalues().unaryExpr([cutoff](double v) {
        return v > cutoff ? std::sqrt(v) : 0.0;
    });
    return es.eigenvectors() * roots.asDiagonal() * es.eigenvectors().adjoint();
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
    const Operator4 root = psd_sqrt(rho.matrix());
    const Operator4 inner = root * sigma.matrix() * root;
    Eigen::SelfAdjointEigenSolver<Operator4> es(0.5 * (inner + inner.adjoint()), Eigen::EigenvaluesOnly);
    const double t = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
    return t * t;
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
    Eigen::SelfAdjointEigenSolver<Operator4> es(rho.matrix() - sigma.matrix(), Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

namespace states {

namespace {
Ket4 basis(int k) {
    Ket4 v = Ket4::Zero();
    v(k) = 1.0;
    return v;
}
}  // namespace

Ket4 hh() { return basis(0); }
Ket4 hv() { return basis(1); }
Ket4 vh() { return basis(2); }
Ket4 vv() { return basis(3); }
Ket4 singlet() { return (hv() - vh()) / std::sqrt(2.0); }
Ket4 phi_plus() { return (hh() + vv()) / std::sqrt(2.0); }

}  // namespace states

}  // namespace lurq
