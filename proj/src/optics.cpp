#include "lurq/optics.hpp"

#include <cmath>

namespace lurq {

char to_char(BasisLabel x) {
    switch (x) {
        case BasisLabel::H: return 'H';
        case BasisLabel::V: return 'V';
        case BasisLabel::D: return 'D';
        case BasisLabel::A: return 'A';
        case BasisLabel::R: return 'R';
        case BasisLabel::L: return 'L';
    }
    return '?';
}

std::optional<BasisLabel> parse_basis_label(std::string_view text) {
    if (text.size() != 1) {
        return std::nullopt;
    }
    switch (text[0]) {
        case 'H': return BasisLabel::H;
        case 'V': return BasisLabel::V;
        case 'D':
        case '+': return BasisLabel::D;
        case 'A':
        case '-': return BasisLabel::A;
        case 'R': return BasisLabel::R;
        case 'L': return BasisLabel::L;
        default: return std::nullopt;
    }
}

Ket2 basis_ket(BasisLabel x) {
    const double s = 1.0 / std::sqrt(2.0);
    const Complex i(0.0, 1.0);
    Ket2 v;
    switch (x) {
        case BasisLabel::H: v << 1.0, 0.0; break;
        case BasisLabel::V: v << 0.0, 1.0; break;
        case BasisLabel::D: v << s, s; break;
        case BasisLabel::A: v << s, -s; break;
        case BasisLabel::R: v << s, s * i; break;
        case BasisLabel::L: v << s, -s * i; break;
    }
    return v;
}

Operator2 basis_projector(BasisLabel x) {
    const Ket2 v = basis_ket(x);
    return v * v.adjoint();
}

Operator4 joint_projector(BasisLabel a, BasisLabel b) {
    return tensor_product(basis_projector(a), basis_projector(b));
}

PauliIndex analyzer_axis(BasisLabel x) {
    switch (x) {
        case BasisLabel::D:
        case BasisLabel::A: return PauliIndex(1);
        case BasisLabel::R:
        case BasisLabel::L: return PauliIndex(2);
        default: return PauliIndex(3);
    }
}

int eigenvalue_sign(BasisLabel x) {
    switch (x) {
        case BasisLabel::H:
        case BasisLabel::D:
        case BasisLabel::R: return 1;
        default: return -1;
    }
}

std::pair<BasisLabel, BasisLabel> eigenbasis(PauliIndex i) {
    switch (i.value()) {
        case 1: return {BasisLabel::D, BasisLabel::A};
        case 2: return {BasisLabel::R, BasisLabel::L};
        case 3: return {BasisLabel::H, BasisLabel::V};
        default: throw Error(ErrorCode::IdentityIndexNotAllowed, "identity has no analyzer eigenbasis");
    }
}

Operator2 waveplate_unitary(const WaveplateSpec& w) {
    const double t = w.angle_rad;
    Operator2 m;
    if (w.kind == WaveplateKind::HWP) {
        const double c = std::cos(2.0 * t);
        const double s = std::sin(2.0 * t);
        m << c, s, s, -c;
    } else {
        const Complex i(0.0, 1.0);
        const double c = std::cos(t);
        const double s = std::sin(t);
        const Complex off = (1.0 - i) * s * c;
        m << c * c + i * s * s, off, off, s * s + i * c * c;
    }
    return m;
}

ChannelSpec::ChannelSpec(DampingBasis basis, double p) : basis_(basis), p_(p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw Error(ErrorCode::OutOfRange, "damping probability must lie in [0, 1]");
    }
}

DensityMatrix phase_damping(const DensityMatrix& rho, const ChannelSpec& chan) {
    const PauliIndex axis(chan.basis() == DampingBasis::X ? 1 : 3);
    const std::array<Operator2, 2> local = {
        std::sqrt(1.0 - chan.p()) * pauli_operator(PauliIndex(0)),
        std::sqrt(chan.p()) * pauli_operator(axis)};
    Operator4 out = Operator4::Zero();
    for (const Operator2& ka : local) {
        for (const Operator2& kb : local) {
            const Operator4 k = tensor_product(ka, kb);
            out += k * rho.matrix() * k.adjoint();
        }
    }
    return validate_density(out, kExactTol);
}

Ket4 prepare_parallel(double theta_rad) {
    return std::cos(2.0 * theta_rad) * states::hh() + std::sin(2.0 * theta_rad) * states::vv();
}

Ket4 prepare_antiparallel(double theta_rad) {
    return std::cos(2.0 * theta_rad) * states::hv() - std::sin(2.0 * theta_rad) * states::vh();
}

}  // namespace lurq
