#pragma once

// Polarization optics for the photon-pair source: pump-angle state families,
// Jones matrices for waveplates, phase-damping channels and analyzer
// projectors.

#include <array>
#include <numbers>
#include <optional>
#include <string_view>
#include <utility>

#include "lurq/qcore.hpp"

namespace lurq {

// H/V are the sigma_3 eigenstates, D/A (also written +/-) the sigma_1
// eigenstates and R/L the sigma_2 eigenstates. The first of each pair has
// eigenvalue +1.
enum class BasisLabel { H, V, D, A, R, L };

inline constexpr std::array<BasisLabel, 6> kAllLabels = {
    BasisLabel::H, BasisLabel::V, BasisLabel::D, BasisLabel::A, BasisLabel::R, BasisLabel::L};

char to_char(BasisLabel x);
// Accepts H, V, D, A, R, L and the synonyms "+" (D) and "-" (A).
std::optional<BasisLabel> parse_basis_label(std::string_view text);

Ket2 basis_ket(BasisLabel x);
Operator2 basis_projector(BasisLabel x);
Operator4 joint_projector(BasisLabel a, BasisLabel b);

// The Pauli operator whose eigenbasis contains x.
PauliIndex analyzer_axis(BasisLabel x);
// +1 or -1: eigenvalue of analyzer_axis(x) on x.
int eigenvalue_sign(BasisLabel x);
// (+1 eigenstate, -1 eigenstate) of sigma_i, i in {1,2,3}.
std::pair<BasisLabel, BasisLabel> eigenbasis(PauliIndex i);

enum class WaveplateKind { HWP, QWP };

struct WaveplateSpec {
    WaveplateKind kind = WaveplateKind::HWP;
    // Optic-axis angle measured from the vertical.
    double angle_rad = 0.0;
};

// HWP(t) = [[cos 2t, sin 2t], [sin 2t, -cos 2t]]
// QWP(t) = [[cos^2 t + i sin^2 t, (1-i) sin t cos t],
//           [(1-i) sin t cos t, sin^2 t + i cos^2 t]]
Operator2 waveplate_unitary(const WaveplateSpec& w);

// X dephases in the {|H>+|V>, |H>-|V>} basis (Kraus sigma_1), Z in {H, V}
// (Kraus sigma_3).
enum class DampingBasis { X, Z };

class ChannelSpec {
public:
    ChannelSpec(DampingBasis basis, double p);

    DampingBasis basis() const noexcept { return basis_; }
    double p() const noexcept { return p_; }

private:
    DampingBasis basis_;
    double p_;
};

// The same single-qubit channel {sqrt(1-p) I, sqrt(p) sigma} on both arms.
DensityMatrix phase_damping(const DensityMatrix& rho, const ChannelSpec& chan);

// cos 2t |HH> + sin 2t |VV>
Ket4 prepare_parallel(double theta_rad);
// cos 2t |HV> - sin 2t |VH>
Ket4 prepare_antiparallel(double theta_rad);

constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

}  // namespace lurq
