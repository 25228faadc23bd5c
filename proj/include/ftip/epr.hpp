#pragma once

// Two-photon extension: phase encoding on a polarization-entangled pair,
// product-channel evolution, and coincidence decoding against the
// auxiliary reference base.
//
// H/V is relabeled to the computational 0/1 basis so the dim-2 channel
// catalog applies unchanged. Tensor ordering is signal (x) reference:
// basis states |00>,|01>,|10>,|11> = |H H>,|H V>,|V H>,|V V> with the
// signal path first. Coincidence kets are |phi_l> (x) |phi0>.

#include "ftip/codec.hpp"

#include <array>
#include <optional>
#include <span>

namespace ftip {

// Same component structure as the single-qubit ensemble, reinterpreted over
// |psi_j> = cos(theta_j/2)|00> + sin(theta_j/2)|11>.
using EprEnsemble = Ensemble;

struct CoincidenceBasisSet {
    double epsilon = 0;
    double axis = 0;
    Ket phi0;                 // reference-path base, (|0>+|1>)/sqrt2
    std::array<Ket, 4> kets;  // |phi_l> (x) |phi0>
    std::optional<std::array<Ket, 2>> extended;  // |0>(x)|phi0>, |1>(x)|phi0>
};

// cos(theta/2)|00> + e^{i phi} sin(theta/2)|11>, mixed over components.
DensityState encode_epr(const EprEnsemble& ens, double phi);

CoincidenceBasisSet make_coincidence_bases(double epsilon, double axis,
                                           bool extended = false);

std::vector<double> coincidence_probabilities(const DensityState& rho,
                                              const CoincidenceBasisSet& cbs);

// Same ratio composition as the single-qubit decoder; with equal channels
// on both arms the slope is (B1^2 - B2^2)/(B1 + B2)^2.
DecodeResult decode_epr(std::span<const double> phat, const CoincidenceBasisSet& cbs,
                        std::optional<double> chi_hat = std::nullopt);
DecodeResult decode_epr(const CountVector& counts, const CoincidenceBasisSet& cbs,
                        std::optional<double> chi_hat = std::nullopt);

}  // namespace ftip
