#pragma once

// Relative-phase encoder, pairwise-orthogonal postselected bases, detection
// probabilities, and the ratio decoding rule.
//
// Conventions, fixed here and relied on everywhere downstream:
//  * encode writes the off-diagonal element rho01 = (Upsilon/2) e^{-i phi}
//    (i.e. |psi> = cos(theta/2)|0> + e^{i phi} sin(theta/2)|1> with <0|.|1>
//    ordering).
//  * The basis kets generalize the canonical four by an axis phase a:
//      |phi1> = (e^{-i eps/2}|0> + e^{ia} e^{ i eps/2}|1>)/sqrt2
//      |phi2> = (e^{ i eps/2}|0> + e^{ia} e^{-i eps/2}|1>)/sqrt2
//      |phi3> = (e^{ i eps/2}|0> - e^{ia} e^{-i eps/2}|1>)/sqrt2
//      |phi4> = (e^{-i eps/2}|0> - e^{ia} e^{ i eps/2}|1>)/sqrt2
//    At a = pi/2 these are exactly the canonical kets (the i factor is the
//    systematic axis). {1,4} and {2,3} are orthogonal pairs.
//  * With exact probabilities, the contrast ratio below satisfies
//      xi * tan(eps) = chi * tan(phi)
//    for every channel with vanishing A and C parameters, so the signal is
//    recovered exactly by phi = atan(xi * tan(eps) / chi).

#include "ftip/channels.hpp"
#include "ftip/qmath.hpp"

#include <array>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace ftip {

// |phi| exceeded the small-angle regime the decoder is specified for.
struct OutOfRegimeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The xi denominator vanished: no signal information in the counts.
struct UndecodableSampleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Ensemble {
    struct Component {
        double weight;  // in (0,1], weights sum to 1
        double theta;   // in (0, pi)
    };
    std::vector<Component> components;

    // sum_j p_j sin(theta_j): twice the magnitude of the encoded coherence
    double upsilon() const;
    void validate() const;

    static Ensemble single(double theta) { return Ensemble{{{1.0, theta}}}; }
};

struct BasisSet {
    double epsilon = 0;       // half-separation, radians
    double axis = 0;          // systematic axis, radians
    std::array<Ket, 4> kets;  // |phi1..phi4|
    std::optional<std::array<Ket, 2>> extended;  // |phi5>, |phi6>
};

struct CountVector {
    std::vector<long long> counts;       // N_l, one per basis ket
    std::vector<long long> allocations;  // n_l > 0

    double phat(std::size_t l) const {
        return static_cast<double>(counts[l]) / static_cast<double>(allocations[l]);
    }
    std::vector<double> phats() const;
};

struct DecodeResult {
    double xi = 0;
    double phi_tilde = 0;   // radians
    double chi_used = 1.0;
    double delta_phi = std::numeric_limits<double>::quiet_NaN();
};

// rho = sum_j p_j |psi_j(phi)><psi_j(phi)|. Throws OutOfRegimeError for
// |phi| > 0.3.
DensityState encode(const Ensemble& ens, double phi);

// extended = true additionally carries |phi5> = |0>, |phi6> = |1> for
// flip-noise characterization.
BasisSet make_bases(double epsilon, double axis, bool extended = false);

// P_l = Tr[rho |phi_l><phi_l|] for the four kets, then the extended pair
// when present.
std::vector<double> probabilities(const DensityState& rho, const BasisSet& bases);

// The symmetric contrast ratio of the four estimated probabilities:
//   xi = [(P4-P1) + (P3-P2)] / [(P3-P2) - (P4-P1)]
// Sign fixed so that xi * tan(eps) = chi * tan(phi) under the conventions
// above. Throws UndecodableSampleError when the denominator vanishes.
double compose_xi(std::span<const double> phat);
double compose_xi(const CountVector& counts);

enum class FlipKind { BitFlip, BitPhaseFlip };

// chi estimate from the computational-basis populations, normalized by
// their sum so the same formula serves single-qubit and coincidence counts:
//   chi_hat = (P5 - P6) / ((P5 + P6) * cos(theta))
// Single pure component with |cos theta| >= 0.1 required.
double estimate_chi_from_extended(double p5, double p6, const Ensemble& ens);
double estimate_chi_from_extended(const CountVector& counts, const Ensemble& ens);

// The population contrast measures B1 - |B2|; the decoder slope is
// chi = (B1-B2)/(B1+B2). For a bit flip the two coincide; for a bit-phase
// flip (B2 < 0) the slope is the reciprocal of the contrast.
double flip_correction_chi(double chi_pop, FlipKind kind);

// phi_tilde = atan(xi * tan(eps) / chi_used); chi_used defaults to 1.
// Dividing inside the atan makes the exact-probability correction exact.
DecodeResult decode(std::span<const double> phat, const BasisSet& bases,
                    std::optional<double> chi_hat = std::nullopt);
DecodeResult decode(const CountVector& counts, const BasisSet& bases,
                    std::optional<double> chi_hat = std::nullopt);

// Fallback when one orthogonal pair is lost. Needs the coherence scale
// r = Upsilon * B1 of the channel (known channel + known ensemble):
//   pair {1,4}:  P4 - P1 = r sin(eps - phi)
//   pair {2,3}:  P2 - P3 = r sin(eps + phi)
// pair_low/pair_high are the probabilities of the surviving pair in ket
// order (P1,P4) or (P2,P3).
double decode_single_pair(double p_first, double p_second, int which_pair,
                          double epsilon, double coherence_scale);

}  // namespace ftip
