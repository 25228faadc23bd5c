#pragma once

// Noise channels as Kraus operator sets, their application to density
// states, and the 8-parameter characterization that drives the decoder.
//
// Kraus element layout, used everywhere that reads matrix entries:
//   E_k = [[a_k, b_k], [c_k, d_k]]
// The eight sums (A1..A4, B1, B2, C1, C2) are layout-sensitive; nothing in
// this file or its callers may deviate from this layout.

#include "ftip/qmath.hpp"

#include <string>
#include <vector>

namespace ftip {

// A channel whose Kraus set fails the completeness condition.
struct InvalidChannelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// chi2 = B1 + B2 vanished; the suppression factor chi is undefined.
struct DegenerateChannelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct KrausChannel {
    std::string name;
    Eigen::Index dim = 2;
    std::vector<Operator> operators;

    // max-norm of sum_k E_k^dag E_k - I
    double completeness_residual() const;
};

// The eight real parameters of a dim-2 channel plus the derived
// suppression factors chi1 = B1 - B2, chi2 = B1 + B2, chi = chi1/chi2.
struct NoiseParams {
    double a1 = 0, a2 = 0, a3 = 0, a4 = 0;
    double b1 = 0, b2 = 0;
    double c1 = 0, c2 = 0;
    double chi1 = 0, chi2 = 0, chi = 0;
};

enum class ChannelClass {
    Dephasing,  // A = C = 0 and B2 = 0: ratio decoder cancels noise exactly
    Flip,       // A = C = 0, B2 != 0: needs extended bases to estimate chi
    General,
};

const char* to_string(ChannelClass c);

// rho -> sum_k E_k rho E_k^dag. Throws InvalidChannelError if the Kraus
// set fails completeness beyond 1e-10.
DensityState apply(const KrausChannel& channel, const DensityState& rho);

// --- catalog -------------------------------------------------------------

KrausChannel make_identity_channel(Eigen::Index dim = 2);
KrausChannel make_phase_damping(double lambda);
KrausChannel make_phase_flip(double p);
KrausChannel make_bit_flip(double p);
KrausChannel make_bit_phase_flip(double p);
KrausChannel make_amplitude_damping(double gamma);
KrausChannel make_depolarizing(double p);

// Coherence attenuation of a qubit dephased by a single random telegraph
// process with flip rate nu and coupling strength g, at time t:
//   gamma(t) = e^{-nu t} [cosh(mu t) + (nu/mu) sinh(mu t)],  mu = sqrt(nu^2 - g^2)
// (oscillatory cos/sin form when g > nu). Validated against a sampled
// telegraph-trajectory average in the test suite.
double rtn_attenuation(double nu, double coupling, double t);

// Pure-dephasing channel realizing the RTN attenuation above. The first
// Kraus element is diag(1, gamma(t)); gamma < 0 in the oscillatory regime
// is a valid element and keeps chi = 1.
KrausChannel make_rtn(double nu, double coupling, double t);

// Kraus-set concatenation of products: (second after first).
KrausChannel compose(const KrausChannel& first, const KrausChannel& second);

// All pairwise tensor products; dim-4 channel for the two-path setting.
KrausChannel tensor_channel(const KrausChannel& c1, const KrausChannel& c2);

// The element-layout sums over the Kraus set of a dim-2 channel. Throws
// DegenerateChannelError when chi2 vanishes (chi undefined).
NoiseParams noise_params(const KrausChannel& channel);

// As noise_params but leaves chi = NaN instead of throwing when chi2 = 0.
NoiseParams noise_params_lenient(const KrausChannel& channel);

ChannelClass classify(const NoiseParams& params);

}  // namespace ftip
