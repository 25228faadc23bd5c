#include "ftip/channels.hpp"

#include <cmath>
#include <limits>

namespace ftip {

namespace {

void require_unit_interval(double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw UsageError(std::string(what) + ": parameter must be in [0,1]");
    }
}

Operator zeros2() {
    return Operator::Zero(2, 2);
}

}  // namespace

double KrausChannel::completeness_residual() const {
    Operator sum = Operator::Zero(dim, dim);
    for (const Operator& e : operators) {
        sum += e.adjoint() * e;
    }
    return (sum - Operator::Identity(dim, dim)).cwiseAbs().maxCoeff();
}

const char* to_string(ChannelClass c) {
    switch (c) {
        case ChannelClass::Dephasing: return "dephasing";
        case ChannelClass::Flip: return "flip";
        case ChannelClass::General: return "general";
    }
    return "?";
}

DensityState apply(const KrausChannel& channel, const DensityState& rho) {
    if (channel.dim != rho.dim()) {
        throw UsageError("apply: channel/state dimension mismatch");
    }
    if (channel.completeness_residual() > 1e-10) {
        throw InvalidChannelError("apply: Kraus set fails completeness for channel '" +
                                  channel.name + "'");
    }
    Operator out = Operator::Zero(channel.dim, channel.dim);
    for (const Operator& e : channel.operators) {
        out += e * rho.matrix * e.adjoint();
    }
    return DensityState{out};
}

KrausChannel make_identity_channel(Eigen::Index dim) {
    return KrausChannel{"identity", dim, {identity_op(dim)}};
}

KrausChannel make_phase_damping(double lambda) {
    require_unit_interval(lambda, "phase_damping");
    Operator e0 = zeros2();
    e0(0, 0) = 1.0;
    e0(1, 1) = std::sqrt(1.0 - lambda);
    Operator e1 = zeros2();
    e1(1, 1) = std::sqrt(lambda);
    return KrausChannel{"phase_damping", 2, {e0, e1}};
}

KrausChannel make_phase_flip(double p) {
    require_unit_interval(p, "phase_flip");
    return KrausChannel{"phase_flip", 2,
                        {std::sqrt(1.0 - p) * identity_op(2), std::sqrt(p) * pauli_z()}};
}

KrausChannel make_bit_flip(double p) {
    require_unit_interval(p, "bit_flip");
    return KrausChannel{"bit_flip", 2,
                        {std::sqrt(1.0 - p) * identity_op(2), std::sqrt(p) * pauli_x()}};
}

KrausChannel make_bit_phase_flip(double p) {
    require_unit_interval(p, "bit_phase_flip");
    return KrausChannel{"bit_phase_flip", 2,
                        {std::sqrt(1.0 - p) * identity_op(2), std::sqrt(p) * pauli_y()}};
}

KrausChannel make_amplitude_damping(double gamma) {
    require_unit_interval(gamma, "amplitude_damping");
    Operator e0 = zeros2();
    e0(0, 0) = 1.0;
    e0(1, 1) = std::sqrt(1.0 - gamma);
    Operator e1 = zeros2();
    e1(0, 1) = std::sqrt(gamma);
    return KrausChannel{"amplitude_damping", 2, {e0, e1}};
}

KrausChannel make_depolarizing(double p) {
    require_unit_interval(p, "depolarizing");
    return KrausChannel{"depolarizing", 2,
                        {std::sqrt(1.0 - 0.75 * p) * identity_op(2),
                         std::sqrt(0.25 * p) * pauli_x(),
                         std::sqrt(0.25 * p) * pauli_y(),
                         std::sqrt(0.25 * p) * pauli_z()}};
}

double rtn_attenuation(double nu, double coupling, double t) {
    if (nu < 0 || coupling < 0 || t < 0) {
        throw UsageError("rtn: parameters must be nonnegative");
    }
    const double g = coupling;
    double gamma;
    if (nu >= g) {
        const double mu = std::sqrt(nu * nu - g * g);
        if (mu * t < 1e-12) {
            // mu -> 0 limit: (1 + nu t) e^{-nu t}
            gamma = std::exp(-nu * t) * (1.0 + nu * t);
        } else {
            gamma = std::exp(-nu * t) * (std::cosh(mu * t) + (nu / mu) * std::sinh(mu * t));
        }
    } else {
        const double w = std::sqrt(g * g - nu * nu);
        gamma = std::exp(-nu * t) * (std::cos(w * t) + (nu / w) * std::sin(w * t));
    }
    if (std::abs(gamma) > 1.0 + 1e-12) {
        throw NumericalIntegrityError("rtn: |gamma| > 1");
    }
    return std::clamp(gamma, -1.0, 1.0);
}

KrausChannel make_rtn(double nu, double coupling, double t) {
    const double gamma = rtn_attenuation(nu, coupling, t);
    Operator e0 = zeros2();
    e0(0, 0) = 1.0;
    e0(1, 1) = gamma;
    Operator e1 = zeros2();
    e1(1, 1) = std::sqrt(1.0 - gamma * gamma);
    return KrausChannel{"rtn", 2, {e0, e1}};
}

KrausChannel compose(const KrausChannel& first, const KrausChannel& second) {
    if (first.dim != second.dim) {
        throw UsageError("compose: dimension mismatch");
    }
    KrausChannel out{second.name + "*" + first.name, first.dim, {}};
    out.operators.reserve(first.operators.size() * second.operators.size());
    for (const Operator& f : second.operators) {
        for (const Operator& e : first.operators) {
            out.operators.push_back(f * e);
        }
    }
    return out;
}

KrausChannel tensor_channel(const KrausChannel& c1, const KrausChannel& c2) {
    if (c1.dim != 2 || c2.dim != 2) {
        throw UsageError("tensor_channel: both factors must be dim 2");
    }
    KrausChannel out{c1.name + "(x)" + c2.name, 4, {}};
    const std::size_t count = c1.operators.size() * c2.operators.size();
    if (count > 16) {
        throw InvalidChannelError("tensor_channel: operator count exceeds 16");
    }
    out.operators.reserve(count);
    for (const Operator& e1 : c1.operators) {
        for (const Operator& e2 : c2.operators) {
            out.operators.push_back(tensor(e1, e2));
        }
    }
    return out;
}

NoiseParams noise_params_lenient(const KrausChannel& channel) {
    if (channel.dim != 2) {
        throw UsageError("noise_params: dim-2 channels only");
    }
    NoiseParams np;
    for (const Operator& e : channel.operators) {
        const Complex a = e(0, 0), b = e(0, 1), c = e(1, 0), d = e(1, 1);
        np.a1 += (std::conj(a) * c).real();
        np.a2 += (std::conj(b) * d).real();
        np.a3 += (std::conj(a) * c).imag();
        np.a4 += (std::conj(b) * d).imag();
        np.b1 += (std::conj(a) * d).real();
        np.b2 += (std::conj(b) * c).real();
        np.c1 += (std::conj(a) * d).imag();
        np.c2 += (std::conj(b) * c).imag();
    }
    np.chi1 = np.b1 - np.b2;
    np.chi2 = np.b1 + np.b2;
    np.chi = std::abs(np.chi2) < 1e-12 ? std::numeric_limits<double>::quiet_NaN()
                                       : np.chi1 / np.chi2;
    return np;
}

NoiseParams noise_params(const KrausChannel& channel) {
    NoiseParams np = noise_params_lenient(channel);
    if (std::isnan(np.chi)) {
        throw DegenerateChannelError("noise_params: chi2 = 0, chi undefined for channel '" +
                                     channel.name + "'");
    }
    return np;
}

ChannelClass classify(const NoiseParams& p) {
    const double tol = 1e-10;
    const bool a_zero = std::abs(p.a1) < tol && std::abs(p.a2) < tol &&
                        std::abs(p.a3) < tol && std::abs(p.a4) < tol;
    const bool c_zero = std::abs(p.c1) < tol && std::abs(p.c2) < tol;
    if (a_zero && c_zero) {
        return std::abs(p.b2) < tol ? ChannelClass::Dephasing : ChannelClass::Flip;
    }
    return ChannelClass::General;
}

}  // namespace ftip
