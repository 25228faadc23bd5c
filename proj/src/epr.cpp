#include "ftip/epr.hpp"

#include <cmath>
#include <numbers>

namespace ftip {

DensityState encode_epr(const EprEnsemble& ens, double phi) {
    ens.validate();
    if (std::abs(phi) > 0.3) {
        throw OutOfRegimeError("encode_epr: |phi| > 0.3 rad, outside small-angle regime");
    }
    Operator rho = Operator::Zero(4, 4);
    const Complex phase = std::polar(1.0, phi);
    for (const Ensemble::Component& c : ens.components) {
        Ket psi = Ket::Zero(4);
        psi(0) = std::cos(0.5 * c.theta);
        psi(3) = phase * std::sin(0.5 * c.theta);
        rho += c.weight * (psi * psi.adjoint());
    }
    return DensityState{rho};
}

CoincidenceBasisSet make_coincidence_bases(double epsilon, double axis, bool extended) {
    const BasisSet single = make_bases(epsilon, axis, extended);

    CoincidenceBasisSet cbs;
    cbs.epsilon = epsilon;
    cbs.axis = axis;
    cbs.phi0.resize(2);
    cbs.phi0 << 1.0 / std::numbers::sqrt2, 1.0 / std::numbers::sqrt2;

    auto product = [&cbs](const Ket& s) {
        Ket out(4);
        out << s(0) * cbs.phi0(0), s(0) * cbs.phi0(1), s(1) * cbs.phi0(0),
            s(1) * cbs.phi0(1);
        return out;
    };
    for (std::size_t l = 0; l < 4; ++l) {
        cbs.kets[l] = product(single.kets[l]);
    }
    if (single.extended) {
        cbs.extended = {product((*single.extended)[0]), product((*single.extended)[1])};
    }
    return cbs;
}

std::vector<double> coincidence_probabilities(const DensityState& rho,
                                              const CoincidenceBasisSet& cbs) {
    std::vector<double> out;
    out.reserve(cbs.extended ? 6 : 4);
    for (const Ket& k : cbs.kets) {
        out.push_back(expectation(rho, k));
    }
    if (cbs.extended) {
        out.push_back(expectation(rho, (*cbs.extended)[0]));
        out.push_back(expectation(rho, (*cbs.extended)[1]));
    }
    return out;
}

DecodeResult decode_epr(std::span<const double> phat, const CoincidenceBasisSet& cbs,
                        std::optional<double> chi_hat) {
    DecodeResult r;
    r.xi = compose_xi(phat);
    r.chi_used = chi_hat.value_or(1.0);
    r.phi_tilde = std::atan(r.xi * std::tan(cbs.epsilon) / r.chi_used);
    return r;
}

DecodeResult decode_epr(const CountVector& counts, const CoincidenceBasisSet& cbs,
                        std::optional<double> chi_hat) {
    return decode_epr(std::span<const double>(counts.phats()), cbs, chi_hat);
}

}  // namespace ftip
