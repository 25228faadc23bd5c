#include "ftip/codec.hpp"

#include <cmath>
#include <numbers>

namespace ftip {

double Ensemble::upsilon() const {
    double u = 0;
    for (const Component& c : components) {
        u += c.weight * std::sin(c.theta);
    }
    return u;
}

void Ensemble::validate() const {
    if (components.empty()) {
        throw UsageError("ensemble: no components");
    }
    double total = 0;
    for (const Component& c : components) {
        if (!(c.weight > 0.0 && c.weight <= 1.0)) {
            throw UsageError("ensemble: weight must be in (0,1]");
        }
        if (!(c.theta > 0.0 && c.theta < std::numbers::pi)) {
            throw UsageError("ensemble: theta must be in (0,pi)");
        }
        total += c.weight;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw UsageError("ensemble: weights must sum to 1");
    }
}

std::vector<double> CountVector::phats() const {
    std::vector<double> out(counts.size());
    for (std::size_t l = 0; l < counts.size(); ++l) {
        out[l] = phat(l);
    }
    return out;
}

DensityState encode(const Ensemble& ens, double phi) {
    ens.validate();
    if (std::abs(phi) > 0.3) {
        throw OutOfRegimeError("encode: |phi| > 0.3 rad, outside small-angle regime");
    }
    Operator rho = Operator::Zero(2, 2);
    const Complex phase = std::polar(1.0, phi);
    for (const Ensemble::Component& c : ens.components) {
        Ket psi(2);
        psi << std::cos(0.5 * c.theta), phase * std::sin(0.5 * c.theta);
        rho += c.weight * (psi * psi.adjoint());
    }
    return DensityState{rho};
}

BasisSet make_bases(double epsilon, double axis, bool extended) {
    if (!(epsilon > 0.0 && epsilon <= 0.2)) {
        throw UsageError("make_bases: epsilon must be in (0, 0.2]");
    }
    const Complex ax = std::polar(1.0, axis);
    const Complex ep = std::polar(1.0, 0.5 * epsilon);
    const Complex em = std::conj(ep);
    const double s = 1.0 / std::numbers::sqrt2;

    BasisSet b;
    b.epsilon = epsilon;
    b.axis = axis;
    for (Ket& k : b.kets) {
        k.resize(2);
    }
    b.kets[0] << s * em, s * ax * ep;
    b.kets[1] << s * ep, s * ax * em;
    b.kets[2] << s * ep, -s * ax * em;
    b.kets[3] << s * em, -s * ax * ep;
    if (extended) {
        b.extended = {ket0(), ket1()};
    }
    return b;
}

std::vector<double> probabilities(const DensityState& rho, const BasisSet& bases) {
    std::vector<double> out;
    out.reserve(bases.extended ? 6 : 4);
    for (const Ket& k : bases.kets) {
        out.push_back(expectation(rho, k));
    }
    if (bases.extended) {
        out.push_back(expectation(rho, (*bases.extended)[0]));
        out.push_back(expectation(rho, (*bases.extended)[1]));
    }
    return out;
}

double compose_xi(std::span<const double> phat) {
    if (phat.size() < 4) {
        throw UsageError("compose_xi: need four probability estimates");
    }
    const double d14 = phat[3] - phat[0];
    const double d23 = phat[2] - phat[1];
    const double denom = d23 - d14;
    if (std::abs(denom) < 1e-12) {
        throw UndecodableSampleError("compose_xi: contrast denominator vanished");
    }
    return (d14 + d23) / denom;
}

double compose_xi(const CountVector& counts) {
    return compose_xi(std::span<const double>(counts.phats()));
}

double estimate_chi_from_extended(double p5, double p6, const Ensemble& ens) {
    ens.validate();
    if (ens.components.size() != 1) {
        throw UsageError("estimate_chi_from_extended: mixed ensembles unsupported");
    }
    const double cos_theta = std::cos(ens.components[0].theta);
    if (std::abs(cos_theta) < 0.1) {
        throw UsageError("estimate_chi_from_extended: |cos theta| < 0.1, ill-conditioned");
    }
    const double total = p5 + p6;
    if (total < 1e-12) {
        throw UndecodableSampleError("estimate_chi_from_extended: no population counts");
    }
    return (p5 - p6) / (total * cos_theta);
}

double estimate_chi_from_extended(const CountVector& counts, const Ensemble& ens) {
    if (counts.counts.size() < 6) {
        throw UsageError("estimate_chi_from_extended: extended counts absent");
    }
    return estimate_chi_from_extended(counts.phat(4), counts.phat(5), ens);
}

double flip_correction_chi(double chi_pop, FlipKind kind) {
    if (kind == FlipKind::BitFlip) {
        return chi_pop;
    }
    if (std::abs(chi_pop) < 1e-12) {
        throw DegenerateChannelError("flip_correction_chi: population contrast vanished");
    }
    return 1.0 / chi_pop;
}

DecodeResult decode(std::span<const double> phat, const BasisSet& bases,
                    std::optional<double> chi_hat) {
    DecodeResult r;
    r.xi = compose_xi(phat);
    r.chi_used = chi_hat.value_or(1.0);
    r.phi_tilde = std::atan(r.xi * std::tan(bases.epsilon) / r.chi_used);
    return r;
}

DecodeResult decode(const CountVector& counts, const BasisSet& bases,
                    std::optional<double> chi_hat) {
    return decode(std::span<const double>(counts.phats()), bases, chi_hat);
}

double decode_single_pair(double p_first, double p_second, int which_pair,
                          double epsilon, double coherence_scale) {
    if (which_pair != 0 && which_pair != 1) {
        throw UsageError("decode_single_pair: pair index must be 0 ({1,4}) or 1 ({2,3})");
    }
    if (std::abs(coherence_scale) < 1e-12) {
        throw UndecodableSampleError("decode_single_pair: coherence scale vanished");
    }
    const double contrast = (p_second - p_first) / coherence_scale;
    if (std::abs(contrast) > 1.0) {
        throw NumericalIntegrityError("decode_single_pair: contrast outside [-1,1]");
    }
    // pair {1,4}: P4 - P1 = r sin(eps - phi); pair {2,3}: P3 - P2 = -r sin(eps + phi)
    if (which_pair == 0) {
        return epsilon - std::asin(contrast);
    }
    return std::asin(-contrast) - epsilon;
}

}  // namespace ftip
