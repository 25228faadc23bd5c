#include "ftip/qmath.hpp"

#include <cmath>

namespace ftip {

bool is_finite(const Operator& a) {
    return a.allFinite();
}

static void require_dim(const Operator& a, const char* what) {
    if (a.rows() != a.cols() || (a.rows() != 2 && a.rows() != 4)) {
        throw UsageError(std::string(what) + ": operator must be 2x2 or 4x4");
    }
}

Operator mat_mul(const Operator& a, const Operator& b) {
    if (a.cols() != b.rows()) {
        throw UsageError("mat_mul: dimension mismatch");
    }
    return a * b;
}

Operator dagger(const Operator& a) {
    return a.adjoint();
}

Operator tensor(const Operator& a, const Operator& b) {
    if (a.rows() != 2 || a.cols() != 2 || b.rows() != 2 || b.cols() != 2) {
        throw UsageError("tensor: both factors must be 2x2");
    }
    Operator out(4, 4);
    for (Eigen::Index i = 0; i < 2; ++i) {
        for (Eigen::Index j = 0; j < 2; ++j) {
            out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
        }
    }
    return out;
}

double expectation(const DensityState& rho, const Ket& phi) {
    if (rho.dim() != phi.size()) {
        throw UsageError("expectation: dimension mismatch");
    }
    const Complex value = phi.dot(rho.matrix * phi);  // <phi|rho|phi>
    if (std::abs(value.imag()) > 1e-9) {
        throw NumericalIntegrityError("expectation: trace has imaginary part " +
                                      std::to_string(value.imag()));
    }
    const double p = value.real();
    if (p < -1e-9 || p > 1.0 + 1e-9) {
        throw NumericalIntegrityError("expectation: probability out of [0,1]: " +
                                      std::to_string(p));
    }
    return std::clamp(p, 0.0, 1.0);
}

DensityDiagnostics validate_density(const DensityState& rho) {
    const Operator& m = rho.matrix;
    DensityDiagnostics d;
    d.hermiticity_residual = (m - m.adjoint()).cwiseAbs().maxCoeff();
    d.trace_residual = std::abs(m.trace() - Complex(1.0, 0.0));
    if (m.rows() == 2) {
        // Eigenvalues of the hermitized part, closed form.
        const double a = 0.5 * (m(0, 0) + std::conj(m(0, 0))).real();
        const double c = 0.5 * (m(1, 1) + std::conj(m(1, 1))).real();
        const Complex b = 0.5 * (m(0, 1) + std::conj(m(1, 0)));
        const double mean = 0.5 * (a + c);
        const double rad = std::hypot(0.5 * (a - c), std::abs(b));
        d.min_eigenvalue = mean - rad;
    } else {
        Operator herm = 0.5 * (m + m.adjoint());
        Eigen::SelfAdjointEigenSolver<Operator> solver(herm);
        d.min_eigenvalue = solver.eigenvalues().minCoeff();
    }
    return d;
}

Operator identity_op(Eigen::Index dim) {
    if (dim != 2 && dim != 4) {
        throw UsageError("identity_op: dim must be 2 or 4");
    }
    return Operator::Identity(dim, dim);
}

Operator pauli_x() {
    Operator x(2, 2);
    x << 0, 1, 1, 0;
    return x;
}

Operator pauli_y() {
    Operator y(2, 2);
    y << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
    return y;
}

Operator pauli_z() {
    Operator z(2, 2);
    z << 1, 0, 0, -1;
    return z;
}

Ket ket0() {
    Ket k(2);
    k << 1, 0;
    return k;
}

Ket ket1() {
    Ket k(2);
    k << 0, 1;
    return k;
}

DensityState pure_state(const Ket& psi) {
    if (psi.size() != 2 && psi.size() != 4) {
        throw UsageError("pure_state: dim must be 2 or 4");
    }
    if (std::abs(psi.squaredNorm() - 1.0) > 1e-12) {
        throw UsageError("pure_state: ket not normalized");
    }
    return DensityState{psi * psi.adjoint()};
}

DensityState maximally_mixed(Eigen::Index dim) {
    require_dim(identity_op(dim), "maximally_mixed");
    return DensityState{Operator::Identity(dim, dim) / static_cast<double>(dim)};
}

}  // namespace ftip
