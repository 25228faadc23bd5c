#pragma once

// Dense complex linear algebra for 2- and 4-dimensional quantum objects.
// Everything here is a thin, validated layer over Eigen; all values are
// immutable after construction and all functions are pure.

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace ftip {

using Complex = std::complex<double>;
using Operator = Eigen::MatrixXcd;
using Ket = Eigen::VectorXcd;

// Caller violated a precondition (bad dimension, parameter out of range).
struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A quantity that must be real/bounded came out otherwise by more than
// round-off allows.
struct NumericalIntegrityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr double kHermTol = 1e-12;
inline constexpr double kPsdTol = -1e-10;

// ρ with the invariants (Hermitian, unit trace, PSD) tracked by
// validate_density. Construction does not validate; CPTP evolution
// preserves validity and the diagnostics below catch everything else.
struct DensityState {
    Operator matrix;

    Eigen::Index dim() const { return matrix.rows(); }
};

bool is_finite(const Operator& a);

Operator mat_mul(const Operator& a, const Operator& b);
Operator dagger(const Operator& a);

// Kronecker product of two 2x2 operators, row-of-a major ordering.
Operator tensor(const Operator& a, const Operator& b);

// Tr[rho |phi><phi|], clamped to [0,1] after checking the trace is real.
double expectation(const DensityState& rho, const Ket& phi);

struct DensityDiagnostics {
    double hermiticity_residual = 0;  // max |rho - rho^dag|
    double trace_residual = 0;        // |Tr rho - 1|
    double min_eigenvalue = 0;

    bool ok() const {
        return hermiticity_residual <= kHermTol && trace_residual <= kHermTol &&
               min_eigenvalue >= kPsdTol;
    }
};

// Pure diagnostic, never throws. The 2x2 minimum eigenvalue is analytic;
// dim 4 goes through Eigen's self-adjoint solver on the hermitized matrix.
DensityDiagnostics validate_density(const DensityState& rho);

// Constructors for the handful of fixed objects everything else is built from.
Operator identity_op(Eigen::Index dim);
Operator pauli_x();
Operator pauli_y();
Operator pauli_z();

Ket ket0();
Ket ket1();

DensityState pure_state(const Ket& psi);
DensityState maximally_mixed(Eigen::Index dim);

}  // namespace ftip
