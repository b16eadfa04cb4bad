#pragma once

#include "monoqt/state.hpp"

namespace monoqt {

// Point on the two-qubit EOF curve: eof = h((1 + sqrt(1 - c_sq)) / 2).
struct WoottersPoint {
    double c_sq = 0.0;
    double eof = 0.0;
};

enum class CurveVariable { CSq, C }; // x = C^2, or C itself

// First and second derivative of the EOF curve in the chosen variable at a
// point. Closed forms; divergent endpoints are reported as signed-infinity
// sentinels rather than errors so plots can include them.
struct DerivativeBundle {
    double first = 0.0;
    double second = 0.0;
    double at = 0.0;
    CurveVariable variable = CurveVariable::CSq;
};

// -x log2 x - (1-x) log2(1-x); accepts a +-1e-12 clamp band around [0,1]
double binary_entropy(double p);

// -sum lambda log2 lambda over the spectrum (base 2). Eigenvalues in
// [-1e-9, 0) are clamped; lower is rejected.
double von_neumann_entropy(const DensityMatrix& rho);

// Wootters concurrence max{0, l1 - l2 - l3 - l4} of a two-qubit mixed state
double concurrence_two_qubit(const DensityMatrix& rho);

// squared concurrence 2 (1 - Tr rho_A^2) of a pure state across a bipartition
double pure_concurrence_sq(const PureState& psi, const PartitionSpec& partition);

WoottersPoint eof_curve(double c_sq);

// inverse of the (monotone) curve by bisection; residual <= 1e-12
double eof_curve_inverse(double eof);

double eof_two_qubit(const DensityMatrix& rho);
double eof_pure(const PureState& psi, const PartitionSpec& partition);

DerivativeBundle eof_derivatives(double at, CurveVariable variable);

} // namespace monoqt
