#include "monoqt/measures.hpp"

#include "monoqt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace monoqt {

namespace {
const double kLn2 = std::log(2.0);
const double kLn4 = std::log(4.0);
const double kLn16 = std::log(16.0);
constexpr double kBand = 1e-12; // domain clamp band around [0,1]

double clamp01_banded(double v, const char* what) {
    if (!(v >= -kBand && v <= 1.0 + kBand)) throw argument_error(std::string(what) + ": value outside [0,1]");
    if (v < 0.0) return 0.0;
    if (v > 1.0) return 1.0;
    return v;
}
} // namespace

double binary_entropy(double p) {
    p = clamp01_banded(p, "binary_entropy");
    if (p == 0.0 || p == 1.0) return 0.0;
    return -(p * std::log(p) + (1.0 - p) * std::log(1.0 - p)) / kLn2;
}

double von_neumann_entropy(const DensityMatrix& rho) {
    EigenSystem es = herm_eig(rho.mat);
    double s = 0.0;
    for (double lam : es.eigenvalues) {
        if (lam < -1e-9) throw contract_error("von_neumann_entropy: negative eigenvalue below -1e-9");
        if (lam > 0.0) s -= lam * std::log(lam);
    }
    return s / kLn2;
}

double concurrence_two_qubit(const DensityMatrix& rho) {
    if (rho.dims != std::vector<std::size_t>{2, 2})
        throw argument_error("concurrence_two_qubit: state is not two qubits");
    const auto l = wootters_lambdas(rho.mat);
    const double c = l[0] - l[1] - l[2] - l[3];
    return c > 0.0 ? std::min(c, 1.0) : 0.0;
}

double pure_concurrence_sq(const PureState& psi, const PartitionSpec& partition) {
    partition.validate(psi.dims.size());
    if (partition.parties.size() != 2 || !partition.covers_all(psi.dims.size()))
        throw argument_error("pure_concurrence_sq: partition must split the state into exactly two parties");
    const DensityMatrix marginal = reduced_density(psi, partition.parties[0]);
    return 2.0 * (1.0 - purity(marginal));
}

WoottersPoint eof_curve(double c_sq) {
    c_sq = clamp01_banded(c_sq, "eof_curve");
    WoottersPoint p;
    p.c_sq = c_sq;
    if (c_sq == 0.0) {
        p.eof = 0.0;
    } else if (c_sq == 1.0) {
        p.eof = 1.0;
    } else {
        p.eof = binary_entropy(0.5 * (1.0 + std::sqrt(1.0 - c_sq)));
    }
    return p;
}

double eof_curve_inverse(double eof) {
    eof = clamp01_banded(eof, "eof_curve_inverse");
    if (eof == 0.0) return 0.0;
    if (eof == 1.0) return 1.0;
    double lo = 0.0, hi = 1.0;
    double mid = 0.5;
    for (int iter = 0; iter < 200; ++iter) {
        mid = 0.5 * (lo + hi);
        const double res = eof_curve(mid).eof - eof;
        if (std::abs(res) <= 1e-12) break;
        if (res < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return mid;
}

double eof_two_qubit(const DensityMatrix& rho) {
    const double c = concurrence_two_qubit(rho);
    return eof_curve(c * c).eof;
}

double eof_pure(const PureState& psi, const PartitionSpec& partition) {
    partition.validate(psi.dims.size());
    if (partition.parties.size() != 2 || !partition.covers_all(psi.dims.size()))
        throw argument_error("eof_pure: partition must split the state into exactly two parties");
    return von_neumann_entropy(reduced_density(psi, partition.parties[0]));
}

DerivativeBundle eof_derivatives(double at, CurveVariable variable) {
    if (!(at >= -kBand && at <= 1.0 + kBand)) throw argument_error("eof_derivatives: point outside [0,1]");
    DerivativeBundle out;
    out.at = at;
    out.variable = variable;
    const double inf = std::numeric_limits<double>::infinity();
    if (variable == CurveVariable::CSq) {
        if (at <= kBand) { // divergent endpoint
            out.first = inf;
            out.second = -inf;
        } else if (at >= 1.0 - kBand) { // finite limits at x -> 1
            out.first = 2.0 / kLn16;
            out.second = -2.0 / (3.0 * kLn16);
        } else {
            const double s = std::sqrt(1.0 - at);
            const double big = std::log((1.0 + s) / (1.0 - s));
            out.first = big / (s * kLn16);
            out.second = (-2.0 * s + at * big) / (2.0 * kLn16 * at * s * s * s);
        }
    } else {
        if (at <= kBand) { // slope vanishes, curvature diverges
            out.first = 0.0;
            out.second = inf;
        } else if (at >= 1.0 - kBand) {
            out.first = 2.0 / kLn4;
            out.second = 2.0 / (3.0 * kLn4);
        } else {
            const double s = std::sqrt(1.0 - at * at);
            const double big = std::log((1.0 + s) / (1.0 - s));
            out.first = at * big / (s * kLn4);
            out.second = (-2.0 * s + big) / (kLn4 * s * s * s);
        }
    }
    return out;
}

} // namespace monoqt
