#pragma once

#include "monoqt/measures.hpp"
#include "monoqt/state.hpp"

#include <cstdint>

namespace monoqt {

// Rank-1 projective measurement on one party, stored as the orthonormal basis
// columns. For qubits the basis comes from Bloch angles (theta, phi); for
// dimension-4 parties from either a product of two qubit bases or a
// 16-parameter unitary exp(i sum_j t_j G_j) over a Hermitian generator basis.
struct MeasurementSpec {
    enum class Kind { QubitAngles, ProductAngles, UnitaryColumns };
    std::size_t party_dim = 2;
    Kind kind = Kind::QubitAngles;
    std::vector<double> params; // 2 angles / 4 angles / 16 generator coefficients
    ComplexMatrix columns;      // party_dim x party_dim, measurement vectors as columns

    // max deviation of sum_k P_k from identity (completeness check)
    double completeness_defect() const;
};

struct DiscordResult {
    double discord = 0.0;
    double conditional_entropy = 0.0;          // S(A|B) = S(AB) - S(B), no measurement
    double measured_conditional_entropy = 0.0; // minimized sum_k p_k S(rho_{A|k})
    MeasurementSpec optimal_measurement;
};

// Closed-form entanglement curves of the cavity-reservoir state: each listed
// bipartite EOF equals the binary entropy of the matching eta parameter.
struct CavityClosedForms {
    double eta1 = 0.0, eta2 = 0.0, eta3 = 0.0, eta4 = 0.0;
    double eof_c1_r1r2 = 0.0; // h(eta1)
    double eof_c1_c2r1 = 0.0; // h(eta2)
    double eof_r1_c1c2 = 0.0; // h(eta3)
    double eof_r1_r2c1 = 0.0; // h(eta4)
};

// Optimizer budgets. The defaults match the documented behaviour of discord();
// light() is the cheaper preset used inside large randomized campaigns.
struct KwOptions {
    std::size_t grid = 64;             // qubit (theta, phi) grid per axis
    std::size_t refine_iters = 200;    // Nelder-Mead budget after the coarse stage
    std::size_t product_grid = 10;     // per-axis grid for dim-4 product-basis stage
    std::size_t su4_starts = 2048;     // random starts for the 16-parameter stage
    std::uint64_t seed = 7;
    bool serial = false;

    static KwOptions light();
};

// S(A|B) = S(AB) - S(B) for a bipartite state; b selects which party is B.
double conditional_entropy(const DensityMatrix& rho_ab, std::size_t b);

// Orthonormal qubit basis from Bloch angles:
// (cos(t/2), e^{i phi} sin(t/2)) and its orthogonal complement, as columns.
ComplexMatrix qubit_measurement_basis(double theta, double phi);

// sum_k p_k S(rho_{A|k}) for a specific orthonormal measurement basis on the
// measured party. Exposed so fixed measurements (e.g. sigma_x) can be compared
// against the optimizer.
double measured_conditional_entropy(const DensityMatrix& rho_ab, std::size_t measured_party,
                                    const ComplexMatrix& basis_columns);

struct MeasuredMinimum {
    double value = 0.0;
    MeasurementSpec measurement;
    double refine_gain = 0.0; // improvement contributed by the final refinement stage
};

// Minimum of the measured conditional entropy over rank-1 projective bases on
// the measured party (dimension 2 or 4). Coarse grid / random starts followed
// by Nelder-Mead refinement; an upper bound on the POVM minimum.
MeasuredMinimum minimize_measured_conditional_entropy(const DensityMatrix& rho_ab,
                                                      std::size_t measured_party,
                                                      const KwOptions& opt = {});

// Quantum discord D(A|B) = min_meas sum_k p_k S(rho_{A|k}) - S(A|B).
DiscordResult discord(const DensityMatrix& rho_ab, std::size_t measured_party, std::size_t grid = 64,
                      std::size_t refine_iters = 200);
DiscordResult discord(const DensityMatrix& rho_ab, std::size_t measured_party, const KwOptions& opt);

// EOF of the reduction rho_{ac} of a three-party pure state via the
// Koashi-Winter identity E_f(a|c) = D(a|b) + S(a|b), which reduces to the
// minimized measured conditional entropy of rho_{ab}. Upper bound within the
// measurement-optimizer tolerance.
double koashi_winter_eof(const PureState& psi, std::size_t a, std::size_t b, std::size_t c,
                         const KwOptions& opt = {});

CavityClosedForms cavity_closed_forms(const CavityParams& p);

} // namespace monoqt
