#pragma once

#include "monoqt/measures.hpp"
#include "monoqt/state.hpp"

#include <cstdint>
#include <functional>

namespace monoqt {

// Ensemble decomposition of a mixed state: rho = sum_i weights[i] |psi_i><psi_i|.
struct Decomposition {
    std::vector<double> weights;
    std::vector<PureState> components;
};

enum class RoofCost { Eof, Concurrence, ConcurrenceSq };

struct RoofResult {
    double bound = 0.0;            // minimized average cost (an upper bound on the roof)
    Decomposition decomposition;   // achieving ensemble
    std::size_t restarts_used = 0;
    bool converged = false;        // false when the final restart still improved the best by > 1e-7
    double last_restart_improvement = 0.0;
    double restart_spread = 0.0;   // best vs runner-up restart
};

// All size-m decompositions of rho arise as |psi~_i> = sum_j u[i][j] sqrt(l_j) |v_j>
// from left-isometric u (m x r, u^dag u = I) over the eigen-ensemble (l_j, v_j).
// Weights are the squared norms; zero-weight components are dropped.
Decomposition ensemble_from_isometry(const DensityMatrix& rho, const ComplexMatrix& u);

// Sum_i w_i |psi_i><psi_i| as a plain matrix, for reconstruction checks.
ComplexMatrix reconstruct(const Decomposition& d);

// Minimize the ensemble-averaged pure-state cost over decompositions by
// random-rotation descent: per restart, a random isometry start is refined by
// random two-component rotations (complex Givens) accepted on strict
// improvement, until 500 consecutive rejections or 2e4 proposals. Step angles
// anneal as rejections accumulate. Deterministic for a fixed seed, and
// independent of thread count (per-restart seeds, best-of by (bound, index)).
//   m = 0 selects the default min(rank^2, rank + 4).
RoofResult roof_minimize(const DensityMatrix& rho, RoofCost cost, const PartitionSpec& partition,
                         std::size_t m = 0, std::size_t restarts = 16, std::uint64_t seed = 1,
                         bool serial = false);

// Same optimizer with an arbitrary pure-state cost functional.
RoofResult roof_minimize_custom(const DensityMatrix& rho,
                                const std::function<double(const PureState&)>& cost,
                                std::size_t m = 0, std::size_t restarts = 16, std::uint64_t seed = 1,
                                bool serial = false);

} // namespace monoqt
