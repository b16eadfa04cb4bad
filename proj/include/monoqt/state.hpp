#pragma once

#include "monoqt/linalg.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace monoqt {

// Index convention used throughout: basis labels are mixed-radix numbers with
// the FIRST subsystem as the most significant digit. For dims (2,2) the flat
// index of |a b> is 2a + b.
std::vector<std::size_t> index_strides(const std::vector<std::size_t>& dims);
std::size_t ravel_index(const std::vector<std::size_t>& digits, const std::vector<std::size_t>& dims);
std::vector<std::size_t> unravel_index(std::size_t flat, const std::vector<std::size_t>& dims);

// Normalized pure state over a list of subsystem dimensions.
// Capacity: at most 2^20 amplitudes. Construction renormalizes inputs whose
// 2-norm is within 1e-8 of 1 and rejects anything worse.
struct PureState {
    std::vector<std::size_t> dims;
    std::vector<cplx> amp;

    PureState() = default;
    PureState(std::vector<std::size_t> d, std::vector<cplx> amplitudes);

    std::size_t total_dim() const;
    std::size_t num_parties() const { return dims.size(); }
};

struct DensityMatrix {
    std::vector<std::size_t> dims;
    ComplexMatrix mat;

    std::size_t total_dim() const;
    std::size_t num_parties() const { return dims.size(); }
};

// Validating constructors. make_density checks shape, Hermiticity (1e-9) and
// trace (rescaled when within 1e-8 of 1). Positivity is only checked where it
// matters numerically (entropies, psd_sqrt) or on explicit request.
DensityMatrix make_density(std::vector<std::size_t> dims, ComplexMatrix mat);
void validate_density_spectrum(const DensityMatrix& rho); // eigenvalues >= -1e-9

// |psi><psi| as a DensityMatrix (capacity: total dimension <= 64)
DensityMatrix density(const PureState& psi);

// Reduced state of a pure state over `keep` (subsystem indices, any order;
// result follows the original order).
DensityMatrix reduced_density(const PureState& psi, const std::vector<std::size_t>& keep);

double purity(const DensityMatrix& rho); // Tr rho^2

// Ordered grouping of subsystem indices into parties, e.g. "0|1|2,3".
struct PartitionSpec {
    std::vector<std::vector<std::size_t>> parties;

    static PartitionSpec parse(const std::string& text);
    std::string to_string() const;
    // disjointness/range checks against a dims vector; requires >= 2 parties
    void validate(std::size_t num_subsystems) const;
    bool covers_all(std::size_t num_subsystems) const;
};

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::size_t>& keep);

// Subsystem permutation: new subsystem i is old subsystem perm[i].
PureState permute_subsystems(const PureState& psi, const std::vector<std::size_t>& perm);
DensityMatrix permute_subsystems(const DensityMatrix& rho, const std::vector<std::size_t>& perm);

// Reorders subsystems so each party is contiguous, then merges each party into
// a single factor of dimension = product of its members. The partition must
// cover every subsystem. Invertible via ungroup_parties.
PureState group_parties(const PureState& psi, const PartitionSpec& partition);
DensityMatrix group_parties(const DensityMatrix& rho, const PartitionSpec& partition);
PureState ungroup_parties(const PureState& grouped, const PartitionSpec& partition,
                          const std::vector<std::size_t>& original_dims);

// Parameters of the two cavity-reservoir pairs: initial amplitudes (alpha,
// beta) with alpha^2 + beta^2 = 1, and the dimensionless time kappa*t. The
// decay amplitudes are xi = exp(-kappa t / 2) and chi = sqrt(1 - exp(-kappa t)).
struct CavityParams {
    double alpha = 1.0;
    double beta = 0.0;
    double kappa_t = 0.0;

    double xi() const;
    double chi() const;
};

CavityParams make_cavity_params(double alpha, double kappa_t);
void validate_cavity_params(const CavityParams& p);

// --- factories ---

// (|10> + |01> + ... )/sqrt(n): equal superposition of all weight-1 labels
PureState w_state(std::size_t n);

// four qubits ordered (c1, r1, c2, r2):
// alpha|0000> + beta (xi|10> + chi|01>)_{c1 r1} (x) (xi|10> + chi|01>)_{c2 r2}
PureState cavity_state(const CavityParams& p);

PureState bell_state();                  // (|00> + |11>)/sqrt(2)
PureState ghz_state(std::size_t n);      // (|0...0> + |1...1>)/sqrt(2)
PureState cluster4_state();              // (|0000> + |1001> + |0110> - |1111>)/2
PureState ou333_state();                 // normalized antisymmetric state on 3x3x3
PureState s224_state();                  // cluster4 with the last two qubits merged: dims (2,2,4)
PureState s422_state(double theta);      // dims (4,2,2): (a|000> + b|110> + a|201> + b|311>)/sqrt(2)

// Dispatcher for CLI-facing names: bell, cluster4, ou333, s224, "ghz<N>",
// "w<N>", "s422:<theta>".
PureState named_state(const std::string& name);

} // namespace monoqt
