#pragma once

#include "monoqt/discord.hpp"
#include "monoqt/measures.hpp"
#include "monoqt/roof.hpp"
#include "monoqt/state.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace monoqt {

// Throughout this module the focus party is subsystem 0; callers reorder or
// group subsystems beforehand (permute_subsystems / group_parties).

enum class MeasureKind { SEF, SC }; // squared EOF / squared concurrence
enum class BoundQuality { Exact, UpperBound };

// How a bipartite EOF value was obtained.
enum class EofRoute {
    PureEntropy, // rank-1 state: marginal entropy
    Wootters,    // two-qubit closed form
    KwQubit,     // Koashi-Winter with a qubit measured party
    KwDim4,      // Koashi-Winter with a dimension-4 measured party
    Roof         // convex-roof optimizer
};

// joint - sum(pairwise) bookkeeping for one monogamy inequality. Values are in
// the units of `measure` (squared EOF or squared concurrence); `score` is kept
// raw so it is always recomputable from the fields.
struct MonogamyScore {
    MeasureKind measure = MeasureKind::SEF;
    double joint = 0.0;
    std::vector<double> pairwise;
    double score = 0.0;                // joint - sum(pairwise); negative = polygamous
    bool out_of_range_warning = false; // inputs outside the physical range (accepted)
};

// Bipartite EOF with automatic method routing by dimension and rank:
// two-qubit -> Wootters; rank 1 -> marginal entropy; rank <= 2 -> Koashi-Winter
// on a purification with a qubit ancilla; rank <= 4 -> same with a dimension-4
// ancilla; otherwise the convex-roof optimizer. `credit` is an uncertainty
// allowance for upper-bound routes (refinement gain for measurements, restart
// diagnostics for the roof), used by campaign margin triage.
struct MixedEofResult {
    double value = 0.0;
    EofRoute route = EofRoute::Wootters;
    BoundQuality quality = BoundQuality::Exact;
    double credit = 0.0;
};

MixedEofResult mixed_eof(const DensityMatrix& rho_bipartite, const KwOptions& kw = {},
                         std::size_t roof_restarts = 16, std::uint64_t seed = 1);

enum class IndicatorMethod { PureExact, MixedType1Roof, MixedType2 };

// Residual SEF at partition level k: joint_sef minus the subtracted squared
// EOFs (pair terms, then the tail term). tau_raw is the plain difference;
// tau clamps raw values in [-1e-9, 0) to 0 so tiny negative roundoff does not
// read as polygamy.
struct IndicatorReport {
    std::size_t k = 0;
    double tau = 0.0;
    double tau_raw = 0.0;
    double joint_sef = 0.0;     // squared EOF across focus | rest
    std::vector<double> terms;  // subtracted squared EOFs: pairs, then tail
    IndicatorMethod method = IndicatorMethod::PureExact;
    BoundQuality bound_quality = BoundQuality::Exact;
};

// Squared-concurrence monogamy score: joint_c_sq - sum(pairwise_c_sq).
// Hypothetical inputs outside [0, 2] are accepted with a warning flag.
MonogamyScore sc_score(double joint_c_sq, const std::vector<double>& pairwise_c_sq);

// Squared-EOF monogamy score from squared concurrences: maps every C^2 through
// the two-qubit EOF curve, squares, and differences. Inputs must lie in [0, 1].
MonogamyScore sef_score_from_c_sq(double joint_c_sq, const std::vector<double>& pairwise_c_sq);

// Residual SEF indicator of a pure state at level k (3 <= k <= n): squared EOF
// of focus|rest minus the squared EOFs of the pairs (focus, party i) for
// i = 2..k-1 and of the tail cut focus|(parties k..n). The joint term is the
// marginal entropy (exact); pair and tail terms route through mixed_eof, or
// through a measurement on the complement block when the tail reduction
// exceeds capacity. bound_quality is Exact only when every term came from a
// closed form or a qubit-measurement optimum whose coarse grid was already
// stable under refinement.
IndicatorReport tau_sef_k_pure(const PureState& psi, std::size_t k, const KwOptions& opt = {});

// Same indicator for the n-qubit W state from its permutation-symmetric
// squared concurrences: joint 4(n-1)/n^2, each pair 4/n^2, tail 4(n-k+1)/n^2.
double tau_w_state_closed_form(std::size_t n, std::size_t k);

// Mixed-state residual SEF indicators at level k.
//   type 2: squared EOFs of focus|rest, the pairs, and the tail of rho itself,
//           each via mixed_eof; Exact only if every term is closed-form.
//   type 1: convex-roof of the pure-state indicator: minimizes the ensemble
//           average of tau_sef_k_pure over decompositions of rho (upper bound).
IndicatorReport tau_sef_k_mixed(const DensityMatrix& rho, std::size_t k, int type,
                                std::size_t roof_m = 0, std::size_t roof_restarts = 16,
                                std::uint64_t seed = 1, const KwOptions& kw = {});

// Level-4 indicator of the cavity-reservoir state split into the pure level-3
// indicator plus the mixed level-3 indicator of the traced three-party state,
// for each supported peel order. The identity tau4 = tau3_pure + tau3_mixed is
// algebraic (the shared tail term cancels). All terms are closed-form:
// marginal entropies, Wootters pairs, and the eta-parameter EOFs.
struct CavityIndicatorDecomposition {
    std::string partition;
    double tau4 = 0.0;
    double tau3_pure = 0.0;
    double tau3_mixed = 0.0;
};

// partition_name: c1_first (c1|c2|(r1 r2)), c1_r2_first (c1|r2|(c2 r1)),
// r1_first (r1|r2|(c1 c2)), r1_c2_first (r1|c2|(r2 c1)).
CavityIndicatorDecomposition cavity_indicator_decomposition(const CavityParams& p,
                                                            const std::string& partition_name);

// Monogamy scores of a pure state for every level k = 3..n: squared EOF of
// focus|rest minus pairs 2..k-1 minus the tail cut. Nondecreasing in k and
// nonnegative (within tolerance) for qubit states.
std::vector<MonogamyScore> hierarchy_chain(const PureState& psi, const KwOptions& opt = {});

// Decomposition of the SEF score into ratio terms: k1 = E_f^2(joint)/joint,
// ki likewise per pair (0 at zero by continuity), gamma1 = sum (k1-ki) C_i^2,
// gamma2 = k1 * (SC score). sef_score = gamma1 + gamma2 equals the squared-EOF
// score exactly; when the SC score is nonnegative both gammas are nonnegative.
struct SefScoreLedger {
    double k1 = 0.0;
    std::vector<double> ki;
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    double sef_score = 0.0;
};

SefScoreLedger sef_score_ledger(double joint_c_sq, const std::vector<double>& pairwise_c_sq);

// Closed-form monogamy scores of the 4x2x2 family state s422(theta) across
// A|B|C with focus A: m_sef = 2 h(cos^2 theta) >= 0 (monogamous),
// m_sc = -2 cos^2 theta sin^2 theta <= 0 (polygamous).
struct Scores422 {
    double m_sef = 0.0;
    double m_sc = 0.0;
};

Scores422 analysis_422(double theta);

// Worked analyses of the named states whose scores have closed-form values:
//   ou333    -> SEF score (log2 3)^2 - 2 and SC score -2/3 across A|BC
//   s224     -> level-3 indicator 0 with tail EOF 1
//   cluster4 -> level-4 indicator 1
struct CounterexampleReport {
    std::string name;
    std::optional<MonogamyScore> sef;
    std::optional<MonogamyScore> sc;
    std::optional<IndicatorReport> tau;
    std::vector<std::pair<std::string, double>> details;
};

CounterexampleReport counterexample_report(const std::string& name, const KwOptions& opt = {});

} // namespace monoqt
