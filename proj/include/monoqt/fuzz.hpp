#pragma once

#include "monoqt/monogamy.hpp"
#include "monoqt/state.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace monoqt {

// Haar-random pure state: i.i.d. complex standard normal amplitudes,
// normalized. Deterministic per seed.
PureState haar_pure(const std::vector<std::size_t>& dims, std::uint64_t seed);

// Partial trace of a Haar pure state on dims (x) rank-dimensional ancilla.
DensityMatrix random_mixed(const std::vector<std::size_t>& dims, std::size_t rank,
                           std::uint64_t seed);

// Randomized inequality campaign over sampled states.
//
// inequality:
//   sef_nqubit      squared-EOF monogamy of focus|rest vs all pairs, qubits
//                   (pure samples, or mixed via mixed_rank)
//   sef_hierarchical minimum level-k squared-EOF margin over k = 3..n, qubits
//   sc_nqubit       squared-concurrence monogamy at k = n (any dims; evidence
//                   only beyond qubits)
//   sef_2dd         squared-EOF monogamy on three parties with a qubit focus
//                   (evidence only)
//   sef_ddd         squared-EOF monogamy on three parties of any dimension
//                   (evidence only)
//
// inject (optional) replaces sample 0 with a named state of matching dims.
struct CampaignConfig {
    std::vector<std::size_t> dims;
    std::size_t samples = 1;
    std::uint64_t seed = 1;
    std::size_t mixed_rank = 0; // 0 = pure samples
    std::string inequality;
    double tolerance = 1e-9;
    std::string inject;
    bool serial = false;
};

struct MarginHistogram {
    double lo = -1.0;
    double hi = 1.0;
    std::vector<std::size_t> counts; // uniform bins over [lo, hi); edge at 0
    std::size_t underflow = 0;
    std::size_t overflow = 0;
};

// Margins bracket the true value: conservative <= true <= optimistic. The
// optimistic margin credits upper-bound terms with their uncertainty
// allowance; a violation is recorded only when even the optimistic margin is
// below -tolerance, so optimizer slack can never fabricate one.
struct CampaignReport {
    CampaignConfig config;
    double min_margin = 0.0;              // minimum optimistic margin
    double min_margin_conservative = 0.0; // minimum conservative margin
    std::size_t argmin_index = 0;
    std::uint64_t argmin_seed = 0; // per-sample seed; regenerates the state
    bool argmin_injected = false;
    std::size_t violations = 0;
    bool evidence_only = false; // conjecture probing, not a proven relation
    MarginHistogram histogram;  // of the optimistic margins
    std::vector<double> margins;              // optimistic, per sample
    std::vector<double> margins_conservative; // per sample
    bool argmin_is_mixed = false;
    PureState argmin_pure;
    DensityMatrix argmin_mixed;
};

CampaignReport run_campaign(const CampaignConfig& config);

} // namespace monoqt
