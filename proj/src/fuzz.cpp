#include "monoqt/fuzz.hpp"

#include "monoqt/errors.hpp"
#include "monoqt/parallel.hpp"
#include "monoqt/rng.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>

namespace monoqt {

namespace {

struct SampleMargins {
    double optimistic = 0.0;
    double conservative = 0.0;
};

DensityMatrix bipartite_group(const DensityMatrix& rho) {
    if (rho.num_parties() == 2) return rho;
    PartitionSpec p;
    p.parties.push_back({0});
    std::vector<std::size_t> rest(rho.num_parties() - 1);
    std::iota(rest.begin(), rest.end(), 1);
    p.parties.push_back(rest);
    return group_parties(rho, p);
}

// credited value of a subtracted squared-EOF term: the squared lower estimate
double credited_sq(double value, double credit) {
    const double lo = std::max(0.0, value - credit);
    return lo * lo;
}

// joint squared EOF (marginal entropy, exact) minus all pair terms via
// mixed_eof. Serves sef_nqubit on pure samples (all pairs Wootters, exact) and
// the three-or-more-party conjecture modes.
SampleMargins sef_pairs_margin(const PureState& psi, const KwOptions& kw) {
    const std::size_t n = psi.num_parties();
    const double j = von_neumann_entropy(reduced_density(psi, {0}));
    const double j2 = j * j;
    double sum = 0.0, sum_credited = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        const MixedEofResult r = mixed_eof(reduced_density(psi, {0, i}), kw);
        sum += r.value * r.value;
        const double credit = (r.route == EofRoute::Wootters || r.route == EofRoute::PureEntropy)
                                  ? 0.0
                                  : r.credit;
        sum_credited += credited_sq(r.value, credit);
    }
    SampleMargins m;
    m.optimistic = j2 - sum_credited;
    m.conservative = j2 - sum;
    return m;
}

SampleMargins sef_nqubit_mixed_margin(const DensityMatrix& rho, const KwOptions& kw) {
    const std::size_t n = rho.num_parties();
    const MixedEofResult jr = mixed_eof(bipartite_group(rho), kw);
    double sum = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        const double e = eof_two_qubit(partial_trace(rho, {0, i}));
        sum += e * e;
    }
    SampleMargins m;
    m.optimistic = jr.value * jr.value - sum; // joint is an upper bound
    const double jcredit =
        (jr.route == EofRoute::Wootters || jr.route == EofRoute::PureEntropy) ? 0.0 : jr.credit;
    m.conservative = credited_sq(jr.value, jcredit) - sum;
    return m;
}

// minimum level-k margin over k = 3..n for an n-qubit pure state
SampleMargins sef_hierarchical_margin(const PureState& psi, const KwOptions& kw) {
    const std::size_t n = psi.num_parties();
    const double j = von_neumann_entropy(reduced_density(psi, {0}));
    const double j2 = j * j;
    std::vector<double> pair_sq(n - 2);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double e = eof_two_qubit(reduced_density(psi, {0, i}));
        pair_sq[i - 1] = e * e;
    }
    SampleMargins m;
    m.optimistic = m.conservative = std::numeric_limits<double>::infinity();
    for (std::size_t k = 3; k <= n; ++k) {
        double tail_value, tail_credit;
        if (k == n) {
            tail_value = eof_two_qubit(reduced_density(psi, {0, n - 1}));
            tail_credit = 0.0;
        } else {
            std::vector<std::size_t> keep{0};
            for (std::size_t i = k - 1; i < n; ++i) keep.push_back(i);
            const MixedEofResult r = mixed_eof(bipartite_group(reduced_density(psi, keep)), kw);
            tail_value = r.value;
            tail_credit =
                (r.route == EofRoute::Wootters || r.route == EofRoute::PureEntropy) ? 0.0 : r.credit;
        }
        double pairs = 0.0;
        for (std::size_t i = 0; i + 2 < k; ++i) pairs += pair_sq[i];
        m.optimistic = std::min(m.optimistic, j2 - pairs - credited_sq(tail_value, tail_credit));
        m.conservative = std::min(m.conservative, j2 - pairs - tail_value * tail_value);
    }
    return m;
}

SampleMargins sc_nqubit_margin(const PureState& psi, std::uint64_t sample_seed,
                               const KwOptions& kw) {
    const std::size_t n = psi.num_parties();
    PartitionSpec cut;
    cut.parties.push_back({0});
    std::vector<std::size_t> rest(n - 1);
    std::iota(rest.begin(), rest.end(), 1);
    cut.parties.push_back(rest);
    const double joint = pure_concurrence_sq(psi, cut);

    PartitionSpec pair_cut;
    pair_cut.parties = {{0}, {1}};
    double sum = 0.0, sum_credited = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        const DensityMatrix rho = reduced_density(psi, {0, i});
        if (rho.dims[0] == 2 && rho.dims[1] == 2) {
            const double c = concurrence_two_qubit(rho);
            sum += c * c;
            sum_credited += c * c;
        } else {
            const RoofResult rr = roof_minimize(rho, RoofCost::ConcurrenceSq, pair_cut, 0, 8,
                                                mix_seed(sample_seed, 101 + i), kw.serial);
            const double credit = std::max({1e-6, rr.last_restart_improvement, rr.restart_spread});
            sum += rr.bound;
            sum_credited += std::max(0.0, rr.bound - credit);
        }
    }
    SampleMargins m;
    m.optimistic = joint - sum_credited;
    m.conservative = joint - sum;
    return m;
}

bool all_qubits(const std::vector<std::size_t>& dims) {
    return std::all_of(dims.begin(), dims.end(), [](std::size_t d) { return d == 2; });
}

void validate_config(const CampaignConfig& c) {
    if (c.samples < 1) throw argument_error("campaign: samples must be at least 1");
    if (c.dims.size() < 3)
        throw unsupported_error("campaign: inequalities need at least three parties");
    unsigned long long total = 1;
    for (std::size_t d : c.dims) {
        if (d < 2) throw argument_error("campaign: subsystem dimensions must be at least 2");
        total *= d;
        if (total > 64) throw capacity_error("campaign: total dimension exceeds 64");
    }
    const std::string& q = c.inequality;
    if (q != "sef_nqubit" && q != "sef_hierarchical" && q != "sc_nqubit" && q != "sef_2dd" &&
        q != "sef_ddd")
        throw unsupported_error("campaign: unknown inequality '" + q +
                                "' (expected sef_nqubit, sef_hierarchical, sc_nqubit, sef_2dd, "
                                "sef_ddd)");
    if ((q == "sef_nqubit" || q == "sef_hierarchical") && !all_qubits(c.dims))
        throw unsupported_error("campaign: " + q + " requires qubit subsystems");
    if (c.mixed_rank > 0 && q != "sef_nqubit")
        throw unsupported_error("campaign: mixed sampling is only supported for sef_nqubit");
    if (q == "sef_2dd" && c.dims[0] != 2)
        throw unsupported_error("campaign: sef_2dd requires a qubit focus party");
}

MarginHistogram build_histogram(const std::vector<double>& margins) {
    MarginHistogram h;
    h.counts.assign(40, 0);
    const double width = (h.hi - h.lo) / static_cast<double>(h.counts.size());
    for (double m : margins) {
        if (m < h.lo) {
            ++h.underflow;
        } else if (m >= h.hi) {
            ++h.overflow;
        } else {
            std::size_t b = static_cast<std::size_t>((m - h.lo) / width);
            if (b >= h.counts.size()) b = h.counts.size() - 1;
            ++h.counts[b];
        }
    }
    return h;
}

PureState make_sample_pure(const CampaignConfig& cfg, std::size_t idx, std::uint64_t seed) {
    if (idx == 0 && !cfg.inject.empty()) {
        PureState s = named_state(cfg.inject);
        if (s.dims != cfg.dims)
            throw argument_error("campaign: injected state dims do not match campaign dims");
        return s;
    }
    return haar_pure(cfg.dims, seed);
}

DensityMatrix make_sample_mixed(const CampaignConfig& cfg, std::size_t idx, std::uint64_t seed) {
    if (idx == 0 && !cfg.inject.empty()) {
        PureState s = named_state(cfg.inject);
        if (s.dims != cfg.dims)
            throw argument_error("campaign: injected state dims do not match campaign dims");
        return density(s);
    }
    return random_mixed(cfg.dims, cfg.mixed_rank, seed);
}

} // namespace

PureState haar_pure(const std::vector<std::size_t>& dims, std::uint64_t seed) {
    if (dims.empty()) throw argument_error("haar_pure: dims must be nonempty");
    unsigned long long total = 1;
    for (std::size_t d : dims) {
        if (d < 1) throw argument_error("haar_pure: subsystem dimensions must be at least 1");
        total *= d;
        if (total > (1ull << 20)) throw capacity_error("haar_pure: state exceeds 2^20 amplitudes");
    }
    SplitMix64 rng(seed);
    std::vector<cplx> amp(static_cast<std::size_t>(total));
    double norm2 = 0.0;
    for (cplx& a : amp) {
        a = rng.complex_normal();
        norm2 += std::norm(a);
    }
    if (norm2 <= 0.0) throw contract_error("haar_pure: degenerate zero draw");
    const double inv = 1.0 / std::sqrt(norm2);
    for (cplx& a : amp) a *= inv;
    return PureState(dims, std::move(amp));
}

DensityMatrix random_mixed(const std::vector<std::size_t>& dims, std::size_t rank,
                           std::uint64_t seed) {
    if (rank < 1) throw argument_error("random_mixed: rank must be at least 1");
    unsigned long long total = 1;
    for (std::size_t d : dims) {
        total *= d;
        if (total > 64)
            throw capacity_error("random_mixed: total dimension exceeds the 64-dimension cap");
    }
    std::vector<std::size_t> ext = dims;
    ext.push_back(rank);
    const PureState psi = haar_pure(ext, seed);
    std::vector<std::size_t> keep(dims.size());
    std::iota(keep.begin(), keep.end(), 0);
    return reduced_density(psi, keep);
}

CampaignReport run_campaign(const CampaignConfig& config) {
    validate_config(config);
    CampaignReport rep;
    rep.config = config;
    rep.evidence_only = config.inequality == "sef_2dd" || config.inequality == "sef_ddd" ||
                        (config.inequality == "sc_nqubit" && !all_qubits(config.dims));
    const bool mixed = config.mixed_rank > 0;

    KwOptions kw = KwOptions::light();
    kw.serial = config.serial;

    rep.margins.assign(config.samples, 0.0);
    rep.margins_conservative.assign(config.samples, 0.0);
    std::vector<std::exception_ptr> errs(config.samples);
    par::run_for(config.samples, config.serial, [&](std::size_t idx) {
        try {
            const std::uint64_t s = mix_seed(config.seed, idx);
            SampleMargins m;
            if (mixed) {
                m = sef_nqubit_mixed_margin(make_sample_mixed(config, idx, s), kw);
            } else {
                const PureState psi = make_sample_pure(config, idx, s);
                if (config.inequality == "sef_hierarchical")
                    m = sef_hierarchical_margin(psi, kw);
                else if (config.inequality == "sc_nqubit")
                    m = sc_nqubit_margin(psi, s, kw);
                else // sef_nqubit, sef_2dd, sef_ddd share the pairs evaluator
                    m = sef_pairs_margin(psi, kw);
            }
            rep.margins[idx] = m.optimistic;
            rep.margins_conservative[idx] = m.conservative;
        } catch (...) {
            errs[idx] = std::current_exception();
        }
    });
    for (const auto& e : errs)
        if (e) std::rethrow_exception(e);

    std::size_t argmin = 0;
    for (std::size_t i = 1; i < config.samples; ++i)
        if (rep.margins[i] < rep.margins[argmin]) argmin = i;
    rep.argmin_index = argmin;
    rep.argmin_seed = mix_seed(config.seed, argmin);
    rep.argmin_injected = (argmin == 0 && !config.inject.empty());
    rep.min_margin = rep.margins[argmin];
    rep.min_margin_conservative =
        *std::min_element(rep.margins_conservative.begin(), rep.margins_conservative.end());
    rep.violations = static_cast<std::size_t>(
        std::count_if(rep.margins.begin(), rep.margins.end(),
                      [&](double m) { return m < -config.tolerance; }));
    rep.histogram = build_histogram(rep.margins);
    rep.argmin_is_mixed = mixed;
    if (mixed)
        rep.argmin_mixed = make_sample_mixed(config, argmin, rep.argmin_seed);
    else
        rep.argmin_pure = make_sample_pure(config, argmin, rep.argmin_seed);
    return rep;
}

} // namespace monoqt
