#include "monoqt/monogamy.hpp"

#include "monoqt/errors.hpp"
#include "monoqt/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>

namespace monoqt {

namespace {

const double kRankThreshold = 1e-10;
const double kClampBand = 1e-9;
// a qubit-measurement value counts as exact when refinement left the coarse
// grid minimum essentially unchanged (the basin was already resolved)
const double kStableGain = 1e-6;

DensityMatrix as_bipartite(DensityMatrix rho) {
    if (rho.num_parties() < 2) throw argument_error("bipartite view requires at least two parties");
    if (rho.num_parties() == 2) return rho;
    PartitionSpec p;
    p.parties.push_back({0});
    std::vector<std::size_t> rest(rho.num_parties() - 1);
    std::iota(rest.begin(), rest.end(), 1);
    p.parties.push_back(rest);
    return group_parties(rho, p);
}

double clamp_tau(double raw) { return (raw < 0.0 && raw >= -kClampBand) ? 0.0 : raw; }

void finalize(IndicatorReport& rep) {
    double sum = 0.0;
    for (double t : rep.terms) sum += t;
    rep.tau_raw = rep.joint_sef - sum;
    rep.tau = clamp_tau(rep.tau_raw);
}

MixedEofResult from_measurement(const MeasuredMinimum& mm, std::size_t measured_dim) {
    MixedEofResult out;
    out.value = mm.value;
    out.route = (measured_dim == 2) ? EofRoute::KwQubit : EofRoute::KwDim4;
    out.credit = std::max(1e-6, mm.refine_gain);
    out.quality = (measured_dim == 2 && mm.refine_gain <= kStableGain) ? BoundQuality::Exact
                                                                       : BoundQuality::UpperBound;
    return out;
}

// EOF of the tail cut focus|(parties k-1..n-1) of a pure state. Prefers the
// rank-routed reduction; when that exceeds capacity, measures the complement
// block (parties 1..k-2) directly, which never materializes the tail.
MixedEofResult tail_eof(const PureState& psi, std::size_t k, const KwOptions& opt) {
    const std::size_t n = psi.num_parties();
    if (k == n) return mixed_eof(reduced_density(psi, {0, n - 1}), opt);
    std::size_t tail_dim = 1;
    for (std::size_t i = k - 1; i < n; ++i) tail_dim *= psi.dims[i];
    if (psi.dims[0] * tail_dim <= 64) {
        std::vector<std::size_t> keep{0};
        for (std::size_t i = k - 1; i < n; ++i) keep.push_back(i);
        return mixed_eof(as_bipartite(reduced_density(psi, keep)), opt);
    }
    std::size_t b_dim = 1;
    for (std::size_t i = 1; i + 1 < k; ++i) b_dim *= psi.dims[i];
    if (b_dim == 2 || b_dim == 4) {
        std::vector<std::size_t> keep(k - 1);
        std::iota(keep.begin(), keep.end(), 0);
        const DensityMatrix rho_ab = as_bipartite(reduced_density(psi, keep));
        return from_measurement(minimize_measured_conditional_entropy(rho_ab, 1, opt), b_dim);
    }
    throw capacity_error(
        "tail cut too large: tail reduction exceeds 64 dimensions and the complement block is not "
        "measurable (its dimension is neither 2 nor 4)");
}

MonogamyScore make_score(MeasureKind measure, double joint, std::vector<double> pairwise) {
    MonogamyScore s;
    s.measure = measure;
    s.joint = joint;
    double sum = 0.0;
    for (double v : pairwise) sum += v;
    s.pairwise = std::move(pairwise);
    s.score = joint - sum;
    return s;
}

void check_c_sq_range(double v, const char* what) {
    if (!(v >= -1e-12 && v <= 1.0 + 1e-12))
        throw argument_error(std::string(what) + ": squared concurrences must lie in [0, 1]");
}

} // namespace

MixedEofResult mixed_eof(const DensityMatrix& rho, const KwOptions& kw, std::size_t roof_restarts,
                         std::uint64_t seed) {
    if (rho.num_parties() != 2)
        throw argument_error("mixed_eof: state must be bipartite (group parties first)");
    MixedEofResult out;
    if (rho.dims[0] == 2 && rho.dims[1] == 2) {
        out.value = eof_two_qubit(rho);
        out.route = EofRoute::Wootters;
        out.quality = BoundQuality::Exact;
        return out;
    }
    const EigenSystem es = herm_eig(rho.mat);
    std::size_t rank = 0;
    for (double l : es.eigenvalues) {
        if (l < -kClampBand) throw contract_error("mixed_eof: state is not positive semidefinite");
        if (l > kRankThreshold) ++rank;
    }
    if (rank == 0) throw contract_error("mixed_eof: state has numerically zero trace");
    if (rank == 1) {
        std::vector<cplx> col(rho.total_dim());
        for (std::size_t i = 0; i < col.size(); ++i) col[i] = es.eigenvectors.at(i, 0);
        PureState psi(rho.dims, std::move(col));
        PartitionSpec cut;
        cut.parties = {{0}, {1}};
        out.value = eof_pure(psi, cut);
        out.route = EofRoute::PureEntropy;
        out.quality = BoundQuality::Exact;
        return out;
    }
    if (rank <= 4) {
        // purification |Psi> = sum_i sqrt(l_i) |v_i> (x) |i> with an ancilla of
        // dimension 2 or 4; the EOF is the minimized measured conditional
        // entropy of (first party, ancilla) under ancilla measurements
        const std::size_t anc = (rank <= 2) ? 2 : 4;
        const std::size_t d = rho.total_dim();
        std::vector<cplx> amp(d * anc, cplx(0.0, 0.0));
        for (std::size_t i = 0; i < rank; ++i) {
            const double w = std::sqrt(std::max(0.0, es.eigenvalues[i]));
            for (std::size_t x = 0; x < d; ++x) amp[x * anc + i] = w * es.eigenvectors.at(x, i);
        }
        PureState purified({rho.dims[0], rho.dims[1], anc}, std::move(amp));
        const DensityMatrix rho_a_anc = reduced_density(purified, {0, 2});
        return from_measurement(minimize_measured_conditional_entropy(rho_a_anc, 1, kw), anc);
    }
    PartitionSpec cut;
    cut.parties = {{0}, {1}};
    const RoofResult rr = roof_minimize(rho, RoofCost::Eof, cut, 0, roof_restarts, seed, kw.serial);
    out.value = rr.bound;
    out.route = EofRoute::Roof;
    out.quality = BoundQuality::UpperBound;
    out.credit = std::max({1e-6, rr.last_restart_improvement, rr.restart_spread});
    return out;
}

MonogamyScore sc_score(double joint_c_sq, const std::vector<double>& pairwise_c_sq) {
    if (!std::isfinite(joint_c_sq)) throw argument_error("sc_score: joint value must be finite");
    MonogamyScore s = make_score(MeasureKind::SC, joint_c_sq, pairwise_c_sq);
    auto in_range = [](double v) { return v >= 0.0 && v <= 2.0; };
    if (!in_range(joint_c_sq)) s.out_of_range_warning = true;
    for (double v : pairwise_c_sq) {
        if (!std::isfinite(v)) throw argument_error("sc_score: pairwise values must be finite");
        if (!in_range(v)) s.out_of_range_warning = true;
    }
    return s;
}

MonogamyScore sef_score_from_c_sq(double joint_c_sq, const std::vector<double>& pairwise_c_sq) {
    check_c_sq_range(joint_c_sq, "sef_score_from_c_sq");
    const double je = eof_curve(joint_c_sq).eof;
    std::vector<double> pair_sef;
    pair_sef.reserve(pairwise_c_sq.size());
    for (double v : pairwise_c_sq) {
        check_c_sq_range(v, "sef_score_from_c_sq");
        const double e = eof_curve(v).eof;
        pair_sef.push_back(e * e);
    }
    return make_score(MeasureKind::SEF, je * je, std::move(pair_sef));
}

IndicatorReport tau_sef_k_pure(const PureState& psi, std::size_t k, const KwOptions& opt) {
    const std::size_t n = psi.num_parties();
    if (n < 3) throw argument_error("tau_sef_k_pure: state must have at least three parties");
    if (k < 3 || k > n)
        throw argument_error("tau_sef_k_pure: level k must lie in [3, number of parties]");
    IndicatorReport rep;
    rep.k = k;
    rep.method = IndicatorMethod::PureExact;
    const double joint = von_neumann_entropy(reduced_density(psi, {0}));
    rep.joint_sef = joint * joint;

    // pair cuts (focus, i) for i = 1..k-2, then the tail cut as the last item
    std::vector<MixedEofResult> parts(k - 1);
    std::vector<std::exception_ptr> errs(k - 1);
    par::run_for(k - 1, opt.serial, [&](std::size_t idx) {
        try {
            if (idx < k - 2)
                parts[idx] = mixed_eof(reduced_density(psi, {0, idx + 1}), opt);
            else
                parts[idx] = tail_eof(psi, k, opt);
        } catch (...) {
            errs[idx] = std::current_exception();
        }
    });
    for (const auto& e : errs)
        if (e) std::rethrow_exception(e);

    bool exact = true;
    for (const MixedEofResult& r : parts) {
        rep.terms.push_back(r.value * r.value);
        if (r.quality != BoundQuality::Exact) exact = false;
    }
    rep.bound_quality = exact ? BoundQuality::Exact : BoundQuality::UpperBound;
    finalize(rep);
    return rep;
}

double tau_w_state_closed_form(std::size_t n, std::size_t k) {
    if (n < 3 || k < 3 || k > n)
        throw argument_error("tau_w_state_closed_form: need n >= 3 and 3 <= k <= n");
    const double nn = static_cast<double>(n) * static_cast<double>(n);
    const double joint = eof_curve(4.0 * static_cast<double>(n - 1) / nn).eof;
    const double pair = eof_curve(4.0 / nn).eof;
    const double tail = eof_curve(4.0 * static_cast<double>(n - k + 1) / nn).eof;
    return joint * joint - static_cast<double>(k - 2) * pair * pair - tail * tail;
}

IndicatorReport tau_sef_k_mixed(const DensityMatrix& rho, std::size_t k, int type,
                                std::size_t roof_m, std::size_t roof_restarts, std::uint64_t seed,
                                const KwOptions& kw) {
    const std::size_t n = rho.num_parties();
    if (n < 3) throw argument_error("tau_sef_k_mixed: state must have at least three parties");
    if (k < 3 || k > n)
        throw argument_error("tau_sef_k_mixed: level k must lie in [3, number of parties]");
    if (type != 1 && type != 2) throw argument_error("tau_sef_k_mixed: type must be 1 or 2");

    IndicatorReport rep;
    rep.k = k;
    if (type == 2) {
        rep.method = IndicatorMethod::MixedType2;
        // items: joint, pairs 1..k-2, tail
        std::vector<MixedEofResult> parts(k);
        std::vector<std::exception_ptr> errs(k);
        par::run_for(k, kw.serial, [&](std::size_t idx) {
            try {
                if (idx == 0) {
                    parts[0] = mixed_eof(as_bipartite(rho), kw, roof_restarts, seed);
                } else if (idx < k - 1) {
                    parts[idx] = mixed_eof(partial_trace(rho, {0, idx}), kw, roof_restarts, seed);
                } else {
                    std::vector<std::size_t> keep{0};
                    for (std::size_t i = k - 1; i < n; ++i) keep.push_back(i);
                    parts[idx] =
                        mixed_eof(as_bipartite(partial_trace(rho, keep)), kw, roof_restarts, seed);
                }
            } catch (...) {
                errs[idx] = std::current_exception();
            }
        });
        for (const auto& e : errs)
            if (e) std::rethrow_exception(e);

        rep.joint_sef = parts[0].value * parts[0].value;
        bool closed_form = parts[0].route == EofRoute::Wootters || parts[0].route == EofRoute::PureEntropy;
        for (std::size_t idx = 1; idx < k; ++idx) {
            rep.terms.push_back(parts[idx].value * parts[idx].value);
            if (parts[idx].route != EofRoute::Wootters && parts[idx].route != EofRoute::PureEntropy)
                closed_form = false;
        }
        rep.bound_quality = closed_form ? BoundQuality::Exact : BoundQuality::UpperBound;
        finalize(rep);
        return rep;
    }

    // type 1: convex roof of the pure-state indicator
    rep.method = IndicatorMethod::MixedType1Roof;
    rep.bound_quality = BoundQuality::UpperBound;
    KwOptions inner = kw;
    inner.serial = true; // the roof already parallelizes over restarts
    const auto cost = [&](const PureState& comp) { return tau_sef_k_pure(comp, k, inner).tau_raw; };
    const RoofResult rr = roof_minimize_custom(rho, cost, roof_m, roof_restarts, seed, kw.serial);

    rep.joint_sef = 0.0;
    rep.terms.assign(k - 1, 0.0);
    for (std::size_t i = 0; i < rr.decomposition.components.size(); ++i) {
        const IndicatorReport b = tau_sef_k_pure(rr.decomposition.components[i], k, inner);
        const double w = rr.decomposition.weights[i];
        rep.joint_sef += w * b.joint_sef;
        for (std::size_t j = 0; j < rep.terms.size(); ++j) rep.terms[j] += w * b.terms[j];
    }
    finalize(rep);
    return rep;
}

CavityIndicatorDecomposition cavity_indicator_decomposition(const CavityParams& p,
                                                            const std::string& partition_name) {
    validate_cavity_params(p);
    const PureState psi = cavity_state(p); // parties (c1, r1, c2, r2) = 0, 1, 2, 3
    const CavityClosedForms cf = cavity_closed_forms(p);
    const std::size_t c1 = 0, r1 = 1, c2 = 2, r2 = 3;

    auto esq = [](double e) { return e * e; };
    auto pair_sq = [&](std::size_t x, std::size_t y) {
        return esq(eof_two_qubit(reduced_density(psi, {x, y})));
    };
    auto joint_sq = [&](std::size_t focus) {
        return esq(von_neumann_entropy(reduced_density(psi, {focus})));
    };

    // j: joint cut; pa: pair with the second party; pb, pc: pairs with the two
    // tail members; tail: squared EOF of the closed-form tail cut
    double j, pa, pb, pc, tail;
    if (partition_name == "c1_first") { // c1 | c2 | (r1 r2)
        j = joint_sq(c1);
        pa = pair_sq(c1, c2);
        pb = pair_sq(c1, r1);
        pc = pair_sq(c1, r2);
        tail = esq(cf.eof_c1_r1r2);
    } else if (partition_name == "c1_r2_first") { // c1 | r2 | (c2 r1)
        j = joint_sq(c1);
        pa = pair_sq(c1, r2);
        pb = pair_sq(c1, c2);
        pc = pair_sq(c1, r1);
        tail = esq(cf.eof_c1_c2r1);
    } else if (partition_name == "r1_first") { // r1 | r2 | (c1 c2)
        j = joint_sq(r1);
        pa = pair_sq(r1, r2);
        pb = pair_sq(r1, c1);
        pc = pair_sq(r1, c2);
        tail = esq(cf.eof_r1_c1c2);
    } else if (partition_name == "r1_c2_first") { // r1 | c2 | (r2 c1)
        j = joint_sq(r1);
        pa = pair_sq(r1, c2);
        pb = pair_sq(r1, r2);
        pc = pair_sq(r1, c1);
        tail = esq(cf.eof_r1_r2c1);
    } else {
        throw argument_error("cavity_indicator_decomposition: unknown partition '" + partition_name +
                             "' (expected c1_first, c1_r2_first, r1_first, r1_c2_first)");
    }

    CavityIndicatorDecomposition out;
    out.partition = partition_name;
    out.tau4 = j - pa - pb - pc;        // independent of the level-3 split below
    out.tau3_pure = j - pa - tail;
    out.tau3_mixed = tail - pb - pc;
    return out;
}

std::vector<MonogamyScore> hierarchy_chain(const PureState& psi, const KwOptions& opt) {
    const std::size_t n = psi.num_parties();
    if (n < 3) throw argument_error("hierarchy_chain: state must have at least three parties");
    const double joint = von_neumann_entropy(reduced_density(psi, {0}));
    const double joint_sq = joint * joint;

    // squared pair EOFs for partners 1..n-2, and tail cuts for k = 3..n
    std::vector<double> pair_sq(n - 2, 0.0);
    std::vector<double> tail_sq(n - 2, 0.0);
    std::vector<std::exception_ptr> errs(2 * (n - 2));
    par::run_for(2 * (n - 2), opt.serial, [&](std::size_t idx) {
        try {
            if (idx < n - 2) {
                const MixedEofResult r = mixed_eof(reduced_density(psi, {0, idx + 1}), opt);
                pair_sq[idx] = r.value * r.value;
            } else {
                const std::size_t k = idx - (n - 2) + 3;
                const MixedEofResult r = tail_eof(psi, k, opt);
                tail_sq[k - 3] = r.value * r.value;
            }
        } catch (...) {
            errs[idx] = std::current_exception();
        }
    });
    for (const auto& e : errs)
        if (e) std::rethrow_exception(e);

    std::vector<MonogamyScore> chain;
    chain.reserve(n - 2);
    for (std::size_t k = 3; k <= n; ++k) {
        std::vector<double> subtracted(pair_sq.begin(), pair_sq.begin() + (k - 2));
        subtracted.push_back(tail_sq[k - 3]);
        chain.push_back(make_score(MeasureKind::SEF, joint_sq, std::move(subtracted)));
    }
    return chain;
}

SefScoreLedger sef_score_ledger(double joint_c_sq, const std::vector<double>& pairwise_c_sq) {
    if (!(joint_c_sq > 0.0))
        throw argument_error(
            "sef_score_ledger: joint squared concurrence must be positive (the ratio term is "
            "undefined at zero)");
    check_c_sq_range(joint_c_sq, "sef_score_ledger");
    SefScoreLedger led;
    const double je = eof_curve(joint_c_sq).eof;
    led.k1 = je * je / joint_c_sq;
    double sum_c = 0.0;
    for (double v : pairwise_c_sq) {
        check_c_sq_range(v, "sef_score_ledger");
        const double vv = std::max(v, 0.0);
        double ki = 0.0;
        if (vv > 0.0) {
            const double e = eof_curve(vv).eof;
            ki = e * e / vv;
        }
        led.ki.push_back(ki);
        led.gamma1 += (led.k1 - ki) * vv;
        sum_c += vv;
    }
    led.gamma2 = led.k1 * (joint_c_sq - sum_c);
    led.sef_score = led.gamma1 + led.gamma2;
    return led;
}

Scores422 analysis_422(double theta) {
    const double c = std::cos(theta);
    const double a2 = c * c;
    Scores422 s;
    s.m_sef = 2.0 * binary_entropy(a2);
    s.m_sc = -2.0 * a2 * (1.0 - a2);
    return s;
}

CounterexampleReport counterexample_report(const std::string& name, const KwOptions& opt) {
    CounterexampleReport rep;
    rep.name = name;
    if (name == "ou333") {
        const PureState psi = ou333_state();
        const double joint_eof = von_neumann_entropy(reduced_density(psi, {0}));
        const double joint_csq = pure_concurrence_sq(psi, PartitionSpec::parse("0|1,2"));
        PartitionSpec cut;
        cut.parties = {{0}, {1}};
        const DensityMatrix rho_ab = reduced_density(psi, {0, 1});
        const DensityMatrix rho_ac = reduced_density(psi, {0, 2});
        // every pure state in the antisymmetric support has marginal spectrum
        // (1/2, 1/2, 0), so the eigen-ensemble start is already roof-optimal
        const double eof_ab = roof_minimize(rho_ab, RoofCost::Eof, cut, 0, 4, 1, opt.serial).bound;
        const double eof_ac = roof_minimize(rho_ac, RoofCost::Eof, cut, 0, 4, 2, opt.serial).bound;
        const double csq_ab =
            roof_minimize(rho_ab, RoofCost::ConcurrenceSq, cut, 0, 4, 3, opt.serial).bound;
        const double csq_ac =
            roof_minimize(rho_ac, RoofCost::ConcurrenceSq, cut, 0, 4, 4, opt.serial).bound;
        rep.sef = make_score(MeasureKind::SEF, joint_eof * joint_eof,
                             {eof_ab * eof_ab, eof_ac * eof_ac});
        rep.sc = sc_score(joint_csq, {csq_ab, csq_ac});
        rep.details = {{"joint_eof", joint_eof},   {"eof_pair_01", eof_ab},
                       {"eof_pair_02", eof_ac},    {"joint_c_sq", joint_csq},
                       {"c_sq_pair_01", csq_ab},   {"c_sq_pair_02", csq_ac}};
    } else if (name == "s224") {
        const IndicatorReport t = tau_sef_k_pure(s224_state(), 3, opt);
        rep.details = {{"tail_eof", std::sqrt(std::max(0.0, t.terms.back()))},
                       {"pair_eof", std::sqrt(std::max(0.0, t.terms.front()))}};
        rep.tau = t;
    } else if (name == "cluster4") {
        rep.tau = tau_sef_k_pure(cluster4_state(), 4, opt);
    } else {
        throw argument_error("counterexample_report: unknown name '" + name +
                             "' (expected ou333, s224, cluster4)");
    }
    return rep;
}

} // namespace monoqt
