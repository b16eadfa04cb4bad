#include "monoqt/roof.hpp"

#include "monoqt/errors.hpp"
#include "monoqt/parallel.hpp"
#include "monoqt/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace monoqt {

namespace {

constexpr double kRankThreshold = 1e-10;
constexpr std::size_t kMaxComponents = 256;
constexpr std::size_t kMaxProposals = 20000;
constexpr std::size_t kStopRejections = 500;
constexpr std::size_t kAnnealEvery = 50;

struct EigenEnsemble {
    std::size_t dim = 0;
    std::size_t rank = 0;
    // columns scaled by sqrt(eigenvalue): component i = sum_j u[i][j] * col j
    std::vector<std::vector<cplx>> scaled_cols;
};

EigenEnsemble eigen_ensemble(const DensityMatrix& rho) {
    EigenSystem es = herm_eig(rho.mat);
    EigenEnsemble out;
    out.dim = rho.mat.rows;
    for (std::size_t j = 0; j < es.eigenvalues.size(); ++j) {
        const double lam = es.eigenvalues[j];
        if (lam < -1e-9) throw contract_error("roof: density matrix has eigenvalue below -1e-9");
        if (lam <= kRankThreshold) continue;
        std::vector<cplx> col(out.dim);
        const double s = std::sqrt(lam);
        for (std::size_t i = 0; i < out.dim; ++i) col[i] = s * es.eigenvectors.at(i, j);
        out.scaled_cols.push_back(std::move(col));
    }
    out.rank = out.scaled_cols.size();
    return out;
}

// weighted cost of one unnormalized component: w * cost(psi / sqrt(w)), w = |psi|^2
double weighted_cost(const std::vector<cplx>& tilde, const std::vector<std::size_t>& dims,
                     const std::function<double(const PureState&)>& cost) {
    double w = 0.0;
    for (const cplx& a : tilde) w += std::norm(a);
    if (w < 1e-24) return 0.0;
    const double inv = 1.0 / std::sqrt(w);
    std::vector<cplx> normalized(tilde.size());
    for (std::size_t i = 0; i < tilde.size(); ++i) normalized[i] = tilde[i] * inv;
    return w * cost(PureState(dims, std::move(normalized)));
}

struct RestartOutcome {
    double bound = 0.0;
    std::vector<std::vector<cplx>> components; // unnormalized
};

RestartOutcome run_restart(const EigenEnsemble& ens, const std::vector<std::size_t>& dims,
                           const std::function<double(const PureState&)>& cost, std::size_t m,
                           std::uint64_t seed) {
    SplitMix64 rng(seed);
    const std::size_t r = ens.rank;

    // random isometry start: m x r Gaussian, orthonormalized columns
    std::vector<std::vector<cplx>> u(m, std::vector<cplx>(r));
    for (auto& row : u)
        for (auto& v : row) v = rng.complex_normal();
    for (std::size_t j = 0; j < r; ++j) { // modified Gram-Schmidt over columns
        for (std::size_t p = 0; p < j; ++p) {
            cplx dot = 0.0;
            for (std::size_t i = 0; i < m; ++i) dot += std::conj(u[i][p]) * u[i][j];
            for (std::size_t i = 0; i < m; ++i) u[i][j] -= dot * u[i][p];
        }
        double nrm = 0.0;
        for (std::size_t i = 0; i < m; ++i) nrm += std::norm(u[i][j]);
        nrm = std::sqrt(nrm);
        if (nrm < 1e-12) { // degenerate draw; replace with a unit vector
            for (std::size_t i = 0; i < m; ++i) u[i][j] = (i == j % m) ? 1.0 : 0.0;
            nrm = 1.0;
        }
        for (std::size_t i = 0; i < m; ++i) u[i][j] /= nrm;
    }

    std::vector<std::vector<cplx>> comp(m, std::vector<cplx>(ens.dim, cplx(0.0, 0.0)));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < r; ++j) {
            const cplx uij = u[i][j];
            if (uij == cplx(0.0, 0.0)) continue;
            for (std::size_t x = 0; x < ens.dim; ++x) comp[i][x] += uij * ens.scaled_cols[j][x];
        }

    std::vector<double> wc(m);
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        wc[i] = weighted_cost(comp[i], dims, cost);
        total += wc[i];
    }

    double sigma = 0.6;
    std::size_t consecutive_rejections = 0;
    std::vector<cplx> cand_i(ens.dim), cand_k(ens.dim);
    for (std::size_t proposal = 0; proposal < kMaxProposals; ++proposal) {
        if (consecutive_rejections >= kStopRejections) break;
        const std::size_t i = static_cast<std::size_t>(rng.next_u64() % m);
        const std::size_t k = (i + 1 + static_cast<std::size_t>(rng.next_u64() % (m - 1))) % m;
        const double theta = sigma * rng.normal();
        const double phi = 6.28318530717958647692 * rng.uniform();
        const double c = std::cos(theta), s = std::sin(theta);
        const cplx eip(std::cos(phi), std::sin(phi));
        for (std::size_t x = 0; x < ens.dim; ++x) {
            const cplx a = comp[i][x], b = comp[k][x];
            cand_i[x] = c * a + s * eip * b;
            cand_k[x] = -s * std::conj(eip) * a + c * b;
        }
        const double wi = weighted_cost(cand_i, dims, cost);
        const double wk = weighted_cost(cand_k, dims, cost);
        const double cand_total = total - wc[i] - wc[k] + wi + wk;
        if (cand_total < total) {
            comp[i].swap(cand_i);
            comp[k].swap(cand_k);
            wc[i] = wi;
            wc[k] = wk;
            total = cand_total;
            consecutive_rejections = 0;
        } else {
            ++consecutive_rejections;
            if (consecutive_rejections % kAnnealEvery == 0) sigma = std::max(sigma * 0.7, 1e-5);
        }
    }

    RestartOutcome out;
    out.bound = total;
    out.components = std::move(comp);
    return out;
}

} // namespace

Decomposition ensemble_from_isometry(const DensityMatrix& rho, const ComplexMatrix& u) {
    const EigenEnsemble ens = eigen_ensemble(rho);
    if (u.cols != ens.rank)
        throw contract_error("ensemble_from_isometry: isometry columns must equal the state rank");
    if (u.rows < u.cols) throw argument_error("ensemble_from_isometry: need at least rank rows");
    // isometry check u^dag u = I
    for (std::size_t p = 0; p < u.cols; ++p)
        for (std::size_t q = 0; q < u.cols; ++q) {
            cplx dot = 0.0;
            for (std::size_t i = 0; i < u.rows; ++i) dot += std::conj(u.at(i, p)) * u.at(i, q);
            const cplx expect = (p == q) ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
            if (std::abs(dot - expect) > 1e-9)
                throw contract_error("ensemble_from_isometry: matrix is not left-isometric");
        }

    Decomposition d;
    for (std::size_t i = 0; i < u.rows; ++i) {
        std::vector<cplx> tilde(ens.dim, cplx(0.0, 0.0));
        for (std::size_t j = 0; j < ens.rank; ++j) {
            const cplx uij = u.at(i, j);
            if (uij == cplx(0.0, 0.0)) continue;
            for (std::size_t x = 0; x < ens.dim; ++x) tilde[x] += uij * ens.scaled_cols[j][x];
        }
        double w = 0.0;
        for (const cplx& a : tilde) w += std::norm(a);
        if (w < 1e-12) continue; // dropped
        const double inv = 1.0 / std::sqrt(w);
        for (cplx& a : tilde) a *= inv;
        d.weights.push_back(w);
        d.components.emplace_back(rho.dims, std::move(tilde));
    }
    return d;
}

ComplexMatrix reconstruct(const Decomposition& d) {
    if (d.components.empty()) throw argument_error("reconstruct: empty decomposition");
    const std::size_t n = d.components.front().amp.size();
    ComplexMatrix out(n, n);
    for (std::size_t t = 0; t < d.components.size(); ++t) {
        const auto& a = d.components[t].amp;
        const double w = d.weights[t];
        for (std::size_t i = 0; i < n; ++i) {
            if (a[i] == cplx(0.0, 0.0)) continue;
            for (std::size_t j = 0; j < n; ++j) out.at(i, j) += w * a[i] * std::conj(a[j]);
        }
    }
    return out;
}

RoofResult roof_minimize_custom(const DensityMatrix& rho,
                                const std::function<double(const PureState&)>& cost, std::size_t m,
                                std::size_t restarts, std::uint64_t seed, bool serial) {
    if (restarts < 1) throw argument_error("roof_minimize: need at least one restart");
    const EigenEnsemble ens = eigen_ensemble(rho);
    if (ens.rank == 0) throw contract_error("roof_minimize: state has zero rank");
    if (m == 0) m = std::min(ens.rank * ens.rank, ens.rank + 4);
    if (m < ens.rank) throw argument_error("roof_minimize: m must be at least the state rank");
    if (m > kMaxComponents) throw capacity_error("roof_minimize: more than 256 components");

    RoofResult result;
    result.restarts_used = restarts;

    if (ens.rank == 1) { // pure state: the only decomposition is the state itself
        std::vector<cplx> v = ens.scaled_cols[0];
        double w = 0.0;
        for (const cplx& a : v) w += std::norm(a);
        const double inv = 1.0 / std::sqrt(w);
        for (cplx& a : v) a *= inv;
        PureState psi(rho.dims, std::move(v));
        result.bound = cost(psi);
        result.decomposition.weights = {1.0};
        result.decomposition.components = {std::move(psi)};
        result.converged = true;
        return result;
    }

    std::vector<RestartOutcome> outcomes(restarts);
    par::run_for(restarts, serial,
                 [&](std::size_t i) { outcomes[i] = run_restart(ens, rho.dims, cost, m, mix_seed(seed, i)); });

    std::size_t best = 0;
    for (std::size_t i = 1; i < restarts; ++i)
        if (outcomes[i].bound < outcomes[best].bound) best = i;

    double best_without_last = std::numeric_limits<double>::infinity();
    double runner_up = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < restarts; ++i) {
        if (i + 1 < restarts) best_without_last = std::min(best_without_last, outcomes[i].bound);
        if (i != best) runner_up = std::min(runner_up, outcomes[i].bound);
    }
    result.bound = outcomes[best].bound;
    result.last_restart_improvement =
        (restarts > 1) ? std::max(0.0, best_without_last - result.bound)
                       : std::numeric_limits<double>::infinity();
    result.converged = result.last_restart_improvement <= 1e-7;
    result.restart_spread = (restarts > 1) ? runner_up - result.bound : 0.0;

    // package the winning components, dropping zero-weight ones
    for (auto& tilde : outcomes[best].components) {
        double w = 0.0;
        for (const cplx& a : tilde) w += std::norm(a);
        if (w < 1e-12) continue;
        const double inv = 1.0 / std::sqrt(w);
        for (cplx& a : tilde) a *= inv;
        result.decomposition.weights.push_back(w);
        result.decomposition.components.emplace_back(rho.dims, std::move(tilde));
    }
    return result;
}

RoofResult roof_minimize(const DensityMatrix& rho, RoofCost cost, const PartitionSpec& partition,
                         std::size_t m, std::size_t restarts, std::uint64_t seed, bool serial) {
    partition.validate(rho.dims.size());
    if (partition.parties.size() != 2 || !partition.covers_all(rho.dims.size()))
        throw argument_error("roof_minimize: partition must split the state into exactly two parties");
    const std::vector<std::size_t> first_party = partition.parties[0];

    std::function<double(const PureState&)> fn;
    switch (cost) {
        case RoofCost::Eof:
            fn = [first_party](const PureState& psi) {
                return von_neumann_entropy(reduced_density(psi, first_party));
            };
            break;
        case RoofCost::Concurrence:
            fn = [first_party](const PureState& psi) {
                const double c_sq = 2.0 * (1.0 - purity(reduced_density(psi, first_party)));
                return std::sqrt(std::max(0.0, c_sq));
            };
            break;
        case RoofCost::ConcurrenceSq:
            fn = [first_party](const PureState& psi) {
                return std::max(0.0, 2.0 * (1.0 - purity(reduced_density(psi, first_party))));
            };
            break;
    }
    return roof_minimize_custom(rho, fn, m, restarts, seed, serial);
}

} // namespace monoqt
