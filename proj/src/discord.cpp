#include "monoqt/discord.hpp"

#include "monoqt/errors.hpp"
#include "monoqt/parallel.hpp"
#include "monoqt/rng.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

namespace monoqt {

namespace {

const double kLn2 = std::log(2.0);
const double kTwoPi = 6.28318530717958647692;
const double kPi = 3.14159265358979323846;

// rho_ab with the measured party second, reshaped into da*da blocks of size
// db x db: block(i,j)[a2][b2] = rho[(i,a2),(j,b2)]. The measured conditional
// entropy is a functional of these blocks alone.
struct MeasCtx {
    std::size_t da = 0;
    std::size_t db = 0;
    std::vector<ComplexMatrix> block; // index i*da + j
};

MeasCtx build_ctx(const DensityMatrix& rho_ab, std::size_t measured_party) {
    if (rho_ab.dims.size() != 2) throw argument_error("measurement: state must have exactly two parties");
    if (measured_party > 1) throw argument_error("measurement: party index out of range");
    const DensityMatrix r =
        (measured_party == 0) ? permute_subsystems(rho_ab, {1, 0}) : rho_ab;
    MeasCtx ctx;
    ctx.da = r.dims[0];
    ctx.db = r.dims[1];
    ctx.block.assign(ctx.da * ctx.da, ComplexMatrix(ctx.db, ctx.db));
    for (std::size_t i = 0; i < ctx.da; ++i)
        for (std::size_t j = 0; j < ctx.da; ++j) {
            ComplexMatrix& b = ctx.block[i * ctx.da + j];
            for (std::size_t a2 = 0; a2 < ctx.db; ++a2)
                for (std::size_t b2 = 0; b2 < ctx.db; ++b2)
                    b.at(a2, b2) = r.mat.at(i * ctx.db + a2, j * ctx.db + b2);
        }
    return ctx;
}

// p * S(T / p) for Hermitian PSD T with trace p, in bits
double entropy_contribution_2x2(const cplx& t00, const cplx& t01, const cplx& t11) {
    const double a = t00.real(), d = t11.real();
    const double p = a + d;
    if (p <= 1e-15) return 0.0;
    const double det = a * d - std::norm(t01);
    double disc = p * p - 4.0 * det;
    if (disc < 0.0) disc = 0.0;
    const double root = std::sqrt(disc);
    double s = 0.0;
    for (double lam : {0.5 * (p + root), 0.5 * (p - root)})
        if (lam > 0.0) s -= lam * std::log(lam);
    return (s + p * std::log(p)) / kLn2;
}

double entropy_contribution_general(ComplexMatrix t) {
    double p = 0.0;
    for (std::size_t i = 0; i < t.rows; ++i) p += t.at(i, i).real();
    if (p <= 1e-15) return 0.0;
    // symmetrize roundoff before diagonalizing
    for (std::size_t i = 0; i < t.rows; ++i)
        for (std::size_t j = i + 1; j < t.cols; ++j) {
            const cplx v = 0.5 * (t.at(i, j) + std::conj(t.at(j, i)));
            t.at(i, j) = v;
            t.at(j, i) = std::conj(v);
        }
    EigenSystem es = herm_eig(t);
    double s = 0.0;
    for (double lam : es.eigenvalues)
        if (lam > 0.0) s -= lam * std::log(lam);
    return (s + p * std::log(p)) / kLn2;
}

// cost of one orthonormal basis: sum over outcome vectors e of p_e S(rho_{A|e})
double eval_columns(const MeasCtx& ctx, const ComplexMatrix& cols) {
    const std::size_t da = ctx.da, db = ctx.db;
    double total = 0.0;
    std::vector<cplx> t(da * da);
    std::vector<cplx> me(db);
    for (std::size_t col = 0; col < cols.cols; ++col) {
        for (std::size_t i = 0; i < da; ++i)
            for (std::size_t j = i; j < da; ++j) {
                const ComplexMatrix& b = ctx.block[i * da + j];
                // e^dag B e
                for (std::size_t a2 = 0; a2 < db; ++a2) {
                    cplx acc = 0.0;
                    for (std::size_t b2 = 0; b2 < db; ++b2) acc += b.at(a2, b2) * cols.at(b2, col);
                    me[a2] = acc;
                }
                cplx v = 0.0;
                for (std::size_t a2 = 0; a2 < db; ++a2) v += std::conj(cols.at(a2, col)) * me[a2];
                t[i * da + j] = v;
                if (i != j) t[j * da + i] = std::conj(v);
            }
        if (da == 2) {
            total += entropy_contribution_2x2(t[0], t[1], t[3]);
        } else {
            ComplexMatrix tm(da, da);
            tm.a = t;
            total += entropy_contribution_general(std::move(tm));
        }
    }
    return total;
}

ComplexMatrix product_basis(double t1, double p1, double t2, double p2) {
    return kron(qubit_measurement_basis(t1, p1), qubit_measurement_basis(t2, p2));
}

// Hermitian generator basis of u(4): diagonal units, then real and imaginary
// pair couplings. U(t) = exp(i sum_j t_j G_j).
ComplexMatrix su4_unitary(const double* t) {
    ComplexMatrix h(4, 4);
    std::size_t idx = 0;
    for (std::size_t p = 0; p < 4; ++p) h.at(p, p) = t[idx++];
    for (std::size_t p = 0; p < 4; ++p)
        for (std::size_t q = p + 1; q < 4; ++q) {
            h.at(p, q) += t[idx];
            h.at(q, p) += t[idx];
            ++idx;
        }
    for (std::size_t p = 0; p < 4; ++p)
        for (std::size_t q = p + 1; q < 4; ++q) {
            h.at(p, q) += cplx(0.0, -t[idx]);
            h.at(q, p) += cplx(0.0, t[idx]);
            ++idx;
        }
    EigenSystem es = herm_eig(h);
    ComplexMatrix u(4, 4);
    for (std::size_t j = 0; j < 4; ++j) {
        const cplx phase(std::cos(es.eigenvalues[j]), std::sin(es.eigenvalues[j]));
        for (std::size_t i = 0; i < 4; ++i) {
            const cplx vij = es.eigenvectors.at(i, j);
            for (std::size_t k = 0; k < 4; ++k)
                u.at(i, k) += phase * vij * std::conj(es.eigenvectors.at(k, j));
        }
    }
    return u;
}

struct NmOutcome {
    std::vector<double> x;
    double f = 0.0;
};

// plain Nelder-Mead; deterministic, budget counted in iterations
NmOutcome nelder_mead(const std::function<double(const double*)>& fn, std::vector<double> x0,
                      const std::vector<double>& step, std::size_t max_iters, double tol) {
    const std::size_t n = x0.size();
    std::vector<std::vector<double>> xs(n + 1, x0);
    std::vector<double> fs(n + 1);
    for (std::size_t i = 0; i < n; ++i) xs[i + 1][i] += step[i];
    for (std::size_t i = 0; i <= n; ++i) fs[i] = fn(xs[i].data());

    std::vector<std::size_t> order(n + 1);
    std::vector<double> centroid(n), xr(n), xe(n), xc(n);
    for (std::size_t iter = 0; iter < max_iters; ++iter) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
        if (fs[order[n]] - fs[order[0]] < tol) break;
        const std::size_t worst = order[n];
        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == worst) continue;
            for (std::size_t d = 0; d < n; ++d) centroid[d] += xs[i][d];
        }
        for (std::size_t d = 0; d < n; ++d) centroid[d] /= static_cast<double>(n);

        for (std::size_t d = 0; d < n; ++d) xr[d] = centroid[d] + (centroid[d] - xs[worst][d]);
        const double fr = fn(xr.data());
        if (fr < fs[order[0]]) {
            for (std::size_t d = 0; d < n; ++d) xe[d] = centroid[d] + 2.0 * (centroid[d] - xs[worst][d]);
            const double fe = fn(xe.data());
            if (fe < fr) {
                xs[worst] = xe;
                fs[worst] = fe;
            } else {
                xs[worst] = xr;
                fs[worst] = fr;
            }
        } else if (fr < fs[order[n - 1]]) {
            xs[worst] = xr;
            fs[worst] = fr;
        } else {
            for (std::size_t d = 0; d < n; ++d) xc[d] = centroid[d] + 0.5 * (xs[worst][d] - centroid[d]);
            const double fc = fn(xc.data());
            if (fc < fs[worst]) {
                xs[worst] = xc;
                fs[worst] = fc;
            } else { // shrink toward the best vertex
                for (std::size_t i = 0; i <= n; ++i) {
                    if (i == order[0]) continue;
                    for (std::size_t d = 0; d < n; ++d)
                        xs[i][d] = xs[order[0]][d] + 0.5 * (xs[i][d] - xs[order[0]][d]);
                    fs[i] = fn(xs[i].data());
                }
            }
        }
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i <= n; ++i)
        if (fs[i] < fs[best]) best = i;
    return NmOutcome{xs[best], fs[best]};
}

MeasuredMinimum minimize_qubit(const MeasCtx& ctx, const KwOptions& opt) {
    if (opt.grid < 2) throw argument_error("measurement: grid must be at least 2");
    const std::size_t g = opt.grid;
    std::vector<double> values(g * g);
    par::run_for(g * g, opt.serial, [&](std::size_t idx) {
        const std::size_t i = idx / g, j = idx % g;
        const double theta = kPi * static_cast<double>(i) / static_cast<double>(g - 1);
        const double phi = kTwoPi * static_cast<double>(j) / static_cast<double>(g);
        values[idx] = eval_columns(ctx, qubit_measurement_basis(theta, phi));
    });
    std::size_t best = 0;
    for (std::size_t idx = 1; idx < values.size(); ++idx)
        if (values[idx] < values[best]) best = idx;
    const double coarse = values[best];
    const double theta0 = kPi * static_cast<double>(best / g) / static_cast<double>(g - 1);
    const double phi0 = kTwoPi * static_cast<double>(best % g) / static_cast<double>(g);

    auto fn = [&](const double* x) { return eval_columns(ctx, qubit_measurement_basis(x[0], x[1])); };
    const NmOutcome nm = nelder_mead(fn, {theta0, phi0}, {kPi / static_cast<double>(g), kTwoPi / static_cast<double>(g)},
                                     opt.refine_iters, 1e-10);

    MeasuredMinimum out;
    if (nm.f <= coarse) {
        out.value = nm.f;
        out.measurement.params = nm.x;
    } else {
        out.value = coarse;
        out.measurement.params = {theta0, phi0};
    }
    out.measurement.party_dim = 2;
    out.measurement.kind = MeasurementSpec::Kind::QubitAngles;
    out.measurement.columns = qubit_measurement_basis(out.measurement.params[0], out.measurement.params[1]);
    out.refine_gain = coarse - out.value;
    return out;
}

MeasuredMinimum minimize_dim4(const MeasCtx& ctx, const KwOptions& opt) {
    if (opt.product_grid < 2) throw argument_error("measurement: product grid must be at least 2");
    // stage 1: product bases on a coarse 4-angle grid
    const std::size_t g = opt.product_grid;
    const std::size_t total = g * g * g * g;
    std::vector<double> values(total);
    auto angle = [g](std::size_t i, double span) { return span * static_cast<double>(i) / static_cast<double>(g); };
    par::run_for(total, opt.serial, [&](std::size_t idx) {
        std::size_t rem = idx;
        const std::size_t i1 = rem % g; rem /= g;
        const std::size_t j1 = rem % g; rem /= g;
        const std::size_t i2 = rem % g; rem /= g;
        const std::size_t j2 = rem;
        values[idx] = eval_columns(ctx, product_basis(angle(i1, kPi), angle(j1, kTwoPi),
                                                      angle(i2, kPi), angle(j2, kTwoPi)));
    });
    std::size_t best = 0;
    for (std::size_t idx = 1; idx < total; ++idx)
        if (values[idx] < values[best]) best = idx;
    double coarse = values[best];
    std::vector<double> x0(4);
    {
        std::size_t rem = best;
        x0[0] = angle(rem % g, kPi); rem /= g;
        x0[1] = angle(rem % g, kTwoPi); rem /= g;
        x0[2] = angle(rem % g, kPi); rem /= g;
        x0[3] = angle(rem, kTwoPi);
    }
    auto fn_prod = [&](const double* x) {
        return eval_columns(ctx, product_basis(x[0], x[1], x[2], x[3]));
    };
    const double st = kPi / static_cast<double>(g);
    const NmOutcome nm_prod = nelder_mead(fn_prod, x0, {st, 2 * st, st, 2 * st}, opt.refine_iters, 1e-10);

    // stage 2: full unitary frames from random generator coefficients
    const std::size_t starts = std::max<std::size_t>(opt.su4_starts, 1);
    std::vector<double> sv(starts);
    std::vector<std::array<double, 16>> st_params(starts);
    par::run_for(starts, opt.serial, [&](std::size_t i) {
        SplitMix64 rng(mix_seed(opt.seed, i));
        std::array<double, 16>& t = st_params[i];
        for (double& v : t) v = kPi * (2.0 * rng.uniform() - 1.0);
        sv[i] = eval_columns(ctx, su4_unitary(t.data()));
    });
    std::size_t sbest = 0;
    for (std::size_t i = 1; i < starts; ++i)
        if (sv[i] < sv[sbest]) sbest = i;
    coarse = std::min(coarse, sv[sbest]);

    auto fn_su4 = [&](const double* x) { return eval_columns(ctx, su4_unitary(x)); };
    std::vector<double> sx0(st_params[sbest].begin(), st_params[sbest].end());
    const NmOutcome nm_su4 =
        nelder_mead(fn_su4, sx0, std::vector<double>(16, 0.15), opt.refine_iters, 1e-10);

    MeasuredMinimum out;
    out.measurement.party_dim = 4;
    if (nm_prod.f <= nm_su4.f) {
        out.value = nm_prod.f;
        out.measurement.kind = MeasurementSpec::Kind::ProductAngles;
        out.measurement.params = nm_prod.x;
        out.measurement.columns = product_basis(nm_prod.x[0], nm_prod.x[1], nm_prod.x[2], nm_prod.x[3]);
    } else {
        out.value = nm_su4.f;
        out.measurement.kind = MeasurementSpec::Kind::UnitaryColumns;
        out.measurement.params = nm_su4.x;
        out.measurement.columns = su4_unitary(nm_su4.x.data());
    }
    out.refine_gain = std::max(0.0, coarse - out.value);
    return out;
}

} // namespace

double MeasurementSpec::completeness_defect() const {
    ComplexMatrix sum(party_dim, party_dim);
    for (std::size_t c = 0; c < columns.cols; ++c)
        for (std::size_t i = 0; i < party_dim; ++i)
            for (std::size_t j = 0; j < party_dim; ++j)
                sum.at(i, j) += columns.at(i, c) * std::conj(columns.at(j, c));
    return max_abs_diff(sum, ComplexMatrix::identity(party_dim));
}

KwOptions KwOptions::light() {
    KwOptions o;
    o.grid = 48;
    o.refine_iters = 120;
    o.product_grid = 6;
    o.su4_starts = 256;
    return o;
}

double conditional_entropy(const DensityMatrix& rho_ab, std::size_t b) {
    if (rho_ab.dims.size() != 2) throw argument_error("conditional_entropy: state must have two parties");
    if (b > 1) throw argument_error("conditional_entropy: party index out of range");
    return von_neumann_entropy(rho_ab) - von_neumann_entropy(partial_trace(rho_ab, {b}));
}

ComplexMatrix qubit_measurement_basis(double theta, double phi) {
    const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
    const cplx eip(std::cos(phi), std::sin(phi));
    ComplexMatrix m(2, 2);
    m.at(0, 0) = c;
    m.at(1, 0) = eip * s;
    m.at(0, 1) = s;
    m.at(1, 1) = -eip * c;
    return m;
}

double measured_conditional_entropy(const DensityMatrix& rho_ab, std::size_t measured_party,
                                    const ComplexMatrix& basis_columns) {
    const MeasCtx ctx = build_ctx(rho_ab, measured_party);
    if (basis_columns.rows != ctx.db || basis_columns.cols != ctx.db)
        throw argument_error("measured_conditional_entropy: basis shape does not match measured party");
    return eval_columns(ctx, basis_columns);
}

MeasuredMinimum minimize_measured_conditional_entropy(const DensityMatrix& rho_ab,
                                                      std::size_t measured_party,
                                                      const KwOptions& opt) {
    const MeasCtx ctx = build_ctx(rho_ab, measured_party);
    if (ctx.db == 2) return minimize_qubit(ctx, opt);
    if (ctx.db == 4) return minimize_dim4(ctx, opt);
    throw unsupported_error("measurement: measured party dimension must be 2 or 4");
}

DiscordResult discord(const DensityMatrix& rho_ab, std::size_t measured_party, const KwOptions& opt) {
    const MeasuredMinimum m = minimize_measured_conditional_entropy(rho_ab, measured_party, opt);
    DiscordResult out;
    out.measured_conditional_entropy = m.value;
    out.conditional_entropy = conditional_entropy(rho_ab, measured_party);
    out.discord = m.value - out.conditional_entropy;
    out.optimal_measurement = m.measurement;
    return out;
}

DiscordResult discord(const DensityMatrix& rho_ab, std::size_t measured_party, std::size_t grid,
                      std::size_t refine_iters) {
    KwOptions opt;
    opt.grid = grid;
    opt.refine_iters = refine_iters;
    return discord(rho_ab, measured_party, opt);
}

double koashi_winter_eof(const PureState& psi, std::size_t a, std::size_t b, std::size_t c,
                         const KwOptions& opt) {
    if (psi.num_parties() != 3)
        throw argument_error("koashi_winter_eof: state must have exactly three parties");
    std::vector<std::size_t> parts{a, b, c};
    std::sort(parts.begin(), parts.end());
    if (parts != std::vector<std::size_t>{0, 1, 2})
        throw argument_error("koashi_winter_eof: parties must be a permutation of 0,1,2");
    // E_f(a|c) = D(a|b) + S(a|b) = min over measurements on b of the measured
    // conditional entropy of rho_ab
    const DensityMatrix rho_ab = reduced_density(psi, {a, b});
    const std::size_t measured = (a < b) ? 1 : 0;
    return minimize_measured_conditional_entropy(rho_ab, measured, opt).value;
}

CavityClosedForms cavity_closed_forms(const CavityParams& p) {
    validate_cavity_params(p);
    const double b2 = p.beta * p.beta;
    const double x2 = p.xi() * p.xi();
    const double c2 = p.chi() * p.chi();
    auto eta = [](double radicand_term) {
        const double r = std::sqrt(std::max(0.0, 1.0 - radicand_term));
        return 0.5 * (1.0 - r);
    };
    CavityClosedForms out;
    out.eta1 = eta(4.0 * b2 * x2 * c2);
    out.eta2 = eta(4.0 * b2 * x2 * (b2 + x2 - 2.0 * b2 * x2));
    out.eta3 = out.eta1; // same expression for the r1|c1c2 cut
    out.eta4 = eta(4.0 * b2 * c2 * (b2 + c2 - 2.0 * b2 * c2));
    out.eof_c1_r1r2 = binary_entropy(out.eta1);
    out.eof_c1_c2r1 = binary_entropy(out.eta2);
    out.eof_r1_c1c2 = binary_entropy(out.eta3);
    out.eof_r1_r2c1 = binary_entropy(out.eta4);
    return out;
}

} // namespace monoqt
