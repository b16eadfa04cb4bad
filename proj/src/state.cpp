#include "monoqt/state.hpp"

#include "monoqt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace monoqt {

namespace {
constexpr std::size_t kMaxAmplitudes = std::size_t(1) << 20;
constexpr std::size_t kMaxMatrixDim = 64;

std::size_t product(const std::vector<std::size_t>& dims) {
    std::size_t p = 1;
    for (std::size_t d : dims) {
        if (d == 0) throw argument_error("subsystem dimension must be positive");
        p *= d;
    }
    return p;
}
} // namespace

std::vector<std::size_t> index_strides(const std::vector<std::size_t>& dims) {
    std::vector<std::size_t> s(dims.size(), 1);
    for (std::size_t i = dims.size(); i-- > 1;) s[i - 1] = s[i] * dims[i];
    return s;
}

std::size_t ravel_index(const std::vector<std::size_t>& digits, const std::vector<std::size_t>& dims) {
    if (digits.size() != dims.size()) throw argument_error("ravel_index: digit count mismatch");
    std::size_t flat = 0;
    for (std::size_t i = 0; i < dims.size(); ++i) {
        if (digits[i] >= dims[i]) throw argument_error("ravel_index: digit out of range");
        flat = flat * dims[i] + digits[i];
    }
    return flat;
}

std::vector<std::size_t> unravel_index(std::size_t flat, const std::vector<std::size_t>& dims) {
    std::vector<std::size_t> digits(dims.size(), 0);
    for (std::size_t i = dims.size(); i-- > 0;) {
        digits[i] = flat % dims[i];
        flat /= dims[i];
    }
    if (flat != 0) throw argument_error("unravel_index: flat index out of range");
    return digits;
}

PureState::PureState(std::vector<std::size_t> d, std::vector<cplx> amplitudes)
    : dims(std::move(d)), amp(std::move(amplitudes)) {
    const std::size_t n = product(dims);
    if (n > kMaxAmplitudes) throw capacity_error("PureState: more than 2^20 amplitudes");
    if (amp.size() != n) throw argument_error("PureState: amplitude count does not match dims");
    double norm_sq = 0.0;
    for (const cplx& a : amp) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
            throw contract_error("PureState: non-finite amplitude");
        norm_sq += std::norm(a);
    }
    const double norm = std::sqrt(norm_sq);
    if (std::abs(norm - 1.0) > 1e-8) throw contract_error("PureState: norm deviates from 1 by more than 1e-8");
    if (norm != 1.0)
        for (cplx& a : amp) a /= norm;
}

std::size_t PureState::total_dim() const { return product(dims); }
std::size_t DensityMatrix::total_dim() const { return product(dims); }

DensityMatrix make_density(std::vector<std::size_t> dims, ComplexMatrix mat) {
    const std::size_t n = product(dims);
    if (n > kMaxMatrixDim) throw capacity_error("DensityMatrix: dimension above 64");
    if (mat.rows != n || mat.cols != n) throw argument_error("DensityMatrix: matrix shape does not match dims");
    if (!mat.finite()) throw contract_error("DensityMatrix: non-finite entries");
    if (hermiticity_defect(mat) > 1e-9) throw contract_error("DensityMatrix: matrix not Hermitian within 1e-9");
    const double tr = trace(mat).real();
    if (std::abs(tr - 1.0) > 1e-8) throw contract_error("DensityMatrix: trace deviates from 1 by more than 1e-8");
    if (tr != 1.0) mat = scale(mat, cplx(1.0 / tr, 0.0));
    return DensityMatrix{std::move(dims), std::move(mat)};
}

void validate_density_spectrum(const DensityMatrix& rho) {
    EigenSystem es = herm_eig(rho.mat);
    for (double lam : es.eigenvalues)
        if (lam < -1e-9) throw contract_error("DensityMatrix: negative eigenvalue below -1e-9");
}

DensityMatrix density(const PureState& psi) {
    const std::size_t n = psi.total_dim();
    if (n > kMaxMatrixDim) throw capacity_error("density: dimension above 64");
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        if (psi.amp[i] == cplx(0.0, 0.0)) continue;
        for (std::size_t j = 0; j < n; ++j) m.at(i, j) = psi.amp[i] * std::conj(psi.amp[j]);
    }
    return DensityMatrix{psi.dims, std::move(m)};
}

namespace {

// sorted unique copy of keep, validated against dims
std::vector<std::size_t> normalize_keep(const std::vector<std::size_t>& keep, std::size_t parties) {
    if (keep.empty()) throw argument_error("keep set must be nonempty");
    std::vector<std::size_t> k = keep;
    std::sort(k.begin(), k.end());
    k.erase(std::unique(k.begin(), k.end()), k.end());
    if (k.size() != keep.size()) throw argument_error("keep set has duplicate indices");
    if (k.back() >= parties) throw argument_error("keep index out of range");
    return k;
}

} // namespace

DensityMatrix reduced_density(const PureState& psi, const std::vector<std::size_t>& keep) {
    const std::vector<std::size_t> k = normalize_keep(keep, psi.dims.size());
    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < psi.dims.size(); ++i)
        if (!std::binary_search(k.begin(), k.end(), i)) rest.push_back(i);

    std::vector<std::size_t> keep_dims, rest_dims;
    for (std::size_t i : k) keep_dims.push_back(psi.dims[i]);
    for (std::size_t i : rest) rest_dims.push_back(psi.dims[i]);
    const std::size_t nk = product(keep_dims);
    const std::size_t nr = product(rest_dims);
    if (nk > kMaxMatrixDim) throw capacity_error("reduced_density: reduced dimension above 64");

    const std::vector<std::size_t> strides = index_strides(psi.dims);
    // flat offsets contributed by the kept / traced digits
    std::vector<std::size_t> keep_offset(nk, 0);
    for (std::size_t x = 0; x < nk; ++x) {
        std::size_t rem = x, off = 0;
        for (std::size_t i = k.size(); i-- > 0;) {
            off += (rem % keep_dims[i]) * strides[k[i]];
            rem /= keep_dims[i];
        }
        keep_offset[x] = off;
    }
    std::vector<std::size_t> rest_offset(nr, 0);
    for (std::size_t x = 0; x < nr; ++x) {
        std::size_t rem = x, off = 0;
        for (std::size_t i = rest.size(); i-- > 0;) {
            off += (rem % rest_dims[i]) * strides[rest[i]];
            rem /= rest_dims[i];
        }
        rest_offset[x] = off;
    }

    ComplexMatrix out(nk, nk);
    for (std::size_t t = 0; t < nr; ++t) {
        const std::size_t base = rest_offset[t];
        for (std::size_t r = 0; r < nk; ++r) {
            const cplx ar = psi.amp[keep_offset[r] + base];
            if (ar == cplx(0.0, 0.0)) continue;
            for (std::size_t c = 0; c < nk; ++c)
                out.at(r, c) += ar * std::conj(psi.amp[keep_offset[c] + base]);
        }
    }
    return DensityMatrix{std::move(keep_dims), std::move(out)};
}

double purity(const DensityMatrix& rho) {
    double p = 0.0;
    for (std::size_t i = 0; i < rho.mat.rows; ++i)
        for (std::size_t j = 0; j < rho.mat.cols; ++j)
            p += std::norm(rho.mat.at(i, j)); // |rho_ij|^2; Tr rho^2 for Hermitian rho
    return p;
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::size_t>& keep) {
    const std::vector<std::size_t> k = normalize_keep(keep, rho.dims.size());
    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < rho.dims.size(); ++i)
        if (!std::binary_search(k.begin(), k.end(), i)) rest.push_back(i);

    std::vector<std::size_t> keep_dims, rest_dims;
    for (std::size_t i : k) keep_dims.push_back(rho.dims[i]);
    for (std::size_t i : rest) rest_dims.push_back(rho.dims[i]);
    const std::size_t nk = product(keep_dims);
    const std::size_t nr = product(rest_dims);

    const std::vector<std::size_t> strides = index_strides(rho.dims);
    std::vector<std::size_t> keep_offset(nk, 0);
    for (std::size_t x = 0; x < nk; ++x) {
        std::size_t rem = x, off = 0;
        for (std::size_t i = k.size(); i-- > 0;) {
            off += (rem % keep_dims[i]) * strides[k[i]];
            rem /= keep_dims[i];
        }
        keep_offset[x] = off;
    }
    std::vector<std::size_t> rest_offset(nr, 0);
    for (std::size_t x = 0; x < nr; ++x) {
        std::size_t rem = x, off = 0;
        for (std::size_t i = rest.size(); i-- > 0;) {
            off += (rem % rest_dims[i]) * strides[rest[i]];
            rem /= rest_dims[i];
        }
        rest_offset[x] = off;
    }

    ComplexMatrix out(nk, nk);
    for (std::size_t r = 0; r < nk; ++r)
        for (std::size_t c = 0; c < nk; ++c) {
            cplx s = 0.0;
            for (std::size_t t = 0; t < nr; ++t)
                s += rho.mat.at(keep_offset[r] + rest_offset[t], keep_offset[c] + rest_offset[t]);
            out.at(r, c) = s;
        }
    return DensityMatrix{std::move(keep_dims), std::move(out)};
}

PartitionSpec PartitionSpec::parse(const std::string& text) {
    PartitionSpec spec;
    std::stringstream groups(text);
    std::string group;
    while (std::getline(groups, group, '|')) {
        std::vector<std::size_t> members;
        std::stringstream items(group);
        std::string item;
        while (std::getline(items, item, ',')) {
            if (item.empty()) continue;
            std::size_t pos = 0;
            unsigned long v = 0;
            try {
                v = std::stoul(item, &pos);
            } catch (const std::exception&) {
                throw argument_error("partition: '" + item + "' is not a subsystem index");
            }
            if (pos != item.size()) throw argument_error("partition: '" + item + "' is not a subsystem index");
            members.push_back(static_cast<std::size_t>(v));
        }
        if (members.empty()) throw argument_error("partition: empty party");
        spec.parties.push_back(std::move(members));
    }
    if (spec.parties.size() < 2) throw argument_error("partition: need at least two parties");
    return spec;
}

std::string PartitionSpec::to_string() const {
    std::string out;
    for (std::size_t g = 0; g < parties.size(); ++g) {
        if (g) out += '|';
        for (std::size_t i = 0; i < parties[g].size(); ++i) {
            if (i) out += ',';
            out += std::to_string(parties[g][i]);
        }
    }
    return out;
}

void PartitionSpec::validate(std::size_t num_subsystems) const {
    if (parties.size() < 2) throw argument_error("partition: need at least two parties");
    std::set<std::size_t> seen;
    for (const auto& group : parties) {
        if (group.empty()) throw argument_error("partition: empty party");
        for (std::size_t idx : group) {
            if (idx >= num_subsystems) throw argument_error("partition: index out of range");
            if (!seen.insert(idx).second) throw argument_error("partition: overlapping parties");
        }
    }
}

bool PartitionSpec::covers_all(std::size_t num_subsystems) const {
    std::size_t count = 0;
    for (const auto& group : parties) count += group.size();
    return count == num_subsystems;
}

PureState permute_subsystems(const PureState& psi, const std::vector<std::size_t>& perm) {
    if (perm.size() != psi.dims.size()) throw argument_error("permute: permutation length mismatch");
    std::vector<std::size_t> new_dims(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) {
        if (perm[i] >= psi.dims.size()) throw argument_error("permute: index out of range");
        new_dims[i] = psi.dims[perm[i]];
    }
    const std::size_t n = psi.amp.size();
    std::vector<cplx> out(n);
    std::vector<std::size_t> digits;
    std::vector<std::size_t> new_digits(perm.size());
    for (std::size_t flat = 0; flat < n; ++flat) {
        digits = unravel_index(flat, psi.dims);
        for (std::size_t i = 0; i < perm.size(); ++i) new_digits[i] = digits[perm[i]];
        out[ravel_index(new_digits, new_dims)] = psi.amp[flat];
    }
    PureState result;
    result.dims = std::move(new_dims);
    result.amp = std::move(out);
    return result;
}

DensityMatrix permute_subsystems(const DensityMatrix& rho, const std::vector<std::size_t>& perm) {
    if (perm.size() != rho.dims.size()) throw argument_error("permute: permutation length mismatch");
    std::vector<std::size_t> new_dims(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) {
        if (perm[i] >= rho.dims.size()) throw argument_error("permute: index out of range");
        new_dims[i] = rho.dims[perm[i]];
    }
    const std::size_t n = rho.total_dim();
    std::vector<std::size_t> map(n);
    std::vector<std::size_t> new_digits(perm.size());
    for (std::size_t flat = 0; flat < n; ++flat) {
        const std::vector<std::size_t> digits = unravel_index(flat, rho.dims);
        for (std::size_t i = 0; i < perm.size(); ++i) new_digits[i] = digits[perm[i]];
        map[flat] = ravel_index(new_digits, new_dims);
    }
    ComplexMatrix out(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) out.at(map[r], map[c]) = rho.mat.at(r, c);
    return DensityMatrix{std::move(new_dims), std::move(out)};
}

namespace {

std::vector<std::size_t> partition_permutation(const PartitionSpec& partition, std::size_t parties) {
    partition.validate(parties);
    if (!partition.covers_all(parties))
        throw argument_error("group_parties: partition must cover every subsystem");
    std::vector<std::size_t> perm;
    for (const auto& group : partition.parties)
        for (std::size_t idx : group) perm.push_back(idx);
    return perm;
}

// with the first-most-significant convention, merging ADJACENT factors leaves
// the flat amplitude order unchanged; grouping is a permutation plus a dims
// relabel
std::vector<std::size_t> merged_dims(const PartitionSpec& partition, const std::vector<std::size_t>& dims) {
    std::vector<std::size_t> out;
    for (const auto& group : partition.parties) {
        std::size_t d = 1;
        for (std::size_t idx : group) d *= dims[idx];
        out.push_back(d);
    }
    return out;
}

} // namespace

PureState group_parties(const PureState& psi, const PartitionSpec& partition) {
    const std::vector<std::size_t> perm = partition_permutation(partition, psi.dims.size());
    PureState permuted = permute_subsystems(psi, perm);
    permuted.dims = merged_dims(partition, psi.dims);
    return permuted;
}

DensityMatrix group_parties(const DensityMatrix& rho, const PartitionSpec& partition) {
    const std::vector<std::size_t> perm = partition_permutation(partition, rho.dims.size());
    DensityMatrix permuted = permute_subsystems(rho, perm);
    permuted.dims = merged_dims(partition, rho.dims);
    return permuted;
}

PureState ungroup_parties(const PureState& grouped, const PartitionSpec& partition,
                          const std::vector<std::size_t>& original_dims) {
    const std::vector<std::size_t> perm = partition_permutation(partition, original_dims.size());
    if (grouped.dims != merged_dims(partition, original_dims))
        throw argument_error("ungroup_parties: grouped dims do not match partition");
    // split each party back into its member dims (flat order unchanged), then
    // apply the inverse permutation
    PureState split = grouped;
    std::vector<std::size_t> permuted_dims;
    for (std::size_t idx : perm) permuted_dims.push_back(original_dims[idx]);
    split.dims = permuted_dims;
    std::vector<std::size_t> inverse(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) inverse[perm[i]] = i;
    return permute_subsystems(split, inverse);
}

double CavityParams::xi() const { return std::exp(-kappa_t / 2.0); }
double CavityParams::chi() const { return std::sqrt(std::max(0.0, 1.0 - std::exp(-kappa_t))); }

void validate_cavity_params(const CavityParams& p) {
    if (!std::isfinite(p.alpha) || !std::isfinite(p.beta) || !std::isfinite(p.kappa_t))
        throw argument_error("cavity params: non-finite value");
    if (std::abs(p.alpha * p.alpha + p.beta * p.beta - 1.0) > 1e-12)
        throw argument_error("cavity params: alpha^2 + beta^2 must equal 1");
    if (p.kappa_t < 0.0) throw argument_error("cavity params: kappa_t must be nonnegative");
}

CavityParams make_cavity_params(double alpha, double kappa_t) {
    if (!(alpha >= -1.0 && alpha <= 1.0)) throw argument_error("cavity params: alpha must lie in [-1, 1]");
    CavityParams p;
    p.alpha = alpha;
    p.beta = std::sqrt(std::max(0.0, 1.0 - alpha * alpha));
    p.kappa_t = kappa_t;
    validate_cavity_params(p);
    return p;
}

PureState w_state(std::size_t n) {
    if (n < 2) throw argument_error("w_state: need at least 2 qubits");
    std::vector<std::size_t> dims(n, 2);
    const std::size_t total = std::size_t(1) << n;
    if (total > kMaxAmplitudes) throw capacity_error("w_state: more than 2^20 amplitudes");
    std::vector<cplx> amp(total, cplx(0.0, 0.0));
    const double a = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i) amp[std::size_t(1) << (n - 1 - i)] = a;
    return PureState(std::move(dims), std::move(amp));
}

PureState cavity_state(const CavityParams& p) {
    validate_cavity_params(p);
    const double xi = p.xi();
    const double chi = p.chi();
    // basis order (c1, r1, c2, r2); flat index = 8 c1 + 4 r1 + 2 c2 + r2
    std::vector<cplx> amp(16, cplx(0.0, 0.0));
    amp[0] = p.alpha;                 // |0000>
    amp[10] = p.beta * xi * xi;       // |1010>
    amp[9] = p.beta * xi * chi;       // |1001>
    amp[6] = p.beta * chi * xi;       // |0110>
    amp[5] = p.beta * chi * chi;      // |0101>
    return PureState({2, 2, 2, 2}, std::move(amp));
}

PureState bell_state() {
    const double r = 1.0 / std::sqrt(2.0);
    return PureState({2, 2}, {r, 0.0, 0.0, r});
}

PureState ghz_state(std::size_t n) {
    if (n < 2) throw argument_error("ghz_state: need at least 2 qubits");
    std::vector<std::size_t> dims(n, 2);
    const std::size_t total = std::size_t(1) << n;
    if (total > kMaxAmplitudes) throw capacity_error("ghz_state: more than 2^20 amplitudes");
    std::vector<cplx> amp(total, cplx(0.0, 0.0));
    const double r = 1.0 / std::sqrt(2.0);
    amp.front() = r;
    amp.back() = r;
    return PureState(std::move(dims), std::move(amp));
}

PureState cluster4_state() {
    std::vector<cplx> amp(16, cplx(0.0, 0.0));
    amp[0b0000] = 0.5;
    amp[0b1001] = 0.5;
    amp[0b0110] = 0.5;
    amp[0b1111] = -0.5;
    return PureState({2, 2, 2, 2}, std::move(amp));
}

PureState ou333_state() {
    // totally antisymmetric combination of the three levels; printed with
    // 1-based levels, stored 0-based (any consistent relabeling gives the same
    // entanglement values)
    std::vector<cplx> amp(27, cplx(0.0, 0.0));
    const double r = 1.0 / std::sqrt(6.0);
    const std::vector<std::size_t> dims{3, 3, 3};
    auto put = [&](std::size_t i, std::size_t j, std::size_t k, double sign) {
        amp[ravel_index({i, j, k}, dims)] = sign * r;
    };
    put(0, 1, 2, +1.0);
    put(0, 2, 1, -1.0);
    put(1, 2, 0, +1.0);
    put(1, 0, 2, -1.0);
    put(2, 0, 1, +1.0);
    put(2, 1, 0, -1.0);
    return PureState(dims, std::move(amp));
}

PureState s224_state() {
    PartitionSpec spec;
    spec.parties = {{0}, {1}, {2, 3}};
    return group_parties(cluster4_state(), spec);
}

PureState s422_state(double theta) {
    if (!std::isfinite(theta)) throw argument_error("s422_state: non-finite angle");
    const double a = std::cos(theta);
    const double b = std::sin(theta);
    const double r = 1.0 / std::sqrt(2.0);
    const std::vector<std::size_t> dims{4, 2, 2};
    std::vector<cplx> amp(16, cplx(0.0, 0.0));
    amp[ravel_index({0, 0, 0}, dims)] = r * a;
    amp[ravel_index({1, 1, 0}, dims)] = r * b;
    amp[ravel_index({2, 0, 1}, dims)] = r * a;
    amp[ravel_index({3, 1, 1}, dims)] = r * b;
    return PureState(dims, std::move(amp));
}

PureState named_state(const std::string& name) {
    if (name == "bell") return bell_state();
    if (name == "cluster4") return cluster4_state();
    if (name == "ou333") return ou333_state();
    if (name == "s224") return s224_state();
    auto parse_count = [&](const std::string& prefix) -> std::size_t {
        const std::string digits = name.substr(prefix.size());
        if (digits.empty()) throw argument_error("named_state: missing qubit count in '" + name + "'");
        std::size_t pos = 0;
        unsigned long v = std::stoul(digits, &pos);
        if (pos != digits.size()) throw argument_error("named_state: bad qubit count in '" + name + "'");
        return static_cast<std::size_t>(v);
    };
    try {
        if (name.rfind("ghz", 0) == 0) return ghz_state(parse_count("ghz"));
        if (name.rfind("s422:", 0) == 0) return s422_state(std::stod(name.substr(5)));
        if (name.rfind("w", 0) == 0 && name.size() > 1 && std::isdigit(static_cast<unsigned char>(name[1])))
            return w_state(parse_count("w"));
    } catch (const error&) {
        throw;
    } catch (const std::exception&) { // std::stoul / std::stod failures
        throw argument_error("named_state: cannot parse '" + name + "'");
    }
    throw argument_error("named_state: unknown state '" + name + "'");
}

} // namespace monoqt
