#include "monoqt/linalg.hpp"

#include "monoqt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace monoqt {

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

bool ComplexMatrix::finite() const {
    for (const cplx& v : a)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

ComplexMatrix matmul(const ComplexMatrix& x, const ComplexMatrix& y) {
    if (x.cols != y.rows) throw argument_error("matmul: inner dimensions disagree");
    ComplexMatrix out(x.rows, y.cols);
    for (std::size_t i = 0; i < x.rows; ++i) {
        for (std::size_t k = 0; k < x.cols; ++k) {
            const cplx xv = x.at(i, k);
            if (xv == cplx(0.0, 0.0)) continue;
            for (std::size_t j = 0; j < y.cols; ++j) out.at(i, j) += xv * y.at(k, j);
        }
    }
    return out;
}

ComplexMatrix dagger(const ComplexMatrix& x) {
    ComplexMatrix out(x.cols, x.rows);
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t j = 0; j < x.cols; ++j) out.at(j, i) = std::conj(x.at(i, j));
    return out;
}

ComplexMatrix conjugate(const ComplexMatrix& x) {
    ComplexMatrix out = x;
    for (cplx& v : out.a) v = std::conj(v);
    return out;
}

ComplexMatrix add(const ComplexMatrix& x, const ComplexMatrix& y) {
    if (x.rows != y.rows || x.cols != y.cols) throw argument_error("add: shape mismatch");
    ComplexMatrix out = x;
    for (std::size_t i = 0; i < out.a.size(); ++i) out.a[i] += y.a[i];
    return out;
}

ComplexMatrix scale(const ComplexMatrix& x, cplx s) {
    ComplexMatrix out = x;
    for (cplx& v : out.a) v *= s;
    return out;
}

cplx trace(const ComplexMatrix& x) {
    cplx t = 0.0;
    const std::size_t n = std::min(x.rows, x.cols);
    for (std::size_t i = 0; i < n; ++i) t += x.at(i, i);
    return t;
}

double max_abs(const ComplexMatrix& x) {
    double m = 0.0;
    for (const cplx& v : x.a) m = std::max(m, std::abs(v));
    return m;
}

double max_abs_diff(const ComplexMatrix& x, const ComplexMatrix& y) {
    if (x.rows != y.rows || x.cols != y.cols) throw argument_error("max_abs_diff: shape mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < x.a.size(); ++i) m = std::max(m, std::abs(x.a[i] - y.a[i]));
    return m;
}

double hermiticity_defect(const ComplexMatrix& x) {
    if (x.rows != x.cols) throw argument_error("hermiticity_defect: matrix not square");
    double m = 0.0;
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t j = i; j < x.cols; ++j)
            m = std::max(m, std::abs(x.at(i, j) - std::conj(x.at(j, i))));
    return m;
}

ComplexMatrix kron(const ComplexMatrix& x, const ComplexMatrix& y) {
    constexpr std::size_t kMaxAxis = 4096;
    if (x.rows * y.rows > kMaxAxis || x.cols * y.cols > kMaxAxis)
        throw capacity_error("kron: result exceeds 4096 entries per axis");
    ComplexMatrix out(x.rows * y.rows, x.cols * y.cols);
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t j = 0; j < x.cols; ++j) {
            const cplx xv = x.at(i, j);
            if (xv == cplx(0.0, 0.0)) continue;
            for (std::size_t k = 0; k < y.rows; ++k)
                for (std::size_t l = 0; l < y.cols; ++l)
                    out.at(i * y.rows + k, j * y.cols + l) = xv * y.at(k, l);
        }
    return out;
}

namespace {

double offdiag_mass_sq(const ComplexMatrix& h) {
    double s = 0.0;
    for (std::size_t i = 0; i < h.rows; ++i)
        for (std::size_t j = 0; j < h.cols; ++j)
            if (i != j) s += std::norm(h.at(i, j));
    return s;
}

} // namespace

EigenSystem herm_eig(const ComplexMatrix& h) {
    if (h.rows != h.cols) throw argument_error("herm_eig: matrix not square");
    if (!h.finite()) throw contract_error("herm_eig: non-finite entries");
    if (hermiticity_defect(h) > 1e-9) throw contract_error("herm_eig: input not Hermitian");

    const std::size_t n = h.rows;
    // work on the exactly-Hermitian part so roundoff asymmetry cannot grow
    ComplexMatrix w(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        w.at(i, i) = cplx(h.at(i, i).real(), 0.0);
        for (std::size_t j = i + 1; j < n; ++j) {
            const cplx v = 0.5 * (h.at(i, j) + std::conj(h.at(j, i)));
            w.at(i, j) = v;
            w.at(j, i) = std::conj(v);
        }
    }

    ComplexMatrix v = ComplexMatrix::identity(n);
    // cyclic sweeps; quadratic convergence makes 64 sweeps a generous cap
    for (int sweep = 0; sweep < 64 && offdiag_mass_sq(w) >= 1e-28; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx wpq = w.at(p, q);
                const double r = std::abs(wpq);
                if (r < 1e-300) continue;
                const cplx phase = wpq / r; // e^{i arg}
                const double app = w.at(p, p).real();
                const double aqq = w.at(q, q).real();
                const double tau = (aqq - app) / (2.0 * r);
                // small-magnitude root of t^2 - 2 tau t - 1 = 0
                const double t = (tau >= 0.0) ? -1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                              : 1.0 / (-tau + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                // column update: w <- w * J with J[p,p]=c, J[q,p]=s*conj(phase),
                // J[p,q]=-s*phase, J[q,q]=c
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx kp = w.at(k, p), kq = w.at(k, q);
                    w.at(k, p) = c * kp + s * std::conj(phase) * kq;
                    w.at(k, q) = -s * phase * kp + c * kq;
                }
                // row update: w <- J^dag * w
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx pk = w.at(p, k), qk = w.at(q, k);
                    w.at(p, k) = c * pk + s * phase * qk;
                    w.at(q, k) = -s * std::conj(phase) * pk + c * qk;
                }
                // accumulate eigenvectors: v <- v * J
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx kp = v.at(k, p), kq = v.at(k, q);
                    v.at(k, p) = c * kp + s * std::conj(phase) * kq;
                    v.at(k, q) = -s * phase * kp + c * kq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> diag(n);
    for (std::size_t i = 0; i < n; ++i) diag[i] = w.at(i, i).real();
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return diag[x] > diag[y]; });

    EigenSystem out;
    out.eigenvalues.resize(n);
    out.eigenvectors = ComplexMatrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        out.eigenvalues[j] = diag[order[j]];
        for (std::size_t i = 0; i < n; ++i) out.eigenvectors.at(i, j) = v.at(i, order[j]);
    }
    return out;
}

ComplexMatrix psd_sqrt(const ComplexMatrix& h) {
    EigenSystem es = herm_eig(h);
    const std::size_t n = h.rows;
    for (double& lam : es.eigenvalues) {
        if (lam < -1e-10) throw contract_error("psd_sqrt: eigenvalue below -1e-10, input not PSD");
        if (lam < 0.0) lam = 0.0;
    }
    ComplexMatrix out(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        const double s = std::sqrt(es.eigenvalues[j]);
        if (s == 0.0) continue;
        for (std::size_t i = 0; i < n; ++i) {
            const cplx vi = es.eigenvectors.at(i, j);
            if (vi == cplx(0.0, 0.0)) continue;
            for (std::size_t k = 0; k < n; ++k)
                out.at(i, k) += s * vi * std::conj(es.eigenvectors.at(k, j));
        }
    }
    return out;
}

std::array<double, 4> wootters_lambdas(const ComplexMatrix& rho) {
    if (rho.rows != 4 || rho.cols != 4) throw argument_error("wootters_lambdas: expected a 4x4 matrix");
    // sy x sy is real with antidiagonal (-1, 1, 1, -1)
    ComplexMatrix yy(4, 4);
    yy.at(0, 3) = -1.0;
    yy.at(1, 2) = 1.0;
    yy.at(2, 1) = 1.0;
    yy.at(3, 0) = -1.0;

    const ComplexMatrix tilde = matmul(matmul(yy, conjugate(rho)), yy);
    const ComplexMatrix root = psd_sqrt(rho);
    ComplexMatrix sandwich = matmul(matmul(root, tilde), root);
    // symmetrize away the roundoff skew before diagonalizing
    sandwich = scale(add(sandwich, dagger(sandwich)), 0.5);

    EigenSystem es = herm_eig(sandwich);
    std::array<double, 4> out{};
    for (std::size_t i = 0; i < 4; ++i) out[i] = std::sqrt(std::max(0.0, es.eigenvalues[i]));
    return out;
}

} // namespace monoqt
