#include "hicon/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "hicon/common.hpp"
#include "hicon/parallel.hpp"

namespace hicon {

CsrMatrix CsrMatrix::from_coo(int n, std::vector<std::tuple<int, int, double>>& coo) {
    std::sort(coo.begin(), coo.end(), [](const auto& a, const auto& b) {
        return std::get<0>(a) < std::get<0>(b) ||
               (std::get<0>(a) == std::get<0>(b) && std::get<1>(a) < std::get<1>(b));
    });
    CsrMatrix m;
    m.n = n;
    m.rowptr.assign(n + 1, 0);
    for (std::size_t k = 0; k < coo.size();) {
        const int i = std::get<0>(coo[k]), j = std::get<1>(coo[k]);
        double v = 0.0;
        while (k < coo.size() && std::get<0>(coo[k]) == i && std::get<1>(coo[k]) == j)
            v += std::get<2>(coo[k++]);
        m.col.push_back(j);
        m.val.push_back(v);
        ++m.rowptr[i + 1];
    }
    for (int i = 0; i < n; ++i) m.rowptr[i + 1] += m.rowptr[i];
    return m;
}

void CsrMatrix::multiply(const std::vector<double>& x, std::vector<double>& y) const {
    y.resize(n);
    par::for_each(static_cast<std::size_t>(n), [&](std::size_t i) {
        double s = 0.0;
        for (int k = rowptr[i]; k < rowptr[i + 1]; ++k) s += val[k] * x[col[k]];
        y[i] = s;
    });
}

std::vector<double> CsrMatrix::multiply(const std::vector<double>& x) const {
    std::vector<double> y;
    multiply(x, y);
    return y;
}

double CsrMatrix::symmetry_defect() const {
    double worst = 0.0, scale = 0.0;
    for (int i = 0; i < n; ++i)
        for (int k = rowptr[i]; k < rowptr[i + 1]; ++k) {
            const int j = col[k];
            scale = std::max(scale, std::abs(val[k]));
            double tji = 0.0;
            for (int kk = rowptr[j]; kk < rowptr[j + 1]; ++kk)
                if (col[kk] == i) {
                    tji = val[kk];
                    break;
                }
            worst = std::max(worst, std::abs(val[k] - tji));
        }
    return scale > 0 ? worst / scale : 0.0;
}

double CsrMatrix::quadratic(const std::vector<double>& x) const {
    std::vector<double> y;
    multiply(x, y);
    return par::reduce_sum(static_cast<std::size_t>(n), [&](std::size_t i) { return x[i] * y[i]; });
}

namespace {

double masked_dot(const std::vector<double>& a, const std::vector<double>& b) {
    return par::reduce_sum(a.size(), [&](std::size_t i) { return a[i] * b[i]; });
}

void apply_mask(std::vector<double>& v, const std::vector<std::uint8_t>& constrained) {
    if (constrained.empty()) return;
    par::for_each(v.size(), [&](std::size_t i) {
        if (constrained[i]) v[i] = 0.0;
    });
}

} // namespace

std::vector<double> solve_spd(const CsrMatrix& a, const std::vector<double>& b,
                              const std::vector<std::uint8_t>& constrained,
                              const PcgOptions& opts) {
    const int n = a.n;
    std::vector<double> x(n, 0.0), r(b), z(n), p(n), ap(n);
    apply_mask(r, constrained);
    const double bnorm = std::sqrt(masked_dot(r, r));
    if (bnorm == 0.0) return x;

    std::vector<double> inv_diag(n, 1.0);
    for (int i = 0; i < n; ++i)
        for (int k = a.rowptr[i]; k < a.rowptr[i + 1]; ++k)
            if (a.col[k] == i && a.val[k] != 0.0) inv_diag[i] = 1.0 / a.val[k];

    auto precondition = [&](const std::vector<double>& in, std::vector<double>& out) {
        out.resize(n);
        par::for_each(static_cast<std::size_t>(n), [&](std::size_t i) { out[i] = inv_diag[i] * in[i]; });
        apply_mask(out, constrained);
    };

    precondition(r, z);
    p = z;
    double rz = masked_dot(r, z);
    for (int it = 0; it < opts.max_iters; ++it) {
        a.multiply(p, ap);
        apply_mask(ap, constrained);
        const double pap = masked_dot(p, ap);
        if (pap <= 0.0) throw SolverError("solve_spd: operator not positive definite", std::sqrt(rz));
        const double alpha = rz / pap;
        par::for_each(static_cast<std::size_t>(n), [&](std::size_t i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        });
        const double rnorm = std::sqrt(masked_dot(r, r));
        if (rnorm <= opts.tol * bnorm) return x;
        precondition(r, z);
        const double rz_new = masked_dot(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        par::for_each(static_cast<std::size_t>(n), [&](std::size_t i) { p[i] = z[i] + beta * p[i]; });
    }
    throw SolverError("solve_spd: PCG did not converge",
                      std::sqrt(masked_dot(r, r)) / bnorm);
}

std::vector<double> solve_spd_projected(const CsrMatrix& a, const std::vector<double>& b,
                                        const std::vector<std::vector<double>>& kernel,
                                        const PcgOptions& opts) {
    const int n = a.n;
    std::vector<std::vector<double>> q = kernel; // orthonormalized copy
    for (std::size_t k = 0; k < q.size(); ++k) {
        for (std::size_t l = 0; l < k; ++l) {
            const double c = masked_dot(q[k], q[l]);
            for (int i = 0; i < n; ++i) q[k][i] -= c * q[l][i];
        }
        const double nn = std::sqrt(masked_dot(q[k], q[k]));
        require(nn > 0, "solve_spd_projected: dependent kernel basis");
        for (int i = 0; i < n; ++i) q[k][i] /= nn;
    }
    auto project = [&](std::vector<double>& v) {
        for (const auto& k : q) {
            const double c = masked_dot(v, k);
            par::for_each(v.size(), [&](std::size_t i) { v[i] -= c * k[i]; });
        }
    };

    std::vector<double> x(n, 0.0), r(b), z(n), p(n), ap(n);
    project(r);
    const double bnorm = std::sqrt(masked_dot(r, r));
    if (bnorm == 0.0) return x;

    std::vector<double> inv_diag(n, 1.0);
    for (int i = 0; i < n; ++i)
        for (int k = a.rowptr[i]; k < a.rowptr[i + 1]; ++k)
            if (a.col[k] == i && a.val[k] != 0.0) inv_diag[i] = 1.0 / a.val[k];

    auto precondition = [&](const std::vector<double>& in, std::vector<double>& out) {
        out.resize(n);
        par::for_each(static_cast<std::size_t>(n), [&](std::size_t i) { out[i] = inv_diag[i] * in[i]; });
        project(out);
    };

    precondition(r, z);
    p = z;
    double rz = masked_dot(r, z);
    for (int it = 0; it < opts.max_iters; ++it) {
        a.multiply(p, ap);
        project(ap);
        const double pap = masked_dot(p, ap);
        if (pap <= 0.0)
            throw SolverError("solve_spd_projected: indefinite on the complement", std::sqrt(rz));
        const double alpha = rz / pap;
        par::for_each(static_cast<std::size_t>(n), [&](std::size_t i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        });
        const double rnorm = std::sqrt(masked_dot(r, r));
        if (rnorm <= opts.tol * bnorm) {
            project(x);
            return x;
        }
        precondition(r, z);
        const double rz_new = masked_dot(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        par::for_each(static_cast<std::size_t>(n), [&](std::size_t i) { p[i] = z[i] + beta * p[i]; });
    }
    throw SolverError("solve_spd_projected: PCG did not converge",
                      std::sqrt(masked_dot(r, r)) / bnorm);
}

BandCholesky::BandCholesky(const CsrMatrix& a, const std::vector<std::uint8_t>& constrained)
    : n_(a.n), mask_(constrained) {
    if (mask_.empty()) mask_.assign(n_, 0);
    for (int i = 0; i < n_; ++i)
        for (int k = a.rowptr[i]; k < a.rowptr[i + 1]; ++k)
            if (!mask_[i] && !mask_[a.col[k]] && a.val[k] != 0.0)
                bw_ = std::max(bw_, std::abs(a.col[k] - i));
    const std::size_t stride = bw_ + 1;
    f_.assign(static_cast<std::size_t>(n_) * stride, 0.0);
    auto at = [&](int i, int j) -> double& { return f_[static_cast<std::size_t>(i) * stride + (j - i + bw_)]; };
    // load lower band, identity rows for constrained DOFs
    for (int i = 0; i < n_; ++i) {
        if (mask_[i]) {
            at(i, i) = 1.0;
            continue;
        }
        for (int k = a.rowptr[i]; k < a.rowptr[i + 1]; ++k) {
            const int j = a.col[k];
            if (j <= i && j >= i - bw_ && !mask_[j]) at(i, j) = a.val[k];
        }
    }
    for (int j = 0; j < n_; ++j) {
        double d = at(j, j);
        for (int k = std::max(0, j - bw_); k < j; ++k) {
            const double l = at(j, k);
            d -= l * l;
        }
        require(d > 0.0, "band cholesky: matrix not positive definite");
        d = std::sqrt(d);
        at(j, j) = d;
        const int iend = std::min(n_ - 1, j + bw_);
        for (int i = j + 1; i <= iend; ++i) {
            double s = at(i, j);
            for (int k = std::max(0, i - bw_); k < j; ++k) s -= at(i, k) * at(j, k);
            at(i, j) = s / d;
        }
    }
}

void BandCholesky::solve(const std::vector<double>& b, std::vector<double>& x) const {
    const std::size_t stride = bw_ + 1;
    auto at = [&](int i, int j) -> double {
        return f_[static_cast<std::size_t>(i) * stride + (j - i + bw_)];
    };
    x = b;
    for (int i = 0; i < n_; ++i)
        if (mask_[i]) x[i] = 0.0;
    for (int i = 0; i < n_; ++i) {
        double s = x[i];
        for (int k = std::max(0, i - bw_); k < i; ++k) s -= at(i, k) * x[k];
        x[i] = s / at(i, i);
    }
    for (int i = n_ - 1; i >= 0; --i) {
        double s = x[i];
        const int kend = std::min(n_ - 1, i + bw_);
        for (int k = i + 1; k <= kend; ++k) s -= at(k, i) * x[k];
        x[i] = s / at(i, i);
    }
    for (int i = 0; i < n_; ++i)
        if (mask_[i]) x[i] = 0.0;
}

DenseCholesky::DenseCholesky(std::vector<double> a, int n) : n_(n), f_(std::move(a)) {
    auto at = [&](int i, int j) -> double& { return f_[static_cast<std::size_t>(i) * n_ + j]; };
    for (int j = 0; j < n_; ++j) {
        double d = at(j, j);
        for (int k = 0; k < j; ++k) d -= at(j, k) * at(j, k);
        require(d > 0.0, "dense cholesky: matrix not positive definite");
        d = std::sqrt(d);
        at(j, j) = d;
        for (int i = j + 1; i < n_; ++i) {
            double s = at(i, j);
            for (int k = 0; k < j; ++k) s -= at(i, k) * at(j, k);
            at(i, j) = s / d;
        }
    }
}

void DenseCholesky::solve(const std::vector<double>& b, std::vector<double>& x) const {
    auto at = [&](int i, int j) -> double { return f_[static_cast<std::size_t>(i) * n_ + j]; };
    x = b;
    for (int i = 0; i < n_; ++i) {
        double s = x[i];
        for (int k = 0; k < i; ++k) s -= at(i, k) * x[k];
        x[i] = s / at(i, i);
    }
    for (int i = n_ - 1; i >= 0; --i) {
        double s = x[i];
        for (int k = i + 1; k < n_; ++k) s -= at(k, i) * x[k];
        x[i] = s / at(i, i);
    }
}

} // namespace hicon
