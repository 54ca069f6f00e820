#ifndef HICON_SPARSE_HPP
#define HICON_SPARSE_HPP

#include <cstdint>
#include <vector>

namespace hicon {

// Compressed sparse rows of a symmetric matrix (both triangles stored).
struct CsrMatrix {
    int n = 0;
    std::vector<int> rowptr, col;
    std::vector<double> val;

    static CsrMatrix from_coo(int n, std::vector<std::tuple<int, int, double>>& coo);

    void multiply(const std::vector<double>& x, std::vector<double>& y) const;
    std::vector<double> multiply(const std::vector<double>& x) const;

    double symmetry_defect() const; // max |A - A^T| relative to max |A|
    double quadratic(const std::vector<double>& x) const; // x^T A x
};

struct PcgOptions {
    double tol = 1e-10;   // relative residual
    int max_iters = 20000;
};

// Jacobi-preconditioned conjugate gradients with Dirichlet DOFs eliminated by
// masking (constrained entries held at zero).
std::vector<double> solve_spd(const CsrMatrix& a, const std::vector<double>& b,
                              const std::vector<std::uint8_t>& constrained,
                              const PcgOptions& opts = {});

// CG for consistent singular systems: the kernel basis vectors are projected
// out of the rhs and of every iterate (basis need not be normalized).
std::vector<double> solve_spd_projected(const CsrMatrix& a, const std::vector<double>& b,
                                        const std::vector<std::vector<double>>& kernel,
                                        const PcgOptions& opts = {});

// Cholesky factorization of an SPD band matrix; used as a direct
// preconditioner for the descent solvers on structured meshes.
class BandCholesky {
public:
    BandCholesky(const CsrMatrix& a, const std::vector<std::uint8_t>& constrained);
    void solve(const std::vector<double>& b, std::vector<double>& x) const;
    int bandwidth() const { return bw_; }

private:
    int n_ = 0, bw_ = 0;
    std::vector<double> f_; // lower factor, row i holds entries i-bw..i
    std::vector<std::uint8_t> mask_;
};

// Dense Cholesky for the small per-inclusion patch systems.
class DenseCholesky {
public:
    explicit DenseCholesky(std::vector<double> a, int n); // row-major SPD
    void solve(const std::vector<double>& b, std::vector<double>& x) const;
    int size() const { return n_; }

private:
    int n_;
    std::vector<double> f_;
};

} // namespace hicon

#endif
