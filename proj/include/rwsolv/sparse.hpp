#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rwsolv {

/// Square sparse matrix in compressed sparse row form.
/// Invariants: row_ptr has n+1 monotone entries, column indices are strictly
/// increasing within each row, and no explicitly stored value is zero.
struct SparseMatrix {
    int n = 0;
    std::vector<int> row_ptr;
    std::vector<int> col_idx;
    std::vector<double> values;
    bool symmetric_hint = false;

    SparseMatrix() : row_ptr(1, 0) {}
    explicit SparseMatrix(int dim) : n(dim), row_ptr(static_cast<size_t>(dim) + 1, 0) {}

    int nnz() const { return static_cast<int>(col_idx.size()); }

    /// Value at (i, j), 0 if not stored. Binary search within the row.
    double coeff(int i, int j) const;

    /// Throws std::invalid_argument if the CSR invariants are violated.
    void check_structure() const;
};

struct Triplet {
    int row;
    int col;
    double value;
};

/// Builds CSR from unordered triplets; duplicates are summed, exact zeros
/// (after summation) are dropped.
SparseMatrix from_triplets(int n, const std::vector<Triplet>& entries);

/// Bijection between node ids and elimination positions.
/// forward[node] = position, inverse[position] = node.
struct Permutation {
    std::vector<int> forward;
    std::vector<int> inverse;

    static Permutation identity(int n);
    static Permutation from_forward(std::vector<int> fwd);
    int size() const { return static_cast<int>(forward.size()); }
};

/// position-space composition: applies `first`, then relabels by `second`.
Permutation compose(const Permutation& second, const Permutation& first);

/// Admission record for the random-walk game. The matrix is admissible iff
/// every flag holds; row_dominant requires weak dominance on every row plus
/// strict dominance somewhere, matching irreducible diagonal dominance.
struct RMatrixCertificate {
    bool is_symmetric = false;
    bool diag_positive = false;
    bool offdiag_nonpositive = false;
    bool row_dominant = false;
    bool irreducible = false;
    std::vector<int> strictly_dominant_rows;

    bool valid() const {
        return is_symmetric && diag_positive && offdiag_nonpositive && row_dominant &&
               irreducible;
    }
};

RMatrixCertificate validate_r_matrix(const SparseMatrix& a);

/// Throws std::invalid_argument naming the first failed admission property.
/// Positive off-diagonal entries are tolerated when allow_positive_offdiag
/// is set (sign-scaled games); everything else is still required.
void require_r_matrix(const SparseMatrix& a, const std::string& context,
                      bool allow_positive_offdiag = false);

/// Index reversal: result(i, j) = a(n-1-i, n-1-j).
SparseMatrix rev_matrix(const SparseMatrix& a);
std::vector<double> rev_vector(const std::vector<double>& x);

SparseMatrix transpose(const SparseMatrix& a);

/// Symmetric relabeling: result(perm.forward[i], perm.forward[j]) = a(i, j).
SparseMatrix apply_permutation(const SparseMatrix& a, const Permutation& perm);

std::vector<double> permute_vector(const std::vector<double>& x, const Permutation& perm);
std::vector<double> unpermute_vector(const std::vector<double>& x, const Permutation& perm);

/// y = A x.
void spmv(const SparseMatrix& a, const std::vector<double>& x, std::vector<double>& y);

/// Dirichlet Laplacian of a 7-point stencil on an nx * ny * nz grid:
/// diagonal 6, -1 between grid neighbors. Boundary rows keep the diagonal 6,
/// so they are strictly dominant. Node id = x + nx*(y + ny*z).
SparseMatrix gen_laplace3d(int nx, int ny, int nz);

/// Exact nonzero pattern (values 1.0, diagonal included) of the complete
/// lower factor of `a` relabeled by `order` and eliminated in position order.
SparseMatrix sym_factor_pattern(const SparseMatrix& a, const Permutation& order);
SparseMatrix sym_factor_pattern(const SparseMatrix& a);

/// True when every stored entry of `sub` lies inside the pattern of `super`.
bool pattern_subset(const SparseMatrix& sub, const SparseMatrix& super);

}  // namespace rwsolv
