#include "rwsolv/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

namespace rwsolv {

double SparseMatrix::coeff(int i, int j) const {
    if (i < 0 || i >= n || j < 0 || j >= n) throw std::invalid_argument("coeff: index out of range");
    const int* begin = col_idx.data() + row_ptr[i];
    const int* end = col_idx.data() + row_ptr[i + 1];
    const int* it = std::lower_bound(begin, end, j);
    if (it != end && *it == j) return values[it - col_idx.data()];
    return 0.0;
}

void SparseMatrix::check_structure() const {
    if (n < 0) throw std::invalid_argument("sparse matrix: negative dimension");
    if (static_cast<int>(row_ptr.size()) != n + 1)
        throw std::invalid_argument("sparse matrix: row_ptr size mismatch");
    if (row_ptr.front() != 0 || row_ptr.back() != nnz())
        throw std::invalid_argument("sparse matrix: row_ptr bounds mismatch");
    if (col_idx.size() != values.size())
        throw std::invalid_argument("sparse matrix: column/value size mismatch");
    for (int i = 0; i < n; ++i) {
        if (row_ptr[i] > row_ptr[i + 1])
            throw std::invalid_argument("sparse matrix: row_ptr not monotone");
        for (int e = row_ptr[i]; e < row_ptr[i + 1]; ++e) {
            if (col_idx[e] < 0 || col_idx[e] >= n)
                throw std::invalid_argument("sparse matrix: column index out of range");
            if (e > row_ptr[i] && col_idx[e] <= col_idx[e - 1])
                throw std::invalid_argument("sparse matrix: columns not strictly increasing");
            if (values[e] == 0.0)
                throw std::invalid_argument("sparse matrix: explicit zero stored");
        }
    }
}

SparseMatrix from_triplets(int n, const std::vector<Triplet>& entries) {
    if (n < 0) throw std::invalid_argument("from_triplets: negative dimension");
    std::vector<Triplet> sorted = entries;
    for (const Triplet& t : sorted) {
        if (t.row < 0 || t.row >= n || t.col < 0 || t.col >= n)
            throw std::invalid_argument("from_triplets: entry out of range");
    }
    std::sort(sorted.begin(), sorted.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    SparseMatrix m(n);
    size_t i = 0;
    for (int r = 0; r < n; ++r) {
        while (i < sorted.size() && sorted[i].row == r) {
            int c = sorted[i].col;
            double v = 0.0;
            while (i < sorted.size() && sorted[i].row == r && sorted[i].col == c) {
                v += sorted[i].value;
                ++i;
            }
            if (v != 0.0) {
                m.col_idx.push_back(c);
                m.values.push_back(v);
            }
        }
        m.row_ptr[r + 1] = m.nnz();
    }
    return m;
}

Permutation Permutation::identity(int n) {
    Permutation p;
    p.forward.resize(n);
    p.inverse.resize(n);
    std::iota(p.forward.begin(), p.forward.end(), 0);
    p.inverse = p.forward;
    return p;
}

Permutation Permutation::from_forward(std::vector<int> fwd) {
    const int n = static_cast<int>(fwd.size());
    Permutation p;
    p.inverse.assign(n, -1);
    for (int node = 0; node < n; ++node) {
        int pos = fwd[node];
        if (pos < 0 || pos >= n || p.inverse[pos] != -1)
            throw std::invalid_argument("permutation: forward map is not a bijection");
        p.inverse[pos] = node;
    }
    p.forward = std::move(fwd);
    return p;
}

Permutation compose(const Permutation& second, const Permutation& first) {
    if (second.size() != first.size())
        throw std::invalid_argument("compose: size mismatch");
    std::vector<int> fwd(first.size());
    for (int node = 0; node < first.size(); ++node)
        fwd[node] = second.forward[first.forward[node]];
    return Permutation::from_forward(std::move(fwd));
}

RMatrixCertificate validate_r_matrix(const SparseMatrix& a) {
    a.check_structure();
    RMatrixCertificate cert;
    const int n = a.n;
    cert.is_symmetric = true;
    cert.diag_positive = true;
    cert.offdiag_nonpositive = true;
    bool weakly_dominant = true;

    for (int i = 0; i < n; ++i) {
        double diag = 0.0;
        double offdiag_abs = 0.0;
        for (int e = a.row_ptr[i]; e < a.row_ptr[i + 1]; ++e) {
            const int j = a.col_idx[e];
            const double v = a.values[e];
            if (j == i) {
                diag = v;
            } else {
                if (v > 0.0) cert.offdiag_nonpositive = false;
                offdiag_abs += std::abs(v);
                if (a.coeff(j, i) != v) cert.is_symmetric = false;
            }
        }
        if (diag <= 0.0) cert.diag_positive = false;
        if (diag < offdiag_abs) weakly_dominant = false;
        if (diag > offdiag_abs) cert.strictly_dominant_rows.push_back(i);
    }
    cert.row_dominant = weakly_dominant && !cert.strictly_dominant_rows.empty();

    // Connectivity of the undirected adjacency graph (structure of A + A^T).
    if (n == 0) {
        cert.irreducible = false;
    } else {
        SparseMatrix at = transpose(a);
        std::vector<char> seen(n, 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        int count = 1;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            auto visit = [&](const SparseMatrix& m) {
                for (int e = m.row_ptr[u]; e < m.row_ptr[u + 1]; ++e) {
                    int v = m.col_idx[e];
                    if (v != u && !seen[v]) {
                        seen[v] = 1;
                        ++count;
                        stack.push_back(v);
                    }
                }
            };
            visit(a);
            visit(at);
        }
        cert.irreducible = (count == n);
    }
    return cert;
}

void require_r_matrix(const SparseMatrix& a, const std::string& context,
                      bool allow_positive_offdiag) {
    const RMatrixCertificate cert = validate_r_matrix(a);
    std::string why;
    if (!cert.is_symmetric)
        why = "matrix is not symmetric";
    else if (!cert.diag_positive)
        why = "diagonal is not positive";
    else if (!allow_positive_offdiag && !cert.offdiag_nonpositive)
        why = "positive off-diagonal entries require sign scaling";
    else if (!cert.row_dominant)
        why = "matrix is not weakly diagonally dominant with a strictly dominant row";
    else if (!cert.irreducible)
        why = "matrix graph is not connected";
    if (!why.empty()) throw std::invalid_argument(context + ": " + why);
}

SparseMatrix rev_matrix(const SparseMatrix& a) {
    const int n = a.n;
    SparseMatrix r(n);
    r.symmetric_hint = a.symmetric_hint;
    r.col_idx.reserve(a.nnz());
    r.values.reserve(a.nnz());
    for (int i = 0; i < n; ++i) {
        const int src = n - 1 - i;
        // Source row columns ascend, so the reversed columns descend; walk backwards.
        for (int e = a.row_ptr[src + 1] - 1; e >= a.row_ptr[src]; --e) {
            r.col_idx.push_back(n - 1 - a.col_idx[e]);
            r.values.push_back(a.values[e]);
        }
        r.row_ptr[i + 1] = r.nnz();
    }
    return r;
}

std::vector<double> rev_vector(const std::vector<double>& x) {
    return {x.rbegin(), x.rend()};
}

SparseMatrix transpose(const SparseMatrix& a) {
    const int n = a.n;
    SparseMatrix t(n);
    t.symmetric_hint = a.symmetric_hint;
    std::vector<int> count(n, 0);
    for (int c : a.col_idx) ++count[c];
    for (int i = 0; i < n; ++i) t.row_ptr[i + 1] = t.row_ptr[i] + count[i];
    t.col_idx.resize(a.nnz());
    t.values.resize(a.nnz());
    std::vector<int> next(t.row_ptr.begin(), t.row_ptr.end() - 1);
    for (int i = 0; i < n; ++i) {
        for (int e = a.row_ptr[i]; e < a.row_ptr[i + 1]; ++e) {
            const int pos = next[a.col_idx[e]]++;
            t.col_idx[pos] = i;
            t.values[pos] = a.values[e];
        }
    }
    return t;
}

SparseMatrix apply_permutation(const SparseMatrix& a, const Permutation& perm) {
    if (perm.size() != a.n) throw std::invalid_argument("apply_permutation: size mismatch");
    const int n = a.n;
    SparseMatrix b(n);
    b.symmetric_hint = a.symmetric_hint;
    std::vector<int> count(n, 0);
    for (int i = 0; i < n; ++i)
        count[perm.forward[i]] = a.row_ptr[i + 1] - a.row_ptr[i];
    for (int i = 0; i < n; ++i) b.row_ptr[i + 1] = b.row_ptr[i] + count[i];
    b.col_idx.resize(a.nnz());
    b.values.resize(a.nnz());
    std::vector<std::pair<int, double>> row;
    for (int i = 0; i < n; ++i) {
        const int dst = perm.forward[i];
        row.clear();
        for (int e = a.row_ptr[i]; e < a.row_ptr[i + 1]; ++e)
            row.emplace_back(perm.forward[a.col_idx[e]], a.values[e]);
        std::sort(row.begin(), row.end());
        int pos = b.row_ptr[dst];
        for (const auto& [c, v] : row) {
            b.col_idx[pos] = c;
            b.values[pos] = v;
            ++pos;
        }
    }
    return b;
}

std::vector<double> permute_vector(const std::vector<double>& x, const Permutation& perm) {
    if (perm.size() != static_cast<int>(x.size()))
        throw std::invalid_argument("permute_vector: size mismatch");
    std::vector<double> y(x.size());
    for (size_t i = 0; i < x.size(); ++i) y[perm.forward[i]] = x[i];
    return y;
}

std::vector<double> unpermute_vector(const std::vector<double>& x, const Permutation& perm) {
    if (perm.size() != static_cast<int>(x.size()))
        throw std::invalid_argument("unpermute_vector: size mismatch");
    std::vector<double> y(x.size());
    for (size_t i = 0; i < x.size(); ++i) y[i] = x[perm.forward[i]];
    return y;
}

void spmv(const SparseMatrix& a, const std::vector<double>& x, std::vector<double>& y) {
    if (static_cast<int>(x.size()) != a.n) throw std::invalid_argument("spmv: size mismatch");
    y.assign(a.n, 0.0);
    for (int i = 0; i < a.n; ++i) {
        double s = 0.0;
        for (int e = a.row_ptr[i]; e < a.row_ptr[i + 1]; ++e)
            s += a.values[e] * x[a.col_idx[e]];
        y[i] = s;
    }
}

SparseMatrix gen_laplace3d(int nx, int ny, int nz) {
    if (nx <= 0 || ny <= 0 || nz <= 0)
        throw std::invalid_argument("gen_laplace3d: grid extents must be positive");
    const long long total = 1LL * nx * ny * nz;
    if (total > (1LL << 30)) throw std::invalid_argument("gen_laplace3d: grid too large");
    const int n = static_cast<int>(total);
    auto id = [&](int x, int y, int z) { return x + nx * (y + ny * z); };

    SparseMatrix m(n);
    m.symmetric_hint = true;
    for (int z = 0; z < nz; ++z) {
        for (int y = 0; y < ny; ++y) {
            for (int x = 0; x < nx; ++x) {
                const int i = id(x, y, z);
                if (z > 0) { m.col_idx.push_back(id(x, y, z - 1)); m.values.push_back(-1.0); }
                if (y > 0) { m.col_idx.push_back(id(x, y - 1, z)); m.values.push_back(-1.0); }
                if (x > 0) { m.col_idx.push_back(id(x - 1, y, z)); m.values.push_back(-1.0); }
                m.col_idx.push_back(i);
                m.values.push_back(6.0);
                if (x + 1 < nx) { m.col_idx.push_back(id(x + 1, y, z)); m.values.push_back(-1.0); }
                if (y + 1 < ny) { m.col_idx.push_back(id(x, y + 1, z)); m.values.push_back(-1.0); }
                if (z + 1 < nz) { m.col_idx.push_back(id(x, y, z + 1)); m.values.push_back(-1.0); }
                m.row_ptr[i + 1] = m.nnz();
            }
        }
    }
    return m;
}

SparseMatrix sym_factor_pattern(const SparseMatrix& a, const Permutation& order) {
    a.check_structure();
    const SparseMatrix b = apply_permutation(a, order);
    const int n = b.n;

    // Elimination-graph scan: eliminating node k turns its higher-numbered
    // neighborhood into a clique; the clique members are L's row indices in
    // column k.
    std::vector<std::set<int>> adj(n);
    for (int i = 0; i < n; ++i)
        for (int e = b.row_ptr[i]; e < b.row_ptr[i + 1]; ++e) {
            const int j = b.col_idx[e];
            if (j != i) {
                adj[i].insert(j);
                adj[j].insert(i);
            }
        }

    std::vector<Triplet> entries;
    for (int k = 0; k < n; ++k) {
        entries.push_back({k, k, 1.0});
        std::vector<int> hi;
        for (int j : adj[k])
            if (j > k) hi.push_back(j);
        for (int j : hi) entries.push_back({j, k, 1.0});
        for (size_t p = 0; p < hi.size(); ++p)
            for (size_t q = p + 1; q < hi.size(); ++q) {
                adj[hi[p]].insert(hi[q]);
                adj[hi[q]].insert(hi[p]);
            }
    }
    return from_triplets(n, entries);
}

SparseMatrix sym_factor_pattern(const SparseMatrix& a) {
    return sym_factor_pattern(a, Permutation::identity(a.n));
}

bool pattern_subset(const SparseMatrix& sub, const SparseMatrix& super) {
    if (sub.n != super.n) return false;
    for (int i = 0; i < sub.n; ++i) {
        int e2 = super.row_ptr[i];
        for (int e = sub.row_ptr[i]; e < sub.row_ptr[i + 1]; ++e) {
            const int c = sub.col_idx[e];
            while (e2 < super.row_ptr[i + 1] && super.col_idx[e2] < c) ++e2;
            if (e2 == super.row_ptr[i + 1] || super.col_idx[e2] != c) return false;
        }
    }
    return true;
}

}  // namespace rwsolv
