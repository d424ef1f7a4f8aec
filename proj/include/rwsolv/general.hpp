#pragma once

#include <cstdint>
#include <vector>

#include "rwsolv/precond.hpp"
#include "rwsolv/precond_builder.hpp"
#include "rwsolv/sparse.hpp"
#include "rwsolv/stopping.hpp"

namespace rwsolv {

/// Incomplete L D U factorization of rev(ordering applied to a) for
/// asymmetric matrices, from two walk games sharing one master seed: the
/// matrix's own game supplies U and the diagonal, the transpose game
/// supplies L. Requires a positive diagonal, weak diagonal dominance along
/// both rows and columns (strict somewhere), and a connected graph.
IncompleteLdu build_ldu(const SparseMatrix& a, const Permutation& ordering,
                        const StoppingCriterion& stop, std::uint64_t seed,
                        const BuildOptions& opts = {});

/// z = (L D U)^{-1} r: unit forward solve, diagonal scaling, unit backward
/// solve.
std::vector<double> apply_ldu_inverse(const IncompleteLdu& f, const std::vector<double>& r);

}  // namespace rwsolv
