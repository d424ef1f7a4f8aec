#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "rwsolv/precond.hpp"
#include "rwsolv/sparse.hpp"
#include "rwsolv/stopping.hpp"

namespace rwsolv {

/// Walk statistics gathered for one position while it awaits factorization.
/// `walks` counts complete recorded walks (each starting with an upward
/// step), `self_visits` the signed visits to the position itself including
/// each walk's start, `end_hits` the signed absorption counts per home.
struct RowRecord {
    std::int64_t walks = 0;
    std::int64_t self_visits = 0;
    std::vector<std::pair<int, std::int64_t>> end_hits;
    RunningStats lengths;
};

/// Credits one complete walk: started at `start`, ended at home `end`
/// (`end` = -1 for an initial-home escape), made `self_returns` signed
/// returns to `start` after departure, took `length` steps. `end_sign` is
/// the walk's accumulated edge-sign product at absorption.
/// Throws std::invalid_argument unless end < start.
void accumulate_walk(RowRecord& rec, int start, int end, std::int64_t self_returns,
                     std::int64_t length, int end_sign = 1);

/// Scans one recorded walk and credits every complete sub-walk in it, the
/// full walk included. walk_seq holds the visited positions in order,
/// starting at the walk's own node; a sub-walk opens at each visit that
/// moves upward and closes at the first later position below its start.
/// One-step segments are dropped (their single transition was downward or
/// the escape itself, which recorded walks exclude by construction).
///
/// `escaped` marks a walk that left walk_seq.back() for the initial home;
/// open sub-walks then count as escape-terminated (no end hit, escape step
/// included in their length). step_signs[t] is the edge factor of the
/// transition walk_seq[t] -> walk_seq[t+1]; empty means all +1.
void extract_reused_walks(const std::vector<int>& walk_seq, std::vector<RowRecord>& records,
                          bool escaped = false, const std::vector<int>& step_signs = {});

/// One factor row in position space: off-diagonal entries (position, value)
/// with position < k, sorted, exact zeros dropped, plus the diagonal of the
/// inverse-diagonal factor.
struct FinalizedRow {
    std::vector<std::pair<int, double>> entries;
    double z_diag = 0.0;
};

/// Turns walk statistics into row k of the factorization of `b`. With no
/// entries above the diagonal the row is exact and needs no walks; otherwise
/// the one-step transitions are taken from the matrix and the recorded walks
/// supply the rest. Throws std::runtime_error when walks are required but
/// absent, or when the pivot estimate is not positive.
FinalizedRow finalize_row(int k, const RowRecord& rec, const SparseMatrix& b);

struct BuildOptions {
    bool use_walk_reuse = true;
    bool sign_scaling = false;
    /// Check admissibility of the input before building.
    bool validate = true;
    /// Per-walk step bound; a walk exceeding it aborts the build.
    std::int64_t step_cap = 10'000'000;
};

/// Unit-lower factor rows and inverse-diagonal produced in position space.
struct PositionFactor {
    SparseMatrix y;
    std::vector<double> z_diag;
};

/// Runs the walk game over an already-permuted matrix: positions are
/// processed in ascending order, each row sampled until `stop` is satisfied
/// (reused sub-walk credits count), then finalized. `stream` separates the
/// random streams of independent games sharing one master seed.
PositionFactor factorize_positions(const SparseMatrix& b, const StoppingCriterion& stop,
                                   std::uint64_t seed, std::uint64_t stream,
                                   const BuildOptions& opts);

/// Builds the incomplete LDL^T preconditioner of rev(ordering applied to a)
/// by random-walk sampling. Plain games require an R-matrix; sign-scaled
/// games admit positive off-diagonal entries under row diagonal dominance.
IncompleteLdl build_preconditioner(const SparseMatrix& a, const Permutation& ordering,
                                   const StoppingCriterion& stop, std::uint64_t seed,
                                   const BuildOptions& opts = {});

}  // namespace rwsolv
