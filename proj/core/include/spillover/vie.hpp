#pragma once

// Numerical solution of the indifference Volterra equation
//
//   ∫_0^s v_{-i}(s; y) g̃_i(y) dy = c_{-i}(s)
//
// on a uniform grid, by right-endpoint rectangle quadrature (diagonal node
// included). Player i's raw density is pinned down by the opponent's
// primitives only.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "spillover/grid.hpp"
#include "spillover/model.hpp"

namespace spillover {

enum class SolveMethod : std::uint8_t { matrix, picard, cdf };

[[nodiscard]] std::string_view method_name(SolveMethod m) noexcept;

/// Sampled raw density g̃_i and its cumulative G̃_i.
///
/// Index k refers to grid node k. Index 0 holds g̃(0) = c'_{-i}(0)/v_{-i}(0;0)
/// and G̃(0) = 0. The arrays stop early (size < N + 1) when the diagonal
/// v_{-i}(s;s) stops being positive beyond the joint action space; every
/// consumer reads them through solved_cells().
struct DensitySolution {
    Grid grid;
    Player player;
    SolveMethod method;
    std::vector<double> values;
    std::vector<double> cumulative;
    std::size_t iterations = 0;  ///< Picard iterations; 0 for direct methods

    [[nodiscard]] std::size_t solved_cells() const noexcept { return cumulative.size() - 1; }
};

struct PicardOptions {
    double tol = 1e-10;
    std::size_t max_iter = 10000;
};

/// Forward substitution on h Σ_{k<=j} v_{-i}(s_j; s_k) g[k] = c_{-i}(s_j).
/// Validates the assumptions first and throws AssumptionError on failure.
[[nodiscard]] DensitySolution solve_density_matrix(const ContestSpec& spec, Player player, const Grid& grid);

/// Fixed-point iteration on the differentiated equation, discretized so that
/// its fixed point is exactly the matrix solution. Throws SolverError when
/// max_iter is exceeded (the message reports the last change).
[[nodiscard]] DensitySolution solve_density_picard(const ContestSpec& spec, Player player, const Grid& grid,
                                                   PicardOptions options = {});

/// Solves the equivalent equation for G̃ directly,
///   G̃(s) v_{-i}(s;s) = c_{-i}(s) + ∫_0^s ∂_y v_{-i}(s;y) G̃(y) dy,
/// and recovers g̃ by forward differences.
[[nodiscard]] DensitySolution solve_cdf_direct(const ContestSpec& spec, Player player, const Grid& grid);

[[nodiscard]] DensitySolution solve_density(const ContestSpec& spec, Player player, const Grid& grid,
                                            SolveMethod method, PicardOptions options = {});

/// max_j |h Σ_{k<=j} v_{-i}(s_j;s_k) g[k] - c_{-i}(s_j)| over solved nodes.
[[nodiscard]] double vie_residual(const ContestSpec& spec, const DensitySolution& solution);

}  // namespace spillover
