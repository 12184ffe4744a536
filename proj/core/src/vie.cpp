#include "spillover/vie.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spillover/error.hpp"

namespace spillover {

namespace {

constexpr double kDiagonalFloor = 1e-12;

void require_valid(const ContestSpec& spec, const Grid& grid) {
    const ValidationReport report = validate_assumptions(spec, grid);
    if (!report.ok()) throw AssumptionError("contest violates the standing assumptions:\n" + report.summary());
}

void require_finite(double x, const char* what, double s) {
    if (!std::isfinite(x)) {
        throw SolverError(std::string("non-finite ") + what + " at s = " + std::to_string(s));
    }
}

/// Number of cells we can solve: stops before the first node where the
/// opponent's tie value v_{-i}(s;s) is no longer positive.
std::size_t active_cells(const PlayerSpec& opp, const Grid& grid) {
    for (std::size_t j = 1; j <= grid.cells(); ++j) {
        const double s = grid.node(j);
        if (!(opp.value(s, s) > kDiagonalFloor)) {
            if (j == 1) throw AssumptionError("tie_discontinuity: v(s;s) is not positive at the first grid node");
            return j - 1;
        }
    }
    return grid.cells();
}

DensitySolution empty_solution(const Grid& grid, Player player, SolveMethod method, const PlayerSpec& opp,
                               std::size_t cells) {
    DensitySolution out{grid, player, method, std::vector<double>(cells + 1, 0.0),
                        std::vector<double>(cells + 1, 0.0), 0};
    out.values[0] = opp.cost.derivative(0.0) / opp.value(0.0, 0.0);
    return out;
}

void accumulate(DensitySolution& sol) {
    const double h = sol.grid.step();
    double sum = 0.0;
    sol.cumulative[0] = 0.0;
    for (std::size_t k = 1; k < sol.values.size(); ++k) {
        sum += sol.values[k];
        sol.cumulative[k] = h * sum;
    }
}

}  // namespace

std::string_view method_name(SolveMethod m) noexcept {
    switch (m) {
        case SolveMethod::matrix: return "matrix";
        case SolveMethod::picard: return "picard";
        case SolveMethod::cdf: return "cdf";
    }
    return "unknown";
}

DensitySolution solve_density_matrix(const ContestSpec& spec, Player player, const Grid& grid) {
    require_valid(spec, grid);
    const PlayerSpec& opp = spec.opponent(player);
    const std::size_t n = active_cells(opp, grid);
    const double h = grid.step();
    DensitySolution sol = empty_solution(grid, player, SolveMethod::matrix, opp, n);

    for (std::size_t j = 1; j <= n; ++j) {
        const double sj = grid.node(j);
        double acc = 0.0;
        for (std::size_t k = 1; k < j; ++k) acc += opp.value(sj, grid.node(k)) * sol.values[k];
        const double diag = opp.value(sj, sj);
        const double g = (opp.cost(sj) / h - acc) / diag;
        require_finite(g, "density", sj);
        sol.values[j] = g;
    }
    accumulate(sol);
    return sol;
}

DensitySolution solve_density_picard(const ContestSpec& spec, Player player, const Grid& grid,
                                     PicardOptions options) {
    if (!(options.tol > 0.0)) throw SolverError("Picard tolerance must be positive");
    if (options.max_iter == 0) throw SolverError("Picard max_iter must be positive");
    require_valid(spec, grid);
    const PlayerSpec& opp = spec.opponent(player);
    const std::size_t n = active_cells(opp, grid);
    const double h = grid.step();
    DensitySolution sol = empty_solution(grid, player, SolveMethod::picard, opp, n);

    // Row j of the kernel: (v(s_j; s_k) - v(s_{j-1}; s_k)) / h for k < j, a
    // difference quotient standing in for v'(s_j; s_k). Stored packed.
    std::vector<double> kernel(n * (n + 1) / 2);
    std::vector<double> forcing(n + 1), diagonal(n + 1);
    auto row = [](std::size_t j) { return (j - 1) * j / 2; };
    for (std::size_t j = 1; j <= n; ++j) {
        const double sj = grid.node(j), sp = grid.node(j - 1);
        for (std::size_t k = 1; k < j; ++k) {
            const double sk = grid.node(k);
            kernel[row(j) + k - 1] = (opp.value(sj, sk) - opp.value(sp, sk)) / h;
        }
        forcing[j] = (opp.cost(sj) - opp.cost(sp)) / h;
        diagonal[j] = opp.value(sj, sj);
    }

    std::vector<double> current(n + 1, 0.0), next(n + 1, 0.0);
    double change = 0.0;
    for (std::size_t m = 1; m <= options.max_iter; ++m) {
        change = 0.0;
        for (std::size_t j = 1; j <= n; ++j) {
            double acc = 0.0;
            const double* kr = kernel.data() + row(j);
            for (std::size_t k = 1; k < j; ++k) acc += kr[k - 1] * current[k];
            next[j] = (forcing[j] - h * acc) / diagonal[j];
            require_finite(next[j], "Picard iterate", grid.node(j));
            change = std::max(change, std::abs(next[j] - current[j]));
        }
        std::swap(current, next);
        if (change <= options.tol) {
            std::copy(current.begin() + 1, current.end(), sol.values.begin() + 1);
            // iterate m only confirmed iterate m - 1; report the latter
            sol.iterations = m > 1 ? m - 1 : 1;
            accumulate(sol);
            return sol;
        }
    }
    throw SolverError("Picard iteration did not converge in " + std::to_string(options.max_iter) +
                      " iterations; last sup change " + std::to_string(change));
}

DensitySolution solve_cdf_direct(const ContestSpec& spec, Player player, const Grid& grid) {
    require_valid(spec, grid);
    const PlayerSpec& opp = spec.opponent(player);
    const std::size_t n = active_cells(opp, grid);
    const double h = grid.step();
    DensitySolution sol = empty_solution(grid, player, SolveMethod::cdf, opp, n);

    std::vector<double>& G = sol.cumulative;
    for (std::size_t j = 1; j <= n; ++j) {
        const double sj = grid.node(j);
        const double diag = opp.value(sj, sj);
        double acc = 0.0;
        for (std::size_t k = 1; k < j; ++k) acc += opp.value.d_opp(sj, grid.node(k)) * G[k];
        const double lhs = 1.0 - h * opp.value.d_opp(sj, sj) / diag;
        if (!(lhs > 0.0)) {
            throw SolverError("CDF-direct system is singular at s = " + std::to_string(sj) + "; refine the grid");
        }
        G[j] = (opp.cost(sj) / diag + h * acc / diag) / lhs;
        require_finite(G[j], "cumulative", sj);
        sol.values[j] = (G[j] - G[j - 1]) / h;
    }
    return sol;
}

DensitySolution solve_density(const ContestSpec& spec, Player player, const Grid& grid, SolveMethod method,
                              PicardOptions options) {
    switch (method) {
        case SolveMethod::matrix: return solve_density_matrix(spec, player, grid);
        case SolveMethod::picard: return solve_density_picard(spec, player, grid, options);
        case SolveMethod::cdf: return solve_cdf_direct(spec, player, grid);
    }
    throw SolverError("unknown solve method");
}

double vie_residual(const ContestSpec& spec, const DensitySolution& solution) {
    const PlayerSpec& opp = spec.opponent(solution.player);
    const Grid& grid = solution.grid;
    const double h = grid.step();
    double worst = 0.0;
    for (std::size_t j = 1; j <= solution.solved_cells(); ++j) {
        const double sj = grid.node(j);
        double acc = 0.0;
        for (std::size_t k = 1; k <= j; ++k) acc += opp.value(sj, grid.node(k)) * solution.values[k];
        worst = std::max(worst, std::abs(h * acc - opp.cost(sj)));
    }
    return worst;
}

}  // namespace spillover
