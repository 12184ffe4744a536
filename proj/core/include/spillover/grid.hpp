#pragma once

#include <cstddef>
#include <vector>

namespace spillover {

/// Uniform grid on [0, T] with N cells. Nodes are s_k = kT/N; node(0) = 0 is
/// kept for bookkeeping (atoms, CDF values at zero) and node(N) == T exactly.
class Grid {
public:
    Grid(std::size_t n_cells, double horizon);

    [[nodiscard]] std::size_t cells() const noexcept { return n_; }
    [[nodiscard]] double horizon() const noexcept { return horizon_; }
    [[nodiscard]] double step() const noexcept { return step_; }
    [[nodiscard]] double node(std::size_t k) const noexcept {
        return k == n_ ? horizon_ : static_cast<double>(k) * step_;
    }
    /// Nodes 0..N inclusive.
    [[nodiscard]] std::vector<double> nodes() const;
    /// Largest k with node(k) <= s (clamped to [0, N]).
    [[nodiscard]] std::size_t floor_index(double s) const noexcept;

private:
    std::size_t n_;
    double horizon_;
    double step_;
};

}  // namespace spillover
