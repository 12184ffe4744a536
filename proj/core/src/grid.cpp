#include "spillover/grid.hpp"

#include <cmath>
#include <string>

#include "spillover/error.hpp"

namespace spillover {

Grid::Grid(std::size_t n_cells, double horizon) : n_(n_cells), horizon_(horizon), step_(0.0) {
    if (n_cells == 0) throw SpecError("grid needs at least one cell");
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw SpecError("grid horizon must be a positive finite number, got " + std::to_string(horizon));
    }
    step_ = horizon / static_cast<double>(n_cells);
}

std::vector<double> Grid::nodes() const {
    std::vector<double> out(n_ + 1);
    for (std::size_t k = 0; k <= n_; ++k) out[k] = node(k);
    return out;
}

std::size_t Grid::floor_index(double s) const noexcept {
    if (!(s > 0.0)) return 0;
    if (s >= horizon_) return n_;
    auto k = static_cast<std::size_t>(std::floor(s / step_));
    if (k > n_) k = n_;
    // guard against rounding in s / step
    while (k < n_ && node(k + 1) <= s) ++k;
    while (k > 0 && node(k) > s) --k;
    return k;
}

}  // namespace spillover
