#pragma once

// Export formats. Column orders and keys are documented in docs/output_formats.md.

#include <ostream>
#include <string>

#include "spillover/analysis.hpp"
#include "spillover/equilibrium.hpp"

namespace spillover {

/// Columns node, G1, G2, g1, g2; one row per grid node including 0; %.17g.
void write_equilibrium_csv(const Equilibrium& eq, std::ostream& out);

/// {s_bar, s_bar_raw, atoms, atoms_raw, payoffs, win_prob, expected_scores, ...}
[[nodiscard]] std::string equilibrium_summary_json(const Equilibrium& eq);

/// Columns param_value, payoff_1, payoff_2, atom_1, atom_2, s_bar, win_prob_1.
void write_sweep_csv(const SweepResult& result, std::ostream& out);

[[nodiscard]] std::string sweep_summary_json(const SweepResult& result);

[[nodiscard]] std::string participation_json(const ParticipationReport& report);

/// Full-precision rendering used by every CSV writer.
[[nodiscard]] std::string format_double(double x);

}  // namespace spillover
