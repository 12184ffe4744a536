#pragma once

// Contest specifications, the built-in parametric families and numeric checks
// of the standing assumptions:
//
//   A1 smoothness          v, c and their derivatives evaluate to finite values
//   A2 monotonicity        c' > 0 and ∂v/∂s < c' for almost all y
//   A3 interiority         v(0;0) > c(0) = 0 and sup_y v(s;y) < c(s) for large s
//   A4 tie discontinuity   v(s;s) > 0 on the joint action space
//
// Convention: player i's value v_i(s; y) takes i's own score s first and the
// opponent's score y second.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spillover/funcexpr.hpp"
#include "spillover/grid.hpp"
#include "spillover/scalar_func.hpp"

namespace spillover {

enum class Player : std::uint8_t { one = 0, two = 1 };

[[nodiscard]] constexpr Player other(Player p) noexcept { return p == Player::one ? Player::two : Player::one; }
[[nodiscard]] constexpr std::size_t index(Player p) noexcept { return static_cast<std::size_t>(p); }
[[nodiscard]] constexpr int number(Player p) noexcept { return static_cast<int>(p) + 1; }
inline constexpr std::array<Player, 2> kPlayers{Player::one, Player::two};

struct PlayerSpec {
    ScalarFunc2 value;  ///< v_i(s; y), utility units
    ScalarFunc1 cost;   ///< c_i(s), utility units
    std::string label;
};

/// The parsed form of a contest configuration document. A ContestSpec keeps the
/// configuration it was built from so sweeps and prize balancing can rebuild it.
struct ContestConfig {
    std::string family;
    ParamMap params;
    std::array<std::string, 2> value_exprs;  ///< "expr" family only
    std::array<std::string, 2> cost_exprs;   ///< "expr" family only
    double tie_weight = 0.5;
    std::optional<double> horizon;
    std::array<double, 2> value_scale{1.0, 1.0};
};

class ContestSpec {
public:
    ContestSpec(std::array<PlayerSpec, 2> players, double tie_weight, std::optional<double> horizon_hint,
                ContestConfig origin = {});

    [[nodiscard]] const PlayerSpec& player(Player p) const noexcept { return players_[index(p)]; }
    [[nodiscard]] const PlayerSpec& opponent(Player p) const noexcept { return players_[index(other(p))]; }
    /// Probability that player one wins a tie. Ties have probability zero in
    /// equilibrium, so the solver never reads it.
    [[nodiscard]] double tie_weight() const noexcept { return tie_weight_; }
    [[nodiscard]] const std::optional<double>& horizon_hint() const noexcept { return horizon_hint_; }
    [[nodiscard]] const ContestConfig& config() const noexcept { return origin_; }

    /// Same contest with player p's prize multiplied by gamma.
    [[nodiscard]] ContestSpec with_value_scale(Player p, double gamma) const;
    [[nodiscard]] ContestSpec with_horizon(double horizon) const;

private:
    std::array<PlayerSpec, 2> players_;
    double tie_weight_;
    std::optional<double> horizon_hint_;
    ContestConfig origin_;
};

/// Built-in family identifiers accepted by make_family.
[[nodiscard]] const std::vector<std::string>& family_names();

/// Builds one of the built-in families (see docs/config_schema.md for parameters).
/// Throws SpecError for an unknown family or a missing/out-of-range parameter.
[[nodiscard]] ContestSpec make_family(std::string_view name, const ParamMap& params);

/// Builds a contest from a full configuration, including the "expr" family and
/// the top-level tie_weight / horizon / value_scale options.
[[nodiscard]] ContestSpec make_contest(const ContestConfig& config);

// ---------------------------------------------------------------------------
// Assumption checks

enum class Assumption : std::uint8_t { smoothness, monotonicity, interiority, tie_discontinuity };

[[nodiscard]] std::string_view assumption_name(Assumption a) noexcept;

struct Violation {
    Player player;
    double s = 0.0;
    double y = 0.0;
    std::string message;
};

struct AssumptionCheck {
    Assumption assumption;
    bool passed = true;
    std::optional<Violation> first_violation;
};

struct ValidationReport {
    std::array<AssumptionCheck, 4> checks;
    /// T_i: smallest grid node where sup_y v_i(s;y) < c_i(s), if one exists on the grid.
    std::array<std::optional<double>, 2> score_bound;

    [[nodiscard]] bool ok() const noexcept;
    [[nodiscard]] const AssumptionCheck& check(Assumption a) const noexcept {
        return checks[static_cast<std::size_t>(a)];
    }
    /// One line per failed assumption, empty when ok().
    [[nodiscard]] std::string summary() const;
};

/// Checks A1-A4 on grid samples. Violations are report entries, never exceptions.
[[nodiscard]] ValidationReport validate_assumptions(const ContestSpec& spec, const Grid& grid);

/// Horizon for solving: the hint when present, otherwise T = 1 doubled until
/// sup_y v_i(T;y) < c_i(T) for both players (at most 20 doublings).
[[nodiscard]] double choose_horizon(const ContestSpec& spec);

/// Turns loser-side spillovers into the winner-prize form:
/// v(s;y) = vhat(s;y) + c_opp(y) + c_own(s), cost c_own.
[[nodiscard]] PlayerSpec transform_loser_spillovers(const ScalarFunc2& vhat, const ScalarFunc1& c_own,
                                                    const ScalarFunc1& c_opp, std::string label = {});

// ---------------------------------------------------------------------------
// More than two players

/// A player whose prize depends on every opponent's score. The value expression
/// uses `s` for the own score and `s1`, `s2`, ... for players' scores
/// (1-based; the player's own slot is never read).
struct MultiPlayerSpec {
    expr::Expr value;
    ScalarFunc1 cost;
    std::string label;
};

class MultiContestSpec {
public:
    MultiContestSpec(std::vector<MultiPlayerSpec> players, ParamMap params, double tie_weight,
                     std::optional<double> horizon_hint);

    [[nodiscard]] std::size_t size() const noexcept { return players_.size(); }
    [[nodiscard]] const MultiPlayerSpec& player(std::size_t k) const { return players_.at(k); }
    [[nodiscard]] double tie_weight() const noexcept { return tie_weight_; }
    [[nodiscard]] const std::optional<double>& horizon_hint() const noexcept { return horizon_hint_; }

    /// v_k(s; scores) with scores indexed by player (0-based); scores[k] is ignored.
    [[nodiscard]] double value(std::size_t k, double s, const std::vector<double>& scores) const;

    /// Two-player contest between players i and j (0-based) with every other
    /// score held at zero. Player one of the result is i.
    [[nodiscard]] ContestSpec restrict_to_duo(std::size_t i, std::size_t j) const;

    /// Player k's value as a function of (own s, y), where y is player `varying`'s
    /// score and all other opponents score zero.
    [[nodiscard]] ScalarFunc2 value_against(std::size_t k, std::size_t varying) const;

private:
    std::vector<MultiPlayerSpec> players_;
    ParamMap params_;
    double tie_weight_;
    std::optional<double> horizon_hint_;
    std::vector<expr::Expr> bound_values_;
};

}  // namespace spillover
