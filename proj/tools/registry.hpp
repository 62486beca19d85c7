#ifndef QPAN_TOOLS_REGISTRY_HPP
#define QPAN_TOOLS_REGISTRY_HPP

#include <array>
#include <string_view>

namespace qpan::cli {

/// @brief The batch commands, in dispatch order.
inline constexpr std::array<std::string_view, 8> kCommands{
    "solve",        "laurent",    "continue",   "residual",
    "expoly-check", "pole-orbit", "nevanlinna", "classify",
};

/// @brief One library operation and the command whose contract exposes it.
struct OpBinding {
    std::string_view op;
    std::string_view command;
};

/**
 * @brief Dispatch registry: every public library operation bound to exactly
 *        one command.
 *
 * This table is the reachability contract of the tool. run() validates the
 * requested command against it, and the test suite audits that each
 * operation appears exactly once and every command carries at least one
 * operation. Operations a command calls as plumbing for another entry (a
 * solver building the series a continuation walks, say) are not rebound
 * here; the binding names the command that exposes the operation's own
 * result.
 */
inline constexpr std::array<OpBinding, 30> kOpRegistry{{
    {"solve_entire", "solve"},
    {"solve_linear", "solve"},
    {"enumerate_family", "solve"},
    {"check_forced_uniqueness", "solve"},
    {"solve_laurent_origin", "laurent"},
    {"solve_laurent_at", "laurent"},
    {"jet_from_series", "continue"},
    {"continue_step", "continue"},
    {"evaluate_continued", "continue"},
    {"add", "residual"},
    {"mul", "residual"},
    {"differentiate", "residual"},
    {"dilate", "residual"},
    {"evaluate", "residual"},
    {"ep_normalize", "expoly-check"},
    {"ep_derivative", "expoly-check"},
    {"ep_dilate", "expoly-check"},
    {"ep_mul", "expoly-check"},
    {"ep_residual", "expoly-check"},
    {"ep_leading_witness", "expoly-check"},
    {"propagate_order", "pole-orbit"},
    {"growth_lower_bound", "pole-orbit"},
    {"meromorphy_verdict", "pole-orbit"},
    {"proximity", "nevanlinna"},
    {"counting", "nevanlinna"},
    {"characteristic", "nevanlinna"},
    {"verify_q_shift", "nevanlinna"},
    {"verify_first_main", "nevanlinna"},
    {"verify_mokhonko", "nevanlinna"},
    {"classify", "classify"},
}};

} // namespace qpan::cli

#endif // QPAN_TOOLS_REGISTRY_HPP
