#ifndef QPAN_CLASSIFY_HPP
#define QPAN_CLASSIFY_HPP

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qpan/errors.hpp"
#include "qpan/pole_orbit.hpp"

namespace qpan {

/// Number of conclusion-bearing rows in the classification table.
inline constexpr int kConclusionRows = 13;

/// Total rows including the informational value-distribution note.
inline constexpr int kTableRows = 14;

/// @brief Three-valued truth state for hypothesis fields that may be
/// unresolved. An unknown never resolves to a guess: rows that need the
/// value stay silent until it is supplied.
enum class TriState { unknown, yes, no };

/// @brief Dilation regime of the shift parameter q, which is assumed to
/// avoid 0 and the unit circle throughout.
enum class QRegime {
    inside,   ///< 0 < |q| < 1 (orbits contract toward the origin)
    outside,  ///< |q| > 1 (orbits expand to infinity)
};

/// @brief Kind of solution a set of hypotheses posits, if any.
///
/// A transcendental meromorphic solution of order zero is in particular a
/// non-constant meromorphic solution of order zero, so rows keyed on the
/// weaker kind also accept the stronger one. Entire carries no growth-order
/// information and stands on its own.
enum class SolutionKind {
    unspecified,
    entire,
    meromorphic_order_zero,
    transcendental_meromorphic_order_zero,
};

/// @brief How an emitted conclusion constrains the solution set.
enum class ConclusionKind {
    existence,            ///< solutions of the stated kind exist
    non_existence,        ///< solutions of the stated kind do not exist
    necessary_condition,  ///< any posited solution must satisfy the statement
    informational,        ///< value-distribution note, not a checkable bound
};

/// @brief Evaluation state of one table row against a set of hypotheses.
enum class RowState {
    contradicted,  ///< some hypothesis of the row is definitely false
    pending,       ///< an unresolved field blocks the row; no conclusion
    fires,         ///< all hypotheses of the row are entailed
};

/// @brief Structural hypotheses about the equation
/// f'(z) = a(z) f(qz) + P(z, f) / Q(z, f) and about a posited solution.
///
/// The boolean coefficient flags describe the constant-coefficient
/// specialization with right-hand side A f(qz) + B f^2 + C f + D and are
/// authoritative declarations: rows keyed on them fire without degree data.
/// Explicitly supplied degrees can refute such a declaration (a nonzero B
/// forces degrees (2, 0), a zero B forces s = 0 and p <= 1), in which case
/// the refuted rows are treated as contradicted rather than guessed at.
/// The tri-state fields default to unknown and only gate rows that
/// genuinely need them.
struct Hypotheses {
    QRegime q_regime{QRegime::inside};
    bool b_zero{false};      ///< the quadratic coefficient B vanishes
    bool d_zero{false};      ///< the constant term D vanishes
    SolutionKind solution_kind{SolutionKind::unspecified};
    TriState f_divides_p{TriState::unknown};  ///< f is a factor of P(z, f)
    TriState n_small{TriState::unknown};      ///< N(r, f) = S(r, f)
    bool rational_coeffs{false};  ///< a(z) and all coefficients are rational
    TriState f0_zero{TriState::unknown};      ///< the initial value f(0) is 0
    std::optional<RHSDegrees> degrees{};      ///< deg_f P and deg_f Q, if known
};

/// @brief One emitted statement, tagged with exactly one table clause.
struct Conclusion {
    std::string_view citation;  ///< clause id of the row that produced it
    ConclusionKind kind{ConclusionKind::necessary_condition};
    std::string statement;
};

/// @brief Everything the decision table concludes from one hypothesis set.
///
/// The flag no_solution_of_this_kind is raised when supplied facts violate
/// an entailed necessary condition or an entailed non-existence statement;
/// each violation is spelled out in inconsistencies.
struct Verdict {
    std::vector<Conclusion> conclusions;
    std::vector<std::string_view> citations;
    bool no_solution_of_this_kind{false};
    std::vector<std::string> inconsistencies;
};

/// @brief Static description of one table row, for coverage audits.
struct TableRow {
    std::string_view id;       ///< clause id, e.g. "III.ii.a"
    std::string_view summary;  ///< abbreviated hypotheses and conclusion
    bool informational{false};  ///< note row rather than a conclusion row
};

/// @brief The full decision table: 13 conclusion rows plus one
/// informational note, in fixed clause order.
///
/// Clause ids group the rows: the I.* rows concern the quadratic
/// constant-coefficient equation with B != 0, the II.* rows the linear
/// one with B = 0, and the III.* rows the general rational right-hand
/// side under growth hypotheses on the solution.
[[nodiscard]] inline const std::array<TableRow, kTableRows>&
classification_table() noexcept {
    static const std::array<TableRow, kTableRows> table{{
        {"I.i",
         "contracting shift, B != 0, D = 0: uncountably many transcendental "
         "entire solutions",
         false},
        {"I.ii",
         "contracting shift, B != 0, D != 0: solution count branches on "
         "whether f(0) = 0",
         false},
        {"I.iii",
         "contracting shift, B != 0: no exponential polynomial solutions",
         false},
        {"I.iv",
         "contracting shift, B != 0: poles are simple; a local meromorphic "
         "solution at the origin extends to the plane, and every nonzero "
         "point carries a simple-pole local solution",
         false},
        {"I.v",
         "expanding real shift with positive real coefficients: order-zero "
         "meromorphic solutions reduce to -1/(B (z - z0)) + s0",
         false},
        {"II.i",
         "B = 0: entire solutions abound under a contracting shift and are "
         "absent under an expanding one",
         false},
        {"II.ii",
         "B = 0, contracting shift: no meromorphic solution carries a pole",
         false},
        {"III.i.a",
         "entire solution, contracting shift, f divides P: deg_f P <= 3 and "
         "deg_f Q <= 2",
         false},
        {"III.i.b",
         "entire solution, contracting shift, f does not divide P: "
         "deg_f P <= 2 and deg_f Q <= 1",
         false},
        {"III.ii.a",
         "order-zero solution, deg_f P > deg_f Q + 1: deg_f Q <= 1 and "
         "deg_f P >= 2 deg_f Q",
         false},
        {"III.ii.b",
         "order-zero solution, deg_f P <= deg_f Q + 1: deg_f Q <= 1 and "
         "deg_f P <= 2",
         false},
        {"III.ii.c",
         "order-zero solution with N(r, f) = S(r, f): deg_f Q = 0 and "
         "deg_f P <= 1",
         false},
        {"III.iii.a",
         "transcendental order-zero solution, rational data: deg_f Q = 1 "
         "and deg_f P = 3, or deg_f Q = 0 and deg_f P <= 2",
         false},
        {"III.iii.b",
         "degree gap exactly two: the distinct-pole counting function "
         "exhausts the characteristic",
         true},
    }};
    return table;
}

namespace detail {

inline TriState tri_from_bool(bool b) noexcept {
    return b ? TriState::yes : TriState::no;
}

inline TriState tri_and(TriState a, TriState b) noexcept {
    if (a == TriState::no || b == TriState::no) return TriState::no;
    if (a == TriState::unknown || b == TriState::unknown)
        return TriState::unknown;
    return TriState::yes;
}

inline TriState tri_not(TriState a) noexcept {
    if (a == TriState::yes) return TriState::no;
    if (a == TriState::no) return TriState::yes;
    return TriState::unknown;
}

/// Whether the posited kind is (at least) a non-constant meromorphic
/// solution of order zero.
inline TriState posits_order_zero(SolutionKind k) noexcept {
    switch (k) {
        case SolutionKind::meromorphic_order_zero:
        case SolutionKind::transcendental_meromorphic_order_zero:
            return TriState::yes;
        case SolutionKind::entire:
            return TriState::no;
        case SolutionKind::unspecified:
            return TriState::unknown;
    }
    return TriState::unknown;
}

inline TriState posits_exactly(SolutionKind k, SolutionKind want) noexcept {
    if (k == SolutionKind::unspecified) return TriState::unknown;
    return tri_from_bool(k == want);
}

/// Whether known degrees are consistent with the declared
/// constant-coefficient right-hand side. Absent degrees cannot refute the
/// declaration, so they count as consistent.
inline bool quadratic_compatible(const Hypotheses& h) noexcept {
    if (!h.degrees) return true;
    if (h.b_zero) return h.degrees->s == 0 && h.degrees->p <= 1;
    return h.degrees->s == 0 && h.degrees->p == 2;
}

inline void check_classify_degrees(const Hypotheses& h) {
    if (!h.degrees) return;
    if (h.degrees->p < 0 || h.degrees->p > kMaxRhsDegree ||
        h.degrees->s < 0 || h.degrees->s > kMaxRhsDegree)
        throw validation_error("right-hand side degrees must lie in [0, 8]");
}

inline RowState to_row_state(TriState t) noexcept {
    switch (t) {
        case TriState::yes:
            return RowState::fires;
        case TriState::no:
            return RowState::contradicted;
        case TriState::unknown:
            return RowState::pending;
    }
    return RowState::pending;
}

inline RowState row_state_at(int row, const Hypotheses& h) noexcept {
    const TriState quad = tri_from_bool(quadratic_compatible(h));
    const TriState b_nonzero = tri_from_bool(!h.b_zero);
    const TriState b_vanishes = tri_from_bool(h.b_zero);
    const TriState inside = tri_from_bool(h.q_regime == QRegime::inside);
    const TriState outside = tri_not(inside);
    const TriState rational = tri_from_bool(h.rational_coeffs);
    TriState deg_gap_high = TriState::unknown;
    TriState deg_gap_low = TriState::unknown;
    TriState deg_gap_two = TriState::unknown;
    if (h.degrees) {
        deg_gap_high = tri_from_bool(h.degrees->p > h.degrees->s + 1);
        deg_gap_low = tri_not(deg_gap_high);
        deg_gap_two = tri_from_bool(h.degrees->multiplier() == 2);
    }
    switch (row) {
        case 0:
            return to_row_state(tri_and(tri_and(b_nonzero, inside),
                                        tri_and(tri_from_bool(h.d_zero), quad)));
        case 1:
            return to_row_state(
                tri_and(tri_and(b_nonzero, inside),
                        tri_and(tri_from_bool(!h.d_zero), quad)));
        case 2:
        case 3:
            return to_row_state(tri_and(tri_and(b_nonzero, inside), quad));
        case 4:
            return to_row_state(
                tri_and(tri_and(b_nonzero, outside),
                        tri_and(quad, posits_order_zero(h.solution_kind))));
        case 5:
            return to_row_state(tri_and(b_vanishes, quad));
        case 6:
            return to_row_state(tri_and(tri_and(b_vanishes, inside), quad));
        case 7:
            return to_row_state(
                tri_and(inside,
                        tri_and(posits_exactly(h.solution_kind,
                                               SolutionKind::entire),
                                h.f_divides_p)));
        case 8:
            return to_row_state(
                tri_and(inside,
                        tri_and(posits_exactly(h.solution_kind,
                                               SolutionKind::entire),
                                tri_not(h.f_divides_p))));
        case 9:
            return to_row_state(
                tri_and(posits_order_zero(h.solution_kind), deg_gap_high));
        case 10:
            return to_row_state(
                tri_and(posits_order_zero(h.solution_kind), deg_gap_low));
        case 11:
            return to_row_state(
                tri_and(posits_order_zero(h.solution_kind), h.n_small));
        case 12:
            return to_row_state(tri_and(
                posits_exactly(
                    h.solution_kind,
                    SolutionKind::transcendental_meromorphic_order_zero),
                rational));
        case 13:
            return to_row_state(tri_and(
                tri_and(posits_exactly(
                            h.solution_kind,
                            SolutionKind::transcendental_meromorphic_order_zero),
                        rational),
                deg_gap_two));
        default:
            return RowState::contradicted;
    }
}

}  // namespace detail

/// @brief Evaluates a single table row, addressed by clause id, against a
/// hypothesis set without emitting any statement.
///
/// Exposed so coverage and monotonicity audits can watch rows switch
/// between pending, fires, and contradicted as unknowns resolve.
///
/// @throws validation_error on an unknown clause id or degrees outside
/// [0, kMaxRhsDegree].
[[nodiscard]] inline RowState row_state(std::string_view id,
                                        const Hypotheses& h) {
    detail::check_classify_degrees(h);
    const auto& table = classification_table();
    for (int i = 0; i < kTableRows; ++i)
        if (table[static_cast<std::size_t>(i)].id == id)
            return detail::row_state_at(i, h);
    throw validation_error("unknown classification clause id");
}

/// @brief Runs the full decision table and gathers every entailed
/// conclusion.
///
/// Each fired row contributes one tagged statement. Three-valued fields
/// that a row needs must be resolved for it to fire; the one deliberate
/// exception is the solution-count row I.ii, whose branch condition
/// f(0) = 0 only selects the wording, so an unknown initial value reports
/// both branches in a single statement. After collection, supplied degrees
/// are checked against every fired degree bound, and a posited entire
/// solution is checked against a fired entire-non-existence row; any
/// violation raises no_solution_of_this_kind with an explanation.
///
/// @throws validation_error on degrees outside [0, kMaxRhsDegree].
[[nodiscard]] inline Verdict classify(const Hypotheses& h) {
    detail::check_classify_degrees(h);
    Verdict v;
    std::array<bool, kTableRows> fired{};
    for (int i = 0; i < kTableRows; ++i)
        fired[static_cast<std::size_t>(i)] =
            detail::row_state_at(i, h) == RowState::fires;
    const auto& table = classification_table();
    auto add = [&](int row, ConclusionKind kind, std::string statement) {
        const TableRow& r = table[static_cast<std::size_t>(row)];
        v.conclusions.push_back({r.id, kind, std::move(statement)});
        v.citations.push_back(r.id);
    };
    if (fired[0])
        add(0, ConclusionKind::existence,
            "uncountably many transcendental entire solutions exist");
    if (fired[1]) {
        std::string statement;
        if (h.f0_zero == TriState::yes)
            statement = "exactly one transcendental entire solution exists";
        else if (h.f0_zero == TriState::no)
            statement =
                "uncountably many transcendental entire solutions exist";
        else
            statement =
                "if f(0) = 0 there is exactly one transcendental entire "
                "solution; if f(0) != 0 there are uncountably many";
        add(1, ConclusionKind::existence, std::move(statement));
    }
    if (fired[2])
        add(2, ConclusionKind::non_existence,
            "no exponential polynomial solves the equation");
    if (fired[3])
        add(3, ConclusionKind::necessary_condition,
            "every pole of a meromorphic solution is simple; a local "
            "meromorphic solution around the origin extends meromorphically "
            "to the whole plane, and around every nonzero point there is a "
            "local meromorphic solution with a simple pole");
    if (fired[4])
        add(4, ConclusionKind::necessary_condition,
            "provided the shift is real and exceeds one, the coefficients "
            "are positive reals, and some solution carries the stated real "
            "local expansion, every meromorphic solution of order zero has "
            "the form -1/(B (z - z0)) + s0");
    if (fired[5]) {
        if (h.q_regime == QRegime::inside)
            add(5, ConclusionKind::existence,
                "uncountably many transcendental entire solutions exist");
        else
            add(5, ConclusionKind::non_existence, "no entire solutions exist");
    }
    if (fired[6])
        add(6, ConclusionKind::non_existence,
            "no meromorphic solution has a pole, so every meromorphic "
            "solution is entire");
    if (fired[7])
        add(7, ConclusionKind::necessary_condition,
            "deg_f P <= 3 and deg_f Q <= 2");
    if (fired[8])
        add(8, ConclusionKind::necessary_condition,
            "deg_f P <= 2 and deg_f Q <= 1");
    if (fired[9])
        add(9, ConclusionKind::necessary_condition,
            "deg_f Q <= 1 and deg_f P >= 2 deg_f Q");
    if (fired[10])
        add(10, ConclusionKind::necessary_condition,
            "deg_f Q <= 1 and deg_f P <= 2");
    if (fired[11])
        add(11, ConclusionKind::necessary_condition,
            "deg_f Q = 0 and deg_f P <= 1");
    if (fired[12])
        add(12, ConclusionKind::necessary_condition,
            "deg_f Q = 1 and deg_f P = 3, or deg_f Q = 0 and deg_f P <= 2");
    if (fired[13])
        add(13, ConclusionKind::informational,
            "the counting function of distinct poles exhausts the "
            "characteristic: N-bar(r, f) = T(r, f) + S(r, f)");

    auto flag = [&](std::string_view clause, std::string_view bound) {
        v.no_solution_of_this_kind = true;
        std::string why{"supplied degrees (p = "};
        why += std::to_string(h.degrees->p);
        why += ", s = ";
        why += std::to_string(h.degrees->s);
        why += ") violate clause ";
        why += clause;
        why += ": ";
        why += bound;
        v.inconsistencies.push_back(std::move(why));
    };
    if (h.degrees) {
        const int p = h.degrees->p;
        const int s = h.degrees->s;
        if (fired[7] && !(p <= 3 && s <= 2))
            flag("III.i.a", "deg_f P <= 3 and deg_f Q <= 2");
        if (fired[8] && !(p <= 2 && s <= 1))
            flag("III.i.b", "deg_f P <= 2 and deg_f Q <= 1");
        if (fired[9] && !(s <= 1 && p >= 2 * s))
            flag("III.ii.a", "deg_f Q <= 1 and deg_f P >= 2 deg_f Q");
        if (fired[10] && !(s <= 1 && p <= 2))
            flag("III.ii.b", "deg_f Q <= 1 and deg_f P <= 2");
        if (fired[11] && !(s == 0 && p <= 1))
            flag("III.ii.c", "deg_f Q = 0 and deg_f P <= 1");
        if (fired[12] && !((s == 1 && p == 3) || (s == 0 && p <= 2)))
            flag("III.iii.a",
                 "deg_f Q = 1 and deg_f P = 3, or deg_f Q = 0 and "
                 "deg_f P <= 2");
    }
    if (fired[5] && h.q_regime == QRegime::outside &&
        h.solution_kind == SolutionKind::entire) {
        v.no_solution_of_this_kind = true;
        v.inconsistencies.emplace_back(
            "an entire solution is posited, but clause II.i rules out "
            "entire solutions under an expanding shift");
    }
    return v;
}

}  // namespace qpan

#endif
