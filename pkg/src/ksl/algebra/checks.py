"""Derivation-chain verifiers.

Each ``verify_*`` function replays one derivation of the coefficient algebra
from the axioms in :mod:`ksl.algebra.terms`, compares the outcome against the
independently transcribed target coefficients with exact rational-function
equality, and packages the outcome as a :class:`PassReport`. Every symbolic
pass also carries at least three numeric instantiations at random rational
points that avoid all excluded denominators; agreement there is exact
Fraction equality, not a tolerance.

Square-root identities are checked with :class:`RadExpr` arithmetic: the
radical is isolated, arithmetic happens component-wise over a shared
radicand, and whenever a radicand is rescaled (r2 = f^2 * r1) the squared
relation is verified exactly and the positivity of f on the admissible region
is spot-checked at sample points. Cleared positive factors in the inequality
equivalences are recorded in the step notes, because dividing by them is
where the inequality direction comes from.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from ..errors import DomainError
from .ring import (
    Poly,
    RadExpr,
    RationalFunction,
    VARS,
    rad_equal,
    rescale_radicand,
    rf,
    rf_at_radexpr,
    rf_equal,
    v,
)
from .terms import (
    ANTICROSS,
    ANTIHESS2,
    BOXSQ,
    FormalExpr,
    GRAD4,
    GRADBOX,
    K_EQ,
    K_PLAIN,
    MIXHESS2,
    MIXCROSS,
    TRACEFREE,
    anticross_identity,
    cauchy_schwarz_defect,
    eq_in_boxsq,
    eq_in_gradbox,
    ibp,
    mixcross_identity,
    pure_hessian_upper_bound,
)


@dataclass
class StepCheck:
    name: str
    ok: bool
    residual: str = "0"
    note: str = ""


@dataclass
class PassReport:
    name: str
    passed: bool
    steps: list[StepCheck] = field(default_factory=list)
    instantiations: list[dict] = field(default_factory=list)


@dataclass(frozen=True)
class CoefficientSet:
    """The recurring quadruple multiplying the four basis integrals."""

    A: RationalFunction
    B: RationalFunction
    C: RationalFunction
    D: RationalFunction


# shorthand generators
_g = v("gamma")
_a = v("a")
_b = v("b")
_be = v("beta")
_k = v("k")
_ep = v("eps")
_lam = v("lam")
_q = v("q")
_n = v("n")
_l1 = v("lam1")
_x = v("x")
_y = v("y")

# denominators excluded from every instantiation, per the localization the
# whole calculus lives in
_EXCLUDED = [
    Poly.var("beta"),
    Poly.var("gamma"),
    Poly.var("beta") * Poly.var("q") - Poly.var("gamma"),
    Poly.var("k"),
    Poly.var("n"),
]


def _random_point(rng: random.Random) -> dict[str, Fraction]:
    return {
        name: Fraction(rng.randint(-12, 12), rng.randint(1, 7)) for name in VARS
    }


def _instantiate(
    pairs: list[tuple[str, RationalFunction, RationalFunction]],
    seed: int,
    count: int = 3,
    extra_avoid: tuple[Poly, ...] = (),
) -> list[dict]:
    """Evaluate each lhs/rhs pair at `count` random rational points.

    Points where any excluded or involved denominator vanishes are resampled.
    Agreement is exact Fraction equality.
    """
    rng = random.Random(seed)
    records: list[dict] = []
    attempts = 0
    while len(records) < count:
        attempts += 1
        if attempts > 10_000:
            raise RuntimeError("could not find denominator-avoiding points")
        pt = _random_point(rng)
        if any(p.evaluate(pt) == 0 for p in _EXCLUDED):
            continue
        if any(p.evaluate(pt) == 0 for p in extra_avoid):
            continue
        try:
            agree = all(lhs.evaluate(pt) == rhs.evaluate(pt) for _, lhs, rhs in pairs)
        except ZeroDivisionError:
            continue
        records.append(
            {
                "point": {name: str(val) for name, val in pt.items()},
                "agree": agree,
            }
        )
    return records


def _match_expr(
    prefix: str, derived: FormalExpr, expected: FormalExpr
) -> tuple[list[StepCheck], list[tuple[str, RationalFunction, RationalFunction]]]:
    steps = []
    pairs = []
    for term in sorted(derived.terms() | expected.terms(), key=repr):
        dcoef = derived.coefficient(term)
        ecoef = expected.coefficient(term)
        ok = rf_equal(dcoef, ecoef)
        residual = "0" if ok else repr(dcoef.num * ecoef.den - ecoef.num * dcoef.den)
        steps.append(StepCheck(f"{prefix}[{term!r}]", ok, residual))
        pairs.append((f"{prefix}[{term!r}]", dcoef, ecoef))
    return steps, pairs


def _match_rf(
    name: str, derived: RationalFunction, expected: RationalFunction, note: str = ""
) -> StepCheck:
    ok = rf_equal(derived, expected)
    residual = "0" if ok else repr(derived.num * expected.den - expected.num * derived.den)
    return StepCheck(name, ok, residual, note)


def _finish(name: str, steps: list[StepCheck], insts: list[dict]) -> PassReport:
    passed = all(s.ok for s in steps) and all(r["agree"] for r in insts)
    return PassReport(name=name, passed=passed, steps=steps, instantiations=insts)


# ---------------------------------------------------------------------------
# transcribed target displays (independent of the derivation code paths)


def display_sub1() -> FormalExpr:
    return FormalExpr({K_EQ: 1 / _be, K_PLAIN: -_lam / _be, GRAD4: _be + 1})


def display_sub2() -> FormalExpr:
    return FormalExpr(
        {
            K_EQ: (_be * _q - _g) / _be,
            K_PLAIN: _lam * (_g - _be) / _be,
            GRAD4: (_be + 1) ** 2,
        }
    )


def display_completion_quadruple() -> CoefficientSet:
    A1 = _g * (_g - 1) - 2 * _a * (_g - 1) + _a**2 + (3 * _g - 4 * _a) * (_be + 1) + (
        2 - 2 * _a / _g
    ) * (_be + 1) ** 2
    B1 = (3 * _g - 4 * _a) / _be + (2 - 2 * _a / _g) * ((_be * _q - _g) / _be)
    C1 = (4 * _a - 3 * _g) * _lam / _be + (2 - 2 * _a / _g) * _lam * (_g - _be) / _be - 1
    D1 = 2 * _a / _g - 1
    return CoefficientSet(A1, B1, C1, D1)


def display_pure_completion_intermediate() -> FormalExpr:
    # bound on the completed pure Hessian square before the equation is used
    return FormalExpr(
        {
            GRAD4: _g * (_g - 1) - 2 * _a * (_g - 1) + _a**2,
            GRADBOX: 3 * _g - 4 * _a,
            BOXSQ: 2 - 2 * _a / _g,
            MIXHESS2: 2 * _a / _g - 1,
            K_PLAIN: rf(-1),
        }
    )


def display_mixed_quadruple() -> CoefficientSet:
    A2 = (
        _b**2 * (1 - 1 / _n)
        + (_be + 1) ** 2 * (2 * _b / _g - 1 / _n)
        + 2 * (_be + 1) * _b * (1 - 1 / _n)
    )
    B2 = (2 * _b / _g - 1 / _n) * (_q - _g / _be) + (2 * _b / _be) * (1 - 1 / _n)
    C2 = _lam * ((2 * _b / _g - 1 / _n) * ((_g - _be) / _be) - (2 * _b / _be) * (1 - 1 / _n))
    D2 = 1 - 2 * _b / _g
    return CoefficientSet(A2, B2, C2, D2)


def display_mixed_intermediate() -> FormalExpr:
    return FormalExpr(
        {
            MIXHESS2: 1 - 2 * _b / _g,
            GRAD4: _b**2 * (1 - 1 / _n),
            BOXSQ: 2 * _b / _g - 1 / _n,
            GRADBOX: 2 * _b * (1 - 1 / _n),
        }
    )


def display_solved_gradbox() -> FormalExpr:
    # gradient-box integral expressed through the other three basis terms
    den = _be * _q - _g
    return FormalExpr(
        {
            BOXSQ: 1 / den,
            K_PLAIN: -_lam * (_q - 1) / den,
            GRAD4: (_be * _q - _be - _g - 1) * (_be + 1) / den,
        }
    )


# ---------------------------------------------------------------------------
# verifiers


def verify_substitution_identities(idx: int) -> PassReport:
    """The three substitution identities for the transformed equation.

    (1) expands the box factor inside the gradient-box integral; (2) does the
    same inside the squared box and then integrates by parts; (3) is the
    mixed-Hessian contraction identity, which enters as a trusted axiom and
    is cross-checked through the elimination derivation.
    """
    name = f"substitution_identities_{idx}"
    steps: list[StepCheck] = []
    pairs: list[tuple[str, RationalFunction, RationalFunction]] = []

    if idx == 1:
        derived = eq_in_gradbox()
        s, p = _match_expr("expand_box_in_gradient_energy", derived, display_sub1())
        steps += s
        pairs += p
    elif idx == 2:
        raw = ibp(eq_in_boxsq())
        intermediate = FormalExpr(
            {
                K_EQ: (_be * _q - _be - _g - 1) / _be,
                K_PLAIN: _lam * (_g + 1) / _be,
                GRADBOX: _be + 1,
            }
        )
        s, p = _match_expr("after_parts_integration", raw, intermediate)
        steps += s
        pairs += p
        final = raw.replace(GRADBOX, display_sub1())
        s, p = _match_expr("after_first_identity", final, display_sub2())
        steps += s
        pairs += p
        lam_zero = display_sub2().coefficient(K_PLAIN).substitute("lam", rf(0))
        steps.append(
            _match_rf("plain_energy_weight_vanishes_without_lam", lam_zero, rf(0))
        )
    elif idx == 3:
        derived = mixcross_identity()
        expected = FormalExpr({BOXSQ: 1 / _g, GRADBOX: rf(1), MIXHESS2: -1 / _g})
        s, p = _match_expr("trusted_axiom_transcription", derived, expected)
        for check in s:
            check.note = "axiom, not derived; proof needs geometry outside this engine"
        steps += s
        pairs += p
        # cross-check: the two independent routes to the solved gradient-box
        # form (direct elimination vs solving identities (1)+(2)) agree
        elim = verify_grad_box_elimination()
        steps.append(
            StepCheck(
                "cross_check_via_elimination",
                elim.passed,
                "0" if elim.passed else "see elimination report",
                "consistency of the calculus built on this axiom",
            )
        )
    else:
        raise DomainError(f"idx must be 1, 2 or 3, got {idx}")

    insts = _instantiate(pairs, seed=100 + idx) if pairs else []
    return _finish(name, steps, insts)


def verify_antihol_completion_bound() -> PassReport:
    """Completion of the square on the pure-type Hessian (parameter a)."""
    steps: list[StepCheck] = []

    # |pure Hessian + a grad pair/v|^2 expanded; the two conjugate cross
    # terms are real and equal, hence the single 2a weight
    expansion = FormalExpr({ANTIHESS2: rf(1), ANTICROSS: 2 * _a, GRAD4: _a**2})
    e1 = expansion.replace(ANTICROSS, anticross_identity())
    e2 = e1.replace(ANTIHESS2, pure_hessian_upper_bound())
    steps.append(
        StepCheck(
            "upper_bound_applied_with_positive_weight",
            rf_equal(e1.coefficient(ANTIHESS2), rf(1)),
            "0",
            "bound usable because the pure-Hessian weight is +1",
        )
    )
    e3 = e2.replace(MIXCROSS, mixcross_identity())
    s, pairs = _match_expr(
        "pre_equation_form", e3, display_pure_completion_intermediate()
    )
    steps += s

    e4 = e3.replace(GRADBOX, display_sub1()).replace(BOXSQ, display_sub2())
    quad = display_completion_quadruple()
    expected = FormalExpr(
        {GRAD4: quad.A, K_EQ: quad.B, K_PLAIN: quad.C, MIXHESS2: quad.D}
    )
    s, p = _match_expr("final_coefficients", e4, expected)
    steps += s
    pairs += p

    # parameter-off cross-check: a = 0 must reproduce the bare combination
    bare = (
        FormalExpr({ANTIHESS2: rf(1)})
        .replace(ANTIHESS2, pure_hessian_upper_bound())
        .replace(MIXCROSS, mixcross_identity())
        .replace(GRADBOX, display_sub1())
        .replace(BOXSQ, display_sub2())
    )
    for term in (GRAD4, K_EQ, K_PLAIN, MIXHESS2):
        steps.append(
            _match_rf(
                f"parameter_off[{term!r}]",
                e4.coefficient(term).substitute("a", rf(0)),
                bare.coefficient(term),
            )
        )

    insts = _instantiate(pairs, seed=23)
    return _finish("antihol_completion_bound", steps, insts)


def verify_midpoint_obstruction() -> PassReport:
    """At the midpoint choice gamma = 2a the mixed-energy weight becomes q.

    This is the obstruction to reaching the conjectured constant with the
    pure-Hessian completion alone: a positive weight can never be pushed
    nonpositive. Also checks the identity that chains the two nonpositivity
    conditions together.
    """
    quad = display_completion_quadruple()
    steps = []
    b1_mid = quad.B.substitute("gamma", 2 * _a)
    steps.append(_match_rf("mixed_energy_weight_at_midpoint", b1_mid, _q))
    d1_mid = quad.D.substitute("gamma", 2 * _a)
    steps.append(_match_rf("hessian_weight_at_midpoint", d1_mid, rf(0)))
    # C1 - [(2 - 2a/gamma)(q-1) lam - 1] = -lam * B1, which is how the B- and
    # C-conditions combine into the displayed constraint on lam
    combined = quad.C - ((2 - 2 * _a / _g) * (_q - 1) * _lam - 1)
    steps.append(_match_rf("condition_combination_identity", combined, -_lam * quad.B))

    pairs = [
        ("midpoint_value", b1_mid, _q),
        ("combination", combined, -_lam * quad.B),
    ]
    insts = _instantiate(pairs, seed=31)
    # the worked example: a = 3, beta = 1, q = 2 evaluates the midpoint form to 2
    pt = {name: Fraction(1) for name in VARS}
    pt.update({"a": Fraction(3), "gamma": Fraction(6), "beta": Fraction(1), "q": Fraction(2)})
    val = quad.B.evaluate(pt)
    insts.append({"point": {k: str(x) for k, x in pt.items()}, "agree": val == 2})
    return _finish("midpoint_obstruction", steps, insts)


def verify_mixed_completion_bound() -> PassReport:
    """Completion of the square on the mixed Hessian via the trace inequality."""
    steps: list[StepCheck] = []
    e0 = cauchy_schwarz_defect()
    e1 = e0.replace(MIXCROSS, mixcross_identity())
    s, pairs = _match_expr("pre_equation_form", e1, display_mixed_intermediate())
    steps += s

    e2 = e1.replace(GRADBOX, display_sub1()).replace(BOXSQ, display_sub2())
    quad = display_mixed_quadruple()
    expected = FormalExpr(
        {GRAD4: quad.A, K_EQ: quad.B, K_PLAIN: quad.C, MIXHESS2: quad.D}
    )
    s, p = _match_expr("final_coefficients", e2, expected)
    steps += s
    pairs += p

    steps.append(
        _match_rf(
            "parameter_off_quartic",
            quad.A.substitute("b", rf(0)),
            -((_be + 1) ** 2) / _n,
        )
    )
    steps.append(
        _match_rf("parameter_off_hessian", quad.D.substitute("b", rf(0)), rf(1))
    )

    insts = _instantiate(pairs, seed=47)
    return _finish("mixed_completion_bound", steps, insts)


def _combined_base_quadruple() -> CoefficientSet:
    """The k-weighted combination with the trace split applied (display form)."""
    q1 = display_completion_quadruple()
    q2 = display_mixed_quadruple()
    Dc = q1.D + _k * q2.D
    A = q1.A + _k * q2.A + (Dc / _n) * (_be + 1) ** 2
    B = q1.B + _k * q2.B + (Dc / _n) * (_q - _g / _be)
    C = (
        (4 * _a - 3 * _g) / _be
        + (2 - 2 * _a / _g) * (_g / _be - 1)
        + _k * (2 * _b / _g - 1 / _n) * (_g / _be - 1)
        - (2 * _b * _k / _be) * (1 - 1 / _n)
        + (_g / _be - 1) * (Dc / _n)
    ) * _lam - 1
    return CoefficientSet(A, B, C, Dc)


def verify_base_chain() -> PassReport:
    """The zero-slack parameter chain, from the combined bound to the threshold.

    Eight steps: (i) combine the two completion bounds and split off the
    trace-free Hessian part; (ii) the b-choice pins the trace-free weight at
    -eps; (iii) weights at gamma = 0; (iv) the a-choice kills the mixed
    energy weight; (v) the quartic weight factors into a quadratic in beta;
    (vi) its discriminant condition is the displayed k-inequality; (vii) the
    k-discriminant at eps = 0 and the slack ceiling; (viii) the k lower bound
    is a root and the resulting threshold equals the closed-form constant.
    """
    steps: list[StepCheck] = []
    pairs: list[tuple[str, RationalFunction, RationalFunction]] = []

    # (i) combine, split the mixed-Hessian weight into trace-free + trace
    q1 = display_completion_quadruple()
    q2 = display_mixed_quadruple()
    pre = FormalExpr(
        {
            GRAD4: q1.A + _k * q2.A,
            K_EQ: q1.B + _k * q2.B,
            K_PLAIN: q1.C + _k * q2.C,
            MIXHESS2: q1.D + _k * q2.D,
        }
    )
    Dc = pre.coefficient(MIXHESS2)
    split = FormalExpr(
        {
            GRAD4: pre.coefficient(GRAD4),
            K_EQ: pre.coefficient(K_EQ),
            K_PLAIN: pre.coefficient(K_PLAIN),
            TRACEFREE: Dc,
            BOXSQ: Dc / _n,
        }
    ).replace(BOXSQ, display_sub2())
    comb = _combined_base_quadruple()
    expected = FormalExpr(
        {GRAD4: comb.A, K_EQ: comb.B, K_PLAIN: comb.C, TRACEFREE: comb.D}
    )
    s, p = _match_expr("step1_combined", split, expected)
    steps += s
    pairs += p

    # (ii) the b-choice forces the trace-free weight to -eps
    b_choice = ((_g * _ep / 2 + _a - _g / 2) / _k) + _g / 2
    A_b = comb.A.substitute("b", b_choice)
    B_b = comb.B.substitute("b", b_choice)
    C_b = comb.C.substitute("b", b_choice)
    D_b = comb.D.substitute("b", b_choice)
    steps.append(_match_rf("step2_tracefree_weight", D_b, -_ep))
    theta = 1 + ((_n - 1) / _n) * (_k + _ep)
    A_ii = (
        _g * (_g - 1)
        - 2 * _a * (_g - 1)
        + _a**2
        + (3 * _g - 4 * _a) * (_be + 1)
        + (_be + 1) ** 2 * theta
        + b_choice**2 * _k * (1 - 1 / _n)
        + 2 * b_choice * _k * (_be + 1) * (1 - 1 / _n)
    )
    B_ii = (3 * _g - 4 * _a) / _be + (_q - _g / _be) * theta + (
        2 * b_choice * _k / _be
    ) * (1 - 1 / _n)
    C_ii = (
        (4 * _a - 3 * _g) / _be
        + (_g / _be - 1) * theta
        - (2 * b_choice * _k / _be) * (1 - 1 / _n)
    ) * _lam - 1
    steps.append(_match_rf("step2_quartic_weight", A_b, A_ii))
    steps.append(_match_rf("step2_mixed_energy_weight", B_b, B_ii))
    steps.append(_match_rf("step2_plain_energy_weight", C_b, C_ii))
    pairs += [("step2_A", A_b, A_ii), ("step2_B", B_b, B_ii), ("step2_C", C_b, C_ii)]

    # (iii) weights at gamma = 0 (continuity in gamma; the pole cancels)
    A0 = A_b.limit_var_zero("gamma")
    B0 = B_b.limit_var_zero("gamma")
    C0 = C_b.limit_var_zero("gamma")
    A0_disp = (
        2 * _a
        + _a**2
        + (_a**2 / _k) * ((_n - 1) / _n)
        - 2 * _a * (_be + 1) * ((_n + 1) / _n)
        + theta * (_be + 1) ** 2
    )
    B0_disp = -(2 * _a / _be) * ((_n + 1) / _n) + _q * theta
    C0_disp = ((2 * _a / _be) * ((_n + 1) / _n) - theta) * _lam - 1
    steps.append(_match_rf("step3_quartic_weight_at_zero", A0, A0_disp))
    steps.append(_match_rf("step3_mixed_energy_weight_at_zero", B0, B0_disp))
    steps.append(_match_rf("step3_plain_energy_weight_at_zero", C0, C0_disp))
    pairs += [("step3_A", A0, A0_disp), ("step3_B", B0, B0_disp), ("step3_C", C0, C0_disp)]

    # (iv) the a-choice kills the mixed energy weight
    a_choice = _q * theta * _n * _be / (2 * (_n + 1))
    steps.append(
        _match_rf("step4_mixed_energy_killed", B0.substitute("a", a_choice), rf(0))
    )

    # (v) quartic weight = theta * (quadratic in beta); theta > 0 is the
    # cleared factor (positive whenever k, eps >= 0)
    A0_a = A0.substitute("a", a_choice)
    quad_beta = (
        _be**2
        * (_q**2 * theta * ((_n * _k + _n - 1) * _n) / (4 * _k * (_n + 1) ** 2) - _q + 1)
        + _be * (2 - _q / (_n + 1))
        + 1
    )
    steps.append(
        _match_rf(
            "step5_quartic_factors",
            A0_a,
            theta * quad_beta,
            note="cleared factor: 1 + ((n-1)/n)(k+eps), positive for k > 0, eps >= 0",
        )
    )
    pairs.append(("step5", A0_a, theta * quad_beta))

    # (vi) discriminant of the beta-quadratic vs the displayed k-inequality;
    # cleared factor q/(k(n+1)^2), positive on the admissible region
    disc_beta = (2 - _q / (_n + 1)) ** 2 - 4 * (
        _q**2 * theta * ((_n * _k + _n - 1) * _n) / (4 * _k * (_n + 1) ** 2) - _q + 1
    )
    L = (
        _n * (_n - 1) * _q * _k**2
        + _k * (_q * (2 * _n**2 + _n * (_n - 1) * _ep - 2 * _n) - 4 * _n**2 - 4 * _n)
        + _q * _ep * (_n - 1) ** 2
        + _q * _n * (_n - 1)
    )
    steps.append(
        _match_rf(
            "step6_discriminant_is_k_inequality",
            disc_beta * _k * (_n + 1) ** 2,
            -_q * L,
            note=(
                "cleared factor: q/(k(n+1)^2); side condition recorded: the "
                "k-quadratic's leading weight n(n-1)q is positive for n >= 2"
            ),
        )
    )
    pairs.append(("step6", disc_beta * _k * (_n + 1) ** 2, -_q * L))

    # (vii) k-discriminant of the inequality at eps = 0, and the eps ceiling
    Ak = _n * (_n - 1) * _q
    Bk = _q * (2 * _n**2 + _n * (_n - 1) * _ep - 2 * _n) - 4 * _n**2 - 4 * _n
    Ck = _q * _ep * (_n - 1) ** 2 + _q * _n * (_n - 1)
    delta = Bk**2 - 4 * Ak * Ck
    delta0 = delta.substitute("eps", rf(0))
    delta0_disp = (4 * _n**2 + 4 * _n) ** 2 - 16 * (_n**2 + _n) * _q * (_n**2 - _n)
    steps.append(_match_rf("step7_discriminant_at_zero_slack", delta0, delta0_disp))
    pairs.append(("step7", delta0, delta0_disp))
    pt22 = {name: Fraction(1) for name in VARS}
    pt22.update({"n": Fraction(2), "q": Fraction(2)})
    val22 = delta0_disp.evaluate(pt22)
    steps.append(
        StepCheck(
            "step7_sample_value",
            val22 == 192,
            "0" if val22 == 192 else str(val22),
            "24^2 - 16*6*2*2 = 192 at n = 2, q = 2",
        )
    )
    # the slack ceiling is an exact root of the eps-quadratic delta(eps)
    rad_eps = Poly.var("q") ** 2 + 4 * Poly.var("q") * Poly.var("n") * (
        Poly.var("n") + 1
    )
    eps_max = RadExpr(
        (4 * _n * (_n + 1) - 2 * _q * (_n - 1)) / (_n * (_n - 1) * _q),
        -2 * (_n - 1) / (_n * (_n - 1) * _q),
        rad_eps,
    )
    delta_at_ceiling = rf_at_radexpr(delta, "eps", eps_max)
    steps.append(
        StepCheck(
            "step7_slack_ceiling_is_root",
            delta_at_ceiling.is_zero,
            "0" if delta_at_ceiling.is_zero else repr(delta_at_ceiling),
            "delta(eps) is an upward parabola in eps; feasibility is eps <= ceiling",
        )
    )
    lead_eps = delta.num.coeffs_in("eps").get(2, Poly())
    steps.append(
        _match_rf(
            "step7_eps_parabola_opens_up",
            rf(lead_eps, delta.den),
            (_q * _n * (_n - 1)) ** 2,
            note="leading eps-weight is a square, positive on the admissible region",
        )
    )

    # (viii) the k lower bound is a root of the zero-slack inequality, and
    # the threshold it induces equals the closed-form constant's threshold
    L0 = L.substitute("eps", rf(0))
    rad2 = (Poly.var("n") ** 2 + Poly.var("n")) ** 2 - (
        Poly.var("n") ** 2 - Poly.var("n")
    ) * Poly.var("q") * (Poly.var("n") ** 2 + Poly.var("n"))
    k_lo_big = RadExpr(
        (2 * _n**2 + 2 * _n - _q * (_n**2 - _n)) / (_n * (_n - 1) * _q),
        -2 / (_n * (_n - 1) * _q),
        rad2,
    )
    root_val = rf_at_radexpr(L0, "k", k_lo_big)
    steps.append(
        StepCheck(
            "step8_lower_bound_is_root",
            root_val.is_zero,
            "0" if root_val.is_zero else repr(root_val),
        )
    )
    rad_small = (Poly.var("n") + 1) * (
        Poly.var("n") + 1 - (Poly.var("n") - 1) * Poly.var("q")
    )
    try:
        k_lo_small = rescale_radicand(k_lo_big, rad_small, _n)
        rescale_ok = True
    except DomainError:
        rescale_ok = False
    steps.append(
        StepCheck(
            "step8_radicand_rescaling",
            rescale_ok,
            "0" if rescale_ok else "radicand relation failed",
            "big radicand = n^2 * small radicand; factor n > 0",
        )
    )
    if rescale_ok:
        lhs_inner = (k_lo_small * ((_n - 1) / _n) + 1) * (_q - 1)
        rhs_inner = RadExpr(
            (_q - 1) * (2 * _n + _q + 2) / (_q * _n),
            -2 * (_q - 1) / (_q * _n),
            rad_small,
        )
        thr_ok = rad_equal(lhs_inner, rhs_inner)
        steps.append(
            StepCheck(
                "step8_threshold_identity",
                thr_ok,
                "0" if thr_ok else "component mismatch",
                "reciprocals agree iff these agree; radical isolated, compared "
                "component-wise over the shared radicand",
            )
        )

    insts = _instantiate(pairs, seed=53, extra_avoid=(Poly.var("n") + 1,))
    return _finish("base_chain", steps, insts)


def verify_radical_gap_monotone(
    alpha: Fraction, beta_c: Fraction, gamma_c: Fraction
) -> PassReport:
    """Numeric monotonicity check for psi(t) = alpha*t - sqrt(alpha^2 t^2 - beta_c t + gamma_c).

    Samples 1000 points of psi on (0, t_max) with
    t_max = (beta_c - sqrt(beta_c^2 - 4 alpha^2 gamma_c))/(2 alpha^2), asserts
    strict increase between consecutive samples, and checks the closed-form
    derivative is positive at each sample. This is the one sampling-based
    verifier; everything else in this module is exact.
    """
    alpha = Fraction(alpha)
    beta_c = Fraction(beta_c)
    gamma_c = Fraction(gamma_c)
    if alpha <= 0 or beta_c <= 0 or gamma_c <= 0:
        raise DomainError("alpha, beta_c, gamma_c must all be positive")
    if beta_c * beta_c <= 4 * alpha * alpha * gamma_c:
        raise DomainError(
            "constraint beta_c^2 > 4*alpha^2*gamma_c violated: "
            f"{beta_c}^2 <= 4*{alpha}^2*{gamma_c}"
        )
    af, bf, gf = float(alpha), float(beta_c), float(gamma_c)
    t_max = (bf - math.sqrt(bf * bf - 4 * af * af * gf)) / (2 * af * af)

    def psi(t: float) -> float:
        return af * t - math.sqrt(af * af * t * t - bf * t + gf)

    def dpsi(t: float) -> float:
        root = math.sqrt(af * af * t * t - bf * t + gf)
        return af - (2 * af * af * t - bf) / (2 * root)

    npts = 1000
    ts = [t_max * i / (npts + 1) for i in range(1, npts + 1)]
    values = [psi(t) for t in ts]
    increasing = all(b > a for a, b in zip(values, values[1:]))
    derivative_pos = all(dpsi(t) > 0 for t in ts)
    steps = [
        StepCheck("strictly_increasing_between_samples", increasing),
        StepCheck("closed_form_derivative_positive", derivative_pos),
    ]
    insts = [
        {
            "point": {"alpha": str(alpha), "beta_c": str(beta_c), "gamma_c": str(gamma_c)},
            "agree": increasing and derivative_pos,
            "samples": npts,
            "t_max": t_max,
        }
    ]
    return _finish("radical_gap_monotone", steps, insts)


def verify_grad_box_elimination() -> PassReport:
    """Eliminating the gradient-box integral from the squared-box identity."""
    steps: list[StepCheck] = []

    raw = ibp(eq_in_boxsq())
    disp6 = FormalExpr(
        {
            K_EQ: (_be * _q - _be - _g - 1) / _be,
            K_PLAIN: _lam * (_g + 1) / _be,
            GRADBOX: _be + 1,
        }
    )
    s, pairs = _match_expr("boxsq_after_parts", raw, disp6)
    steps += s

    # rearranged first identity: the equation-exponent energy through the rest
    keq_solved = FormalExpr(
        {GRADBOX: _be, K_PLAIN: _lam, GRAD4: -_be * (_be + 1)}
    )
    back = display_sub1().replace(K_EQ, keq_solved)
    s, p = _match_expr("rearrangement_consistency", back, FormalExpr({GRADBOX: rf(1)}))
    steps += s
    pairs += p

    eliminated = raw.replace(K_EQ, keq_solved)
    elim_disp = FormalExpr(
        {
            GRADBOX: _be * _q - _g,
            K_PLAIN: _lam * (_q - 1),
            GRAD4: -(_be * _q - _be - _g - 1) * (_be + 1),
        }
    )
    s, p = _match_expr("after_elimination", eliminated, elim_disp)
    steps += s
    pairs += p

    # solve for the gradient-box integral and compare the displayed form
    solved = display_solved_gradbox()
    # plugging the solved form into the eliminated identity must return BOXSQ
    roundtrip = elim_disp.replace(GRADBOX, solved)
    s, p = _match_expr("solve_roundtrip", roundtrip, FormalExpr({BOXSQ: rf(1)}))
    steps += s
    pairs += p

    # alternate derivation: solve the two substitution identities directly
    alt = display_sub2().replace(K_EQ, keq_solved)
    s, p = _match_expr("alternate_derivation", alt, elim_disp)
    steps += s
    pairs += p

    steps.append(
        _match_rf(
            "plain_energy_weight_vanishes_without_lam",
            solved.coefficient(K_PLAIN).substitute("lam", rf(0)),
            rf(0),
        )
    )

    insts = _instantiate(pairs, seed=61)
    # worked instantiation from the contract: gamma=1, beta=2, q=3, lam=1/5
    pt = {name: Fraction(1) for name in VARS}
    pt.update(
        {"gamma": Fraction(1), "beta": Fraction(2), "q": Fraction(3), "lam": Fraction(1, 5)}
    )
    agree = all(
        eliminated.coefficient(t).evaluate(pt) == elim_disp.coefficient(t).evaluate(pt)
        for t in elim_disp.terms()
    )
    insts.append({"point": {k: str(x) for k, x in pt.items()}, "agree": agree})
    return _finish("grad_box_elimination", steps, insts)


def _refined_quadruple() -> tuple[RationalFunction, ...]:
    """Displayed weights after the gradient-box elimination (gamma form)."""
    S = 3 * _g - 4 * _a + 2 * _b * _k * (1 - 1 / _n)
    den = _be * _q - _g
    A = (
        _g * (_g - 1)
        - 2 * _a * (_g - 1)
        + _a**2
        + _b**2 * _k * (1 - 1 / _n)
        + S * (_be * _q - _be - _g - 1) * (_be + 1) / den
    )
    B = 2 - 2 * _a / _g + _k * (2 * _b / _g - 1 / _n) + S / den
    C = -(_lam * (_q - 1) * S / den + 1)
    D = 2 * _a / _g - 1 + _k * (1 - 2 * _b / _g)
    return A, B, C, D


def verify_refined_chain() -> PassReport:
    """The spectral-parameter chain, from the combined bound to the objective.

    Nine steps: (i) combine the two completion bounds and eliminate the
    gradient-box integral; (ii) the b-choice zeroes the Hessian weight;
    (iii) weights at gamma = 0; (iv) the ratio substitution turns the quartic
    weight into a quadratic in y times x; (v) its discriminant condition is
    the upper bound on x; (vi) the mixed-energy condition is the lower bound
    on x; (vii) compatibility of the two bounds is the displayed k-quadratic,
    whose roots are the feasibility interval endpoints; (viii) the spectral
    bound rearranges to the threshold inequality; (ix) at the upper x-bound
    the threshold is the stated objective.
    """
    steps: list[StepCheck] = []
    pairs: list[tuple[str, RationalFunction, RationalFunction]] = []

    # (i) combine and eliminate
    pure = display_pure_completion_intermediate()
    mixed = display_mixed_intermediate()
    combined = pure + mixed.scale(_k)
    e1 = combined.replace(GRADBOX, display_solved_gradbox())
    A, B, C, D = _refined_quadruple()
    expected = FormalExpr({GRAD4: A, BOXSQ: B, K_PLAIN: C, MIXHESS2: D})
    s, p = _match_expr("step1_combined", e1, expected)
    steps += s
    pairs += p

    # (ii) zero the Hessian weight
    b_choice = (_g / 2) * (1 - 1 / _k) + _a / _k
    steps.append(
        _match_rf("step2_hessian_weight", D.substitute("b", b_choice), rf(0))
    )
    A_b = A.substitute("b", b_choice)
    B_b = B.substitute("b", b_choice)
    C_b = C.substitute("b", b_choice)
    S_b = (3 * _g - 4 * _a + 2 * b_choice * _k * (1 - 1 / _n))
    den = _be * _q - _g
    B_ii = 1 + (_n - 1) * _k / _n + S_b / den
    steps.append(_match_rf("step2_box_weight_simplifies", B_b, B_ii))
    pairs.append(("step2_B", B_b, B_ii))

    # (iii) weights at gamma = 0
    A0 = A_b.limit_var_zero("gamma")
    B0 = B_b.limit_var_zero("gamma")
    C0 = C_b.limit_var_zero("gamma")
    A0_disp = (
        2 * _a
        + _a**2
        + (_a**2 / _k) * ((_n - 1) / _n)
        - 2 * _a * ((_n + 1) / _n) * (_be * _q - _be - 1) * (_be + 1) / (_be * _q)
    )
    B0_disp = 1 + (_n - 1) * _k / _n - (2 * _a / (_be * _q)) * ((_n + 1) / _n)
    C0_disp = (_lam * (_q - 1) / (_be * _q)) * (2 * _a * (_n + 1) / _n) - 1
    steps.append(_match_rf("step3_quartic_weight_at_zero", A0, A0_disp))
    steps.append(_match_rf("step3_box_weight_at_zero", B0, B0_disp))
    steps.append(_match_rf("step3_plain_energy_weight_at_zero", C0, C0_disp))
    pairs += [("step3_A", A0, A0_disp), ("step3_B", B0, B0_disp), ("step3_C", C0, C0_disp)]

    # (iv) ratio substitution a = x*y, beta = y; cleared factor x
    A0_xy = A0.substitute("a", _x * _y).substitute("beta", _y)
    quad_y = (
        _y**2 * (_x + _x * ((_n - 1) / (_k * _n)) - 2 * ((_n + 1) / _n) + 2 * ((_n + 1) / (_q * _n)))
        + _y * (2 + 2 * ((_n + 1) / (_q * _n)) - 2 * ((_q - 1) / _q) * ((_n + 1) / _n))
        + 2 * ((_n + 1) / (_q * _n))
    )
    steps.append(
        _match_rf(
            "step4_quartic_is_x_times_quadratic",
            A0_xy,
            _x * quad_y,
            note="cleared factor: x = a/beta, nonzero by construction",
        )
    )
    pairs.append(("step4", A0_xy, _x * quad_y))

    # (v) discriminant of the y-quadratic against the x upper bound;
    # cleared factor 8(n+1)(nk+n-1)/(q k n^2) > 0
    y2 = _x + _x * ((_n - 1) / (_k * _n)) - 2 * ((_n + 1) / _n) + 2 * ((_n + 1) / (_q * _n))
    y1 = 2 + 2 * ((_n + 1) / (_q * _n)) - 2 * ((_q - 1) / _q) * ((_n + 1) / _n)
    y0 = 2 * ((_n + 1) / (_q * _n))
    disc_y = y1**2 - 4 * y2 * y0
    x_hi = (4 * _n**2 + 4 * _n + _q) * _k / (2 * (_n + 1) * (_k * _n + _n - 1))
    c_hi = 8 * (_n + 1) * (_n * _k + _n - 1) / (_q * _k * _n**2)
    steps.append(
        _match_rf(
            "step5_discriminant_linear_in_x",
            disc_y,
            c_hi * (x_hi - _x),
            note="cleared factor: 8(n+1)(nk+n-1)/(q k n^2), positive for k > 0",
        )
    )
    pairs.append(("step5", disc_y, c_hi * (x_hi - _x)))

    # (vi) the mixed-energy condition is the x lower bound
    B0_x = B0.substitute("a", _x * _y).substitute("beta", _y)
    x_lo = (_k * _n + _n - _k) * _q / (2 * (_n + 1))
    c_lo = 2 * (_n + 1) / (_q * _n)
    steps.append(
        _match_rf(
            "step6_box_weight_linear_in_x",
            B0_x,
            c_lo * (x_lo - _x),
            note="cleared factor: 2(n+1)/(qn), positive",
        )
    )
    pairs.append(("step6", B0_x, c_lo * (x_lo - _x)))

    # (vii) compatibility of the bounds is the k-quadratic; its roots are the
    # feasibility interval endpoints
    kq = _k**2 + (2 - 4 * (_n + 1) / ((_n - 1) * _q)) * _k + 1
    gap_factor = _q * _n * (_n - 1) / (2 * (_n + 1) * (_k * _n + _n - 1))
    steps.append(
        _match_rf(
            "step7_gap_is_k_quadratic",
            x_hi - x_lo,
            -gap_factor * kq,
            note="cleared factor: qn(n-1)/(2(n+1)(kn+n-1)), positive for n >= 2, k > 0",
        )
    )
    pairs.append(("step7", x_hi - x_lo, -gap_factor * kq))
    rad_small = (Poly.var("n") + 1) * (
        Poly.var("n") + 1 - (Poly.var("n") - 1) * Poly.var("q")
    )
    for label, sign in (("lower", -1), ("upper", 1)):
        endpoint = RadExpr(
            2 * (_n + 1) / (_q * (_n - 1)) - 1,
            sign * 2 / (_q * (_n - 1)),
            rad_small,
        )
        at_root = rf_at_radexpr(kq, "k", endpoint)
        steps.append(
            StepCheck(
                f"step7_{label}_endpoint_is_root",
                at_root.is_zero,
                "0" if at_root.is_zero else repr(at_root),
            )
        )
    lo_end = RadExpr(2 * (_n + 1) / (_q * (_n - 1)) - 1, -2 / (_q * (_n - 1)), rad_small)
    hi_end = RadExpr(2 * (_n + 1) / (_q * (_n - 1)) - 1, 2 / (_q * (_n - 1)), rad_small)
    prod = lo_end * hi_end
    prod_ok = rf_equal(prod.base, rf(1)) and prod.coef.is_zero
    steps.append(
        StepCheck(
            "step7_endpoint_product_one",
            prod_ok,
            "0" if prod_ok else repr(prod),
            "constant term of the monic k-quadratic",
        )
    )

    # (viii) the spectral bound rearranges to the threshold inequality
    C0_x = C0.substitute("a", _x * _y).substitute("beta", _y)
    combo = C0_x + _l1 * B0_x
    rhs_thr = _l1 / (_q - 1) + (1 - _l1 * (1 + (_n - 1) * _k / _n)) * _q * _n / (
        2 * (_q - 1) * (_n + 1) * _x
    )
    c_combo = 2 * _x * (_n + 1) * (_q - 1) / (_q * _n)
    steps.append(
        _match_rf(
            "step8_threshold_rearrangement",
            combo,
            c_combo * (_lam - rhs_thr),
            note="cleared factor: 2x(n+1)(q-1)/(qn), positive for x > 0, q > 1",
        )
    )
    pairs.append(("step8", combo, c_combo * (_lam - rhs_thr)))

    # (ix) the threshold at the upper x-bound is the stated objective
    rhs_at_hi = rhs_thr.substitute("x", x_hi)
    F_disp = (
        (1 - (_n + (_n - 1) * _k) * (_k * _n + _n - 1) * _q / ((4 * _n**2 + 4 * _n + _q) * _k))
        * _l1
        + _q * _n * (_k * _n + _n - 1) / ((4 * _n**2 + 4 * _n + _q) * _k)
    ) / (_q - 1)
    steps.append(_match_rf("step9_objective_recovered", rhs_at_hi, F_disp))
    pairs.append(("step9", rhs_at_hi, F_disp))
    pt = {name: Fraction(1) for name in VARS}
    pt.update({"n": Fraction(2), "q": Fraction(2), "k": Fraction(1), "lam1": Fraction(1)})
    val = F_disp.evaluate(pt)
    steps.append(
        StepCheck(
            "step9_sample_value",
            val == Fraction(10, 13),
            "0" if val == Fraction(10, 13) else str(val),
            "objective at n=2, q=2, k=1, spectral parameter 1",
        )
    )

    insts = _instantiate(
        pairs,
        seed=71,
        extra_avoid=(
            Poly.var("n") + 1,
            Poly.var("n") - 1,
            Poly.var("k") * Poly.var("n") + Poly.var("n") - 1,
            Poly.var("x"),
            Poly.var("q") - 1,
        ),
    )
    return _finish("refined_chain", steps, insts)


def verify_chain_consistency() -> PassReport:
    """The two chains meet: same k-interval, same threshold, exactly.

    The zero-slack k-inequality of the base chain equals n(n-1)q times the
    monic k-quadratic of the refined chain, and the refined objective at the
    interval's lower endpoint equals the base chain's threshold (equivalently
    half the reciprocal of the closed-form constant), with the spectral
    weight vanishing at both endpoints.
    """
    steps: list[StepCheck] = []

    L0 = (
        _n * (_n - 1) * _q * _k**2
        + _k * (_q * (2 * _n**2 - 2 * _n) - 4 * _n**2 - 4 * _n)
        + _q * _n * (_n - 1)
    )
    kq = _k**2 + (2 - 4 * (_n + 1) / ((_n - 1) * _q)) * _k + 1
    steps.append(
        _match_rf(
            "same_k_quadratic",
            L0,
            _n * (_n - 1) * _q * kq,
            note="cleared factor: n(n-1)q, positive for n >= 2, q > 0",
        )
    )

    F_lin = (
        1 - (_n + (_n - 1) * _k) * (_k * _n + _n - 1) * _q / ((4 * _n**2 + 4 * _n + _q) * _k)
    ) / (_q - 1)
    F_const = _q * _n * (_k * _n + _n - 1) / ((_q - 1) * (4 * _n**2 + 4 * _n + _q) * _k)
    rad_small = (Poly.var("n") + 1) * (
        Poly.var("n") + 1 - (Poly.var("n") - 1) * Poly.var("q")
    )
    lo_end = RadExpr(2 * (_n + 1) / (_q * (_n - 1)) - 1, -2 / (_q * (_n - 1)), rad_small)
    hi_end = RadExpr(2 * (_n + 1) / (_q * (_n - 1)) - 1, 2 / (_q * (_n - 1)), rad_small)

    for label, endpoint in (("lower", lo_end), ("upper", hi_end)):
        at_end = rf_at_radexpr(F_lin, "k", endpoint)
        steps.append(
            StepCheck(
                f"spectral_weight_vanishes_at_{label}_endpoint",
                at_end.is_zero,
                "0" if at_end.is_zero else repr(at_end),
            )
        )

    # threshold agreement: objective at the lower endpoint vs 1/(2*C) with C
    # the closed-form constant
    F_at_lo = rf_at_radexpr(F_const, "k", lo_end)
    two_c = RadExpr(
        (_q - 1) * (2 * _n + _q + 2) / (_q * _n),
        -2 * (_q - 1) / (_q * _n),
        rad_small,
    )
    target = two_c.inverse()
    thr_ok = rad_equal(F_at_lo, target)
    steps.append(
        StepCheck(
            "threshold_agreement",
            thr_ok,
            "0" if thr_ok else f"{F_at_lo!r} vs {target!r}",
            "exact, via component-wise radical arithmetic",
        )
    )

    pairs = [("same_k_quadratic", L0, _n * (_n - 1) * _q * kq)]
    insts = _instantiate(pairs, seed=83, extra_avoid=(Poly.var("n") - 1, Poly.var("q") - 1))
    return _finish("chain_consistency", steps, insts)


def run_all() -> list[PassReport]:
    """Every exact verifier, plus the two in-range monotonicity examples."""
    reports = [
        verify_substitution_identities(1),
        verify_substitution_identities(2),
        verify_substitution_identities(3),
        verify_antihol_completion_bound(),
        verify_midpoint_obstruction(),
        verify_mixed_completion_bound(),
        verify_base_chain(),
        verify_grad_box_elimination(),
        verify_refined_chain(),
        verify_chain_consistency(),
        verify_radical_gap_monotone(Fraction(1), Fraction(3), Fraction(1)),
        verify_radical_gap_monotone(Fraction(1), Fraction(21, 10), Fraction(11, 10)),
    ]
    return reports
