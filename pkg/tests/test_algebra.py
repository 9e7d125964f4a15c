"""End-to-end checks of the derivation-chain verifiers.

Every verifier must pass with exact residuals and at least three rational
instantiation points. A few targeted identities are re-derived here by hand
so a silent change to either the displays or the engine shows up twice.
"""

import time
from fractions import Fraction

import pytest

from ksl.algebra import (
    run_all,
    verify_antihol_completion_bound,
    verify_base_chain,
    verify_chain_consistency,
    verify_grad_box_elimination,
    verify_midpoint_obstruction,
    verify_mixed_completion_bound,
    verify_radical_gap_monotone,
    verify_refined_chain,
    verify_substitution_identities,
)
from ksl.algebra.checks import (
    display_completion_quadruple,
    display_mixed_quadruple,
)
from ksl.algebra.ring import VARS, rf, rf_equal, v
from ksl.errors import DomainError

ALL_EXACT = [
    lambda: verify_substitution_identities(1),
    lambda: verify_substitution_identities(2),
    lambda: verify_substitution_identities(3),
    verify_antihol_completion_bound,
    verify_midpoint_obstruction,
    verify_mixed_completion_bound,
    verify_base_chain,
    verify_grad_box_elimination,
    verify_refined_chain,
    verify_chain_consistency,
]


class TestVerifiersPass:
    @pytest.mark.parametrize("factory", ALL_EXACT, ids=lambda f: getattr(f, "__name__", "sub"))
    def test_passes(self, factory):
        report = factory()
        failed = [s.name for s in report.steps if not s.ok]
        assert report.passed, f"failed steps: {failed}"

    @pytest.mark.parametrize("factory", ALL_EXACT, ids=lambda f: getattr(f, "__name__", "sub"))
    def test_has_three_instantiations(self, factory):
        report = factory()
        assert len(report.instantiations) >= 3
        assert all(rec["agree"] for rec in report.instantiations)

    def test_every_step_records_zero_residual(self):
        for report in run_all():
            for step in report.steps:
                assert step.ok, f"{report.name}:{step.name} residual {step.residual}"

    def test_full_suite_under_budget(self):
        start = time.monotonic()
        reports = run_all()
        elapsed = time.monotonic() - start
        assert all(r.passed for r in reports)
        assert elapsed < 30.0


class TestTargetedIdentities:
    def test_midpoint_value_is_q(self):
        quad = display_completion_quadruple()
        assert rf_equal(quad.B.substitute("gamma", 2 * v("a")), v("q"))

    def test_midpoint_kills_hessian_weight(self):
        quad = display_completion_quadruple()
        assert rf_equal(quad.D.substitute("gamma", 2 * v("a")), rf(0))

    def test_parameter_off_mixed_quadruple(self):
        quad = display_mixed_quadruple()
        n = v("n")
        beta = v("beta")
        assert rf_equal(quad.A.substitute("b", rf(0)), -((beta + 1) ** 2) / n)
        assert rf_equal(quad.D.substitute("b", rf(0)), rf(1))

    def test_lam_zero_drops_plain_energy_weights(self):
        quad1 = display_completion_quadruple()
        quad2 = display_mixed_quadruple()
        # with lam = 0 the plain-energy weights reduce to the lam-free parts
        c1 = quad1.C.substitute("lam", rf(0))
        assert rf_equal(c1, rf(-1))
        c2 = quad2.C.substitute("lam", rf(0))
        assert rf_equal(c2, rf(0))

    def test_feasibility_quadratic_at_reference_point(self):
        # k^2 - 4k + 1 at n = 2, q = 2; roots 2 +- sqrt(3)
        kq = v("k") ** 2 + (2 - 4 * (v("n") + 1) / ((v("n") - 1) * v("q"))) * v("k") + 1
        pt = {name: Fraction(1) for name in VARS}
        pt.update({"n": Fraction(2), "q": Fraction(2)})
        coefs = [kq.substitute("k", rf(c)).evaluate(pt) for c in (0, 1, 2)]
        # interpolate: p(k) = c2 k^2 + c1 k + c0
        c0 = coefs[0]
        c2 = (coefs[2] - 2 * coefs[1] + coefs[0]) / 2
        c1 = coefs[1] - c0 - c2
        assert (c2, c1, c0) == (1, -4, 1)

    def test_objective_reference_value(self):
        report = verify_refined_chain()
        sample = [s for s in report.steps if s.name == "step9_sample_value"]
        assert len(sample) == 1 and sample[0].ok

    def test_discriminant_reference_value(self):
        report = verify_base_chain()
        sample = [s for s in report.steps if s.name == "step7_sample_value"]
        assert len(sample) == 1 and sample[0].ok

    def test_threshold_identity_present_and_exact(self):
        report = verify_base_chain()
        thr = [s for s in report.steps if s.name == "step8_threshold_identity"]
        assert len(thr) == 1 and thr[0].ok

    def test_chain_consistency_threshold_agreement(self):
        report = verify_chain_consistency()
        agree = [s for s in report.steps if s.name == "threshold_agreement"]
        assert len(agree) == 1 and agree[0].ok


class TestMonotonicityVerifier:
    def test_reference_triple_passes(self):
        report = verify_radical_gap_monotone(Fraction(1), Fraction(3), Fraction(1))
        assert report.passed

    def test_tight_triple_passes(self):
        report = verify_radical_gap_monotone(
            Fraction(1), Fraction(21, 10), Fraction(11, 10)
        )
        assert report.passed

    def test_degenerate_triple_rejected(self):
        with pytest.raises(DomainError):
            verify_radical_gap_monotone(Fraction(1), Fraction(2), Fraction(2))

    def test_nonpositive_inputs_rejected(self):
        with pytest.raises(DomainError):
            verify_radical_gap_monotone(Fraction(0), Fraction(3), Fraction(1))


class TestBadIndex:
    def test_substitution_identities_rejects_bad_idx(self):
        with pytest.raises(DomainError):
            verify_substitution_identities(4)
