"""Tests for generator kinds, the kind registry and generator construction."""

import math

import numpy as np
import pytest

from src.finite_difference import derivative
from src.generator import (
    GENERATOR_KINDS,
    AiryRatio,
    Cot,
    Exp,
    Identity,
    Interval,
    InverseSquare,
    Log,
    Power,
    TanLog,
    create_kind,
    custom_from_function,
    custom_generator,
    make_generator,
    mobius_generator,
    negated,
    shifted,
    validate_generator,
)
from src.schwarzian import Jet3, MobiusMap, schwarzian_of_jet
from src.utils.error_handling import DomainError, EmptyDomainError, InvalidParamError

# (kind, point inside its domain, Schwarzian of f at that point)
SCHWARZIAN_LAWS = [
    (Identity(), 0.7, 0.0),
    (Cot(1.0), 4.0, 0.5),
    (Cot(2.5), 1.9, 0.5 * 2.5**2),
    (Exp(1.5), 0.3, -0.5 * 1.5**2),
    (Log(), 2.0, 1.0 / (2.0 * 2.0**2)),
    (TanLog(1.0), 2.0, 2.0 / (2.0 * 2.0**2)),
    (Power(math.sqrt(0.5)), 1.3, 0.5 / (2.0 * 1.3**2)),
    (InverseSquare(), 1.3, -3.0 / (2.0 * 1.3**2)),
]


class TestInterval:
    """Test Interval operations."""

    def test_empty(self) -> None:
        """Test lo < hi is required."""
        with pytest.raises(InvalidParamError, match="lo < hi"):
            Interval(1.0, 1.0)

    def test_intersect(self) -> None:
        """Test overlaps and disjoint intervals."""
        assert Interval(0.0, 2.0).intersect(Interval(1.0, 3.0)) == Interval(1.0, 2.0)
        with pytest.raises(EmptyDomainError):
            Interval(0.0, 1.0).intersect(Interval(2.0, 3.0))

    def test_clipped(self) -> None:
        """Test infinite ends are replaced by a finite window."""
        assert Interval.real_line().clipped() == Interval(-10.0, 10.0)
        assert Interval.positive().clipped() == Interval(0.0, 10.0)

    def test_sample(self) -> None:
        """Test samples are interior midpoints."""
        points = Interval(0.0, 1.0).sample(4)
        assert list(points) == pytest.approx([0.125, 0.375, 0.625, 0.875])
        with pytest.raises(InvalidParamError):
            Interval(0.0, 1.0).sample(0)


class TestKinds:
    """Test the analytic jets of each kind."""

    @pytest.mark.parametrize(
        "kind, s", [(kind, s) for kind, s, _ in SCHWARZIAN_LAWS] + [(AiryRatio(), 0.5)]
    )
    def test_jet_matches_differences(self, kind, s: float) -> None:
        """Test f', f'' and f''' against central differences of f."""
        jet = kind.jet(s)

        def f(t: float) -> float:
            return kind.jet(t).f0

        h = 1e-2 * min(1.0, s)
        assert jet.f1 == pytest.approx(float(derivative(f, s, h, 1, 6)), rel=1e-7)
        assert jet.f2 == pytest.approx(
            float(derivative(f, s, h, 2, 6)), rel=1e-6, abs=1e-8
        )
        assert jet.f3 == pytest.approx(
            float(derivative(f, s, h, 3, 4)), rel=1e-5, abs=1e-6
        )

    @pytest.mark.parametrize("kind", [k for k, _, _ in SCHWARZIAN_LAWS] + [AiryRatio()])
    def test_jet_matches_differences_on_domain(
        self, kind, rng: np.random.Generator
    ) -> None:
        """Test the jet against central differences at 100 random domain points."""
        domain = kind.domain().clipped()
        margin = 0.02 * domain.length
        for s in rng.uniform(domain.lo + margin, domain.hi - margin, 100):
            jet = kind.jet(s)
            # local length scale: distance to the nearest end, at most 1
            d = min(1.0, s - domain.lo, domain.hi - s)
            h = 2e-3 * d

            def f(t: float) -> float:
                return kind.jet(t).f0

            values = (jet.f0, jet.f1, jet.f2, jet.f3)
            for order, accuracy in ((1, 6), (2, 6), (3, 4)):
                exact = values[order]
                scale = sum(abs(v) * d**k for k, v in enumerate(values)) / d**order
                estimate = float(derivative(f, s, h, order, accuracy))
                assert abs(estimate - exact) <= 1e-5 * scale, (kind.name, s, order)

    @pytest.mark.parametrize("kind, s, expected", SCHWARZIAN_LAWS)
    def test_schwarzian_law(self, kind, s: float, expected: float) -> None:
        """Test the closed-form torsion of each kind."""
        value = schwarzian_of_jet(kind.jet(s))
        assert value == pytest.approx(expected, rel=1e-12, abs=1e-12)

    @pytest.mark.parametrize("kind", [k for k, _, _ in SCHWARZIAN_LAWS])
    def test_validated_on_domain(self, kind) -> None:
        """Test every catalog kind is admissible on its domain."""
        report = validate_generator(make_generator(kind, validate=False), n=256)
        assert report.passed, report.summary()
        assert report.sign_constant

    def test_cot_pole(self) -> None:
        """Test the pole of -cot(cs/2) at the origin."""
        with pytest.raises(DomainError, match="pole"):
            Cot(1.0).jet(0.0)

    def test_power_rejects_two(self) -> None:
        """Test s^-2 is left to the inverse-square kind."""
        with pytest.raises(InvalidParamError, match="inverse-square"):
            Power(2.0)

    @pytest.mark.parametrize("bad", [0.0, -1.0])
    def test_positive_parameters(self, bad: float) -> None:
        """Test c must be positive and finite."""
        with pytest.raises(InvalidParamError):
            Exp(bad)

    def test_airy_negative_lambda(self) -> None:
        """Test the domain maps through a negative mu."""
        kind = AiryRatio(-8.0)
        domain = kind.domain()
        assert domain.hi == pytest.approx(1.173713222709128 / 2.0)
        assert domain.lo == pytest.approx(-12.5)


class TestCreateKind:
    """Test the kind registry and factory."""

    def test_registry(self) -> None:
        """Test every catalog kind is registered."""
        assert set(GENERATOR_KINDS) == {
            "identity",
            "cot",
            "exp",
            "log",
            "tanlog",
            "power",
            "inverse-square",
            "airy",
        }

    def test_create_with_params(self) -> None:
        """Test string parameters are converted and names normalized."""
        kind = create_kind("EXP", c="2")
        assert isinstance(kind, Exp)
        assert kind.c == 2.0
        assert kind.label() == "exp(c=2)"
        assert isinstance(create_kind("inverse_square"), InverseSquare)

    def test_unknown_kind(self) -> None:
        """Test unknown names list the known kinds."""
        with pytest.raises(InvalidParamError, match="Unknown generator kind"):
            create_kind("sinh")

    def test_unexpected_parameter(self) -> None:
        """Test parameters a kind does not take."""
        with pytest.raises(InvalidParamError, match="Bad parameters"):
            create_kind("log", c=1.0)

    def test_non_numeric_parameter(self) -> None:
        """Test parameters must parse as floats."""
        with pytest.raises(InvalidParamError, match="Non-numeric"):
            create_kind("exp", c="fast")

    def test_to_config(self) -> None:
        """Test kinds serialize to the config vocabulary."""
        assert Exp(1.5).to_config() == {"kind": "exp", "c": 1.5}
        assert Identity().to_config() == {"kind": "identity"}


class TestGenerator:
    """Test Generator construction and derived generators."""

    def test_intervals(self) -> None:
        """Test domain, span and window of a bound kind."""
        gen = make_generator(Log())
        assert gen.domain == Interval(1.0, math.inf)
        assert gen.span == Interval.positive()
        assert gen.window == Interval(1.0, 11.0)
        assert gen.f(math.e) == pytest.approx(1.0)

    def test_eval_outside_span(self) -> None:
        """Test evaluation outside the closed span."""
        with pytest.raises(DomainError, match="outside the span"):
            make_generator(Log()).eval(-1.0)

    def test_restrict(self) -> None:
        """Test restriction to a sub-interval."""
        gen = make_generator(Exp(1.0)).restrict(Interval(0.0, 1.0))
        assert gen.domain == Interval(0.0, 1.0)
        assert gen.window == Interval(0.0, 1.0)

    def test_validation_failure(self) -> None:
        """Test a generator whose slope changes sign fails validation."""
        gen = custom_generator(
            lambda s: Jet3(s * s + 1.0, 2.0 * s, 2.0, 0.0), Interval(-1.0, 1.0)
        )
        report = validate_generator(gen)
        assert not report.passed
        assert not report.sign_constant
        assert report.fprime_sign == 0

    def test_validation_needs_two_points(self) -> None:
        """Test the sample count lower bound."""
        with pytest.raises(InvalidParamError):
            validate_generator(make_generator(Exp(1.0)), n=1)

    def test_negated(self) -> None:
        """Test -f keeps the Schwarzian."""
        base = make_generator(Exp(1.0))
        gen = negated(base)
        assert gen.label == "-exp(c=1)"
        assert gen.f(0.3) == pytest.approx(-math.exp(0.3))
        assert schwarzian_of_jet(gen.eval(0.3)) == pytest.approx(-0.5, rel=1e-13)

    def test_shifted(self) -> None:
        """Test s -> f(s + shift) moves the domain."""
        gen = shifted(make_generator(Log()), 1.0)
        assert gen.domain == Interval(0.0, math.inf)
        assert gen.f(1.0) == pytest.approx(math.log(2.0))

    def test_mobius_image(self) -> None:
        """Test T o f on an interval keeps the Schwarzian."""
        T = MobiusMap(2.0, 1.0, 1.0, 3.0)
        gen = mobius_generator(T, make_generator(Exp(1.0)), Interval(-1.0, 1.0))
        assert gen.domain == Interval(-1.0, 1.0)
        assert schwarzian_of_jet(gen.eval(0.3)) == pytest.approx(-0.5, rel=1e-12)

    def test_mobius_zero_inside_interval(self) -> None:
        """Test T o f = s - 2 vanishing inside the interval is rejected."""
        T = MobiusMap(1.0, -2.0, 0.0, 1.0)
        with pytest.raises(EmptyDomainError):
            mobius_generator(T, make_generator(Identity()), Interval(1.0, 3.0))

    def test_mobius_interval_outside_domain(self) -> None:
        """Test the interval must lie in the base domain."""
        T = MobiusMap(2.0, 1.0, 1.0, 3.0)
        with pytest.raises(InvalidParamError, match="leaves the domain"):
            mobius_generator(T, make_generator(Identity()), Interval(-1.0, 1.0))

    def test_finite_difference_custom(self) -> None:
        """Test a generator from f alone."""
        gen = custom_from_function(math.exp, Interval(-1.0, 1.0), label="exp-fd")
        assert gen.fd_jet
        assert "fd-jet: derivatives estimated by central differences" in gen.notes
        jet = gen.eval(0.2)
        assert jet.f1 == pytest.approx(math.exp(0.2), rel=1e-9)
        assert jet.f3 == pytest.approx(math.exp(0.2), rel=1e-6)
