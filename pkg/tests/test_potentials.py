import numpy as np
import pytest

from errors import DomainError, InadmissiblePotentialError, PotentialSyntaxError
from potentials import (
    CONDITION_CONVEXITY,
    CONDITION_EVEN_FORM,
    CONDITION_MONOTONICITY,
    PotentialSpec,
    evaluator,
    format_potential,
    parse_potential,
    validate,
)


def test_parse_single_term():
    assert parse_potential("x^2").terms == ((1.0, 2),)


def test_parse_sorts_terms_by_exponent():
    assert parse_potential("3*x^4 + 0.5*x^2").terms == ((0.5, 2), (3.0, 4))


def test_parse_is_whitespace_insensitive_and_collects_like_terms():
    assert parse_potential("  2 * x ^ 2+x^2 +x^6").terms == ((3.0, 2), (1.0, 6))


def test_parse_named_forms():
    harmonic = parse_potential("harmonic(2)")
    assert harmonic.terms == ((4.0, 2),)
    assert harmonic.form == "harmonic"
    power = parse_potential("power(10, 1)")
    assert power.terms == ((1.0, 20),)
    assert power.form == "power"
    assert power.form_params == (10, 1.0)


def test_parse_decimal_coefficients_exactly():
    assert parse_potential("0.1*x^2").terms[0][0] == 0.1
    assert parse_potential("1e-05*x^4").terms[0][0] == 1e-05


@pytest.mark.parametrize("text", ["x^3", "x", "2*x^1", "x^0", "4", "x^2 + 5"])
def test_parse_rejects_odd_or_zero_exponents(text):
    with pytest.raises(PotentialSyntaxError):
        parse_potential(text)


def test_parse_rejects_negative_coefficient_with_position():
    with pytest.raises(PotentialSyntaxError) as excinfo:
        parse_potential("x^2 - x^4")
    assert excinfo.value.position == 4


@pytest.mark.parametrize("text", ["y^2", "sin(1)", "2*z^2"])
def test_parse_rejects_unknown_identifier(text):
    with pytest.raises(PotentialSyntaxError, match="unknown identifier"):
        parse_potential(text)


@pytest.mark.parametrize("text", ["", "   ", "x^2 +", "x^2 x^4", "3*", "x^2.5", "power(1.5, 1)", "x^2 $"])
def test_parse_syntax_errors(text):
    with pytest.raises(PotentialSyntaxError):
        parse_potential(text)


def test_print_parse_round_trip():
    rng = np.random.default_rng(4)
    texts = ["x^2", "3*x^4 + 0.5*x^2", "power(7, 0.3)", "harmonic(1.7)"]
    for _ in range(50):
        terms = [f"{rng.uniform(0, 10)!r}*x^{2 * rng.integers(1, 6)}" for _ in range(rng.integers(1, 4))]
        texts.append(" + ".join(terms))
    for text in texts:
        spec = parse_potential(text)
        assert parse_potential(format_potential(spec)).terms == spec.terms


def test_validate_admissible_forms():
    assert validate(parse_potential("harmonic(1)")) == []
    assert validate(PotentialSpec.power_law(10, 1.0)) == []


def test_validate_reports_each_condition():
    zero = validate(PotentialSpec(terms=((0.0, 2),)))
    assert [v.condition for v in zero] == [CONDITION_MONOTONICITY]

    negative = validate(PotentialSpec(terms=((-1.0, 2), (1.0, 4))))
    assert [v.condition for v in negative] == [CONDITION_CONVEXITY]

    odd = validate(PotentialSpec(terms=((1.0, 3),)))
    assert [v.condition for v in odd] == [CONDITION_EVEN_FORM]


def test_evaluator_refuses_inadmissible_spec():
    with pytest.raises(InadmissiblePotentialError) as excinfo:
        evaluator(PotentialSpec(terms=((0.0, 2),)))
    assert excinfo.value.violations[0].condition == CONDITION_MONOTONICITY


def test_harmonic_vtilde_is_one():
    pot = evaluator(parse_potential("x^2"))
    xi = np.geomspace(1e-3, 1e3, 50)
    assert np.allclose(pot.vtilde(xi), 1.0)
    assert np.allclose(pot.dvtilde(xi), 0.0)


def test_power_law_vtilde():
    pot = evaluator(PotentialSpec.power_law(2, 1.0))
    assert pot.vtilde(2.0) == pytest.approx(8.0)
    assert pot.dvtilde(2.0) == pytest.approx(2 * 2 * 2.0)


def test_power_law_n1_has_constant_vtilde():
    pot = evaluator(PotentialSpec.power_law(1, 3.5))
    assert pot.dvtilde(0.3) == 0.0
    assert pot.vtilde(0.3) == pytest.approx(3.5)


def test_evaluation_outside_domain():
    pot = evaluator(parse_potential("x^4"))
    with pytest.raises(DomainError):
        pot.v(0.0)
    with pytest.raises(DomainError):
        pot.vtilde(np.array([1.0, -1.0]))


def test_derivatives_match_finite_differences():
    rng = np.random.default_rng(5)
    xi = np.linspace(0.05, 100.0, 400)
    for _ in range(20):
        terms = " + ".join(f"{rng.uniform(0.1, 3)!r}*x^{2 * k}" for k in rng.choice([1, 2, 3, 4], size=2, replace=False))
        pot = evaluator(parse_potential(terms))
        assert np.all(pot.vtilde(xi) > 0)
        h = 1e-5 * xi
        central = (pot.v(xi + h) - pot.v(xi - h)) / (2 * h)
        assert np.allclose(pot.dv(xi), central, rtol=1e-6)
        assert np.allclose(pot.vtilde(xi), pot.dv(xi) / (2 * xi), rtol=1e-12)
        assert np.all(np.diff(pot.v(xi)) >= 0)


def test_jensen_two_point_distributions():
    rng = np.random.default_rng(6)
    for _ in range(200):
        terms = " + ".join(f"{rng.uniform(0, 2)!r}*x^{2 * k}" for k in (1, 2, 3))
        pot = evaluator(parse_potential(terms + " + 1.0*x^2"))
        y1, y2 = rng.uniform(1e-3, 4.0, size=2)
        weight = rng.uniform(0, 1)
        mean_of_u = weight * pot.v(np.sqrt(y1)) + (1 - weight) * pot.v(np.sqrt(y2))
        u_of_mean = pot.v(np.sqrt(weight * y1 + (1 - weight) * y2))
        assert mean_of_u >= u_of_mean * (1 - 1e-12)
