"""
Potential expressions: parsing, admissibility checks and evaluators

A potential is an even polynomial V(xi) = sum c_k xi^(2k) in nondimensional
energy units. Non-negative coefficients make U(y) = V(sqrt(y)) convex and at
least one positive coefficient makes V strictly increasing on xi > 0.
"""

import math
import re
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from errors import DomainError, InadmissiblePotentialError, PotentialSyntaxError
from logger_config import get_logger

logger = get_logger(__name__)

CONDITION_CONVEXITY = 1
CONDITION_EVEN_FORM = 2
CONDITION_MONOTONICITY = 3

NAMED_FORMS = ("harmonic", "power")

_TOKEN_RE = re.compile(
    r"\s*(?:"
    r"(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[+*^(),\-])"
    r")"
)


@dataclass(frozen=True)
class ConditionViolation:
    """One failed admissibility condition (1 convexity, 2 even form, 3 monotonicity)"""
    condition: int
    message: str

    def __str__(self):
        return f"condition {self.condition}: {self.message}"


@dataclass(frozen=True)
class PotentialSpec:
    """
    Potential as a sorted tuple of (coefficient, exponent) terms

    `form` records the named family the potential was entered as
    ("harmonic", "power") or "polynomial".
    """
    terms: Tuple[Tuple[float, int], ...]
    source_text: str = ""
    form: str = "polynomial"
    form_params: Tuple[float, ...] = field(default=())

    @classmethod
    def power_law(cls, n: int, v0: float) -> "PotentialSpec":
        """V(xi) = v0 * xi^(2n)"""
        return cls(
            terms=((float(v0), 2 * int(n)),),
            source_text=f"power({int(n)}, {float(v0)!r})",
            form="power",
            form_params=(int(n), float(v0)),
        )

    @classmethod
    def harmonic(cls, omega_nd: float = 1.0) -> "PotentialSpec":
        """V(xi) = omega_nd^2 * xi^2"""
        return cls(
            terms=((float(omega_nd) ** 2, 2),),
            source_text=f"harmonic({float(omega_nd)!r})",
            form="harmonic",
            form_params=(float(omega_nd),),
        )


class _Parser:
    """Recursive-descent parser over the token list of one expression"""

    def __init__(self, text: str):
        self.text = text
        self.tokens = self._tokenize(text)
        self.index = 0

    @staticmethod
    def _tokenize(text: str) -> List[Tuple[str, str, int]]:
        tokens = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            match = _TOKEN_RE.match(text, pos)
            if match is None or match.end() == pos:
                offset = len(text[pos:]) - len(text[pos:].lstrip())
                raise PotentialSyntaxError(f"unexpected character {text[pos + offset]!r}", pos + offset)
            kind = match.lastgroup
            start = match.start(kind)
            value = match.group(kind)
            if kind == "op" and value == "-":
                raise PotentialSyntaxError("negative coefficients are not allowed", start)
            tokens.append((kind, value, start))
            pos = match.end()
        return tokens

    def _peek(self) -> Optional[Tuple[str, str, int]]:
        if self.index < len(self.tokens):
            return self.tokens[self.index]
        return None

    def _next(self, expected: str = None) -> Tuple[str, str, int]:
        token = self._peek()
        if token is None:
            raise PotentialSyntaxError(f"unexpected end of expression, expected {expected or 'a term'}",
                                       len(self.text))
        if expected is not None and token[1] != expected and token[0] != expected:
            raise PotentialSyntaxError(f"expected {expected!r}, got {token[1]!r}", token[2])
        self.index += 1
        return token

    def parse(self) -> Tuple[List[Tuple[float, int]], Optional[Tuple[str, Tuple[float, ...]]]]:
        if not self.tokens:
            raise PotentialSyntaxError("empty potential expression", 0)
        terms = []
        named = []
        while True:
            term_terms, term_named = self._term()
            terms.extend(term_terms)
            if term_named is not None:
                named.append(term_named)
            token = self._peek()
            if token is None:
                break
            if token[1] != "+":
                raise PotentialSyntaxError(f"expected '+', got {token[1]!r}", token[2])
            self.index += 1
        # A lone named form keeps its family tag
        single_named = named[0] if len(named) == 1 and len(terms) == 1 else None
        return terms, single_named

    def _term(self):
        token = self._peek()
        if token is None:
            raise PotentialSyntaxError("unexpected end of expression, expected a term", len(self.text))
        kind, value, start = token
        if kind == "number":
            self.index += 1
            coefficient = float(value)
            following = self._peek()
            if following is not None and following[1] == "*":
                self.index += 1
                exponent = self._power()
                return [(coefficient, exponent)], None
            raise PotentialSyntaxError("constant term has exponent 0; only even exponents >= 2 are allowed", start)
        if kind == "ident" and value == "x":
            return [(1.0, self._power())], None
        if kind == "ident":
            return self._named()
        raise PotentialSyntaxError(f"unexpected {value!r}", start)

    def _power(self) -> int:
        kind, value, start = self._next("ident")
        if value != "x":
            raise PotentialSyntaxError(f"unknown identifier {value!r}", start)
        following = self._peek()
        if following is None or following[1] != "^":
            raise PotentialSyntaxError("odd exponent 1; only even exponents >= 2 are allowed", start)
        self.index += 1
        kind, value, exp_start = self._next("number")
        if not re.fullmatch(r"\d+", value):
            raise PotentialSyntaxError(f"exponent must be an integer, got {value!r}", exp_start)
        exponent = int(value)
        if exponent == 0:
            raise PotentialSyntaxError("zero exponent; only even exponents >= 2 are allowed", exp_start)
        if exponent % 2:
            raise PotentialSyntaxError(f"odd exponent {exponent}; only even exponents >= 2 are allowed", exp_start)
        return exponent

    def _named(self):
        kind, name, start = self._next("ident")
        if name not in NAMED_FORMS:
            raise PotentialSyntaxError(f"unknown identifier {name!r}", start)
        self._next("(")
        args = []
        while True:
            kind, value, arg_start = self._next("number")
            args.append((value, arg_start))
            token = self._next()
            if token[1] == ")":
                break
            if token[1] != ",":
                raise PotentialSyntaxError(f"expected ',' or ')', got {token[1]!r}", token[2])

        if name == "harmonic":
            if len(args) != 1:
                raise PotentialSyntaxError(f"harmonic takes 1 argument, got {len(args)}", start)
            omega = float(args[0][0])
            if not omega > 0:
                raise PotentialSyntaxError("harmonic frequency must be positive", args[0][1])
            spec = PotentialSpec.harmonic(omega)
            return list(spec.terms), ("harmonic", spec.form_params)

        if len(args) != 2:
            raise PotentialSyntaxError(f"power takes 2 arguments (n, v0), got {len(args)}", start)
        n_text, n_start = args[0]
        if not re.fullmatch(r"\d+", n_text) or int(n_text) < 1:
            raise PotentialSyntaxError(f"power index n must be an integer >= 1, got {n_text!r}", n_start)
        v0 = float(args[1][0])
        if not v0 > 0:
            raise PotentialSyntaxError("power strength v0 must be positive", args[1][1])
        spec = PotentialSpec.power_law(int(n_text), v0)
        return list(spec.terms), ("power", spec.form_params)


def collect_terms(terms) -> Tuple[Tuple[float, int], ...]:
    """Sum like terms and sort by exponent"""
    collected: Dict[int, float] = defaultdict(float)
    for coefficient, exponent in terms:
        collected[int(exponent)] += float(coefficient)
    return tuple((collected[e], e) for e in sorted(collected))


def parse_potential(text: str) -> PotentialSpec:
    """
    Parse a potential expression

    Accepts even polynomials in x with non-negative coefficients
    ("3*x^4 + 0.5*x^2") and the named forms "harmonic(w)" and "power(n, v0)".

    Raises:
        PotentialSyntaxError: with the offending position
    """
    if text is None or not text.strip():
        raise PotentialSyntaxError("empty potential expression", 0)
    terms, named = _Parser(text).parse()
    form, params = named if named is not None else ("polynomial", ())
    spec = PotentialSpec(terms=collect_terms(terms), source_text=text, form=form, form_params=params)
    logger.debug(f"Parsed potential {text!r} -> {spec.terms}")
    return spec


def format_potential(spec: PotentialSpec) -> str:
    """Canonical text of a potential; parse_potential reads it back to the same terms"""
    return " + ".join(f"{coefficient!r}*x^{exponent}" for coefficient, exponent in spec.terms)


def validate(spec: PotentialSpec) -> List[ConditionViolation]:
    """
    Check the admissibility conditions

    Returns:
        List of violations; empty when the potential is admissible
    """
    violations = []
    bad_coefficients = [c for c, _ in spec.terms if not (math.isfinite(c) and c >= 0)]
    if bad_coefficients:
        violations.append(ConditionViolation(
            CONDITION_CONVEXITY,
            f"U(y) is not convex on y >= 0: coefficients {bad_coefficients} are not finite and non-negative"))

    bad_exponents = [e for _, e in spec.terms if e < 2 or e % 2]
    if bad_exponents:
        violations.append(ConditionViolation(
            CONDITION_EVEN_FORM,
            f"potential is not of the form U((x/a)^2): exponents {bad_exponents} are not even and >= 2"))

    if not any(math.isfinite(c) and c > 0 for c, _ in spec.terms):
        violations.append(ConditionViolation(
            CONDITION_MONOTONICITY,
            "potential is not strictly increasing in |x|: no positive coefficient"))
    return violations


class PotentialEvaluator:
    """
    Vectorized V, V', V~ = V'/(2 xi) and V~' of an admissible potential

    All evaluators accept scalars or numpy arrays of xi > 0 and return the
    same shape. Very large exponents overflow to inf or underflow to 0
    without warnings.
    """

    def __init__(self, spec: PotentialSpec):
        self.spec = spec
        active = [(c, e) for c, e in spec.terms if c > 0]
        self._coefficients = np.array([c for c, _ in active], dtype=float)
        self._exponents = np.array([e for _, e in active], dtype=float)

    def _sum(self, xi, weights, shift: float):
        arr = np.asarray(xi, dtype=float)
        if np.any(~(arr > 0)):
            raise DomainError("potential evaluated outside xi > 0")
        with np.errstate(over="ignore", under="ignore", invalid="ignore"):
            powers = np.power(arr[..., np.newaxis], self._exponents - shift)
            values = np.sum(weights * powers, axis=-1)
        if np.ndim(xi) == 0:
            return float(values)
        return values

    def v(self, xi):
        return self._sum(xi, self._coefficients, 0.0)

    def dv(self, xi):
        return self._sum(xi, self._coefficients * self._exponents, 1.0)

    def vtilde(self, xi):
        return self._sum(xi, self._coefficients * self._exponents / 2, 2.0)

    def dvtilde(self, xi):
        weights = self._coefficients * self._exponents * (self._exponents - 2) / 2
        return self._sum(xi, weights, 3.0)


def evaluator(spec: PotentialSpec) -> PotentialEvaluator:
    """
    Build the evaluator of an admissible potential

    Raises:
        InadmissiblePotentialError: when validate() reports violations
    """
    violations = validate(spec)
    if violations:
        raise InadmissiblePotentialError(violations)
    return PotentialEvaluator(spec)
