"""Exact-rational continued fractions for quantum Hall filling factors.

Filling factors are reduced rationals P/Q with odd Q in (0, 1].  Two
coefficient schemes evaluate to a filling factor:

* standard form: nu = 1/(a0 - 1/(a1 - ... - 1/ar)) with a0 odd positive and
  the later coefficients even, nonzero, of either sign;
* positive form: nu = 1/(p0 + 1/(p1 + ... + 1/pr)) with p0 odd positive and
  the later coefficients even positive.

The standard form reaches every odd-denominator rational in (0, 1]; the
positive form provably does not (3/5 is the smallest miss), so decompose
fails loudly there instead of pretending.  Every computation in this module
is exact integer or Fraction arithmetic; floats are deliberately absent.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor, gcd

__all__ = [
    "MAX_DEPTH",
    "BlokWenSeq",
    "DecompositionError",
    "FillingFactor",
    "PositiveCF",
    "StandardCF",
    "basis_index",
    "blok_wen_sequence",
    "decompose",
    "eval_positive_cf",
    "eval_standard_cf",
    "family",
    "family_partition_sum",
]

MAX_DEPTH = 64


class DecompositionError(ValueError):
    """No coefficient sequence of the requested form exists within the depth bound."""


@dataclass(frozen=True)
class FillingFactor:
    """Reduced rational P/Q with odd Q, in (0, 1]."""

    num: int
    den: int

    def __post_init__(self):
        if self.num <= 0 or self.den <= 0:
            raise ValueError(f"filling factor must be positive, got {self.num}/{self.den}")
        if self.num > self.den:
            raise ValueError(f"filling factor {self.num}/{self.den} exceeds 1")
        if gcd(self.num, self.den) != 1:
            raise ValueError(f"{self.num}/{self.den} is not reduced")
        if self.den % 2 == 0:
            raise ValueError(
                f"denominator {self.den} is even; filling factors with even "
                "denominator are outside this scheme"
            )

    @classmethod
    def from_fraction(cls, value) -> "FillingFactor":
        frac = Fraction(value)
        return cls(frac.numerator, frac.denominator)

    @classmethod
    def parse(cls, text: str) -> "FillingFactor":
        return cls.from_fraction(Fraction(text.strip()))

    @property
    def value(self) -> Fraction:
        return Fraction(self.num, self.den)

    def __str__(self) -> str:
        return str(self.num) if self.den == 1 else f"{self.num}/{self.den}"


@dataclass(frozen=True)
class StandardCF:
    """Standard-form coefficients: a0 odd positive, the rest even nonzero."""

    coefficients: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(int(c) for c in self.coefficients))
        cs = self.coefficients
        if not cs:
            raise ValueError("coefficient list is empty")
        if cs[0] < 1 or cs[0] % 2 == 0:
            raise ValueError(f"leading coefficient must be odd positive, got {cs[0]}")
        for c in cs[1:]:
            if c == 0 or c % 2:
                raise ValueError(f"trailing coefficients must be even and nonzero, got {c}")


@dataclass(frozen=True)
class PositiveCF:
    """Positive-form coefficients: p0 odd positive, the rest even positive."""

    coefficients: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(int(c) for c in self.coefficients))
        cs = self.coefficients
        if not cs:
            raise ValueError("coefficient list is empty")
        if cs[0] < 1 or cs[0] % 2 == 0:
            raise ValueError(f"leading coefficient must be odd positive, got {cs[0]}")
        for c in cs[1:]:
            if c < 2 or c % 2:
                raise ValueError(f"trailing coefficients must be even positive, got {c}")


def _as_filling_factor(nu: Fraction, cs) -> FillingFactor:
    if not 0 < nu <= 1:
        raise ValueError(f"coefficients {list(cs)} evaluate to {nu}, outside (0, 1]")
    return FillingFactor(nu.numerator, nu.denominator)


def eval_standard_cf(cf: StandardCF) -> FillingFactor:
    """Evaluate nu = 1/(a0 - 1/(a1 - ...)) exactly.

    The parity constraints force every intermediate away from zero and the
    final denominator odd; the guards below are defensive.
    """
    cs = cf.coefficients
    x = Fraction(cs[-1])
    for a in reversed(cs[:-1]):
        if x == 0:
            raise ValueError(f"zero intermediate denominator while evaluating {list(cs)}")
        x = a - Fraction(1) / x
    if x == 0:
        raise ValueError(f"zero intermediate denominator while evaluating {list(cs)}")
    return _as_filling_factor(Fraction(1) / x, cs)


def eval_positive_cf(cf: PositiveCF) -> FillingFactor:
    """Evaluate nu = 1/(p0 + 1/(p1 + ...)) exactly."""
    cs = cf.coefficients
    x = Fraction(cs[-1])
    for a in reversed(cs[:-1]):
        x = a + Fraction(1) / x
    return _as_filling_factor(Fraction(1) / x, cs)


def _decompose_standard(x: Fraction, level: int = 0):
    if level > MAX_DEPTH:
        return None
    want_odd = level == 0
    if x.denominator == 1:
        n = x.numerator
        if want_odd and n >= 1 and n % 2 == 1:
            return [n]
        if not want_odd and n != 0 and n % 2 == 0:
            return [n]
    lo = floor(x)
    if (lo % 2 == 0) == want_odd:
        lo -= 1
    # nearest coefficient of the right parity first, then its neighbors
    for a in sorted({lo, lo + 2, lo - 2, lo + 4}, key=lambda c: abs(x - c)):
        if want_odd and a < 1:
            continue
        if not want_odd and a == 0:
            continue
        if a == x:
            continue
        tail = _decompose_standard(1 / (a - x), level + 1)
        if tail is not None:
            return [a] + tail
    return None


def _decompose_positive(x: Fraction, level: int = 0):
    if level > MAX_DEPTH:
        return None
    want_odd = level == 0
    minimum = 1 if want_odd else 2
    if x.denominator == 1:
        n = x.numerator
        if n >= minimum and n % 2 == (1 if want_odd else 0):
            return [n]
    lo = floor(x)
    if (lo % 2 == 0) == want_odd:
        lo -= 1
    for a in (lo, lo - 2):  # the remainder 1/(x - a) must stay positive
        if a < minimum or x - a <= 0:
            continue
        tail = _decompose_positive(1 / (x - a), level + 1)
        if tail is not None:
            return [a] + tail
    return None


def decompose(nu: FillingFactor, form: str = "standard") -> StandardCF | PositiveCF:
    """Find a coefficient sequence of the requested form evaluating to nu.

    Greedy nearest-coefficient steps with parity-respecting backtracking,
    depth-bounded at MAX_DEPTH.  The returned sequence always round-trips
    through the matching evaluator; DecompositionError is raised when no
    sequence exists within the bound (the positive form misses part of
    (0, 1], so failures there are expected and honest).
    """
    reciprocal = Fraction(1) / nu.value
    if form == "standard":
        seq = _decompose_standard(reciprocal)
        if seq is None:
            raise DecompositionError(
                f"no standard-form decomposition of {nu} within depth {MAX_DEPTH}"
            )
        result = StandardCF(tuple(seq))
        produced = eval_standard_cf(result)
    elif form == "positive":
        seq = _decompose_positive(reciprocal)
        if seq is None:
            raise DecompositionError(
                f"no positive-form decomposition of {nu} within depth {MAX_DEPTH}"
            )
        result = PositiveCF(tuple(seq))
        produced = eval_positive_cf(result)
    else:
        raise ValueError(f"unknown form {form!r}, expected 'standard' or 'positive'")
    if produced != nu:
        raise ArithmeticError(f"decomposition {seq} of {nu} re-evaluated to {produced}")
    return result


@dataclass(frozen=True)
class BlokWenSeq:
    """Auxiliary rational sequences for the conjugate-factor rewriting.

    theta_0 = 0, q_0 = -1, then for r >= 1
    theta_r = (-1)^r / (p_{r-1} - (-1)^r theta_{r-1}) and
    q_r = (-1)^(r+1) q_{r-1} theta_r, all exact rationals.  |q_r| is the
    Gaussian decay rate used by the level-r auxiliary integrals.
    """

    thetas: tuple[Fraction, ...]
    qs: tuple[Fraction, ...]


def blok_wen_sequence(cf: PositiveCF) -> BlokWenSeq:
    thetas = [Fraction(0)]
    qs = [Fraction(-1)]
    for r in range(1, len(cf.coefficients)):
        sign = -1 if r % 2 else 1
        denom = cf.coefficients[r - 1] - sign * thetas[r - 1]
        if denom == 0:
            raise ValueError(f"zero denominator in the theta recursion at level {r}")
        thetas.append(Fraction(sign) / denom)
        qs.append(-sign * qs[r - 1] * thetas[r])
    return BlokWenSeq(thetas=tuple(thetas), qs=tuple(qs))


def family(p: int) -> list[FillingFactor]:
    """The 2p+1 filling factors i/(2p+1), i = 1..2p+1, reduced for display.

    The positional index i is the basis address; members of composite-order
    families display reduced (e.g. 3/9 as 1/3) but keep their slot.
    """
    if p < 1:
        raise ValueError(f"p must be a positive integer, got {p}")
    order = 2 * p + 1
    return [FillingFactor.from_fraction(Fraction(i, order)) for i in range(1, order + 1)]


def family_partition_sum(p: int) -> Fraction:
    """sum_i nu_i / (p + 1) over the family, exactly; equals 1 for every p."""
    return sum((nu.value for nu in family(p)), Fraction(0)) / (p + 1)


def basis_index(nu: FillingFactor, family_p: int | None = None) -> tuple[int, int]:
    """Address (i, p) of nu as the i-th state of the (2p+1)-state family.

    Without family_p the reduced denominator fixes p = (Q-1)/2.  nu = 1
    belongs to every family and must be addressed explicitly; the same
    parameter also addresses reduced members of composite-order families.
    """
    if family_p is not None:
        if family_p < 1:
            raise ValueError(f"family_p must be a positive integer, got {family_p}")
        order = 2 * family_p + 1
        i = nu.value * order
        if i.denominator != 1 or not 1 <= i.numerator <= order:
            raise ValueError(f"{nu} is not a member of the {order}-state family")
        return int(i), family_p
    if nu.den == 1:
        raise ValueError("nu = 1 belongs to every family; pass family_p to disambiguate")
    return nu.num, (nu.den - 1) // 2
