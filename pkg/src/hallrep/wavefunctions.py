"""Trial-wavefunction evaluation and inner products.

The basic object is the product-of-differences wavefunction
psi_m(z) = prod_{i<j} (z_i - z_j)^m * exp(-1/2 sum|z_k|^2) for odd m, plus a
one-quasiparticle generalization where one auxiliary coordinate is
integrated against a Gaussian weight.  Scalar products integrate
conj(psi_a) * psi_b over the plane per coordinate and come in two
independent flavors:

* exact: expand both difference products into monomials and pair them with
  the planar Gaussian moments int z^a conj(z)^b e^{-|z|^2} d2z = pi a!
  delta_{ab}, all in integer arithmetic;
* Monte Carlo: importance-sample every coordinate from exp(-|z|^2)/pi using
  the counter-based stream in :mod:`hallrep.sampling`, so results are
  reproducible and independent of the worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import sampling
from .hierarchy import FillingFactor, PositiveCF, StandardCF, blok_wen_sequence, eval_standard_cf

__all__ = [
    "MAX_EXPANSION_DEGREE",
    "GramMatrix",
    "HierarchyR1Spec",
    "InnerProductResult",
    "LaughlinSpec",
    "as_config",
    "gram_matrix",
    "hierarchy_r1_eval",
    "inner_product_exact",
    "inner_product_mc",
    "jastrow_monomials",
    "laughlin_eval",
    "spec_from_json",
    "spec_to_json",
]

MAX_EXPANSION_DEGREE = 60

MIN_MC_SAMPLES = 1000

_QUAD_BATCH = 1 << 21  # complex temporaries per quadrature slice


# ----------------------------------------------------------------------
# wavefunction specs


@dataclass(frozen=True)
class LaughlinSpec:
    """prod_{i<j} (z_i - z_j)^m with the Gaussian factor; m odd positive."""

    m: int
    n_electrons: int

    def __post_init__(self):
        if self.m < 1 or self.m % 2 == 0:
            raise ValueError(f"exponent m must be odd positive, got {self.m}")
        if self.n_electrons < 2:
            raise ValueError(f"need at least 2 electrons, got {self.n_electrons}")

    @property
    def degree(self) -> int:
        """Total polynomial degree of the difference product."""
        return self.m * self.n_electrons * (self.n_electrons - 1) // 2

    def filling_factor(self) -> FillingFactor:
        return FillingFactor(1, self.m)


@dataclass(frozen=True)
class HierarchyR1Spec:
    """One-level hierarchy data: electron exponent a0, level exponent a1,
    coupling sign b, and the auxiliary-coordinate count."""

    a0: int
    a1: int
    b: int
    n_electrons: int
    n_quasi: int = 1

    def __post_init__(self):
        if self.a0 < 1 or self.a0 % 2 == 0:
            raise ValueError(f"a0 must be odd positive, got {self.a0}")
        if self.a1 == 0 or self.a1 % 2:
            raise ValueError(f"a1 must be even and nonzero, got {self.a1}")
        if self.b not in (1, -1):
            raise ValueError(f"b must be +1 or -1, got {self.b}")
        if self.n_electrons < 2:
            raise ValueError(f"need at least 2 electrons, got {self.n_electrons}")
        if self.n_quasi < 1:
            raise ValueError(f"n_quasi must be at least 1, got {self.n_quasi}")
        self.filling_factor()  # reject labels outside (0, 1] up front

    def filling_factor(self) -> FillingFactor:
        return eval_standard_cf(StandardCF((self.a0, self.a1)))


WavefunctionSpec = LaughlinSpec | HierarchyR1Spec


def spec_to_json(spec: WavefunctionSpec) -> dict:
    if isinstance(spec, LaughlinSpec):
        return {"variant": "laughlin", "m": spec.m, "n_electrons": spec.n_electrons}
    return {
        "variant": "hierarchy_r1",
        "a0": spec.a0,
        "a1": spec.a1,
        "b": spec.b,
        "n_quasi": spec.n_quasi,
        "n_electrons": spec.n_electrons,
    }


def spec_from_json(obj: dict) -> WavefunctionSpec:
    variant = obj.get("variant")
    if variant == "laughlin":
        return LaughlinSpec(m=int(obj["m"]), n_electrons=int(obj["n_electrons"]))
    if variant == "hierarchy_r1":
        return HierarchyR1Spec(
            a0=int(obj["a0"]),
            a1=int(obj["a1"]),
            b=int(obj["b"]),
            n_quasi=int(obj.get("n_quasi", 1)),
            n_electrons=int(obj["n_electrons"]),
        )
    raise ValueError(f"unknown wavefunction variant {variant!r}")


def as_config(coords, n_expected: int | None = None) -> np.ndarray:
    """Coerce a coordinate sequence to a 1-d complex array."""
    z = np.asarray(coords, dtype=complex).reshape(-1)
    if n_expected is not None and z.size != n_expected:
        raise ValueError(f"expected {n_expected} coordinates, got {z.size}")
    return z


# ----------------------------------------------------------------------
# pointwise evaluation


def _jastrow_batch(coords: np.ndarray, m: int) -> np.ndarray:
    """prod_{i<j} (z_i - z_j)^m over a (samples, n) coordinate batch."""
    n = coords.shape[1]
    out = np.ones(coords.shape[0], dtype=complex)
    for i in range(n):
        for j in range(i + 1, n):
            out = out * (coords[:, i] - coords[:, j]) ** m
    return out


def laughlin_eval(m: int, config) -> complex:
    """psi_m at one configuration, Gaussian factor included."""
    if m < 1 or m % 2 == 0:
        raise ValueError(f"exponent m must be odd positive, got {m}")
    z = as_config(config)
    if z.size < 2:
        raise ValueError(f"need at least 2 coordinates, got {z.size}")
    jastrow = _jastrow_batch(z[None, :], m)[0]
    return complex(jastrow * math.exp(-0.5 * float(np.sum(np.abs(z) ** 2))))


@lru_cache(maxsize=None)
def _hermite_rule(order: int):
    return np.polynomial.hermite.hermgauss(order)


def _auxiliary_decay_rate(a0: int) -> float:
    """Gaussian decay rate |q_1| of the auxiliary coordinate.

    First step of the auxiliary recursion with the electron exponent as
    leading positive-form coefficient: theta_1 = -1/a0, q_1 = 1/a0.  The
    level-2 coefficient never enters at one level, so the positive-form
    input is completed with a placeholder tail.
    """
    seq = blok_wen_sequence(PositiveCF((a0, 2)))
    return float(abs(seq.qs[1]))


def _auxiliary_integral(spec: HierarchyR1Spec, coords: np.ndarray, quad_order: int) -> np.ndarray:
    """int d2w e^{-|q1||w|^2} prod_j (w - z_j), conjugated when b = -1.

    Tensor Gauss-Hermite on both axes of w; the integrand is polynomial in
    w, so the rule is exact once 2*quad_order exceeds the electron count.
    """
    rate = _auxiliary_decay_rate(spec.a0)
    nodes, weights = _hermite_rule(quad_order)
    scale = 1.0 / math.sqrt(rate)
    w = scale * (nodes[:, None] + 1j * nodes[None, :]).ravel()
    w2d = (weights[:, None] * weights[None, :]).ravel() / rate

    out = np.empty(coords.shape[0], dtype=complex)
    step = max(1, _QUAD_BATCH // w.size)
    for lo in range(0, coords.shape[0], step):
        zc = coords[lo : lo + step]
        factors = np.ones((zc.shape[0], w.size), dtype=complex)
        for j in range(zc.shape[1]):
            factors *= w[None, :] - zc[:, j, None]
        out[lo : lo + step] = factors @ w2d
    return np.conj(out) if spec.b == -1 else out


def hierarchy_r1_eval(spec: HierarchyR1Spec, config, quad_order: int = 32) -> complex:
    """Wavefunction value with the single auxiliary coordinate integrated out.

    quad_order is the per-axis Gauss-Hermite order, exposed so convergence
    under doubling is testable.  Only n_quasi = 1 is supported; nested
    auxiliary integrals are out of scope.
    """
    if not isinstance(spec, HierarchyR1Spec):
        raise ValueError(f"expected a HierarchyR1Spec, got {type(spec).__name__}")
    if spec.n_quasi != 1:
        raise ValueError(f"only a single auxiliary coordinate is supported, got {spec.n_quasi}")
    if quad_order < 8:
        raise ValueError(f"quad_order must be at least 8, got {quad_order}")
    z = as_config(config, spec.n_electrons)
    batch = z[None, :]
    value = (
        _jastrow_batch(batch, spec.a0)[0]
        * _auxiliary_integral(spec, batch, quad_order)[0]
        * math.exp(-0.5 * float(np.sum(np.abs(z) ** 2)))
    )
    return complex(value)


def _gaussian_stripped_values(spec: WavefunctionSpec, coords: np.ndarray, quad_order: int) -> np.ndarray:
    """Wavefunction values with the exp(-1/2 sum|z|^2) factor removed."""
    if isinstance(spec, LaughlinSpec):
        return _jastrow_batch(coords, spec.m)
    if spec.n_quasi != 1:
        raise ValueError(f"only a single auxiliary coordinate is supported, got {spec.n_quasi}")
    return _jastrow_batch(coords, spec.a0) * _auxiliary_integral(spec, coords, quad_order)


# ----------------------------------------------------------------------
# inner products


@dataclass(frozen=True)
class InnerProductResult:
    """One scalar product with its provenance.

    Exact results carry stderr 0 plus the integer coefficient of pi^n; Monte
    Carlo results carry the sample count, the seed, and the standard error
    of the mean combined over real and imaginary parts.
    """

    value: complex
    method: str
    stderr: float = 0.0
    samples: int = 0
    seed: int | None = None
    exact_coefficient: int | None = None
    pi_power: int | None = None

    def to_json(self) -> dict:
        out = {
            "re": float(self.value.real),
            "im": float(self.value.imag),
            "stderr": float(self.stderr),
            "method": self.method,
            "samples": self.samples,
            "seed": self.seed,
        }
        if self.exact_coefficient is not None:
            out["exact_coefficient"] = self.exact_coefficient
            out["pi_power"] = self.pi_power
        return out


def jastrow_monomials(m: int, n: int) -> dict[tuple[int, ...], int]:
    """Integer monomial expansion of prod_{i<j} (z_i - z_j)^m.

    Keys are exponent tuples over the n coordinates, values exact integers,
    built by convolving one binomial expansion per pair into the running
    table.
    """
    terms: dict[tuple[int, ...], int] = {(0,) * n: 1}
    for i in range(n):
        for j in range(i + 1, n):
            expanded: dict[tuple[int, ...], int] = {}
            for expo, coeff in terms.items():
                for t in range(m + 1):
                    c = coeff * math.comb(m, t) * (-1) ** (m - t)
                    key = list(expo)
                    key[i] += t
                    key[j] += m - t
                    key = tuple(key)
                    expanded[key] = expanded.get(key, 0) + c
            terms = {k: v for k, v in expanded.items() if v}
    return terms


def inner_product_exact(spec_a: WavefunctionSpec, spec_b: WavefunctionSpec) -> InnerProductResult:
    """Pair the monomial expansions through the planar Gaussian moments.

    Exact integer arithmetic times pi^n.  Only Laughlin-type specs of equal
    electron count within the expansion degree bound are accepted.
    """
    for spec in (spec_a, spec_b):
        if not isinstance(spec, LaughlinSpec):
            raise ValueError("the exact path handles Laughlin-type specs only")
    if spec_a.n_electrons != spec_b.n_electrons:
        raise ValueError(
            f"specs must share the electron count, got {spec_a.n_electrons} and {spec_b.n_electrons}"
        )
    n = spec_a.n_electrons
    for spec in (spec_a, spec_b):
        if spec.degree > MAX_EXPANSION_DEGREE:
            raise ValueError(
                f"total degree {spec.degree} exceeds the expansion bound {MAX_EXPANSION_DEGREE}"
            )
    terms_a = jastrow_monomials(spec_a.m, n)
    terms_b = jastrow_monomials(spec_b.m, n)
    coefficient = 0
    for expo, ca in terms_a.items():
        cb = terms_b.get(expo)
        if cb is None:
            continue
        weight = 1
        for e in expo:
            weight *= math.factorial(e)
        coefficient += ca * cb * weight
    return InnerProductResult(
        value=complex(coefficient * math.pi**n),
        method="exact",
        stderr=0.0,
        exact_coefficient=coefficient,
        pi_power=n,
    )


def _mc_pair_sums(specs, pairs, samples, seed, workers, quad_order):
    """Per-pair (sum f, sum Re(f)^2, sum Im(f)^2) with f = conj(v_a) v_b.

    One shared coordinate stream feeds every pair; block partials are folded
    in block index order, so the totals are bit-identical for any worker
    count.
    """
    n = specs[0].n_electrons
    block_list = list(sampling.blocks(samples))

    def block_stats(block):
        _, start, count = block
        coords = sampling.gaussian_block(seed, n, start, count)
        values = [_gaussian_stripped_values(spec, coords, quad_order) for spec in specs]
        out = []
        for ia, ib in pairs:
            f = np.conj(values[ia]) * values[ib]
            out.append(
                (
                    complex(np.sum(f)),
                    float(np.sum(f.real**2)),
                    float(np.sum(f.imag**2)),
                )
            )
        return out

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            partials = list(pool.map(block_stats, block_list))
    else:
        partials = [block_stats(block) for block in block_list]

    totals = [(0j, 0.0, 0.0)] * len(pairs)
    for part in partials:
        totals = [
            (t0 + p0, t1 + p1, t2 + p2)
            for (t0, t1, t2), (p0, p1, p2) in zip(totals, part)
        ]
    return totals


def _mc_result(total, sq_re, sq_im, samples, seed, n) -> InnerProductResult:
    mean = total / samples
    var_re = max(0.0, (sq_re - total.real**2 / samples) / (samples - 1))
    var_im = max(0.0, (sq_im - total.imag**2 / samples) / (samples - 1))
    scale = math.pi**n
    return InnerProductResult(
        value=complex(mean * scale),
        method="mc",
        stderr=scale * math.sqrt((var_re + var_im) / samples),
        samples=samples,
        seed=seed,
    )


def inner_product_mc(
    spec_a: WavefunctionSpec,
    spec_b: WavefunctionSpec,
    samples: int,
    seed: int,
    workers: int = 1,
    quad_order: int = 32,
) -> InnerProductResult:
    """Importance-sampled scalar product on the deterministic stream.

    Each coordinate is drawn from exp(-|z|^2)/pi, the Gaussian-stripped
    integrand is averaged, and the result is scaled by pi^n.  Fixed
    (seed, samples) gives bit-identical output for any worker count.
    """
    if spec_a.n_electrons != spec_b.n_electrons:
        raise ValueError(
            f"specs must share the electron count, got {spec_a.n_electrons} and {spec_b.n_electrons}"
        )
    if samples < MIN_MC_SAMPLES:
        raise ValueError(f"need at least {MIN_MC_SAMPLES} samples, got {samples}")
    if workers < 1:
        raise ValueError(f"workers must be positive, got {workers}")
    if spec_a == spec_b:
        specs, pairs = [spec_a], [(0, 0)]
    else:
        specs, pairs = [spec_a, spec_b], [(0, 1)]
    ((total, sq_re, sq_im),) = _mc_pair_sums(specs, pairs, samples, seed, workers, quad_order)
    return _mc_result(total, sq_re, sq_im, samples, seed, spec_a.n_electrons)


# ----------------------------------------------------------------------
# Gram matrices


@dataclass(frozen=True, eq=False)
class GramMatrix:
    """Hermitian matrix of pairwise scalar products of a spec family."""

    specs: tuple[WavefunctionSpec, ...]
    method: str
    entries: tuple[tuple[InnerProductResult, ...], ...]
    samples: int = 0
    seed: int | None = None
    normalized: bool = False

    @property
    def dim(self) -> int:
        return len(self.specs)

    def values(self) -> np.ndarray:
        return np.array([[e.value for e in row] for row in self.entries])

    def stderrs(self) -> np.ndarray:
        return np.array([[e.stderr for e in row] for row in self.entries])

    def to_json(self) -> dict:
        return {
            "specs": [spec_to_json(s) for s in self.specs],
            "method": self.method,
            "samples": self.samples,
            "seed": self.seed,
            "normalized": self.normalized,
            "entries": [
                [
                    {"re": float(e.value.real), "im": float(e.value.imag), "stderr": float(e.stderr)}
                    for e in row
                ]
                for row in self.entries
            ],
        }

    def to_csv(self) -> str:
        lines = ["row,col,re,im,stderr"]
        for i, row in enumerate(self.entries):
            for j, e in enumerate(row):
                lines.append(f"{i},{j},{e.value.real!r},{e.value.imag!r},{e.stderr!r}")
        return "\n".join(lines) + "\n"


def _normalize_entries(entries):
    dim = len(entries)
    norms = [math.sqrt(entries[i][i].value.real) for i in range(dim)]
    for i, norm in enumerate(norms):
        if not norm > 0:
            raise ValueError(f"diagonal entry {i} is not positive; cannot normalize")
    out = []
    for i in range(dim):
        row = []
        for j in range(dim):
            e = entries[i][j]
            if i == j:
                value, stderr = complex(1.0), e.stderr / (norms[i] * norms[j])
            else:
                scale = norms[i] * norms[j]
                value, stderr = e.value / scale, e.stderr / scale
            row.append(
                InnerProductResult(
                    value=value, method=e.method, stderr=stderr,
                    samples=e.samples, seed=e.seed,
                )
            )
        out.append(tuple(row))
    return tuple(out)


def gram_matrix(
    specs,
    method: str = "exact",
    *,
    samples: int = 100_000,
    seed: int = 0,
    normalize: bool = False,
    workers: int = 1,
    quad_order: int = 32,
) -> GramMatrix:
    """Hermitian matrix of pairwise inner products.

    The mc method draws one shared coordinate stream per call, so every
    entry of one Gram matrix is estimated on common samples and conjugate
    symmetry is exact.  normalize rescales rows and columns by the diagonal
    norms, putting exactly 1 on the diagonal.
    """
    specs = tuple(specs)
    if not specs:
        raise ValueError("need at least one spec")
    n = specs[0].n_electrons
    for spec in specs:
        if spec.n_electrons != n:
            raise ValueError("all specs must share the electron count")
    dim = len(specs)
    grid: list[list[InnerProductResult | None]] = [[None] * dim for _ in range(dim)]

    if method == "exact":
        for i in range(dim):
            for j in range(i, dim):
                res = inner_product_exact(specs[i], specs[j])
                grid[i][j] = res
                grid[j][i] = res  # real symmetric on the Laughlin family
        samples_used, seed_used = 0, None
    elif method == "mc":
        pairs = [(i, j) for i in range(dim) for j in range(i, dim)]
        stats = _mc_pair_sums(list(specs), pairs, samples, seed, workers, quad_order)
        for (i, j), (total, sq_re, sq_im) in zip(pairs, stats):
            res = _mc_result(total, sq_re, sq_im, samples, seed, n)
            grid[i][j] = res
            if i != j:
                grid[j][i] = InnerProductResult(
                    value=res.value.conjugate(), method=res.method, stderr=res.stderr,
                    samples=res.samples, seed=res.seed,
                )
        samples_used, seed_used = samples, seed
    else:
        raise ValueError(f"unknown method {method!r}, expected 'exact' or 'mc'")

    entries = tuple(tuple(row) for row in grid)
    if normalize:
        entries = _normalize_entries(entries)
    return GramMatrix(
        specs=specs, method=method, entries=entries,
        samples=samples_used, seed=seed_used, normalized=normalize,
    )
