"""Experiment harness: seeded generation, sampling, Monte-Carlo oracles, sweeps, CSV.

Reproducibility scheme
----------------------
All randomness flows through Philox, a counter-based generator with 64-bit
words, keyed by the pair ``(seed, stream)``.  Each consumer owns a fixed
stream constant below, so the draws of one operation never depend on how many
draws another operation made.  Uniform variates are built from 53-bit
integers mapped to the open interval (0, 1), and standard normals are their
inverse-CDF images; both choices are bit-stable across platforms.  Derived
seeds for independent sub-experiments come from :func:`split_seed`.  Identical
seeds therefore reproduce identical sample matrices, identical Monte-Carlo
estimates, and byte-identical CSV files.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtri

from .errors import NotPositive, SingularPair
from .gaussian import (
    EquivalenceData,
    GaussianMeasure,
    equivalence_data,
    exact_bhattacharyya,
    exact_hellinger,
    exact_kl,
    exact_renyi,
    log_radon_nikodym_batch,
    regularized_bhattacharyya,
    regularized_hellinger,
    regularized_kl,
    regularized_renyi,
)
from .operators import DEFAULT_TOL, ToleranceConfig, TraceClassBlock, psd_sqrt, sym_eigen

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15  # splitmix64 increment

# Stream constants; one per randomness consumer.
STREAM_ORTHO = 1  # random orthogonal frame in gen_measure
STREAM_MEAN = 2  # mean vector in gen_measure
STREAM_SAMPLE = 3  # Gaussian sample matrices

DIVERGENCE_KINDS = ("kl", "renyi", "bhatt", "hellinger")


def split_seed(seed: int, index: int) -> int:
    """Derive an independent 64-bit seed for sub-experiment ``index``."""
    return (int(seed) + (int(index) + 1) * _GOLDEN) & _MASK64


def _generator(seed: int, stream: int) -> np.random.Generator:
    key = np.array([int(seed) & _MASK64, int(stream) & _MASK64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def standard_normal(seed: int, stream: int, shape) -> np.ndarray:
    """Standard normal variates via inverse CDF on open-interval 53-bit uniforms."""
    gen = _generator(seed, stream)
    raw = gen.integers(0, 1 << 53, size=shape, dtype=np.uint64)
    u = (raw.astype(np.float64) + 0.5) * 2.0**-53
    return ndtri(u)


# ---------------------------------------------------------------------------
# Synthetic measures
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SpectrumFamily:
    """Eigenvalue profile for synthetic covariances.

    ``powerlaw`` decays as k^(-s) with s > 1 (summable, mimicking trace-class
    decay), ``exponential`` as exp(-rate (k-1)) with rate > 0, ``explicit``
    uses the given strictly positive values, sorted descending.
    """

    kind: str
    dim: int
    s: float = 2.0
    rate: float = 1.0
    values: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("powerlaw", "exponential", "explicit"):
            raise ValueError(f"unknown spectrum family {self.kind!r}")
        if self.dim < 1:
            raise ValueError("dim must be a positive integer")
        if self.kind == "powerlaw" and not self.s > 1.0:
            raise ValueError("power-law exponent must satisfy s > 1")
        if self.kind == "exponential" and not self.rate > 0.0:
            raise ValueError("exponential rate must be strictly positive")
        if self.kind == "explicit":
            if not self.values:
                raise ValueError("explicit family needs at least one value")
            if len(self.values) != self.dim:
                raise ValueError("explicit family: len(values) must equal dim")
            if min(self.values) <= 0.0:
                raise ValueError("explicit eigenvalues must be strictly positive")

    @classmethod
    def power_law(cls, dim: int, s: float = 2.0) -> "SpectrumFamily":
        return cls("powerlaw", dim, s=s)

    @classmethod
    def exponential(cls, dim: int, rate: float = 1.0) -> "SpectrumFamily":
        return cls("exponential", dim, rate=rate)

    @classmethod
    def explicit(cls, values) -> "SpectrumFamily":
        vals = tuple(float(v) for v in values)
        return cls("explicit", len(vals), values=vals)

    def eigenvalues(self) -> np.ndarray:
        k = np.arange(1, self.dim + 1, dtype=float)
        if self.kind == "powerlaw":
            return k ** (-self.s)
        if self.kind == "exponential":
            return np.exp(-self.rate * (k - 1.0))
        return np.sort(np.array(self.values, dtype=float))[::-1]


def gen_measure(family: SpectrumFamily, seed: int, mean_scale: float = 0.0) -> GaussianMeasure:
    """Random Gaussian measure with the family's spectrum, deterministic in ``seed``.

    The covariance is ``V diag(lambda) V^T`` for a Haar-ish orthogonal ``V``
    (QR of a Gaussian matrix with the sign fix); the mean is ``mean_scale``
    times a standard normal vector.
    """
    mean_scale = float(mean_scale)
    if mean_scale < 0:
        raise ValueError("mean_scale must be nonnegative")
    lam = family.eigenvalues()
    dim = family.dim
    gauss = standard_normal(seed, STREAM_ORTHO, (dim, dim))
    q, r = np.linalg.qr(gauss)
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    q = q * signs
    cov = (q * lam) @ q.T
    mean = mean_scale * standard_normal(seed, STREAM_MEAN, dim)
    return GaussianMeasure(mean, TraceClassBlock(0.5 * (cov + cov.T)))


def sample_gaussian(measure: GaussianMeasure, n: int, seed: int) -> np.ndarray:
    """``n`` rows ``mean + C^{1/2} z`` with fresh standard normal ``z`` per row."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    root = psd_sqrt(measure.cov)
    z = standard_normal(seed, STREAM_SAMPLE, (int(n), measure.dim))
    return measure.mean + z @ root.entries


# ---------------------------------------------------------------------------
# Monte-Carlo oracles
# ---------------------------------------------------------------------------


def mc_kl_check(
    nu: GaussianMeasure, mu: GaussianMeasure, n: int, seed: int
) -> tuple[float, float]:
    """Monte-Carlo estimate of KL as the nu-mean of the log density ratio.

    Returns ``(estimate, stderr)``; the estimate is expected within 4 standard
    errors of :func:`~gaussdiv.gaussian.exact_kl`.
    """
    data = equivalence_data(nu, mu)
    if data.singular:
        raise SingularPair("measures are mutually singular; log density ratio undefined")
    samples = sample_gaussian(nu, n, seed)
    vals = log_radon_nikodym_batch(samples, nu, mu, data=data)
    return float(np.mean(vals)), float(np.std(vals, ddof=1) / math.sqrt(n))


def mc_rn_normalization(
    nu: GaussianMeasure, mu: GaussianMeasure, n: int, seed: int
) -> tuple[float, float]:
    """mu-mean of exp(log density ratio); the exact value is 1 (total mass of nu)."""
    data = equivalence_data(nu, mu)
    if data.singular:
        raise SingularPair("measures are mutually singular; log density ratio undefined")
    samples = sample_gaussian(mu, n, seed)
    vals = np.exp(log_radon_nikodym_batch(samples, nu, mu, data=data))
    return float(np.mean(vals)), float(np.std(vals, ddof=1) / math.sqrt(n))


def gauss_exp_quadratic(
    measure: GaussianMeasure,
    m_op: TraceClassBlock,
    b: np.ndarray,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> float:
    """Closed form of ``integral exp(1/2 <Mx,x> + <b,x>) dN(0, Q)``.

    Equals ``det(I - T)^{-1/2} exp(1/2 ||(I-T)^{-1/2} Q^{1/2} b||^2)`` with
    ``T = Q^{1/2} M Q^{1/2}``, evaluated in the log domain.  Requires a
    centered measure and ``I - T`` positive definite.
    """
    if np.any(measure.mean != 0.0):
        raise ValueError("gauss_exp_quadratic requires a centered measure")
    b = np.asarray(b, dtype=float)
    if b.shape != (measure.dim,):
        raise ValueError(f"b must be a vector of length {measure.dim}")
    if m_op.dim != measure.dim:
        raise ValueError(f"M has dim {m_op.dim}, measure has dim {measure.dim}")
    root = psd_sqrt(measure.cov, tol).entries
    t_mat = root @ m_op.entries @ root
    spec = sym_eigen(TraceClassBlock(0.5 * (t_mat + t_mat.T), tol))
    t_eig = spec.eigenvalues
    if t_eig.size and float(np.max(t_eig)) >= 1.0 - tol.singular_margin:
        raise NotPositive("I - Q^{1/2} M Q^{1/2} is not positive definite")
    b_hat = spec.eigenvectors.T @ (root @ b)
    log_val = -0.5 * float(np.sum(np.log1p(-t_eig))) + 0.5 * float(
        np.sum(b_hat * b_hat / (1.0 - t_eig))
    )
    return math.exp(log_val)


def _moment4(
    measure: GaussianMeasure, a: np.ndarray, b: np.ndarray, n: int, seed: int
) -> tuple[float, float, float]:
    """Fourth-moment Monte Carlo vs closed form, with the estimate's stderr."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    samples = sample_gaussian(measure, n, seed)
    centered = samples - measure.mean
    vals = (centered @ a) ** 2 * (centered @ b) ** 2
    q = measure.cov.entries
    closed = float((a @ q @ a) * (b @ q @ b) + 2.0 * (a @ q @ b) ** 2)
    return float(np.mean(vals)), closed, float(np.std(vals, ddof=1) / math.sqrt(n))


def moment4_check(
    measure: GaussianMeasure, a: np.ndarray, b: np.ndarray, n: int, seed: int
) -> tuple[float, float]:
    """Monte-Carlo and closed-form values of ``E <x-m,a>^2 <x-m,b>^2``.

    The closed form is ``<a,Qa><b,Qb> + 2<a,Qb>^2`` (so ``3 <a,Qa>^2`` when
    ``a = b``); the pair is the sampler-validation gate's raw material.
    """
    mc, closed, _ = _moment4(measure, a, b, n, seed)
    return mc, closed


# Canonical gate configurations: (measure builder, a, b).
_GATE_CONFIGS = (
    (lambda: GaussianMeasure([0.0, 0.0], np.eye(2)), (1.0, 0.0), (0.0, 1.0)),
    (lambda: GaussianMeasure([0.0, 0.0], np.eye(2)), (1.0, 0.0), (1.0, 0.0)),
    (lambda: GaussianMeasure([0.0], [[2.0]]), (1.0,), (1.0,)),
)


def sampler_gate(n: int, seed: int) -> bool:
    """Fourth-moment sanity gate for the sampler.

    Runs the three canonical ``(a, b)`` configurations on split seeds and
    demands ``|mc - closed| <= 5 stderr`` for each; run this before trusting
    any Radon-Nikodym Monte Carlo.
    """
    for index, (build, a, b) in enumerate(_GATE_CONFIGS):
        mc, closed, stderr = _moment4(build(), np.array(a), np.array(b), n, split_seed(seed, index))
        if abs(mc - closed) > 5.0 * stderr:
            return False
    return True


# ---------------------------------------------------------------------------
# Sweeps and CSV output
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SweepRecord:
    """One sweep grid point: parameter, both values, and their disagreement."""

    param: float
    regularized: float
    exact: float
    abs_err: float
    rel_err: float


def _record(param: float, regularized: float, exact: float) -> SweepRecord:
    abs_err = abs(regularized - exact)
    if exact != 0.0:
        rel_err = abs_err / abs(exact)
    else:
        rel_err = 0.0 if abs_err == 0.0 else math.inf
    return SweepRecord(float(param), float(regularized), float(exact), abs_err, rel_err)


def _check_kind(kind: str, r: float | None) -> None:
    if kind not in DIVERGENCE_KINDS:
        raise ValueError(f"unknown divergence kind {kind!r}; expected one of {DIVERGENCE_KINDS}")
    if kind == "renyi":
        if r is None or not 0.0 < float(r) < 1.0:
            raise ValueError("the renyi kind needs an order r strictly inside (0, 1)")
    elif r is not None:
        raise ValueError(f"order r only applies to renyi, not {kind!r}")


def exact_divergence(
    nu: GaussianMeasure,
    mu: GaussianMeasure,
    kind: str,
    r: float | None = None,
    *,
    data: EquivalenceData | None = None,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> float:
    """Exact divergence dispatch by kind (``kl``, ``renyi``, ``bhatt``, ``hellinger``)."""
    _check_kind(kind, r)
    if kind == "kl":
        return exact_kl(nu, mu, data=data, tol=tol)
    if kind == "renyi":
        return exact_renyi(nu, mu, float(r), data=data, tol=tol)
    if kind == "bhatt":
        return exact_bhattacharyya(nu, mu, data=data, tol=tol)
    return exact_hellinger(nu, mu, data=data, tol=tol)


def regularized_divergence(
    nu: GaussianMeasure,
    mu: GaussianMeasure,
    kind: str,
    gamma: float,
    r: float | None = None,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> float:
    """Regularized divergence dispatch by kind, at shift ``gamma > 0``."""
    _check_kind(kind, r)
    if kind == "kl":
        return regularized_kl(nu, mu, gamma, tol)
    if kind == "renyi":
        return regularized_renyi(nu, mu, float(r), gamma, tol)
    if kind == "bhatt":
        return regularized_bhattacharyya(nu, mu, gamma, tol)
    return regularized_hellinger(nu, mu, gamma, tol)


def sweep_gamma(
    nu: GaussianMeasure,
    mu: GaussianMeasure,
    kind: str,
    grid,
    r: float | None = None,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> list[SweepRecord]:
    """Regularized-vs-exact comparison along a strictly decreasing gamma grid.

    The exact column is constant; for equivalent pairs the abs_err column
    shrinks toward zero as gamma does.
    """
    _check_kind(kind, r)
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0 or np.min(grid) <= 0.0:
        raise ValueError("gamma grid must be nonempty and strictly positive")
    if grid.size > 1 and np.any(np.diff(grid) >= 0.0):
        raise ValueError("gamma grid must be strictly decreasing")
    data = equivalence_data(nu, mu, tol)
    if data.singular:
        raise SingularPair("measures are mutually singular; exact column is undefined")
    exact = exact_divergence(nu, mu, kind, r, data=data, tol=tol)
    return [_record(g, regularized_divergence(nu, mu, kind, float(g), r, tol=tol), exact) for g in grid]


def sweep_r(
    nu: GaussianMeasure,
    mu: GaussianMeasure,
    gamma: float,
    grid,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> list[SweepRecord]:
    """Renyi order sweep; ``gamma = 0`` selects the exact divergences.

    Each record compares the gamma-path value at order r against the exact
    value at the same order; as the grid approaches 1 or 0 the values approach
    the two KL directions.  Records come back sorted by r.
    """
    gamma = float(gamma)
    if not gamma >= 0.0:
        raise ValueError("gamma must be nonnegative (0 selects exact divergences)")
    grid = np.sort(np.asarray(grid, dtype=float))
    if grid.size == 0 or np.min(grid) <= 0.0 or np.max(grid) >= 1.0:
        raise ValueError("r grid must be nonempty and lie strictly inside (0, 1)")
    data = equivalence_data(nu, mu, tol)
    if data.singular and gamma == 0.0:
        raise SingularPair("measures are mutually singular; exact sweep is undefined")
    records = []
    for r in grid:
        exact = (
            math.inf if data.singular else exact_renyi(nu, mu, float(r), data=data, tol=tol)
        )
        value = exact if gamma == 0.0 else regularized_renyi(nu, mu, float(r), gamma, tol)
        records.append(_record(r, value, exact))
    return records


def write_sweep_csv(records: list[SweepRecord], path) -> None:
    """Write sweep records with the fixed header, 17 significant digits, LF endings."""
    with open(path, "w", newline="") as handle:
        handle.write("param,regularized,exact,abs_err,rel_err\n")
        for rec in records:
            handle.write(
                f"{rec.param:.17g},{rec.regularized:.17g},{rec.exact:.17g},"
                f"{rec.abs_err:.17g},{rec.rel_err:.17g}\n"
            )


def default_rn_pair(seed: int) -> tuple[GaussianMeasure, GaussianMeasure]:
    """Built-in equivalent pair for RN checks, deterministic in ``seed``.

    The base is a random power-law measure; the first measure is the base
    whitened-perturbed by an S with spectrum in [-0.5, 0.5] and given a mean
    offset inside the base's Cameron-Martin space.
    """
    mu = gen_measure(SpectrumFamily.power_law(5, 2.0), split_seed(seed, 11), mean_scale=0.3)
    root = psd_sqrt(mu.cov).entries
    frame = standard_normal(split_seed(seed, 12), STREAM_ORTHO, (5, 5))
    q, r = np.linalg.qr(frame)
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    q = q * signs
    s_mat = (q * np.linspace(-0.5, 0.5, 5)) @ q.T
    cov = root @ (np.eye(5) - s_mat) @ root
    shift = root @ (0.4 * standard_normal(split_seed(seed, 13), STREAM_MEAN, 5))
    nu = GaussianMeasure(mu.mean + shift, TraceClassBlock(0.5 * (cov + cov.T)))
    return nu, mu
