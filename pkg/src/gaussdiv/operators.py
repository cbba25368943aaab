"""Finite-block-plus-scalar-shift operator calculus.

An operator on an infinite-dimensional separable Hilbert space of the form
``T + c*I``, with ``T`` a finite-rank symmetric block and ``c`` an exact
scalar on the whole space, admits closed-form extended traces and extended
Fredholm determinants: the infinite tail contributes ``c`` to the trace and a
factor 1 to ``det(T/c + I)``.  Everything in this module is exact for that
representation, up to floating point; nothing here is a truncation of a
series.

The block of a :class:`TraceClassBlock` is symmetrized on construction to
kill asymmetric rounding from upstream arithmetic.  A :class:`ShiftedOperator`
block is stored as given: products of noncommuting symmetric operators are
genuinely nonsymmetric, and forcing symmetry there would break the
determinant product property.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import Degenerate, DimMismatch, EigFailure, NonFinite, NotPositive, NotPSD, NotShifted


@dataclass(frozen=True)
class ToleranceConfig:
    """Numerical thresholds used across the package.

    sym_tol: allowed relative asymmetry of a symmetric matrix.
    eig_tol: allowed residual in eigendecomposition identities.
    psd_clip: eigenvalues in (-psd_clip, 0) count as zero; below is an error.
    singular_margin: how close an eigenvalue may get to a positivity boundary
        before the operator is treated as singular.
    """

    sym_tol: float = 1e-10
    eig_tol: float = 1e-9
    psd_clip: float = 1e-12
    singular_margin: float = 1e-10

    def __post_init__(self) -> None:
        for name in ("sym_tol", "eig_tol", "psd_clip", "singular_margin"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")


DEFAULT_TOL = ToleranceConfig()


def _as_square_matrix(entries, *, what: str) -> np.ndarray:
    m = np.array(entries, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"{what} must be a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NonFinite(f"{what} contains NaN or Inf")
    return m


def _max_asymmetry(m: np.ndarray) -> float:
    return 0.0 if m.size == 0 else float(np.max(np.abs(m - m.T)))


class TraceClassBlock:
    """Symmetric dim x dim matrix standing for a finite-rank trace-class operator.

    Entries are symmetrized exactly on construction; input asymmetric beyond
    ``tol.sym_tol * (1 + max|entries|)`` is rejected.
    """

    __slots__ = ("entries",)

    def __init__(self, entries, tol: ToleranceConfig = DEFAULT_TOL):
        m = _as_square_matrix(entries, what="TraceClassBlock entries")
        scale = 1.0 + (float(np.max(np.abs(m))) if m.size else 0.0)
        if _max_asymmetry(m) > tol.sym_tol * scale:
            raise ValueError("TraceClassBlock entries are not symmetric within tolerance")
        m = 0.5 * (m + m.T)
        m.flags.writeable = False
        self.entries = m

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def to_dict(self) -> dict:
        return {"dim": self.dim, "block": self.entries.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "TraceClassBlock":
        block = cls(data["block"])
        if block.dim != int(data["dim"]):
            raise ValueError("declared dim does not match block shape")
        return block

    def __repr__(self) -> str:
        return f"TraceClassBlock(dim={self.dim})"


class ShiftedOperator:
    """The operator ``block + shift * I`` on the full space.

    ``block`` may be a :class:`TraceClassBlock` or any square matrix; products
    of shifted operators produce nonsymmetric blocks and those are kept as-is.
    Positivity of the operator means ``shift > 0`` and ``block + shift * I``
    positive definite on the finite carrier.
    """

    __slots__ = ("block", "shift")

    def __init__(self, block, shift: float):
        if isinstance(block, TraceClassBlock):
            m = block.entries
        else:
            m = _as_square_matrix(block, what="ShiftedOperator block")
            m.flags.writeable = False
        c = float(shift)
        if not np.isfinite(c):
            raise NonFinite("shift is not finite")
        self.block = m
        self.shift = c

    @property
    def dim(self) -> int:
        return self.block.shape[0]

    def apply(self, v: np.ndarray) -> np.ndarray:
        """Matrix-vector product ``(block + shift*I) v`` on the finite carrier."""
        v = np.asarray(v, dtype=float)
        return self.block @ v + self.shift * v

    def to_dict(self) -> dict:
        return {"dim": self.dim, "block": self.block.tolist(), "shift": self.shift}

    @classmethod
    def from_dict(cls, data: dict) -> "ShiftedOperator":
        op = cls(np.array(data["block"], dtype=float), float(data["shift"]))
        if op.dim != int(data["dim"]):
            raise ValueError("declared dim does not match block shape")
        return op

    def __repr__(self) -> str:
        return f"ShiftedOperator(dim={self.dim}, shift={self.shift!r})"


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues in descending order; column k of eigenvectors pairs with eigenvalue k."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def sym_eigen(T: TraceClassBlock) -> Spectrum:
    """Full symmetric eigendecomposition, eigenvalues descending."""
    try:
        w, v = np.linalg.eigh(T.entries)
    except np.linalg.LinAlgError as exc:
        raise EigFailure(str(exc)) from exc
    order = slice(None, None, -1)
    w = np.ascontiguousarray(w[order])
    v = np.ascontiguousarray(v[:, order])
    w.flags.writeable = False
    v.flags.writeable = False
    return Spectrum(eigenvalues=w, eigenvectors=v)


def _general_eigvals(block: np.ndarray, tol: ToleranceConfig) -> np.ndarray:
    """Real eigenvalues of a square block; symmetric fast path, else general eig.

    Nonsymmetric blocks arise as products of symmetric positive operators and
    have real spectra; a genuinely complex spectrum is an input error.
    """
    scale = 1.0 + (float(np.max(np.abs(block))) if block.size else 0.0)
    if _max_asymmetry(block) <= tol.sym_tol * scale:
        try:
            return np.linalg.eigvalsh(0.5 * (block + block.T))
        except np.linalg.LinAlgError as exc:
            raise EigFailure(str(exc)) from exc
    try:
        w = scipy.linalg.eigvals(block)
    except Exception as exc:
        raise EigFailure(str(exc)) from exc
    if np.max(np.abs(w.imag)) > tol.eig_tol * (1.0 + np.max(np.abs(w.real))):
        raise EigFailure("block has a genuinely complex spectrum")
    return np.sort(w.real)


def ext_trace(op: ShiftedOperator) -> float:
    """Extended trace ``tr(block) + shift``; the tail contributes the bare shift."""
    return float(np.trace(op.block)) + op.shift


def ext_fredholm_logdet(op: ShiftedOperator, tol: ToleranceConfig = DEFAULT_TOL) -> float:
    """Log of the extended Fredholm determinant of a positive shifted operator.

    For ``block + c*I`` with eigenvalues ``tau_k`` of the block this is
    ``log c + sum_k log(1 + tau_k / c)``: the determinant ``c * det(block/c + I)``
    evaluated in the log domain.  Exact for finite-rank blocks because the
    tail factor of ``det(block/c + I)`` is 1.

    Raises
    ------
    NotShifted
        if ``shift <= 0``.
    NotPositive
        if any ``1 + tau_k / c`` falls at or below ``tol.singular_margin``.
    """
    c = op.shift
    if c <= 0:
        raise NotShifted("extended determinant requires a strictly positive shift")
    tau = _general_eigvals(op.block, tol)
    ratios = tau / c
    if ratios.size and np.min(1.0 + ratios) <= tol.singular_margin:
        raise NotPositive("shifted operator is not positive definite")
    return float(np.log(c) + np.sum(np.log1p(ratios)))


def carleman_logdet2(T: TraceClassBlock, tol: ToleranceConfig = DEFAULT_TOL) -> float:
    """Log Hilbert-Carleman determinant ``log det2(I + T) = sum_k [log(1+tau_k) - tau_k]``.

    The trace subtraction makes this continuous in the Hilbert-Schmidt norm;
    passing ``T = -S`` yields ``sum_k [log(1-alpha_k) + alpha_k]``, the
    covariance part of the exact KL divergence.
    """
    tau = sym_eigen(T).eigenvalues
    if tau.size and np.min(1.0 + tau) <= tol.singular_margin:
        raise NotPositive("I + T is not positive definite")
    return float(np.sum(np.log1p(tau) - tau))


def shifted_combine(coeffs: list[tuple[float, ShiftedOperator]]) -> ShiftedOperator:
    """Linear combination ``sum_i w_i (block_i + shift_i I)``, exact in both parts."""
    if not coeffs:
        raise ValueError("empty combination")
    dim = coeffs[0][1].dim
    block = np.zeros((dim, dim))
    shift = 0.0
    for w, op in coeffs:
        if op.dim != dim:
            raise DimMismatch(f"operator dims differ: {op.dim} vs {dim}")
        block += float(w) * op.block
        shift += float(w) * op.shift
    return ShiftedOperator(block, shift)


def shifted_mul(x: ShiftedOperator, y: ShiftedOperator) -> ShiftedOperator:
    """Product ``(T1+c1 I)(T2+c2 I) = (T1 T2 + c1 T2 + c2 T1) + c1 c2 I``."""
    if x.dim != y.dim:
        raise DimMismatch(f"operator dims differ: {x.dim} vs {y.dim}")
    block = x.block @ y.block + x.shift * y.block + y.shift * x.block
    return ShiftedOperator(block, x.shift * y.shift)


def shifted_inv(op: ShiftedOperator, tol: ToleranceConfig = DEFAULT_TOL) -> ShiftedOperator:
    """Inverse of a positive shifted operator: shift ``1/c``, block ``(B+cI)^{-1} - I/c``.

    The tail of the inverse is exactly ``(1/c) I``; the finite block is the
    correction on the carrier.
    """
    c = op.shift
    if c <= 0:
        raise NotPositive("inverse requires a strictly positive shift")
    tau = _general_eigvals(op.block, tol)
    if tau.size and np.min(1.0 + tau / c) <= tol.singular_margin:
        raise NotPositive("shifted operator is not positive definite")
    scale = 1.0 + (float(np.max(np.abs(op.block))) if op.block.size else 0.0)
    if _max_asymmetry(op.block) <= tol.sym_tol * scale:
        w, v = np.linalg.eigh(0.5 * (op.block + op.block.T))
        inv_block = (v * (1.0 / (w + c) - 1.0 / c)) @ v.T
        inv_block = 0.5 * (inv_block + inv_block.T)
    else:
        dim = op.dim
        inv_block = np.linalg.inv(op.block + c * np.eye(dim)) - np.eye(dim) / c
    return ShiftedOperator(inv_block, 1.0 / c)


def shifted_identity(dim: int) -> ShiftedOperator:
    return ShiftedOperator(np.zeros((dim, dim)), 1.0)


def psd_sqrt(T: TraceClassBlock, tol: ToleranceConfig = DEFAULT_TOL) -> TraceClassBlock:
    """Symmetric PSD square root via eigendecomposition.

    Eigenvalues in ``(-psd_clip, 0)`` are rounding noise and clip to zero;
    anything below ``-psd_clip`` raises :class:`NotPSD`.
    """
    spec = sym_eigen(T)
    lam = spec.eigenvalues
    if lam.size and float(np.min(lam)) < -tol.psd_clip:
        raise NotPSD("matrix has a genuinely negative eigenvalue")
    root = (spec.eigenvectors * np.sqrt(np.clip(lam, 0.0, None))) @ spec.eigenvectors.T
    return TraceClassBlock(0.5 * (root + root.T), tol)


def psd_inv_sqrt(
    T: TraceClassBlock, clip: float = DEFAULT_TOL.psd_clip, tol: ToleranceConfig = DEFAULT_TOL
) -> TraceClassBlock:
    """Symmetric inverse square root; eigenvalues at or below ``clip`` are degenerate."""
    spec = sym_eigen(T)
    lam = spec.eigenvalues
    if lam.size and float(np.min(lam)) < -tol.psd_clip:
        raise NotPSD("matrix has a genuinely negative eigenvalue")
    if lam.size == 0 or float(np.min(lam)) <= clip:
        raise Degenerate("matrix has an eigenvalue at or below the clip threshold")
    root = (spec.eigenvectors * (1.0 / np.sqrt(lam))) @ spec.eigenvectors.T
    return TraceClassBlock(0.5 * (root + root.T), tol)
