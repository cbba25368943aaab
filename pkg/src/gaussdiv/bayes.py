"""Linear-Gaussian Bayesian inverse problem: posterior update and its information gain.

The model is ``y = A u + eta`` with ``u ~ N(m0, C0)`` on the state space and
``eta ~ N(0, Gamma)`` on a finite observation space.  Everything is solved in
observation space (``obs_dim x obs_dim`` factorizations); state-space
operators are never inverted.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .errors import DimMismatch, NotPositive
from .gaussian import GaussianMeasure
from .operators import DEFAULT_TOL, ToleranceConfig, TraceClassBlock


class LinearGaussianModel:
    """Forward map, noise covariance, Gaussian prior, and one observation vector."""

    __slots__ = ("forward", "noise_cov", "prior", "observation")

    def __init__(self, forward, noise_cov, prior: GaussianMeasure, observation,
                 tol: ToleranceConfig = DEFAULT_TOL):
        a = np.array(forward, dtype=float)
        if a.ndim != 2:
            raise ValueError(f"forward map must be a matrix, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise ValueError("forward map contains NaN or Inf")
        gamma = noise_cov if isinstance(noise_cov, TraceClassBlock) else TraceClassBlock(noise_cov, tol)
        y = np.array(observation, dtype=float)
        if y.ndim != 1 or not np.all(np.isfinite(y)):
            raise ValueError("observation must be a finite vector")
        obs_dim, dim = a.shape
        if gamma.dim != obs_dim:
            raise DimMismatch(f"noise cov dim {gamma.dim} does not match forward rows {obs_dim}")
        if prior.dim != dim:
            raise DimMismatch(f"prior dim {prior.dim} does not match forward columns {dim}")
        if y.shape[0] != obs_dim:
            raise DimMismatch(f"observation length {y.shape[0]} does not match forward rows {obs_dim}")
        if float(np.min(np.linalg.eigvalsh(gamma.entries))) <= tol.psd_clip:
            raise NotPositive("noise covariance must be strictly positive definite")
        if float(np.min(np.linalg.eigvalsh(prior.cov.entries))) <= tol.psd_clip:
            raise NotPositive("prior covariance must be strictly positive definite")
        a.flags.writeable = False
        y.flags.writeable = False
        self.forward = a
        self.noise_cov = gamma
        self.prior = prior
        self.observation = y

    @property
    def dim(self) -> int:
        return self.forward.shape[1]

    @property
    def obs_dim(self) -> int:
        return self.forward.shape[0]

    def to_dict(self) -> dict:
        return {
            "forward": self.forward.tolist(),
            "noise_cov": self.noise_cov.entries.tolist(),
            "prior": self.prior.to_dict(),
            "observation": self.observation.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "LinearGaussianModel":
        return cls(
            np.array(data["forward"], dtype=float),
            np.array(data["noise_cov"], dtype=float),
            GaussianMeasure.from_dict(data["prior"]),
            np.array(data["observation"], dtype=float),
        )

    def __repr__(self) -> str:
        return f"LinearGaussianModel(dim={self.dim}, obs_dim={self.obs_dim})"


def _obs_factor(model: LinearGaussianModel):
    """Cholesky factor of Gamma + A C0 A^T, the observation-space system matrix."""
    a = model.forward
    ac0 = a @ model.prior.cov.entries
    k = model.noise_cov.entries + ac0 @ a.T
    try:
        factor = scipy.linalg.cho_factor(0.5 * (k + k.T), lower=True)
    except scipy.linalg.LinAlgError as exc:
        raise NotPositive("observation-space system matrix is not positive definite") from exc
    return factor, ac0


def posterior(model: LinearGaussianModel, tol: ToleranceConfig = DEFAULT_TOL) -> GaussianMeasure:
    """Posterior measure of ``u`` given ``y``.

    ``m = m0 + C0 A^T (Gamma + A C0 A^T)^{-1} (y - A m0)`` and
    ``C = C0 - C0 A^T (Gamma + A C0 A^T)^{-1} A C0``, both via one
    observation-space Cholesky solve.
    """
    factor, ac0 = _obs_factor(model)
    innovation = model.observation - model.forward @ model.prior.mean
    mean = model.prior.mean + ac0.T @ scipy.linalg.cho_solve(factor, innovation)
    cov = model.prior.cov.entries - ac0.T @ scipy.linalg.cho_solve(factor, ac0)
    return GaussianMeasure(mean, TraceClassBlock(0.5 * (cov + cov.T), tol), tol)


def kl_posterior_prior(model: LinearGaussianModel, tol: ToleranceConfig = DEFAULT_TOL) -> float:
    """Closed-form ``D_KL(posterior || prior)`` evaluated in observation space.

    ``1/2 [ log det(Gamma + A C0 A^T) - log det Gamma
            - tr(A C A^T Gamma^{-1}) - <m - m0, A^T Gamma^{-1} (A m - y)> ]``
    with ``(m, C)`` the posterior.  For ``Gamma = I`` the first two terms
    collapse to ``log det(I + A C0 A^T)``.  Agrees with the whitened-spectrum
    KL of the posterior against the prior.
    """
    factor, _ = _obs_factor(model)
    post = posterior(model, tol)
    a = model.forward
    logdet_k = 2.0 * float(np.sum(np.log(np.diag(factor[0]))))
    try:
        gamma_factor = scipy.linalg.cho_factor(model.noise_cov.entries, lower=True)
    except scipy.linalg.LinAlgError as exc:
        raise NotPositive("noise covariance is not positive definite") from exc
    logdet_gamma = 2.0 * float(np.sum(np.log(np.diag(gamma_factor[0]))))
    acat = a @ post.cov.entries @ a.T
    trace_term = float(np.trace(scipy.linalg.cho_solve(gamma_factor, acat)))
    residual = a @ post.mean - model.observation
    mean_term = float((post.mean - model.prior.mean) @ (a.T @ scipy.linalg.cho_solve(gamma_factor, residual)))
    return 0.5 * (logdet_k - logdet_gamma - trace_term - mean_term)
