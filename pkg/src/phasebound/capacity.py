"""Capacity formulas and photon-number entropy bounds for the loss channel.

Everything here is diagonal in photon number: the loss channel acts on a
number distribution p_n through the binomial kernel B_eta(n, l), the
probability that l of n photons are lost. Entropies are Shannon entropies
in nats, by direct summation.
"""

import math

import numpy as np
from scipy.special import gammaln, xlogy

from .errors import ValidationError

__all__ = ["unrestricted_capacity", "binomial_loss_kernel", "binomial_loss_matrix",
           "loss_distribution", "shannon_entropy", "entropy_variance_bound",
           "entropy_gain", "capacity_upper_bound_lossy"]

# direct C(n,l) in floats is exact up to here; beyond, work in log space
_DIRECT_N = 60


def unrestricted_capacity(mean_photons):
    """(N+1)ln(N+1) - N ln N: energy-constrained capacity in nats.

    0*ln(0) = 0, so the vacuum constraint gives zero capacity.
    """
    n = float(mean_photons)
    if n < 0.0:
        raise ValidationError(f"mean photon number must be >= 0, got {n}")
    return float(xlogy(n + 1.0, n + 1.0) - xlogy(n, n))


def _check_eta(eta):
    eta = float(eta)
    if not 0.0 <= eta <= 1.0:
        raise ValidationError(f"transmittance must lie in [0, 1], got {eta}")
    return eta


def binomial_loss_kernel(n, l, eta):
    """B_eta(n, l) = C(n, l) eta^(n-l) (1-eta)^l for 0 <= l <= n."""
    eta = _check_eta(eta)
    if not 0 <= l <= n:
        raise ValidationError(f"need 0 <= l <= n, got n={n}, l={l}")
    if eta == 1.0:
        return 1.0 if l == 0 else 0.0
    if eta == 0.0:
        return 1.0 if l == n else 0.0
    if n <= _DIRECT_N:
        return math.comb(n, l) * eta ** (n - l) * (1.0 - eta) ** l
    logc = gammaln(n + 1) - gammaln(l + 1) - gammaln(n - l + 1)
    return float(np.exp(logc + (n - l) * np.log(eta) + l * np.log1p(-eta)))


def binomial_loss_matrix(n_max, eta):
    """Kernel table K[n, l] = B_eta(n, l), lower triangular, n, l <= n_max."""
    eta = _check_eta(eta)
    size = n_max + 1
    out = np.zeros((size, size))
    if eta == 1.0:
        out[:, 0] = 1.0
        return out
    if eta == 0.0:
        np.fill_diagonal(out, 1.0)
        return out
    nn, ll = np.meshgrid(np.arange(size, dtype=float),
                         np.arange(size, dtype=float), indexing="ij")
    valid = ll <= nn
    kk = np.where(valid, nn - ll, 0.0)
    logk = (gammaln(nn + 1.0) - gammaln(ll + 1.0) - gammaln(kk + 1.0)
            + kk * np.log(eta) + ll * np.log1p(-eta))
    out[valid] = np.exp(logk[valid])
    return out


def loss_distribution(photon_dist, eta):
    """q_l = sum_{n >= l} p_n B_eta(n, l): distribution of the loss count."""
    p = np.asarray(photon_dist, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise ValidationError("photon distribution must be a 1-d array")
    if np.any(p < 0.0) or not np.all(np.isfinite(p)):
        raise ValidationError("photon distribution entries must be finite, >= 0")
    if abs(p.sum() - 1.0) > 1e-10:
        raise ValidationError(f"photon distribution sums to {p.sum()!r}, not 1")
    kern = binomial_loss_matrix(p.size - 1, eta)
    return p @ kern


def shannon_entropy(dist):
    """-sum p ln p in nats, with 0*ln(0) = 0."""
    p = np.asarray(dist, dtype=float)
    return float(-np.sum(xlogy(p, p)))


def entropy_variance_bound(variance):
    """0.5*ln[2*pi*e*(Var + 1/12)]: max entropy of an integer variable."""
    v = float(variance)
    if v < 0.0:
        raise ValidationError(f"variance must be >= 0, got {v}")
    return 0.5 * np.log(2.0 * np.pi * np.e * (v + 1.0 / 12.0))


def entropy_gain(photon_dist, eta):
    """H(L) - H(N): entropy picked up by the loss count over the input.

    Holevo's minimum-entropy-gain theorem puts this at >= ln(1-eta) for the
    number-diagonal inputs used here.
    """
    q = loss_distribution(photon_dist, eta)
    return shannon_entropy(q) - shannon_entropy(photon_dist)


def capacity_upper_bound_lossy(mean_photons, eta):
    """Phase-modulation capacity upper bound through a transmittance-eta loss.

    0.5*ln[2*pi*e*(eta*(1-eta)*N + 1/12)/(1-eta)^2], valid for 0 < eta < 1
    only: it diverges as eta -> 1 and carries no meaning at eta = 0.
    """
    n = float(mean_photons)
    if n < 0.0:
        raise ValidationError(f"mean photon number must be >= 0, got {n}")
    eta = _check_eta(eta)
    if eta in (0.0, 1.0):
        raise ValidationError("lossy capacity bound needs 0 < eta < 1")
    arg = 2.0 * np.pi * np.e * (eta * (1.0 - eta) * n + 1.0 / 12.0)
    return 0.5 * np.log(arg / (1.0 - eta) ** 2)
