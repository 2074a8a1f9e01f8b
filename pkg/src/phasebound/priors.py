"""Phase priors on [0, 2*pi) and their information functionals.

Three families are supported: uniform windows (possibly wrapping through 0),
wrapped Gaussians, and tabulated densities on a uniform grid. All integrals
run over a single period; entropies are in nats. Squared error downstream is
the plain non-periodic (phi_hat - phi)^2, so the variance here treats the
phase as a real variable on [0, 2*pi).
"""

import numpy as np

from .errors import ValidationError

__all__ = ["PhasePrior", "TWO_PI", "differential_entropy", "entropy_power",
           "prior_max_density", "prior_variance"]

TWO_PI = 2.0 * np.pi

# grid used for numeric functionals of the analytic kinds
_DEFAULT_GRID = 4096


class PhasePrior:
    """Prior density P(phi) for a phase on [0, 2*pi)."""

    def __init__(self, kind, params, values=None, grid_size=_DEFAULT_GRID):
        self.kind = kind
        self.params = dict(params)
        self.grid_size = int(grid_size)
        if values is not None:
            values = np.asarray(values, dtype=float)
        self._values = values

    # ---- constructors -------------------------------------------------

    @classmethod
    def uniform(cls, center=np.pi, width=TWO_PI):
        """Uniform window of the given width centered at `center` (radians)."""
        width = float(width)
        if not 0.0 < width <= TWO_PI:
            raise ValidationError(f"uniform prior needs 0 < width <= 2*pi, got {width}")
        return cls("uniform", {"center": float(center) % TWO_PI, "width": width})

    @classmethod
    def wrapped_gaussian(cls, mean, sigma, grid_size=_DEFAULT_GRID):
        """Gaussian of width `sigma` wrapped onto the circle (+/-5 images)."""
        sigma = float(sigma)
        if sigma <= 0.0:
            raise ValidationError(f"wrapped_gaussian needs sigma > 0, got {sigma}")
        return cls("wrapped_gaussian", {"mean": float(mean) % TWO_PI, "sigma": sigma},
                   grid_size=grid_size)

    @classmethod
    def tabulated(cls, values):
        """Density values on the uniform grid phi_k = 2*pi*k/K, K = len(values).

        The numeric integral (periodic trapezoid rule) must be within 1e-8 of
        one; values are then rescaled so that it is exactly one.
        """
        values = np.asarray(values, dtype=float)
        if values.ndim != 1 or values.size < 2:
            raise ValidationError("tabulated prior needs at least 2 grid values")
        if not np.all(np.isfinite(values)) or np.any(values < 0):
            raise ValidationError("tabulated prior values must be finite and nonnegative")
        integral = values.sum() * (TWO_PI / values.size)
        if abs(integral - 1.0) > 1e-8:
            raise ValidationError(f"tabulated prior integrates to {integral!r}, not 1")
        values = values / integral
        return cls("tabulated", {"grid_size": values.size}, values=values,
                   grid_size=values.size)

    # ---- density ------------------------------------------------------

    def density(self, phi):
        """P(phi), vectorized; phi is taken modulo 2*pi."""
        phi = np.asarray(phi, dtype=float) % TWO_PI
        if self.kind == "uniform":
            start = (self.params["center"] - self.params["width"] / 2.0) % TWO_PI
            inside = (phi - start) % TWO_PI < self.params["width"]
            return np.where(inside, 1.0 / self.params["width"], 0.0)
        if self.kind == "wrapped_gaussian":
            mu, sig = self.params["mean"], self.params["sigma"]
            out = np.zeros_like(phi)
            for j in range(-5, 6):
                out += np.exp(-((phi - mu - TWO_PI * j) ** 2) / (2.0 * sig**2))
            return out / (sig * np.sqrt(TWO_PI))
        # tabulated: periodic linear interpolation between grid points
        k = self._values.size
        grid = np.arange(k + 1) * (TWO_PI / k)
        vals = np.concatenate([self._values, self._values[:1]])
        return np.interp(phi, grid, vals)

    def grid_density(self, n):
        """Density on the open uniform grid of n points (wraps periodically)."""
        return self.density(np.arange(n) * (TWO_PI / n))

    # ---- functionals ----------------------------------------------------

    def _numeric(self, f):
        # periodic trapezoid rule on the working grid
        n = self.grid_size
        phi = np.arange(n) * (TWO_PI / n)
        dens = self._values if self.kind == "tabulated" else self.density(phi)
        return np.sum(f(phi, dens)) * (TWO_PI / n)

    def _moment_integral(self, f):
        # trapezoid on the closed interval [0, 2*pi]: f is not periodic, so
        # the seam carries f(2*pi) != f(0) even though the density wraps
        n = self.grid_size
        phi = np.arange(n) * (TWO_PI / n)
        dens = self._values if self.kind == "tabulated" else self.density(phi)
        vals = f(phi) * dens
        end = f(TWO_PI) * dens[0]
        return (TWO_PI / n) * (vals.sum() - 0.5 * (vals[0] - end))

    def differential_entropy(self):
        """h = -int P ln P dphi in nats, with 0*ln(0) = 0."""
        if self.kind == "uniform":
            return float(np.log(self.params["width"]))
        def f(phi, dens):
            safe = np.where(dens > 0.0, dens, 1.0)
            return -dens * np.log(safe)
        return float(self._numeric(f))

    def entropy_power(self):
        """Q = e^{2h}/(2*pi*e): variance of a Gaussian with the same entropy."""
        return float(np.exp(2.0 * self.differential_entropy()) / (TWO_PI * np.e))

    def max_density(self):
        """Peak density P_max; at least 1/(2*pi) for any normalized prior."""
        if self.kind == "uniform":
            return 1.0 / self.params["width"]
        if self.kind == "wrapped_gaussian":
            return float(self.density(self.params["mean"]))
        return float(self._values.max())

    def mean(self):
        """E[phi] with phi read as a real number in [0, 2*pi)."""
        if self.kind == "uniform":
            m, _ = self._window_moments()
            return m
        return float(self._moment_integral(lambda phi: phi))

    def variance(self):
        """Var(phi), non-periodic, matching the squared-error convention."""
        if self.kind == "uniform":
            m, second = self._window_moments()
            return second - m * m
        m = self.mean()
        return float(self._moment_integral(lambda phi: (phi - m) ** 2))

    def _window_pieces(self):
        # support arcs of a uniform window, split at the 0/2*pi seam
        c, w = self.params["center"], self.params["width"]
        start = (c - w / 2.0) % TWO_PI
        if start + w <= TWO_PI or w == TWO_PI:
            return [(start, start + w)]
        return [(start, TWO_PI), (0.0, start + w - TWO_PI)]

    def _window_moments(self):
        w = self.params["width"]
        pieces = self._window_pieces()
        m1 = sum(b * b - a * a for a, b in pieces) / (2.0 * w)
        m2 = sum(b**3 - a**3 for a, b in pieces) / (3.0 * w)
        return m1, m2

    def fourier_coefficients(self, kmax):
        """E[e^{i k phi}] for k = 0..kmax (complex array of length kmax+1).

        Exact for the analytic kinds; spectrally accurate periodic trapezoid
        for tabulated densities.
        """
        k = np.arange(kmax + 1)
        if self.kind == "uniform":
            c, w = self.params["center"], self.params["width"]
            halfarg = k * w / 2.0
            mag = np.ones(kmax + 1)
            nz = k > 0
            mag[nz] = np.sin(halfarg[nz]) / halfarg[nz]
            return np.exp(1j * k * c) * mag
        if self.kind == "wrapped_gaussian":
            mu, sig = self.params["mean"], self.params["sigma"]
            return np.exp(1j * k * mu - 0.5 * (k * sig) ** 2)
        n = self._values.size
        phi = np.arange(n) * (TWO_PI / n)
        return (TWO_PI / n) * (np.exp(1j * np.outer(k, phi)) @ self._values)

    def normalization(self):
        """Integral of the density over [0, 2*pi) (should be 1).

        Uniform windows use the exact arc lengths; quadrature of the
        indicator would carry an O(1/grid) edge error.
        """
        if self.kind == "uniform":
            return sum(b - a for a, b in self._window_pieces()) / self.params["width"]
        return float(self._numeric(lambda phi, dens: dens))

    # ---- sampling -------------------------------------------------------

    def sample(self, rng, size):
        """Draw phases from the prior; deterministic given the rng state."""
        if self.kind == "uniform":
            c, w = self.params["center"], self.params["width"]
            return (c - w / 2.0 + w * rng.random(size)) % TWO_PI
        if self.kind == "wrapped_gaussian":
            mu, sig = self.params["mean"], self.params["sigma"]
            return (mu + sig * rng.standard_normal(size)) % TWO_PI
        # inverse CDF through the piecewise-constant grid density
        n = self._values.size
        edges = np.arange(n + 1) * (TWO_PI / n)
        cdf = np.concatenate([[0.0], np.cumsum(self._values) * (TWO_PI / n)])
        cdf /= cdf[-1]
        return np.interp(rng.random(size), cdf, edges)

    # ---- misc -----------------------------------------------------------

    def descriptor(self):
        """JSON-friendly description of the prior."""
        out = {"kind": self.kind}
        out.update({k: (v if not isinstance(v, np.generic) else float(v))
                    for k, v in self.params.items()})
        return out

    def __repr__(self):
        inner = ", ".join(f"{k}={v:.6g}" for k, v in self.params.items())
        return f"PhasePrior.{self.kind}({inner})"


# free-function spellings of the prior functionals

def differential_entropy(prior):
    return prior.differential_entropy()


def entropy_power(prior):
    return prior.entropy_power()


def prior_max_density(prior):
    return prior.max_density()


def prior_variance(prior):
    return prior.variance()
