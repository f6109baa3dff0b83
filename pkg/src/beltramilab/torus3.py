"""Curl eigenfields on the flat 3-torus (sanity-check corner of the lab).

U(x) = sum_k [ b_k cos(k.x) + (b_k x k)/J sin(k.x) ]  with |k|^2 = J^2 and
k.b_k = 0 satisfies curl U = J U exactly.  The class checks the integer
constraints exactly and provides both an analytic residual (mode identities)
and a finite-difference curl residual on a grid of sample points.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .errors import ConfigError


class CurlEigenfield:
    """Trigonometric curl eigenfield on T^3 = [0, 2 pi)^3 with eigenvalue J."""

    def __init__(self, J, modes):
        """modes : list of (k, b) with k an integer 3-vector, |k|^2 = J^2, k.b = 0.

        The orthogonality check is exact (rational arithmetic), so b entries
        should be ints or Fractions; floats are accepted only if exactly
        representable.
        """
        self.J = int(J)
        if self.J <= 0:
            raise ConfigError("eigenvalue J must be a positive integer")
        self.modes = []
        for k, b in modes:
            k = np.asarray(k)
            if k.shape != (3,) or not np.issubdtype(k.dtype, np.integer):
                raise ConfigError("wave vectors must be integer 3-vectors")
            if int(k @ k) != self.J ** 2:
                raise ConfigError(f"|k|^2 = {int(k @ k)} != J^2 = {self.J ** 2}")
            bf = [Fraction(x) if not isinstance(x, Fraction) else x for x in b]
            if sum(Fraction(int(ki)) * bi for ki, bi in zip(k, bf)) != 0:
                raise ConfigError(f"k.b != 0 for k = {k.tolist()}")
            self.modes.append((k.astype(int), np.array([float(x) for x in bf])))
        if not self.modes:
            raise ConfigError("at least one mode is required")

    @classmethod
    def standard(cls, J):
        """A default orthogonal-mode basis for J in {1, 3, 5} (and squares hit by
        a few known Pythagorean-type vectors)."""
        table = {
            1: [([1, 0, 0], [0, 1, 0]), ([0, 1, 0], [0, 0, 1]), ([0, 0, 1], [1, 0, 0])],
            3: [([3, 0, 0], [0, 1, 1]), ([1, 2, 2], [2, 1, -2]), ([2, 2, 1], [1, -2, 2])],
            5: [([5, 0, 0], [0, 2, 1]), ([3, 4, 0], [4, -3, 5]), ([0, 3, 4], [5, 4, -3])],
        }
        if J not in table:
            raise ConfigError(f"no standard mode table for J = {J}")
        return cls(J, table[J])

    def __call__(self, x):
        """Evaluate U at points x of shape (..., 3)."""
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape)
        for k, b in self.modes:
            phase = x @ k.astype(float)
            bxk = np.cross(b, k) / self.J
            out += np.multiply.outer(np.cos(phase), b)
            out += np.multiply.outer(np.sin(phase), bxk)
        return out

    def curl(self, x):
        """Analytic curl (mode-by-mode identities)."""
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape)
        for k, b in self.modes:
            phase = x @ k.astype(float)
            bxk = np.cross(b, k) / self.J
            # curl[b cos(k.x)] = -k x b sin = (b x k) sin;  curl[c sin] = (k x c) cos
            out += np.multiply.outer(np.sin(phase), np.cross(b, k))
            out += np.multiply.outer(np.cos(phase), np.cross(k, bxk))
        return out

    def analytic_residual(self, n_grid=16):
        """max |curl U - J U| on a uniform grid, curl evaluated analytically."""
        g = np.stack(np.meshgrid(*([np.linspace(0, 2 * np.pi, n_grid, endpoint=False)] * 3),
                                 indexing="ij"), axis=-1)
        return float(np.abs(self.curl(g) - self.J * self(g)).max())

    def fd_curl_residual(self, n_grid=32, h=2e-5):
        """max |curl_fd U - J U| with central differences of step h on an n^3 grid."""
        axes = [np.linspace(0, 2 * np.pi, n_grid, endpoint=False)] * 3
        g = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)
        parters = []
        for i in range(3):
            dx = np.zeros(3)
            dx[i] = h
            parters.append((self(g + dx) - self(g - dx)) / (2.0 * h))
        curl = np.stack([
            parters[1][..., 2] - parters[2][..., 1],
            parters[2][..., 0] - parters[0][..., 2],
            parters[0][..., 1] - parters[1][..., 0],
        ], axis=-1)
        return float(np.abs(curl - self.J * self(g)).max())

    def divergence_fd(self, n_grid=16, h=2e-5):
        axes = [np.linspace(0, 2 * np.pi, n_grid, endpoint=False)] * 3
        g = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)
        div = np.zeros(g.shape[:-1])
        for i in range(3):
            dx = np.zeros(3)
            dx[i] = h
            div += (self(g + dx)[..., i] - self(g - dx)[..., i]) / (2.0 * h)
        return float(np.abs(div).max())
