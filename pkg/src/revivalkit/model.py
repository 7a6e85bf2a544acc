"""Quantization functions of the barrier-top spectral model.

Builds the two phase functions whose 2*pi*k level crossings give the two
interleaved eigenvalue families in the window [-h, h], together with
their first three derivatives (via digamma/trigamma/tetragamma) and the
inverse-function derivative records used by the dynamics module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.chebyshev import Chebyshev
from scipy.optimize import bisect

from .dynamics import PhaseData
from .errors import (
    DomainError,
    MonotonicityError,
    NumericalError,
    RootBracketError,
)
from .potential import Potential, regularized_action, validate_saddle
from .specfun import arg_gamma_half_line, digamma, tetragamma, trigamma

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class ActionTable:
    """Chebyshev representation of the regularized lobe actions on [-delta, delta]."""

    delta: float
    plus: Chebyshev
    minus: Chebyshev

    def derivative(self, side: int, order: int) -> Chebyshev:
        poly = self.plus if side > 0 else self.minus
        return poly.deriv(order) if order else poly


_TABLE_CACHE: dict[tuple[str, float, int, int], ActionTable] = {}


def build_action_table(
    potential: Potential,
    delta: float = 0.1,
    fit_nodes: int = 160,
    quad_nodes: int = 600,
) -> ActionTable:
    """Sample the regularized actions at Chebyshev nodes and fit."""
    key = (potential.descriptor, delta, fit_nodes, quad_nodes)
    hit = _TABLE_CACHE.get(key)
    if hit is not None:
        return hit
    j = np.arange(fit_nodes)
    nodes = delta * np.cos((2 * j + 1) * np.pi / (2 * fit_nodes))
    vals_p = np.array(
        [regularized_action(potential, float(e), +1, quad_nodes) for e in nodes]
    )
    cheb_p = Chebyshev.fit(nodes, vals_p, deg=fit_nodes - 1, domain=[-delta, delta])
    if potential.even:
        cheb_m = cheb_p
    else:
        vals_m = np.array(
            [regularized_action(potential, float(e), -1, quad_nodes) for e in nodes]
        )
        cheb_m = Chebyshev.fit(nodes, vals_m, deg=fit_nodes - 1, domain=[-delta, delta])
    table = ActionTable(delta=delta, plus=cheb_p, minus=cheb_m)
    _TABLE_CACHE[key] = table
    return table


@dataclass(frozen=True)
class SpectrumWindow:
    """The two eigenvalue families inside [-h, h]."""

    h: float
    alphas: list[tuple[int, float]]
    betas: list[tuple[int, float]]
    alpha_lambdas: dict[int, float]
    beta_lambdas: dict[int, float]

    @property
    def index_set_alpha(self) -> range:
        ks = sorted(self.alpha_lambdas)
        return range(ks[0], ks[-1] + 1) if ks else range(0)

    @property
    def index_set_beta(self) -> range:
        ls = sorted(self.beta_lambdas)
        return range(ls[0], ls[-1] + 1) if ls else range(0)

    def family(self, name: str) -> list[tuple[int, float]]:
        if name == "alpha":
            return self.alphas
        if name == "beta":
            return self.betas
        raise KeyError(name)

    def gaps(self, name: str) -> np.ndarray:
        vals = np.array([v for _, v in self.family(name)])
        return np.abs(np.diff(vals))

    def all_sorted(self) -> list[tuple[str, int, float]]:
        rows = [("alpha", k, v) for k, v in self.alphas]
        rows += [("beta", l, v) for l, v in self.betas]
        return sorted(rows, key=lambda r: r[2])

    def csv_rows(self) -> list[tuple]:
        """Rows (family, index, lambda, eigenvalue, gap_to_next) per family."""
        rows = []
        for name, lam_map in (("alpha", self.alpha_lambdas), ("beta", self.beta_lambdas)):
            pairs = sorted(self.family(name), key=lambda kv: kv[1])
            for i, (k, v) in enumerate(pairs):
                gap = pairs[i + 1][1] - v if i + 1 < len(pairs) else float("nan")
                rows.append((name, k, lam_map[k], v, gap))
        return rows


class SpectralModel:
    """Phase functions for one potential at one value of h.

    Evaluations are restricted to lambda in [-1, 1] (the window [-h, h])
    unless ``extended=True``, which admits any lambda with
    |lambda * h| <= delta; the extended ladder feeds dynamics studies
    while exported spectra stay inside the window.
    """

    def __init__(
        self,
        potential: Potential,
        h: float,
        delta: float = 0.1,
        table: ActionTable | None = None,
    ):
        if not 0.0 < h < 1.0:
            raise DomainError(f"h must lie in (0, 1), got {h:g}")
        validate_saddle(potential)
        self.potential = potential
        self.h = float(h)
        self.delta = float(delta)
        self.lnh = math.log(h)
        self.w = potential.curvature_scale
        self.table = table or build_action_table(potential, delta)
        self._deriv_cache: dict[tuple[int, int], Chebyshev] = {}

    # -- plumbing ---------------------------------------------------------

    def _action_deriv(self, side: int, order: int) -> Chebyshev:
        key = (side, order)
        if key not in self._deriv_cache:
            self._deriv_cache[key] = self.table.derivative(side, order)
        return self._deriv_cache[key]

    def _check_domain(self, lam, extended: bool):
        lam = np.asarray(lam, dtype=float)
        if extended:
            if np.any(np.abs(lam) * self.h > self.delta):
                raise DomainError(
                    f"|lambda*h| exceeds delta={self.delta:g} on the extended domain"
                )
        elif np.any(np.abs(lam) > 1.0 + 1e-12):
            raise DomainError("lambda outside [-1, 1]; pass extended=True to widen")
        return lam

    def epsilon_over_h(self, lam):
        """epsilon(lambda h)/h at leading order: lambda / sqrt(-V''(0))."""
        return np.asarray(lam, dtype=float) / self.w

    # -- the quantization phases ------------------------------------------

    def f_h(self, lam, extended: bool = False):
        lam = self._check_domain(lam, extended)
        y = self.epsilon_over_h(lam)
        theta_sum = (
            self._action_deriv(+1, 0)(lam * self.h)
            + self._action_deriv(-1, 0)(lam * self.h)
        ) / (2.0 * self.h)
        return -theta_sum + 0.5 * np.pi + y * self.lnh + arg_gamma_half_line(y)

    def g_h(self, lam, extended: bool = False):
        lam = self._check_domain(lam, extended)
        if self.potential.even:
            return np.zeros_like(lam)
        return (
            self._action_deriv(+1, 0)(lam * self.h)
            - self._action_deriv(-1, 0)(lam * self.h)
        ) / (2.0 * self.h)

    def _tunneling_angle(self, lam):
        """arccos(cos g / sqrt(1 + e^{2 pi eps/h})), overflow-safe when g = 0."""
        lam = np.asarray(lam, dtype=float)
        z = np.pi * lam / self.w
        if self.potential.even:
            # arccos(1/sqrt(1+e^{2z})) = arctan(e^z)
            return np.arctan(np.exp(np.clip(z, None, 700.0)))
        g = self.g_h(lam, extended=True)
        arg = np.cos(g) / np.sqrt(1.0 + np.exp(2.0 * np.clip(z, None, 350.0)))
        over = np.abs(arg) - 1.0
        if np.any(over > 1e-12):
            raise NumericalError("tunneling-angle argument exceeds 1 by > 1e-12")
        return np.arccos(np.clip(arg, -1.0, 1.0))

    def y_h(self, lam, extended: bool = False):
        lam = self._check_domain(lam, extended)
        return self.f_h(lam, extended=True) - self._tunneling_angle(lam)

    def z_h(self, lam, extended: bool = False):
        lam = self._check_domain(lam, extended)
        return self.f_h(lam, extended=True) + self._tunneling_angle(lam)

    # -- derivatives -------------------------------------------------------

    def _arg_gamma_derivative(self, lam, order: int):
        z = 0.5 + 1j * np.asarray(lam, dtype=float) / self.w
        if order == 1:
            return np.real(digamma(z)) / self.w
        if order == 2:
            return -np.imag(trigamma(z)) / self.w**2
        if order == 3:
            return -np.real(tetragamma(z)) / self.w**3
        raise ValueError(order)

    def _tunneling_angle_derivative(self, lam, order: int):
        lam = np.asarray(lam, dtype=float)
        c = np.pi / self.w
        if self.potential.even:
            z = c * lam
            az = np.abs(z)
            sech = 2.0 * np.exp(-az) / (1.0 + np.exp(-2.0 * az))
            tanh = np.tanh(z)
            if order == 1:
                return 0.5 * c * sech
            if order == 2:
                return -0.5 * c**2 * sech * tanh
            if order == 3:
                return -0.5 * c**3 * sech * (2.0 * sech**2 - 1.0)
            raise ValueError(order)
        # general potentials: chain rule through u = cos(g) * (1+q)^(-1/2)
        h = self.h
        q = np.exp(2.0 * c * lam)
        qd = [q * (2.0 * c) ** k for k in range(4)]
        s = (1.0 + q) ** -0.5
        sp = -0.5 * (1.0 + q) ** -1.5 * qd[1]
        spp = 0.75 * (1.0 + q) ** -2.5 * qd[1] ** 2 - 0.5 * (1.0 + q) ** -1.5 * qd[2]
        sppp = (
            -1.875 * (1.0 + q) ** -3.5 * qd[1] ** 3
            + 2.25 * (1.0 + q) ** -2.5 * qd[1] * qd[2]
            - 0.5 * (1.0 + q) ** -1.5 * qd[3]
        )
        g = self.g_h(lam, extended=True)
        gd = [
            (
                self._action_deriv(+1, k)(lam * h)
                - self._action_deriv(-1, k)(lam * h)
            )
            * h ** (k - 1)
            / 2.0
            for k in range(1, 4)
        ]
        cg, sg = np.cos(g), np.sin(g)
        u = cg * s
        up = -sg * gd[0] * s + cg * sp
        upp = (
            -cg * gd[0] ** 2 * s
            - sg * gd[1] * s
            - 2.0 * sg * gd[0] * sp
            + cg * spp
        )
        uppp = (
            sg * gd[0] ** 3 * s
            - 3.0 * cg * gd[0] * gd[1] * s
            - 3.0 * cg * gd[0] ** 2 * sp
            - sg * gd[2] * s
            - 3.0 * sg * gd[1] * sp
            - 3.0 * sg * gd[0] * spp
            + cg * sppp
        )
        om = 1.0 - u * u
        if np.any(om < 1e-14):
            raise NumericalError("tunneling angle too close to its endpoint")
        if order == 1:
            return -up * om**-0.5
        if order == 2:
            return -upp * om**-0.5 - u * up**2 * om**-1.5
        if order == 3:
            return (
                -uppp * om**-0.5
                - 3.0 * u * up * upp * om**-1.5
                - up**3 * om**-1.5
                - 3.0 * u**2 * up**3 * om**-2.5
            )
        raise ValueError(order)

    def _phase_derivative(self, lam, order: int, sign: float, extended: bool):
        lam = self._check_domain(lam, extended)
        h = self.h
        theta_sum_d = (
            (
                self._action_deriv(+1, order)(lam * h)
                + self._action_deriv(-1, order)(lam * h)
            )
            * h ** (order - 1)
            / 2.0
        )
        out = -theta_sum_d + self._arg_gamma_derivative(lam, order)
        if order == 1:
            out = out + self.lnh / self.w
        return out + sign * self._tunneling_angle_derivative(lam, order)

    def y_derivative(self, lam, order: int, extended: bool = False):
        """Analytic derivative of the alpha-family phase, order 1, 2 or 3."""
        if order not in (1, 2, 3):
            raise ValueError(f"order must be 1, 2 or 3, got {order}")
        return self._phase_derivative(lam, order, -1.0, extended)

    def z_derivative(self, lam, order: int, extended: bool = False):
        if order not in (1, 2, 3):
            raise ValueError(f"order must be 1, 2 or 3, got {order}")
        return self._phase_derivative(lam, order, +1.0, extended)

    # -- root solving ------------------------------------------------------

    def _solve_on(self, func, lam_lo: float, lam_hi: float, n_grid: int = 4097):
        grid = np.linspace(lam_lo, lam_hi, n_grid)
        fv = func(grid)
        dv = np.diff(fv)
        if not (np.all(dv < 0.0) or np.all(dv > 0.0)):
            raise MonotonicityError(
                "sampled quantization phase is not strictly monotone"
            )
        lo, hi = float(min(fv[0], fv[-1])), float(max(fv[0], fv[-1]))
        k_lo = int(np.ceil(lo / TWO_PI))
        k_hi = int(np.floor(hi / TWO_PI))
        roots: dict[int, float] = {}
        for k in range(k_lo, k_hi + 1):
            target = TWO_PI * k
            hits = np.nonzero((fv[:-1] - target) * (fv[1:] - target) <= 0.0)[0]
            if len(hits) == 0:
                raise RootBracketError(f"could not bracket the k={k} root")
            a, b = float(grid[hits[0]]), float(grid[hits[0] + 1])
            roots[k] = float(
                bisect(lambda t: float(func(np.array([t]))[0]) - target, a, b,
                       xtol=1e-15, rtol=8.9e-16)
            )
        return roots

    def solve_families(self) -> SpectrumWindow:
        """Enumerate both families inside the window [-h, h]."""
        ya = self._solve_on(lambda t: self.y_h(t, extended=True), -1.0, 1.0)
        zb = self._solve_on(lambda t: self.z_h(t, extended=True), -1.0, 1.0)
        alphas = sorted(((k, self.h * lam) for k, lam in ya.items()),
                        key=lambda kv: kv[1])
        betas = sorted(((l, self.h * lam) for l, lam in zb.items()),
                       key=lambda kv: kv[1])
        return SpectrumWindow(
            h=self.h,
            alphas=alphas,
            betas=betas,
            alpha_lambdas=ya,
            beta_lambdas=zb,
        )

    def solve_ladder(self, lam_center: float, n_side: int, family: str = "alpha"):
        """Roots of the phase function around lam_center on the extended domain.

        Returns {index k: lambda_k} for roughly n_side indices on each side
        of the one nearest lam_center; the domain is capped at
        |lambda| <= delta/h.
        """
        func = self.y_h if family == "alpha" else self.z_h
        deriv = self.y_derivative if family == "alpha" else self.z_derivative
        slope = abs(float(deriv(np.array([lam_center]), 1, extended=True)[0]))
        gap = TWO_PI / slope
        lam_max = 0.95 * self.delta / self.h
        lo = max(lam_center - (n_side + 3) * gap, -lam_max)
        hi = min(lam_center + (n_side + 3) * gap, lam_max)
        n_grid = max(4097, 16 * (2 * n_side + 8))
        return self._solve_on(lambda t: func(t, extended=True), lo, hi, n_grid)

    def phase_data(self, roots: dict[int, float], n0: int) -> PhaseData:
        """Inverse-function derivative records at the index-n0 root."""
        lam0 = roots[n0]
        arr = np.array([lam0])
        yp = float(self.y_derivative(arr, 1, extended=True)[0])
        ypp = float(self.y_derivative(arr, 2, extended=True)[0])
        yppp = float(self.y_derivative(arr, 3, extended=True)[0])
        a1 = 1.0 / yp
        a2 = -ypp / yp**3
        a3 = -yppp / yp**4 + 3.0 * ypp**2 / yp**5
        lam_grid = np.linspace(-1.0, 1.0, 201)
        y3 = self.y_derivative(lam_grid, 3, extended=True)
        y1 = self.y_derivative(lam_grid, 1, extended=True)
        y2 = self.y_derivative(lam_grid, 2, extended=True)
        a3_bound = float(
            np.max(np.abs(-y3 / y1**4 + 3.0 * y2**2 / y1**5))
        )
        return PhaseData(
            a0=lam0,
            a1=a1,
            a2=a2,
            a3=a3,
            a3_bound=a3_bound,
            curvature_at_root=ypp,
        )


def select_alpha_near(roots: dict[int, float], lam_target: float) -> int:
    """Index of the ladder root nearest the target lambda."""
    return min(roots, key=lambda k: abs(roots[k] - lam_target))


def window_counts(window: SpectrumWindow) -> tuple[int, int]:
    return len(window.alphas), len(window.betas)


def interleaving_violations(window: SpectrumWindow) -> int:
    """Number of adjacent same-family pairs in the sorted pooled spectrum."""
    fams = [f for f, _, _ in window.all_sorted()]
    return sum(1 for a, b in zip(fams, fams[1:]) if a == b)

