"""
Fourier and Taylor coefficient machinery for symbols on the circle.

Coefficients of inner symbols come from exact factor-wise series multiplication,
never from sampling, and every truncated expansion carries a tail bound.
"""
import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Literal, Mapping, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .blaschke import BlaschkeProduct, one_minus_modulus_sq
from .errors import TruncationError

logger = logging.getLogger(__name__)

Provenance = Literal["exact-polynomial", "truncated-analytic", "transformed"]
TransformKind = Literal["conjugate", "tilde", "star"]

MAX_WINDOW = 1 << 16


@dataclass(frozen=True, eq=False)
class FourierSymbol:
    """
    Two-sided coefficient vector over the window [-W, W].

    coefficients[n + W] holds f^(n); indices outside the window are zero.
    tail_bound bounds the l1 mass of the coefficients dropped by truncation.
    """
    coefficients: np.ndarray
    window: int
    provenance: Provenance = "exact-polynomial"
    tail_bound: float = 0.0

    def __post_init__(self):
        coeffs = np.asarray(self.coefficients, dtype=complex).ravel()
        if self.window < 0 or coeffs.size != 2 * self.window + 1:
            raise ValueError(f"window {self.window} needs {2 * self.window + 1} coefficients, got {coeffs.size}")
        if not self.tail_bound >= 0.0:
            raise ValueError("tail_bound must be nonnegative")
        object.__setattr__(self, "coefficients", coeffs)

    @classmethod
    def from_dict(
        cls,
        entries: Mapping[int, complex],
        provenance: Provenance = "exact-polynomial",
        tail_bound: float = 0.0,
    ) -> "FourierSymbol":
        window = max((abs(int(n)) for n in entries), default=0)
        coeffs = np.zeros(2 * window + 1, dtype=complex)
        for n, value in entries.items():
            coeffs[int(n) + window] += value
        return cls(coeffs, window, provenance, tail_bound)

    @classmethod
    def from_coefficients(
        cls,
        coefficients: Sequence[complex],
        start_index: int = 0,
        provenance: Provenance = "exact-polynomial",
        tail_bound: float = 0.0,
    ) -> "FourierSymbol":
        """Consecutive coefficients f^(start_index), f^(start_index + 1), ... in the smallest symmetric window."""
        values = np.asarray(coefficients, dtype=complex).ravel()
        start = int(start_index)
        window = max(abs(start), abs(start + values.size - 1)) if values.size else 0
        coeffs = np.zeros(2 * window + 1, dtype=complex)
        coeffs[start + window:start + window + values.size] = values
        return cls(coeffs, window, provenance, tail_bound)

    @classmethod
    def monomial(cls, power: int, scale: complex = 1.0) -> "FourierSymbol":
        """scale * z^power; negative powers are powers of conj(z) on the circle."""
        return cls.from_dict({power: scale})

    @classmethod
    def analytic(
        cls,
        taylor: np.ndarray,
        provenance: Provenance = "exact-polynomial",
        tail_bound: float = 0.0,
    ) -> "FourierSymbol":
        return cls.from_coefficients(taylor, 0, provenance, tail_bound)

    @property
    def indices(self) -> np.ndarray:
        return np.arange(-self.window, self.window + 1)

    def coeff(self, n: int) -> complex:
        if abs(n) > self.window:
            return 0j
        return complex(self.coefficients[n + self.window])

    def coeffs_at(self, indices) -> np.ndarray:
        """Vectorized lookup with zeros outside the window."""
        idx = np.asarray(indices, dtype=np.int64)
        out = np.zeros(idx.shape, dtype=complex)
        inside = np.abs(idx) <= self.window
        out[inside] = self.coefficients[idx[inside] + self.window]
        return out

    @property
    def band(self) -> int:
        """Largest |n| with a nonzero coefficient."""
        nonzero = np.flatnonzero(self.coefficients)
        if nonzero.size == 0:
            return 0
        return int(np.max(np.abs(nonzero - self.window)))

    @property
    def is_analytic(self) -> bool:
        return not np.any(self.coefficients[:self.window])

    @property
    def is_exact(self) -> bool:
        return self.tail_bound == 0.0

    def l1_norm(self) -> float:
        return float(np.sum(np.abs(self.coefficients)))

    def l2_norm_sq(self) -> float:
        return float(np.sum(np.abs(self.coefficients) ** 2))

    def to_dict(self) -> Dict:
        return {
            "window": self.window,
            "entries": [[int(n), float(v.real), float(v.imag)] for n, v in zip(self.indices, self.coefficients)],
            "tail_bound": self.tail_bound,
            "provenance": self.provenance,
        }

    def rows(self) -> List[Dict[str, float]]:
        """One row per index for the `n,re,im` CSV form."""
        return [{"n": int(n), "re": float(v.real), "im": float(v.imag)} for n, v in zip(self.indices, self.coefficients)]


def blaschke_factor_series(a: complex, gap: float, length: int) -> np.ndarray:
    """Taylor coefficients of (|a|/a)(a - z)/(1 - conj(a) z) up to z^(length-1)."""
    series = np.empty(length, dtype=complex)
    series[0] = abs(a)
    if length > 1:
        k = np.arange(length - 1)
        series[1:] = -(abs(a) / a) * gap * np.conj(a) ** k
    return series


def tail_bound(B: BlaschkeProduct, N: int) -> float:
    """
    Bound on sum_{k >= N} |B^(k)|.

    Coefficients of B are dominated by those of the majorant
    g(R) = R^m prod (|a| + (1 - |a|^2) R / (1 - |a| R)), whose tail beyond N is at most
    g(R) R^-N / (1 - 1/R) for 1 < R < 1/max|a|; R is chosen by a bounded scalar search.
    """
    zeros, offsets = B.nonzero_zeros()
    order = B.origin_order
    if zeros.size == 0:
        return 0.0 if order < N else 1.0
    moduli = np.abs(zeros)
    gaps = one_minus_modulus_sq(zeros, offsets)
    # the majorant at R = 1 is the whole l1 mass of the coefficients
    trivial = float(np.prod(1.0 + 2.0 * moduli))
    top = 1.0 / float(moduli.max())
    if not top > 1.0:
        return trivial

    def log_bound(R: float) -> float:
        g = order * math.log(R) + float(np.sum(np.log(moduli + gaps * R / (1.0 - moduli * R))))
        return g - N * math.log(R) - math.log(1.0 - 1.0 / R)

    span = top - 1.0
    result = minimize_scalar(
        log_bound,
        bounds=(1.0 + 1e-6 * span, top - 1e-6 * span),
        method="bounded",
        options={"xatol": 1e-9 * span},
    )
    return min(float(math.exp(min(result.fun, 700.0))), trivial)


def window_for_tail(B: BlaschkeProduct, target: float, start: int = 1) -> int:
    """Smallest expansion length N >= start with tail_bound(B, N) <= target."""
    zeros, _ = B.nonzero_zeros()
    if zeros.size == 0:
        return max(start, B.origin_order + 1)
    hi = max(start, 1)
    while tail_bound(B, hi) > target:
        hi *= 2
        if hi > MAX_WINDOW:
            raise TruncationError(
                f"no expansion up to {MAX_WINDOW} coefficients reaches tail {target:g} "
                f"(largest zero modulus {B.max_modulus:.17g})"
            )
    lo = max(start, hi // 2)
    if tail_bound(B, lo) <= target:
        return lo
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if tail_bound(B, mid) <= target:
            hi = mid
        else:
            lo = mid
    return hi


def taylor_coeffs(B: BlaschkeProduct, N: int) -> FourierSymbol:
    """
    Taylor coefficients 0..N-1 of B by factor-wise series multiplication.

    Returns:
        Analytic FourierSymbol with window N-1 and the tail bound of the dropped coefficients
    """
    if N < 1:
        raise ValueError("N must be at least 1")
    coeffs = np.zeros(N, dtype=complex)
    order = B.origin_order
    if order < N:
        coeffs[order] = B.unimodular_constant
    zeros, offsets = B.nonzero_zeros()
    gaps = one_minus_modulus_sq(zeros, offsets)
    for a, gap in zip(zeros, gaps):
        coeffs = np.convolve(coeffs, blaschke_factor_series(a, float(gap), N))[:N]
    tail = tail_bound(B, N)
    if zeros.size == 0 and tail == 0.0:
        provenance: Provenance = "exact-polynomial"
    else:
        provenance = "truncated-analytic"
    return FourierSymbol.analytic(coeffs, provenance, tail)


def transform(f: FourierSymbol, kind: TransformKind) -> FourierSymbol:
    """
    Symbol transforms on the circle.

    conjugate: (f-bar)^(n) = conj(f^(-n)); tilde: (f~)^(n) = f^(-n); star: (f*)^(n) = conj(f^(n)).
    """
    if kind == "tilde":
        coeffs = f.coefficients[::-1].copy()
    elif kind == "star":
        coeffs = np.conj(f.coefficients)
    elif kind == "conjugate":
        coeffs = np.conj(f.coefficients[::-1])
    else:
        raise ValueError(f"unknown transform kind: {kind}")
    return FourierSymbol(coeffs, f.window, "transformed", f.tail_bound)


def product_symbol(f: FourierSymbol, g: FourierSymbol) -> FourierSymbol:
    """Windowed convolution; the window is the sum of the windows."""
    coeffs = np.convolve(f.coefficients, g.coefficients)
    tail = f.tail_bound * g.l1_norm() + g.tail_bound * f.l1_norm() + f.tail_bound * g.tail_bound
    exact = f.provenance == "exact-polynomial" and g.provenance == "exact-polynomial" and tail == 0.0
    return FourierSymbol(coeffs, f.window + g.window, "exact-polynomial" if exact else "transformed", tail)


def boundary_samples(f: FourierSymbol, K: int) -> np.ndarray:
    """Values sum f^(n) e^{i n theta_j} at theta_j = 2 pi j / K."""
    if K < 1:
        raise ValueError("K must be at least 1")
    if K < 2 * f.window + 1:
        logger.warning("[Fourier] %d samples alias a symbol of window %d", K, f.window)
    # reduce n*j modulo K before forming angles so periodic points come out exact
    phase = np.mod(np.outer(np.arange(K), f.indices), K)
    angles = 2.0 * np.pi * phase / K
    return (np.cos(angles) + 1j * np.sin(angles)) @ f.coefficients
