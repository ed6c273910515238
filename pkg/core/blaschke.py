"""
Blaschke products, pseudo-hyperbolic geometry and boundary-condition probes on the unit disk.

Points are carried together with their offset u = 1 - z. Zeros such as 1 - 2^-40 sit
closer to the boundary than double precision can resolve in z itself, while u keeps
full relative precision, so every distance below is evaluated from offsets whenever
both points lie in the half of the disk facing 1.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Literal, Optional, Sequence

import numpy as np

from .errors import DimensionMismatchError, DiskDomainError

logger = logging.getLogger(__name__)

Verdict = Literal["consistent", "violated-at-samples", "inconclusive"]
CONDITIONS = ("S", "C", "WC")


def one_minus_modulus_sq(z: np.ndarray, u: np.ndarray) -> np.ndarray:
    """1 - |z|^2, from the offset when the point is close to 1."""
    near = np.abs(u) < 1.0
    return np.where(near, 2.0 * u.real - np.abs(u) ** 2, 1.0 - np.abs(z) ** 2)


def _rho(z, uz, w, uw) -> np.ndarray:
    """Vectorized pseudo-hyperbolic distance; arguments broadcast."""
    near = (np.abs(uz) < 1.0) & (np.abs(uw) < 1.0)
    num = np.where(near, np.abs(uw - uz), np.abs(z - w))
    den = np.where(
        near,
        np.abs(np.conj(uz) + uw - np.conj(uz) * uw),
        np.abs(1.0 - np.conj(z) * w),
    )
    return num / den


def _require_disk(z: np.ndarray, u: np.ndarray, what: str) -> None:
    inside = one_minus_modulus_sq(z, u) > 0.0
    if not np.all(inside):
        bad = z.ravel()[int(np.argmin(inside.ravel()))]
        raise DiskDomainError(f"{what} must lie in the open unit disk, got {bad}")


@dataclass(frozen=True, eq=False)
class ZeroSequence:
    """Ordered finite prefix of a zero sequence in the disk."""
    zeros: np.ndarray
    label: str = ""
    offsets: Optional[np.ndarray] = None

    def __post_init__(self):
        zeros = np.atleast_1d(np.asarray(self.zeros, dtype=complex))
        if self.offsets is None:
            offsets = 1.0 - zeros
        else:
            offsets = np.atleast_1d(np.asarray(self.offsets, dtype=complex))
        if zeros.ndim != 1 or offsets.shape != zeros.shape:
            raise DimensionMismatchError("zeros and offsets must be flat arrays of equal length")
        _require_disk(zeros, offsets, f"zeros of {self.label or 'sequence'}")
        object.__setattr__(self, "zeros", zeros)
        object.__setattr__(self, "offsets", offsets)

    @classmethod
    def from_offsets(cls, offsets: Sequence[complex], label: str = "") -> "ZeroSequence":
        """Build from offsets u_n = 1 - z_n, which stay exact near the boundary."""
        u = np.atleast_1d(np.asarray(offsets, dtype=complex))
        return cls(zeros=1.0 - u, label=label, offsets=u)

    def __len__(self) -> int:
        return int(self.zeros.size)

    def prefix(self, length: int) -> "ZeroSequence":
        return ZeroSequence(self.zeros[:length], self.label, self.offsets[:length])

    def boundary_gaps(self) -> np.ndarray:
        """1 - |z_n| for each stored zero."""
        gap_sq = one_minus_modulus_sq(self.zeros, self.offsets)
        return gap_sq / (1.0 + np.sqrt(np.maximum(1.0 - gap_sq, 0.0)))

    def blaschke_partial_sums(self) -> np.ndarray:
        """Partial sums of the Blaschke condition, one per prefix length."""
        return np.cumsum(self.boundary_gaps())

    def concat(self, other: "ZeroSequence", label: str = "") -> "ZeroSequence":
        return ZeroSequence(
            np.concatenate([self.zeros, other.zeros]),
            label or f"{self.label}+{other.label}",
            np.concatenate([self.offsets, other.offsets]),
        )


@dataclass(frozen=True, eq=False)
class BlaschkeProduct:
    """
    Finite Blaschke product c * z^m * prod (|a|/a)(a - z)/(1 - conj(a) z).

    A listed zero exactly at 0 contributes the plain factor z.
    """
    zeros: ZeroSequence = field(default_factory=lambda: ZeroSequence(np.zeros(0)))
    unimodular_constant: complex = 1.0
    origin_zero_multiplicity: int = 0

    def __post_init__(self):
        c = complex(self.unimodular_constant)
        if abs(abs(c) - 1.0) > 1e-12:
            raise ValueError(f"unimodular constant must have modulus 1, got {c}")
        if self.origin_zero_multiplicity < 0:
            raise ValueError("origin_zero_multiplicity must be nonnegative")
        object.__setattr__(self, "unimodular_constant", c)

    @classmethod
    def from_zeros(
        cls,
        zeros: Sequence[complex],
        label: str = "",
        constant: complex = 1.0,
        origin_multiplicity: int = 0,
    ) -> "BlaschkeProduct":
        return cls(ZeroSequence(np.asarray(zeros, dtype=complex), label), constant, origin_multiplicity)

    @classmethod
    def monomial(cls, power: int) -> "BlaschkeProduct":
        """z^power."""
        return cls(origin_zero_multiplicity=power)

    @property
    def degree(self) -> int:
        return len(self.zeros) + self.origin_zero_multiplicity

    @property
    def origin_order(self) -> int:
        """Total multiplicity of the zero at the origin."""
        return self.origin_zero_multiplicity + int(np.count_nonzero(self.zeros.zeros == 0))

    def nonzero_zeros(self):
        """(zeros, offsets) of the zeros away from the origin."""
        mask = self.zeros.zeros != 0
        return self.zeros.zeros[mask], self.zeros.offsets[mask]

    @property
    def max_modulus(self) -> float:
        """Largest zero modulus, 0 when every zero sits at the origin."""
        zeros, _ = self.nonzero_zeros()
        return float(np.max(np.abs(zeros))) if zeros.size else 0.0

    def numerator_coefficients(self) -> np.ndarray:
        """
        Ascending coefficients of c * z^m * prod (|a|/a)(a - z).

        This polynomial equals B(z) * prod (1 - conj(a) z), so its shifts span
        B H^2 intersected with polynomials.
        """
        coeffs = np.zeros(self.origin_order + 1, dtype=complex)
        coeffs[-1] = self.unimodular_constant
        zeros, _ = self.nonzero_zeros()
        for a in zeros:
            coeffs = np.convolve(coeffs, (abs(a) / a) * np.array([a, -1.0]))
        return coeffs

    def evaluate(self, z, offsets=None) -> np.ndarray:
        """Vectorized evaluation; offsets default to 1 - z."""
        z = np.asarray(z, dtype=complex)
        uz = 1.0 - z if offsets is None else np.asarray(offsets, dtype=complex)
        out = np.full(z.shape, self.unimodular_constant, dtype=complex)
        if self.origin_order:
            out = out * z ** self.origin_order
        zeros, zero_offsets = self.nonzero_zeros()
        near_z = np.abs(uz) < 1.0
        for a, ua in zip(zeros, zero_offsets):
            near = near_z & (abs(ua) < 1.0)
            num = np.where(near, uz - ua, a - z)
            den = np.where(near, np.conj(ua) + uz - np.conj(ua) * uz, 1.0 - np.conj(a) * z)
            out = out * (abs(a) / a) * (num / den)
        return out

    def __call__(self, z: complex) -> complex:
        return blaschke_eval(self, z)


def pseudo_hyperbolic(z: complex, w: complex) -> float:
    """rho(z, w) = |z - w| / |1 - conj(z) w|."""
    zz = np.asarray(z, dtype=complex)
    ww = np.asarray(w, dtype=complex)
    _require_disk(zz, 1.0 - zz, "z")
    _require_disk(ww, 1.0 - ww, "w")
    return float(_rho(zz, 1.0 - zz, ww, 1.0 - ww))


def blaschke_eval(B: BlaschkeProduct, z: complex, offset: Optional[complex] = None) -> complex:
    """
    Evaluate B at a single point of the disk.

    Args:
        B: Blaschke product
        z: evaluation point, |z| < 1
        offset: optional exact 1 - z; pass a zero's stored offset to evaluate at that zero exactly

    Returns:
        Complex value with modulus at most 1
    """
    zz = np.asarray(z, dtype=complex)
    uz = 1.0 - zz if offset is None else np.asarray(offset, dtype=complex)
    _require_disk(zz, uz, "evaluation point")
    return complex(B.evaluate(zz, uz))


def exm1_sequences(count: int):
    """a_n = 1 - 2^-n and b_n = 1 - 2^-n (1 + 1/n), n = 1..count."""
    if count < 1:
        raise ValueError("count must be at least 1")
    n = np.arange(1, count + 1, dtype=float)
    ua = 2.0 ** -n
    ub = 2.0 ** -n * (1.0 + 1.0 / n)
    return ZeroSequence.from_offsets(ua, "exm1-a"), ZeroSequence.from_offsets(ub, "exm1-b")


def prop1_sequences(count: int):
    """a_n = 1 - 4^-n and b_n = 1 - 2 * 4^-n, n = 1..count."""
    if count < 1:
        raise ValueError("count must be at least 1")
    n = np.arange(1, count + 1, dtype=float)
    ua = 4.0 ** -n
    return ZeroSequence.from_offsets(ua, "prop1-a"), ZeroSequence.from_offsets(2.0 * ua, "prop1-b")


def matched_zero_gap(Z1: ZeroSequence, Z2: ZeroSequence) -> List[float]:
    """rho(alpha_n, beta_n) for each index n."""
    if len(Z1) != len(Z2):
        raise DimensionMismatchError(f"sequence lengths differ: {len(Z1)} vs {len(Z2)}")
    return [float(v) for v in _rho(Z1.zeros, Z1.offsets, Z2.zeros, Z2.offsets)]


def _pair_matrix(Z: ZeroSequence) -> np.ndarray:
    z, u = Z.zeros, Z.offsets
    return _rho(z[:, None], u[:, None], z[None, :], u[None, :])


def uniform_separation(Z: ZeroSequence) -> float:
    """inf over distinct pairs of rho(z_i, z_j)."""
    if len(Z) < 2:
        raise ValueError("uniform separation needs at least two zeros")
    rho = _pair_matrix(Z)
    np.fill_diagonal(rho, np.inf)
    return float(rho.min())


def carleson_product_bound(Z: ZeroSequence) -> float:
    """min over n of prod_{k != n} rho(z_n, z_k) on the stored prefix."""
    if len(Z) < 2:
        raise ValueError("Carleson product bound needs at least two zeros")
    rho = _pair_matrix(Z)
    np.fill_diagonal(rho, 1.0)
    return float(np.prod(rho, axis=1).min())


def carleson_window_bound(Z: ZeroSequence, window_levels: int) -> float:
    """
    Dyadic upper envelope of the Carleson constant of sum (1 - |z_n|^2) delta_{z_n}.

    Arcs at level l span 2*pi*2^-l radians and start at multiples of that span. Arc length is
    normalized so the whole circle has |I| = 1: a zero belongs to the window S(I) when its
    argument lies in I and 1 - |z| <= |I| = 2^-l, and the ratio is the window mass over |I|.
    """
    if window_levels < 1:
        raise ValueError("window_levels must be at least 1")
    if len(Z) == 0:
        return 0.0
    mass = one_minus_modulus_sq(Z.zeros, Z.offsets)
    gaps = Z.boundary_gaps()
    turns = np.mod(np.angle(Z.zeros), 2.0 * np.pi) / (2.0 * np.pi)
    best = 0.0
    for level in range(1, window_levels + 1):
        arcs = 2 ** level
        length = 1.0 / arcs
        inside = gaps <= length
        if not np.any(inside):
            continue
        index = np.minimum(np.floor(turns[inside] * arcs).astype(np.int64), arcs - 1)
        _, which = np.unique(index, return_inverse=True)
        totals = np.bincount(which.ravel(), weights=mass[inside])
        best = max(best, float(totals.max()) / length)
    return best


def zero_separation_condition(Z1: ZeroSequence, Z2: ZeroSequence, r: float) -> float:
    """
    inf of rho(alpha, beta) over alpha in Z1, beta in Z2 with |alpha|, |beta| > r.

    Returns math.inf when either restricted set is empty.
    """
    keep1 = np.abs(Z1.zeros) > r
    keep2 = np.abs(Z2.zeros) > r
    if not keep1.any() or not keep2.any():
        return math.inf
    rho = _rho(
        Z1.zeros[keep1][:, None], Z1.offsets[keep1][:, None],
        Z2.zeros[keep2][None, :], Z2.offsets[keep2][None, :],
    )
    return float(rho.min())


def separation_profile(Z1: ZeroSequence, Z2: ZeroSequence, r: float) -> Dict[str, float]:
    """Interpolation diagnostics of a zero pair, collected for probe reports."""
    union = Z1.concat(Z2, "union")
    profile = {
        "sc_value": zero_separation_condition(Z1, Z2, r),
        "sc_radius": float(r),
        "union_separation": uniform_separation(union) if len(union) >= 2 else math.inf,
        "union_carleson_product": carleson_product_bound(union) if len(union) >= 2 else math.inf,
    }
    if len(Z1) == len(Z2) and len(Z1):
        profile["last_matched_gap"] = matched_zero_gap(Z1, Z2)[-1]
    return profile


@dataclass(frozen=True)
class ProbeThresholds:
    """Verdict thresholds for the boundary probe."""
    tol_s: float = 1e-2
    tol_c: float = 1e-2
    tol_wc: float = 1e-2
    consistency_floor: float = 0.05
    s_violation_level: float = 0.9

    def to_dict(self) -> Dict[str, float]:
        return dict(self.__dict__)


@dataclass
class ProbeReport:
    """Grid-sampled statistics of |phi| and |psi| with sample-consistency verdicts."""
    radii: List[float]
    min_sum: List[float]
    max_of_max: List[float]
    min_of_max: List[float]
    angular_sample_count: int
    verdicts: Dict[str, Verdict]
    thresholds: ProbeThresholds
    prefix_lengths: Dict[str, int] = field(default_factory=dict)
    implication_conflict: bool = False

    def stats_rows(self) -> List[Dict[str, float]]:
        return [
            {"radius": r, "min_sum": s, "max_of_max": mx, "min_of_max": mn}
            for r, s, mx, mn in zip(self.radii, self.min_sum, self.max_of_max, self.min_of_max)
        ]

    def to_dict(self) -> Dict:
        return {
            "radii": self.radii,
            "min_sum": self.min_sum,
            "max_of_max": self.max_of_max,
            "min_of_max": self.min_of_max,
            "angular_sample_count": self.angular_sample_count,
            "verdicts": dict(self.verdicts),
            "thresholds": self.thresholds.to_dict(),
            "prefix_lengths": dict(self.prefix_lengths),
            "implication_conflict": self.implication_conflict,
        }


def _outer_quartile(values: List[float]) -> List[float]:
    count = max(2, math.ceil(len(values) / 4))
    return values[-count:]


def _strictly_increasing(values: List[float]) -> bool:
    return len(values) >= 2 and all(b > a for a, b in zip(values, values[1:]))


def _verdict_s(min_of_max: List[float], th: ProbeThresholds) -> Verdict:
    last = min_of_max[-1]
    if last >= 1.0 - th.tol_s:
        return "consistent"
    if last < th.s_violation_level and not _strictly_increasing(_outer_quartile(min_of_max)):
        return "violated-at-samples"
    return "inconclusive"


def _verdict_c(min_sum: List[float], th: ProbeThresholds) -> Verdict:
    lowest = min(min_sum)
    if lowest >= th.consistency_floor:
        return "consistent"
    if lowest < th.tol_c:
        return "violated-at-samples"
    return "inconclusive"


def _verdict_wc(min_sum: List[float], th: ProbeThresholds) -> Verdict:
    outer = _outer_quartile(min_sum)
    lowest = min(outer)
    if lowest >= th.consistency_floor:
        return "consistent"
    if lowest < th.tol_wc and not _strictly_increasing(outer):
        return "violated-at-samples"
    return "inconclusive"


def probe_conditions(
    phi: BlaschkeProduct,
    psi: BlaschkeProduct,
    radii: Sequence[float],
    angular_samples: int,
    thresholds: Optional[ProbeThresholds] = None,
) -> ProbeReport:
    """
    Sample |phi| and |psi| on circles and grade conditions S, C and WC.

    Args:
        phi, psi: finite Blaschke products
        radii: strictly increasing radii in (0, 1)
        angular_samples: equispaced angles per circle, at least 8
        thresholds: verdict thresholds, defaults to ProbeThresholds()

    Returns:
        ProbeReport with per-radius statistics and three-valued verdicts
    """
    th = thresholds or ProbeThresholds()
    radii = [float(r) for r in radii]
    if not radii:
        raise ValueError("probe needs at least one radius")
    if any(not (0.0 < r < 1.0) for r in radii):
        raise DiskDomainError("probe radii must lie in (0, 1)")
    if any(b <= a for a, b in zip(radii, radii[1:])):
        raise ValueError("probe radii must be strictly increasing")
    if angular_samples < 8:
        raise ValueError("angular_samples must be at least 8")

    theta = 2.0 * np.pi * np.arange(angular_samples) / angular_samples
    turn = np.cos(theta) + 1j * np.sin(theta)
    # 1 - e^{i theta} without cancellation at small angles
    turn_offset = 2.0 * np.sin(theta / 2.0) ** 2 - 1j * np.sin(theta)

    min_sum, max_of_max, min_of_max = [], [], []
    for r in radii:
        z = r * turn
        uz = (1.0 - r) + r * turn_offset
        a = np.abs(phi.evaluate(z, uz))
        b = np.abs(psi.evaluate(z, uz))
        # rounding can lift a modulus one ulp above 1
        larger = np.minimum(np.maximum(a, b), 1.0)
        min_sum.append(float(np.min(np.minimum(a + b, 2.0))))
        max_of_max.append(float(np.max(larger)))
        min_of_max.append(float(np.min(larger)))

    verdicts: Dict[str, Verdict] = {
        "S": _verdict_s(min_of_max, th),
        "C": _verdict_c(min_sum, th),
        "WC": _verdict_wc(min_sum, th),
    }
    conflict = verdicts["S"] == "consistent" and verdicts["C"] == "violated-at-samples"
    if conflict:
        logger.warning("[Probe] S consistent while C violated: sampling artefact, S implies C")
    return ProbeReport(
        radii=radii,
        min_sum=min_sum,
        max_of_max=max_of_max,
        min_of_max=min_of_max,
        angular_sample_count=angular_samples,
        verdicts=verdicts,
        thresholds=th,
        prefix_lengths={"phi": phi.degree, "psi": psi.degree},
        implication_conflict=conflict,
    )
