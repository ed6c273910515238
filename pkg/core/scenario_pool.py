"""
Scenario Pool - built-in zero-sequence scenarios and deterministic symbol corpora
"""
from dataclasses import dataclass
from typing import Callable, Dict, List, Tuple

import numpy as np
from scipy.stats import unitary_group

from .blaschke import BlaschkeProduct, ZeroSequence, exm1_sequences, prop1_sequences
from .errors import TruncationError
from .fourier import FourierSymbol, tail_bound, taylor_coeffs, window_for_tail
from .operators import submodule_projection

GOLDEN_TURN = 0.5 * (np.sqrt(5.0) - 1.0)
SPECTRAL_TAIL_TARGET = 1e-10
SPECTRAL_MAX_TERMS = 2048


@dataclass(frozen=True)
class TrustedPrefix:
    """Zero-sequence prefix short enough that its Taylor expansions reach a tail target."""
    phi: BlaschkeProduct
    psi: BlaschkeProduct
    prefix_length: int
    terms: int
    tail_target: float

    def symbols(self) -> Tuple[FourierSymbol, FourierSymbol]:
        return taylor_coeffs(self.phi, self.terms), taylor_coeffs(self.psi, self.terms)

    def to_dict(self) -> Dict:
        return {
            "prefix_length": self.prefix_length,
            "terms": self.terms,
            "tail_target": self.tail_target,
            "phi_tail": tail_bound(self.phi, self.terms),
            "psi_tail": tail_bound(self.psi, self.terms),
        }


@dataclass(frozen=True)
class Scenario:
    name: str
    description: str
    expected_hold: Tuple[str, ...]
    sequences: Callable[[int], Tuple[ZeroSequence, ZeroSequence]]

    def symbols(self, prefix_length: int) -> Tuple[BlaschkeProduct, BlaschkeProduct]:
        Z1, Z2 = self.sequences(prefix_length)
        return BlaschkeProduct(Z1), BlaschkeProduct(Z2)

    def trusted_prefix(
        self,
        max_prefix: int,
        tail_target: float = SPECTRAL_TAIL_TARGET,
        max_terms: int = SPECTRAL_MAX_TERMS,
    ) -> TrustedPrefix:
        """
        Longest prefix, at most max_prefix zeros, whose Taylor tails reach tail_target
        within max_terms coefficients; terms is the window_for_tail length of that prefix.

        Raises:
            TruncationError: not even the one-zero prefix meets the target
        """
        best = None
        for length in range(1, max_prefix + 1):
            phi, psi = self.symbols(length)
            if max(tail_bound(phi, max_terms), tail_bound(psi, max_terms)) > tail_target:
                break
            terms = max(window_for_tail(phi, tail_target), window_for_tail(psi, tail_target))
            best = TrustedPrefix(phi, psi, length, terms, tail_target)
        if best is None:
            raise TruncationError(
                f"scenario {self.name}: no prefix reaches tail {tail_target:g} within {max_terms} coefficients"
            )
        return best

    def to_dict(self) -> Dict:
        return {"name": self.name, "description": self.description, "expected_hold": list(self.expected_hold)}


class ScenarioPool:
    """
    Named pairs of zero sequences with the boundary conditions each is expected to satisfy.
    """

    def __init__(self):
        self.scenarios = self._initialize_scenarios()

    def _initialize_scenarios(self) -> Dict[str, Scenario]:
        return {
            # matched zeros collide: none of S, C, WC survive
            "exm1": Scenario(
                name="exm1",
                description="a_n = 1 - 2^-n, b_n = 1 - 2^-n (1 + 1/n)",
                expected_hold=(),
                sequences=exm1_sequences,
            ),
            # zeros stay a fixed distance 1/3 apart: C and WC hold, S fails
            "prop1": Scenario(
                name="prop1",
                description="a_n = 1 - 4^-n, b_n = 1 - 2 * 4^-n",
                expected_hold=("C", "WC"),
                sequences=prop1_sequences,
            ),
        }

    def names(self) -> List[str]:
        return sorted(self.scenarios)

    def get(self, name: str) -> Scenario:
        if name not in self.scenarios:
            raise KeyError(f"unknown scenario {name!r}; choose from {self.names()}")
        return self.scenarios[name]


def standard_zeros(degree: int) -> np.ndarray:
    """Deterministic distinct zeros with moduli in [0.3, 0.7], spread by golden-ratio turns."""
    k = np.arange(degree)
    radii = 0.3 + 0.2 * (k % 3)
    angles = 2.0 * np.pi * GOLDEN_TURN * (k + 1)
    return radii * np.exp(1j * angles)


def standard_product(degree: int, label: str = "") -> BlaschkeProduct:
    return BlaschkeProduct.from_zeros(standard_zeros(degree), label or f"standard-{degree}")


def random_zeros(rng: np.random.Generator, degree: int, max_modulus: float = 0.7) -> np.ndarray:
    radii = max_modulus * np.sqrt(rng.uniform(0.0, 1.0, degree))
    angles = rng.uniform(0.0, 2.0 * np.pi, degree)
    return radii * np.exp(1j * angles)


def random_band_symbol(rng: np.random.Generator, band: int) -> FourierSymbol:
    values = rng.standard_normal(2 * band + 1) + 1j * rng.standard_normal(2 * band + 1)
    return FourierSymbol(values, band)


def toeplitz_corpus(seed: int, count: int, band: int = 3) -> List[Tuple[FourierSymbol, FourierSymbol]]:
    """(conj z, z) first, then random band-limited pairs."""
    rng = np.random.default_rng(seed)
    pairs = [(FourierSymbol.monomial(-1), FourierSymbol.monomial(1))]
    pairs.extend((random_band_symbol(rng, band), random_band_symbol(rng, band)) for _ in range(count))
    return pairs


def chain_corpus(seed: int, count: int, max_degree: int = 2) -> List[Tuple[BlaschkeProduct, BlaschkeProduct]]:
    """(z, z^2), a standard pair, then random finite products of degree at most max_degree."""
    rng = np.random.default_rng(seed)
    pairs = [
        (BlaschkeProduct.monomial(1), BlaschkeProduct.monomial(2)),
        (standard_product(1), standard_product(2)),
    ]
    for _ in range(count):
        degrees = rng.integers(1, max_degree + 1, size=2)
        pairs.append(tuple(BlaschkeProduct.from_zeros(random_zeros(rng, int(d)), "random") for d in degrees))
    return pairs


def oracle_corpus(seed: int, count: int = 12) -> List[np.ndarray]:
    """Matrices of dimension at most 12 for the singular-value oracle gate."""
    rng = np.random.default_rng(seed)
    corpus: List[np.ndarray] = [
        np.zeros((4, 4)),
        np.diag([3.0, 1.0, 2.0]),
        np.array([[0.0, 1.0], [0.0, 0.0]]),
        submodule_projection(standard_product(2), 10).matrix,
        submodule_projection(BlaschkeProduct.monomial(3), 8).matrix,
    ]
    for index in range(count):
        rows = int(rng.integers(1, 13))
        cols = int(rng.integers(1, 13))
        corpus.append(rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols)))
        if index % 3 == 0:
            size = int(rng.integers(2, 13))
            U = unitary_group.rvs(size, random_state=rng)
            corpus.append(U @ np.diag(np.linspace(1.0, 0.0, size)) @ U.conj().T)
    return corpus
