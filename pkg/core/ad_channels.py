"""
Kraus operators for the qudit damping channels and error-operator enumeration

Four channels are covered:

- A:      bosonic amplitude damping truncated to q levels
- Xi:     cascade damping with rates gamma_ij of order tau^(j-i)
- V:      three-level V pattern, both excited levels decay to |0>
- Lambda: three-level Lambda pattern, |2> decays to |0> or |1>

Every operator is monomial: each input digit is sent to at most one output
digit, so an n-site tensor product maps a basis string to at most one
basis string.
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple
import logging
import math

import numpy as np
from scipy.special import comb

from config import settings
from .exceptions import ParameterRangeError, ResourceLimitError

logger = logging.getLogger(__name__)


class ChannelKind(str, Enum):
    BOSONIC = "A"
    CASCADE = "Xi"
    V = "V"
    LAMBDA = "Lambda"

    @classmethod
    def parse(cls, value: str) -> "ChannelKind":
        aliases = {"a": cls.BOSONIC, "bosonic": cls.BOSONIC, "xi": cls.CASCADE, "cascade": cls.CASCADE,
                   "v": cls.V, "lambda": cls.LAMBDA, "l": cls.LAMBDA}
        try:
            return aliases[value.strip().lower()]
        except KeyError:
            raise ParameterRangeError(f"unknown channel '{value}'")


@dataclass(frozen=True)
class SiteKraus:
    """Single-site monomial operator: digit r -> outputs[r] with weight coefficients[r]"""
    label: str
    q: int
    outputs: Tuple[int, ...]  # -1 where the input is annihilated
    coefficients: Tuple[complex, ...]
    damping_weight: int
    order_in_tau: float

    @classmethod
    def from_entries(cls, label: str, q: int, entries: Mapping[int, Tuple[int, complex]],
                     damping_weight: int, order_in_tau: float) -> "SiteKraus":
        outputs = [-1] * q
        coefficients = [0.0] * q
        for r_in, (r_out, value) in entries.items():
            outputs[r_in] = r_out
            coefficients[r_in] = value
        return cls(label, q, tuple(outputs), tuple(coefficients), damping_weight, order_in_tau)

    def matrix(self) -> np.ndarray:
        m = np.zeros((self.q, self.q), dtype=complex)
        for r, (out, c) in enumerate(zip(self.outputs, self.coefficients)):
            if out >= 0:
                m[out, r] = c
        return m

    @property
    def norm(self) -> float:
        return max(abs(c) for c in self.coefficients)


def kraus_completeness(ops: Sequence[SiteKraus]) -> float:
    """max entry of |sum E^dagger E - I| for one site"""
    q = ops[0].q
    total = np.zeros((q, q), dtype=complex)
    for op in ops:
        m = op.matrix()
        total += m.conj().T @ m
    return float(np.max(np.abs(total - np.eye(q))))


def _require_open_unit(name: str, value: float) -> None:
    if not 0.0 < value < 1.0:
        raise ParameterRangeError(f"{name}={value} outside (0, 1)")


def bosonic_kraus(q: int, gamma: float) -> List[SiteKraus]:
    """A_k = sum_r sqrt(C(r,k) (1-gamma)^(r-k) gamma^k) |r-k><r| for k = 0..q-1"""
    if q < 2:
        raise ParameterRangeError("q must be at least 2")
    _require_open_unit("gamma", gamma)
    ops = []
    for k in range(q):
        entries = {
            r: (r - k, math.sqrt(comb(r, k, exact=True) * (1 - gamma) ** (r - k) * gamma ** k))
            for r in range(k, q)
        }
        ops.append(SiteKraus.from_entries(f"A{k}", q, entries, k, k / 2))
    return ops


def default_cascade_coefficients(q: int) -> Dict[Tuple[int, int], float]:
    return {(i, j): 1.0 for j in range(q) for i in range(j)}


def cascade_coefficients_from_rates(k1: float, k2: float) -> Dict[Tuple[int, int], float]:
    """Three-level cascade leading coefficients: gamma_01 ~ 2k2 tau, gamma_12 ~ 2k1 tau, gamma_02 ~ 2k1k2 tau^2"""
    return {(0, 1): 2 * k2, (1, 2): 2 * k1, (0, 2): 2 * k1 * k2}


def cascade_kraus(q: int, coefficients: Optional[Mapping[Tuple[int, int], float]], tau: float) -> List[SiteKraus]:
    """A_ij = sqrt(c_ij tau^(j-i)) |i><j| plus the diagonal A0 completing the set"""
    if q < 2:
        raise ParameterRangeError("q must be at least 2")
    if tau <= 0:
        raise ParameterRangeError(f"tau={tau} must be positive")
    coefficients = dict(default_cascade_coefficients(q) if coefficients is None else coefficients)
    gammas: Dict[Tuple[int, int], float] = {}
    for (i, j), c in coefficients.items():
        if not 0 <= i < j < q:
            raise ParameterRangeError(f"cascade transition {i}<-{j} invalid for q={q}")
        if c < 0:
            raise ParameterRangeError(f"cascade coefficient c_{i}{j}={c} is negative")
        gammas[(i, j)] = c * tau ** (j - i)

    diagonal = {}
    for j in range(q):
        remaining = 1.0 - sum(g for (i, jj), g in gammas.items() if jj == j)
        if remaining < 0:
            raise ParameterRangeError(f"level {j} loses more than unit population at tau={tau}")
        diagonal[j] = (j, math.sqrt(remaining))

    ops = [SiteKraus.from_entries("A0", q, diagonal, 0, 0.0)]
    for (i, j) in sorted(gammas, key=lambda p: (p[1] - p[0], p)):
        ops.append(SiteKraus.from_entries(f"A{i}{j}", q, {j: (i, math.sqrt(gammas[(i, j)]))}, j - i, (j - i) / 2))
    return ops


def v_lambda_rates(kind: ChannelKind, k1: float, k2: float, tau: float) -> Tuple[float, float]:
    if k1 <= 0 or k2 <= 0 or tau <= 0:
        raise ParameterRangeError(f"rates and time must be positive (k1={k1}, k2={k2}, tau={tau})")
    if kind is ChannelKind.V:
        return 1 - math.exp(-2 * k1 * tau), 1 - math.exp(-2 * k2 * tau)
    if kind is ChannelKind.LAMBDA:
        decay = 1 - math.exp(-2 * (k1 + k2) * tau)
        return k2 / (k1 + k2) * decay, k1 / (k1 + k2) * decay
    raise ParameterRangeError(f"{kind.value} is not a two-rate three-level channel")


def v_lambda_kraus(kind: ChannelKind, k1: float, k2: float, tau: float) -> List[SiteKraus]:
    """
    Three-level V or Lambda Kraus set

    Both damping operators are first order in tau, so each gets damping
    weight 1 and order 1/2.
    """
    g1, g2 = v_lambda_rates(kind, k1, k2, tau)
    if kind is ChannelKind.V:
        a0 = {0: (0, 1.0), 1: (1, math.sqrt(1 - g1)), 2: (2, math.sqrt(1 - g2))}
        a1 = {1: (0, math.sqrt(g1))}
        a2 = {2: (0, math.sqrt(g2))}
    else:
        if g1 + g2 > 1:
            raise ParameterRangeError(f"gamma1+gamma2={g1 + g2} exceeds 1")
        a0 = {0: (0, 1.0), 1: (1, 1.0), 2: (2, math.sqrt(max(0.0, 1 - g1 - g2)))}
        a1 = {2: (0, math.sqrt(g1))}
        a2 = {2: (1, math.sqrt(g2))}
    return [
        SiteKraus.from_entries("A0", 3, a0, 0, 0.0),
        SiteKraus.from_entries("A1", 3, a1, 1, 0.5),
        SiteKraus.from_entries("A2", 3, a2, 1, 0.5),
    ]


@dataclass(frozen=True)
class ChannelSpec:
    """Channel family plus the fixed parameters; the swept one is passed to at()"""
    kind: ChannelKind
    q: int
    parameters: Mapping[str, float] = field(default_factory=dict)
    coefficients: Optional[Mapping[Tuple[int, int], float]] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", ChannelKind(self.kind))
        if self.kind in (ChannelKind.V, ChannelKind.LAMBDA) and self.q != 3:
            raise ParameterRangeError(f"{self.kind.value} channel is three-level, got q={self.q}")
        if self.q < 2:
            raise ParameterRangeError("q must be at least 2")

    @property
    def parameter_name(self) -> str:
        return "gamma" if self.kind is ChannelKind.BOSONIC else "tau"

    def with_rates(self, k1: float, k2: float) -> "ChannelSpec":
        return ChannelSpec(self.kind, self.q, {**self.parameters, "k1": k1, "k2": k2}, self.coefficients)

    def at(self, point: float) -> List[SiteKraus]:
        """Single-site Kraus list at one value of gamma (A) or tau (others)"""
        if self.kind is ChannelKind.BOSONIC:
            return bosonic_kraus(self.q, point)
        if self.kind is ChannelKind.CASCADE:
            return cascade_kraus(self.q, self.coefficients, point)
        return v_lambda_kraus(self.kind, self.parameters.get("k1", 1.0), self.parameters.get("k2", 2.0), point)

    def structure(self) -> List[SiteKraus]:
        """Kraus list at a small reference point, used only for labels, weights and orders"""
        return self.at(1e-3)

    def to_dict(self) -> Dict:
        data = {"kind": self.kind.value, "q": self.q, "parameters": dict(self.parameters)}
        if self.coefficients is not None:
            data["coefficients"] = {f"{i}{j}": c for (i, j), c in self.coefficients.items()}
        return data


@dataclass(frozen=True)
class MonomialKraus:
    """n-site tensor product of single-site monomial operators"""
    q: int
    site_indices: Tuple[int, ...]
    factors: Tuple[SiteKraus, ...]

    @property
    def n(self) -> int:
        return len(self.factors)

    @property
    def damping_weight(self) -> int:
        return sum(f.damping_weight for f in self.factors)

    @property
    def order_in_tau(self) -> float:
        return sum(f.order_in_tau for f in self.factors)

    @property
    def label(self) -> str:
        return " x ".join(f.label for f in self.factors)

    @property
    def norm(self) -> float:
        return float(np.prod([f.norm for f in self.factors]))

    def act(self, digits: Sequence[int]) -> Optional[Tuple[Tuple[int, ...], complex]]:
        out = []
        coeff = 1.0 + 0j
        for d, f in zip(digits, self.factors):
            r = f.outputs[d]
            if r < 0:
                return None
            out.append(r)
            coeff *= f.coefficients[d]
        return tuple(out), coeff

    def act_on_words(self, words: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """
        Vectorised action on an (N, n) array of digits

        Returns:
            (images, coefficients); annihilated rows get coefficient 0
        """
        images = np.empty_like(words)
        coeffs = np.ones(words.shape[0], dtype=complex)
        for i, f in enumerate(self.factors):
            outputs = np.asarray(f.outputs)
            column = outputs[words[:, i]]
            coeffs *= np.asarray(f.coefficients)[words[:, i]] * (column >= 0)
            images[:, i] = np.where(column >= 0, column, 0)
        return images, coeffs

    def rebind(self, site_ops: Sequence[SiteKraus]) -> "MonomialKraus":
        """Same index pattern, coefficients from another parameter point"""
        return MonomialKraus(self.q, self.site_indices, tuple(site_ops[k] for k in self.site_indices))


def count_error_ops(weights: Sequence[int], n: int, max_damping: int) -> int:
    """Number of index tuples of length n whose summed weight stays within max_damping"""
    counts = np.zeros(max_damping + 1, dtype=object)
    counts[0] = 1
    for _ in range(n):
        nxt = np.zeros(max_damping + 1, dtype=object)
        for total in range(max_damping + 1):
            if counts[total]:
                for w in weights:
                    if total + w <= max_damping:
                        nxt[total + w] += counts[total]
        counts = nxt
    return int(sum(counts))


def _index_tuples(weights: Sequence[int], n: int, budget: int) -> Iterator[Tuple[int, ...]]:
    # Lexicographic in the per-site Kraus index
    if n == 0:
        yield ()
        return
    for k, w in enumerate(weights):
        if w <= budget:
            for rest in _index_tuples(weights, n - 1, budget - w):
                yield (k,) + rest


def enumerate_error_ops(spec: ChannelSpec, n: int, max_damping: int,
                        point: Optional[float] = None,
                        cap: Optional[int] = None) -> List[MonomialKraus]:
    """
    All n-fold tensor products with total damping weight at most max_damping

    Raises:
        ResourceLimitError: when the count exceeds the configured cap
    """
    if max_damping < 0:
        raise ValueError("max_damping must be non-negative")
    site_ops = spec.at(point) if point is not None else spec.structure()
    weights = [op.damping_weight for op in site_ops]
    cap = settings.max_error_operators if cap is None else cap
    total = count_error_ops(weights, n, max_damping)
    if total > cap:
        raise ResourceLimitError(
            f"{total} error operators for n={n}, max_damping={max_damping} exceed the cap {cap}", total
        )
    logger.debug(f"Enumerating {total} error operators ({spec.kind.value}, n={n}, max_damping={max_damping})")
    return [
        MonomialKraus(spec.q, idx, tuple(site_ops[k] for k in idx))
        for idx in _index_tuples(weights, n, max_damping)
    ]
