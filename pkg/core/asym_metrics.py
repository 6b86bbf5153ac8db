"""
Asymmetric distance metrics and classical code predicates

Word arithmetic is over the integers (digits 0..q-1), not modulo q, so a
damping event can only lower a digit.
"""
from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple, Union
import logging
import math

import numpy as np

from .exceptions import DimensionMismatchError
from .qudit_core import ClassicalCode, QuditString, apply_string_shift

logger = logging.getLogger(__name__)

# Rows per block when scanning pairs with numpy broadcasting
_CHUNK = 256


@dataclass(frozen=True)
class AsymReport:
    """Outcome of a pairwise asymmetric-distance scan"""
    min_delta: Union[int, float]
    witness_pair: Optional[Tuple[QuditString, QuditString]]
    is_self_complementary: bool
    t: int = 1

    @property
    def is_t_code(self) -> bool:
        return self.min_delta > self.t

    def to_dict(self) -> Dict:
        return {
            "min_delta": None if math.isinf(self.min_delta) else int(self.min_delta),
            "witness_pair": [str(w) for w in self.witness_pair] if self.witness_pair else None,
            "is_self_complementary": self.is_self_complementary,
            "t": self.t,
            "is_t_code": self.is_t_code,
        }


def _check_pair(x: QuditString, y: QuditString) -> None:
    if (x.q, x.n) != (y.q, y.n):
        raise DimensionMismatchError(f"cannot compare {x!r} with {y!r}")


def weight(x: QuditString) -> int:
    return int(sum(x.digits))


def n_asym(x: QuditString, y: QuditString) -> int:
    """N(x, y) = sum of max(y_i - x_i, 0)"""
    _check_pair(x, y)
    return sum(max(b - a, 0) for a, b in zip(x.digits, y.digits))


def delta(x: QuditString, y: QuditString) -> int:
    """Asymmetric distance max(N(x, y), N(y, x))"""
    return max(n_asym(x, y), n_asym(y, x))


def hamming_distance(x: QuditString, y: QuditString) -> int:
    _check_pair(x, y)
    return sum(1 for a, b in zip(x.digits, y.digits) if a != b)


def _word_matrix(code: ClassicalCode) -> Tuple[np.ndarray, List[QuditString]]:
    words = code.words()
    if not words:
        return np.zeros((0, code.n), dtype=np.int64), words
    return np.array([w.digits for w in words], dtype=np.int64), words


def _pairwise_minimum(code: ClassicalCode, metric: str) -> Tuple[Union[int, float], Optional[Tuple[int, int]]]:
    """Smallest pairwise value of 'delta' or 'hamming' with the index pair achieving it"""
    matrix, _ = _word_matrix(code)
    size = len(matrix)
    best: Union[int, float] = math.inf
    witness = None
    for start in range(0, size, _CHUNK):
        block = matrix[start:start + _CHUNK]
        diff = matrix[None, :, :] - block[:, None, :]
        if metric == "delta":
            values = np.maximum(np.clip(diff, 0, None).sum(axis=2), np.clip(-diff, 0, None).sum(axis=2))
        else:
            values = (diff != 0).sum(axis=2)
        rows = np.arange(block.shape[0])[:, None] + start
        cols = np.arange(size)[None, :]
        # Upper triangle only
        values = np.where(cols > rows, values, np.iinfo(np.int64).max)
        if values.size == 0:
            continue
        flat = int(np.argmin(values))
        r, c = divmod(flat, size)
        value = int(values[r, c])
        if value != np.iinfo(np.int64).max and value < best:
            best, witness = value, (start + r, c)
    return best, witness


def is_self_complementary(code: ClassicalCode) -> bool:
    """Closed under every 1-shift u -> u + alpha*1 (mod q)"""
    words = code.codewords
    return all(apply_string_shift(w, 1) in words for w in words)


def is_t_code(code: ClassicalCode, t: int) -> AsymReport:
    """
    Check that every pair of distinct codewords has asymmetric distance above t

    Empty and singleton codes report an infinite minimum and pass for every t.
    """
    if t < 1:
        raise ValueError("t must be at least 1")
    best, witness = _pairwise_minimum(code, "delta")
    pair = None
    if witness is not None:
        words = code.words()
        pair = (words[witness[0]], words[witness[1]])
    report = AsymReport(best, pair, is_self_complementary(code), t)
    logger.debug(f"'{code.name}': |C|={len(code)} min delta={report.min_delta} t={t}")
    return report


def min_hamming_distance(code: ClassicalCode) -> Union[int, float]:
    best, _ = _pairwise_minimum(code, "hamming")
    return best


def is_hamming_distance_at_least(code: ClassicalCode, d: int) -> bool:
    return min_hamming_distance(code) >= d


def delta1_profile(x: QuditString, y: QuditString) -> bool:
    """
    Length-3 test for Delta(x, y) = 1 from the difference profile

    Up to a permutation of coordinates, x - y must be +-(1,0,0) or +-(1,-1,0).
    Deliberately independent of delta().
    """
    _check_pair(x, y)
    if x.n != 3:
        raise DimensionMismatchError("difference-profile test needs length 3")
    diff = tuple(a - b for a, b in zip(x.digits, y.digits))
    profiles = set()
    for base in ((1, 0, 0), (1, -1, 0)):
        for sign in (1, -1):
            profiles.update(permutations(tuple(sign * v for v in base)))
    return diff in profiles


def asymmetric_ball(x: QuditString) -> Set[QuditString]:
    """x together with every single unit decrement of x"""
    ball = {x}
    for i, d in enumerate(x.digits):
        if d > 0:
            digits = list(x.digits)
            digits[i] -= 1
            ball.add(QuditString(tuple(digits), x.q))
    return ball


def simulate_single_asym_errors(code: ClassicalCode) -> bool:
    """True if no two codewords share an outcome of at most one unit decrement"""
    seen: Dict[QuditString, QuditString] = {}
    for w in code.words():
        for outcome in asymmetric_ball(w):
            if outcome in seen and seen[outcome] != w:
                return False
            seen[outcome] = w
    return True


def rq_ball(x: QuditString) -> Set[QuditString]:
    """x plus every single-coordinate change by +-1 mod q"""
    ball = {x}
    for i, d in enumerate(x.digits):
        for step in (1, -1):
            digits = list(x.digits)
            digits[i] = (d + step) % x.q
            ball.add(QuditString(tuple(digits), x.q))
    return ball


def is_rq_single_corrector(code: ClassicalCode) -> bool:
    """Brute-force disjointness of R_q error balls of distinct codewords"""
    seen: Dict[QuditString, QuditString] = {}
    for w in code.words():
        for outcome in rq_ball(w):
            if seen.get(outcome, w) != w:
                return False
            seen[outcome] = w
    return True


def are_disjoint(codes: Sequence[ClassicalCode]) -> bool:
    for a, b in combinations(codes, 2):
        if a.codewords & b.codewords:
            return False
    return True


def induced_transitions(inner_codes: Sequence[ClassicalCode]) -> Set[Tuple[int, int]]:
    """
    Label transitions a single unit damping can cause between inner codes

    A word of code a that loses one excitation and lands in code b != a
    contributes the pair (a, b).
    """
    index: Dict[QuditString, int] = {}
    for label, code in enumerate(inner_codes):
        for w in code.codewords:
            index[w] = label
    found: Set[Tuple[int, int]] = set()
    for label, code in enumerate(inner_codes):
        for w in code.codewords:
            for outcome in asymmetric_ball(w):
                other = index.get(outcome)
                if other is not None and other != label:
                    found.add((label, other))
    return found


def transitions_are_neighbouring(transitions: Iterable[Tuple[int, int]], q: int) -> bool:
    """Every transition moves the label by +-1 mod q (the R_q pattern)"""
    return all((b - a) % q in (1, q - 1) for a, b in transitions)
