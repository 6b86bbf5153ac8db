"""
Qudit strings, sparse superposition states, classical codes and quantum codes
"""
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union
import logging

import numpy as np
from scipy import sparse

from config import settings
from .exceptions import ConstructionError, DimensionMismatchError

logger = logging.getLogger(__name__)

BASE36 = "0123456789abcdefghijklmnopqrstuvwxyz"
MAX_Q = len(BASE36)

Digits = Tuple[int, ...]


@dataclass(frozen=True, order=True)
class QuditString:
    """Length-n word over {0, ..., q-1}"""
    digits: Digits
    q: int

    def __post_init__(self):
        digits = tuple(int(d) for d in self.digits)
        object.__setattr__(self, "digits", digits)
        if not 2 <= self.q <= MAX_Q:
            raise ValueError(f"alphabet size q={self.q} outside 2..{MAX_Q}")
        if not digits:
            raise ValueError("qudit strings have length at least 1")
        for d in digits:
            if not 0 <= d < self.q:
                raise ValueError(f"digit {d} outside Z_{self.q}")

    @classmethod
    def parse(cls, text: str, q: int) -> "QuditString":
        """Read a base-36 digit string such as '0a3'"""
        try:
            digits = tuple(BASE36.index(ch) for ch in text.strip().lower())
        except ValueError:
            raise ValueError(f"'{text}' is not a base-36 digit string")
        return cls(digits, q)

    @classmethod
    def coerce(cls, value: Union["QuditString", str, Sequence[int]], q: int) -> "QuditString":
        if isinstance(value, QuditString):
            if value.q != q:
                raise DimensionMismatchError(f"string over Z_{value.q} where Z_{q} expected")
            return value
        if isinstance(value, str):
            return cls.parse(value, q)
        return cls(tuple(value), q)

    @property
    def n(self) -> int:
        return len(self.digits)

    def shift(self, alpha: int) -> "QuditString":
        return apply_string_shift(self, alpha)

    def __len__(self) -> int:
        return len(self.digits)

    def __str__(self) -> str:
        return "".join(BASE36[d] for d in self.digits)

    def __repr__(self) -> str:
        return f"QuditString('{self}', q={self.q})"


def apply_string_shift(s: QuditString, alpha: int) -> QuditString:
    """Add alpha to every digit modulo q (the transversal X_q^alpha)"""
    if not 0 <= alpha < s.q:
        raise ValueError(f"shift {alpha} outside Z_{s.q}")
    return QuditString(tuple((d + alpha) % s.q for d in s.digits), s.q)


def all_one_orbit(s: QuditString) -> List[QuditString]:
    """The 1-shift orbit {s + alpha*1 : alpha in Z_q}, in alpha order"""
    return [apply_string_shift(s, alpha) for alpha in range(s.q)]


@dataclass(frozen=True)
class SparseState:
    """
    Finite superposition of computational basis strings

    Amplitudes below settings.pruning_floor are dropped on construction.
    """
    q: int
    n: int
    terms: Mapping[QuditString, complex]

    def __post_init__(self):
        for key in self.terms:
            if key.q != self.q or key.n != self.n:
                raise DimensionMismatchError(
                    f"term {key} does not live in (q={self.q}, n={self.n})"
                )
        floor = settings.pruning_floor
        kept = {k: complex(v) for k, v in self.terms.items() if abs(v) >= floor}
        object.__setattr__(self, "terms", MappingProxyType(kept))

    @classmethod
    def from_terms(
        cls,
        q: int,
        n: int,
        items: Iterable[Tuple[Union[QuditString, Digits], complex]],
    ) -> "SparseState":
        """Accumulate (string, amplitude) pairs; cancelled terms are pruned"""
        acc: Dict[QuditString, complex] = {}
        for key, amp in items:
            if not isinstance(key, QuditString):
                key = QuditString(key, q)
            acc[key] = acc.get(key, 0j) + complex(amp)
        return cls(q, n, acc)

    @classmethod
    def basis(cls, s: QuditString) -> "SparseState":
        return cls(s.q, s.n, {s: 1 + 0j})

    def norm_squared(self) -> float:
        return float(sum(abs(a) ** 2 for a in self.terms.values()))

    def norm(self) -> float:
        return self.norm_squared() ** 0.5

    def is_normalized(self, tol: float = 1e-12) -> bool:
        return abs(self.norm_squared() - 1.0) <= tol

    def support(self) -> List[QuditString]:
        return sorted(self.terms)

    def apply(self, op) -> "SparseState":
        """Apply a monomial operator exposing act(digits) -> (digits, coefficient) or None"""
        out = []
        for key, amp in self.terms.items():
            image = op.act(key.digits)
            if image is not None:
                digits, coeff = image
                out.append((digits, amp * coeff))
        return SparseState.from_terms(self.q, self.n, out)

    def __len__(self) -> int:
        return len(self.terms)


def inner_product(a: SparseState, b: SparseState) -> complex:
    """<a|b>, summed over the shared support"""
    if (a.q, a.n) != (b.q, b.n):
        raise DimensionMismatchError(
            f"cannot pair states over (q={a.q}, n={a.n}) and (q={b.q}, n={b.n})"
        )
    small, large = (a, b) if len(a.terms) <= len(b.terms) else (b, a)
    total = 0j
    for key, amp in small.terms.items():
        other = large.terms.get(key)
        if other is not None:
            total += amp.conjugate() * other if small is a else other.conjugate() * amp
    return total


def states_to_csr(
    states: Sequence[Mapping[Digits, complex]],
    column_index: Optional[Dict[Digits, int]] = None,
) -> Tuple[sparse.csr_matrix, Dict[Digits, int]]:
    """
    Stack sparse states as rows of a CSR matrix

    Args:
        states: one mapping digit-tuple -> amplitude per row
        column_index: shared string -> column map, extended in place

    Returns:
        (matrix, column_index)
    """
    column_index = {} if column_index is None else column_index
    rows, cols, vals = [], [], []
    for r, terms in enumerate(states):
        for digits, amp in terms.items():
            c = column_index.setdefault(digits, len(column_index))
            rows.append(r)
            cols.append(c)
            vals.append(amp)
    matrix = sparse.csr_matrix(
        (np.asarray(vals, dtype=complex), (np.asarray(rows, dtype=np.int64), np.asarray(cols, dtype=np.int64))),
        shape=(len(states), max(len(column_index), 1)),
    )
    return matrix, column_index


@dataclass(frozen=True)
class ClassicalCode:
    """Set of q-ary words, optionally with a transversal of its 1-shift orbits"""
    q: int
    n: int
    codewords: FrozenSet[QuditString]
    tilde_transversal: Optional[FrozenSet[QuditString]] = None
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "codewords", frozenset(self.codewords))
        for w in self.codewords:
            if w.q != self.q or w.n != self.n:
                raise DimensionMismatchError(f"codeword {w} does not live in (q={self.q}, n={self.n})")
        if self.tilde_transversal is not None:
            tilde = frozenset(self.tilde_transversal)
            object.__setattr__(self, "tilde_transversal", tilde)
            covered = set()
            for u in tilde:
                orbit = all_one_orbit(u)
                if covered.intersection(orbit):
                    raise ConstructionError(f"representative {u} shares a 1-orbit with another", "duplicate-orbit")
                covered.update(orbit)
            if covered != set(self.codewords):
                raise ConstructionError("transversal orbits do not cover the codewords", "transversal-cover")

    @classmethod
    def from_words(
        cls,
        q: int,
        words: Iterable[Union[QuditString, str, Sequence[int]]],
        name: str = "",
        n: Optional[int] = None,
    ) -> "ClassicalCode":
        parsed = [QuditString.coerce(w, q) for w in words]
        if n is None:
            if not parsed:
                raise ValueError("length of an empty code must be given explicitly")
            n = parsed[0].n
        return cls(q, n, frozenset(parsed), name=name)

    def words(self) -> List[QuditString]:
        """Codewords in lexicographic order"""
        return sorted(self.codewords)

    def shifted_by(self, offset: Sequence[int], name: str = "") -> "ClassicalCode":
        """Coset {u + offset mod q}"""
        if len(offset) != self.n:
            raise DimensionMismatchError("offset length differs from code length")
        moved = [
            QuditString(tuple((d + o) % self.q for d, o in zip(w.digits, offset)), self.q)
            for w in self.codewords
        ]
        return ClassicalCode(self.q, self.n, frozenset(moved), name=name or self.name)

    def __len__(self) -> int:
        return len(self.codewords)

    def __iter__(self) -> Iterator[QuditString]:
        return iter(self.words())

    def __contains__(self, item) -> bool:
        return item in self.codewords


def orbit_transversal(code: ClassicalCode) -> ClassicalCode:
    """
    Pick one representative per 1-shift orbit: the member whose first digit is 0

    Raises:
        ConstructionError: if the code is not self-complementary
    """
    from .asym_metrics import is_self_complementary

    if not is_self_complementary(code):
        raise ConstructionError(f"code '{code.name}' is not closed under 1-shifts", "self-complementary")
    tilde = frozenset(w for w in code.codewords if w.digits[0] == 0)
    return ClassicalCode(code.q, code.n, code.codewords, tilde_transversal=tilde, name=code.name)


def relift(q: int, representatives: Iterable[Union[QuditString, str, Sequence[int]]], name: str = "",
           n: Optional[int] = None) -> ClassicalCode:
    """Expand a transversal C~ into C = {u + alpha*1}; orbits must be distinct"""
    reps = [QuditString.coerce(u, q) for u in representatives]
    if n is None:
        if not reps:
            raise ValueError("length of an empty transversal must be given explicitly")
        n = reps[0].n
    words = set()
    for u in reps:
        orbit = all_one_orbit(u)
        if words.intersection(orbit):
            raise ConstructionError(f"representative {u} repeats a 1-orbit", "duplicate-orbit")
        words.update(orbit)
    return ClassicalCode(q, n, frozenset(words), tilde_transversal=frozenset(reps), name=name)


@dataclass(frozen=True)
class QuantumCode:
    """Ordered orthonormal basis plus provenance"""
    q: int
    n: int
    basis: Tuple[SparseState, ...]
    claimed_t: int
    channel_scope: FrozenSet[str]
    provenance: str
    name: str = ""
    classical: Optional[ClassicalCode] = None
    metadata: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "basis", tuple(self.basis))
        object.__setattr__(self, "channel_scope", frozenset(self.channel_scope))
        if not self.basis:
            raise ConstructionError("a quantum code needs at least one basis state", "dimension")
        if self.claimed_t < 0:
            raise ValueError("claimed_t must be non-negative")
        for state in self.basis:
            if (state.q, state.n) != (self.q, self.n):
                raise DimensionMismatchError(
                    f"basis state over (q={state.q}, n={state.n}) in a code over (q={self.q}, n={self.n})"
                )

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def gram_deviation(self) -> float:
        """max |<b_i|b_j> - delta_ij| over the basis"""
        matrix, _ = states_to_csr([{k.digits: v for k, v in s.terms.items()} for s in self.basis])
        gram = (matrix.conj() @ matrix.T).toarray()
        return float(np.max(np.abs(gram - np.eye(self.dimension))))

    def check_orthonormal(self, tol: Optional[float] = None) -> None:
        tol = settings.orthonormality_tol if tol is None else tol
        deviation = self.gram_deviation()
        if deviation > tol:
            raise ConstructionError(
                f"basis of '{self.name}' deviates from orthonormal by {deviation:.3e}", "orthonormality"
            )

    def describe(self) -> str:
        scope = ",".join(sorted(self.channel_scope)) or "-"
        return f"(({self.n},{self.dimension}))_{self.q} t={self.claimed_t} channels={scope} [{self.provenance}]"
