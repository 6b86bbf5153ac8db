"""
Code constructions: the self-complementary lift, generalized concatenation,
the parity multi-error construction and the V/Lambda construction
"""
from dataclasses import dataclass
from itertools import product
from math import prod, sqrt
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union
import logging

from config import settings
from .asym_metrics import is_self_complementary, is_t_code
from .exceptions import CapacityError, ConstructionError, RegistryLookupError, ResourceLimitError
from .inner_codes import InnerCodeEntry, inner_code_family
from .outer_codes import OuterCodeEntry, outer_registry
from .qudit_core import ClassicalCode, QuantumCode, QuditString, SparseState, all_one_orbit, relift

logger = logging.getLogger(__name__)

SINGLE_DAMPING_SCOPE = frozenset({"A", "Xi"})
FLAVORS = ("linear", "nonlinear", "nonlinear_short")


def lift(tilde: Union[ClassicalCode, Iterable[QuditString]], q: Optional[int] = None, claimed_t: int = 1,
         channel_scope: FrozenSet[str] = SINGLE_DAMPING_SCOPE, provenance: str = "lift",
         name: str = "", metadata: Optional[Dict] = None) -> QuantumCode:
    """
    |psi_u> = (1/sqrt q) sum_alpha |u + alpha*1| for every representative u

    Raises:
        ConstructionError: if two representatives share a 1-orbit
    """
    if isinstance(tilde, ClassicalCode):
        reps = sorted(tilde.tilde_transversal if tilde.tilde_transversal is not None else tilde.codewords)
        q = tilde.q
        name = name or tilde.name
    else:
        reps = sorted(tilde)
        if q is None:
            q = reps[0].q
    classical = relift(q, reps, name=name)
    amp = 1 / sqrt(q)
    basis = tuple(SparseState.from_terms(q, classical.n, [(w, amp) for w in all_one_orbit(u)]) for u in reps)
    return QuantumCode(q, classical.n, basis, claimed_t, channel_scope, provenance, name=name, classical=classical,
                       metadata=metadata or {})


@dataclass(frozen=True)
class GCLayout:
    """Position-by-position inner families of a generalized concatenation"""
    q: int
    n: int
    flavor: str
    families: Tuple[str, ...]
    outer_property: str

    @property
    def outer_length(self) -> int:
        return len(self.families)

    def inner_entries(self) -> List[InnerCodeEntry]:
        return [inner_code_family(f, self.q) for f in self.families]

    def inner_sizes(self) -> List[int]:
        return [e.code_size for e in self.inner_entries()]


def gc_layout(q: int, n: int, flavor: str = "linear") -> GCLayout:
    """
    Choose inner blocks for length n

    Even n uses length-2 blocks only. Odd n adds one longer block: length 3
    (last position) for q = 4, q > 5 and the short quinary family, length 5
    (first position) for q = 3 and q = 5.
    """
    if flavor not in FLAVORS:
        raise ValueError(f"unknown flavor '{flavor}'; expected one of {FLAVORS}")
    if n < 2:
        raise ConstructionError(f"length {n} too short for generalized concatenation", "length")
    prop = "rq_single" if q > 3 and n % 2 == 0 else "hamming_d3"
    if n % 2 == 0:
        return GCLayout(q, n, flavor, ("length2_cosets",) * (n // 2), prop)

    if q in (3, 5) and flavor in ("linear", "nonlinear"):
        if n < 5:
            raise ConstructionError(f"odd length {n} below 5 for q={q}", "length")
        head = {
            (3, "linear"): "len5_linear_q3",
            (3, "nonlinear"): "len5_nonlinear_q3_33",
            (5, "linear"): "len5_linear_q5",
            (5, "nonlinear"): "len5_nonlinear_q5_295",
        }[(q, flavor)]
        return GCLayout(q, n, flavor, (head,) + ("length2_cosets",) * ((n - 5) // 2), prop)

    if q == 4 and flavor == "linear":
        tail = "len3_q4"
    elif q > 5 and flavor == "linear":
        tail = "len3_qgt5"
    elif q == 5 and flavor == "nonlinear_short":
        tail = "len3_nonlinear_q5_20"
    else:
        raise RegistryLookupError(f"no odd-length layout for q={q} with flavor '{flavor}'")
    return GCLayout(q, n, flavor, ("length2_cosets",) * ((n - 3) // 2) + (tail,), prop)


def gc_dimension(layout: GCLayout, outer_size: int) -> int:
    """Quantum dimension |O| * prod(inner sizes) / q, counted without materializing"""
    return outer_size * prod(layout.inner_sizes()) // layout.q


def gc_construct(q: int, n: int, outer: Optional[OuterCodeEntry] = None, flavor: str = "linear",
                 name: str = "") -> QuantumCode:
    """
    Generalized concatenation followed by the lift

    Raises:
        ConstructionError: when the outer code fails its required property
        ResourceLimitError: when the classical code is too large to materialize
    """
    layout = gc_layout(q, n, flavor)
    outer = outer or outer_registry(q, layout.outer_length, layout.outer_property)
    if outer.length != layout.outer_length or outer.q_out != q:
        raise ConstructionError(
            f"outer code has length {outer.length} over q={outer.q_out}; layout needs "
            f"{layout.outer_length} over q={q}", "outer-length"
        )
    if outer.required_property != layout.outer_property and outer.required_property != "hamming_d3":
        raise ConstructionError(f"outer code certified for {outer.required_property}", layout.outer_property)

    expected = gc_dimension(layout, outer.size)
    if expected * q > settings.max_materialized_words:
        raise ResourceLimitError(f"(({n},{expected}))_{q} needs {expected * q} classical words", expected * q)

    entries = layout.inner_entries()
    tilde: List[QuditString] = []
    for o in outer.code.words():
        blocks = [entries[p].codes[symbol] for p, symbol in enumerate(o.digits)]
        # Only words starting with digit 0 are orbit representatives
        first = [w for w in blocks[0].words() if w.digits[0] == 0]
        for parts in product(first, *[b.words() for b in blocks[1:]]):
            tilde.append(QuditString(sum((w.digits for w in parts), ()), q))

    if len(tilde) != expected:
        raise ConstructionError(f"assembled {len(tilde)} representatives, formula gives {expected}", "dimension")
    label = name or f"gc_{flavor}(({n},{expected}))_{q}"
    classical = relift(q, tilde, name=label)
    if len(classical) <= settings.brute_force_verify_max_words:
        if not is_self_complementary(classical) or not is_t_code(classical, 1).is_t_code:
            raise ConstructionError(f"'{label}' is not a self-complementary 1-code", "1-code")
    else:
        logger.info(f"Skipping brute-force 1-code check on {len(classical)} words")

    code = lift(classical, claimed_t=1, channel_scope=SINGLE_DAMPING_SCOPE, provenance="gc", name=label,
                metadata={"flavor": flavor, "outer": outer.code.name, "families": list(layout.families)})
    logger.info(f"Constructed {code.describe()} from outer {outer.code.name}")
    return code


def parity_inner_set(q: int, m: int) -> ClassicalCode:
    """Length-m strings whose digit sum is even"""
    if q < 2 or m < 1:
        raise ValueError("need q >= 2 and m >= 1")
    words = [QuditString(d, q) for d in product(range(q), repeat=m) if sum(d) % 2 == 0]
    return ClassicalCode(q, m, frozenset(words), name=f"parity_{q}_{m}")


def k_formula(q: int, m: int) -> int:
    return (q ** m + 1) // 2 if q % 2 else q ** m // 2


def _resolve_map(words: List[QuditString], K: int, symbol_map: Optional[Sequence[str]], q: int) -> List[QuditString]:
    if K > len(words):
        raise CapacityError(f"outer alphabet of size {K} exceeds the {len(words)} available inner strings")
    if symbol_map is None:
        return words[:K]
    chosen = [QuditString.coerce(s, q) for s in symbol_map]
    if len(chosen) != K or len(set(chosen)) != K:
        raise ConstructionError(f"symbol map needs {K} distinct strings", "symbol-map")
    allowed = set(words)
    for s in chosen:
        if s not in allowed:
            raise ConstructionError(f"mapped string {s} is not in the inner set", "symbol-map")
    return chosen


def _substitute(outer: QuantumCode, images: List[QuditString], q: int, m: int) -> Tuple[SparseState, ...]:
    n = outer.n * m
    basis = []
    for state in outer.basis:
        terms = [
            (sum((images[d].digits for d in key.digits), ()), amp)
            for key, amp in state.terms.items()
        ]
        basis.append(SparseState.from_terms(q, n, terms))
    return tuple(basis)


def outer_t(outer: QuantumCode) -> int:
    return int(outer.metadata.get("distance", 1)) - 1


def multi_error_construct(outer: QuantumCode, q: int, m: int,
                          symbol_map: Optional[Sequence[str]] = None) -> QuantumCode:
    """
    Replace every outer site digit with an even-parity string of length m

    Raises:
        CapacityError: if the outer site dimension exceeds |S|
    """
    inner = parity_inner_set(q, m)
    images = _resolve_map(inner.words(), outer.q, symbol_map, q)
    t = outer_t(outer)
    code = QuantumCode(
        q=q,
        n=outer.n * m,
        basis=_substitute(outer, images, q, m),
        claimed_t=t,
        channel_scope=SINGLE_DAMPING_SCOPE,
        provenance="multi",
        name=f"multi(({outer.n * m},{outer.dimension}))_{q}",
        metadata={"parity_block": m, "outer": outer.name, "symbol_map": [str(s) for s in images]},
    )
    code.check_orthonormal()
    logger.info(f"Constructed {code.describe()}")
    return code


# Binary digit -> channel symbols
PATTERN_MAPS: Dict[str, Dict[int, Tuple[int, ...]]] = {
    "L1": {0: (1, 2), 1: (0,)},
    "L2": {0: (0, 1), 1: (2,)},
}

# Single allowed decay per symbol: V (both excited levels to 0) and Lambda (2 to 0 or 1)
PATTERN_TRANSITIONS: Dict[str, Dict[int, Tuple[int, ...]]] = {
    "L1": {0: (), 1: (0,), 2: (0,)},
    "L2": {0: (), 1: (), 2: (0, 1)},
}

PATTERN_CHANNEL = {"L1": "V", "L2": "Lambda"}


def _pattern(pattern: str) -> str:
    key = pattern.upper().replace("ℒ", "L")
    if key not in PATTERN_MAPS:
        raise ValueError(f"unknown pattern '{pattern}'; expected L1 or L2")
    return key


def v_lambda_sets(pattern: str, m: int) -> Tuple[ClassicalCode, ClassicalCode]:
    """Images S0, S1 of the even and odd binary words under the symbol substitution"""
    key = _pattern(pattern)
    if m < 1:
        raise ValueError("m must be at least 1")
    mapping = PATTERN_MAPS[key]
    sets: Tuple[List[QuditString], List[QuditString]] = ([], [])
    for binary in product((0, 1), repeat=m):
        for expanded in product(*(mapping[b] for b in binary)):
            sets[sum(binary) % 2].append(QuditString(expanded, 3))
    return (
        ClassicalCode(3, m, frozenset(sets[0]), name=f"{key}_S0_{m}"),
        ClassicalCode(3, m, frozenset(sets[1]), name=f"{key}_S1_{m}"),
    )


def alpha_beta(m: int) -> Tuple[int, int]:
    """Sizes of S0 and S1 from the recurrence started at alpha_1 = 2, beta_1 = 1"""
    alpha, beta = 2, 1
    for _ in range(m - 1):
        alpha, beta = 2 * alpha + beta, alpha + 2 * beta
    return alpha, beta


def parity_flip_holds(pattern: str, m: int) -> bool:
    """Every single allowed decay moves a string of S_i into S_(1-i)"""
    key = _pattern(pattern)
    s0, s1 = v_lambda_sets(key, m)
    sides = (s0.codewords, s1.codewords)
    for i in (0, 1):
        for w in sides[i]:
            for pos, d in enumerate(w.digits):
                for target in PATTERN_TRANSITIONS[key][d]:
                    digits = list(w.digits)
                    digits[pos] = target
                    if QuditString(tuple(digits), 3) not in sides[1 - i]:
                        return False
    return True


def v_lambda_construct(outer: QuantumCode, pattern: str, m: int,
                       symbol_map: Optional[Sequence[str]] = None) -> QuantumCode:
    """Substitute outer site digits with strings of S0"""
    key = _pattern(pattern)
    s0, _ = v_lambda_sets(key, m)
    images = _resolve_map(s0.words(), outer.q, symbol_map, 3)
    code = QuantumCode(
        q=3,
        n=outer.n * m,
        basis=_substitute(outer, images, 3, m),
        claimed_t=outer_t(outer),
        channel_scope=frozenset({PATTERN_CHANNEL[key]}),
        provenance="vlambda",
        name=f"{key.lower()}(({outer.n * m},{outer.dimension}))_3",
        metadata={"pattern": key, "block": m, "outer": outer.name, "symbol_map": [str(s) for s in images]},
    )
    code.check_orthonormal()
    logger.info(f"Constructed {code.describe()}")
    return code
