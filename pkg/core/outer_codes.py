"""
Outer codes for generalized concatenation

Distance-3 codes over GF(q) come from Hamming parity checks: the columns
are projective points (unit vectors first) and the code is shortened to the
requested length. Lengths up to 2 give the trivial code and length 3 the
repetition code.
"""
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import List, Optional, Tuple
import logging

import galois
import numpy as np

from .asym_metrics import is_hamming_distance_at_least, is_rq_single_corrector
from .exceptions import ConstructionError, RegistryLookupError
from .qudit_core import ClassicalCode, QuditString

logger = logging.getLogger(__name__)

PROPERTIES = ("hamming_d3", "rq_single", "quantum_distance_t_plus_1")


@dataclass(frozen=True)
class OuterCodeEntry:
    q_out: int
    length: int
    code: ClassicalCode
    required_property: str
    source: str = "registry"

    @property
    def size(self) -> int:
        return len(self.code)

    @property
    def dimension(self) -> float:
        """log_q of the number of codewords"""
        return float(np.log(self.size) / np.log(self.q_out))


def hamming_redundancy(q: int, length: int) -> int:
    """Fewest parity rows r with (q^r - 1)/(q - 1) >= length"""
    r = 1
    while (q ** r - 1) // (q - 1) < length:
        r += 1
    return r


def projective_columns(q: int, r: int) -> List[Tuple[int, ...]]:
    """Points of PG(r-1, q) as vectors with leading nonzero entry 1, unit vectors first"""
    units = [tuple(1 if i == j else 0 for i in range(r)) for j in range(r)]
    others = []
    for v in product(range(q), repeat=r):
        nonzero = [x for x in v if x]
        if nonzero and nonzero[0] == 1 and v not in units:
            others.append(v)
    return units + others


def shortened_hamming(q: int, length: int) -> ClassicalCode:
    """Distance-3 code of the given length from a shortened GF(q) Hamming code"""
    GF = galois.GF(q)
    r = hamming_redundancy(q, length)
    columns = projective_columns(q, r)[:length]
    H = GF(np.array(columns, dtype=int).T)
    G = H.null_space()
    k = G.shape[0]
    messages = GF(np.array(list(product(range(q), repeat=k)), dtype=int))
    codewords = np.asarray(messages @ G, dtype=int)
    logger.debug(f"Shortened Hamming [{length},{k},3]_{q} with {r} parity rows")
    return ClassicalCode(q, length, frozenset(QuditString(tuple(w), q) for w in codewords),
                         name=f"hamming[{length},{k},3]_{q}")


def trivial_code(q: int, length: int) -> ClassicalCode:
    return ClassicalCode(q, length, frozenset([QuditString((0,) * length, q)]), name=f"trivial[{length},0]_{q}")


def repetition_code(q: int, length: int) -> ClassicalCode:
    words = [QuditString((a,) * length, q) for a in range(q)]
    return ClassicalCode(q, length, frozenset(words), name=f"repetition[{length},1,{length}]_{q}")


def check_property(code: ClassicalCode, required_property: str) -> bool:
    if required_property == "hamming_d3":
        return is_hamming_distance_at_least(code, 3)
    if required_property == "rq_single":
        return is_rq_single_corrector(code)
    raise ConstructionError(f"property '{required_property}' cannot be checked on a classical code")


def make_entry(code: ClassicalCode, required_property: str, source: str) -> OuterCodeEntry:
    """Wrap a classical outer code, verifying its property"""
    if not check_property(code, required_property):
        raise ConstructionError(f"outer code '{code.name}' fails its required property", required_property)
    return OuterCodeEntry(code.q, code.n, code, required_property, source)


@lru_cache(maxsize=None)
def outer_registry(q: int, length: int, required_property: str = "hamming_d3") -> OuterCodeEntry:
    """
    Largest built-in outer code of the given length

    Raises:
        RegistryLookupError: for alphabets that are not prime powers or
            unknown properties
    """
    if required_property not in ("hamming_d3", "rq_single"):
        raise RegistryLookupError(
            f"no built-in classical outer code with property '{required_property}'; supply a code file"
        )
    if length < 1:
        raise RegistryLookupError("outer length must be positive")
    if length <= 2:
        code = trivial_code(q, length)
    elif length == 3:
        code = repetition_code(q, length)
    else:
        if not galois.is_prime_power(q):
            raise RegistryLookupError(f"q={q} is not a prime power; supply an outer code file")
        code = shortened_hamming(q, length)
    # Hamming distance 3 also separates the R_q balls
    entry = make_entry(code, required_property, "registry")
    logger.info(f"Outer code {code.name}: {entry.size} words, property {required_property}")
    return entry


def outer_from_file(code: ClassicalCode, required_property: Optional[str]) -> OuterCodeEntry:
    return make_entry(code, required_property or "hamming_d3", "file")
