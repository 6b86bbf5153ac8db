"""
Explicit encoder for the quinary five-qudit code of distance 3, used as the
outer code of the multi-error constructions
"""
from typing import Dict, Tuple
import logging
import math

import numpy as np

from .exceptions import ParameterRangeError, RegistryLookupError
from .qudit_core import QuantumCode, SparseState

logger = logging.getLogger(__name__)

Q = 5
N = 5
OMEGA = np.exp(2j * np.pi / Q)


def encode_5_1_3_5(k: int) -> SparseState:
    """|k> -> 1/(5 sqrt 5) sum_{p,q,r} w^{k(p+q+r)+pr} |p+q+k, p+r, q+r, p, q>"""
    if not 0 <= k < Q:
        raise ParameterRangeError(f"logical digit {k} outside 0..4")
    norm = 1 / (Q * math.sqrt(Q))
    terms = []
    for p in range(Q):
        for s in range(Q):
            for r in range(Q):
                phase = OMEGA ** ((k * (p + s + r) + p * r) % Q)
                digits = ((p + s + k) % Q, (p + r) % Q, (s + r) % Q, p, s)
                terms.append((digits, norm * phase))
    return SparseState.from_terms(Q, N, terms)


def five_qudit_code() -> QuantumCode:
    return QuantumCode(
        q=Q,
        n=N,
        basis=tuple(encode_5_1_3_5(k) for k in range(Q)),
        claimed_t=1,
        channel_scope=frozenset(),
        provenance="encoder",
        name="[[5,1,3]]_5",
        metadata={"distance": 3},
    )


def unencoded_site(K: int) -> QuantumCode:
    """Single K-level site with no protection"""
    return QuantumCode(
        q=K,
        n=1,
        basis=tuple(SparseState.from_terms(K, 1, [((s,), 1.0)]) for s in range(K)),
        claimed_t=0,
        channel_scope=frozenset(),
        provenance="unencoded",
        name=f"unencoded_{K}",
    )


# Quantum outer codes by key: (builder, distance)
QUANTUM_OUTER: Dict[str, Tuple[object, int]] = {
    "5_1_3_5": (five_qudit_code, 3),
}


def quantum_outer(key: str) -> QuantumCode:
    """Registry lookup; 'trivial_K' gives an unencoded K-level site"""
    if key.startswith("trivial_"):
        try:
            return unencoded_site(int(key.split("_", 1)[1]))
        except ValueError:
            raise RegistryLookupError(f"bad trivial outer key '{key}'")
    if key not in QUANTUM_OUTER:
        raise RegistryLookupError(f"unknown quantum outer code '{key}'; known: {', '.join(QUANTUM_OUTER)}, trivial_K")
    builder, _ = QUANTUM_OUTER[key]
    return builder()
