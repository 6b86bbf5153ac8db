"""
Registry of inner codes for generalized concatenation

Each entry is a family of q pairwise disjoint self-complementary 1-codes of
a short length. Entry i is the code substituted for outer symbol i. Linear
families are expanded from Z_q generators, nonlinear ones come from embedded
transversals. Every entry is re-verified when it is first built.
"""
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Sequence, Set, Tuple
import logging

from .asym_metrics import are_disjoint, induced_transitions, is_self_complementary, is_t_code, \
    transitions_are_neighbouring
from .exceptions import ConstructionError, RegistryLookupError
from .qudit_core import ClassicalCode, QuditString, orbit_transversal, relift

logger = logging.getLogger(__name__)

# Transversal of an 11-orbit ternary length-5 code (33 words once lifted)
TERNARY_33_TILDE = [
    "00000", "00011", "00112", "00220", "01021", "01110",
    "01202", "02022", "02101", "02120", "02211",
]

# Transversals of five disjoint quinary length-3 codes of 20 words each
QUINARY_20_TILDES = [
    ["000", "002", "020", "022"],
    ["001", "004", "021", "024"],
    ["003", "011", "031", "033"],
    ["010", "023", "041", "043"],
    ["012", "014", "032", "034"],
]

# Transversal of a quinary length-5 code with 59 orbits (295 words once lifted)
QUINARY_295_TILDE = [
    "00000", "00202", "01241", "02200", "03110",
    "00002", "00220", "01404", "02203", "03212",
    "00013", "00223", "01412", "02211", "03231",
    "00020", "00244", "02000", "02223", "03233",
    "00031", "00303", "02002", "02314", "03300",
    "00033", "00311", "02013", "02321", "03303",
    "00044", "00314", "02021", "02332", "03342",
    "00111", "00330", "02032", "02424", "03410",
    "00114", "00332", "02034", "02440", "03412",
    "00122", "00424", "02114", "03041", "03431",
    "00141", "00442", "02130", "03044", "04234",
    "00200", "01133", "02143", "03102",
]

LINEAR_GENERATORS: Dict[Tuple[int, int], List[str]] = {
    (3, 5): ["00011", "01201", "11111"],
    (5, 5): ["00011", "00102", "11111"],
    (4, 3): ["111", "002", "020"],
}


@dataclass(frozen=True)
class InnerCodeEntry:
    """Disjoint self-complementary 1-codes indexed by outer symbol"""
    q: int
    length: int
    family: str
    codes: Tuple[ClassicalCode, ...]
    induced_channel: str  # "symmetric" or "R_q"

    @property
    def code_size(self) -> int:
        return len(self.codes[0])

    def __len__(self) -> int:
        return len(self.codes)


def zq_span(q: int, generators: Sequence[str]) -> ClassicalCode:
    """All Z_q-linear combinations of the generators"""
    gens = [QuditString.parse(g, q).digits for g in generators]
    n = len(gens[0])
    words: Set[Tuple[int, ...]] = {tuple([0] * n)}
    frontier = list(words)
    while frontier:
        nxt = []
        for w in frontier:
            for g in gens:
                s = tuple((a + b) % q for a, b in zip(w, g))
                if s not in words:
                    words.add(s)
                    nxt.append(s)
        frontier = nxt
    return ClassicalCode(q, n, frozenset(QuditString(w, q) for w in words))


def _last_digit_cosets(base: ClassicalCode, name: str) -> List[ClassicalCode]:
    offsets = [[0] * (base.n - 1) + [i] for i in range(base.q)]
    return [orbit_transversal(base.shifted_by(off, name=f"{name}/{i}")) for i, off in enumerate(offsets)]


def _length2_cosets(q: int) -> List[ClassicalCode]:
    diagonal = ClassicalCode.from_words(q, [(a, a) for a in range(q)])
    return [orbit_transversal(diagonal.shifted_by([0, i], name=f"length2_cosets/{i}")) for i in range(q)]


def _q4_length3() -> List[ClassicalCode]:
    base = zq_span(4, LINEAR_GENERATORS[(4, 3)])
    offsets = ["000", "001", "010", "100"]
    return [
        orbit_transversal(base.shifted_by(QuditString.parse(o, 4).digits, name=f"len3_q4/{i}"))
        for i, o in enumerate(offsets)
    ]


def _verify_entry(entry: InnerCodeEntry) -> None:
    for code in entry.codes:
        if not is_self_complementary(code):
            raise ConstructionError(f"inner code '{code.name}' is not self-complementary", "self-complementary")
        report = is_t_code(code, 1)
        if not report.is_t_code:
            raise ConstructionError(
                f"inner code '{code.name}' has min asymmetric distance {report.min_delta}", "1-code"
            )
    if not are_disjoint(entry.codes):
        raise ConstructionError(f"inner family '{entry.family}' has overlapping members", "disjointness")
    sizes = {len(c) for c in entry.codes}
    if len(sizes) != 1:
        raise ConstructionError(f"inner family '{entry.family}' mixes code sizes {sorted(sizes)}", "uniform-size")


FAMILIES: Dict[str, Tuple[int, str]] = {
    # family -> (length, description)
    "length2_cosets": (2, "diagonal {aa} and its cosets + (0, i), any q"),
    "len3_q4": (3, "Z_4 span of {111, 002, 020} and cosets"),
    "len3_qgt5": (3, "Z_q span of {111, 013} and cosets + 00i, q > 5"),
    "len5_linear_q3": (5, "Z_3 span of {00011, 01201, 11111} and cosets + 0000i"),
    "len5_linear_q5": (5, "Z_5 span of {00011, 00102, 11111} and cosets + 0000i"),
    "len5_nonlinear_q3_33": (5, "11-orbit ternary code and cosets + 0000i"),
    "len3_nonlinear_q5_20": (3, "five 4-orbit quinary codes"),
    "len5_nonlinear_q5_295": (5, "59-orbit quinary code and cosets + 0000i"),
}


def _build(family: str, q: int) -> List[ClassicalCode]:
    if family == "length2_cosets":
        return _length2_cosets(q)
    if family == "len3_q4" and q == 4:
        return _q4_length3()
    if family == "len3_qgt5" and q > 5:
        return _last_digit_cosets(zq_span(q, ["111", "013"]), family)
    if family == "len5_linear_q3" and q == 3:
        return _last_digit_cosets(zq_span(3, LINEAR_GENERATORS[(3, 5)]), family)
    if family == "len5_linear_q5" and q == 5:
        return _last_digit_cosets(zq_span(5, LINEAR_GENERATORS[(5, 5)]), family)
    if family == "len5_nonlinear_q3_33" and q == 3:
        return _last_digit_cosets(relift(3, TERNARY_33_TILDE), family)
    if family == "len3_nonlinear_q5_20" and q == 5:
        return [relift(5, tilde, name=f"{family}/{i}") for i, tilde in enumerate(QUINARY_20_TILDES)]
    if family == "len5_nonlinear_q5_295" and q == 5:
        return _last_digit_cosets(relift(5, QUINARY_295_TILDE), family)
    raise RegistryLookupError(f"inner family '{family}' is not available for q={q}")


@lru_cache(maxsize=None)
def inner_code_family(family: str, q: int) -> InnerCodeEntry:
    """Build, verify and cache one inner family"""
    if family not in FAMILIES:
        raise RegistryLookupError(f"unknown inner family '{family}'; known: {', '.join(FAMILIES)}")
    codes = _build(family, q)
    transitions = induced_transitions(codes)
    induced = "R_q" if q > 3 and transitions_are_neighbouring(transitions, q) else "symmetric"
    entry = InnerCodeEntry(q, FAMILIES[family][0], family, tuple(codes), induced)
    _verify_entry(entry)
    logger.info(f"Inner family {family} (q={q}): {len(codes)} codes of size {entry.code_size}, induced {induced}")
    return entry


def supported_families(q: int, m: int) -> List[str]:
    """Families of length m available for alphabet size q"""
    options = {
        2: ["length2_cosets"],
        3: ["len3_q4"] if q == 4 else ["len3_qgt5"] if q > 5 else ["len3_nonlinear_q5_20"] if q == 5 else [],
        5: {3: ["len5_linear_q3", "len5_nonlinear_q3_33"],
            5: ["len5_linear_q5", "len5_nonlinear_q5_295"]}.get(q, []),
    }
    return options.get(m, [])


def inner_registry(q: int, m: int, nonlinear: bool = False) -> InnerCodeEntry:
    """
    Registry lookup by alphabet size and length

    Raises:
        RegistryLookupError: when no family of that length exists for q
    """
    families = supported_families(q, m)
    if not families:
        supported = ", ".join(f"{f} (length {FAMILIES[f][0]})" for f in FAMILIES)
        raise RegistryLookupError(f"no inner code of length {m} for q={q}; families: {supported}")
    if len(families) > 1:
        chosen = [f for f in families if ("nonlinear" in f) == nonlinear]
        family = chosen[0]
    else:
        family = families[0]
    return inner_code_family(family, q)


