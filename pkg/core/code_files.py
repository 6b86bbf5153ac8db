"""
JSON file formats for codes and run configurations
"""
from pathlib import Path
from typing import Dict, List, Literal, Optional, Union
import json
import logging

from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from config import settings
from .exceptions import CodeFileError, ConstructionError, DimensionMismatchError
from .qudit_core import ClassicalCode, QuantumCode, QuditString, SparseState

logger = logging.getLogger(__name__)


class Amplitude(BaseModel):
    string: str
    re: float
    im: float = 0.0


class QuantumCodeFile(BaseModel):
    """Lifted codes keep only their transversal; general codes keep amplitudes"""
    q: int = Field(ge=2, le=36)
    n: int = Field(ge=1)
    kind: Literal["self_complementary", "general"]
    tilde_codewords: Optional[List[str]] = None
    basis: Optional[List[List[Amplitude]]] = None
    claimed_t: int = Field(1, ge=0)
    channel_scope: List[str] = Field(default_factory=list)
    provenance: str = "file"
    name: str = ""
    metadata: Dict = Field(default_factory=dict)

    @model_validator(mode="after")
    def _payload_matches_kind(self):
        if self.kind == "self_complementary" and not self.tilde_codewords:
            raise ValueError("self_complementary codes need tilde_codewords")
        if self.kind == "general" and not self.basis:
            raise ValueError("general codes need basis")
        return self


class ClassicalCodeFile(BaseModel):
    """User-supplied outer or inner code"""
    q: int = Field(ge=2, le=36)
    n: int = Field(ge=1)
    codewords: List[str]
    property: Optional[Literal["hamming_d3", "rq_single"]] = None
    name: str = ""

    @field_validator("codewords")
    @classmethod
    def _non_empty(cls, words: List[str]) -> List[str]:
        if not words:
            raise ValueError("codewords must not be empty")
        return words


class RunConfig(BaseModel):
    """Everything a CLI run needs, embedded in reports for provenance"""
    command: str
    channel: Optional[Dict] = None
    code_source: Optional[str] = None
    t: Optional[int] = Field(None, ge=1)
    grid: Optional[List[float]] = None
    pair_filter: str = Field(default_factory=lambda: settings.pair_filter)
    output: Optional[str] = None
    seed: int = Field(default_factory=lambda: settings.default_seed)
    threads: int = Field(default_factory=lambda: settings.threads, ge=1)
    verbosity: int = 0
    version: str = Field(default_factory=lambda: settings.app_version)

    @field_validator("grid")
    @classmethod
    def _grid_decreasing(cls, grid: Optional[List[float]]) -> Optional[List[float]]:
        if grid is None:
            return grid
        if len(grid) < 2 or any(g <= 0 for g in grid) or any(a <= b for a, b in zip(grid, grid[1:])):
            raise ValueError("grid must hold at least two strictly decreasing positive values")
        return grid


def code_to_model(code: QuantumCode) -> QuantumCodeFile:
    common = dict(
        q=code.q, n=code.n, claimed_t=code.claimed_t, channel_scope=sorted(code.channel_scope),
        provenance=code.provenance, name=code.name, metadata=dict(code.metadata),
    )
    if code.classical is not None and code.classical.tilde_transversal is not None:
        tilde = sorted(code.classical.tilde_transversal)
        return QuantumCodeFile(kind="self_complementary", tilde_codewords=[str(u) for u in tilde], **common)
    basis = [
        [Amplitude(string=str(k), re=float(v.real), im=float(v.imag)) for k, v in sorted(state.terms.items())]
        for state in code.basis
    ]
    return QuantumCodeFile(kind="general", basis=basis, **common)


def model_to_code(model: QuantumCodeFile) -> QuantumCode:
    from .constructions import lift

    scope = frozenset(model.channel_scope)
    if model.kind == "self_complementary":
        reps = [QuditString.parse(u, model.q) for u in model.tilde_codewords]
        if any(r.n != model.n for r in reps):
            raise CodeFileError(f"tilde_codewords must have length {model.n}")
        return lift(reps, q=model.q, claimed_t=model.claimed_t, channel_scope=scope,
                    provenance=model.provenance, name=model.name, metadata=model.metadata)
    basis = []
    for j, state in enumerate(model.basis):
        try:
            basis.append(SparseState.from_terms(
                model.q, model.n,
                [(QuditString.parse(a.string, model.q), complex(a.re, a.im)) for a in state],
            ))
        except (ValueError, DimensionMismatchError) as e:
            raise CodeFileError(f"basis[{j}]: {e}")
    return QuantumCode(model.q, model.n, tuple(basis), model.claimed_t, scope, model.provenance,
                       name=model.name, metadata=model.metadata)


def _read_json(path: Union[str, Path]) -> Dict:
    path = Path(path)
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise CodeFileError(f"{path}: file not found")
    except json.JSONDecodeError as e:
        raise CodeFileError(f"{path}: invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}")


def _validation_message(path: Union[str, Path], error: ValidationError) -> str:
    first = error.errors()[0]
    field = ".".join(str(part) for part in first["loc"]) or "<root>"
    return f"{path}: field '{field}': {first['msg']}"


def save_code(code: QuantumCode, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(code_to_model(code).model_dump_json(indent=2), encoding="utf-8")
    logger.info(f"Wrote {code.describe()} to {path}")
    return path


def load_quantum_code(path: Union[str, Path]) -> QuantumCode:
    data = _read_json(path)
    try:
        model = QuantumCodeFile.model_validate(data)
    except ValidationError as e:
        raise CodeFileError(_validation_message(path, e))
    try:
        code = model_to_code(model)
        code.check_orthonormal()
    except (ValueError, ConstructionError) as e:
        raise CodeFileError(f"{path}: {e}")
    return code


def load_code_file(path: Union[str, Path]) -> Union[QuantumCode, ClassicalCodeFile]:
    """
    Read either a quantum code file or a classical outer/inner code file

    Raises:
        CodeFileError: naming the offending field or JSON position
    """
    data = _read_json(path)
    if isinstance(data, dict) and "codewords" in data:
        try:
            return ClassicalCodeFile.model_validate(data)
        except ValidationError as e:
            raise CodeFileError(_validation_message(path, e))
    return load_quantum_code(path)


def classical_from_file(model: ClassicalCodeFile) -> ClassicalCode:
    try:
        code = ClassicalCode.from_words(model.q, model.codewords, name=model.name or "file", n=model.n)
    except (ValueError, DimensionMismatchError) as e:
        raise CodeFileError(f"codewords: {e}")
    return code


def write_report(payload: Dict, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, default=str), encoding="utf-8")
    return path
