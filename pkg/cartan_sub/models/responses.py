"""Report models."""
from typing import Optional, Dict, Any, List
from pydantic import BaseModel, Field

SCHEMA_VERSION = "v1"

PASS = "PASS"
FAILED = "FAILED"


class DiffReport(BaseModel):
    """Derived relations against a catalogued identity list."""
    geometry: str = Field(..., description="Geometry label, e.g. BornRigid(n=4)")
    order: int = Field(..., description="Derivative order both sets were closed to")
    present_in_both: List[str] = Field(default_factory=list)
    catalog_only: List[str] = Field(
        default_factory=list,
        description="Catalogued relations not implied by the derived set"
    )
    derived_only: List[str] = Field(
        default_factory=list,
        description="Derived relations not implied by the catalog"
    )
    incompatible: bool = Field(default=False, description="Derived set reduces to 1 = 0")

    @property
    def is_empty(self) -> bool:
        return not self.catalog_only and not self.derived_only

    @property
    def status(self) -> str:
        return PASS if self.is_empty else FAILED


class CharacterReport(BaseModel):
    """Cartan characters of a seed table."""
    schema_version: str = Field(default=SCHEMA_VERSION)
    geometry: str
    p: Optional[int] = None
    q: Optional[int] = None
    n: Optional[int] = None
    truncation: int = Field(..., description="Derivative order the table was enumerated to")
    constraint: Optional[str] = Field(None, description="Constraint spec applied to the table")
    s: List[int] = Field(..., description="Characters s_1..s_N")
    seeds_by_row: Dict[str, int] = Field(default_factory=dict)
    notes: List[str] = Field(default_factory=list)

    @property
    def top(self) -> int:
        return self.s[-1] if self.s else 0


class LinearSystemModel(BaseModel):
    """Augmented rational system [A | b] over designated unknowns.

    Entries are rationals written as strings ("3/2") so replay never needs
    the symbolic engine.
    """
    label: str = Field(..., description="What the system expresses")
    unknowns: List[str] = Field(..., description="Column names")
    rows: List[List[str]] = Field(
        ..., description="Augmented rows, last entry is the right-hand side"
    )
    pivots: List[int] = Field(
        default_factory=list, description="Pivot columns of the elimination trace"
    )
    forced_zero: List[str] = Field(
        default_factory=list,
        description="Unknowns claimed to vanish in every solution"
    )
    inconsistent: bool = Field(default=False, description="Claim: the system has no solution")
    nonzero: Dict[str, str] = Field(
        default_factory=dict,
        description="Named rational coefficients claimed to be nonzero"
    )


class CertificateBranch(BaseModel):
    """One case of a case-split argument."""
    label: str = Field(..., description="Branch hypothesis, e.g. 'M!=0'")
    hypotheses: List[str] = Field(default_factory=list)
    systems: List[LinearSystemModel] = Field(default_factory=list)
    relations: List[str] = Field(
        default_factory=list,
        description="Symbolic relations established on this branch"
    )
    characters: Optional[List[int]] = None
    conclusion: str = ""
    status: str = PASS


class CertificateModel(BaseModel):
    """Replayable record of a theorem verification."""
    schema_version: str = Field(default=SCHEMA_VERSION)
    scenario: str = Field(..., description="Scenario name, e.g. herglotz-homogeneous")
    dims: Dict[str, int] = Field(default_factory=dict)
    hypotheses: List[str] = Field(default_factory=list)
    branches: List[CertificateBranch] = Field(default_factory=list)
    conclusion: str = ""
    status: str = PASS
    witness: Optional[List[List[float]]] = Field(
        None, description="Counterexample from a numeric oracle"
    )
    notes: List[str] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.status == PASS


class RigidityReport(BaseModel):
    """Result of the antisymmetric rigidity search."""
    p: int
    trials: int
    seed: int
    best_residual: float = Field(..., description="Smallest normalized residual over all restarts")
    enumeration_min_residual: Optional[float] = Field(
        None,
        description="Smallest residual over the structured sign-pattern enumeration"
    )
    enumeration_size: int = 0
    witness: Optional[List[List[float]]] = None
    rotations_checked: int = 0

    @property
    def empty(self) -> bool:
        return self.witness is None


class GridReport(BaseModel):
    """Method-of-characteristics solution summary."""
    step: float
    shape: List[int]
    max_residual: float = Field(..., description="Max PDE residual over the filled grid")
    closure_residual: Optional[float] = Field(
        None,
        description="Max residual of d(cos t theta_0 + sin t theta_1) = 0"
    )
    convergence_order: Optional[float] = None
    reference_error: Optional[float] = Field(
        None,
        description="Max deviation from the reference integration at step/8"
    )
    failed_points: int = 0


class FixtureReport(BaseModel):
    """Invariants sampled from the rotating rigid flow."""
    omega: float
    step: float
    radii: List[float]
    samples: List[Dict[str, Any]] = Field(default_factory=list)
    s1212_min: float = 0.0
    off_pattern_max: float = 0.0
    convergence_ratio: Optional[float] = None


class CheckResult(BaseModel):
    """One line of the acceptance table."""
    name: str
    status: str
    detail: str = ""


class ReportSummary(BaseModel):
    """Aggregated `report --all` output."""
    schema_version: str = Field(default=SCHEMA_VERSION)
    seed: int
    truncation: int
    checks: List[CheckResult] = Field(default_factory=list)

    @property
    def passed(self) -> int:
        return sum(1 for c in self.checks if c.status == PASS)

    @property
    def failed(self) -> int:
        return len(self.checks) - self.passed

    @property
    def ok(self) -> bool:
        return self.failed == 0


class ErrorResponse(BaseModel):
    """Error report."""
    error: Dict[str, Any] = Field(..., description="Error details")

    class Config:
        json_schema_extra = {
            "example": {
                "error": {
                    "message": "Weyl tensor is trivial for n=3",
                    "type": "DimensionGuardError",
                    "details": {"operation": "herglotz-conformal", "dimension": 3}
                }
            }
        }
