"""Request models: run configuration and geometry definition files."""
from typing import Optional, Dict, Any, List, Literal
from pydantic import BaseModel, Field, field_validator
from cartan_sub.config import settings


class RunConfig(BaseModel):
    """One CLI invocation, with settings defaults filled in."""
    command: str = Field(..., description="CLI verb, e.g. identities or dof")
    geometry: Optional[str] = Field(None, description="Built-in name/alias or definition file path")
    p: Optional[int] = Field(None, ge=0, description="Base dimension")
    q: Optional[int] = Field(None, ge=0, description="Fibre dimension")
    n: Optional[int] = Field(None, ge=1, description="Total dimension")
    truncation: int = Field(default_factory=lambda: settings.truncation_order, ge=1)
    constraint: Optional[str] = Field(None, description="Constraint spec for dof")
    output_format: str = Field(default_factory=lambda: settings.output_format)
    output: Optional[str] = Field(None, description="Report file path; stdout when omitted")
    seed: int = Field(default_factory=lambda: settings.seed)
    options: Dict[str, Any] = Field(default_factory=dict, description="Verb-specific flags")

    @field_validator("output_format", mode="before")
    @classmethod
    def parse_output_format(cls, v):
        """Normalize the report format."""
        value = str(v or "json").strip().lower()
        if value not in ("json", "md"):
            raise ValueError(f"output_format must be 'json' or 'md', got '{v}'")
        return value

    @property
    def dims(self) -> Dict[str, int]:
        return {k: v for k, v in (("p", self.p), ("q", self.q), ("n", self.n)) if v is not None}

    class Config:
        json_schema_extra = {
            "example": {
                "command": "dof",
                "geometry": "riem-sub",
                "p": 2,
                "q": 3,
                "truncation": 2,
                "output_format": "json",
                "seed": 42
            }
        }


class IndexClassSpec(BaseModel):
    """Index range offset+1 .. offset+extent."""
    name: str = Field(..., description="Class name, e.g. 'i', 'a' or '0'")
    extent: int = Field(..., ge=0)
    offset: int = Field(default=0, ge=0)


class GeneratorSpec(BaseModel):
    """One coframe generator."""
    family: str
    indices: List[int] = Field(default_factory=list)
    kind: Literal["horizontal", "vertical", "scale"] = "horizontal"

    @property
    def name(self) -> str:
        if not self.indices:
            return self.family
        return f"{self.family}[{','.join(str(i) for i in self.indices)}]"


class InvariantSpec(BaseModel):
    """Declared invariant head."""
    head: str
    slots: List[str] = Field(default_factory=list, description="Index class of each slot")
    symmetry: Literal["none", "antisym_pair", "sym_pair", "riemann", "pair_antisym"] = "none"
    weight: int = 0
    description: str = ""


class TermSpec(BaseModel):
    """coefficient * product(factors) * wedge(generators)."""
    coefficient: str = Field(default="1", description="Rational, e.g. '-1/2'")
    factors: List[str] = Field(
        default_factory=list, description="Invariant names such as 'M[1,2;3]'"
    )
    wedge: List[str] = Field(default_factory=list, description="Generator names")


class ScalarSpec(BaseModel):
    """Additional scalar function with a given differential."""
    name: str
    differential: List[TermSpec] = Field(default_factory=list)


class GeometryDefinition(BaseModel):
    """Structural equations of a geometry, as read from a definition file."""
    name: str
    reductive: bool = Field(
        default=True,
        description="False for geometries without covariant derivatives; rejected at load"
    )
    params: Dict[str, int] = Field(default_factory=dict)
    truncation: Optional[int] = Field(None, ge=1)
    index_classes: List[IndexClassSpec]
    deriv_classes: Optional[List[str]] = None
    generators: List[GeneratorSpec]
    frame: Dict[str, str] = Field(..., description="Derivative index value -> horizontal generator")
    connections: Dict[str, str] = Field(
        default_factory=dict, description="Index class -> connection family"
    )
    scale: Optional[str] = None
    check_vertical: bool = True
    invariants: List[InvariantSpec] = Field(default_factory=list)
    d_rules: Dict[str, List[TermSpec]] = Field(..., description="Generator name -> 2-form terms")
    relations: List[List[TermSpec]] = Field(
        default_factory=list, description="Defining relations, sum = 0"
    )
    scalars: List[ScalarSpec] = Field(default_factory=list)
    builtin: Optional[str] = Field(None, description="Built-in the definition must reproduce")
    description: str = ""

    class Config:
        json_schema_extra = {
            "example": {
                "name": "BornRigid",
                "params": {"n": 2},
                "index_classes": [
                    {"name": "i", "extent": 1, "offset": 0},
                    {"name": "0", "extent": 1, "offset": 1}
                ],
                "generators": [
                    {"family": "omega", "indices": [1]},
                    {"family": "omega0"}
                ],
                "frame": {"1": "omega[1]", "2": "omega0"},
                "invariants": [{"head": "K", "slots": ["i"]}],
                "d_rules": {
                    "omega[1]": [],
                    "omega0": [{
                        "coefficient": "-1",
                        "factors": ["K[1]"],
                        "wedge": ["omega0", "omega[1]"],
                    }]
                }
            }
        }
