"""Constraint specs that modify seed tables (Cauchy data and matter couplings)."""
import copy
import logging
from typing import Callable, Dict, List, Optional, Sequence, Union
from cartan_sub.core.errors import InvalidParametersError, UnknownConstraintError
from cartan_sub.counting.tables import FixedContribution, SeedRow, SeedTable, einstein_character

logger = logging.getLogger(__name__)

RowFilter = Callable[[SeedRow], Optional[SeedRow]]


def _require_table(table: SeedTable, names: Sequence[str], spec: str) -> None:
    if table.name not in names:
        logger.error(f"Constraint {spec} does not apply to {table.name}")
        raise InvalidParametersError(
            table.name, f"constraint '{spec}' applies to {', '.join(names)} only"
        )


def _einstein_block(label: str, cls: str) -> FixedContribution:
    return FixedContribution(
        label=label,
        cls=cls,
        below=1,
        count=einstein_character,
        note="Ricci tensor specified: d(d-3) seeds one rank below the top",
    )


def _given_contraction(row: SeedRow) -> SeedRow:
    """K_iab with its contraction over ab given: a and b not both maximal."""
    if row.head == "K":
        return row.restrict("b<max")
    return row


def ricci_fibre(table: SeedTable) -> SeedTable:
    """Ricci tensor of the fibres and the contraction K_i = K_iaa specified."""
    _require_table(table, ("RiemannianSubmersion",), "ricci_fibre")
    table.rows = [
        _given_contraction(row) for row in table.rows
        if row.label != "S_fibre[a,b,c,d;e]"
    ]
    table.fixed.append(_einstein_block("S_fibre[a,b,c,d;e] (Ricci given)", "a"))
    table.notes.append("lower characters of the Ricci-specified fibre curvature are not enumerated")
    return table


def fibre_metric_given(table: SeedTable) -> SeedTable:
    """Metric of every fibre specified, and the contraction K_i."""
    _require_table(table, ("RiemannianSubmersion",), "fibre_metric_given")
    table.rows = [_given_contraction(row) for row in table.rows if row.head != "S_fibre"]
    return table


def einstein_perfect_fluid(table: SeedTable) -> SeedTable:
    """Born rigid flow sourcing Einstein's equation with a perfect fluid.

    The spatial Einstein equations fix the Ricci tensor of the quotient, the
    time-time equation fixes the density, and the mixed ones remove
    M_ij;k with i and k both maximal. Pressure P enters as a new invariant.
    """
    _require_table(table, ("BornRigid",), "einstein_perfect_fluid")
    if any(row.head == "P" for row in table.rows):
        return table
    rows: List[SeedRow] = []
    for row in table.rows:
        if row.label == "M[i,j;k]":
            rows.append(row.restrict("i<max or k<max"))
        elif row.label == "S[i,j,k,l;m]":
            continue
        else:
            rows.append(row)
    rows.extend([
        SeedRow("P[]", note="pressure"),
        SeedRow("P[;i]", seed=True),
        SeedRow("P[;0]", seed=True),
    ])
    table.rows = rows
    table.fixed.append(_einstein_block("S[i,j,k,l;m] (Ricci given)", "i"))
    return table


def acceleration_and_pressure_given(table: SeedTable) -> SeedTable:
    """Perfect fluid with K_i and P specified as Cauchy data."""
    table = einstein_perfect_fluid(table)
    table.rows = [row for row in table.rows if row.head not in ("K", "P")]
    return table


def equation_of_state(table: SeedTable) -> SeedTable:
    """Perfect fluid with density a given function of pressure: P loses its derivatives."""
    table = einstein_perfect_fluid(table)
    table.rows = [row for row in table.rows if not (row.head == "P" and row.seed)]
    return table


CONSTRAINTS: Dict[str, Callable[[SeedTable], SeedTable]] = {
    "ricci_fibre": ricci_fibre,
    "fibre_metric_given": fibre_metric_given,
    "einstein_perfect_fluid": einstein_perfect_fluid,
    "acceleration_and_pressure_given": acceleration_and_pressure_given,
    "equation_of_state": equation_of_state,
}


def row_filter(fn: RowFilter, label: str = "custom") -> Callable[[SeedTable], SeedTable]:
    """Constraint from a per-row function returning the new row or None to drop it."""
    def apply(table: SeedTable) -> SeedTable:
        table.rows = [row for row in (fn(r) for r in table.rows) if row is not None]
        return table
    apply.__name__ = label
    return apply


def apply_constraints(
    table: SeedTable,
    spec: Union[str, Sequence[str], Callable[[SeedTable], SeedTable]]
) -> SeedTable:
    """
    Constrained copy of a seed table.

    Args:
        table: Table to constrain (left unchanged)
        spec: Constraint name, several names (list or "a+b"), or a row_filter

    Returns:
        New SeedTable with the constraint recorded
    """
    if callable(spec):
        steps = [spec]
        label = getattr(spec, "__name__", "custom")
    else:
        names = spec.split("+") if isinstance(spec, str) else list(spec)
        names = [name.strip().replace("-", "_") for name in names if name.strip()]
        unknown = [name for name in names if name not in CONSTRAINTS]
        if unknown:
            logger.error(f"Unknown constraint '{unknown[0]}'")
            raise UnknownConstraintError(unknown[0])
        steps = [CONSTRAINTS[name] for name in names]
        label = "+".join(names)
    constrained = copy.deepcopy(table)
    for step in steps:
        constrained = step(constrained)
    constrained.constraint = label if table.constraint is None else f"{table.constraint}+{label}"
    constrained.check_ordering()
    logger.debug(f"{table.name}: applied {label}, {len(constrained.rows)} rows")
    return constrained
