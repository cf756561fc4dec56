"""Seed enumeration and Cartan characters."""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from typing import Dict, List, Optional, Tuple
from cartan_sub.config import settings
from cartan_sub.counting.tables import SeedRow, SeedTable
from cartan_sub.models.responses import CharacterReport

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SeedInstance:
    """A concrete seed: row label and index values (slots, then derivatives)."""

    row: str
    head: str
    indices: Tuple[int, ...]
    derivs: Tuple[int, ...]

    @property
    def last_index(self) -> Optional[int]:
        return self.derivs[-1] if self.derivs else None

    @property
    def name(self) -> str:
        slots = ",".join(str(i) for i in self.indices)
        derivs = ",".join(str(i) for i in self.derivs)
        return f"{self.head}[{slots};{derivs}]" if derivs else f"{self.head}[{slots}]"


@dataclass(frozen=True)
class CharacterVector:
    """Characters s_1..s_N of a seed table at concrete dimensions."""

    s: Tuple[int, ...]
    dims: Dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if any(value < 0 for value in self.s):
            raise ValueError(f"Negative character in {self.s}")

    @property
    def top(self) -> int:
        return self.s[-1] if self.s else 0

    def character(self, k: int) -> int:
        """s_k, 1-based; zero outside 1..N."""
        return self.s[k - 1] if 1 <= k <= len(self.s) else 0

    def __len__(self) -> int:
        return len(self.s)


def _row_instances(table: SeedTable, row: SeedRow, classes) -> List[SeedInstance]:
    instances = []
    n_slots = len(row.slot_letters)
    for values in product(*table.row_values(row, classes)):
        if table.satisfies(row, values, classes):
            slots, derivs = tuple(values[:n_slots]), tuple(values[n_slots:])
            instances.append(SeedInstance(row.label, row.head, slots, derivs))
    return instances


def enumerate_seeds(
    table: SeedTable,
    p: Optional[int] = None,
    q: Optional[int] = None,
    n: Optional[int] = None,
    seeds_only: bool = True
) -> List[SeedInstance]:
    """
    Concrete instances satisfying each row's condition.

    Args:
        table: Seed table
        p, q, n: Dimensions in the table's parameters
        seeds_only: Only rows marked as involutive seeds

    Returns:
        Instances in row order, index tuples in lexicographic order
    """
    dims = table.dims(p=p, q=q, n=n)
    classes = table.classes(dims)
    rows = [row for row in table.rows if row.seed or not seeds_only]
    workers = max(1, min(settings.threads, len(rows)))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        per_row = list(pool.map(lambda row: _row_instances(table, row, classes), rows))
    instances = [instance for chunk in per_row for instance in chunk]
    logger.debug(f"{table.name}{dims}: {len(instances)} instances from {len(rows)} rows")
    return instances


def cartan_characters(
    table: SeedTable,
    p: Optional[int] = None,
    q: Optional[int] = None,
    n: Optional[int] = None
) -> CharacterVector:
    """
    Count seeds by the rank of their last derivative index.

    Args:
        table: Seed table in involutive ordering
        p, q, n: Dimensions in the table's parameters

    Returns:
        CharacterVector; s_k counts seeds whose last index has rank k,
        plus formula-counted blocks
    """
    table.check_ordering()
    dims = table.dims(p=p, q=q, n=n)
    classes = table.classes(dims)
    size = table.rank_count(dims)
    counts = [0] * size
    for instance in enumerate_seeds(table, **dims):
        if instance.last_index is not None:
            counts[instance.last_index - 1] += 1
    for block in table.fixed:
        cls = classes[block.cls]
        rank = cls.maximum - block.below
        amount = block.count(cls.extent)
        if amount and cls.offset < rank <= cls.maximum:
            counts[rank - 1] += amount
    vector = CharacterVector(tuple(counts), dims)
    logger.info(f"{table.name}{dims}: s = {list(vector.s)}")
    return vector


def seeds_by_row(table: SeedTable, **dims: Optional[int]) -> Dict[str, int]:
    counts: Dict[str, int] = {}
    for instance in enumerate_seeds(table, **dims):
        counts[instance.row] = counts.get(instance.row, 0) + 1
    for block in table.fixed:
        cls = table.classes(table.dims(**dims))[block.cls]
        counts[block.label] = block.count(cls.extent)
    return counts


def character_report(
    table: SeedTable,
    p: Optional[int] = None,
    q: Optional[int] = None,
    n: Optional[int] = None
) -> CharacterReport:
    """Characters with per-row seed counts, ready for JSON or markdown."""
    vector = cartan_characters(table, p=p, q=q, n=n)
    dims = vector.dims
    notes = list(table.notes)
    if len(vector) > 1:
        notes.append(
            f"lower characters depend on the truncation order ({table.truncation}) of the table"
        )
    return CharacterReport(
        geometry=table.name,
        p=dims.get("p"),
        q=dims.get("q"),
        n=dims.get("n"),
        truncation=table.truncation,
        constraint=table.constraint,
        s=list(vector.s),
        seeds_by_row=seeds_by_row(table, **dims),
        notes=notes,
    )
