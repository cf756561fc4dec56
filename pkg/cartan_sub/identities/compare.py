"""Diff of derived relations against the identity catalogs."""
import logging
from typing import List, Optional
from cartan_sub.core.errors import InvalidParametersError
from cartan_sub.geometries.builtins import resolve_name
from cartan_sub.identities.catalog import catalog
from cartan_sub.identities.relations import RelationSet
from cartan_sub.models.responses import DiffReport

logger = logging.getLogger(__name__)


def _not_implied(relations: RelationSet, by: RelationSet) -> List[str]:
    reducer = by.reducer()
    return [str(r) for r in relations.sorted() if not reducer.is_zero(r.expr)]


def compare_with_catalog(derived: RelationSet, catalog_name: Optional[str] = None) -> DiffReport:
    """
    Compare a derived relation set with the catalogued identities.

    Both sides are closed under differentiation to the same order; a
    relation counts as shared when it reduces to zero modulo the other side.

    Args:
        derived: Output of derive_identities
        catalog_name: Catalog to compare with (the geometry's own by default)

    Returns:
        DiffReport; empty catalog_only and derived_only means agreement
    """
    geom = derived.geometry
    if geom is None:
        if len(derived):
            raise InvalidParametersError(derived.name, "relation set carries no geometry")
        return DiffReport(geometry=derived.name or "empty", order=0)

    if catalog_name is not None and resolve_name(catalog_name) != geom.name:
        logger.error(f"Catalog {catalog_name} does not describe {geom.label}")
        raise InvalidParametersError(catalog_name, f"relations were derived for {geom.name}")

    order = derived.order if derived.order is not None else geom.vocabulary.truncation
    catalogued = catalog(geom, order)

    catalog_only = _not_implied(catalogued, derived)
    derived_only = _not_implied(derived, catalogued)
    missing = set(derived_only)
    present = [str(r) for r in derived.sorted() if str(r) not in missing]

    report = DiffReport(
        geometry=geom.label,
        order=order,
        present_in_both=present,
        catalog_only=catalog_only,
        derived_only=derived_only,
        incompatible=bool(derived.incompatible),
    )
    if report.is_empty:
        logger.info(f"{geom.label}: derived relations match the catalog ({len(present)} relations)")
    else:
        logger.warning(
            f"{geom.label}: {len(catalog_only)} catalog-only and "
            f"{len(derived_only)} derived-only relations"
        )
    return report
