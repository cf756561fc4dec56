"""Certificates: replayable linear-elimination records of theorem verifications.

Building a certificate uses the symbolic engine; replaying one does not.
Replay only needs fractions.Fraction row reduction over the embedded
augmented matrices, so a certificate file can be checked on its own.
"""
import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union
import numpy as np
import sympy
from sympy import Expr
from cartan_sub.core.errors import CertificateReplayError, InvalidParametersError
from cartan_sub.models.responses import (
    FAILED,
    PASS,
    CertificateBranch,
    CertificateModel,
    LinearSystemModel,
)
from cartan_sub.utils.converters import to_json, write_text
from cartan_sub.utils.linalg import eliminate, linear_rows

logger = logging.getLogger(__name__)

PIVOT_PREFIX = "pivot on "


def _rational_text(value) -> str:
    value = sympy.nsimplify(value) if not isinstance(value, (int, Fraction)) else value
    return str(value)


def linear_system(
    label: str,
    equations: Sequence[Expr],
    unknowns: Sequence[Expr],
    nonzero: Optional[Dict[str, Expr]] = None
) -> LinearSystemModel:
    """
    Record a rational linear system with its elimination trace.

    Args:
        label: What the system expresses
        equations: Expressions set to zero, linear in the unknowns with rational coefficients
        unknowns: Unknown symbols or monomials (columns)
        nonzero: Named rational coefficients the argument relies on

    Returns:
        LinearSystemModel with augmented rows, pivots, forced-zero unknowns
        and the inconsistency flag
    """
    unknowns = list(unknowns)
    rows, remainders = linear_rows(equations, unknowns, allow_constant_terms=True)
    augmented: List[List[str]] = []
    for row, remainder in zip(rows, remainders):
        if remainder.free_symbols:
            logger.error(f"{label}: right-hand side {remainder} is not rational")
            raise InvalidParametersError(label, f"non-rational right-hand side {remainder}")
        if not row and remainder == 0:
            continue
        line = [_rational_text(row.get(k, 0)) for k in range(len(unknowns))]
        line.append(_rational_text(-remainder))
        augmented.append(line)

    elimination = eliminate(equations, unknowns)
    inconsistent = any(not c.free_symbols and c != 0 for c in elimination.conditions)
    forced = [] if inconsistent else [str(u) for u in elimination.forced_zero()]
    logger.debug(
        f"{label}: {len(augmented)} rows, {len(unknowns)} unknowns, "
        f"{len(forced)} forced zero"
    )
    return LinearSystemModel(
        label=label,
        unknowns=[str(u) for u in unknowns],
        rows=augmented,
        pivots=list(elimination.pivots),
        forced_zero=forced,
        inconsistent=inconsistent,
        nonzero={k: _rational_text(v) for k, v in (nonzero or {}).items()},
    )


def all_forced(system: LinearSystemModel) -> bool:
    """Every unknown of the system vanishes in every solution."""
    return set(system.forced_zero) == set(system.unknowns)


def pivot_coefficients(system: LinearSystemModel) -> Dict[str, Fraction]:
    """Leading entries met by forward elimination of the recorded rows, keyed by unknown."""
    ncols = len(system.unknowns)
    matrix = _parse_rows(system)
    found: Dict[str, Fraction] = {}
    r = 0
    for c in range(ncols):
        pivot = next((k for k in range(r, len(matrix)) if matrix[k][c] != 0), None)
        if pivot is None:
            continue
        matrix[r], matrix[pivot] = matrix[pivot], matrix[r]
        lead = matrix[r][c]
        found[system.unknowns[c]] = lead
        for k in range(r + 1, len(matrix)):
            if matrix[k][c] != 0:
                factor = matrix[k][c] / lead
                matrix[k] = [a - factor * b for a, b in zip(matrix[k], matrix[r])]
        r += 1
        if r == len(matrix):
            break
    return found


def record_pivots(system: LinearSystemModel) -> LinearSystemModel:
    """Store the elimination pivots as the coefficients the argument divides by."""
    system.nonzero = {
        f"{PIVOT_PREFIX}{unknown}": str(value)
        for unknown, value in pivot_coefficients(system).items()
    }
    return system


def rational_sample(
    symbols: Sequence[sympy.Symbol],
    seed: int,
    low: int = -9,
    high: int = 9
) -> Dict[sympy.Symbol, sympy.Rational]:
    """Nonzero random rationals (integer over a small denominator) per symbol."""
    rng = np.random.default_rng(seed)
    values: Dict[sympy.Symbol, sympy.Rational] = {}
    for sym in sorted(symbols, key=lambda s: s.name):
        numerator = 0
        while numerator == 0:
            numerator = int(rng.integers(low, high + 1))
        denominator = int(rng.integers(1, 5))
        values[sym] = sympy.Rational(numerator, denominator)
    return values


# Standalone replay

def _parse_rows(system: LinearSystemModel) -> List[List[Fraction]]:
    width = len(system.unknowns) + 1
    rows = []
    for k, row in enumerate(system.rows):
        if len(row) != width:
            raise ValueError(
                f"row {k} of '{system.label}' has {len(row)} entries, expected {width}"
            )
        rows.append([Fraction(entry) for entry in row])
    return rows


def fraction_rref(rows: List[List[Fraction]], ncols: int) -> Tuple[List[List[Fraction]], List[int]]:
    """Reduced row echelon form over the first ncols columns (augmented column carried along)."""
    matrix = [list(row) for row in rows]
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((k for k in range(r, len(matrix)) if matrix[k][c] != 0), None)
        if pivot is None:
            continue
        matrix[r], matrix[pivot] = matrix[pivot], matrix[r]
        lead = matrix[r][c]
        matrix[r] = [v / lead for v in matrix[r]]
        for k in range(len(matrix)):
            if k != r and matrix[k][c] != 0:
                factor = matrix[k][c]
                matrix[k] = [a - factor * b for a, b in zip(matrix[k], matrix[r])]
        pivots.append(c)
        r += 1
        if r == len(matrix):
            break
    return matrix, pivots


def replay_system(system: LinearSystemModel) -> List[str]:
    """
    Re-derive the claims of one system with exact fractions.

    Args:
        system: Recorded system

    Returns:
        Problems found; empty when every claim holds
    """
    problems: List[str] = []
    ncols = len(system.unknowns)
    try:
        rows = _parse_rows(system)
    except (ValueError, ZeroDivisionError) as e:
        return [f"{system.label}: unreadable rows ({e})"]
    reduced, pivots = fraction_rref(rows, ncols)

    inconsistent = any(
        all(v == 0 for v in row[:ncols]) and row[ncols] != 0 for row in reduced
    )
    if inconsistent != system.inconsistent:
        problems.append(
            f"{system.label}: inconsistency claim {system.inconsistent} does not replay"
        )
    if system.pivots and list(system.pivots) != pivots:
        problems.append(f"{system.label}: pivots {system.pivots} replay as {pivots}")

    if not inconsistent:
        pivot_set = set(pivots)
        forced = set()
        for row, pivot in zip(reduced, pivots):
            touches_free = any(row[c] != 0 for c in range(ncols) if c not in pivot_set)
            if not touches_free and row[ncols] == 0:
                forced.add(system.unknowns[pivot])
        unsupported = [u for u in system.forced_zero if u not in forced]
        if unsupported:
            problems.append(f"{system.label}: {unsupported} are not forced to zero")

    leads = pivot_coefficients(system)
    for name, value in system.nonzero.items():
        try:
            if Fraction(value) == 0:
                problems.append(f"{system.label}: coefficient {name} is zero")
        except (ValueError, ZeroDivisionError):
            problems.append(f"{system.label}: coefficient {name} = {value} is not rational")
        if name.startswith(PIVOT_PREFIX):
            unknown = name[len(PIVOT_PREFIX):]
            if str(leads.get(unknown)) != str(value):
                problems.append(
                    f"{system.label}: {name} = {value} replays as {leads.get(unknown)}"
                )
    return problems


def replay_certificate(certificate: CertificateModel) -> List[str]:
    """All replay problems of a certificate, including status bookkeeping."""
    problems: List[str] = []
    for branch in certificate.branches:
        for system in branch.systems:
            problems.extend(f"[{branch.label}] {p}" for p in replay_system(system))
    if certificate.status == PASS and any(b.status != PASS for b in certificate.branches):
        problems.append("certificate marked PASS with a failed branch")
    if certificate.status == PASS and certificate.witness is not None:
        problems.append("certificate marked PASS but carries a counterexample witness")
    return problems


def load_certificate(path: Union[str, Path]) -> CertificateModel:
    with open(path, "r", encoding="utf-8") as handle:
        return CertificateModel.model_validate(json.load(handle))


def check_certificate(path: Union[str, Path]) -> CertificateModel:
    """
    Replay a certificate file without the symbolic engine.

    Args:
        path: JSON certificate

    Returns:
        The certificate when it replays and is marked PASS

    Raises:
        CertificateReplayError: A claim does not replay or the certificate is FAILED
    """
    certificate = load_certificate(path)
    problems = replay_certificate(certificate)
    if problems:
        logger.error(f"Certificate {path} fails replay: {problems[0]}")
        raise CertificateReplayError(certificate.scenario, "; ".join(problems))
    if not certificate.passed:
        raise CertificateReplayError(
            certificate.scenario, f"certificate status is {certificate.status}"
        )
    logger.info(f"Certificate {certificate.scenario} {certificate.dims} replays")
    return certificate


def write_certificate(certificate: CertificateModel, path: Union[str, Path]) -> Path:
    """Write the certificate as sorted-key JSON, atomically."""
    return write_text(to_json(certificate), path)


def branch_status(
    systems: Sequence[LinearSystemModel],
    required: Sequence[LinearSystemModel]
) -> str:
    """PASS when every required system forces all its unknowns and none is inconsistent."""
    if any(s.inconsistent for s in systems):
        return FAILED
    return PASS if all(all_forced(s) for s in required) else FAILED


def finish(certificate: CertificateModel) -> CertificateModel:
    """Overall status from the branches, then a replay of the recorded systems."""
    if any(b.status != PASS for b in certificate.branches) or certificate.witness is not None:
        certificate.status = FAILED
    problems = replay_certificate(certificate)
    if problems:
        logger.error(f"{certificate.scenario}: recorded systems do not replay: {problems[0]}")
        certificate.status = FAILED
        certificate.notes.extend(problems)
    logger.info(f"{certificate.scenario} {certificate.dims}: {certificate.status}")
    return certificate


__all__ = [
    "CertificateBranch",
    "CertificateModel",
    "all_forced",
    "branch_status",
    "check_certificate",
    "finish",
    "fraction_rref",
    "linear_system",
    "pivot_coefficients",
    "record_pivots",
    "load_certificate",
    "rational_sample",
    "replay_certificate",
    "replay_system",
    "write_certificate",
]
