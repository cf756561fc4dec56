"""
Search for nonzero antisymmetric matrices whose row norms and entry
magnitudes stay equal under rotations.

A vorticity matrix of a geodesic shear-free perfect fluid must satisfy
these constraints; an empty search supports the claim that it vanishes.
"""
import logging
from itertools import product
from typing import Optional
import numpy as np
from scipy.optimize import minimize
from scipy.stats import special_ortho_group
from cartan_sub.config import settings
from cartan_sub.core.errors import InvalidParametersError
from cartan_sub.models.responses import RigidityReport

logger = logging.getLogger(__name__)

WITNESS_TOLERANCE = 1e-9
ENUMERATION_LIMIT = 5
CHUNK = 2000


def antisymmetric(entries: np.ndarray, p: int) -> np.ndarray:
    """Batch of antisymmetric p x p matrices from their upper-triangle entries."""
    entries = np.atleast_2d(entries)
    rows, cols = np.triu_indices(p, k=1)
    matrices = np.zeros((entries.shape[0], p, p))
    matrices[:, rows, cols] = entries
    matrices[:, cols, rows] = -entries
    return matrices


def rigidity_residual(matrices: np.ndarray, rotations: np.ndarray) -> np.ndarray:
    """
    Constraint residual of unit-norm antisymmetric matrices.

    For every rotation Q (the identity included) the rotated matrix
    Q M Q^T must have equal row norms and equal squared off-diagonal
    entries. The residual is the mean of both variances over rotations.

    Args:
        matrices: Array (N, p, p), each of Frobenius norm 1
        rotations: Array (R, p, p) of rotations

    Returns:
        Array (N,) of residuals
    """
    p = matrices.shape[-1]
    rows, cols = np.triu_indices(p, k=1)
    rotated = np.einsum("rij,njk,rlk->nril", rotations, matrices, rotations)
    row_norms = np.einsum("nrij,nrij->nri", rotated, rotated)
    squares = rotated[..., rows, cols] ** 2
    residual = row_norms.var(axis=-1) + squares.var(axis=-1)
    return residual.mean(axis=-1)


def _rotations(p: int, count: int, rng: np.random.Generator) -> np.ndarray:
    sampled = special_ortho_group.rvs(dim=p, size=count, random_state=rng)
    sampled = np.reshape(sampled, (count, p, p))
    return np.concatenate([np.eye(p)[None], sampled])


def _normalized(entries: np.ndarray) -> np.ndarray:
    norms = np.sqrt(2.0) * np.linalg.norm(entries, axis=-1, keepdims=True)
    return entries / norms


def sign_pattern_enumeration(p: int, rotations: np.ndarray) -> tuple:
    """
    Residuals of every antisymmetric matrix with entries in {-c, 0, c}.

    Returns:
        (minimum residual, number of patterns, best pattern entries)
    """
    size = p * (p - 1) // 2
    patterns = np.array([s for s in product((-1.0, 0.0, 1.0), repeat=size) if any(s)])
    best, best_entries = np.inf, None
    for start in range(0, len(patterns), CHUNK):
        chunk = _normalized(patterns[start:start + CHUNK])
        residuals = rigidity_residual(antisymmetric(chunk, p), rotations)
        k = int(np.argmin(residuals))
        if residuals[k] < best:
            best, best_entries = float(residuals[k]), chunk[k]
    logger.debug(f"p={p}: {len(patterns)} sign patterns, minimum residual {best:.3e}")
    return best, len(patterns), best_entries


def antisymmetric_rigidity_search(
    p: int,
    trials: Optional[int] = None,
    seed: Optional[int] = None,
    rotations: int = 50,
    refine: int = 10
) -> RigidityReport:
    """
    Random-restart search for a nonzero antisymmetric witness.

    Samples unit-norm antisymmetric matrices, refines the best ones with
    BFGS on the sphere, and for small p enumerates every sign pattern at a
    single magnitude. A witness is reported when any residual drops below
    WITNESS_TOLERANCE.

    Args:
        p: Matrix size (at least 3)
        trials: Random restarts (settings.rigidity_trials by default)
        seed: Random seed (settings.seed by default)
        rotations: Random rotations the constraints are checked on
        refine: Number of best samples refined by local optimization

    Returns:
        RigidityReport; `empty` when no witness was found

    Raises:
        InvalidParametersError: p < 3 or no trials
    """
    if p < 3:
        raise InvalidParametersError("antisymmetric-rigidity", "p must be at least 3")
    trials = settings.rigidity_trials if trials is None else trials
    seed = settings.seed if seed is None else seed
    if trials < 1:
        raise InvalidParametersError("antisymmetric-rigidity", "trials must be positive")

    rng = np.random.default_rng(seed)
    frames = _rotations(p, rotations, rng)
    size = p * (p - 1) // 2
    logger.info(f"Rigidity search p={p}: {trials} trials, {rotations} rotations, seed {seed}")

    samples = _normalized(rng.standard_normal((trials, size)))
    residuals = np.concatenate([
        rigidity_residual(antisymmetric(samples[start:start + CHUNK], p), frames)
        for start in range(0, trials, CHUNK)
    ])
    order = np.argsort(residuals)[:refine]
    logger.debug(f"Sampled residuals: min {residuals.min():.3e}, median {np.median(residuals):.3e}")

    def objective(x: np.ndarray) -> float:
        norm = np.linalg.norm(x)
        if norm < 1e-12:
            return 1.0
        return float(rigidity_residual(antisymmetric(_normalized(x[None]), p), frames)[0])

    best = float(residuals[order[0]])
    best_entries = samples[order[0]]
    for rank, k in enumerate(order):
        result = minimize(objective, samples[k], method="BFGS", options={"gtol": 1e-12})
        logger.debug(f"Refinement {rank}: {residuals[k]:.3e} -> {result.fun:.3e}")
        if result.fun < best:
            best = float(result.fun)
            best_entries = _normalized(result.x[None])[0]

    enumeration_min, enumeration_size = None, 0
    if p <= ENUMERATION_LIMIT:
        enumeration_min, enumeration_size, pattern = sign_pattern_enumeration(p, frames)
        if enumeration_min < best:
            best_entries = pattern

    lowest = min(best, enumeration_min) if enumeration_min is not None else best
    witness = None
    if lowest < WITNESS_TOLERANCE:
        witness = antisymmetric(best_entries, p)[0].tolist()
        logger.warning(f"Rigidity search p={p} found a witness with residual {lowest:.3e}")
    else:
        logger.info(f"Rigidity search p={p}: EMPTY, best residual {best:.3e}")

    return RigidityReport(
        p=p,
        trials=trials,
        seed=seed,
        best_residual=best,
        enumeration_min_residual=enumeration_min,
        enumeration_size=enumeration_size,
        witness=witness,
        rotations_checked=rotations,
    )
