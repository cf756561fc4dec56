"""Single-command runs: one RunConfig in, one report out."""
import logging
from typing import Any, Dict, Tuple
from cartan_sub.core.errors import EXIT_MATH, EXIT_OK, InvalidParametersError
from cartan_sub.counting import apply_constraints, character_report, seed_table
from cartan_sub.geometries import definition_schema, geometry_from_config
from cartan_sub.identities import compare_with_catalog, derive_identities, has_catalog
from cartan_sub.identities.relations import RelationSet
from cartan_sub.models.requests import RunConfig
from cartan_sub.models.responses import (
    CertificateModel,
    DiffReport,
    FixtureReport,
    GridReport,
    ReportSummary,
    RigidityReport,
)
from cartan_sub.numerics import (
    antisymmetric_rigidity_search,
    rotating_flow_fixture,
    solve_problem_file,
)
from cartan_sub.scenarios import (
    THEOREMS,
    ShearFreeReduction,
    check_certificate,
    contractions,
    curvature_dictionary,
    killing_chain,
    semi_killing_lift,
    shear_free_reduction,
    verify_dictionary_consistency,
)
from cartan_sub.utils.converters import expr_to_str

logger = logging.getLogger(__name__)

# theorem name -> parameter the verifier takes, derived from the total dimension
THEOREM_PARAMETERS = {
    "herglotz-homogeneous": ("n", 0),
    "herglotz-conformal": ("n", 0),
    "ellis-irrotational": ("p", 1),
    "ellis-geodesic": ("n", 0),
}


def exit_code_for_report(report: Any) -> int:
    """EXIT_MATH for negative mathematical findings, EXIT_OK otherwise."""
    if isinstance(report, DiffReport):
        return EXIT_OK if report.is_empty and not report.incompatible else EXIT_MATH
    if isinstance(report, CertificateModel):
        return EXIT_OK if report.passed else EXIT_MATH
    if isinstance(report, RigidityReport):
        return EXIT_OK if report.empty else EXIT_MATH
    if isinstance(report, ReportSummary):
        return EXIT_OK if report.ok else EXIT_MATH
    if isinstance(report, GridReport):
        return EXIT_OK if report.failed_points == 0 else EXIT_MATH
    if isinstance(report, FixtureReport):
        return EXIT_OK if report.s1212_min > 0 else EXIT_MATH
    if isinstance(report, ShearFreeReduction):
        return EXIT_OK if report.passed else EXIT_MATH
    if isinstance(report, RelationSet):
        return EXIT_MATH if report.incompatible else EXIT_OK
    return EXIT_OK


class RunService:
    """Dispatch a RunConfig to the engine."""

    def __init__(self):
        """Initialize run service."""
        self.handlers = {
            "identities": self.identities,
            "dof": self.dof,
            "dictionary": self.dictionary,
            "theorem": self.theorem,
            "pde2d": self.pde2d,
            "oracle-antisym": self.oracle_antisym,
            "fixture-rotating": self.fixture_rotating,
            "check-certificate": self.check_certificate,
            "killing": self.killing,
            "shear-free": self.shear_free,
            "schema": self.schema,
        }

    def run(self, config: RunConfig) -> Tuple[Any, int]:
        """
        Execute one command.

        Args:
            config: Run configuration

        Returns:
            (report, exit code)
        """
        handler = self.handlers.get(config.command)
        if handler is None:
            logger.error(f"Unknown command '{config.command}'")
            known = ", ".join(sorted(self.handlers))
            raise InvalidParametersError(config.command, f"unknown command; known: {known}")
        logger.info(f"Running {config.command} {config.geometry or ''} {config.dims}".rstrip())
        report = handler(config)
        return report, exit_code_for_report(report)

    def _require(self, config: RunConfig, *names: str) -> None:
        missing = [name for name in names if getattr(config, name) is None]
        if missing:
            flags = ", ".join("--" + m for m in missing)
            raise InvalidParametersError(config.command, f"missing {flags}")

    def identities(self, config: RunConfig) -> Any:
        """Derive identities and diff against the catalog when one exists."""
        self._require(config, "geometry")
        geom = geometry_from_config(config.geometry, config.dims, config.truncation)
        derived = derive_identities(geom, config.options.get("order"))
        if not has_catalog(geom.name):
            logger.info(f"No catalog for {geom.name}; reporting the derived relations")
            return derived
        return compare_with_catalog(derived)

    def dof(self, config: RunConfig):
        """Cartan characters of a built-in seed table, optionally constrained."""
        self._require(config, "geometry")
        table = seed_table(config.geometry)
        if config.constraint:
            table = apply_constraints(table, config.constraint)
        return character_report(table, **config.dims)

    def dictionary(self, config: RunConfig) -> Any:
        """Curvature dictionary components, or its consistency certificate with --check."""
        self._require(config, "p", "q")
        if config.options.get("check"):
            return verify_dictionary_consistency(config.p, config.q, seed=config.seed)
        dictionary = curvature_dictionary(config.p, config.q, config.truncation)
        which = config.options.get("contraction")
        components = contractions(dictionary, which) if which else dictionary.equations()
        return {
            "geometry": dictionary.geometry.label,
            "contraction": which,
            "components": {label: expr_to_str(value) for label, value in components.items()},
        }

    def theorem(self, config: RunConfig) -> CertificateModel:
        """Theorem scenario at total dimension n."""
        name = config.options.get("name")
        if name not in THEOREMS:
            raise InvalidParametersError(
                str(name), f"unknown theorem; known: {', '.join(THEOREMS)}"
            )
        self._require(config, "n")
        parameter, shift = THEOREM_PARAMETERS[name]
        kwargs: Dict[str, Any] = {parameter: config.n - shift}
        if name == "herglotz-conformal":
            kwargs["seed"] = config.seed
        if name.startswith("ellis"):
            if config.options.get("assume"):
                kwargs["assume"] = config.options["assume"]
            if name == "ellis-geodesic":
                kwargs["seed"] = config.seed
                kwargs["trials"] = config.options.get("trials")
        return THEOREMS[name](**kwargs)

    def pde2d(self, config: RunConfig) -> GridReport:
        """Characteristics solution of a problem file; the grid goes to --csv when given."""
        path = config.options.get("input")
        if not path:
            raise InvalidParametersError("pde2d", "missing --input")
        grid, report = solve_problem_file(path)
        if config.options.get("csv"):
            grid.to_csv(config.options["csv"])
        return report

    def oracle_antisym(self, config: RunConfig) -> RigidityReport:
        self._require(config, "p")
        return antisymmetric_rigidity_search(config.p, config.options.get("trials"), config.seed)

    def fixture_rotating(self, config: RunConfig) -> FixtureReport:
        omega = config.options.get("omega")
        if omega is None:
            raise InvalidParametersError("fixture rotating", "missing --omega")
        kwargs: Dict[str, Any] = {"seed": config.seed}
        if config.options.get("radii"):
            kwargs["radii"] = config.options["radii"]
        if config.options.get("step"):
            kwargs["step"] = config.options["step"]
        return rotating_flow_fixture(float(omega), **kwargs)

    def check_certificate(self, config: RunConfig) -> CertificateModel:
        path = config.options.get("path")
        if not path:
            raise InvalidParametersError("check-certificate", "missing certificate path")
        return check_certificate(path)

    def killing(self, config: RunConfig) -> Dict[str, Any]:
        """Killing chain on Riemannian(n), or the semi-Killing lift at (p, q)."""
        if config.p is not None and config.q is not None:
            result = semi_killing_lift(config.p, config.q)
            return {
                "geometry": result["geometry"].label,
                "lift": {expr_to_str(k): expr_to_str(v) for k, v in result["lift"].items()},
                "conditions": [str(r) for r in result["conditions"].sorted()],
            }
        self._require(config, "n")
        return killing_chain(config.n, config.truncation).to_dict()

    def shear_free(self, config: RunConfig) -> ShearFreeReduction:
        self._require(config, "p")
        return shear_free_reduction(config.p)

    def schema(self, config: RunConfig) -> Dict[str, Any]:
        """JSON schema of geometry definition files."""
        return definition_schema()


# Global service instance
run_service = RunService()
