"""Unit tests for exact linear algebra and report converters."""
import json
from fractions import Fraction
import pytest
import sympy
from cartan_sub.models.responses import (
    CertificateBranch,
    CertificateModel,
    CharacterReport,
    CheckResult,
    DiffReport,
    FixtureReport,
    GridReport,
    ReportSummary,
    RigidityReport,
)
from cartan_sub.utils.converters import (
    expr_to_str,
    render,
    to_json,
    to_jsonable,
    to_markdown,
    write_text,
)
from cartan_sub.utils.linalg import (
    eliminate,
    forced_zero_unknowns,
    linear_rows,
    nullspace,
    rank,
    rref,
    symbolic_nullspace,
    to_qq,
)

pytestmark = pytest.mark.unit

x, y, a, b, c = sympy.symbols("x y a b c")


# Linear algebra

def test_to_qq():
    """Test ints, fractions and sympy rationals convert alike."""
    assert to_qq(Fraction(1, 2)) == to_qq(sympy.Rational(1, 2))
    assert to_qq(3) == to_qq("3")


def test_rref():
    """Test reduction of a full-rank system."""
    rows, pivots = rref([{0: 1, 1: 1}, {0: 1, 1: -1}], 2)

    assert pivots == (0, 1)
    assert rows == [{0: 1}, {1: 1}]


def test_rref_empty():
    """Test empty input has no pivots."""
    assert rref([], 3) == ([], ())
    assert rank([{}, {}], 2) == 0


def test_rank_of_dependent_rows():
    """Test proportional rows count once."""
    assert rank([{0: 1, 1: 2}, {0: 2, 1: 4}, {2: sympy.Rational(1, 3)}], 3) == 2


def test_nullspace():
    """Test the nullspace of x - y = 0."""
    basis = nullspace([{0: 1, 1: -1}], 2)

    assert basis == [[1, 1]]


def test_linear_rows():
    """Test rows and remainders of linear equations."""
    rows, remainders = linear_rows([2 * x - y + a, x], [x, y], allow_constant_terms=True)

    assert rows == [{0: 2, 1: -1}, {0: 1}]
    assert remainders == [a, 0]


def test_linear_rows_rejects_nonlinear():
    """Test products of unknowns and symbolic coefficients raise."""
    with pytest.raises(ValueError):
        linear_rows([x * y], [x, y])
    with pytest.raises(ValueError):
        linear_rows([a * x], [x, y])


def test_linear_rows_rejects_constants():
    """Test terms without unknowns raise unless allowed."""
    with pytest.raises(ValueError):
        linear_rows([x + a], [x])


def test_eliminate_solves():
    """Test x + y = a, x - y = b."""
    result = eliminate([x + y - a, x - y - b], [x, y])

    assert result.conditions == []
    assert sympy.expand(result.solution[x] - (a + b) / 2) == 0
    assert sympy.expand(result.solution[y] - (a - b) / 2) == 0
    assert result.free == []


def test_eliminate_conditions():
    """Test an overdetermined system yields a consistency condition."""
    result = eliminate([x - a, 2 * x - b], [x])

    assert len(result.conditions) == 1
    condition = result.conditions[0]
    assert condition.subs({a: 1, b: 2}) == 0
    assert condition.subs({a: 1, b: 0}) != 0


def test_eliminate_forced_zero():
    """Test homogeneous systems of full rank force every unknown to zero."""
    result = eliminate([x + y, y], [x, y])

    assert set(result.forced_zero()) == {x, y}


def test_eliminate_free_unknowns():
    """Test underdetermined systems leave free unknowns."""
    result = eliminate([x - y], [x, y])

    assert result.free == [y]
    assert result.solution[x] == y
    assert result.forced_zero() == []


def test_symbolic_nullspace():
    """Test the generic solution of c x - y = 0."""
    basis = symbolic_nullspace([c * x - y], [x, y])

    assert len(basis) == 1
    vector = basis[0]
    assert sympy.simplify(vector[1] - c * vector[0]) == 0


def test_symbolic_nullspace_rejects_inhomogeneous():
    """Test constant terms raise."""
    with pytest.raises(ValueError):
        symbolic_nullspace([x + 1], [x, y])


def test_forced_zero_unknowns():
    """Test which unknowns vanish in every solution."""
    assert forced_zero_unknowns([c * x + y, y], [x, y]) == [x, y]
    assert forced_zero_unknowns([x - y], [x, y]) == []
    assert forced_zero_unknowns([y], [x, y]) == [y]


# Converters

def test_expr_to_str_deterministic():
    """Test rendering ignores construction order."""
    assert expr_to_str(b + a) == expr_to_str(a + b)
    assert expr_to_str(3) == "3"


def test_to_jsonable():
    """Test sympy keys and values become plain JSON data."""
    data = to_jsonable({x: sympy.Integer(3), "half": sympy.Rational(1, 2), "list": (a, 1)})

    assert data == {"x": 3, "half": "1/2", "list": ["a", 1]}


def test_to_json_sorted():
    """Test identical reports give identical bytes."""
    report = GridReport(step=0.5, shape=[2, 3], max_residual=0.0)
    text = to_json(report)

    assert text == to_json(GridReport(step=0.5, shape=[2, 3], max_residual=0.0))
    assert text.endswith("\n")
    assert json.loads(text)["shape"] == [2, 3]
    assert text.index('"closure_residual"') < text.index('"step"')


def test_character_report_markdown():
    """Test the characters table and top character."""
    report = CharacterReport(
        geometry="RiemannianSubmersion", p=2, q=3, truncation=2,
        s=[0, 2, 4, 3, 5], seeds_by_row={"K[i,a,b;c,d]": 10}
    )
    text = render(report, "md")

    assert text.startswith("# Cartan characters: RiemannianSubmersion (p=2, q=3)")
    assert "Top character: **5**" in text
    assert "| `K[i,a,b;c,d]` | 10 |" in text


def test_diff_report_markdown():
    """Test the status and the empty bullet lists."""
    text = to_markdown(DiffReport(geometry="BornRigid(n=3)", order=1))

    assert "Status: **PASS**" in text
    assert "- (none)" in text


def test_certificate_markdown():
    """Test branches, conclusions and the witness block."""
    certificate = CertificateModel(
        scenario="antisym-rigidity",
        dims={"p": 3},
        branches=[CertificateBranch(label="M!=0", conclusion="M = 0")],
        conclusion="M = 0",
        witness=[[0.0, 1.0], [-1.0, 0.0]],
    )
    text = to_markdown(certificate)

    assert "# Certificate: antisym-rigidity (p=3)" in text
    assert "## Branch M!=0: PASS" in text
    assert "**Conclusion:** M = 0" in text
    assert "```" in text


def test_summary_markdown():
    """Test the acceptance table counts."""
    summary = ReportSummary(
        seed=42, truncation=2,
        checks=[
            CheckResult(name="1 dof", status="PASS"),
            CheckResult(name="2 diff", status="FAILED"),
        ]
    )
    text = to_markdown(summary)

    assert "1 passed, 1 failed" in text
    assert "| 2 diff | FAILED |  |" in text


def test_numeric_report_titles():
    """Test numeric reports render as field tables."""
    grid = to_markdown(GridReport(step=0.5, shape=[2, 3], max_residual=0.0))
    rigidity = to_markdown(RigidityReport(p=3, trials=1, seed=1, best_residual=0.5))
    samples = [{"M": [[0.0]]}]
    fixture = to_markdown(FixtureReport(omega=0.1, step=0.01, radii=[1.0], samples=samples))

    assert grid.startswith("# Characteristics solution")
    assert "| shape | [2, 3] |" in grid
    assert rigidity.startswith("# Antisymmetric rigidity search")
    assert fixture.startswith("# Rotating flow fixture")
    assert "samples" not in fixture


def test_render_defaults_to_json():
    """Test anything but md renders JSON."""
    assert json.loads(render({"k": 1})) == {"k": 1}


def test_write_text_creates_directories(tmp_path):
    """Test reports land in new parent directories without temporary leftovers."""
    target = write_text("hello\n", tmp_path / "nested" / "dir" / "report.json")

    assert target.read_text() == "hello\n"
    assert [p.name for p in target.parent.iterdir()] == ["report.json"]
