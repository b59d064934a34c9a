"""Tests for the command-line interface.

Dependencies: pytest, pytest-mock, superweyl.cli.
"""

import json
from pathlib import Path

import pytest
from pytest_mock import MockerFixture

from superweyl import __version__
from superweyl.cli import build_parser, main
from superweyl.constants import EXIT_CHECK_FAILED, EXIT_INPUT_ERROR, EXIT_OK

EQUATOR = "th=1.5707963267948966,ph=1.0"


def test_version(capsys: pytest.CaptureFixture[str]) -> None:
    """Test --version prints the package version."""
    with pytest.raises(SystemExit) as info:
        main(["--version"])
    assert info.value.code == 0
    assert __version__ in capsys.readouterr().out


def test_command_required() -> None:
    """Test that a missing command is a usage error."""
    with pytest.raises(SystemExit) as info:
        main([])
    assert info.value.code == 2


def test_parser_defaults() -> None:
    """Test default option values of the subcommands."""
    args = build_parser().parse_args(["euler", "sphere2"])
    assert args.quad == 64
    assert args.json is False
    args = build_parser().parse_args(["laplacian-symbol", "sphere2", "--r", "1/2"])
    assert str(args.r) == "1/2"
    assert args.hbar is None


def test_fiber_selftest_passes(capsys: pytest.CaptureFixture[str]) -> None:
    """Test the self-test command and its summary line."""
    code = main(["fiber-selftest", "--n", "1", "--r", "0", "1/2", "--cases", "1"])
    out = capsys.readouterr().out
    assert code == EXIT_OK
    assert "PASS" in out
    assert "checks passed" in out


def test_fiber_selftest_fault(capsys: pytest.CaptureFixture[str]) -> None:
    """Test that an injected fault gives exit code 1 and names the failing check."""
    argv = ["fiber-selftest", "--n", "1", "--r", "0", "--cases", "1", "--fault", "symbol-sign"]
    code = main(argv)
    assert code == EXIT_CHECK_FAILED
    assert "FAIL" in capsys.readouterr().out


def test_fiber_selftest_rejects_large_n(capsys: pytest.CaptureFixture[str]) -> None:
    """Test exit code 2 for an unsupported fiber dimension."""
    assert main(["fiber-selftest", "--n", "5"]) == EXIT_INPUT_ERROR
    assert "error:" in capsys.readouterr().err


def test_geometry_json(capsys: pytest.CaptureFixture[str]) -> None:
    """Test the geometry command with JSON output on the flat torus."""
    code = main(["geometry", "torus2", "--samples", "2", "--json"])
    report = json.loads(capsys.readouterr().out)
    assert code == EXIT_OK
    assert report["command"] == "geometry"
    assert report["values"]["scalar_curvature"] == 0.0
    assert all(check["status"] == "pass" for check in report["checks"])


def test_geometry_at_point(capsys: pytest.CaptureFixture[str]) -> None:
    """Test curvature values at an explicit point on the sphere."""
    code = main(["geometry", "sphere2", "--samples", "2", "--at", EQUATOR, "--json"])
    report = json.loads(capsys.readouterr().out)
    assert code == EXIT_OK
    assert report["values"]["scalar_curvature"] == pytest.approx(2.0)


@pytest.mark.parametrize(
    "at", ["th=1.0", "th=1.0,ph=1.0,z=0", "th=9.0,ph=1.0", "th=abc,ph=1.0", "th"]
)
def test_bad_points(at: str, capsys: pytest.CaptureFixture[str]) -> None:
    """Test exit code 2 for malformed or outside points."""
    assert main(["laplacian-symbol", "sphere2", "--at", at]) == EXIT_INPUT_ERROR
    assert "error:" in capsys.readouterr().err


def test_laplacian_symbol(capsys: pytest.CaptureFixture[str]) -> None:
    """Test the symbol command at the sphere equator."""
    code = main(["laplacian-symbol", "sphere2", "--at", EQUATOR, "--r", "1/2", "--json"])
    report = json.loads(capsys.readouterr().out)
    assert code == EXIT_OK
    assert report["values"]["exact"] is True
    assert report["inputs"]["r"] == "1/2"


def test_laplacian_symbol_numeric_hbar() -> None:
    """Test the symbol command with a substituted Planck constant."""
    assert main(["laplacian-symbol", "torus2", "--hbar", "1/3", "-q"]) == EXIT_OK


def test_weitzenbock_flat(capsys: pytest.CaptureFixture[str]) -> None:
    """Test the Weitzenböck command on the flat torus."""
    code = main(["weitzenbock", "torus2", "--samples", "2", "--random-fields", "1"])
    assert code == EXIT_OK
    assert "torus2:weitzenbock-weitz2" in capsys.readouterr().out


def test_euler_sphere(capsys: pytest.CaptureFixture[str]) -> None:
    """Test χ(S²) from the command line."""
    code = main(["euler", "sphere2", "--quad", "24"])
    out = capsys.readouterr().out
    assert code == EXIT_OK
    assert "chi(sphere2) = 2.0000" in out


def test_euler_json_with_parameter(capsys: pytest.CaptureFixture[str]) -> None:
    """Test JSON output and --param overrides."""
    code = main(["euler", "sphere2", "--quad", "24", "--param", "radius=2.5", "--json"])
    report = json.loads(capsys.readouterr().out)
    assert code == EXIT_OK
    assert report["chi_expected"] == 2
    assert report["chi_computed"] == pytest.approx(2.0, abs=1e-6)


def test_euler_tolerance_failure() -> None:
    """Test exit code 1 when the quadrature misses the expected value."""
    assert main(["euler", "sphere2", "--quad", "3", "--tol", "1e-12", "-q"]) == EXIT_CHECK_FAILED


def test_dcheck_flat(capsys: pytest.CaptureFixture[str]) -> None:
    """Test the dcheck command keyed by chart name."""
    code = main(["dcheck", "torus2", "--samples", "1", "--json"])
    report = json.loads(capsys.readouterr().out)
    assert code == EXIT_OK
    assert report["values"]["torus2"]["curvature_defect_max"] == pytest.approx(0.0, abs=1e-12)


def test_missing_spec(capsys: pytest.CaptureFixture[str]) -> None:
    """Test exit code 2 for an unknown spec."""
    assert main(["euler", "no-such-spec"]) == EXIT_INPUT_ERROR
    assert "spec file not found" in capsys.readouterr().err


def test_invalid_spec_file(tmp_path: Path) -> None:
    """Test exit code 2 for a spec that violates the schema."""
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"name": "bad", "dim": 2}), encoding="utf-8")
    assert main(["geometry", str(path)]) == EXIT_INPUT_ERROR


def test_bad_parameter() -> None:
    """Test exit code 2 for a non-numeric --param."""
    assert main(["euler", "sphere2", "--param", "radius=big"]) == EXIT_INPUT_ERROR


def test_euler_density_mismatch_fails(
    capsys: pytest.CaptureFixture[str], mocker: MockerFixture
) -> None:
    """Test exit code 1 when the two Euler density paths disagree."""
    mocker.patch("superweyl.tstar.euler._cross_check", return_value=0.5)
    assert main(["euler", "sphere2", "--quad", "24"]) == EXIT_CHECK_FAILED
    assert "density cross-check failed" in capsys.readouterr().out
