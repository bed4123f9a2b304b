"""Every named verification suite must pass on a healthy build."""

import pytest

from oscrecover.recovery import clear_kernel_cache
from oscrecover.validate import canonical_suite_name, run_suite


@pytest.fixture(autouse=True)
def fresh_cache():
    clear_kernel_cache()
    yield
    clear_kernel_cache()


@pytest.mark.parametrize("name", [
    "bessel",
    "roundtrip",
    "transform_bounds",
    "kernel_bounds",
    "riemann_rate",
    "eigen_unperturbed",
    "cutoff_necessity",
])
def test_suite_passes(name):
    result = run_suite(name)
    assert result.passed, "\n".join(result.lines)
    assert all(line.startswith(("PASS", "FAIL")) for line in result.lines)


def test_aliases_resolve():
    assert canonical_suite_name("lemma1") == "transform_bounds"
    assert canonical_suite_name("lemma2") == "kernel_bounds"
    assert canonical_suite_name("remark2") == "cutoff_necessity"
    assert canonical_suite_name("kernel-bounds") == "kernel_bounds"
    with pytest.raises(ValueError):
        canonical_suite_name("nonsense")


def test_failing_line_reports_constants():
    result = run_suite("kernel_bounds")
    assert any("sup |G|" in line for line in result.lines)
    assert "kernel_bounds.csv" in result.tables
