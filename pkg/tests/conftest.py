import numpy as np
import pytest

from gbxii import distribution as dist
from gbxii.verify import default_grid

GRID = default_grid()


def grid_id(params):
    return str(params)


@pytest.fixture(scope="session")
def grid():
    return list(GRID)


@pytest.fixture
def perturbed_pdf(monkeypatch):
    """Scale the density by 1.01, leaving cdf and survival untouched."""
    pdf, pdf_offset = dist.pdf, dist.pdf_offset
    monkeypatch.setattr(dist, "pdf", lambda params, x: 1.01 * np.asarray(pdf(params, x)))
    monkeypatch.setattr(dist, "pdf_offset", lambda params, d: 1.01 * np.asarray(pdf_offset(params, d)))


# criterion number -> (title, passed, detail); filled by test_acceptance
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        title, passed, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:2d} {'PASS' if passed else 'FAIL'}  {title}: {detail}")
