import numpy as np
import pytest

from pdebin import _backend

ACCEPTANCE_LINES = []


@pytest.fixture(params=_backend.available())
def backend(request):
    """Run the test once per kernel backend."""
    with _backend.using(request.param):
        yield request.param


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def record():
    """Append one pass/fail line to the acceptance summary."""
    def _record(number, title, passed, detail=""):
        status = "PASS" if passed else "FAIL"
        line = f"[{status}] criterion {number:>2}: {title}"
        if detail:
            line += f" ({detail})"
        ACCEPTANCE_LINES.append(line)
        print(line)
    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)


def write_dataset(directory, n=3, size=48, gt_suffix="_GT"):
    """Synthetic bleed-through pages plus GT masks, as PNGs under ``directory``."""
    from pdebin.image_model import save_binary, save_image
    from pdebin.synthetic import bleed_through_document

    directory.mkdir(parents=True, exist_ok=True)
    for i in range(n):
        img, gt = bleed_through_document(size=size, seed=i)
        save_image(directory / f"doc{i:02d}.png", img)
        save_binary(directory / f"doc{i:02d}{gt_suffix}.png", gt)
    return directory


@pytest.fixture
def dataset(tmp_path):
    return write_dataset(tmp_path / "data")
