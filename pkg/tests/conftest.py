import numpy as np
import pytest

from landalloc.genotype import as_genotype
from landalloc.instance import GeneratorParams, Instance, generate_instance

# 4x4 layout with K=5: three fixed urban cells (code 1), ten agricultural
# cells (code 2) and three fixed other uses (codes 3-5).
LAYOUT_4X4 = np.array([
    [1, 2, 2, 2],
    [1, 2, 3, 2],
    [2, 2, 2, 4],
    [1, 5, 2, 2],
])
# positions, row-major over agricultural cells:
# 0:(0,1) 1:(0,2) 2:(0,3) 3:(1,1) 4:(1,3) 5:(2,0) 6:(2,1) 7:(2,2) 8:(3,2) 9:(3,3)
PARENT_A = "1010110000"  # (0,1) (0,3) (1,3) (2,0)
PARENT_B = "1000001011"  # (0,1) (2,1) (3,2) (3,3)


@pytest.fixture
def layout4():
    soil = np.where(LAYOUT_4X4 == 2, np.arange(16).reshape(4, 4) % 7 + 1.0, 0.0)
    return Instance(LAYOUT_4X4, soil, budget=4, name="layout4")


@pytest.fixture
def layout_parents():
    return as_genotype(PARENT_A), as_genotype(PARENT_B)


@pytest.fixture(scope="session")
def grid20():
    return [generate_instance(seed, 20, 20) for seed in range(5)]


@pytest.fixture(scope="session")
def grid12():
    return generate_instance(3, 12, 12, GeneratorParams(budget_fraction=0.15))


def random_genotype(rng, n, u):
    g = np.zeros(n, dtype=bool)
    g[rng.choice(n, u, replace=False)] = True
    return g


def pytest_terminal_summary(terminalreporter):
    rows = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            props = dict(getattr(rep, "user_properties", ()))
            if getattr(rep, "when", None) == "call" and "criterion" in props:
                rows.append((props["criterion"], outcome == "passed", props.get("detail", "")))
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for number, ok, detail in sorted(rows):
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
