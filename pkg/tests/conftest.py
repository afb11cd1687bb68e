import json

import numpy as np
import pytest

from refocus.graphmodel import CouplingGraph

# Reference sign and Hadamard matrices: two- and four-spin nested sequences, H2, H4.
M2 = [[1, 1], [1, -1]]
M4 = [
    [1, 1, 1, 1, 1, 1, 1, 1],
    [1, 1, 1, 1, -1, -1, -1, -1],
    [1, 1, -1, -1, -1, -1, 1, 1],
    [1, -1, -1, 1, 1, -1, -1, 1],
]
H2 = [[1, 1], [1, -1]]
H4 = [[1, 1, 1, 1], [1, -1, 1, -1], [1, 1, -1, -1], [1, -1, -1, 1]]


def random_graph(rng: np.random.Generator, n: int, p: float) -> CouplingGraph:
    edges = {(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p}
    return CouplingGraph(tuple(f"s{i}" for i in range(n)), frozenset(edges))


@pytest.fixture
def k4_doc(tmp_path):
    names = ["a", "b", "c", "d"]
    doc = {"spins": names, "couplings": [[x, y] for i, x in enumerate(names) for y in names[i + 1:]]}
    path = tmp_path / "k4.json"
    path.write_text(json.dumps(doc))
    return path


ACCEPTANCE_RESULTS: dict[str, tuple[bool, str]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE_RESULTS, key=lambda k: int(k.split()[0])):
        ok, detail = ACCEPTANCE_RESULTS[name]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
