import time

import pytest

from hsiegel.exactnum import QuadraticField, primes_up_to_norm
from hsiegel.hecke import NeighborStore, brandt_matrix, build_module, eigensystems, eisenstein_and_cusp
from hsiegel.hermlat import enumerate_classes
from hsiegel.quatalg import hamilton_order
from hsiegel.tables import PRIMES

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


class Env:
    """Shared Q(sqrt 2) data: classes, neighbour store and per-level results (computed lazily)."""

    def __init__(self):
        self.O = hamilton_order(2)
        self.F = self.O.F
        t = time.time()
        self.classes = enumerate_classes(self.O)
        self.class_time = time.time() - t
        self.store = NeighborStore(self.classes)
        self.primes = primes_up_to_norm(self.F, 31)
        self.by_label = {P.label(): P for P in self.primes}
        self.table_primes = [self.by_label[l] for l in PRIMES]
        self._levels = {}
        self.level_time = {}

    def level(self, label: str):
        """(module, Brandt matrices at the table primes, labels, cusp eigensystems)."""
        if label not in self._levels:
            t = time.time()
            M = build_module(self.classes, None if label == "1" else self.by_label[label])
            Bs = [brandt_matrix(M, i, P, self.store) for P in self.table_primes for i in (1, 2)]
            labels = [B.label for B in Bs]
            _, Q = eisenstein_and_cusp(M, Bs)
            self._levels[label] = (M, Bs, labels, eigensystems(Q, labels))
            self.level_time[label] = time.time() - t
        return self._levels[label]


@pytest.fixture(scope="session")
def env() -> Env:
    return Env()


@pytest.fixture(scope="session")
def F2():
    return QuadraticField(2)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
