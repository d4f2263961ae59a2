import random
import sys

import pytest

from advicebp import kernels
from advicebp.barrington import compile_circuit
from advicebp.equiv import gen_corpus


@pytest.fixture(scope="session")
def corpus():
    return gen_corpus(seed=0, counts=(100, 100))


@pytest.fixture(scope="session")
def compiled(corpus):
    """(circuit, program) pairs for every corpus circuit."""
    return [(c, compile_circuit(c)) for c in corpus.circuits]


@pytest.fixture
def rng():
    return random.Random(1234)


@pytest.fixture(params=sorted(kernels.backend_modules()))
def backend(request):
    return kernels.backend_modules()[request.param]


def all_inputs(n):
    return [tuple((m >> i) & 1 for i in range(n)) for m in range(1 << n)]


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if not mod or not mod.RESULTS:
        return
    terminalreporter.section(f"acceptance criteria (kernel backend: {kernels.BACKEND})")
    for number in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[number])
