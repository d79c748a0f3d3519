import itertools

import numpy as np
import pytest
from hypothesis import strategies as st

from qwdiag.bench import random_commuting_set
from qwdiag.pauli import PauliString


def span_size(rows) -> int:
    """Size of the GF(2) span of integer-packed rows, by enumeration."""
    seen = {0}
    for r in rows:
        seen |= {s ^ r for s in seen}
    return len(seen)


def brute_rank(rows) -> int:
    return span_size(rows).bit_length() - 1


def to_bits(rows, n_cols):
    return np.array([[(r >> j) & 1 for j in range(n_cols)] for r in rows], dtype=np.uint8).reshape(-1, n_cols)


@st.composite
def commuting_sets(draw, n_min=1, n_max=6, extra_ops=True):
    n = draw(st.integers(n_min, n_max))
    r = draw(st.integers(1, n))
    seed = draw(st.integers(0, 2**32 - 1))
    n_ops = draw(st.one_of(st.none(), st.integers(r, min(r + 4, (1 << r) - 1)))) if extra_ops else None
    return random_commuting_set(n, r, seed=seed, n_ops=n_ops)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def all_paulis(n):
    for digits in itertools.product("IXYZ", repeat=n):
        yield PauliString.from_bits(
            n,
            sum(1 << j for j, d in enumerate(digits) if d in "XY"),
            sum(1 << j for j, d in enumerate(digits) if d in "ZY"),
        )


# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE: dict[str, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE, key=lambda k: (int(k.rstrip("abcdefghijklmnopqrstuvwxyz")), k)):
        terminalreporter.write_line(ACCEPTANCE[k])
