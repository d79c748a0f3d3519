"""Pauli strings, their binary tableau, and generator extraction.

A Pauli string on ``n`` qubits is stored as two ``n``-bit vectors: digit
``j`` is I, X, Z or Y when ``(x[j], z[j])`` is (0,0), (1,0), (0,1) or (1,1).
The sign bit is 1 for a leading minus.

The :class:`Tableau` keeps its X and Z blocks column-major (one integer per
qubit, bit ``k`` = row ``k``) because Clifford conjugation and the
diagonalization stages act on whole columns at a time.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .gf2 import BitMatrix, BitVector, eliminate

_DIGITS = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}
_LETTERS = {v: k for k, v in _DIGITS.items()}


class PauliParseError(ValueError):
    def __init__(self, message: str, position: int | None = None, line: int | None = None):
        self.position = position
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if position is not None:
            where.append(f"position {position}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)


class NonCommutingError(ValueError):
    """Raised when operators that must commute do not; carries the offending pair."""

    def __init__(self, i: int, j: int, p: PauliString, q: PauliString):
        self.pair = (i, j)
        self.operators = (p, q)
        super().__init__(f"operators {i} ({p}) and {j} ({q}) anticommute")


@dataclass(frozen=True)
class PauliString:
    n: int
    x: BitVector
    z: BitVector
    sign: int = 0

    def __post_init__(self):
        if self.x.length != self.n or self.z.length != self.n:
            raise ValueError("x/z length does not match qubit count")
        if self.sign not in (0, 1):
            raise ValueError("sign must be 0 or 1")

    @classmethod
    def from_bits(cls, n: int, x: int, z: int, sign: int = 0) -> PauliString:
        return cls(n, BitVector(n, x), BitVector(n, z), sign)

    @classmethod
    def identity(cls, n: int) -> PauliString:
        return cls.from_bits(n, 0, 0)

    def digit(self, j: int) -> str:
        return _LETTERS[(self.x[j], self.z[j])]

    @property
    def weight(self) -> int:
        return (self.x.bits | self.z.bits).bit_count()

    def is_diagonal(self) -> bool:
        return self.x.bits == 0

    def symplectic(self) -> BitVector:
        """The row ``(x | z)`` of length ``2n``."""
        return self.x.concat(self.z)

    def unsigned(self) -> PauliString:
        return PauliString(self.n, self.x, self.z, 0)

    def __str__(self) -> str:
        return ("-" if self.sign else "") + "".join(self.digit(j) for j in range(self.n))

    def __repr__(self) -> str:
        return f"PauliString('{self}')"


def parse_pauli(text: str) -> PauliString:
    """Parse ``[+-]?[IXYZ]+``; qubit 0 is the leftmost letter."""
    if not text:
        raise PauliParseError("empty Pauli string", 0)
    sign = 0
    start = 0
    if text[0] in "+-":
        sign = int(text[0] == "-")
        start = 1
        if len(text) == 1:
            raise PauliParseError("sign without Pauli letters", 1)
    x = z = 0
    for pos in range(start, len(text)):
        ch = text[pos]
        if ch not in _DIGITS:
            raise PauliParseError(f"invalid Pauli character {ch!r}", pos)
        bx, bz = _DIGITS[ch]
        j = pos - start
        x |= bx << j
        z |= bz << j
    return PauliString.from_bits(len(text) - start, x, z, sign)


def format_pauli(p: PauliString) -> str:
    return str(p)


def symplectic_product(p: PauliString, q: PauliString) -> int:
    if p.n != q.n:
        raise ValueError(f"qubit count mismatch: {p.n} vs {q.n}")
    return ((p.x.bits & q.z.bits).bit_count() + (p.z.bits & q.x.bits).bit_count()) & 1


def commutes(p: PauliString, q: PauliString) -> bool:
    return symplectic_product(p, q) == 0


@dataclass(frozen=True)
class NullVector:
    """A pair ``(v, w)`` with ``(X|Z)(v;w) = 0`` for some stage tableau."""

    v: BitVector
    w: BitVector

    @classmethod
    def from_bits(cls, n: int, v: int, w: int) -> NullVector:
        return cls(BitVector(n, v), BitVector(n, w))

    @property
    def n(self) -> int:
        return self.v.length

    @property
    def weight(self) -> int:
        return (self.v.bits | self.w.bits).bit_count()

    def support(self) -> list[int]:
        s = self.v.bits | self.w.bits
        return [j for j in range(self.n) if (s >> j) & 1]

    def as_vector(self) -> BitVector:
        return self.v.concat(self.w)

    def __str__(self) -> str:
        return f"({self.v}|{self.w})"


class Tableau:
    """``N`` Pauli rows on ``n`` qubits: the X block, Z block and sign column.

    ``xcols[j]`` / ``zcols[j]`` hold column ``j`` of the X / Z block as an
    ``N``-bit integer; ``signs`` holds the sign column the same way.
    """

    __slots__ = ("n", "n_rows", "xcols", "zcols", "signs")

    def __init__(self, n: int, n_rows: int, xcols: Sequence[int], zcols: Sequence[int], signs: int = 0):
        if len(xcols) != n or len(zcols) != n:
            raise ValueError("column count does not match qubit count")
        self.n = n
        self.n_rows = n_rows
        self.xcols = list(xcols)
        self.zcols = list(zcols)
        self.signs = signs

    @classmethod
    def from_paulis(cls, paulis: Sequence[PauliString]) -> Tableau:
        if not paulis:
            raise ValueError("need at least one Pauli string")
        n = paulis[0].n
        for p in paulis:
            if p.n != n:
                raise ValueError(f"mixed qubit counts: {n} and {p.n}")
        xm = BitMatrix([p.x.bits for p in paulis], n).T
        zm = BitMatrix([p.z.bits for p in paulis], n).T
        signs = sum(p.sign << k for k, p in enumerate(paulis))
        return cls(n, len(paulis), xm.rows, zm.rows, signs)

    @classmethod
    def from_strings(cls, strings: Iterable[str]) -> Tableau:
        return cls.from_paulis([parse_pauli(s) for s in strings])

    @property
    def N(self) -> int:
        return self.n_rows

    def copy(self) -> Tableau:
        return Tableau(self.n, self.n_rows, self.xcols, self.zcols, self.signs)

    @property
    def x_block(self) -> BitMatrix:
        return BitMatrix(self.xcols, self.n_rows).T

    @property
    def z_block(self) -> BitMatrix:
        return BitMatrix(self.zcols, self.n_rows).T

    @property
    def matrix(self) -> BitMatrix:
        """The ``N x 2n`` block matrix ``(X|Z)``."""
        return self.x_block.hstack(self.z_block)

    def sign_vector(self) -> BitVector:
        return BitVector(self.n_rows, self.signs)

    def rows(self) -> list[PauliString]:
        xs = self.x_block.rows
        zs = self.z_block.rows
        return [PauliString.from_bits(self.n, xs[k], zs[k], (self.signs >> k) & 1)
                for k in range(self.n_rows)]

    def row(self, k: int) -> PauliString:
        x = sum(((c >> k) & 1) << j for j, c in enumerate(self.xcols))
        z = sum(((c >> k) & 1) << j for j, c in enumerate(self.zcols))
        return PauliString.from_bits(self.n, x, z, (self.signs >> k) & 1)

    def restrict(self, qubits: Sequence[int]) -> Tableau:
        """Keep only the listed qubit columns, in the given order."""
        return Tableau(len(qubits), self.n_rows,
                       [self.xcols[q] for q in qubits],
                       [self.zcols[q] for q in qubits], self.signs)

    def active_qubits(self) -> list[int]:
        """Qubits on which some row is not yet diagonal."""
        return [j for j, c in enumerate(self.xcols) if c]

    def find_anticommuting_pair(self) -> tuple[int, int] | None:
        rows = self.rows()
        for i in range(len(rows)):
            for j in range(i + 1, len(rows)):
                if not commutes(rows[i], rows[j]):
                    return i, j
        return None

    def require_commuting(self) -> None:
        pair = self.find_anticommuting_pair()
        if pair is not None:
            i, j = pair
            raise NonCommutingError(i, j, self.row(i), self.row(j))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Tableau):
            return NotImplemented
        return (self.n, self.n_rows, self.xcols, self.zcols, self.signs) == \
            (other.n, other.n_rows, other.xcols, other.zcols, other.signs)

    def __str__(self) -> str:
        return "\n".join(str(p) for p in self.rows())

    def __repr__(self) -> str:
        return f"Tableau(n={self.n}, N={self.n_rows})"


@dataclass
class GeneratingSet:
    """Independent rows of a commuting tableau.

    ``rows`` indexes the rows of the source tableau that were kept, and
    ``qubit_map[j]`` is the original qubit behind column ``j``.
    """

    tableau: Tableau
    rows: list[int]
    qubit_map: list[int] = field(default_factory=list)

    @property
    def r(self) -> int:
        return self.tableau.n_rows

    @property
    def n(self) -> int:
        return self.tableau.n


def independent_generators(t: Tableau, check: bool = True,
                           qubit_map: Sequence[int] | None = None) -> GeneratingSet:
    """Select a maximal independent subset of the rows of ``t``.

    Rows are scanned in order and kept when they are not in the span of the
    rows kept so far, so the result consists of original operators (signs
    intact) and every row of ``t`` is a GF(2) combination of them.
    """
    if check:
        t.require_commuting()
    n = t.n
    mat = t.matrix.rows
    seen = set()
    basis: dict[int, int] = {}
    kept = []
    for k, row in enumerate(mat):
        if row == 0 or row in seen:
            continue
        seen.add(row)
        x = row
        while x:
            top = x.bit_length() - 1
            b = basis.get(top)
            if b is None:
                basis[top] = x
                kept.append(k)
                break
            x ^= b
    xs = [mat[k] & ((1 << n) - 1) for k in kept]
    zs = [mat[k] >> n for k in kept]
    xcols = BitMatrix(xs, n).T.rows if kept else [0] * n
    zcols = BitMatrix(zs, n).T.rows if kept else [0] * n
    signs = sum(((t.signs >> k) & 1) << i for i, k in enumerate(kept))
    gen = Tableau(n, len(kept), xcols, zcols, signs)
    return GeneratingSet(gen, kept, list(qubit_map) if qubit_map is not None else list(range(n)))


@dataclass
class StandardForm:
    """Generators rewritten as ``(1 A | B)``.

    The frame is reached from the generating set's qubit labels by applying a
    Hadamard on each qubit in ``hadamards`` (exchanging its X and Z columns)
    and then relabeling so that column ``k`` is qubit ``qubit_perm[k]``.
    Row operations make the rows products of the original generators, so the
    sign column is not meaningful here.
    """

    tableau: Tableau
    qubit_perm: list[int]
    hadamards: list[int]

    @property
    def r(self) -> int:
        return self.tableau.n_rows

    @property
    def n(self) -> int:
        return self.tableau.n

    def to_original(self, vec: int) -> NullVector:
        """Map a ``2n``-bit vector from this frame back to the generating set's labels."""
        n = self.n
        v = w = 0
        had = set(self.hadamards)
        for k, q in enumerate(self.qubit_perm):
            bx = (vec >> k) & 1
            bz = (vec >> (n + k)) & 1
            if q in had:
                bx, bz = bz, bx
            v |= bx << q
            w |= bz << q
        return NullVector.from_bits(n, v, w)

    def restore(self) -> Tableau:
        """Undo the relabeling and the Hadamards (rows stay row-reduced)."""
        n = self.n
        xcols = [0] * n
        zcols = [0] * n
        for k, q in enumerate(self.qubit_perm):
            xcols[q] = self.tableau.xcols[k]
            zcols[q] = self.tableau.zcols[k]
        for q in self.hadamards:
            xcols[q], zcols[q] = zcols[q], xcols[q]
        return Tableau(n, self.tableau.n_rows, xcols, zcols, 0)


def standard_form(g: GeneratingSet) -> StandardForm:
    """Bring independent commuting generators to ``(1_r A | B)``.

    The X block is row reduced first.  Rows left with an empty X part are
    then reduced on Z columns of qubits that carry no X pivot; commutation
    with the X-pivot rows guarantees those Z columns have full rank.  A
    Hadamard on each such qubit moves those pivots into the X block, after
    which the X pivot columns form an identity and are moved to the front.
    """
    t = g.tableau
    n, r = t.n, t.n_rows
    mask = (1 << n) - 1
    rows = list(t.matrix.rows)
    xpiv = eliminate(rows, range(n))
    k = len(xpiv)
    lower = rows[k:]
    taken = set(xpiv)
    zpiv = eliminate(lower, [n + q for q in range(n) if q not in taken])
    if k + len(zpiv) != r:
        raise ValueError("generators are dependent or do not commute")
    hadamards = [c - n for c in zpiv]
    rows = rows[:k] + lower
    for q in hadamards:
        for i, row in enumerate(rows):
            bx = (row >> q) & 1
            bz = (row >> (n + q)) & 1
            if bx != bz:
                rows[i] = row ^ (1 << q) ^ (1 << (n + q))
    lead = xpiv + hadamards
    piv = eliminate(rows, lead)
    assert piv == lead
    perm = lead + [q for q in range(n) if q not in set(lead)]
    new_rows = []
    for row in rows:
        x = row & mask
        z = row >> n
        nx = nz = 0
        for pos, q in enumerate(perm):
            nx |= ((x >> q) & 1) << pos
            nz |= ((z >> q) & 1) << pos
        new_rows.append(nx | (nz << n))
    m = BitMatrix(new_rows, 2 * n)
    std = Tableau(n, r, m.select_columns(range(n)).T.rows, m.select_columns(range(n, 2 * n)).T.rows, 0)
    return StandardForm(std, perm, hadamards)


def dependent_column_candidates(sf: StandardForm) -> list[int]:
    """Columns beyond the identity block of minimum Hamming weight, ascending."""
    t = sf.tableau
    n, r = t.n, t.n_rows
    cols = [(m, (t.xcols[m] if m < n else t.zcols[m - n]).bit_count()) for m in range(r, 2 * n)]
    if not cols:
        raise ValueError("no dependent columns beyond the identity block")
    best = min(w for _, w in cols)
    return [m for m, w in cols if w == best]


def null_vector_from_column(sf: StandardForm, m: int) -> NullVector:
    """Sum column ``m`` with the identity columns it is built from."""
    t = sf.tableau
    n = t.n
    col = t.xcols[m] if m < n else t.zcols[m - n]
    vec = (1 << m) | col  # row i of the identity block is column i
    return sf.to_original(vec)


def min_weight_dependent_column(sf: StandardForm) -> NullVector:
    """Null vector from the lightest dependent column (lowest index on ties)."""
    return null_vector_from_column(sf, dependent_column_candidates(sf)[0])


def read_terms(text: str) -> list[tuple[float, PauliString]]:
    """Parse a Hamiltonian listing.

    Accepts either a JSON document (a list of ``{coefficient, pauli}``
    objects, or an object with a ``terms`` list of them) or line-oriented
    ``<coefficient> <pauli>`` text with ``#`` comments.  A line holding only
    a Pauli string gets coefficient 1.
    """
    stripped = text.lstrip()
    if stripped.startswith("[") or stripped.startswith("{"):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise PauliParseError(f"invalid JSON: {exc.msg}", line=exc.lineno) from exc
        items = doc["terms"] if isinstance(doc, dict) else doc
        terms = []
        for idx, item in enumerate(items):
            try:
                terms.append((float(item.get("coefficient", 1.0)), parse_pauli(item["pauli"])))
            except PauliParseError as exc:
                raise PauliParseError(f"term {idx}: {exc}") from exc
            except (KeyError, TypeError, ValueError, AttributeError) as exc:
                raise PauliParseError(f"term {idx}: malformed entry {item!r}") from exc
        _check_width(terms)
        return terms
    terms = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) == 1:
            coef, word = 1.0, parts[0]
        elif len(parts) == 2:
            try:
                coef = float(parts[0])
            except ValueError:
                raise PauliParseError(f"invalid coefficient {parts[0]!r}", line=lineno) from None
            word = parts[1]
        else:
            raise PauliParseError("expected '<coefficient> <pauli>'", line=lineno)
        try:
            p = parse_pauli(word)
        except PauliParseError as exc:
            raise PauliParseError(str(exc), line=lineno) from None
        if terms and p.n != terms[0][1].n:
            raise PauliParseError(f"qubit count {p.n} differs from {terms[0][1].n}", line=lineno)
        terms.append((coef, p))
    return terms


def _check_width(terms):
    for idx, (_, p) in enumerate(terms):
        if p.n != terms[0][1].n:
            raise PauliParseError(f"term {idx}: qubit count {p.n} differs from {terms[0][1].n}")


def write_terms(terms: Sequence[tuple[float, PauliString]]) -> str:
    return "".join(f"{c!r} {p}\n" for c, p in terms)
