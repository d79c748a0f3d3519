import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import all_paulis, brute_rank, commuting_sets, span_size
from qwdiag.clifford import pauli_matrix
from qwdiag.gf2 import mat_vec, rank
from qwdiag.pauli import (NonCommutingError, PauliParseError, Tableau, commutes,
                          dependent_column_candidates, independent_generators, min_weight_dependent_column,
                          parse_pauli, read_terms, standard_form, write_terms)

paulis_text = st.text(alphabet="IXYZ", min_size=1, max_size=8).flatmap(
    lambda s: st.sampled_from([s, "-" + s, "+" + s]))


def test_parse_examples():
    p = parse_pauli("XZI")
    assert p.x.to_list() == [1, 0, 0] and p.z.to_list() == [0, 1, 0] and p.sign == 0
    q = parse_pauli("-Y")
    assert (q.x.bits, q.z.bits, q.sign) == (1, 1, 1)
    e = parse_pauli("IIII")
    assert e.n == 4 and e.x.bits == 0 and e.z.bits == 0


@pytest.mark.parametrize("bad, pos", [("", 0), ("XQZ", 1), ("-", 1), ("-XA", 2), ("x", 0)])
def test_parse_errors_report_position(bad, pos):
    with pytest.raises(PauliParseError) as info:
        parse_pauli(bad)
    assert info.value.position == pos


@given(paulis_text)
def test_format_roundtrip(text):
    p = parse_pauli(text)
    assert parse_pauli(str(p)) == p
    assert str(p) == text.lstrip("+")


def test_commutes_against_dense_matrices():
    ps = list(all_paulis(2))
    mats = [pauli_matrix(p) for p in ps]
    for p, a in zip(ps, mats):
        for q, b in zip(ps, mats):
            assert commutes(p, q) == np.allclose(a @ b, b @ a)
    assert commutes(parse_pauli("XX"), parse_pauli("YY"))
    assert not commutes(parse_pauli("X"), parse_pauli("Z"))


def test_commutes_length_mismatch():
    with pytest.raises(ValueError):
        commutes(parse_pauli("X"), parse_pauli("XX"))


def test_tableau_roundtrip():
    t = Tableau.from_strings(["XZI", "-YYZ", "IIX"])
    assert [str(p) for p in t.rows()] == ["XZI", "-YYZ", "IIX"]
    assert t.x_block.to_array().tolist() == [[1, 0, 0], [1, 1, 0], [0, 0, 1]]
    assert t.active_qubits() == [0, 1, 2]


def test_require_commuting_names_pair():
    t = Tableau.from_strings(["ZZ", "XI", "IZ"])
    with pytest.raises(NonCommutingError) as info:
        t.require_commuting()
    assert info.value.pair == (0, 1)


def test_generators_examples():
    g = independent_generators(Tableau.from_strings(["ZZ", "ZI", "IZ"]))
    assert g.r == 2 and g.rows == [0, 1]
    assert independent_generators(Tableau.from_strings(["XYZ"])).r == 1
    with pytest.raises(NonCommutingError):
        independent_generators(Tableau.from_strings(["X", "Z"]))


@settings(max_examples=150, deadline=None)
@given(commuting_sets(n_max=7))
def test_generators_span_input(paulis):
    t = Tableau.from_paulis(paulis)
    g = independent_generators(t)
    rows = list(t.matrix.rows)
    assert g.r == brute_rank(rows) == rank(t.matrix)
    assert g.r <= min(t.n, t.N)
    assert span_size(g.tableau.matrix.rows) == span_size(rows)
    # kept rows are original operators with their own signs
    for i, k in enumerate(g.rows):
        assert g.tableau.row(i) == paulis[k]


@settings(max_examples=150, deadline=None)
@given(commuting_sets(n_max=7))
def test_standard_form_structure(paulis):
    g = independent_generators(Tableau.from_paulis(paulis))
    sf = standard_form(g)
    n, r = sf.n, sf.r
    x = sf.tableau.x_block.to_array()
    assert np.array_equal(x[:, :r], np.eye(r, dtype=np.uint8))
    assert sorted(sf.qubit_perm) == list(range(n))
    # restoring gives the same row space as the generators
    assert span_size(sf.restore().matrix.rows) == span_size(g.tableau.matrix.rows)
    if r < 2 * n:
        cands = dependent_column_candidates(sf)
        u = min_weight_dependent_column(sf)
        assert not mat_vec(g.tableau.matrix, u.as_vector()).any()
        col = cands[0]
        t = sf.tableau
        w = (t.xcols[col] if col < n else t.zcols[col - n]).bit_count()
        assert u.weight <= w + 1


def test_read_terms_line_format():
    text = "# comment\n0.5 XX\n\n-1.25 -ZI  # trailing\nYY\n"
    terms = read_terms(text)
    assert [(c, str(p)) for c, p in terms] == [(0.5, "XX"), (-1.25, "-ZI"), (1.0, "YY")]
    assert read_terms(write_terms(terms)) == terms


def test_read_terms_json():
    terms = read_terms('{"terms": [{"coefficient": 2, "pauli": "XZ"}, {"pauli": "ZX"}]}')
    assert [(c, str(p)) for c, p in terms] == [(2.0, "XZ"), (1.0, "ZX")]


@pytest.mark.parametrize("text, line", [("0.5 XX\n0.1 XQ\n", 2), ("abc XX\n", 1),
                                        ("1 XX\n2 XXX\n", 2), ("1 2 3\n", 1)])
def test_read_terms_errors(text, line):
    with pytest.raises(PauliParseError) as info:
        read_terms(text)
    assert info.value.line == line
