import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from webbicluster.usage_matrix import (
    AccessMatrix,
    Session,
    SessionLog,
    build_matrix,
    parse_clickstream,
    read_matrix_csv,
    write_matrix_csv,
)


def _log(*pairs):
    return SessionLog(tuple(Session(u, tuple(p)) for u, p in pairs))


class TestParseClickstream:
    def test_per_user_sequence(self):
        log = parse_clickstream("1 2 3\n2 2", "per-user-sequence")
        assert [(s.user_id, s.page_ids) for s in log] == [("u1", ("1", "2", "3")), ("u2", ("2", "2"))]

    def test_user_prefixed_groups_in_encounter_order(self):
        log = parse_clickstream("a\t1\nb\t2\na\t1", "user-prefixed")
        assert [(s.user_id, s.page_ids) for s in log] == [("a", ("1", "1")), ("b", ("2",))]

    @pytest.mark.parametrize("fmt", ["per-user-sequence", "user-prefixed"])
    def test_empty_input(self, fmt):
        with pytest.raises(ValueError, match="no sessions"):
            parse_clickstream("", fmt)

    def test_wrong_field_count_names_line(self):
        with pytest.raises(ValueError, match="line 2"):
            parse_clickstream("a\t1\nb\t2\t3", "user-prefixed")

    def test_empty_token_names_line(self):
        with pytest.raises(ValueError, match="line 1"):
            parse_clickstream("\t1\n", "user-prefixed")

    def test_blank_line_in_sequence_log(self):
        with pytest.raises(ValueError, match="line 2"):
            parse_clickstream("1 2\n\n3 4", "per-user-sequence")

    def test_unknown_format(self):
        with pytest.raises(ValueError, match="unknown log format"):
            parse_clickstream("1 2", "apache")


class TestBuildMatrix:
    def test_counts(self):
        m = build_matrix(_log(("u1", ["p1", "p1", "p2"]), ("u2", ["p2"])))
        assert m.user_labels == ("u1", "u2")
        assert m.page_labels == ("p1", "p2")
        np.testing.assert_array_equal(m.values, [[2, 1], [0, 1]])

    def test_three_users(self):
        m = build_matrix(_log(("u1", ["p2", "p3"]), ("u2", ["p3", "p3"]), ("u3", ["p2"])))
        np.testing.assert_array_equal(m.values, [[1, 1], [0, 2], [1, 0]])

    def test_single_page_is_too_small(self):
        with pytest.raises(ValueError, match="matrix too small"):
            build_matrix(_log(("u1", ["p1"]), ("u2", ["p1"])))

    def test_empty_log(self):
        with pytest.raises(ValueError, match="no sessions"):
            build_matrix(SessionLog())

    def test_labels_sorted(self):
        m = build_matrix(_log(("zed", ["b", "a"]), ("amy", ["c"])))
        assert m.user_labels == ("amy", "zed")
        assert m.page_labels == ("a", "b", "c")


sessions_strategy = st.lists(
    st.tuples(
        st.sampled_from(["u1", "u2", "u3", "u4"]),
        st.lists(st.sampled_from(["a", "b", "c", "d", "e"]), min_size=1, max_size=6),
    ),
    min_size=1,
    max_size=12,
)


@settings(max_examples=60, deadline=None)
@given(sessions_strategy, st.randoms())
def test_hits_conserved_and_order_invariant(pairs, rnd):
    log = _log(*pairs)
    try:
        m = build_matrix(log)
    except ValueError:
        return
    assert m.total_hits == log.total_visits
    shuffled = list(pairs)
    rnd.shuffle(shuffled)
    assert build_matrix(_log(*shuffled)) == m


class TestMatrixCsv:
    def test_read(self):
        m = read_matrix_csv("user,p1,p2\nu1,2,1\nu2,0,1")
        assert m == AccessMatrix([[2, 1], [0, 1]], ["u1", "u2"], ["p1", "p2"])

    def test_duplicate_page_label(self):
        with pytest.raises(ValueError, match="duplicate page label p1"):
            read_matrix_csv("user,p1,p1\nu1,1,2\nu2,3,4")

    def test_duplicate_user_label(self):
        with pytest.raises(ValueError, match="row 3, column 1: duplicate user label u1"):
            read_matrix_csv("user,p1,p2\nu1,1,2\nu1,3,4")

    def test_ragged_row(self):
        with pytest.raises(ValueError, match="row 3"):
            read_matrix_csv("user,p1,p2\nu1,1,2\nu2,3")

    def test_non_numeric(self):
        with pytest.raises(ValueError, match="row 2, column 3"):
            read_matrix_csv("user,p1,p2\nu1,1,x\nu2,3,4")

    def test_negative_rejected(self):
        with pytest.raises(ValueError, match="negative"):
            read_matrix_csv("user,p1,p2\nu1,1,-2\nu2,3,4")

    def test_plain_decimal_output(self):
        m = AccessMatrix([[1e-5, 2.0], [123456789.0, 0.5]], ["a", "b"], ["x", "y"])
        text = write_matrix_csv(m)
        assert "e" not in text.replace("user", "")
        assert read_matrix_csv(text) == m

    @settings(max_examples=80, deadline=None)
    @given(st.integers(2, 6), st.integers(2, 6), st.data())
    def test_round_trip(self, n, m, data):
        vals = data.draw(st.lists(st.integers(0, 10**6), min_size=n * m, max_size=n * m))
        mat = AccessMatrix(np.array(vals, dtype=float).reshape(n, m),
                           [f"user{i}" for i in range(n)], [f"page,{j}" for j in range(m)])
        assert read_matrix_csv(write_matrix_csv(mat)) == mat


def test_access_matrix_invariants():
    with pytest.raises(ValueError, match="too small"):
        AccessMatrix([[1, 2]], ["a"], ["x", "y"])
    with pytest.raises(ValueError, match="duplicate user label"):
        AccessMatrix([[1, 2], [3, 4]], ["a", "a"], ["x", "y"])
    with pytest.raises(ValueError, match="expected 2 page labels"):
        AccessMatrix([[1, 2], [3, 4]], ["a", "b"], ["x"])
    m = AccessMatrix([[1, 2], [3, 4]], ["a", "b"], ["x", "y"])
    with pytest.raises(ValueError):
        m.values[0, 0] = 5
