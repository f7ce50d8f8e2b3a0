import random

import pytest

from paracount.bp import (
    ReadOnceCertificate,
    Refusal,
    bp_accepts,
    bp_count_acc,
    bp_count_fast,
    bp_from_json,
    bp_to_json,
    check_read_once_certified,
    is_strictly_deterministic,
    k_bounded,
    stagger,
    validate_bp,
)
from paracount.errors import CountingError
from paracount.selftest import rand_ordered_bp


def simple_x_tester():
    """Reads x_1; only the 1-edge leads to the sink."""
    return validate_bp(
        [[0], [1]], {0: ("x", 1)}, [(0, 1, 1)], 1, 0, 0, 1
    )


def y_root(both_edges=True, num_y=1):
    edges = [(0, 1, 1)] + ([(0, 1, 0)] if both_edges else [])
    return validate_bp([[0], [1]], {0: ("y", 1)}, edges, 0, num_y, 0, 1)


def test_validate_two_layer_deterministic():
    p = validate_bp([[0], [1]], {0: ("x", 1)}, [(0, 1, 0), (0, 1, 1)], 1, 0, 0, 1)
    assert is_strictly_deterministic(p)


def test_validate_rejects_same_layer_edge():
    with pytest.raises(CountingError) as err:
        validate_bp([[0, 1]], {0: ("x", 1)}, [(0, 1, 0)], 1, 0, 0, 1)
    assert err.value.code == "not-layered"


def test_validate_rejects_bad_bit():
    with pytest.raises(CountingError) as err:
        validate_bp([[0], [1]], {0: ("x", 1)}, [(0, 1, 2)], 1, 0, 0, 1)
    assert err.value.code == "bad-bit-label"


def test_validate_rejects_misplaced_source():
    with pytest.raises(CountingError) as err:
        validate_bp([[0], [1]], {0: ("x", 1)}, [(0, 1, 1)], 1, 0, 1, 1)
    assert err.value.code == "source-sink-misplaced"


def test_accepts_x_tester():
    p = simple_x_tester()
    assert bp_accepts(p, [1], [])
    assert not bp_accepts(p, [0], [])  # missing edge means reject


def test_accepts_empty_path_program():
    p = validate_bp([[0]], {}, [], 2, 1, 0, 0)
    assert bp_accepts(p, [0, 1], [0])
    assert bp_accepts(p, [1, 1], [1])


def test_accepts_y_root():
    p = y_root()
    assert bp_accepts(p, [], [0]) and bp_accepts(p, [], [1])


def test_width_mismatch():
    with pytest.raises(CountingError) as err:
        bp_accepts(simple_x_tester(), [1, 0], [])
    assert err.value.code == "width-mismatch"


def test_count_acc_examples():
    assert bp_count_acc(y_root(both_edges=True), []) == 2
    assert bp_count_acc(y_root(both_edges=False), []) == 1
    # an unread y bit doubles the count
    assert bp_count_acc(y_root(both_edges=True, num_y=2), []) == 4
    assert bp_count_acc(y_root(both_edges=False, num_y=2), []) == 2


def test_count_acc_rejects_nondeterministic_program():
    p = validate_bp(
        [[0], [1, 2], [3]],
        {0: ("y", 1), 1: ("pass",), 2: ("pass",)},
        [(0, 1, 1), (0, 2, 1), (1, 3, None), (2, 3, None)],
        0,
        1,
        0,
        3,
    )
    with pytest.raises(CountingError) as err:
        bp_count_acc(p, [])
    assert err.value.code == "not-deterministic"


def test_certificate_example():
    p = validate_bp(
        [[0], [1], [2], [3]],
        {0: ("pass",), 1: ("y", 1), 2: ("y", 2)},
        [(0, 1, None), (1, 2, 0), (1, 2, 1), (2, 3, 0), (2, 3, 1)],
        0,
        2,
        0,
        3,
    )
    cert = check_read_once_certified(p)
    assert isinstance(cert, ReadOnceCertificate)
    assert cert.cut_layers == (0, 1, 2)


def test_certificate_refusal_names_pair():
    p = validate_bp(
        [[0], [1], [2], [3]],
        {0: ("pass",), 1: ("y", 2), 2: ("y", 1)},
        [(0, 1, None), (1, 2, 0), (1, 2, 1), (2, 3, 0), (2, 3, 1)],
        0,
        2,
        0,
        3,
    )
    refusal = check_read_once_certified(p)
    assert isinstance(refusal, Refusal)
    assert (refusal.earlier_variable, refusal.later_variable) == (1, 2)


def test_certificate_degenerate_without_y_nodes():
    p = simple_x_tester()
    cert = check_read_once_certified(p)
    assert isinstance(cert, ReadOnceCertificate)
    assert cert.cut_layers == (0,)  # numY = 0: just i_0


def test_stagger_identity_on_certified_program():
    p = y_root()
    assert stagger(p) is p


def test_stagger_rejects_out_of_order_reads():
    # y_1 read at layers 1 and 3 with y_2 between them on the same path
    p = validate_bp(
        [[0], [1], [2], [3], [4]],
        {0: ("pass",), 1: ("y", 1), 2: ("y", 2), 3: ("y", 1)},
        [
            (0, 1, None),
            (1, 2, 0), (1, 2, 1),
            (2, 3, 0), (2, 3, 1),
            (3, 4, 0), (3, 4, 1),
        ],
        0,
        2,
        0,
        4,
    )
    with pytest.raises(CountingError) as err:
        stagger(p)
    assert err.value.code == "order-property-violated"


def branching_uncertified_program():
    """Two branches: one reads y_1 then y_2 early, the other reads y_1 at a
    layer after the first branch's y_2; orderable per path but y_2's
    occurrence sits strictly below a y_1 occurrence, so no certificate."""
    return validate_bp(
        [[0], [1, 2], [3, 4], [5], [6]],
        {
            0: ("x", 1),
            1: ("y", 1), 2: ("pass",),
            3: ("y", 2), 4: ("pass",),
            5: ("y", 1),
        },
        [
            (0, 1, 0),
            (0, 2, 1),
            (1, 3, 0), (1, 3, 1),
            (2, 4, None),
            (3, 6, 0), (3, 6, 1),
            (4, 5, None),
            (5, 6, 0), (5, 6, 1),
        ],
        1,
        2,
        0,
        6,
    )


def test_stagger_rebuilds_uncertified_program():
    p = branching_uncertified_program()
    assert isinstance(check_read_once_certified(p), Refusal)
    staggered = stagger(p)
    assert isinstance(check_read_once_certified(staggered), ReadOnceCertificate)
    for x in ([0], [1]):
        assert bp_count_acc(staggered, x) == bp_count_acc(p, x)
        assert bp_count_fast(staggered, x) == bp_count_acc(p, x)


def test_stagger_preserves_counts_randomly():
    rng = random.Random(61)
    for _ in range(120):
        p = rand_ordered_bp(rng)
        staggered = stagger(p)
        assert isinstance(check_read_once_certified(staggered), ReadOnceCertificate)
        for mask in range(2 ** p.num_x):
            x = [(mask >> i) & 1 for i in range(p.num_x)]
            assert bp_count_acc(staggered, x) == bp_count_acc(p, x)


def test_count_fast_examples():
    assert bp_count_fast(y_root(both_edges=True, num_y=2), []) == 4
    none_accepting = validate_bp(
        [[0], [1]], {0: ("x", 1)}, [], 1, 1, 0, 1
    )
    assert bp_count_fast(none_accepting, [1]) == 0
    assert bp_count_acc(none_accepting, [1]) == 0


def test_count_fast_matches_enumeration_randomly():
    rng = random.Random(62)
    for _ in range(120):
        p = stagger(rand_ordered_bp(rng))
        for mask in range(2 ** p.num_x):
            x = [(mask >> i) & 1 for i in range(p.num_x)]
            assert bp_count_fast(p, x) == bp_count_acc(p, x)


def test_count_fast_requires_certificate():
    p = branching_uncertified_program()
    with pytest.raises(CountingError) as err:
        bp_count_fast(p, [0])
    assert err.value.code == "precondition-violated"


def test_stagger_handles_late_variable_at_source():
    # The source reads y_3 at layer 0, below any feasible band for y_1/y_2;
    # staggering must prepend delay and re-band.
    p = validate_bp(
        [[0], [1]], {0: ("y", 3)}, [(0, 1, 0), (0, 1, 1)], 0, 4, 0, 1
    )
    assert isinstance(check_read_once_certified(p), Refusal)
    staggered = stagger(p)
    assert isinstance(check_read_once_certified(staggered), ReadOnceCertificate)
    assert bp_count_acc(staggered, []) == bp_count_acc(p, []) == 16
    assert bp_count_fast(staggered, []) == 16


def test_stagger_program_without_accepting_paths():
    p = validate_bp(
        [[0], [1], [2]],
        {0: ("x", 1), 1: ("y", 1)},
        [(0, 1, 0), (0, 1, 1)],
        1,
        1,
        0,
        2,
    )
    staggered = stagger(p)
    for x in ([0], [1]):
        assert bp_count_acc(staggered, x) == bp_count_acc(p, x) == 0
        assert bp_count_fast(staggered, x) == 0


def test_k_bounded_predicate():
    assert k_bounded(4, 2, 4)  # 4 <= 2 * ceil(log2 4)
    assert not k_bounded(5, 2, 4)
    assert k_bounded(2, 2, 2)  # size term floored at 2


def test_bp_json_roundtrip():
    p = branching_uncertified_program()
    assert bp_from_json(bp_to_json(p)) == p
    bad = bp_to_json(p)
    bad["extra"] = 1
    with pytest.raises(CountingError):
        bp_from_json(bad)
