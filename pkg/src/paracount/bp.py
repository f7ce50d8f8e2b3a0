"""Layered branching programs with nondeterministic inputs.

A program reads ordinary bits x_1..x_numX and nondeterministic bits
y_1..y_numY.  Nodes sit in layers; every edge goes to a strictly later
layer and carries the bit value of the departed node's variable (``None``
for forced pass-through nodes, which every input follows).  An input pair
is accepted when a source-to-sink path consistent with it exists; the
accepting count of an ordinary input x is the number of y assignments it
accepts with.

Read-once certification confines each y_j's label occurrences to one band
of consecutive layers, bands ordered by j; ``stagger`` rebuilds a program
into that shape (inserting pass-through nodes) whenever every source-sink
path reads y variables in nondecreasing index order, each at most once.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import CountingError, reject_unknown_fields

Label = tuple  # ("x", i) | ("y", j) | ("pass",)

#: Exhaustive y-enumeration refuses beyond this width.
MAX_Y_BITS = 20


@dataclass(frozen=True)
class BranchingProgram:
    layers: tuple[tuple[int, ...], ...]
    labels: tuple[tuple[int, Label], ...]  # sorted (node, label) pairs
    edges: tuple[tuple[int, int, int | None], ...]
    num_x: int
    num_y: int
    source: int
    sink: int

    def label_of(self, node: int) -> Label:
        return dict(self.labels).get(node, ("pass",))

    def layer_of(self) -> dict[int, int]:
        return {v: i for i, layer in enumerate(self.layers) for v in layer}

    def out_edges(self) -> dict[int, list[tuple[int, int | None]]]:
        out: dict[int, list[tuple[int, int | None]]] = {}
        for u, v, bit in self.edges:
            out.setdefault(u, []).append((v, bit))
        return out

    def nodes(self) -> list[int]:
        return [v for layer in self.layers for v in layer]


def validate_bp(
    layers: Sequence[Sequence[int]],
    labels: Mapping[int, Label],
    edges: Sequence[tuple[int, int, int | None]],
    num_x: int,
    num_y: int,
    source: int,
    sink: int,
) -> BranchingProgram:
    """Build a BranchingProgram, rejecting malformed input."""
    layer_tuple = tuple(tuple(int(v) for v in layer) for layer in layers)
    all_nodes = [v for layer in layer_tuple for v in layer]
    if len(all_nodes) != len(set(all_nodes)):
        raise CountingError("not-layered", "a node appears in two layers")
    node_set = set(all_nodes)
    if num_x < 0 or num_y < 0:
        raise CountingError("bad-width", "numX and numY must be >= 0")
    if not layer_tuple or source not in layer_tuple[0]:
        raise CountingError("source-sink-misplaced", "source must sit in layer 0")
    if sink not in layer_tuple[-1]:
        raise CountingError("source-sink-misplaced", "sink must sit in the last layer")
    norm_labels = {}
    for node, label in labels.items():
        node = int(node)
        if node not in node_set:
            raise CountingError("not-layered", f"label for unknown node {node}")
        if label[0] == "x":
            if not (1 <= label[1] <= num_x):
                raise CountingError(
                    "label-out-of-range", f"x_{label[1]} with numX = {num_x}"
                )
        elif label[0] == "y":
            if not (1 <= label[1] <= num_y):
                raise CountingError(
                    "label-out-of-range", f"y_{label[1]} with numY = {num_y}"
                )
        elif label[0] != "pass":
            raise CountingError("bad-label", f"label {label!r}")
        norm_labels[node] = tuple(label)
    layer_index = {v: i for i, layer in enumerate(layer_tuple) for v in layer}
    norm_edges = []
    for u, v, bit in edges:
        u, v = int(u), int(v)
        if u not in node_set or v not in node_set:
            raise CountingError("not-layered", f"edge ({u}, {v}) off the node set")
        if layer_index[u] >= layer_index[v]:
            raise CountingError(
                "not-layered", f"edge ({u}, {v}) does not go to a later layer"
            )
        is_pass = norm_labels.get(u, ("pass",))[0] == "pass"
        if is_pass:
            if bit is not None:
                raise CountingError(
                    "bad-bit-label", f"pass node {u} must use null edge labels"
                )
        elif bit not in (0, 1):
            raise CountingError("bad-bit-label", f"edge ({u}, {v}) labelled {bit!r}")
        norm_edges.append((u, v, bit))
    program = BranchingProgram(
        layer_tuple,
        tuple(sorted(norm_labels.items())),
        tuple(norm_edges),
        num_x,
        num_y,
        source,
        sink,
    )
    for node, fanout in program.out_edges().items():
        if program.label_of(node)[0] == "pass" and len(fanout) > 1:
            raise CountingError(
                "bad-bit-label", f"pass node {node} has {len(fanout)} outgoing edges"
            )
    return program


def _reachable_from_source(p: BranchingProgram) -> set[int]:
    out = p.out_edges()
    seen = {p.source}
    stack = [p.source]
    while stack:
        u = stack.pop()
        for v, _ in out.get(u, []):
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return seen


def is_strictly_deterministic(p: BranchingProgram) -> bool:
    """The two-edges-per-reachable-node notion: every reachable non-sink
    variable node has exactly one 0-edge and one 1-edge; reachable pass
    nodes have exactly one forced edge."""
    out = p.out_edges()
    for node in _reachable_from_source(p):
        if node == p.sink:
            continue
        fanout = out.get(node, [])
        if p.label_of(node)[0] == "pass":
            if len(fanout) != 1:
                return False
        elif sorted(bit for _, bit in fanout) != [0, 1]:
            return False
    return True


def is_deterministic_given_inputs(p: BranchingProgram) -> bool:
    """No node offers two edges for the same bit value; fixing (x, y) then
    forces at most one maximal walk (missing edges mean rejection)."""
    for node, fanout in p.out_edges().items():
        if p.label_of(node)[0] == "pass":
            if len(fanout) > 1:
                return False
        else:
            bits = [bit for _, bit in fanout]
            if len(bits) != len(set(bits)):
                return False
    return True


def _bit_of(label: Label, x: Sequence[int], y: Sequence[int]) -> int | None:
    if label[0] == "x":
        return x[label[1] - 1]
    if label[0] == "y":
        return y[label[1] - 1]
    return None


def bp_accepts(p: BranchingProgram, x: Sequence[int], y: Sequence[int]) -> bool:
    """True iff some source-to-sink path is consistent with (x, y)."""
    if len(x) != p.num_x or len(y) != p.num_y:
        raise CountingError(
            "width-mismatch",
            f"got |x| = {len(x)}, |y| = {len(y)}, expected {p.num_x}, {p.num_y}",
        )
    out = p.out_edges()
    reachable = {p.source}
    for layer in p.layers:
        for u in layer:
            if u not in reachable:
                continue
            want = _bit_of(p.label_of(u), x, y)
            for v, bit in out.get(u, []):
                if bit is None or want is None or bit == want:
                    reachable.add(v)
    return p.sink in reachable


def bp_count_acc(p: BranchingProgram, x: Sequence[int]) -> int:
    """Number of y assignments accepted for the ordinary input x.

    Exhaustive over {0,1}^numY; this is the oracle the band-propagation
    counter is checked against.  Unread y bits are free, so they double the
    count per bit.
    """
    if not is_deterministic_given_inputs(p):
        raise CountingError(
            "not-deterministic", "a node offers two edges for one bit value"
        )
    if p.num_y > MAX_Y_BITS:
        raise CountingError("too-many-y-bits", f"numY = {p.num_y} beyond desk scale")
    count = 0
    for mask in range(2 ** p.num_y):
        y = [(mask >> j) & 1 for j in range(p.num_y)]
        if bp_accepts(p, x, y):
            count += 1
    return count


# ---------------------------------------------------------------------------
# Read-once certification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ReadOnceCertificate:
    """Cut layers i_0 < i_1 < ... < i_m: y_j occurs only in [i_{j-1}, i_j].

    Trailing cuts may exceed the top layer index when the last bands are
    empty of occurrences.
    """

    cut_layers: tuple[int, ...]


@dataclass(frozen=True)
class Refusal:
    """Names a pair of y variables whose occurrence layers cannot be banded."""

    earlier_variable: int
    later_variable: int
    reason: str


def _occurrence_layers(p: BranchingProgram) -> dict[int, tuple[int, int]]:
    layer_index = p.layer_of()
    occ: dict[int, list[int]] = {}
    for node, label in p.labels:
        if label[0] == "y":
            occ.setdefault(label[1], []).append(layer_index[node])
    return {j: (min(l), max(l)) for j, l in occ.items()}


def check_read_once_certified(p: BranchingProgram) -> ReadOnceCertificate | Refusal:
    """Greedy banding from per-variable min/max occurrence layers."""
    occ = _occurrence_layers(p)
    cuts = [0]
    provenance = 0  # variable whose occurrences pushed the last cut up
    for j in range(1, p.num_y + 1):
        prev = cuts[-1]
        if j in occ:
            lo, hi = occ[j]
            if lo < prev:
                return Refusal(
                    provenance,
                    j,
                    f"y_{j} occurs at layer {lo}, below the cut {prev} forced "
                    f"by y_{provenance}",
                )
            if hi >= prev + 1:
                cuts.append(hi)
                provenance = j
            else:
                cuts.append(prev + 1)
        else:
            cuts.append(prev + 1)
    return ReadOnceCertificate(tuple(cuts))


def _relevant_nodes(p: BranchingProgram) -> set[int]:
    forward = _reachable_from_source(p)
    into: dict[int, list[int]] = {}
    for u, v, _ in p.edges:
        into.setdefault(v, []).append(u)
    seen = {p.sink}
    stack = [p.sink]
    while stack:
        v = stack.pop()
        for u in into.get(v, []):
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return forward & seen


def _check_order_property(p: BranchingProgram) -> None:
    """Every source-to-sink path reads y indices strictly increasingly."""
    relevant = _relevant_nodes(p)
    out = p.out_edges()
    y_nodes = [
        (node, label[1]) for node, label in p.labels
        if label[0] == "y" and node in relevant
    ]
    layer_index = p.layer_of()
    y_nodes.sort(key=lambda item: layer_index[item[0]])
    for node, j in y_nodes:
        seen = set()
        stack = [node]
        while stack:
            u = stack.pop()
            for v, _ in out.get(u, []):
                if v in seen or v not in relevant:
                    continue
                seen.add(v)
                label = p.label_of(v)
                if label[0] == "y" and label[1] <= j:
                    raise CountingError(
                        "order-property-violated",
                        f"y_{label[1]} is read after y_{j} on some path",
                    )
                stack.append(v)


def stagger(p: BranchingProgram) -> BranchingProgram:
    """Rebuild p into a read-once certified program with the same accepting
    counts for every input.

    Requires the order property; already-certified programs come back
    unchanged.  The rebuild keeps only nodes on source-sink paths, assigns
    each y_j its own band of layers, and fills layer gaps with forced
    pass-through nodes.
    """
    _check_order_property(p)
    if isinstance(check_read_once_certified(p), ReadOnceCertificate):
        return p

    relevant = _relevant_nodes(p)
    if p.source not in relevant or p.sink not in relevant:
        # No accepting path at all; the empty program preserves every count.
        fresh_source, fresh_sink = 0, 1
        return validate_bp(
            [[fresh_source], [fresh_sink]],
            {fresh_source: ("pass",), fresh_sink: ("pass",)},
            [],
            p.num_x,
            p.num_y,
            fresh_source,
            fresh_sink,
        )

    out = p.out_edges()
    kept_edges = [
        (u, v, bit) for u, v, bit in p.edges if u in relevant and v in relevant
    ]
    preds: dict[int, list[int]] = {}
    for u, v, _ in kept_edges:
        preds.setdefault(v, []).append(u)

    old_layer = p.layer_of()
    ordered = sorted(relevant, key=lambda v: old_layer[v])

    # Dead-end labels are never consulted; normalising them to pass keeps
    # the bands free of spurious occurrences.
    def effective_label(node: int) -> Label:
        if not any(v in relevant for v, _ in out.get(node, [])):
            return ("pass",)
        return p.label_of(node)

    band: dict[int, int] = {}
    depth: dict[int, int] = {}
    for node in ordered:
        label = effective_label(node)
        pred_bands = [band[q] for q in preds.get(node, [])]
        inherited = max(pred_bands, default=1)
        if label[0] == "y":
            if label[1] < inherited:
                raise CountingError(
                    "order-property-violated",
                    f"y_{label[1]} read after band {inherited}",
                )
            band[node] = label[1]
        else:
            band[node] = inherited
        same = [depth[q] for q in preds.get(node, []) if band[q] == band[node]]
        depth[node] = 1 + max(same, default=0)

    heights = {j: 1 for j in range(1, p.num_y + 2)}
    for node in ordered:
        if node != p.sink:
            heights[band[node]] = max(heights[band[node]], depth[node])
    offsets = {}
    cursor = 1  # layer 0 is the fresh pass source
    for j in range(1, p.num_y + 2):
        offsets[j] = cursor
        cursor += heights[j]

    new_layer = {
        node: offsets[band[node]] + depth[node] - 1
        for node in ordered
        if node != p.sink
    }
    new_layer[p.sink] = max(new_layer.values(), default=0) + 1

    next_id = max(p.nodes()) + 1
    labels: dict[int, Label] = {node: effective_label(node) for node in ordered}
    pass_source = next_id
    next_id += 1
    labels[pass_source] = ("pass",)
    new_layer[pass_source] = 0
    edges: list[tuple[int, int, int | None]] = []

    for u, v, bit in kept_edges + [(pass_source, p.source, None)]:
        gap = new_layer[v] - new_layer[u]
        assert gap >= 1, "band-ordered layering must respect edges"
        prev = u
        prev_bit = bit if labels[u][0] != "pass" else None
        for step in range(1, gap):
            node = next_id
            next_id += 1
            labels[node] = ("pass",)
            new_layer[node] = new_layer[u] + step
            edges.append((prev, node, prev_bit))
            prev, prev_bit = node, None
        edges.append((prev, v, prev_bit))

    top = max(new_layer.values())
    layer_lists: list[list[int]] = [[] for _ in range(top + 1)]
    for node, layer in sorted(new_layer.items()):
        layer_lists[layer].append(node)
    staggered = validate_bp(
        layer_lists, labels, edges, p.num_x, p.num_y, pass_source, p.sink
    )
    assert isinstance(check_read_once_certified(staggered), ReadOnceCertificate)
    return staggered


# ---------------------------------------------------------------------------
# Fast counting under a certificate
# ---------------------------------------------------------------------------


def _check_read_once_paths(p: BranchingProgram) -> None:
    relevant = _relevant_nodes(p)
    out = p.out_edges()
    for node, label in p.labels:
        if label[0] != "y" or node not in relevant:
            continue
        seen = set()
        stack = [node]
        while stack:
            u = stack.pop()
            for v, _ in out.get(u, []):
                if v in seen or v not in relevant:
                    continue
                seen.add(v)
                if p.label_of(v) == label:
                    raise CountingError(
                        "precondition-violated",
                        f"y_{label[1]} can be read twice on one path",
                    )
                stack.append(v)


def bp_count_fast(p: BranchingProgram, x: Sequence[int]) -> int:
    """Accepting count by per-layer propagation, no y enumeration.

    Requires a read-once certificate and once-per-path reads.  The state
    tracks the next unresolved y index; reading y_j doubles pending counts
    once per skipped bit, and bits never read by the time the sink is
    reached are freed at the end.
    """
    if len(x) != p.num_x:
        raise CountingError("width-mismatch", f"|x| = {len(x)}, numX = {p.num_x}")
    certificate = check_read_once_certified(p)
    if isinstance(certificate, Refusal):
        raise CountingError(
            "precondition-violated", f"not read-once certified: {certificate.reason}"
        )
    if not is_deterministic_given_inputs(p):
        raise CountingError(
            "not-deterministic", "a node offers two edges for one bit value"
        )
    _check_read_once_paths(p)

    out = p.out_edges()
    counts: dict[int, dict[int, int]] = {p.source: {1: 1}}
    for layer in p.layers:
        for u in layer:
            if u not in counts or u == p.sink:
                continue
            label = p.label_of(u)
            for v, bit in out.get(u, []):
                target = counts.setdefault(v, {})
                for j, cnt in counts[u].items():
                    if label[0] == "x":
                        if x[label[1] - 1] != bit:
                            continue
                        target[j] = target.get(j, 0) + cnt
                    elif label[0] == "y":
                        jp = label[1]
                        if jp < j:
                            # A certified program only lets this happen on
                            # branches that cannot reach the sink.
                            continue
                        key = jp + 1
                        target[key] = target.get(key, 0) + cnt * 2 ** (jp - j)
                    else:
                        target[j] = target.get(j, 0) + cnt
    total = 0
    for j, cnt in counts.get(p.sink, {}).items():
        total += cnt * 2 ** (p.num_y - j + 1)
    return total


def k_bounded(num_y: int, f_of_param: int, num_x: int) -> bool:
    """The bounded-nondeterminism predicate: numY <= f(k) * ceil(log2 numX)."""
    return num_y <= f_of_param * max(math.ceil(math.log2(max(num_x, 2))), 1)


# ---------------------------------------------------------------------------
# File format
# ---------------------------------------------------------------------------

BP_FIELDS = {"layers", "labels", "edges", "numX", "numY", "source", "sink"}


def bp_from_json(obj: dict) -> BranchingProgram:
    if not isinstance(obj, dict):
        raise CountingError("malformed-instance", "program file must be an object")
    reject_unknown_fields(obj, BP_FIELDS, "branching program")
    labels = {}
    for node, label in obj.get("labels", {}).items():
        if "x" in label:
            labels[int(node)] = ("x", int(label["x"]))
        elif "y" in label:
            labels[int(node)] = ("y", int(label["y"]))
        elif label.get("pass"):
            labels[int(node)] = ("pass",)
        else:
            raise CountingError("bad-label", f"label {label!r}")
    edges = [
        (int(u), int(v), None if bit is None else int(bit))
        for u, v, bit in obj.get("edges", [])
    ]
    return validate_bp(
        obj["layers"],
        labels,
        edges,
        int(obj["numX"]),
        int(obj["numY"]),
        int(obj["source"]),
        int(obj["sink"]),
    )


def bp_to_json(p: BranchingProgram) -> dict:
    labels = {}
    for node, label in p.labels:
        if label[0] == "x":
            labels[str(node)] = {"x": label[1]}
        elif label[0] == "y":
            labels[str(node)] = {"y": label[1]}
        else:
            labels[str(node)] = {"pass": True}
    return {
        "layers": [list(layer) for layer in p.layers],
        "labels": labels,
        "edges": [[u, v, bit] for u, v, bit in p.edges],
        "numX": p.num_x,
        "numY": p.num_y,
        "source": p.source,
        "sink": p.sink,
    }
