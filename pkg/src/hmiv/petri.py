"""Place/transition Petri nets with event-labelled transitions.

Covers the analyses a net-level static checker offers for interface models:
token conservation (P-invariants via Farkas elimination), deadlock search,
boundedness observation, event availability and reinitiability over a bounded
reachability graph.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Optional

from .errors import ResourceLimit
from .expr import Span

DEFAULT_MAX_STATES = 100_000
DEFAULT_INVARIANT_CAP = 100_000


@dataclass(frozen=True)
class NetTransition:
    id: str
    inputs: dict[str, int]      # place -> weight >= 1
    outputs: dict[str, int]
    event: Optional[str] = None
    span: Optional[Span] = field(default=None, compare=False)


@dataclass(frozen=True)
class PetriNet:
    name: str
    places: tuple[str, ...]
    transitions: tuple[NetTransition, ...]
    initial_marking: dict[str, int]
    span: Optional[Span] = field(default=None, compare=False)

    def place_index(self) -> dict[str, int]:
        return {p: i for i, p in enumerate(self.places)}

    def initial_vector(self) -> tuple[int, ...]:
        return tuple(self.initial_marking.get(p, 0) for p in self.places)


@dataclass
class NetProblem:
    message: str
    span: Optional[Span] = None
    code: str = "E_MODEL"


def validate_net(net: PetriNet) -> list[NetProblem]:
    problems = []
    if len(set(net.places)) != len(net.places):
        problems.append(NetProblem(f"duplicate place names in net '{net.name}'", net.span, "E_DUPLICATE"))
    ids = [t.id for t in net.transitions]
    if len(set(ids)) != len(ids):
        problems.append(NetProblem(f"duplicate transition names in net '{net.name}'", net.span, "E_DUPLICATE"))
    places = set(net.places)
    for t in net.transitions:
        if not t.inputs and not t.outputs:
            problems.append(NetProblem(f"transition '{t.id}' has no arcs", t.span))
        for p, w in list(t.inputs.items()) + list(t.outputs.items()):
            if p not in places:
                problems.append(NetProblem(f"transition '{t.id}': unknown place '{p}'", t.span, "E_UNRESOLVED"))
            if w < 1:
                problems.append(NetProblem(f"transition '{t.id}': arc weight must be >= 1", t.span))
    for p, n in net.initial_marking.items():
        if p not in places:
            problems.append(NetProblem(f"initial marking names unknown place '{p}'", net.span, "E_UNRESOLVED"))
        if n < 0:
            problems.append(NetProblem(f"negative initial marking on '{p}'", net.span))
    return problems


class NotEnabled(Exception):
    pass


# --- firing rule ---------------------------------------------------------------

def is_enabled(net: PetriNet, marking: dict[str, int], t: NetTransition) -> bool:
    return all(marking.get(p, 0) >= w for p, w in t.inputs.items())


def enabled(net: PetriNet, marking: dict[str, int]) -> set[str]:
    return {t.id for t in net.transitions if is_enabled(net, marking, t)}


def fire(net: PetriNet, marking: dict[str, int], t_id: str) -> dict[str, int]:
    t = next((x for x in net.transitions if x.id == t_id), None)
    if t is None:
        raise NotEnabled(f"no transition named '{t_id}'")
    if not is_enabled(net, marking, t):
        raise NotEnabled(f"'{t_id}' is not enabled")
    out = {p: marking.get(p, 0) for p in net.places}
    for p, w in t.inputs.items():
        out[p] -= w
    for p, w in t.outputs.items():
        out[p] += w
    return out


def incidence_matrix(net: PetriNet) -> list[list[int]]:
    """C[p][t] = outputs(p) - inputs(p) for place row p, transition column t."""
    rows = []
    for p in net.places:
        rows.append([t.outputs.get(p, 0) - t.inputs.get(p, 0) for t in net.transitions])
    return rows


# --- P-invariants (Farkas elimination) -------------------------------------------

def _normalize(vec: tuple[int, ...]) -> tuple[int, ...]:
    g = 0
    for x in vec:
        g = gcd(g, x)
    return tuple(x // g for x in vec) if g > 1 else vec


def p_invariants(net: PetriNet, cap: int = DEFAULT_INVARIANT_CAP) -> list[tuple[int, ...]]:
    """Generating set of minimal-support non-negative solutions of yT C = 0.

    Farkas elimination: start from the identity paired with the incidence
    rows, then cancel one transition column at a time by combining rows of
    opposite sign.  Results are gcd-reduced and filtered to minimal support.
    """
    n_places = len(net.places)
    n_trans = len(net.transitions)
    C = incidence_matrix(net)
    rows: list[tuple[tuple[int, ...], tuple[int, ...]]] = [
        (tuple(1 if j == i else 0 for j in range(n_places)), tuple(C[i])) for i in range(n_places)
    ]
    for col in range(n_trans):
        keep = [r for r in rows if r[1][col] == 0]
        pos = [r for r in rows if r[1][col] > 0]
        neg = [r for r in rows if r[1][col] < 0]
        for yp, rp in pos:
            for yn, rn in neg:
                a, b = rp[col], -rn[col]
                g = gcd(a, b)
                ca, cb = b // g, a // g
                y = tuple(ca * u + cb * v for u, v in zip(yp, yn))
                resid = tuple(ca * u + cb * v for u, v in zip(rp, rn))
                combined = _normalize(y + resid)
                keep.append((combined[:n_places], combined[n_places:]))
        if len(keep) > cap:
            raise ResourceLimit(f"P-invariant computation exceeded {cap} intermediate vectors")
        rows = keep

    vectors = {_normalize(y) for y, _resid in rows if any(y)}
    # keep only minimal supports; per support the gcd-reduced vector is unique
    supports = {v: frozenset(i for i, x in enumerate(v) if x) for v in vectors}
    minimal = [
        v for v in vectors
        if not any(supports[w] < supports[v] for w in vectors if w != v)
    ]
    return sorted(minimal)


# --- reachability -----------------------------------------------------------------

@dataclass
class ReachabilityGraph:
    net: PetriNet
    nodes: list[tuple[int, ...]]                 # marking vectors, places order
    edges: list[tuple[int, str, int]]            # (source node, transition id, target node)
    truncated: bool

    def marking_dict(self, idx: int) -> dict[str, int]:
        return dict(zip(self.net.places, self.nodes[idx]))


def reachability_graph(net: PetriNet, max_states: int = DEFAULT_MAX_STATES) -> ReachabilityGraph:
    """Breadth-first marking graph; new markings of each frontier are added
    in lexicographic order so runs are reproducible."""
    if max_states < 1:
        raise ValueError("max_states must be >= 1")
    pidx = net.place_index()
    trans = [
        (t, tuple((pidx[p], w) for p, w in t.inputs.items()),
         tuple((pidx[p], w) for p, w in t.outputs.items()))
        for t in net.transitions
    ]
    m0 = net.initial_vector()
    nodes = [m0]
    index = {m0: 0}
    edges: list[tuple[int, str, int]] = []
    frontier = [0]
    truncated = False
    while frontier:
        pending: list[tuple[int, str, tuple[int, ...]]] = []
        new_markings: set[tuple[int, ...]] = set()
        for src in frontier:
            m = nodes[src]
            for t, ins, outs in trans:
                if all(m[i] >= w for i, w in ins):
                    m2 = list(m)
                    for i, w in ins:
                        m2[i] -= w
                    for i, w in outs:
                        m2[i] += w
                    m2t = tuple(m2)
                    pending.append((src, t.id, m2t))
                    if m2t not in index:
                        new_markings.add(m2t)
        ordered_new = sorted(new_markings)
        room = max_states - len(nodes)
        if len(ordered_new) > room:
            ordered_new = ordered_new[:room]
            truncated = True
        next_frontier = []
        for m2t in ordered_new:
            index[m2t] = len(nodes)
            nodes.append(m2t)
            next_frontier.append(index[m2t])
        for src, t_id, m2t in pending:
            if m2t in index:
                edges.append((src, t_id, index[m2t]))
        if truncated:
            break
        frontier = next_frontier
    return ReachabilityGraph(net, nodes, edges, truncated)


# --- aggregate analysis --------------------------------------------------------------

@dataclass
class AnalysisReport:
    net_name: str
    places: tuple[str, ...]
    p_invariants: list[tuple[int, ...]]
    deadlocks: list[dict[str, int]]
    bound_per_place: dict[str, object]           # int, or "unbounded within horizon"
    event_availability: dict[str, str]           # always | sometimes | never
    reinitializable: bool
    reinit_sound: bool
    explored: int
    truncated: bool
    nondeterminism: list[tuple[dict[str, int], str, list[str]]]


def analyze(net: PetriNet, max_states: int = DEFAULT_MAX_STATES) -> AnalysisReport:
    graph = reachability_graph(net, max_states)
    pidx = net.place_index()
    trans_ins = {
        t.id: tuple((pidx[p], w) for p, w in t.inputs.items()) for t in net.transitions
    }

    def enabled_here(m: tuple[int, ...]) -> list[NetTransition]:
        return [t for t in net.transitions if all(m[i] >= w for i, w in trans_ins[t.id])]

    deadlocks = []
    availability_hits: dict[str, int] = {}
    labels = [t.event for t in net.transitions if t.event]
    seen_labels = sorted(set(labels), key=labels.index)
    nondet = []
    for m in graph.nodes:
        here = enabled_here(m)
        if not here:
            deadlocks.append(dict(zip(net.places, m)))
        by_label: dict[str, list[str]] = {}
        for t in here:
            if t.event:
                by_label.setdefault(t.event, []).append(t.id)
        for ev, ids in by_label.items():
            availability_hits[ev] = availability_hits.get(ev, 0) + 1
            if len(ids) > 1:
                nondet.append((dict(zip(net.places, m)), ev, ids))

    availability = {}
    for ev in seen_labels:
        hits = availability_hits.get(ev, 0)
        if hits == 0:
            availability[ev] = "never"
        elif hits == len(graph.nodes):
            availability[ev] = "always"
        else:
            availability[ev] = "sometimes"

    bounds: dict[str, object] = {}
    for i, p in enumerate(net.places):
        top = max(m[i] for m in graph.nodes)
        bounds[p] = "unbounded within horizon" if graph.truncated else top

    # reverse reachability to the initial marking
    reverse: dict[int, list[int]] = {}
    for src, _t, dst in graph.edges:
        reverse.setdefault(dst, []).append(src)
    seen = {0}
    stack = [0]
    while stack:
        for prev in reverse.get(stack.pop(), ()):
            if prev not in seen:
                seen.add(prev)
                stack.append(prev)
    reinit = len(seen) == len(graph.nodes)

    return AnalysisReport(
        net_name=net.name,
        places=net.places,
        p_invariants=p_invariants(net),
        deadlocks=deadlocks,
        bound_per_place=bounds,
        event_availability=availability,
        reinitializable=reinit,
        reinit_sound=not graph.truncated,
        explored=len(graph.nodes),
        truncated=graph.truncated,
        nondeterminism=nondet,
    )
