"""Transformations and queries over FSTs.

Every operation here returns a new FST (inputs are never mutated).
Binary operations require both arguments to share a semiring; a boolean
argument is auto-cast into the other side's semiring first.
"""

import random
from collections import deque
from dataclasses import dataclass

from .errors import (
    ConvergenceError,
    CycleLimitError,
    DeterminizationLimitError,
    InvalidWeightError,
    NoAcceptingPathError,
    SamplingError,
    SemiringMismatchError,
    UnsupportedOperationError,
    WfstError,
)
from .fst import EPSILON, Arc, Fst, Path, enumerate_paths
from .semirings import DEFAULT_DELTA, _NumericWeight

RELAXATION_SWEEP_CAP = 1000


@dataclass(frozen=True)
class ShortestPathResult:
    path: Path
    distance: object


def _default_cast(source, target):
    if source is target:
        return lambda w: w
    if source.is_boolean:
        return lambda w: target.one if w.value else target.zero
    if issubclass(source, _NumericWeight):
        return lambda w: target.cast(w.value)
    raise SemiringMismatchError(
        f"no default cast from {source.name} to {target.name}; "
        "pass an explicit cast function to lift()"
    )


def lift(fst, target_semiring, cast=None):
    """Rebuild ``fst`` with every weight mapped into ``target_semiring``."""
    if cast is None:
        cast = _default_cast(fst.semiring, target_semiring)
    out = Fst(target_semiring)
    for _ in fst.states():
        out.add_state()
    out.initial = fst.initial

    def convert(w):
        w2 = cast(w)
        if not isinstance(w2, target_semiring) or not w2.member():
            raise InvalidWeightError(
                f"cast produced {w2!r}, not a member of {target_semiring.name}"
            )
        return w2

    for arc in fst.all_arcs():
        out._arcs[arc.source].append(
            Arc(arc.source, arc.target, arc.input, arc.output, convert(arc.weight))
        )
    for state, weight in fst.finals.items():
        out.finals[state] = convert(weight)
    return out


def cast_from_boolean(fst, target_semiring):
    """Lift a boolean FST with the default true->one, false->zero cast."""
    if not fst.semiring.is_boolean:
        raise SemiringMismatchError("cast_from_boolean requires a boolean FST")
    return lift(fst, target_semiring)


def _coerce_pair(a, b):
    """Bring two FSTs into a common semiring (boolean auto-cast only)."""
    if a.semiring is b.semiring:
        return a, b
    if a.semiring.is_boolean:
        return cast_from_boolean(a, b.semiring), b
    if b.semiring.is_boolean:
        return a, cast_from_boolean(b, a.semiring)
    raise SemiringMismatchError(
        f"incompatible semirings: {a.semiring.name} vs {b.semiring.name}"
    )


def _copy_into(dst, src):
    """Append a copy of src's states/arcs/finals into dst; return the offset."""
    offset = dst.num_states
    for _ in src.states():
        dst.add_state()
    for arc in src.all_arcs():
        dst._arcs[offset + arc.source].append(
            Arc(offset + arc.source, offset + arc.target,
                arc.input, arc.output, arc.weight)
        )
    return offset


def union(a, b):
    """Accepts L(a) or L(b); shared strings get plus-combined weights."""
    a, b = _coerce_pair(a, b)
    sr = a.semiring
    out = Fst(sr)
    start = out.add_state()
    out.set_initial_state(start)
    for side in (a, b):
        offset = _copy_into(out, side)
        if side.initial is not None:
            out.add_arc(start, offset + side.initial, sr.one, EPSILON, EPSILON)
        for state, weight in side.finals.items():
            out.finals[offset + state] = weight
    return out


def concat(a, b):
    """Accepts x+y for x in L(a), y in L(b), with times-combined weights."""
    a, b = _coerce_pair(a, b)
    sr = a.semiring
    out = Fst(sr)
    offset_a = _copy_into(out, a)
    offset_b = _copy_into(out, b)
    if a.initial is not None:
        out.set_initial_state(offset_a + a.initial)
    if b.initial is not None:
        for state, weight in a.finals.items():
            out.add_arc(offset_a + state, offset_b + b.initial,
                        weight, EPSILON, EPSILON)
    for state, weight in b.finals.items():
        out.finals[offset_b + state] = weight
    return out


def closure(a):
    """Kleene star: epsilon plus any finite repetition of L(a)."""
    sr = a.semiring
    out = Fst(sr)
    start = out.add_state()
    out.set_initial_state(start)
    out.set_final_weight(start, sr.one)
    offset = _copy_into(out, a)
    if a.initial is not None:
        out.add_arc(start, offset + a.initial, sr.one, EPSILON, EPSILON)
    for state, weight in a.finals.items():
        out.add_arc(offset + state, start, weight, EPSILON, EPSILON)
    return out


def project(fst, side):
    """Copy both labels of every arc from the chosen side."""
    if side not in ("input", "output"):
        raise WfstError(f"project side must be 'input' or 'output', got {side!r}")
    out = Fst(fst.semiring)
    for _ in fst.states():
        out.add_state()
    out.initial = fst.initial
    out.finals = dict(fst.finals)
    pick_input = side == "input"
    for arc in fst.all_arcs():
        label = arc.input if pick_input else arc.output
        out._arcs[arc.source].append(
            Arc(arc.source, arc.target, label, label, arc.weight)
        )
    return out


def invert(fst):
    """Swap input and output labels on every arc."""
    out = Fst(fst.semiring)
    for _ in fst.states():
        out.add_state()
    out.initial = fst.initial
    out.finals = dict(fst.finals)
    for arc in fst.all_arcs():
        out._arcs[arc.source].append(
            Arc(arc.source, arc.target, arc.output, arc.input, arc.weight)
        )
    return out


def compose(a, b):
    """Composition: a's outputs matched against b's inputs.

    Epsilon moves go through the standard three-state epsilon filter so
    that interleaved epsilon paths are counted exactly once.
    """
    a, b = _coerce_pair(a, b)
    sr = a.semiring
    out = Fst(sr)
    if a.initial is None or b.initial is None:
        return out

    arcs_b = {}  # b-state -> input label -> arcs
    for state in b.states():
        by_label = {}
        for arc in b.arcs(state):
            by_label.setdefault(arc.input, []).append(arc)
        arcs_b[state] = by_label

    state_map = {}
    queue = deque()

    def get_state(key):
        if key not in state_map:
            state_map[key] = out.add_state()
            queue.append(key)
            qa, qb, _ = key
            fa = a.finals.get(qa)
            fb = b.finals.get(qb)
            if fa is not None and fb is not None:
                out.finals[state_map[key]] = fa * fb
        return state_map[key]

    start = get_state((a.initial, b.initial, 0))
    out.set_initial_state(start)

    while queue:
        key = queue.popleft()
        qa, qb, f = key
        src = state_map[key]
        by_label = arcs_b[qb]
        for arc_a in a.arcs(qa):
            if arc_a.output != EPSILON:
                # Matched non-epsilon move: allowed from any filter state.
                for arc_b in by_label.get(arc_a.output, ()):
                    dst = get_state((arc_a.target, arc_b.target, 0))
                    out._arcs[src].append(
                        Arc(src, dst, arc_a.input, arc_b.output,
                            arc_a.weight * arc_b.weight)
                    )
            else:
                # Both sides move on epsilon together: only from filter 0.
                if f == 0:
                    for arc_b in by_label.get(EPSILON, ()):
                        dst = get_state((arc_a.target, arc_b.target, 0))
                        out._arcs[src].append(
                            Arc(src, dst, arc_a.input, arc_b.output,
                                arc_a.weight * arc_b.weight)
                        )
                # a moves alone on output epsilon.
                if f in (0, 1):
                    dst = get_state((arc_a.target, qb, 1))
                    out._arcs[src].append(
                        Arc(src, dst, arc_a.input, EPSILON, arc_a.weight)
                    )
        # b moves alone on input epsilon.
        if f in (0, 2):
            for arc_b in by_label.get(EPSILON, ()):
                dst = get_state((qa, arc_b.target, 2))
                out._arcs[src].append(
                    Arc(src, dst, EPSILON, arc_b.output, arc_b.weight)
                )
    return out


def _topological_order(num_states, arcs_by_state):
    """Topological order of all states, or None if the graph is cyclic."""
    indegree = [0] * num_states
    for arcs in arcs_by_state:
        for _, target, _ in arcs:
            indegree[target] += 1
    ready = deque(s for s in range(num_states) if indegree[s] == 0)
    order = []
    while ready:
        s = ready.popleft()
        order.append(s)
        for _, target, _ in arcs_by_state[s]:
            indegree[target] -= 1
            if indegree[target] == 0:
                ready.append(target)
    return order if len(order) == num_states else None


def _generic_distance(semiring, num_states, arcs_by_state, sources,
                      delta=DEFAULT_DELTA):
    """Single-source (or multi-source) shortest distance over a semiring.

    ``arcs_by_state[s]`` is a list of (source, target, weight) triples and
    ``sources`` maps seed states to their initial weights.  Acyclic graphs
    get an exact topological pass; cyclic graphs use queue-based
    relaxation that stops when updates fall below approx_eq's delta, and
    raises ConvergenceError after the sweep cap.
    """
    zero = semiring.zero
    d = [zero] * num_states
    if not sources:
        return d
    order = _topological_order(num_states, arcs_by_state)
    if order is not None:
        for s, w in sources.items():
            d[s] = d[s] + w
        for s in order:
            ds = d[s]
            for _, target, weight in arcs_by_state[s]:
                d[target] = d[target] + ds * weight
        return d
    # Cyclic: queue-based relaxation (d holds distances, r pending mass).
    r = [zero] * num_states
    queue = deque()
    queued = set()
    for s, w in sources.items():
        d[s] = d[s] + w
        r[s] = r[s] + w
        if s not in queued:
            queue.append(s)
            queued.add(s)
    pops = 0
    cap = RELAXATION_SWEEP_CAP * max(num_states, 1)
    while queue:
        pops += 1
        if pops > cap:
            raise ConvergenceError(
                "shortest-distance relaxation did not converge "
                f"within {RELAXATION_SWEEP_CAP} sweeps"
            )
        s = queue.popleft()
        queued.discard(s)
        mass = r[s]
        r[s] = zero
        for _, target, weight in arcs_by_state[s]:
            add = mass * weight
            new = d[target] + add
            if not d[target].approx_eq(new, delta):
                d[target] = new
                r[target] = r[target] + add
                if target not in queued:
                    queue.append(target)
                    queued.add(target)
    return d


def _forward_arcs(fst):
    return [[(a.source, a.target, a.weight) for a in arcs] for arcs in fst._arcs]


def _backward_arcs(fst):
    arcs = [[] for _ in fst.states()]
    for a in fst.all_arcs():
        arcs[a.target].append((a.target, a.source, a.weight))
    return arcs


def shortest_distance(fst, delta=DEFAULT_DELTA):
    """Per-state plus-sum over all paths from the initial state."""
    sr = fst.semiring
    if fst.initial is None:
        return [sr.zero] * fst.num_states
    return _generic_distance(sr, fst.num_states, _forward_arcs(fst),
                             {fst.initial: sr.one}, delta)


def _backward_distance(fst, delta=DEFAULT_DELTA):
    """Per-state plus-sum over accepting suffixes (final weights included)."""
    sr = fst.semiring
    return _generic_distance(sr, fst.num_states, _backward_arcs(fst),
                             dict(fst.finals), delta)


def sum_paths(fst, delta=DEFAULT_DELTA):
    """Plus-sum of all accepting path weights (the total machine weight)."""
    sr = fst.semiring
    if fst.initial is None:
        return sr.zero
    d = shortest_distance(fst, delta)
    total = sr.zero
    for state, weight in fst.finals.items():
        total = total + d[state] * weight
    return total


def remove_epsilon(fst, delta=DEFAULT_DELTA):
    """Eliminate epsilon:epsilon arcs, preserving the weighted language."""
    sr = fst.semiring
    n = fst.num_states
    eps_arcs = [[] for _ in range(n)]
    for a in fst.all_arcs():
        if a.input == EPSILON and a.output == EPSILON:
            eps_arcs[a.source].append((a.source, a.target, a.weight))

    out = Fst(sr)
    for _ in range(n):
        out.add_state()
    out.initial = fst.initial
    for s in range(n):
        # Epsilon-closure weights from s (times-accumulated along epsilon
        # chains, plus-combined across alternative epsilon routes).
        closure_w = _generic_distance(sr, n, eps_arcs, {s: sr.one}, delta)
        final = sr.zero
        for t in range(n):
            w = closure_w[t]
            if w == sr.zero and t != s:
                continue
            for arc in fst._arcs[t]:
                if arc.input == EPSILON and arc.output == EPSILON:
                    continue
                out._arcs[s].append(
                    Arc(s, arc.target, arc.input, arc.output, w * arc.weight)
                )
            fw = fst.finals.get(t)
            if fw is not None:
                final = final + w * fw
        if final != sr.zero:
            out.finals[s] = final
    return out


def determinize(fst, delta=DEFAULT_DELTA):
    """Weighted subset construction with residual weights.

    Requires an epsilon:epsilon-free input.  Transducer arcs are grouped
    by their (input, output) label pair; for acceptors this yields a
    machine with no two same-input arcs leaving any state.  Residual
    weights need semiring division whenever arc weights are non-trivial.
    """
    sr = fst.semiring
    for a in fst.all_arcs():
        if a.input == EPSILON and a.output == EPSILON:
            raise UnsupportedOperationError(
                "determinize requires an epsilon-free input; "
                "call remove_epsilon first"
            )
    out = Fst(sr)
    if fst.initial is None:
        return out
    cap = 10 * fst.num_states + 1000

    def divide(x, y):
        if y == sr.one:
            return x
        if not sr.has_division:
            raise UnsupportedOperationError(
                f"weighted determinization needs division, which the "
                f"{sr.name} semiring lacks"
            )
        return x / y

    # Subsets are keyed by quantized residuals so nearly identical subsets
    # merge, but the exact residuals of the first-seen subset are used for
    # expansion to keep arc weights exact along unmerged paths.
    start = ((fst.initial, sr.one),)
    start_key = tuple((s, r.quantize(delta)) for s, r in start)
    state_map = {start_key: out.add_state()}
    out.set_initial_state(state_map[start_key])
    queue = deque([start])
    while queue:
        key = queue.popleft()
        src = state_map[tuple((s, r.quantize(delta)) for s, r in key)]
        # Final weight of the subset.
        final = sr.zero
        for state, residual in key:
            fw = fst.finals.get(state)
            if fw is not None:
                final = final + residual * fw
        if final != sr.zero:
            out.finals[src] = final
        # Group outgoing arcs by label pair.
        grouped = {}
        for state, residual in key:
            for arc in fst._arcs[state]:
                grouped.setdefault((arc.input, arc.output), {}) \
                    .setdefault(arc.target, []).append(residual * arc.weight)
        for (ilabel, olabel), targets in sorted(grouped.items()):
            per_target = {
                t: _plus_all(sr, ws) for t, ws in targets.items()
            }
            total = sr.zero
            for w in per_target.values():
                total = total + w
            subset = tuple(
                (t, divide(per_target[t], total)) for t in sorted(per_target)
            )
            new_key = tuple((t, r.quantize(delta)) for t, r in subset)
            if new_key not in state_map:
                if len(state_map) >= cap:
                    raise DeterminizationLimitError(
                        f"subset construction exceeded {cap} states"
                    )
                state_map[new_key] = out.add_state()
                queue.append(subset)
            dst = state_map[new_key]
            out._arcs[src].append(Arc(src, dst, ilabel, olabel, total))
    return out


def _plus_all(sr, weights):
    total = sr.zero
    for w in weights:
        total = total + w
    return total


def reverse(fst):
    """Accepts the reversal of every string, with reversed arc weights."""
    sr = fst.semiring
    out = Fst(sr)
    for _ in fst.states():
        out.add_state()
    for arc in fst.all_arcs():
        out._arcs[arc.target].append(
            Arc(arc.target, arc.source, arc.input, arc.output,
                arc.weight.reverse())
        )
    start = out.add_state()
    out.set_initial_state(start)
    for state, weight in fst.finals.items():
        out.add_arc(start, state, weight.reverse(), EPSILON, EPSILON)
    if fst.initial is not None:
        out.finals[fst.initial] = sr.one
    return out


def push(fst, direction="initial", delta=DEFAULT_DELTA):
    """Redistribute weights toward one end without changing the language.

    Uses per-state shortest-distance potentials with the initial state's
    potential pinned to one, so every path's total weight telescopes back
    to its original value.
    """
    if direction not in ("initial", "final"):
        raise WfstError(f"push direction must be 'initial' or 'final', got {direction!r}")
    sr = fst.semiring
    if not sr.has_division:
        raise UnsupportedOperationError(
            f"push needs division, which the {sr.name} semiring lacks"
        )
    out = fst.copy()
    if fst.initial is None:
        return out
    if direction == "initial":
        pot = _backward_distance(fst, delta)
    else:
        pot = shortest_distance(fst, delta)
    pot[fst.initial] = sr.one
    zero = sr.zero
    new_arcs = [[] for _ in fst.states()]
    for arc in fst.all_arcs():
        w = arc.weight
        ps, pt = pot[arc.source], pot[arc.target]
        if direction == "initial":
            if ps != zero and pt != zero:
                w = (w * pt) / ps
        else:
            if ps != zero and pt != zero:
                w = (ps * w) / pt
        new_arcs[arc.source].append(
            Arc(arc.source, arc.target, arc.input, arc.output, w)
        )
    out._arcs = new_arcs
    out.finals = {}
    for state, weight in fst.finals.items():
        p = pot[state]
        if p == zero:
            out.finals[state] = weight
        elif direction == "initial":
            out.finals[state] = weight / p
        else:
            new = p * weight
            if new != zero:
                out.finals[state] = new
    return out


def shortest_path(fst, delta=DEFAULT_DELTA):
    """Best accepting path under the idempotent order a <= b iff a+b == a.

    Ties break toward the lexicographically smallest arc-index sequence
    (stopping at a final state beats taking any arc).
    """
    sr = fst.semiring
    if "path" not in sr.semiring_properties:
        raise UnsupportedOperationError(
            f"shortest_path requires a path semiring, not {sr.name}"
        )
    if fst.initial is None:
        raise NoAcceptingPathError("FST has no initial state")
    beta = _backward_distance(fst, delta)
    if beta[fst.initial] == sr.zero:
        raise NoAcceptingPathError("FST accepts no string")
    arcs_taken = []
    acc = sr.one
    state = fst.initial
    cap = 64 * fst.num_states + 1000
    while True:
        if len(arcs_taken) > cap:
            raise CycleLimitError("shortest-path extraction exceeded step cap")
        target_val = beta[state]
        fw = fst.finals.get(state)
        if fw is not None and fw == target_val:
            weight = acc * fw
            return ShortestPathResult(
                Path(tuple(arcs_taken), weight), weight
            )
        chosen = None
        for arc in fst._arcs[state]:
            if arc.weight * beta[arc.target] == target_val:
                chosen = arc
                break
        if chosen is None:
            # Numerical slack: fall back to approx matching.
            if fw is not None and fw.approx_eq(target_val, delta):
                weight = acc * fw
                return ShortestPathResult(Path(tuple(arcs_taken), weight), weight)
            for arc in fst._arcs[state]:
                if (arc.weight * beta[arc.target]).approx_eq(target_val, delta):
                    chosen = arc
                    break
        if chosen is None:
            raise NoAcceptingPathError(
                "no continuation matches the optimal distance"
            )
        arcs_taken.append(chosen)
        acc = acc * chosen.weight
        state = chosen.target


def random_path(fst, seed=None, max_steps=10_000):
    """Sample an accepting path, arc choice proportional to sampling_weight.

    At a final state, stopping competes with the outgoing arcs using the
    final weight's sampling weight.  Deterministic for a fixed seed.
    """
    if fst.initial is None:
        raise NoAcceptingPathError("FST has no initial state")
    rng = random.Random(seed)
    sr = fst.semiring
    state = fst.initial
    taken = []
    acc = sr.one
    for _ in range(max_steps):
        choices = []
        fw = fst.finals.get(state)
        if fw is not None:
            choices.append((None, _sampling_weight(fw)))
        for arc in fst._arcs[state]:
            choices.append((arc, _sampling_weight(arc.weight)))
        total = sum(w for _, w in choices)
        if total <= 0.0:
            raise SamplingError(
                f"sampling dead end at state {state}: all choices weigh zero"
            )
        pick = rng.random() * total
        running = 0.0
        selected = choices[-1][0]
        for option, weight in choices:
            running += weight
            if pick < running:
                selected = option
                break
        if selected is None:
            return Path(tuple(taken), acc * fw)
        taken.append(selected)
        acc = acc * selected.weight
        state = selected.target
    raise CycleLimitError(f"random path exceeded {max_steps} steps")


def _sampling_weight(weight):
    value = weight.sampling_weight()
    if value < 0:
        raise SamplingError(f"negative sampling weight for {weight!r}")
    return value


def equivalent_by_enumeration(a, b, max_paths=1000, delta=DEFAULT_DELTA):
    """Compare weighted languages by enumerating and grouping paths.

    Paths are grouped by (input, output) label strings; weights within a
    group are plus-combined and the group maps compared with approx_eq.
    A best-effort comparison on machines whose enumeration truncates.
    """
    a, b = _coerce_pair(a, b)
    sr = a.semiring

    def grouped(fst):
        groups = {}
        for path in enumerate_paths(fst, max_paths):
            key = (path.input_labels, path.output_labels)
            if key in groups:
                groups[key] = groups[key] + path.weight
            else:
                groups[key] = path.weight
        return groups

    ga, gb = grouped(a), grouped(b)
    for key in set(ga) | set(gb):
        wa = ga.get(key, sr.zero)
        wb = gb.get(key, sr.zero)
        if not wa.approx_eq(wb, delta):
            return False
    return True
