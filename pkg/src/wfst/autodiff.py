"""Differentiable real semiring backed by a scalar reverse-mode tape.

Weights are <+, *, 0, 1> real numbers whose operations are recorded on a
GradientTape, so the total weight produced by sum_paths can be
differentiated with respect to designated arc-weight parameters.  A tape
is confined to a single thread; training creates a fresh tape per step.
"""

import math

from .errors import (
    DivisionByZeroError,
    InvalidWeightError,
    SemiringMismatchError,
    UnsupportedOperationError,
    WfstError,
)
from .fst import Fst
from .semirings import DEFAULT_DELTA, AbstractSemiringWeight


class TapeNode:
    """One recorded operation: a value, parent nodes and local partials."""

    __slots__ = ("value", "parents", "partials", "node_id")

    def __init__(self, value, parents, partials, node_id):
        self.value = value
        self.parents = parents
        self.partials = partials
        self.node_id = node_id

    def __repr__(self):
        return f"TapeNode(id={self.node_id}, value={self.value})"


class GradientTape:
    """Append-only record of scalar operations for reverse accumulation."""

    def __init__(self):
        self.nodes = []
        self.parameters = set()

    def record(self, value, parents=(), partials=()):
        node = TapeNode(float(value), tuple(parents), tuple(partials),
                        len(self.nodes))
        self.nodes.append(node)
        return node

    def constant(self, value):
        return self.record(value)

    def parameter(self, value):
        node = self.record(value)
        self.parameters.add(node.node_id)
        return node

    def backward(self, node):
        """Gradients of ``node`` w.r.t. every parameter on the tape.

        Parameters the output does not depend on get gradient 0.
        """
        nid = getattr(node, "node_id", None)
        if (nid is None or not 0 <= nid < len(self.nodes)
                or self.nodes[nid] is not node):
            raise InvalidWeightError("node is not on this tape")
        adjoint = [0.0] * (nid + 1)
        adjoint[nid] = 1.0
        for i in range(nid, -1, -1):
            grad = adjoint[i]
            if grad == 0.0:
                continue
            cur = self.nodes[i]
            for parent, partial in zip(cur.parents, cur.partials):
                adjoint[parent.node_id] += grad * partial
        return {
            pid: (adjoint[pid] if pid <= nid else 0.0)
            for pid in self.parameters
        }


class _DiffWeightBase(AbstractSemiringWeight):
    """Real <+, *> semiring element recording onto a class-bound tape."""

    name = "diff"
    has_division = True
    has_power = True
    tape = None

    def __init__(self, node):
        self.node = node

    @property
    def value(self):
        return self.node.value

    def __add__(self, other):
        other = self._coerce(other)
        node = self.tape.record(self.value + other.value,
                                (self.node, other.node), (1.0, 1.0))
        return type(self)(node)

    def __mul__(self, other):
        other = self._coerce(other)
        node = self.tape.record(self.value * other.value,
                                (self.node, other.node),
                                (other.value, self.value))
        return type(self)(node)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other.value == 0.0:
            raise DivisionByZeroError("diff division by zero element")
        node = self.tape.record(
            self.value / other.value,
            (self.node, other.node),
            (1.0 / other.value, -self.value / (other.value ** 2)),
        )
        return type(self)(node)

    def __pow__(self, n):
        if n < 0:
            raise UnsupportedOperationError("negative power")
        if n == 0:
            return type(self).one
        node = self.tape.record(self.value ** n, (self.node,),
                                (n * self.value ** (n - 1),))
        return type(self)(node)

    def __eq__(self, other):
        # Tape structure is ignored; equality is on values.
        return isinstance(other, _DiffWeightBase) and self.value == other.value

    def __hash__(self):
        return hash(self.value)

    def __repr__(self):
        return f"DiffWeight({self.value})"

    def __str__(self):
        return repr(self.value)

    def approx_eq(self, other, delta=DEFAULT_DELTA):
        other = self._coerce(other)
        if self.value == other.value:
            return True
        return abs(self.value - other.value) < delta

    def quantize(self, delta=DEFAULT_DELTA):
        if not math.isfinite(self.value):
            return self
        return type(self)(self.tape.constant(round(self.value / delta) * delta))

    def member(self):
        return not math.isnan(self.value)

    def sampling_weight(self):
        return self.value

    def log(self):
        if self.value <= 0.0:
            raise WfstError(f"log of non-positive weight {self.value}")
        node = self.tape.record(math.log(self.value), (self.node,),
                                (1.0 / self.value,))
        return type(self)(node)

    def __sub__(self, other):
        other = self._coerce(other)
        node = self.tape.record(self.value - other.value,
                                (self.node, other.node), (1.0, -1.0))
        return type(self)(node)

    def text(self):
        return repr(self.value)

    @classmethod
    def from_text(cls, s):
        # Loaded diff weights become fresh trainable parameters.
        try:
            return cls.parameter(float(s))
        except ValueError as exc:
            raise InvalidWeightError(f"bad diff weight {s!r}") from exc

    @classmethod
    def cast(cls, value):
        if type(value) is cls:
            return value
        if isinstance(value, AbstractSemiringWeight):
            if value.is_boolean:
                return cls.one if value.value else cls.zero
            raise SemiringMismatchError(
                f"cannot cast {value.name} weight to the diff semiring"
            )
        if isinstance(value, bool):
            return cls.one if value else cls.zero
        if isinstance(value, (int, float)):
            return cls(cls.tape.constant(float(value)))
        raise SemiringMismatchError(f"cannot cast {value!r} to the diff semiring")

    @classmethod
    def constant(cls, value):
        return cls(cls.tape.constant(float(value)))

    @classmethod
    def parameter(cls, value):
        """A trainable leaf weight."""
        return cls(cls.tape.parameter(float(value)))

    @classmethod
    def random_member(cls, rng):
        return cls.constant(rng.uniform(-2.0, 2.0))


def make_diff_semiring(tape=None):
    """A diff semiring class bound to ``tape`` (a fresh one by default)."""
    if tape is None:
        tape = GradientTape()
    cls = type("DiffWeight", (_DiffWeightBase,), {})
    cls.tape = tape
    cls.zero = cls.constant(0.0)
    cls.one = cls.constant(1.0)
    return cls


def backward(tape, output):
    """Module-level spelling of tape.backward for a weight or node."""
    node = output.node if isinstance(output, _DiffWeightBase) else output
    return tape.backward(node)


def loglikelihood_loss(full_fst, observed_fst):
    """Negative log-probability of the observed pair under the machine.

    The numerator restricts the machine to paths agreeing with the
    observed pair on both tapes (by composing with the pair's input and
    output projections); the denominator is the machine's total weight.
    Returns log(denominator) - log(numerator) as a recorded diff weight.
    """
    from .algorithms import compose, project, sum_paths

    if not issubclass(full_fst.semiring, _DiffWeightBase):
        raise SemiringMismatchError("loglikelihood_loss needs a diff-semiring FST")
    restricted = compose(
        compose(project(observed_fst, "input"), full_fst),
        project(observed_fst, "output"),
    )
    numerator = sum_paths(restricted)
    denominator = sum_paths(full_fst)
    if numerator.value <= 0.0:
        raise WfstError(
            f"observed pair has non-positive total weight {numerator.value}"
        )
    if denominator.value <= 0.0:
        raise WfstError(
            f"machine has non-positive total weight {denominator.value}"
        )
    return denominator.log() - numerator.log()


def pair_acceptor(input_str, output_str):
    """Boolean transducer whose input/output projections accept exactly
    the observed input and output strings.

    Shorter strings are padded with epsilon; loglikelihood_loss only uses
    the two projections, so the padding alignment is immaterial.
    """
    fst = Fst()
    state = fst.add_state()
    fst.set_initial_state(state)
    n = max(len(input_str), len(output_str))
    for k in range(n):
        i = input_str[k] if k < len(input_str) else 0
        o = output_str[k] if k < len(output_str) else 0
        nxt = fst.add_state()
        fst.add_arc(state, nxt, None, i, o)
        state = nxt
    fst.set_final_weight(state, fst.semiring.one)
    return fst


def train(real_fst, pairs, steps=200, rate=0.05, min_weight=1e-6):
    """Gradient descent on the summed pair log-likelihood loss.

    ``real_fst`` supplies the initial arc and final weights (real
    semiring); each step rebuilds the machine on a fresh tape with every
    weight as a parameter, backpropagates through sum_paths and updates
    with plain gradient descent.  Weights are clamped positive so the
    probability model stays well defined.  Returns (trained real FST,
    per-step losses).
    """
    from .semirings import RealWeight

    arc_values = {}
    for state in real_fst.states():
        for idx, arc in enumerate(real_fst.arcs(state)):
            arc_values[(state, idx)] = float(arc.weight.value)
    final_values = {s: float(w.value) for s, w in real_fst.finals.items()}
    observed = [pair_acceptor(i, o) for i, o in pairs]

    losses = []
    for _ in range(steps):
        tape = GradientTape()
        semiring = make_diff_semiring(tape)
        dfst = Fst(semiring)
        for _ in real_fst.states():
            dfst.add_state()
        dfst.initial = real_fst.initial
        param_key = {}
        for state in real_fst.states():
            for idx, arc in enumerate(real_fst.arcs(state)):
                weight = semiring.parameter(arc_values[(state, idx)])
                param_key[weight.node.node_id] = ("arc", state, idx)
                dfst.add_arc(state, arc.target, weight, arc.input, arc.output)
        for state, value in final_values.items():
            weight = semiring.parameter(value)
            param_key[weight.node.node_id] = ("final", state)
            dfst.finals[state] = weight

        total = None
        for obs in observed:
            loss = loglikelihood_loss(dfst, obs)
            total = loss if total is None else total + loss
        losses.append(total.value)
        grads = tape.backward(total.node)
        for pid, grad in grads.items():
            key = param_key[pid]
            if key[0] == "arc":
                _, state, idx = key
                arc_values[(state, idx)] = max(
                    min_weight, arc_values[(state, idx)] - rate * grad
                )
            else:
                _, state = key
                final_values[state] = max(
                    min_weight, final_values[state] - rate * grad
                )

    trained = Fst(RealWeight)
    for _ in real_fst.states():
        trained.add_state()
    trained.initial = real_fst.initial
    for state in real_fst.states():
        for idx, arc in enumerate(real_fst.arcs(state)):
            trained.add_arc(state, arc.target,
                            RealWeight(arc_values[(state, idx)]),
                            arc.input, arc.output)
    for state, value in final_values.items():
        trained.finals[state] = RealWeight(value)
    return trained, losses
