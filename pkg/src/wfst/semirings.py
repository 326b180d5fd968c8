"""Semiring weight classes.

A semiring is a tuple <plus, times, zero, one> where plus is associative
and commutative, times is associative and distributes over plus, zero is
the plus-identity and annihilates under times, and one is the
times-identity.  Weight classes here are the semirings: the class carries
the algebra (zero/one/properties) and instances are its elements.

Semirings that declare the 'path' property have an idempotent plus, which
induces the total order a <= b  iff  a + b == a used by shortest-path.
"""

import math
import numbers
from collections import Counter
from dataclasses import dataclass, field

from .errors import (
    DivisionByZeroError,
    InvalidWeightError,
    SemiringMismatchError,
    UnsupportedOperationError,
)

DEFAULT_DELTA = 1.0 / 1024


@dataclass(frozen=True)
class SemiringDescriptor:
    name: str
    properties: frozenset
    has_division: bool
    has_power: bool
    is_boolean: bool


class AbstractSemiringWeight:
    """Base class every semiring weight extends.

    Subclasses must provide __add__ (plus), __mul__ (times), __eq__,
    __hash__, and the class-level ``zero`` and ``one`` elements.  The
    remaining methods have default implementations that may be overridden:
    division (used by push), power, quantize, member, reverse (used by FST
    reversal) and sampling_weight (used by random_path).
    """

    name = "abstract"
    semiring_properties = frozenset({"base"})
    has_division = False
    has_power = False
    is_boolean = False
    zero = None
    one = None

    @classmethod
    def descriptor(cls):
        return SemiringDescriptor(
            name=cls.name,
            properties=frozenset(cls.semiring_properties),
            has_division=cls.has_division,
            has_power=cls.has_power,
            is_boolean=cls.is_boolean,
        )

    def _coerce(self, other):
        """Return ``other`` as an element of this semiring.

        Boolean weights are auto-cast into any other semiring; everything
        else must already belong to the same semiring.
        """
        if other.__class__ is self.__class__:
            return other
        if isinstance(other, AbstractSemiringWeight) and other.is_boolean:
            return self.__class__.cast(other)
        raise SemiringMismatchError(
            f"cannot combine {self.__class__.name} weight with "
            f"{type(other).__name__}"
        )

    def __add__(self, other):
        raise NotImplementedError

    def __mul__(self, other):
        raise NotImplementedError

    def __truediv__(self, other):
        raise UnsupportedOperationError(
            f"{self.name} semiring does not support division"
        )

    def __pow__(self, n):
        raise UnsupportedOperationError(
            f"{self.name} semiring does not support power"
        )

    def approx_eq(self, other, delta=DEFAULT_DELTA):
        return self == other

    def quantize(self, delta=DEFAULT_DELTA):
        return self

    def member(self):
        return True

    def reverse(self):
        # Identity for all commutative semirings.
        return self

    def sampling_weight(self):
        raise UnsupportedOperationError(
            f"{self.name} semiring does not define a sampling weight"
        )

    @classmethod
    def cast(cls, value):
        """Convert ``value`` (a weight, bool or raw number) into this semiring."""
        raise NotImplementedError

    @classmethod
    def random_member(cls, rng):
        """A random element, used by the axiom checker and property tests."""
        raise NotImplementedError

    def text(self):
        """Render for the FST text format (must round-trip via from_text)."""
        return str(self)

    @classmethod
    def from_text(cls, s):
        raise NotImplementedError


class BooleanWeight(AbstractSemiringWeight):
    """<or, and, False, True>; the default semiring, auto-cast into others."""

    name = "boolean"
    is_boolean = True
    has_division = True
    has_power = True
    __slots__ = ("value",)

    def __init__(self, value):
        self.value = bool(value)

    def __add__(self, other):
        if other.__class__ is not BooleanWeight:
            # Auto-cast: delegate to the richer semiring, preserving order.
            return type(other).cast(self) + other
        return BooleanWeight(self.value or other.value)

    def __mul__(self, other):
        if other.__class__ is not BooleanWeight:
            return type(other).cast(self) * other
        return BooleanWeight(self.value and other.value)

    def __truediv__(self, other):
        other = self._coerce(other)
        if not other.value:
            raise DivisionByZeroError("boolean division by zero element")
        return self

    def __pow__(self, n):
        if n < 0:
            raise UnsupportedOperationError("negative power")
        return BooleanWeight.one if n == 0 else self

    def __eq__(self, other):
        return other.__class__ is BooleanWeight and self.value == other.value

    def __hash__(self):
        return hash(self.value)

    def __repr__(self):
        return f"BooleanWeight({self.value})"

    def __str__(self):
        return "1" if self.value else "0"

    def sampling_weight(self):
        return 1.0 if self.value else 0.0

    @classmethod
    def cast(cls, value):
        if value.__class__ is cls:
            return value
        if isinstance(value, (bool, int)) and value in (0, 1, True, False):
            return cls(bool(value))
        raise SemiringMismatchError(
            f"cannot cast {value!r} to the boolean semiring"
        )

    @classmethod
    def random_member(cls, rng):
        return cls(rng.random() < 0.5)

    def text(self):
        return "1" if self.value else "0"

    @classmethod
    def from_text(cls, s):
        if s in ("1", "true", "True"):
            return cls(True)
        if s in ("0", "false", "False"):
            return cls(False)
        raise InvalidWeightError(f"bad boolean weight {s!r}")


BooleanWeight.zero = BooleanWeight(False)
BooleanWeight.one = BooleanWeight(True)


def _float_text(v):
    if v == math.inf:
        return "inf"
    if v == -math.inf:
        return "-inf"
    if math.isnan(v):
        return "nan"
    if v == int(v) and abs(v) < 1e16:
        return str(int(v))
    return repr(v)


class _NumericWeight(AbstractSemiringWeight):
    """Shared plumbing for the real / min / max / tropical semirings."""

    __slots__ = ("value",)

    def __init__(self, value):
        self.value = float(value)

    def __eq__(self, other):
        return other.__class__ is self.__class__ and self.value == other.value

    def __hash__(self):
        return hash(self.value)

    def __repr__(self):
        return f"{type(self).__name__}({self.value})"

    def __str__(self):
        return _float_text(self.value)

    def approx_eq(self, other, delta=DEFAULT_DELTA):
        other = self._coerce(other)
        if self.value == other.value:  # covers matching infinities
            return True
        return abs(self.value - other.value) < delta

    def quantize(self, delta=DEFAULT_DELTA):
        if not math.isfinite(self.value):
            return self
        # round() is banker's rounding, so quantization is half-even.
        return type(self)(round(self.value / delta) * delta)

    def member(self):
        return not math.isnan(self.value)

    def text(self):
        return _float_text(self.value)

    @classmethod
    def from_text(cls, s):
        try:
            return cls(float(s))
        except ValueError as exc:
            raise InvalidWeightError(f"bad {cls.name} weight {s!r}") from exc

    @classmethod
    def cast(cls, value):
        if value.__class__ is cls:
            return value
        if isinstance(value, AbstractSemiringWeight):
            if value.is_boolean:
                return cls.one if value.value else cls.zero
            raise SemiringMismatchError(
                f"cannot cast {value.name} weight to the {cls.name} semiring"
            )
        if isinstance(value, bool):
            return cls.one if value else cls.zero
        if isinstance(value, numbers.Real):
            return cls(float(value))
        raise SemiringMismatchError(
            f"cannot cast {value!r} to the {cls.name} semiring"
        )


class RealWeight(_NumericWeight):
    """<+, *, 0, 1> over the reals (the probability semiring)."""

    name = "real"
    has_division = True
    has_power = True

    def __add__(self, other):
        other = self._coerce(other)
        return type(self)(self.value + other.value)

    def __mul__(self, other):
        other = self._coerce(other)
        return type(self)(self.value * other.value)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other.value == 0.0:
            raise DivisionByZeroError("real division by zero element")
        return type(self)(self.value / other.value)

    def __pow__(self, n):
        if n < 0:
            raise UnsupportedOperationError("negative power")
        return type(self)(self.value ** n)

    def sampling_weight(self):
        return self.value

    @classmethod
    def random_member(cls, rng):
        return cls(rng.uniform(-2.0, 2.0))


RealWeight.zero = RealWeight(0.0)
RealWeight.one = RealWeight(1.0)


class MinWeight(_NumericWeight):
    """<min, +, +inf, 0>; an idempotent path semiring over costs."""

    name = "min"
    semiring_properties = frozenset({"base", "path"})
    has_division = True
    has_power = True

    def __add__(self, other):
        other = self._coerce(other)
        return type(self)(min(self.value, other.value))

    def __mul__(self, other):
        other = self._coerce(other)
        if math.isinf(self.value) or math.isinf(other.value):
            return type(self)(math.inf)
        return type(self)(self.value + other.value)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other == type(self).zero:
            raise DivisionByZeroError(f"{self.name} division by zero element")
        if math.isinf(self.value):
            return type(self)(self.value)
        return type(self)(self.value - other.value)

    def __pow__(self, n):
        if n < 0:
            raise UnsupportedOperationError("negative power")
        if n == 0:
            return type(self).one
        return type(self)(self.value * n)

    def sampling_weight(self):
        # Lower cost, likelier arc.
        return math.exp(-min(self.value, 700.0))

    @classmethod
    def random_member(cls, rng):
        if rng.random() < 0.05:
            return cls.zero
        return cls(rng.uniform(-5.0, 5.0))


MinWeight.zero = MinWeight(math.inf)
MinWeight.one = MinWeight(0.0)


class TropicalWeight(MinWeight):
    """Same <min, +> algebra as MinWeight under its conventional name."""

    name = "tropical"


TropicalWeight.zero = TropicalWeight(math.inf)
TropicalWeight.one = TropicalWeight(0.0)


class MaxWeight(_NumericWeight):
    """<max, +, -inf, 0>; the max-plus path semiring."""

    name = "max"
    semiring_properties = frozenset({"base", "path"})
    has_division = True
    has_power = True

    def __add__(self, other):
        other = self._coerce(other)
        return MaxWeight(max(self.value, other.value))

    def __mul__(self, other):
        other = self._coerce(other)
        if math.isinf(self.value) or math.isinf(other.value):
            return MaxWeight(-math.inf)
        return MaxWeight(self.value + other.value)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other == MaxWeight.zero:
            raise DivisionByZeroError("max division by zero element")
        if math.isinf(self.value):
            return MaxWeight(self.value)
        return MaxWeight(self.value - other.value)

    def __pow__(self, n):
        if n < 0:
            raise UnsupportedOperationError("negative power")
        if n == 0:
            return MaxWeight.one
        return MaxWeight(self.value * n)

    def sampling_weight(self):
        # Higher score, likelier arc.
        return math.exp(min(self.value, 700.0))

    @classmethod
    def random_member(cls, rng):
        if rng.random() < 0.05:
            return cls.zero
        return cls(rng.uniform(-5.0, 5.0))


MaxWeight.zero = MaxWeight(-math.inf)
MaxWeight.one = MaxWeight(0.0)


# Default global feature-weight table used by FeaturizedWeight's
# sampling_weight.  featurized_semiring() builds a class bound to its own
# table instead, which is what concurrent users should do.
feature_weights = {}

_ZERO_HASH = object()


class FeaturizedWeight(AbstractSemiringWeight):
    """Multiset-of-feature-counts semiring.

    times sums feature counts along a path; plus takes the per-feature
    maximum across alternative paths.  one is the empty multiset; zero is
    a distinguished absorbing sentinel (no multiset behaves as zero).
    sampling_weight is the dot product of the counts with the semiring's
    feature-weight table.
    """

    name = "featurized"
    has_division = True
    has_power = True
    weight_table = feature_weights
    __slots__ = ("features", "is_zero", "_hash")

    def __init__(self, features=None, *, _zero=False):
        self.is_zero = _zero
        if _zero:
            self.features = Counter()
            self._hash = hash(_ZERO_HASH)
            return
        counts = Counter(features if features is not None else ())
        for key, count in counts.items():
            if not isinstance(count, int) or count < 0:
                raise InvalidWeightError(
                    f"feature count for {key!r} must be a nonnegative int"
                )
        self.features = Counter({k: v for k, v in counts.items() if v > 0})
        self._hash = hash(frozenset(self.features.items()))

    def __add__(self, other):
        other = self._coerce(other)
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        # Counter | is the per-feature max.
        return type(self)(self.features | other.features)

    def __mul__(self, other):
        other = self._coerce(other)
        if self.is_zero or other.is_zero:
            return type(self).zero
        return type(self)(self.features + other.features)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other.is_zero:
            raise DivisionByZeroError("featurized division by zero element")
        if self.is_zero:
            return self
        result = Counter(self.features)
        result.subtract(other.features)
        if any(v < 0 for v in result.values()):
            raise InvalidWeightError(
                "featurized division would produce negative counts"
            )
        return type(self)(+result)

    def __pow__(self, n):
        if n < 0:
            raise UnsupportedOperationError("negative power")
        if n == 0:
            return type(self).one
        if self.is_zero:
            return self
        return type(self)(Counter({k: v * n for k, v in self.features.items()}))

    def __eq__(self, other):
        if not isinstance(other, FeaturizedWeight):
            return False
        if self.is_zero or other.is_zero:
            return self.is_zero and other.is_zero
        return self._hash == other._hash and self.features == other.features

    def __hash__(self):
        return self._hash

    def __repr__(self):
        if self.is_zero:
            return "FeaturizedWeight.zero"
        return f"FeaturizedWeight({dict(self.features)})"

    def __str__(self):
        return self.text()

    def approx_eq(self, other, delta=DEFAULT_DELTA):
        other = self._coerce(other)
        if self.is_zero or other.is_zero:
            return self.is_zero and other.is_zero
        keys = set(self.features) | set(other.features)
        distance = sum(
            abs(self.features.get(k, 0) - other.features.get(k, 0)) for k in keys
        )
        return distance < delta

    def sampling_weight(self):
        if self.is_zero:
            return 0.0
        result = 0.0
        for key, val in self.features.items():
            result += self.weight_table.get(key, 0) * val
        return result

    @classmethod
    def cast(cls, value):
        if value.__class__ is cls:
            return value
        if isinstance(value, AbstractSemiringWeight):
            if value.is_boolean:
                return cls.one if value.value else cls.zero
            raise SemiringMismatchError(
                f"cannot cast {value.name} weight to the featurized semiring"
            )
        if isinstance(value, bool):
            return cls.one if value else cls.zero
        if isinstance(value, (dict, Counter)):
            return cls(value)
        raise SemiringMismatchError(
            f"cannot cast {value!r} to the featurized semiring"
        )

    @classmethod
    def random_member(cls, rng):
        if rng.random() < 0.05:
            return cls.zero
        names = ["f1", "f2", "f3", "f4", "f5"]
        picked = {n: rng.randint(1, 3) for n in names if rng.random() < 0.4}
        return cls(picked)

    def text(self):
        if self.is_zero:
            return "!"
        if not self.features:
            return "-"
        return ",".join(f"{k}:{v}" for k, v in sorted(self.features.items()))

    @classmethod
    def from_text(cls, s):
        if s == "!":
            return cls.zero
        if s == "-":
            return cls.one
        counts = {}
        for part in s.split(","):
            name, sep, count = part.partition(":")
            if not sep or not name:
                raise InvalidWeightError(f"bad featurized weight {s!r}")
            try:
                counts[name] = int(count)
            except ValueError as exc:
                raise InvalidWeightError(f"bad featurized weight {s!r}") from exc
        return cls(counts)


FeaturizedWeight.zero = FeaturizedWeight(_zero=True)
FeaturizedWeight.one = FeaturizedWeight()


def featurized_semiring(weight_table, name="featurized"):
    """A featurized semiring class bound to its own feature-weight table."""
    cls = type("FeaturizedWeight", (FeaturizedWeight,), {})
    cls.name = name
    cls.weight_table = weight_table
    cls.zero = cls(_zero=True)
    cls.one = cls()
    return cls


BUILTIN_SEMIRINGS = {
    "boolean": BooleanWeight,
    "real": RealWeight,
    "min": MinWeight,
    "max": MaxWeight,
    "tropical": TropicalWeight,
    "featurized": FeaturizedWeight,
}


@dataclass(frozen=True)
class AxiomViolation:
    axiom: str
    witnesses: tuple

    def __str__(self):
        parts = ", ".join(repr(w) for w in self.witnesses)
        return f"{self.axiom} violated by ({parts})"


@dataclass
class AxiomReport:
    semiring: str
    samples: int
    violations: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations


def check_semiring_axioms(semiring, sample_count=1000, delta=DEFAULT_DELTA,
                          seed=0, max_violations=20):
    """Probe the semiring axioms on random elements.

    Violations are collected into the report, never raised; each carries
    the witness elements that broke the law.
    """
    import random as _random

    rng = _random.Random(seed)
    report = AxiomReport(semiring=semiring.name, samples=sample_count)
    zero, one = semiring.zero, semiring.one
    is_path = "path" in semiring.semiring_properties

    def ok(x, y):
        return x.approx_eq(y, delta)

    def add(axiom, *witnesses):
        if len(report.violations) < max_violations:
            report.violations.append(AxiomViolation(axiom, witnesses))

    for _ in range(sample_count):
        a = semiring.random_member(rng)
        b = semiring.random_member(rng)
        c = semiring.random_member(rng)
        if not ok((a + b) + c, a + (b + c)):
            add("plus associativity", a, b, c)
        if not ok(a + b, b + a):
            add("plus commutativity", a, b)
        if not ok((a * b) * c, a * (b * c)):
            add("times associativity", a, b, c)
        if not ok(a * (b + c), a * b + a * c):
            add("left distributivity", a, b, c)
        if not ok((a + b) * c, a * c + b * c):
            add("right distributivity", a, b, c)
        if not ok(a + zero, a) or not ok(zero + a, a):
            add("zero is plus identity", a)
        if not ok(a * one, a) or not ok(one * a, a):
            add("one is times identity", a)
        if not ok(a * zero, zero) or not ok(zero * a, zero):
            add("zero annihilates", a)
        if is_path:
            if not a + a == a:
                add("plus idempotence", a)
            s = a + b
            if not (s == a or s == b):
                add("total order", a, b)
    return report
