"""Output monoids: canonical element forms and the left-divisibility algebra.

Five monoid families are provided, all right-noetherian so that the fixpoint
computations elsewhere in the package terminate:

* ``FreeMonoid`` -- words over named generators, product is concatenation,
  binary left-gcd is the longest common prefix;
* ``TraceMonoid`` -- a free monoid where declared generator pairs commute;
  elements are kept in lexicographic normal form;
* ``CommutativeMonoid`` -- finite multisets of generators;
* ``NatAddMonoid`` -- natural numbers under addition;
* ``CyclicGroup`` -- integers modulo a fixed modulus (everything invertible).

Partial values model the undefined output ``⊥`` as ``None``: it absorbs
multiplication and left-gcds, and ``left_divide(d, None) is None``.
"""

from __future__ import annotations

from typing import Any, Iterable, Optional, Sequence

from .errors import (
    MalformedElement,
    NotDivisible,
    NotInvertible,
    SchemaError,
    UnknownGenerator,
)

#: A canonical monoid element.  The payload shape depends on the monoid kind:
#: generator tuples for free/trace monoids, ``((gen, count), ...)`` pairs for
#: commutative monoids and plain ints for nat-add / cyclic groups.
Element = Any

#: A possibly-undefined value; ``None`` is the bottom element ``⊥``.
PartialValue = Optional[Element]

#: A row of partial values; the owner of the row keeps the key list.
PartialRow = tuple  # tuple[PartialValue, ...]

UNIT_TEXT = "ε"
BOTTOM_TEXT = "⊥"
SEP = "·"


def _check_generators(generators: Sequence[str]) -> tuple[str, ...]:
    gens = tuple(generators)
    if not gens:
        raise ValueError("at least one generator is required")
    seen = set()
    for g in gens:
        if not isinstance(g, str) or not g:
            raise ValueError(f"generator names must be non-empty strings, got {g!r}")
        if g in (UNIT_TEXT, BOTTOM_TEXT) or SEP in g:
            raise ValueError(f"reserved or separator-bearing generator name: {g!r}")
        if g in seen:
            raise ValueError(f"duplicate generator name: {g!r}")
        seen.add(g)
    return gens


class Monoid:
    """Interface shared by all output monoids.

    Elements are immutable hashable payloads; two elements are equal in the
    monoid if and only if their payloads compare equal.  Subclasses must keep
    every operation canonical-in, canonical-out.
    """

    kind: str = "?"

    # -- core algebra ------------------------------------------------------

    def unit(self) -> Element:
        raise NotImplementedError

    def mul(self, x: Element, y: Element) -> Element:
        raise NotImplementedError

    def lgcd2(self, x: Element, y: Element) -> Element:
        """Canonical binary left-gcd (folded over rows by :func:`lgcd_family`)."""
        raise NotImplementedError

    def left_divide(self, d: Element, x: Element) -> Element:
        """The canonical ``v`` with ``d * v == x``; raises :class:`NotDivisible`."""
        raise NotImplementedError

    def divides(self, d: Element, x: Element) -> bool:
        try:
            self.left_divide(d, x)
            return True
        except NotDivisible:
            return False

    def is_invertible(self, x: Element) -> bool:
        # Trace-like monoids have no non-trivial invertibles; groups override.
        return x == self.unit()

    def inverse(self, x: Element) -> Element:
        if not self.is_invertible(x):
            raise NotInvertible(f"{self.render(x)} is not invertible in {self!r}")
        return self.unit()

    def factor_left_invertible(self, u: Element, v: Element) -> Optional[Element]:
        """An invertible ``χ`` with ``u == χ * v``, or ``None``."""
        return self.unit() if u == v else None

    def rank(self, x: Element) -> int:
        """Number of non-invertible factors in a maximal decomposition of ``x``."""
        raise NotImplementedError

    # -- canonical forms and text -----------------------------------------

    def canonical(self, payload) -> Element:
        """Canonicalize a raw payload, raising :class:`MalformedElement`."""
        raise NotImplementedError

    def parse(self, text: str) -> Element:
        raise NotImplementedError

    def render(self, x: Element) -> str:
        raise NotImplementedError

    # -- wire form ---------------------------------------------------------

    def encode(self, x: Element):
        """JSON-compatible wire value of ``x``."""
        raise NotImplementedError

    def decode(self, value) -> Element:
        """Decode (and canonicalize) a wire value."""
        raise NotImplementedError

    def to_wire(self) -> dict:
        raise NotImplementedError

    def __eq__(self, other):
        return isinstance(other, Monoid) and self.to_wire() == other.to_wire()

    def __hash__(self):
        return hash(repr(sorted(self.to_wire().items(), key=str)))

    def __repr__(self):
        return f"{type(self).__name__}({self.to_wire()})"


class _GeneratedMonoid(Monoid):
    """Shared plumbing for monoids presented by named generators."""

    def __init__(self, generators: Sequence[str]):
        self.generators = _check_generators(generators)
        self._index = {g: i for i, g in enumerate(self.generators)}

    def _check_letter(self, g: str) -> str:
        if g not in self._index:
            raise UnknownGenerator(f"unknown generator {g!r} (declared: {', '.join(self.generators)})")
        return g

    def _split(self, text: str) -> list[str]:
        if text in ("", UNIT_TEXT):
            return []
        if SEP in text:
            parts = text.split(SEP)
        elif all(len(g) == 1 for g in self.generators):
            parts = list(text)
        else:
            parts = [text]
        if any(not p for p in parts):
            raise MalformedElement(f"malformed element text: {text!r}")
        return [self._check_letter(p) for p in parts]


class _WordMonoid(_GeneratedMonoid):
    """Monoids whose canonical elements are generator tuples (free and trace)."""

    def unit(self) -> Element:
        return ()

    def rank(self, x: Element) -> int:
        return len(x)

    def parse(self, text: str) -> Element:
        return self.canonical(tuple(self._split(text)))

    def render(self, x: Element) -> str:
        return SEP.join(x) if x else UNIT_TEXT

    def encode(self, x: Element):
        return list(x)

    def decode(self, value) -> Element:
        if not isinstance(value, list) or not all(isinstance(g, str) for g in value):
            raise MalformedElement(f"expected an array of generator names, got {value!r}")
        for g in value:
            self._check_letter(g)
        return self.canonical(tuple(value))


class FreeMonoid(_WordMonoid):
    kind = "free"

    def mul(self, x, y):
        return x + y

    def lgcd2(self, x, y):
        n = 0
        for a, b in zip(x, y):
            if a != b:
                break
            n += 1
        return x[:n]

    def left_divide(self, d, x):
        if x[: len(d)] != d:
            raise NotDivisible(f"{self.render(d)} does not left-divide {self.render(x)}")
        return x[len(d) :]

    def canonical(self, payload):
        word = tuple(payload)
        for g in word:
            self._check_letter(g)
        return word

    def to_wire(self) -> dict:
        return {"kind": self.kind, "generators": list(self.generators)}


class TraceMonoid(_WordMonoid):
    """Free monoid with selected commuting generator pairs.

    Canonical form is the lexicographic normal form for the declared generator
    order: repeatedly emit the least generator that is minimal in the
    dependence order of the remaining trace.
    """

    kind = "trace"

    def __init__(self, generators: Sequence[str], commutations: Iterable[tuple[str, str]]):
        super().__init__(generators)
        pairs = set()
        for pair in commutations:
            a, b = pair
            for g in (a, b):
                if g not in self._index:
                    raise ValueError(f"commutation references undeclared generator {g!r}")
            if a == b:
                raise ValueError(f"a generator cannot commute with itself: {a!r}")
            pairs.add(frozenset((a, b)))
        self.commutations = frozenset(pairs)

    def independent(self, a: str, b: str) -> bool:
        return a != b and frozenset((a, b)) in self.commutations

    def _extract_index(self, seq: list[str], g: str) -> Optional[int]:
        # g can be pulled to the front iff everything before its first
        # occurrence commutes with it.
        for i, c in enumerate(seq):
            if c == g:
                return i
            if not self.independent(c, g):
                return None
        return None

    def _normalize(self, seq: Sequence[str]) -> tuple[str, ...]:
        remaining = list(seq)
        out = []
        while remaining:
            for g in self.generators:
                i = self._extract_index(remaining, g)
                if i is not None:
                    out.append(g)
                    del remaining[i]
                    break
            else:  # pragma: no cover - some letter is always extractable
                raise AssertionError("no extractable letter in non-empty trace")
        return tuple(out)

    def mul(self, x, y):
        return self._normalize(x + y)

    def lgcd2(self, x, y):
        rx, ry = list(x), list(y)
        out = []
        while True:
            for g in self.generators:
                i = self._extract_index(rx, g)
                j = self._extract_index(ry, g) if i is not None else None
                if i is not None and j is not None:
                    out.append(g)
                    del rx[i]
                    del ry[j]
                    break
            else:
                break
        return self._normalize(out)

    def left_divide(self, d, x):
        remaining = list(x)
        for g in d:
            i = self._extract_index(remaining, g)
            if i is None:
                raise NotDivisible(f"{self.render(d)} does not left-divide {self.render(x)}")
            del remaining[i]
        return self._normalize(remaining)

    def canonical(self, payload):
        word = tuple(payload)
        for g in word:
            self._check_letter(g)
        return self._normalize(word)

    def to_wire(self) -> dict:
        pairs = sorted(sorted(p) for p in self.commutations)
        return {
            "kind": self.kind,
            "generators": list(self.generators),
            "commutations": [list(p) for p in pairs],
        }


class CommutativeMonoid(_GeneratedMonoid):
    """Free commutative monoid; elements are ``((gen, count), ...)`` tuples
    with positive counts, ordered by generator declaration."""

    kind = "commutative"

    def unit(self) -> Element:
        return ()

    def _from_counts(self, counts: dict[str, int]) -> Element:
        return tuple((g, counts[g]) for g in self.generators if counts.get(g, 0) > 0)

    def mul(self, x, y):
        counts = dict(x)
        for g, n in y:
            counts[g] = counts.get(g, 0) + n
        return self._from_counts(counts)

    def lgcd2(self, x, y):
        dy = dict(y)
        return tuple((g, min(n, dy[g])) for g, n in x if g in dy and min(n, dy[g]) > 0)

    def left_divide(self, d, x):
        counts = dict(x)
        for g, n in d:
            if counts.get(g, 0) < n:
                raise NotDivisible(f"{self.render(d)} does not left-divide {self.render(x)}")
            counts[g] -= n
        return self._from_counts(counts)

    def rank(self, x):
        return sum(n for _, n in x)

    def canonical(self, payload):
        counts: dict[str, int] = {}
        for g, n in tuple(payload):
            self._check_letter(g)
            if not isinstance(n, int) or n <= 0:
                raise MalformedElement(f"counts must be positive integers, got {n!r} for {g!r}")
            counts[g] = counts.get(g, 0) + n
        return self._from_counts(counts)

    def parse(self, text: str) -> Element:
        return self.canonical((g, 1) for g in self._split(text))

    def render(self, x: Element) -> str:
        letters = [g for g, n in x for _ in range(n)]
        return SEP.join(letters) if letters else UNIT_TEXT

    def encode(self, x: Element):
        return {g: n for g, n in sorted(x)}

    def decode(self, value) -> Element:
        if not isinstance(value, dict):
            raise MalformedElement(f"expected an object of generator counts, got {value!r}")
        return self.canonical(value.items())

    def to_wire(self) -> dict:
        return {"kind": self.kind, "generators": list(self.generators)}


class NatAddMonoid(Monoid):
    """Natural numbers under addition."""

    kind = "nat-add"

    def unit(self):
        return 0

    def mul(self, x, y):
        return x + y

    def lgcd2(self, x, y):
        return min(x, y)

    def left_divide(self, d, x):
        if d > x:
            raise NotDivisible(f"{d} does not left-divide {x}")
        return x - d

    def rank(self, x):
        return x

    def canonical(self, payload):
        if not isinstance(payload, int) or isinstance(payload, bool) or payload < 0:
            raise MalformedElement(f"expected a natural number, got {payload!r}")
        return payload

    def parse(self, text: str):
        if text == UNIT_TEXT:
            return 0
        try:
            return self.canonical(int(text))
        except (ValueError, MalformedElement):
            raise MalformedElement(f"malformed natural number: {text!r}") from None

    def render(self, x):
        return str(x)

    def encode(self, x):
        return x

    def decode(self, value):
        return self.canonical(value)

    def to_wire(self) -> dict:
        return {"kind": self.kind}


class CyclicGroup(Monoid):
    """Integers modulo ``modulus`` under addition; every element invertible."""

    kind = "cyclic-group"

    def __init__(self, modulus: int):
        if not isinstance(modulus, int) or modulus < 1:
            raise ValueError(f"modulus must be a positive integer, got {modulus!r}")
        self.modulus = modulus

    def unit(self):
        return 0

    def mul(self, x, y):
        return (x + y) % self.modulus

    def lgcd2(self, x, y):
        # Any element is a left-gcd in a group; the first entry is the
        # canonical choice, which makes the family fold pick the first
        # defined value and keeps lgcd(u·row) = u + lgcd(row).
        return x

    def left_divide(self, d, x):
        return (x - d) % self.modulus

    def is_invertible(self, x):
        return True

    def inverse(self, x):
        return (-x) % self.modulus

    def factor_left_invertible(self, u, v):
        return (u - v) % self.modulus

    def rank(self, x):
        return 0

    def canonical(self, payload):
        if not isinstance(payload, int) or isinstance(payload, bool):
            raise MalformedElement(f"expected an integer residue, got {payload!r}")
        return payload % self.modulus

    def parse(self, text: str):
        if text == UNIT_TEXT:
            return 0
        try:
            return self.canonical(int(text))
        except (ValueError, MalformedElement):
            raise MalformedElement(f"malformed residue: {text!r}") from None

    def render(self, x):
        return str(x)

    def encode(self, x):
        return x

    def decode(self, value):
        return self.canonical(value)

    def to_wire(self) -> dict:
        return {"kind": self.kind, "modulus": self.modulus}


KINDS = ("free", "trace", "commutative", "nat-add", "cyclic-group")


def make_monoid(
    kind: str,
    generators: Sequence[str] = (),
    commutations: Iterable[tuple[str, str]] = (),
    modulus: Optional[int] = None,
) -> Monoid:
    """Construct a monoid instance from its description."""
    if kind == "free":
        return FreeMonoid(generators)
    if kind == "trace":
        return TraceMonoid(generators, commutations)
    if kind == "commutative":
        return CommutativeMonoid(generators)
    if kind == "nat-add":
        return NatAddMonoid()
    if kind == "cyclic-group":
        if modulus is None:
            raise ValueError("cyclic-group requires a modulus")
        return CyclicGroup(modulus)
    raise ValueError(f"unknown monoid kind {kind!r} (expected one of {', '.join(KINDS)})")


def monoid_from_wire(doc, path: str = "monoid") -> Monoid:
    """Decode a monoid description, reporting failures as :class:`SchemaError`."""
    if not isinstance(doc, dict):
        raise SchemaError(path, f"expected an object, got {doc!r}")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise SchemaError(f"{path}.kind", f"unknown monoid kind {kind!r}")
    allowed = {"kind"}
    if kind in ("free", "trace", "commutative"):
        allowed.add("generators")
    if kind == "trace":
        allowed.add("commutations")
    if kind == "cyclic-group":
        allowed.add("modulus")
    for key in doc:
        if key not in allowed:
            raise SchemaError(f"{path}.{key}", f"unexpected field for kind {kind!r}")
    try:
        if kind == "trace":
            raw = doc.get("commutations", [])
            if not isinstance(raw, list) or not all(isinstance(p, list) and len(p) == 2 for p in raw):
                raise SchemaError(f"{path}.commutations", "expected a list of generator pairs")
            return make_monoid(kind, doc.get("generators", ()), [tuple(p) for p in raw])
        if kind == "cyclic-group":
            return make_monoid(kind, modulus=doc.get("modulus"))
        return make_monoid(kind, doc.get("generators", ()))
    except (ValueError, UnknownGenerator) as exc:
        raise SchemaError(path, str(exc)) from None


# -- partial (⊥-aware) operations ------------------------------------------


def mul_partial(monoid: Monoid, x: PartialValue, y: PartialValue) -> PartialValue:
    """Product extended to partial values; ``⊥`` absorbs on both sides."""
    if x is None or y is None:
        return None
    return monoid.mul(x, y)


def left_divide_partial(monoid: Monoid, d: PartialValue, x: PartialValue) -> PartialValue:
    """Left division on partial values: ``left_divide(d, ⊥) = ⊥``."""
    if x is None:
        return None
    if d is None:
        raise NotDivisible("⊥ does not left-divide a defined value")
    return monoid.left_divide(d, x)


def render_partial(monoid: Monoid, x: PartialValue) -> str:
    return BOTTOM_TEXT if x is None else monoid.render(x)


def lgcd_family(monoid: Monoid, row: Sequence[PartialValue]) -> PartialValue:
    """Canonical left-gcd of the defined entries, folded in index order.

    Returns ``⊥`` exactly when the row is nowhere defined.
    """
    acc: PartialValue = None
    for v in row:
        if v is None:
            continue
        acc = v if acc is None else monoid.lgcd2(acc, v)
    return acc


def red_row(monoid: Monoid, row: Sequence[PartialValue]) -> PartialRow:
    """Divide the family left-gcd out of every entry.

    Nowhere-defined rows map to themselves; the result always has an
    invertible family left-gcd.
    """
    g = lgcd_family(monoid, row)
    if g is None:
        return tuple(row)
    return tuple(None if v is None else monoid.left_divide(g, v) for v in row)


def factor_left_invertible(monoid: Monoid, u: PartialValue, v: PartialValue) -> Optional[Element]:
    """Invertible ``χ`` with ``u == χ * v`` on partial values (both ``⊥`` -> unit)."""
    if u is None and v is None:
        return monoid.unit()
    if u is None or v is None:
        return None
    return monoid.factor_left_invertible(u, v)


def rows_equal_up_to_left_invertible(
    monoid: Monoid, r1: Sequence[PartialValue], r2: Sequence[PartialValue]
) -> Optional[Element]:
    """A single invertible ``χ`` with ``r1 == χ·r2`` pointwise, or ``None``.

    Supports must coincide; nowhere-defined rows are equal only to each other
    (with witness the unit).
    """
    if len(r1) != len(r2):
        raise ValueError("rows must be indexed by the same key list")
    chi: Optional[Element] = None
    for u, v in zip(r1, r2):
        if (u is None) != (v is None):
            return None
        if u is None:
            continue
        if chi is None:
            chi = monoid.factor_left_invertible(u, v)
            if chi is None:
                return None
        elif u != monoid.mul(chi, v):
            return None
    return monoid.unit() if chi is None else chi
