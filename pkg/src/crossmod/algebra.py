"""Finite groups by multiplication table and finite crossed modules.

Elements are plain integer indices ``0 .. order-1``; names are cosmetic.
All objects are frozen after construction and safe to share between worker
processes.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

MAX_ORDER = 512

Word = Sequence[tuple[int, int]]


class GroupTableError(ValueError):
    """A multiplication table that does not define a group."""

    def __init__(self, message: str, witness: tuple = ()):
        super().__init__(message)
        self.witness = witness


class CrossedModuleError(ValueError):
    def __init__(self, violations: list[Violation]):
        self.violations = violations
        head = violations[0].message if violations else "invalid crossed module"
        more = f" (+{len(violations) - 1} more)" if len(violations) > 1 else ""
        super().__init__(head + more)


@dataclass(frozen=True)
class FiniteGroup:
    product: tuple[tuple[int, ...], ...]
    identity: int
    inverse: tuple[int, ...]
    element_names: tuple[str, ...] | None = field(default=None, compare=False)

    @property
    def order(self) -> int:
        return len(self.product)

    def elements(self) -> range:
        return range(len(self.product))

    def mul(self, a: int, b: int) -> int:
        return self.product[a][b]

    def inv(self, a: int) -> int:
        return self.inverse[a]

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inverse[a], -k
        out = self.identity
        for _ in range(k):
            out = self.product[out][a]
        return out

    def conj(self, g: int, a: int) -> int:
        """g a g^-1"""
        return self.product[self.product[g][a]][self.inverse[g]]

    def name(self, a: int) -> str:
        if self.element_names is not None:
            return self.element_names[a]
        return str(a)

    @cached_property
    def is_abelian(self) -> bool:
        t = np.asarray(self.product)
        return bool((t == t.T).all())

    def __repr__(self) -> str:
        return f"FiniteGroup(order={self.order})"


@dataclass(frozen=True)
class GroupHom:
    source: FiniteGroup
    target: FiniteGroup
    image: tuple[int, ...]

    def __call__(self, a: int) -> int:
        return self.image[a]

    def failures(self) -> list[tuple[int, int]]:
        """Pairs (a, b) with image(a*b) != image(a)*image(b)."""
        s, t, f = self.source, self.target, self.image
        return [
            (a, b)
            for a in s.elements()
            for b in s.elements()
            if f[s.product[a][b]] != t.product[f[a]][f[b]]
        ]


@dataclass(frozen=True)
class Violation:
    kind: str
    witness: tuple
    message: str


@dataclass(frozen=True)
class FiniteCrossedModule:
    """(G, E, boundary, action); ``action[g][e]`` is g acting on e.

    Constructing this class directly does not validate anything; use
    :func:`make_crossed_module` or :func:`validate_crossed_module`.
    """

    base: FiniteGroup
    principal: FiniteGroup
    boundary: GroupHom
    action: tuple[tuple[int, ...], ...]
    name: str = field(default="", compare=False)

    def act(self, g: int, e: int) -> int:
        return self.action[g][e]

    def bd(self, e: int) -> int:
        return self.boundary.image[e]

    @cached_property
    def fibers(self) -> tuple[tuple[int, ...], ...]:
        """fibers[g] = all e with boundary(e) == g."""
        out: list[list[int]] = [[] for _ in self.base.elements()]
        for e, g in enumerate(self.boundary.image):
            out[g].append(e)
        return tuple(tuple(f) for f in out)

    @cached_property
    def kernel(self) -> tuple[int, ...]:
        return self.fibers[self.base.identity]

    def __repr__(self) -> str:
        label = f"{self.name!r}, " if self.name else ""
        return (
            f"FiniteCrossedModule({label}#G={self.base.order}, "
            f"#E={self.principal.order})"
        )


# -- groups ------------------------------------------------------------------


def make_from_table(
    order: int,
    table: Sequence[Sequence[int]],
    names: Sequence[str] | None = None,
    max_order: int = MAX_ORDER,
) -> FiniteGroup:
    """Validate a row-major multiplication table and derive identity/inverses.

    Raises :class:`GroupTableError` carrying a witness element or triple.
    """
    if order < 1:
        raise GroupTableError(f"group order must be positive, got {order}")
    if order > max_order:
        raise GroupTableError(f"group order {order} exceeds the bound {max_order}")
    rows = [tuple(int(x) for x in row) for row in table]
    if len(rows) != order or any(len(r) != order for r in rows):
        raise GroupTableError(f"product table must be {order}x{order}")
    for a, row in enumerate(rows):
        for b, c in enumerate(row):
            if not 0 <= c < order:
                raise GroupTableError(
                    f"product({a},{b}) = {c} is out of range", (a, b)
                )
    if names is not None and len(names) != order:
        raise GroupTableError(f"expected {order} element names, got {len(names)}")

    t = np.asarray(rows, dtype=np.int64)
    # associativity: (a b) c == a (b c), one row of a at a time
    for a in range(order):
        left = t[t[a]]  # left[b, c] = (a b) c
        right = t[a][t]  # right[b, c] = a (b c)
        bad = np.argwhere(left != right)
        if len(bad):
            b, c = (int(x) for x in bad[0])
            raise GroupTableError(
                f"product is not associative at ({a},{b},{c})", (a, b, c)
            )

    idx = np.arange(order)
    identity = None
    for e in range(order):
        if (t[e] == idx).all() and (t[:, e] == idx).all():
            identity = e
            break
    if identity is None:
        raise GroupTableError("table has no two-sided identity")

    inverse = []
    for a in range(order):
        hits = np.flatnonzero(t[a] == identity)
        inv = next((int(b) for b in hits if t[b, a] == identity), None)
        if inv is None:
            raise GroupTableError(f"element {a} has no inverse", (a,))
        inverse.append(inv)

    return FiniteGroup(
        tuple(rows), identity, tuple(inverse), tuple(names) if names else None
    )


def make_cyclic(n: int) -> FiniteGroup:
    """The additive group Z_n; element i is named "i"."""
    if n < 1:
        raise ValueError(f"cyclic group order must be positive, got {n}")
    table = tuple(tuple((a + b) % n for b in range(n)) for a in range(n))
    return FiniteGroup(
        table, 0, tuple((-a) % n for a in range(n)), tuple(str(i) for i in range(n))
    )


def make_direct_product(
    a: FiniteGroup, b: FiniteGroup, max_order: int = MAX_ORDER
) -> FiniteGroup:
    """Componentwise product; element (x, y) has index x * b.order + y."""
    n = a.order * b.order
    if n > max_order:
        raise ValueError(f"direct product order {n} exceeds the bound {max_order}")
    m = b.order

    def idx(x: int, y: int) -> int:
        return x * m + y

    table = tuple(
        tuple(
            idx(a.product[x1][x2], b.product[y1][y2])
            for x2 in a.elements()
            for y2 in b.elements()
        )
        for x1 in a.elements()
        for y1 in b.elements()
    )
    inverse = tuple(idx(a.inverse[x], b.inverse[y]) for x in a.elements() for y in b.elements())
    names = tuple(f"({a.name(x)},{b.name(y)})" for x in a.elements() for y in b.elements())
    return FiniteGroup(table, idx(a.identity, b.identity), inverse, names)


def make_symmetric(n: int) -> FiniteGroup:
    """S_n acting on {0..n-1}; product is composition (p*q)(i) = p(q(i))."""
    perms = list(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    table = [
        [index[tuple(p[q[i]] for i in range(n))] for q in perms] for p in perms
    ]
    names = ["".join(str(i + 1) for i in p) for p in perms]
    return make_from_table(len(perms), table, names)


def trivial_group() -> FiniteGroup:
    return make_cyclic(1)


# -- words ---------------------------------------------------------------------


def evaluate_group_word(group: FiniteGroup, assignment: Sequence[int], word: Word) -> int:
    """Fold generator-power letters left to right under ``assignment``."""
    out = group.identity
    prod, inv = group.product, group.inverse
    for gen, exp in word:
        if not 0 <= gen < len(assignment):
            raise IndexError(f"generator index {gen} out of range")
        x = assignment[gen]
        if exp == 1:
            out = prod[out][x]
        elif exp == -1:
            out = prod[out][inv[x]]
        else:
            out = prod[out][group.power(x, exp)]
    return out


# -- crossed modules -----------------------------------------------------------


def act(cm: FiniteCrossedModule, g: int, e: int) -> int:
    return cm.action[g][e]


def boundary(cm: FiniteCrossedModule, e: int) -> int:
    return cm.boundary.image[e]


def validate_crossed_module(cm: FiniteCrossedModule) -> list[Violation]:
    """Exhaustively check the action axioms, CM1 and CM2.

    Returns every violation found, each with its witness elements; an empty
    list means ``cm`` is a crossed module.
    """
    G, E = cm.base, cm.principal
    out: list[Violation] = []

    bd = cm.boundary.image
    if len(bd) != E.order or any(not 0 <= g < G.order for g in bd):
        return [Violation("shape", (), "boundary must map every element of E into G")]
    if len(cm.action) != G.order or any(
        len(row) != E.order or any(not 0 <= x < E.order for x in row)
        for row in cm.action
    ):
        return [Violation("shape", (), "action table must be #G x #E with entries in E")]

    for e, f in cm.boundary.failures():
        out.append(
            Violation("boundary-hom", (e, f), f"boundary({e}*{f}) != boundary({e})*boundary({f})")
        )

    A, Gp, Ep = cm.action, G.product, E.product
    for e in E.elements():
        if A[G.identity][e] != e:
            out.append(Violation("action-identity", (e,), f"1 acting on {e} gives {A[G.identity][e]}"))
    for g in G.elements():
        row = A[g]
        if len(set(row)) != E.order:
            out.append(Violation("action-bijection", (g,), f"action of {g} is not a bijection"))
        for e in E.elements():
            for f in E.elements():
                if row[Ep[e][f]] != Ep[row[e]][row[f]]:
                    out.append(
                        Violation(
                            "action-automorphism",
                            (g, e, f),
                            f"{g} acting on {e}*{f} is not ({g}.{e})*({g}.{f})",
                        )
                    )
    for g in G.elements():
        for h in G.elements():
            gh = Gp[g][h]
            for e in E.elements():
                if A[gh][e] != A[g][A[h][e]]:
                    out.append(
                        Violation(
                            "action-composition",
                            (g, h, e),
                            f"({g}*{h}).{e} != {g}.({h}.{e})",
                        )
                    )
    for g in G.elements():
        for e in E.elements():
            if bd[A[g][e]] != G.conj(g, bd[e]):
                out.append(
                    Violation("CM1", (g, e), f"boundary({g}.{e}) != {g} boundary({e}) {g}^-1")
                )
    for e in E.elements():
        for f in E.elements():
            if A[bd[e]][f] != E.conj(e, f):
                out.append(
                    Violation("CM2", (e, f), f"boundary({e}).{f} != {e} {f} {e}^-1")
                )
    return out


def make_crossed_module(
    base: FiniteGroup,
    principal: FiniteGroup,
    boundary_images: Sequence[int],
    action_table: Sequence[Sequence[int]],
    name: str = "",
) -> FiniteCrossedModule:
    cm = FiniteCrossedModule(
        base,
        principal,
        GroupHom(principal, base, tuple(int(g) for g in boundary_images)),
        tuple(tuple(int(x) for x in row) for row in action_table),
        name,
    )
    problems = validate_crossed_module(cm)
    if problems:
        raise CrossedModuleError(problems)
    return cm


def make_trivial_boundary(
    G: FiniteGroup,
    E: FiniteGroup,
    action_table: Sequence[Sequence[int]],
    name: str = "",
) -> FiniteCrossedModule:
    """(G, E, 1, action) for abelian E.

    With a trivial boundary the Peiffer identity reads ``f = e f e^-1``,
    so E must be abelian; this is checked, not assumed.
    """
    for e in E.elements():
        for f in E.elements():
            if E.product[e][f] != E.product[f][e]:
                raise CrossedModuleError(
                    [Violation("CM2", (e, f), f"E is not abelian: {e}*{f} != {f}*{e}")]
                )
    return make_crossed_module(G, E, [G.identity] * E.order, action_table, name)


def make_conjugation(G: FiniteGroup, name: str = "") -> FiniteCrossedModule:
    """(G, G, id, conjugation); valid for every G."""
    table = [[G.conj(g, e) for e in G.elements()] for g in G.elements()]
    return make_crossed_module(G, G, list(G.elements()), table, name)


def make_cyclic_unit_action(n: int, m: int, unit: int, name: str = "") -> FiniteCrossedModule:
    """Z_n acting on Z_m by v -> unit^g v, with trivial boundary.

    Needs unit^n == 1 mod m so that the generator of Z_n acts with period n.
    """
    if pow(unit, n, m) != 1 % m:
        raise ValueError(f"{unit}^{n} is not 1 mod {m}")
    table = [[(pow(unit, g, m) * v) % m for v in range(m)] for g in range(n)]
    return make_trivial_boundary(make_cyclic(n), make_cyclic(m), table, name)


def make_trivial_crossed_module() -> FiniteCrossedModule:
    one = trivial_group()
    return make_crossed_module(one, one, [0], [[0]], "trivial")


def make_inclusion(G: FiniteGroup, subgroup: Iterable[int], name: str = "") -> FiniteCrossedModule:
    """(G, N, inclusion, conjugation) for a normal subgroup N of G."""
    elems = sorted(set(subgroup))
    pos = {x: i for i, x in enumerate(elems)}
    try:
        table = [[pos[G.product[a][b]] for b in elems] for a in elems]
        action = [[pos[G.conj(g, x)] for x in elems] for g in G.elements()]
    except KeyError as exc:
        raise ValueError("subset is not a normal subgroup") from exc
    N = make_from_table(len(elems), table, [G.name(x) for x in elems])
    return make_crossed_module(G, N, elems, action, name)


# -- crossed-module files --------------------------------------------------------


def parse_crossed_module(text: str, name: str = "") -> FiniteCrossedModule:
    """Read the ``crossed_module v1`` text format.

    Numbers may be spread over any number of lines; ``#`` starts a comment.
    """
    from ._text import ParseError, TokenStream

    ts = TokenStream(text)
    ts.expect_header("crossed_module", "v1")
    groups: dict[str, FiniteGroup] = {}
    bd: list[int] | None = None
    action: list[list[int]] | None = None
    while not ts.at_end():
        tok = ts.next()
        if tok.value == "group":
            role = ts.next()
            if role.value not in ("base", "principal"):
                raise ParseError("expected 'base' or 'principal'", role.line, role.col)
            if role.value in groups:
                raise ParseError(f"group {role.value} given twice", role.line, role.col)
            groups[role.value] = _parse_group_spec(ts)
        elif tok.value == "boundary":
            if "principal" not in groups:
                raise ParseError("boundary before 'group principal'", tok.line, tok.col)
            bd = [ts.next_int() for _ in groups["principal"].elements()]
        elif tok.value == "action":
            if "base" not in groups or "principal" not in groups:
                raise ParseError("action before both groups", tok.line, tok.col)
            G, E = groups["base"], groups["principal"]
            action = [[ts.next_int() for _ in E.elements()] for _ in G.elements()]
        else:
            raise ParseError(f"unexpected token {tok.value!r}", tok.line, tok.col)
    for part in ("base", "principal"):
        if part not in groups:
            raise ParseError(f"missing 'group {part}'", ts.line, 1)
    if bd is None or action is None:
        raise ParseError("missing 'boundary' or 'action' section", ts.line, 1)
    return make_crossed_module(groups["base"], groups["principal"], bd, action, name)


def _parse_group_spec(ts) -> FiniteGroup:
    from ._text import ParseError

    kind = ts.next()
    if kind.value == "cyclic":
        n = ts.next_int()
        if n < 1:
            raise ParseError("cyclic order must be positive", kind.line, kind.col)
        return make_cyclic(n)
    if kind.value == "product":
        return make_direct_product(_parse_group_spec(ts), _parse_group_spec(ts))
    if kind.value == "table":
        n = ts.next_int()
        if not 1 <= n <= MAX_ORDER:
            raise ParseError(f"table order {n} out of range", kind.line, kind.col)
        table = [[ts.next_int() for _ in range(n)] for _ in range(n)]
        try:
            return make_from_table(n, table)
        except GroupTableError as exc:
            raise ParseError(str(exc), kind.line, kind.col) from exc
    raise ParseError(f"unknown group spec {kind.value!r}", kind.line, kind.col)


def serialize_crossed_module(cm: FiniteCrossedModule) -> str:
    """Write ``cm`` in the text format using explicit tables."""

    def group_block(role: str, G: FiniteGroup) -> list[str]:
        rows = [" ".join(map(str, row)) for row in G.product]
        return [f"group {role} table {G.order}", *rows]

    lines = ["crossed_module v1"]
    lines += group_block("base", cm.base)
    lines += group_block("principal", cm.principal)
    lines.append("boundary " + " ".join(map(str, cm.boundary.image)))
    lines.append("action")
    lines += [" ".join(map(str, row)) for row in cm.action]
    return "\n".join(lines) + "\n"
