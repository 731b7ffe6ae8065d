"""Geometric construction DSL: parsing, validation, and translation of a
figure plus a comparison statement into a polynomial system.

The translation follows a fixed mechanical scheme: two coordinate variables
per point and one per segment length (v1, v2, ... in declaration order), a
reciprocal-trick variable for triangle nondegeneracy, then w1 (and w2 when
the second compared expression is not a bare segment), the ratio variable m
and the nonvanishing variable n. Each emitted equation keeps a source string
in the established wire style, e.g. "2*v7-v5-v3" or "-w1+(v13+v12)^1".
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .polynomials import Polynomial, render


class GctError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(f"line {line}:{column}: {message}" if line else message)
        self.line = line
        self.column = column


class GctSyntaxError(GctError):
    pass


class UndeclaredNameError(GctError):
    pass


class ArityError(GctError):
    pass


class NotHomogeneousError(ValueError):
    pass


class DegreeMismatchError(ValueError):
    pass


class NotEnoughFreePointsError(ValueError):
    pass


class UnsupportedStepError(ValueError):
    pass


# ---------------------------------------------------------------------------
# program representation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FreePoint:
    name: str

@dataclass(frozen=True)
class Midpoint:
    name: str
    p: str
    q: str

@dataclass(frozen=True)
class LineThrough:
    name: str
    p: str
    q: str

@dataclass(frozen=True)
class IntersectLines:
    name: str
    line1: str
    line2: str

@dataclass(frozen=True)
class PerpFoot:
    name: str
    point: str
    line: str

@dataclass(frozen=True)
class Circumcenter:
    name: str
    a: str
    b: str
    c: str

@dataclass(frozen=True)
class Incenter:
    name: str
    a: str
    b: str
    c: str

@dataclass(frozen=True)
class RegularChain:
    base_a: str
    base_b: str
    new_names: tuple[str, ...]
    n: int

@dataclass(frozen=True)
class SegmentDecl:
    name: str
    p: str
    q: str

Step = Union[FreePoint, Midpoint, LineThrough, IntersectLines, PerpFoot,
             Circumcenter, Incenter, RegularChain, SegmentDecl]


@dataclass(frozen=True)
class RightAngle:
    p: str
    vertex: str
    r: str

@dataclass(frozen=True)
class EqualLength:
    s: str
    t: str

@dataclass(frozen=True)
class SameHalfPlane:
    """Point `p` lies strictly on the positive-orientation side of a->b."""
    p: str
    a: str
    b: str

Constraint = Union[RightAngle, EqualLength, SameHalfPlane]


# geometric expressions over segment names --------------------------------

@dataclass(frozen=True)
class SegLeaf:
    name: str

@dataclass(frozen=True)
class ConstLeaf:
    value: Fraction

@dataclass(frozen=True)
class BinOp:
    op: str  # '+', '-', '*'
    left: "GeomExpr"
    right: "GeomExpr"

@dataclass(frozen=True)
class PowOp:
    base: "GeomExpr"
    exponent: int

GeomExpr = Union[SegLeaf, ConstLeaf, BinOp, PowOp]


def expr_leaves(e: GeomExpr) -> set[str]:
    if isinstance(e, SegLeaf):
        return {e.name}
    if isinstance(e, ConstLeaf):
        return set()
    if isinstance(e, BinOp):
        return expr_leaves(e.left) | expr_leaves(e.right)
    return expr_leaves(e.base)


def expr_degree(e: GeomExpr) -> Optional[int]:
    """Homogeneous degree in length units, or raise NotHomogeneousError.

    Returns None for a pure constant subexpression (degree polymorphic 0)."""
    if isinstance(e, SegLeaf):
        return 1
    if isinstance(e, ConstLeaf):
        return None
    if isinstance(e, BinOp):
        dl, dr = expr_degree(e.left), expr_degree(e.right)
        if e.op in "+-":
            if dl is None and dr is None:
                return None
            if dl is None or dr is None or dl != dr:
                raise NotHomogeneousError(
                    f"sum mixes degrees {dl} and {dr}")
            return dl
        # product
        return (dl or 0) + (dr or 0) if (dl is not None or dr is not None) else None
    d = expr_degree(e.base)
    return None if d is None else d * e.exponent


def expr_render(e: GeomExpr, names: dict[str, str]) -> str:
    """Render with segment names replaced (used inside '(...)^1' templates)."""
    if isinstance(e, SegLeaf):
        return names[e.name]
    if isinstance(e, ConstLeaf):
        v = e.value
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(e, BinOp):
        left, right = expr_render(e.left, names), expr_render(e.right, names)
        if e.op in "+-":
            return f"{left}{e.op}{right}"
        lw = f"({left})" if isinstance(e.left, BinOp) and e.left.op in "+-" else left
        rw = f"({right})" if isinstance(e.right, BinOp) and e.right.op in "+-" else right
        return f"{lw}*{rw}"
    base = expr_render(e.base, names)
    if isinstance(e.base, (BinOp, PowOp)):
        base = f"({base})"
    return f"{base}^{e.exponent}"


def expr_to_polynomial(e: GeomExpr, seg_vars: dict[str, str],
                       universe: Sequence[str]) -> Polynomial:
    if isinstance(e, SegLeaf):
        return Polynomial.variable(seg_vars[e.name], universe)
    if isinstance(e, ConstLeaf):
        return Polynomial.constant(e.value, universe)
    if isinstance(e, BinOp):
        l = expr_to_polynomial(e.left, seg_vars, universe)
        r = expr_to_polynomial(e.right, seg_vars, universe)
        return l + r if e.op == "+" else l - r if e.op == "-" else l * r
    return expr_to_polynomial(e.base, seg_vars, universe) ** e.exponent


@dataclass
class ConstructionProgram:
    steps: list[Step]
    constraints: list[Constraint]
    statement: Optional[tuple[GeomExpr, GeomExpr]] = None

    def free_points(self) -> list[str]:
        return [s.name for s in self.steps if isinstance(s, FreePoint)]

    def point_names(self) -> list[str]:
        out = []
        for s in self.steps:
            if isinstance(s, (FreePoint, Midpoint, IntersectLines, PerpFoot,
                              Circumcenter, Incenter)):
                out.append(s.name)
            elif isinstance(s, RegularChain):
                out.extend(s.new_names)
        return out

    def segment_names(self) -> list[str]:
        return [s.name for s in self.steps if isinstance(s, SegmentDecl)]


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

_KEYWORDS = {"point", "midpoint", "segment", "line", "intersect", "perpfoot",
             "circumcenter", "incenter", "regular", "rightangle", "equal",
             "samehalfplane", "compare", "vs"}


def _split_statements(src: str):
    for lineno, raw in enumerate(src.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        col = 1
        for chunk in line.split(";"):
            if chunk.strip():
                yield lineno, col + len(chunk) - len(chunk.lstrip()), chunk.strip()
            col += len(chunk) + 1


class _ExprParser:
    def __init__(self, text: str, segments: set[str], line: int):
        self.text = text
        self.pos = 0
        self.segments = segments
        self.line = line

    def error(self, msg: str, cls=GctSyntaxError):
        raise cls(msg, self.line, self.pos + 1)

    def peek(self) -> str:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self) -> str:
        ch = self.peek()
        self.pos += 1
        return ch

    def parse(self) -> GeomExpr:
        e = self.expr()
        if self.peek():
            self.error(f"unexpected {self.peek()!r}")
        return e

    def expr(self) -> GeomExpr:
        node = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> GeomExpr:
        node = self.power()
        while True:
            ch = self.peek()
            if ch == "*":
                self.take()
                node = BinOp("*", node, self.power())
            elif ch == "/":
                self.take()
                rhs = self.power()
                if not isinstance(rhs, ConstLeaf) or rhs.value == 0:
                    self.error("division only by nonzero rational constants")
                node = BinOp("*", node, ConstLeaf(1 / rhs.value))
            else:
                return node

    def power(self) -> GeomExpr:
        if self.peek() == "-":
            self.take()
            return BinOp("-", ConstLeaf(Fraction(0)), self.power())
        base = self.atom()
        if self.peek() == "^":
            self.take()
            digits = ""
            while self.peek().isdigit():
                digits += self.take()
            if not digits or int(digits) < 1:
                self.error("exponent must be a positive integer")
            return PowOp(base, int(digits))
        return base

    def atom(self) -> GeomExpr:
        ch = self.peek()
        if ch == "(":
            self.take()
            node = self.expr()
            if self.peek() != ")":
                self.error("missing ')'")
            self.take()
            return node
        if ch.isdigit():
            digits = ""
            while self.peek().isdigit():
                digits += self.take()
            if self.peek() == "/":
                save = self.pos
                self.take()
                if self.peek().isdigit():
                    den = ""
                    while self.peek().isdigit():
                        den += self.take()
                    return ConstLeaf(Fraction(int(digits), int(den)))
                self.pos = save
            return ConstLeaf(Fraction(int(digits)))
        if ch.isalpha() or ch == "_":
            name = ""
            while self.peek().isalnum() or self.peek() == "_":
                name += self.take()
            if name not in self.segments:
                self.error(f"undeclared segment {name!r}", UndeclaredNameError)
            return SegLeaf(name)
        self.error(f"unexpected character {ch!r}")


def parse_construction(src: str) -> ConstructionProgram:
    """Parse and validate a `.gct` program."""
    steps: list[Step] = []
    constraints: list[Constraint] = []
    statement: Optional[tuple[GeomExpr, GeomExpr]] = None
    points: set[str] = set()
    lines: set[str] = set()
    segments: set[str] = set()
    _reserved = re.compile(r"^(v\d+|w1|w2|m|n)$")

    def declare(name: str, kind: str, lineno: int):
        if name in points or name in lines or name in segments:
            raise GctSyntaxError(f"name {name!r} already declared", lineno, 1)
        if name in _KEYWORDS or _reserved.match(name):
            raise GctSyntaxError(f"{name!r} is a reserved word", lineno, 1)
        {"point": points, "line": lines, "segment": segments}[kind].add(name)

    def need_point(name: str, lineno: int):
        if name not in points:
            raise UndeclaredNameError(f"undeclared point {name!r}", lineno, 1)

    def need_line(name: str, lineno: int):
        if name not in lines:
            raise UndeclaredNameError(f"undeclared line {name!r}", lineno, 1)

    def need_segment(name: str, lineno: int):
        if name not in segments:
            raise UndeclaredNameError(f"undeclared segment {name!r}", lineno, 1)

    for lineno, col, text in _split_statements(src):
        if statement is not None:
            raise GctSyntaxError("statements after 'compare'", lineno, col)
        words = text.split()
        head = words[0]

        def arity(n: int):
            if len(words) != n + 1:
                raise ArityError(f"'{head}' expects {n} arguments", lineno, col)

        if head == "point":
            arity(1)
            declare(words[1], "point", lineno)
            steps.append(FreePoint(words[1]))
        elif head == "midpoint":
            arity(3)
            need_point(words[2], lineno)
            need_point(words[3], lineno)
            declare(words[1], "point", lineno)
            steps.append(Midpoint(*words[1:4]))
        elif head == "segment":
            arity(3)
            need_point(words[2], lineno)
            need_point(words[3], lineno)
            declare(words[1], "segment", lineno)
            steps.append(SegmentDecl(*words[1:4]))
        elif head == "line":
            arity(3)
            need_point(words[2], lineno)
            need_point(words[3], lineno)
            declare(words[1], "line", lineno)
            steps.append(LineThrough(*words[1:4]))
        elif head == "intersect":
            arity(3)
            need_line(words[2], lineno)
            need_line(words[3], lineno)
            declare(words[1], "point", lineno)
            steps.append(IntersectLines(*words[1:4]))
        elif head == "perpfoot":
            arity(3)
            need_point(words[2], lineno)
            need_line(words[3], lineno)
            declare(words[1], "point", lineno)
            steps.append(PerpFoot(*words[1:4]))
        elif head == "circumcenter":
            arity(4)
            for w in words[2:5]:
                need_point(w, lineno)
            declare(words[1], "point", lineno)
            steps.append(Circumcenter(*words[1:5]))
        elif head == "incenter":
            arity(4)
            for w in words[2:5]:
                need_point(w, lineno)
            declare(words[1], "point", lineno)
            steps.append(Incenter(*words[1:5]))
        elif head == "regular":
            if len(words) < 4:
                raise ArityError("'regular' expects names then a vertex count",
                                 lineno, col)
            try:
                n = int(words[-1])
            except ValueError:
                raise ArityError("'regular' must end with the vertex count",
                                 lineno, col)
            if n not in (3, 4, 5, 6):
                raise UnsupportedStepError(f"regular {n}-gon not supported")
            names = words[1:-1]
            if len(names) < 3 or len(names) > n:
                raise ArityError(
                    f"'regular' lists 3..{n} vertices for an {n}-gon", lineno, col)
            need_point(names[0], lineno)
            need_point(names[1], lineno)
            for nm in names[2:]:
                declare(nm, "point", lineno)
            steps.append(RegularChain(names[0], names[1], tuple(names[2:]), n))
        elif head == "rightangle":
            arity(3)
            for w in words[1:4]:
                need_point(w, lineno)
            constraints.append(RightAngle(*words[1:4]))
        elif head == "equal":
            arity(2)
            need_segment(words[1], lineno)
            need_segment(words[2], lineno)
            constraints.append(EqualLength(words[1], words[2]))
        elif head == "samehalfplane":
            arity(3)
            for w in words[1:4]:
                need_point(w, lineno)
            constraints.append(SameHalfPlane(*words[1:4]))
        elif head == "compare":
            body = text[len("compare"):]
            if " vs " not in body:
                raise GctSyntaxError("compare needs 'vs'", lineno, col)
            lhs_text, rhs_text = body.split(" vs ", 1)
            lhs = _ExprParser(lhs_text, segments, lineno).parse()
            rhs = _ExprParser(rhs_text, segments, lineno).parse()
            statement = (lhs, rhs)
        else:
            raise GctSyntaxError(f"unknown statement {head!r}", lineno, col)

    return ConstructionProgram(steps, constraints, statement)


# ---------------------------------------------------------------------------
# algebraization
# ---------------------------------------------------------------------------

EXTERIOR_COS_MINPOLY = {
    3: [Fraction(1), Fraction(2)],                  # 2c + 1 = 0
    4: [Fraction(0), Fraction(1)],                  # c = 0
    5: [Fraction(-1), Fraction(2), Fraction(4)],    # 4c^2 + 2c - 1 = 0
    6: [Fraction(-1), Fraction(2)],                 # 2c - 1 = 0
}


@dataclass
class TaggedPoly:
    poly: Polynomial
    role: str          # construction|length|ndg|w1def|w2def|ratio|nonvanishing|witness
    source: str        # wire-style text
    inert: bool = False


@dataclass
class Translation:
    """Polynomial image of a construction with variable bookkeeping."""

    universe: list[str]
    polys: list[TaggedPoly]
    varmap: dict[str, tuple[str, ...]]
    point_vars: dict[str, tuple[str, str]]
    seg_vars: dict[str, str]
    posvars: set[str]
    signconds: list[tuple[Polynomial, int]]
    ndg: Optional[tuple[Polynomial, str]]
    sqrt_defs: dict[str, Polynomial]       # length var -> squared-distance poly
    rot_vars: list[tuple[str, str, int]]   # (cos var, sin var, n) per chain
    program: ConstructionProgram
    pinned: dict[str, Fraction] = field(default_factory=dict)
    w1_var: Optional[str] = None
    w2_var: Optional[str] = None
    denom_var: Optional[str] = None
    protected: set[str] = field(default_factory=set)

    def working_polys(self) -> list[TaggedPoly]:
        """Everything the presolver and the bounds path see (the
        nonvanishing equation is carried separately)."""
        return [tp for tp in self.polys if tp.role != "nonvanishing"]

    def working_vars(self) -> list[str]:
        occurring: set[str] = set()
        for tp in self.working_polys():
            occurring |= tp.poly.support()
        return [v for v in self.universe if v in occurring]

    def statement_checked_degree(self) -> Optional[int]:
        if self.program.statement is None:
            return None
        try:
            return check_homogeneity(*self.program.statement)
        except (NotHomogeneousError, DegreeMismatchError):
            return None

    def render_system(self, include_nonvanishing: bool = True) -> str:
        polys = self.polys if include_nonvanishing else self.working_polys()
        return ",".join(tp.source for tp in polys)


def _dist_square_poly(p1: tuple[str, str], p2: tuple[str, str],
                      universe: Sequence[str]) -> Polynomial:
    px, py = (Polynomial.variable(v, universe) for v in p1)
    qx, qy = (Polynomial.variable(v, universe) for v in p2)
    return (px - qx) ** 2 + (py - qy) ** 2


def _orientation_poly(p: tuple[str, str], a: tuple[str, str], b: tuple[str, str],
                      universe: Sequence[str]) -> Polynomial:
    """det[[px,py,1],[ax,ay,1],[bx,by,1]]: positive when p is left of a->b."""
    px, py = (Polynomial.variable(v, universe) for v in p)
    ax, ay = (Polynomial.variable(v, universe) for v in a)
    bx, by = (Polynomial.variable(v, universe) for v in b)
    return px * (ay - by) - py * (ax - bx) + (ax * by - ay * bx)


def algebraize(prog: ConstructionProgram) -> Translation:
    """Translate a program into its polynomial system, in declaration order."""
    # ---- variable allocation ---------------------------------------------
    point_vars: dict[str, tuple[str, str]] = {}
    seg_vars: dict[str, str] = {}
    seg_by_pair: dict[frozenset, str] = {}
    rot_vars: list[tuple[str, str, int]] = []
    chain_rot: dict[int, tuple[str, str]] = {}
    counter = 0

    def fresh() -> str:
        nonlocal counter
        counter += 1
        return f"v{counter}"

    for idx, step in enumerate(prog.steps):
        if isinstance(step, (FreePoint, Midpoint, IntersectLines, PerpFoot,
                             Circumcenter, Incenter)):
            point_vars[step.name] = (fresh(), fresh())
        elif isinstance(step, RegularChain):
            for nm in step.new_names:
                point_vars[nm] = (fresh(), fresh())
            cvar, svar = fresh(), fresh()
            chain_rot[idx] = (cvar, svar)
            rot_vars.append((cvar, svar, step.n))

    internal_lengths: dict[int, dict[str, str]] = {}
    for idx, step in enumerate(prog.steps):
        if isinstance(step, SegmentDecl):
            pair = frozenset((step.p, step.q))
            if pair in seg_by_pair:
                seg_vars[step.name] = seg_by_pair[pair]
            else:
                var = fresh()
                seg_vars[step.name] = var
                seg_by_pair[pair] = var
        elif isinstance(step, Incenter):
            # side lengths a=|BC|, b=|CA|, c=|AB| reusing declared segments
            sides = {}
            for key, (p, q) in (("a", (step.b, step.c)), ("b", (step.c, step.a)),
                                ("c", (step.a, step.b))):
                pair = frozenset((p, q))
                if pair in seg_by_pair:
                    sides[key] = seg_by_pair[pair]
                else:
                    var = fresh()
                    seg_by_pair[pair] = var
                    sides[key] = var
            internal_lengths[idx] = sides

    free = prog.free_points()
    ndg_var = fresh() if len(free) >= 3 else None

    universe: list[str] = [f"v{i}" for i in range(1, counter + 1)]
    posvars = set(seg_by_pair.values())

    # ---- equations ---------------------------------------------------------
    polys: list[TaggedPoly] = []
    sqrt_defs: dict[str, Polynomial] = {}
    length_pairs_done: set[str] = set()

    def V(name: str) -> Polynomial:
        return Polynomial.variable(name, universe)

    def add(poly: Polynomial, role: str, source: Optional[str] = None):
        polys.append(TaggedPoly(poly, role, source if source is not None else render(poly)))

    def add_length(var: str, p: str, q: str):
        if var in length_pairs_done:
            return
        length_pairs_done.add(var)
        (px, py), (qx, qy) = point_vars[p], point_vars[q]
        poly = -(V(var) ** 2) + _dist_square_poly(point_vars[p], point_vars[q], universe)
        src = (f"-{var}^2+{py}^2+{px}^2-2*{py}*{qy}+{qy}^2-2*{px}*{qx}+{qx}^2")
        sqrt_defs[var] = _dist_square_poly(point_vars[p], point_vars[q], universe)
        add(poly, "length", src)

    for idx, step in enumerate(prog.steps):
        if isinstance(step, FreePoint):
            continue
        if isinstance(step, Midpoint):
            (mx, my), (px, py), (qx, qy) = (point_vars[step.name],
                                            point_vars[step.p], point_vars[step.q])
            add(2 * V(mx) - V(px) - V(qx), "construction", f"2*{mx}-{px}-{qx}")
            add(2 * V(my) - V(py) - V(qy), "construction", f"2*{my}-{py}-{qy}")
        elif isinstance(step, LineThrough):
            continue
        elif isinstance(step, IntersectLines):
            l1 = _line_points(prog, step.line1)
            l2 = _line_points(prog, step.line2)
            me = point_vars[step.name]
            for (p, q) in (l1, l2):
                add(_orientation_poly(me, point_vars[p], point_vars[q], universe),
                    "construction")
        elif isinstance(step, PerpFoot):
            u, v = _line_points(prog, step.line)
            me = point_vars[step.name]
            add(_orientation_poly(me, point_vars[u], point_vars[v], universe),
                "construction")
            mx, my = (V(n) for n in me)
            px, py = (V(n) for n in point_vars[step.point])
            ux, uy = (V(n) for n in point_vars[u])
            vx, vy = (V(n) for n in point_vars[v])
            add((mx - px) * (vx - ux) + (my - py) * (vy - uy), "construction")
        elif isinstance(step, Circumcenter):
            me = point_vars[step.name]
            da = _dist_square_poly(me, point_vars[step.a], universe)
            for other in (step.b, step.c):
                add(da - _dist_square_poly(me, point_vars[other], universe),
                    "construction")
        elif isinstance(step, Incenter):
            sides = internal_lengths[idx]
            add_length(sides["a"], step.b, step.c)
            add_length(sides["b"], step.c, step.a)
            add_length(sides["c"], step.a, step.b)
            a, b, c = (V(sides[k]) for k in "abc")
            ix, iy = (V(n) for n in point_vars[step.name])
            ax, ay = (V(n) for n in point_vars[step.a])
            bx, by = (V(n) for n in point_vars[step.b])
            cx, cy = (V(n) for n in point_vars[step.c])
            add((a + b + c) * ix - (a * ax + b * bx + c * cx), "construction")
            add((a + b + c) * iy - (a * ay + b * by + c * cy), "construction")
        elif isinstance(step, RegularChain):
            cvar, svar = chain_rot[idx]
            minpoly_coeffs = EXTERIOR_COS_MINPOLY[step.n]
            mp = Polynomial.zero(universe)
            for e, co in enumerate(minpoly_coeffs):
                mp = mp + Polynomial.constant(co, universe) * V(cvar) ** e
            add(mp, "construction")
            add(V(cvar) ** 2 + V(svar) ** 2 - 1, "construction")
            chain = [step.base_a, step.base_b, *step.new_names]
            for i in range(len(chain) - 2):
                p0, p1, p2 = chain[i], chain[i + 1], chain[i + 2]
                x0, y0 = (V(n) for n in point_vars[p0])
                x1, y1 = (V(n) for n in point_vars[p1])
                x2, y2 = (V(n) for n in point_vars[p2])
                ex, ey = x1 - x0, y1 - y0
                add(x2 - x1 - (V(cvar) * ex - V(svar) * ey), "construction")
                add(y2 - y1 - (V(svar) * ex + V(cvar) * ey), "construction")
        elif isinstance(step, SegmentDecl):
            add_length(seg_vars[step.name], step.p, step.q)
        else:
            raise UnsupportedStepError(str(step))

    signconds: list[tuple[Polynomial, int]] = []
    for con in prog.constraints:
        if isinstance(con, RightAngle):
            px, py = (V(n) for n in point_vars[con.p])
            qx, qy = (V(n) for n in point_vars[con.vertex])
            rx, ry = (V(n) for n in point_vars[con.r])
            add((px - qx) * (rx - qx) + (py - qy) * (ry - qy), "construction")
        elif isinstance(con, EqualLength):
            add(V(seg_vars[con.s]) - V(seg_vars[con.t]), "construction",
                f"{seg_vars[con.s]}-{seg_vars[con.t]}")
        elif isinstance(con, SameHalfPlane):
            signconds.append((_orientation_poly(point_vars[con.p], point_vars[con.a],
                                                point_vars[con.b], universe), 1))

    ndg = None
    if ndg_var is not None:
        a, b, c = free[:3]
        (ax, ay), (bx, by), (cx, cy) = point_vars[a], point_vars[b], point_vars[c]
        k = V(ndg_var)
        det = _orientation_poly(point_vars[a], point_vars[b], point_vars[c], universe)
        poly = k * det - 1
        src = (f"-1-{ndg_var}*{cx}*{by}+{ndg_var}*{cy}*{bx}+{ndg_var}*{cx}*{ay}"
               f"-{ndg_var}*{bx}*{ay}-{ndg_var}*{cy}*{ax}+{ndg_var}*{by}*{ax}")
        add(poly, "ndg", src)
        ndg = (poly, ndg_var)

    varmap: dict[str, tuple[str, ...]] = {}
    for name, pv in point_vars.items():
        varmap[name] = pv
    for name, sv in seg_vars.items():
        varmap[name] = (sv,)

    return Translation(
        universe=universe, polys=polys, varmap=varmap, point_vars=point_vars,
        seg_vars=seg_vars, posvars=posvars, signconds=signconds, ndg=ndg,
        sqrt_defs=sqrt_defs, rot_vars=rot_vars, program=prog)


def _line_points(prog: ConstructionProgram, line_name: str) -> tuple[str, str]:
    for s in prog.steps:
        if isinstance(s, LineThrough) and s.name == line_name:
            return (s.p, s.q)
    raise UndeclaredNameError(f"line {line_name!r} not found")


# ---------------------------------------------------------------------------
# homogeneity, pinning, statement equations
# ---------------------------------------------------------------------------

def check_homogeneity(lhs: GeomExpr, rhs: GeomExpr) -> int:
    dl, dr = expr_degree(lhs), expr_degree(rhs)
    if dl is None or dr is None:
        raise NotHomogeneousError("compared expressions must involve lengths")
    if dl != dr:
        raise DegreeMismatchError(f"degrees differ: {dl} vs {dr}")
    return dl


def pin_coordinates(t: Translation) -> Translation:
    """Place the first two free points at (0,0) and (1,0)."""
    if t.statement_checked_degree() is None:
        raise NotHomogeneousError("statement missing or not homogeneous")
    free = t.program.free_points()
    if len(free) < 2:
        raise NotEnoughFreePointsError("need at least two free points to pin")
    (ax, ay), (bx, by) = t.point_vars[free[0]], t.point_vars[free[1]]
    pin = {ax: Fraction(0), ay: Fraction(0), bx: Fraction(1), by: Fraction(0)}
    pin = {k: v for k, v in pin.items() if k not in t.pinned}
    if not pin:
        return t
    new_polys = []
    for tp in t.polys:
        poly = tp.poly
        for name, value in pin.items():
            poly = poly.substitute(name, Polynomial.constant(value, poly.vars))
        source = tp.source if poly == tp.poly else render(poly)
        new_polys.append(TaggedPoly(poly, tp.role, source, tp.inert))
    new_sqrt = {k: _subst_all(v, pin) for k, v in t.sqrt_defs.items()}
    new_signconds = [(_subst_all(p, pin), s) for p, s in t.signconds]
    new_ndg = (_subst_all(t.ndg[0], pin), t.ndg[1]) if t.ndg else None
    out = Translation(
        universe=list(t.universe), polys=new_polys, varmap=t.varmap,
        point_vars=t.point_vars, seg_vars=t.seg_vars, posvars=set(t.posvars),
        signconds=new_signconds, ndg=new_ndg, sqrt_defs=new_sqrt,
        rot_vars=t.rot_vars, program=t.program,
        pinned={**t.pinned, **pin}, w1_var=t.w1_var, w2_var=t.w2_var,
        denom_var=t.denom_var, protected=set(t.protected))
    return out


def _subst_all(p: Polynomial, pin: dict[str, Fraction]) -> Polynomial:
    for name, value in pin.items():
        p = p.substitute(name, Polynomial.constant(value, p.vars))
    return p


def statement_polys(t: Translation) -> Translation:
    """Append the w1 definition, the ratio equation and the nonvanishing
    equation for the program's compare statement."""
    if t.program.statement is None:
        raise ValueError("program has no compare statement")
    if t.w1_var is not None:
        return t
    lhs, rhs = t.program.statement
    check_homogeneity(lhs, rhs)
    universe = list(t.universe) + ["w1"]
    w2_var = None
    if isinstance(rhs, SegLeaf):
        denom = t.seg_vars[rhs.name]
    else:
        w2_var = "w2"
        universe.append("w2")
        denom = "w2"
    universe += ["m", "n"]

    polys = [TaggedPoly(tp.poly.restrict(universe), tp.role, tp.source, tp.inert)
             for tp in t.polys]
    names = {seg: var for seg, var in t.seg_vars.items()}
    lhs_poly = expr_to_polynomial(lhs, t.seg_vars, universe)
    w1 = Polynomial.variable("w1", universe)
    polys.append(TaggedPoly(-w1 + lhs_poly, "w1def",
                            f"-w1+({expr_render(lhs, names)})^1"))
    if w2_var is not None:
        rhs_poly = expr_to_polynomial(rhs, t.seg_vars, universe)
        w2 = Polynomial.variable("w2", universe)
        polys.append(TaggedPoly(-w2 + rhs_poly, "w2def",
                                f"-w2+({expr_render(rhs, names)})^1"))
    d = Polynomial.variable(denom, universe)
    m = Polynomial.variable("m", universe)
    n = Polynomial.variable("n", universe)
    polys.append(TaggedPoly(d * m - w1, "ratio", f"{denom}*m-(w1)"))
    polys.append(TaggedPoly(d * n - 1, "nonvanishing", f"({denom})*n-1"))

    protected = {"m", "w1"}
    for leaf in expr_leaves(lhs) | expr_leaves(rhs):
        protected.add(t.seg_vars[leaf])

    return Translation(
        universe=universe, polys=polys, varmap=t.varmap, point_vars=t.point_vars,
        seg_vars=t.seg_vars, posvars=set(t.posvars), signconds=t.signconds,
        ndg=t.ndg, sqrt_defs=t.sqrt_defs, rot_vars=t.rot_vars, program=t.program,
        pinned=dict(t.pinned), w1_var="w1", w2_var=w2_var, denom_var=denom,
        protected=protected)


def translate(prog: ConstructionProgram) -> Translation:
    """algebraize -> pin -> statement equations, the standard pipeline order."""
    t = algebraize(prog)
    t = pin_coordinates(t)
    return statement_polys(t)


def giac_listing(prog: ConstructionProgram) -> str:
    """The full unpinned system in wire text, statement equations included."""
    return statement_polys(algebraize(prog)).render_system()
