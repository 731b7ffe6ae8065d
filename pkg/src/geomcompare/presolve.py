"""System shrinking before the expensive steps: resolve sign-determined
univariate roots, eliminate linearly-defined variables, drop unused ones.

The pass alternates the two rules to a fixed point, scanning equations in
listing order and substituting the lowest-numbered eligible variable. Each
action is recorded and rendered as a log-style transcript ("Removing ...,
substituting x by E" / "New set: {...}") for golden-file testing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from .algebraic import isolate_real_roots
from .construction import TaggedPoly, Translation
from .polynomials import Polynomial, render


@dataclass(frozen=True)
class PositiveRootStep:
    var: str
    value: Fraction
    witness: str

@dataclass(frozen=True)
class LinearStep:
    var: str
    replacement: str
    removed: str

@dataclass(frozen=True)
class DroppedVar:
    var: str

Step = Union[PositiveRootStep, LinearStep, DroppedVar]


@dataclass
class PresolveReport:
    input_equations: int
    input_variables: int
    output_equations: int
    output_variables: int
    steps: list[Step] = field(default_factory=list)
    lines: list[str] = field(default_factory=list)

    @property
    def transcript(self) -> str:
        return "\n".join(self.lines)


def _rat(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _render_set(polys: list[TaggedPoly]) -> str:
    return "{" + ",".join(tp.source for tp in polys) + "}"


def _occurring(universe: list[str], polys: list[TaggedPoly]) -> list[str]:
    seen: set[str] = set()
    for tp in polys:
        seen |= tp.poly.support()
    return [v for v in universe if v in seen]


class _Pass:
    """Mutable presolve state: the working equation list, collected
    witnesses, side structures kept in sync with every substitution."""

    def __init__(self, t: Translation):
        self.t = t
        self.working = [TaggedPoly(tp.poly, tp.role, tp.source, tp.inert)
                        for tp in t.working_polys()]
        self.side = [TaggedPoly(tp.poly, tp.role, tp.source, tp.inert)
                     for tp in t.polys if tp.role == "nonvanishing"]
        self.witnesses: list[TaggedPoly] = []
        self.sqrt_defs = dict(t.sqrt_defs)
        self.signconds = list(t.signconds)
        self.ndg = t.ndg
        self.steps: list[Step] = []
        self.lines: list[str] = []

    def substitute(self, var: str, replacement: Polynomial):
        def sub(p: Polynomial) -> Polynomial:
            if var in p.support():
                return p.substitute(var, replacement)
            return p

        for j, tp in enumerate(self.working):
            newp = sub(tp.poly)
            if newp is not tp.poly:
                self.working[j] = TaggedPoly(newp, tp.role, render(newp), tp.inert)
        for j, tp in enumerate(self.side):
            newp = sub(tp.poly)
            if newp is not tp.poly:
                self.side[j] = TaggedPoly(newp, tp.role, render(newp), tp.inert)
        self.sqrt_defs = {k: sub(v) for k, v in self.sqrt_defs.items()}
        self.signconds = [(sub(p), s) for p, s in self.signconds]
        if self.ndg is not None:
            self.ndg = (sub(self.ndg[0]), self.ndg[1])

    # ---- rules ------------------------------------------------------------

    def resolve_positive_roots(self) -> bool:
        did = False
        i = 0
        while i < len(self.working):
            tp = self.working[i]
            sup = tp.poly.support()
            if tp.inert or len(sup) != 1:
                i += 1
                continue
            (var,) = sup
            if var not in self.t.posvars or tp.poly.degree_in(var) < 2:
                i += 1
                continue
            roots = isolate_real_roots(tp.poly.restrict([var]))
            positive = [r for r in roots if r.sign > 0]
            if len(positive) != 1 or not positive[0].is_rational():
                i += 1
                continue
            value = positive[0].rational_value()
            self.lines.append(
                f"Considering positive roots of {tp.source}=0 in variable {var}")
            self.lines.append("{" + ",".join(
                f"{var}={_rat(r.rational_value())}" if r.is_rational()
                else f"{var}~{float(r.approx()):.6g}" for r in roots) + "}")
            self.lines.append(f"Positive root is {_rat(value)}")
            witness_src = f"{_rat(value)}-{var}"
            del self.working[i]
            self.substitute(var, Polynomial.constant(value, (var,)))
            self.witnesses.append(TaggedPoly(
                Polynomial.constant(value, (var,)) - Polynomial.variable(var, (var,)),
                "witness", witness_src, inert=True))
            self.lines.append(f"New set: {_render_set(self.working)}")
            self.lines.append(f"Keeping {witness_src}")
            self.steps.append(PositiveRootStep(var, value, witness_src))
            did = True
            i = 0
        return did

    def eliminate_linear(self) -> bool:
        protected = self.t.protected | set(self.t.pinned)
        order = {v: k for k, v in enumerate(self.t.universe)}
        did = False
        progress = True
        while progress:
            progress = False
            for i, tp in enumerate(self.working):
                if tp.inert:
                    continue
                choice = None
                for var in sorted(tp.poly.support(), key=lambda v: order[v]):
                    if var in protected:
                        continue
                    parts = tp.poly.coefficient_map(var)
                    if max(parts) != 1:
                        continue
                    coeff = parts[1]
                    if not coeff.is_constant() or coeff.is_zero():
                        continue
                    rest = parts.get(0, Polynomial.zero(tp.poly.vars))
                    # replacements above degree 1 square into the length
                    # equations and destroy their quadratic structure
                    if rest.total_degree() > 1:
                        continue
                    choice = (var, coeff.constant_value(), rest)
                    break
                if choice is None:
                    continue
                var, coeff, rest = choice
                replacement = rest * (Fraction(-1) / coeff)
                removed_src = tp.source
                del self.working[i]
                self.substitute(var, replacement)
                self.lines.append(f"Removing {removed_src}, substituting {var} "
                                  f"by {render(replacement)}")
                self.lines.append(f"New set: {_render_set(self.working)}")
                self.steps.append(LinearStep(var, render(replacement), removed_src))
                did = progress = True
                break
        return did


def presolve(t: Translation) -> tuple[Translation, PresolveReport]:
    """Fixed-point alternation of positive-root resolution and linear
    elimination, then unused-variable removal. Solution sets restricted to
    the positive orthant of the length variables are preserved."""
    state = _Pass(t)
    in_eqs = len(state.working)
    in_vars = _occurring(t.universe, state.working)
    state.lines.insert(0, f"Input: {in_eqs} eqs in {len(in_vars)} vars")

    while True:
        a = state.resolve_positive_roots()
        b = state.eliminate_linear()
        if not (a or b):
            break

    final = state.working + state.witnesses
    out_vars = _occurring(t.universe, final)
    for v in in_vars:
        if v not in out_vars:
            state.steps.append(DroppedVar(v))
    state.lines.append(f"Set after presolve: {_render_set(final)}")
    state.lines.append(f"Output: {len(final)} eqs in {len(out_vars)} vars")

    report = PresolveReport(
        input_equations=in_eqs, input_variables=len(in_vars),
        output_equations=len(final), output_variables=len(out_vars),
        steps=state.steps, lines=state.lines)

    out = Translation(
        universe=list(t.universe), polys=final + state.side, varmap=t.varmap,
        point_vars=t.point_vars, seg_vars=t.seg_vars, posvars=set(t.posvars),
        signconds=state.signconds, ndg=state.ndg, sqrt_defs=state.sqrt_defs,
        rot_vars=t.rot_vars, program=t.program, pinned=dict(t.pinned),
        w1_var=t.w1_var, w2_var=t.w2_var, denom_var=t.denom_var,
        protected=set(t.protected))
    return out, report
