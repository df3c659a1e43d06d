"""Syntactic unification of groupoid terms with derivation traces.

The solver works a statement set with four rules: Decompose, Coalesce,
Check and Eliminate.  The strategy is fixed (Decompose eagerly, then
Check before each Eliminate/Coalesce) so traces are reproducible; the
rules themselves decide unifiability regardless of order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from termsep.terms import Mul, Term, Var, occurrences, render_term, var_key


@dataclass(frozen=True)
class Statement:
    lhs: Term
    rhs: Term

    def render(self) -> str:
        return f"{render_term(self.lhs)} = {render_term(self.rhs)}"


@dataclass(frozen=True)
class TraceStep:
    rule: str  # Decompose | Coalesce | Check | Eliminate
    consumed: Statement
    produced: tuple[Statement, ...]

    def to_json(self) -> dict:
        return {
            "rule": self.rule,
            "consumed": self.consumed.render(),
            "produced": [st.render() for st in self.produced],
        }


@dataclass(frozen=True)
class UnifyOutcome:
    substitution: Optional[dict[str, Term]]  # None means not unifiable
    trace: tuple[TraceStep, ...]

    @property
    def unifiable(self) -> bool:
        return self.substitution is not None

    def to_json(self) -> dict:
        if self.substitution is None:
            result = {"result": "not_unifiable", "bindings": None}
        else:
            result = {
                "result": "unifier",
                "bindings": {
                    name: render_term(t) for name, t in sorted(self.substitution.items())
                },
            }
        result["trace"] = [step.to_json() for step in self.trace]
        return result


def occurs_in(name: str, t: Term) -> bool:
    if isinstance(t, Var):
        return t.name == name
    return occurs_in(name, t.left) or occurs_in(name, t.right)


def substitute(t: Term, name: str, replacement: Term) -> Term:
    if isinstance(t, Var):
        return replacement if t.name == name else t
    return Mul(
        substitute(t.left, name, replacement), substitute(t.right, name, replacement)
    )


def apply_subst(subst: dict[str, Term], t: Term) -> Term:
    """Apply bindings simultaneously; bindings are fully normalized."""
    if isinstance(t, Var):
        return subst.get(t.name, t)
    return Mul(apply_subst(subst, t.left), apply_subst(subst, t.right))


def unify(s: Term, t: Term) -> UnifyOutcome:
    worklist: list[Statement] = [Statement(s, t)]
    solved: dict[str, Term] = {}
    trace: list[TraceStep] = []

    def substitute_everywhere(name: str, replacement: Term):
        for i, st in enumerate(worklist):
            worklist[i] = Statement(
                substitute(st.lhs, name, replacement),
                substitute(st.rhs, name, replacement),
            )
        for key in list(solved):
            solved[key] = substitute(solved[key], name, replacement)

    while worklist:
        st = worklist.pop(0)
        lhs, rhs = st.lhs, st.rhs
        if lhs == rhs:
            continue
        if isinstance(lhs, Mul) and isinstance(rhs, Mul):
            produced = (
                Statement(lhs.left, rhs.left),
                Statement(lhs.right, rhs.right),
            )
            trace.append(TraceStep("Decompose", st, produced))
            worklist.extend(produced)
            continue
        # orient so a variable is on the left
        if not isinstance(lhs, Var):
            lhs, rhs = rhs, lhs
            st = Statement(lhs, rhs)
        name = lhs.name
        if isinstance(rhs, Var):
            trace.append(TraceStep("Coalesce", st, ()))
            substitute_everywhere(name, rhs)
            solved[name] = rhs
            continue
        if occurs_in(name, rhs):
            trace.append(TraceStep("Check", st, ()))
            return UnifyOutcome(None, tuple(trace))
        trace.append(TraceStep("Eliminate", st, ()))
        substitute_everywhere(name, rhs)
        solved[name] = rhs
        continue

    # normalize the triangular bindings into fully-applied form
    result = {name: t for name, t in solved.items()}
    changed = True
    while changed:
        changed = False
        for name in result:
            applied = apply_subst(result, result[name])
            if applied != result[name]:
                result[name] = applied
                changed = True
    unified_s = apply_subst(result, s)
    unified_t = apply_subst(result, t)
    if unified_s != unified_t:
        raise AssertionError("unifier failed its own soundness check")
    return UnifyOutcome(result, tuple(trace))


@dataclass(frozen=True)
class AbstractSeparability:
    separable: bool
    # For the inseparable case: terms over the single variable x whose
    # substitution makes s and t identical.
    witness: Optional[dict[str, Term]] = None


def collapse_to_one_variable(t: Term) -> Term:
    if isinstance(t, Var):
        return Var("x")
    return Mul(collapse_to_one_variable(t.left), collapse_to_one_variable(t.right))


def decide_abstract_separability(s: Term, t: Term) -> AbstractSeparability:
    """Separable in some (possibly infinite) groupoid iff not unifiable."""
    outcome = unify(s, t)
    if not outcome.unifiable:
        return AbstractSeparability(True)
    names = sorted(
        {name for _, name in occurrences(s)} | {name for _, name in occurrences(t)},
        key=var_key,
    )
    witness = {}
    for name in names:
        bound = outcome.substitution.get(name, Var(name))
        witness[name] = collapse_to_one_variable(bound)
    return AbstractSeparability(False, witness)
