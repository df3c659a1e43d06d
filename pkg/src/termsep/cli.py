"""Command-line surface: terms, unify, separate, antiassoc, census, demo.

Output defaults to JSON for scripting; --format text prints human tables.
Errors exit nonzero with a machine-readable {"error": ...} object.
"""

from __future__ import annotations

import json
import sys

import click
import numpy as np

from termsep.census import census as run_census
from termsep.census import stderr_progress
from termsep import synth, verify
from termsep.cayley import (
    BudgetExceededError,
    deranged_groupoid,
    is_k_antiassociative,
    product_groupoid,
    separates_exhaustive,
)
from termsep.terms import (
    ParseError,
    catalan,
    enumerate_ordered_terms,
    parse_term,
    render_term,
)
from termsep.unify import unify
from termsep.vecops import affine_groupoid, term_affine_form, to_cayley


def _emit(obj, fmt: str, text_lines=None):
    if fmt == "json":
        click.echo(json.dumps(obj, indent=2, sort_keys=True))
    else:
        for line in text_lines if text_lines is not None else [json.dumps(obj)]:
            click.echo(line)


def _fail(message: str, code: int = 1):
    click.echo(json.dumps({"error": message}), err=True)
    sys.exit(code)


@click.group()
def main():
    """Decide and certify separation of groupoid terms."""


@main.command("terms")
@click.argument("action", type=click.Choice(["enumerate", "count"]))
@click.option("-k", type=int, required=True, help="number of variables")
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="json")
def cmd_terms(action, k, fmt):
    """Enumerate or count the ordered terms on x1..xk."""
    if k < 1:
        _fail("k must be at least 1", 2)
    if action == "count":
        _emit({"k": k, "count": catalan(k - 1)}, fmt, [str(catalan(k - 1))])
        return
    try:
        terms = enumerate_ordered_terms(k)
    except ValueError as exc:
        _fail(str(exc), 2)
    rendered = [render_term(t) for t in terms]
    _emit({"k": k, "count": len(terms), "terms": rendered}, fmt, rendered)


@main.command("unify")
@click.argument("s_text")
@click.argument("t_text")
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="json")
def cmd_unify(s_text, t_text, fmt):
    """Unify two terms, reporting bindings and the rule trace."""
    try:
        s, t = parse_term(s_text), parse_term(t_text)
    except ParseError as exc:
        _fail(str(exc), 2)
    outcome = unify(s, t)
    obj = outcome.to_json()
    lines = [obj["result"]]
    if outcome.unifiable:
        lines += [f"  {k} = {v}" for k, v in (obj["bindings"] or {}).items()]
    lines += [f"  [{st['rule']}] {st['consumed']}" for st in obj["trace"]]
    _emit(obj, fmt, lines)


@main.command("separate")
@click.argument("s_text")
@click.argument("t_text")
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="json")
@click.option("--budget-candidates", type=int, default=synth.DEFAULT_SEARCH_BUDGET)
@click.option("--emit-table", is_flag=True, help="include the Cayley CSV")
@click.option("--emit-affine", is_flag=True, help="include the difference forms")
def cmd_separate(s_text, t_text, fmt, budget_candidates, emit_table, emit_affine):
    """Decide finite separability and emit any certificate found."""
    try:
        s, t = parse_term(s_text), parse_term(t_text)
    except ParseError as exc:
        _fail(str(exc), 2)
    result = synth.decide_finite_separability(s, t, search_budget=budget_candidates)
    obj = result.to_json()
    if result.certificate is not None:
        G = result.certificate.groupoid
        if emit_table:
            if G.width <= 16:
                obj["cayley_csv"] = to_cayley(G).to_csv()
            else:
                obj["cayley_csv"] = None
        if emit_affine:
            decision = verify.affine_separation_decision(G, s, t)
            obj["affine_separated"] = decision.separated
    lines = [obj["verdict"]]
    if result.construction:
        lines.append(f"construction: {result.construction}")
    _emit(obj, fmt, lines)


@main.command("antiassoc")
@click.argument("action", type=click.Choice(["build", "verify"]))
@click.option("-k", type=int, required=True)
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="json")
@click.option("--budget-evals", type=int, default=2**26)
def cmd_antiassoc(action, k, fmt, budget_evals):
    """Build a k-antiassociative groupoid, or build and re-verify it."""
    if k < 3:
        _fail("k must be at least 3", 2)
    try:
        groupoid, certs = synth.build_k_antiassociative(k)
    except ValueError as exc:
        _fail(str(exc), 2)
    entries = []
    all_ok = True
    for (s, t), cert in certs:
        entry = {
            "s": render_term(s),
            "t": render_term(t),
            "certificate": cert.to_json(),
        }
        if action == "verify":
            affine_ok = verify.check_parity_functional(cert.groupoid, s, t, cert.lam)
            entry["affine_ok"] = affine_ok
            feasible = cert.groupoid.order**k <= budget_evals
            if feasible:
                brute = separates_exhaustive(
                    to_cayley(cert.groupoid), s, t, budget=budget_evals
                )
                entry["exhaustive_ok"] = brute.separated
                affine_ok = affine_ok and brute.separated
            all_ok = all_ok and affine_ok
        entries.append(entry)
    obj = {
        "k": k,
        "factors": len(certs),
        "groupoid": groupoid.to_json(),
        "certificates": entries,
    }
    if action == "verify":
        obj["all_ok"] = all_ok
    lines = [f"k={k}: {len(certs)} factors, width {groupoid.width}"]
    if action == "verify":
        lines.append("all certificates pass" if all_ok else "FAILURES present")
    _emit(obj, fmt, lines)


@main.command("census")
@click.option("-n", type=int, required=True)
@click.option("--long", "long_run", is_flag=True, help="allow the n=4 run")
@click.option("--workers", type=int, default=1)
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="json")
def cmd_census(n, long_run, workers, fmt):
    """Count the 3-antiassociative n-element Cayley tables."""
    try:
        report = run_census(
            n,
            workers=workers,
            long_run=long_run,
            progress=stderr_progress if sys.stderr.isatty() else None,
        )
    except ValueError as exc:
        _fail(str(exc), 2)
    obj = report.to_json()
    _emit(
        obj,
        fmt,
        [
            f"n={n}: {report.antiassociative_count} antiassociative of "
            f"{report.total_tables} tables "
            f"({report.literally_deranged_count} literally deranged)"
        ],
    )


def _demo_affine_example():
    # 2x3 bit matrices flattened row-major to length-6 vectors; the left
    # map shifts columns rightward with copy, the right map copies the top
    # row down, and the constant has a single 1 in the top-left cell.
    alpha = np.zeros((6, 6), dtype=np.uint8)
    for dst, src in [(0, 0), (1, 0), (2, 1), (3, 3), (4, 3), (5, 4)]:
        alpha[dst, src] = 1
    beta = np.zeros((6, 6), dtype=np.uint8)
    for dst, src in [(0, 0), (1, 1), (2, 2), (3, 0), (4, 1), (5, 2)]:
        beta[dst, src] = 1
    c = np.array([1, 0, 0, 0, 0, 0], dtype=np.uint8)
    G = affine_groupoid(alpha, beta, c)
    s = parse_term("((v*w)*(x*y))*z")
    t = parse_term("((v*(w*x))*y)*z")
    def grid(vec):
        return [[int(b) for b in vec[:3]], [int(b) for b in vec[3:]]]
    ab_c = (alpha @ (beta @ c)) % 2
    aab_c = (alpha @ ab_c) % 2
    s0 = term_affine_form(G, s).const
    t0 = term_affine_form(G, t).const
    decision = verify.affine_separation_decision(G, s, t)
    return {
        "alpha_beta_c": grid(ab_c),
        "alpha2_beta_c": grid(aab_c),
        "s_at_zero": grid(s0),
        "t_at_zero": grid(t0),
        "expected": {
            "alpha_beta_c": [[1, 1, 0], [1, 1, 0]],
            "alpha2_beta_c": [[1, 1, 1], [1, 1, 1]],
            "s_at_zero": [[0, 1, 1], [1, 1, 0]],
            "t_at_zero": [[0, 1, 0], [1, 1, 1]],
        },
        "separated": decision.separated,
    }


def _demo_deranged_product():
    left = deranged_groupoid(2, [1, 0], "LEFT")
    right = deranged_groupoid(3, [1, 2, 0], "RIGHT")
    product = product_groupoid(left, right)
    report = is_k_antiassociative(product, 4)
    terms = enumerate_ordered_terms(4)
    import itertools as it
    pair_results = {
        f"{render_term(a)} | {render_term(b)}": separates_exhaustive(
            product, a, b
        ).separated
        for a, b in it.combinations(terms, 2)
    }
    return {"four_antiassociative": report.antiassociative, "pairs": pair_results}


def _demo_cycle_example():
    s = parse_term("(y0*y1)*(z0*(z1*y0))")
    t = parse_term("((z2*y1)*y2)*(z3*y2)")
    witness = synth.find_cycle(s, t)
    cert = synth.synth_cycle(witness)
    f = witness.class_map()
    return {
        "cycle": {
            "variables": list(witness.variables),
            "p": list(witness.p),
            "q": list(witness.q),
            "f": {str(i): f[i] for i in range(witness.k)},
        },
        "opsum": cert.opsum.render(),
        "separated": verify.affine_separation_decision(cert.groupoid, s, t).separated,
    }


@main.command("demo")
@click.argument(
    "name", type=click.Choice(["affine-example", "deranged-product", "cycle-example"])
)
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="json")
def cmd_demo(name, fmt):
    """Reproduce a worked computation and print expected vs. actual."""
    runner = {
        "affine-example": _demo_affine_example,
        "deranged-product": _demo_deranged_product,
        "cycle-example": _demo_cycle_example,
    }[name]
    obj = runner()
    _emit(obj, fmt)


if __name__ == "__main__":
    main()
