"""Command-line front end.

Exit codes: 0 analysis completed (Unknown included), 1 internal failure or a
witness that does not verify, 2 parse error, 3 precondition violated.
"""
from __future__ import annotations

import json
import os
import sys
import time

import click

from . import __version__
from .autom import AutomError, PolyMap, maps_ideal_onto, verify_witness
from .poly import ParseError, PolyError, parse

SCHEMA = 1


class Precondition(Exception):
    pass


def read_input(text):
    """A file path or an expression; returns p."""
    if os.path.isfile(text):
        with open(text) as fh:
            text = fh.read().strip()
    return parse(text)


def split_fg(p):
    if p.degree("u") > 1:
        raise Precondition("p must be linear in u")
    f, g = p.coeff("u", 1), p.coeff("u", 0)
    if "u" in g.vars or "v" in p.vars:
        raise Precondition("p must have the form f(x, y) u + g(x, y, z)")
    if not set(f.vars) <= {"x", "y"}:
        raise Precondition("f must lie in Q[x, y]")
    return f, g


def dump(obj):
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=True)


def _report(kind, p, ctx, body):
    out = {"schema": SCHEMA, "command": kind, "input": str(p), "version": __version__,
           "bounds": {"degree_bound": ctx["degree_bound"], "nilpotency_bound": ctx["nilpotency_bound"],
                      "seed": ctx["seed"]}}
    out.update(body)
    if ctx.get("timings"):
        out["timings"] = ctx["timings"]
    return out


def _run(fn):
    """Map exceptions onto exit codes."""
    try:
        return fn()
    except ParseError as exc:
        click.echo(f"parse error: {exc}", err=True)
        return 2
    except (Precondition, PolyError) as exc:
        click.echo(f"precondition violated: {exc}", err=True)
        return 3
    except Exception as exc:  # invariant failures
        click.echo(f"internal error: {type(exc).__name__}: {exc}", err=True)
        return 1


def common(fn):
    fn = click.option("--json", "as_json", is_flag=True, help="emit JSON")(fn)
    fn = click.option("--degree-bound", default=12, show_default=True, type=int)(fn)
    fn = click.option("--nilpotency-bound", default=32, show_default=True, type=int)(fn)
    fn = click.option("--seed", default=0, show_default=True, type=int)(fn)
    fn = click.option("--witness-out", type=click.Path(dir_okay=False), default=None)(fn)
    fn = click.option("--timings", is_flag=True, help="add wall-clock timings (breaks byte determinism)")(fn)
    return fn


def _ctx(degree_bound, nilpotency_bound, seed, timings):
    return {"degree_bound": degree_bound, "nilpotency_bound": nilpotency_bound, "seed": seed,
            "timings": {} if timings else None}


@click.group()
@click.version_option(__version__)
def main():
    """Classify and rectify hypersurfaces f(x,y) u + g(x,y,z) = 0 in C^4."""


# ---------------------------------------------------------------- classify

def classify_report(p, ctx):
    from .classify import classify, residual_x_variable
    f, g = split_fg(p)
    if not f:
        raise Precondition("f must be nonzero")
    t0 = time.perf_counter()
    v = classify(f, g, degree_bound=ctx["degree_bound"])
    t1 = time.perf_counter()
    r = residual_x_variable(f, g, degree_bound=ctx["degree_bound"])
    t2 = time.perf_counter()
    if ctx["timings"] is not None:
        ctx["timings"].update({"classify": round(t1 - t0, 3), "residual": round(t2 - t1, 3)})
    body = {"verdict": v.to_json(), "residual": r.to_json()}
    if v.certificate is not None:
        body["certificate"] = v.certificate.to_json()
    return _report("classify", p, ctx, body), v, r


@main.command("classify")
@click.argument("source")
@common
def classify_cmd(source, as_json, degree_bound, nilpotency_bound, seed, witness_out, timings):
    """Verdict for X = {p = 0}."""
    def go():
        p = read_input(source)
        rep, v, r = classify_report(p, _ctx(degree_bound, nilpotency_bound, seed, timings))
        if as_json:
            click.echo(dump(rep))
        else:
            line = f"verdict: {v.outcome.value}"
            if v.detail:
                line += f" ({v.detail})"
            click.echo(line)
            if v.certificate is not None:
                click.echo(f"certificate: {v.certificate.kind} {json.dumps(v.certificate.params, sort_keys=True)}")
            click.echo(f"residual x-variable: {r.outcome.value}" + (f" ({r.reason})" if r.reason else ""))
        return 0
    sys.exit(_run(go))


# ---------------------------------------------------------------- rectify

def rectify_report(p, ctx):
    from .rectify import rectify
    f, g = split_fg(p)
    t0 = time.perf_counter()
    res = rectify(f, g)
    if ctx["timings"] is not None:
        ctx["timings"]["rectify"] = round(time.perf_counter() - t0, 3)
    return _report("rectify", p, ctx, {"result": res.to_json()}), res


@main.command("rectify")
@click.argument("source")
@common
def rectify_cmd(source, as_json, degree_bound, nilpotency_bound, seed, witness_out, timings):
    """Rectifying automorphism for p (x-variable or 1-stable)."""
    def go():
        p = read_input(source)
        rep, res = rectify_report(p, _ctx(degree_bound, nilpotency_bound, seed, timings))
        if witness_out and res.witness is not None:
            with open(witness_out, "w") as fh:
                fh.write(dump(witness_file(res)) + "\n")
        if as_json:
            click.echo(dump(rep))
        else:
            click.echo(f"result: {res.kind.value}")
            if res.p_n is not None:
                click.echo(f"p_n: {res.p_n}")
            if res.reason:
                click.echo(f"reason: {res.reason}")
            if witness_out and res.witness is not None:
                click.echo(f"witness written to {witness_out}")
        return 0
    sys.exit(_run(go))


def witness_file(res):
    out = {"schema": SCHEMA, "kind": res.kind.value, "target": str(res.target),
           "coordinate": res.coordinate, "witness": res.witness.to_json()}
    if res.p_n is not None:
        out["p_n"] = str(res.p_n)
        out["p_n_witness"] = res.p_n_witness.to_json()
    return out


# ---------------------------------------------------------------- certify

def certify_report(p, ctx):
    from .lnd import bounded_lnd_check, jacobian_derivation
    from .lnd import exoticity_certificate
    f, g = split_fg(p)
    if not f:
        raise Precondition("f must be nonzero")
    cert = exoticity_certificate(f, g)
    body = {"certificate": cert.to_json()}
    try:
        d = jacobian_derivation([parse("x"), p, parse("z")], vars=("x", "y", "z", "u"), seed=ctx["seed"])
        body["lnd_check"] = {"derivation": d.to_json(),
                             "check": bounded_lnd_check(d, ctx["nilpotency_bound"]).to_json()}
    except PolyError as exc:
        body["lnd_check"] = {"skipped": str(exc)}
    return _report("certify", p, ctx, body), cert


@main.command("certify")
@click.argument("source")
@common
def certify_cmd(source, as_json, degree_bound, nilpotency_bound, seed, witness_out, timings):
    """Exoticity certificate (normal forms forme / pres3)."""
    def go():
        p = read_input(source)
        rep, cert = certify_report(p, _ctx(degree_bound, nilpotency_bound, seed, timings))
        if as_json:
            click.echo(dump(rep))
        elif hasattr(cert, "kind"):
            click.echo(f"certificate: {cert.kind} {json.dumps(cert.params, sort_keys=True)}")
        else:
            click.echo(f"not applicable: {cert.reason}")
        return 0
    sys.exit(_run(go))


# ---------------------------------------------------------------- verify

def verify_file(data, p):
    """(ok, message) for a witness file or a bare map against p."""
    if "factors" in data:
        W = PolyMap.from_json(data)
        return verify_witness(W, p, "y"), "alpha(y) = p and alpha o alpha^-1 = id"
    W = PolyMap.from_json(data["witness"])
    if parse(data["target"]) != p:
        return False, "witness target differs from p"
    if data["kind"] == "OneStable":
        p_n = parse(data["p_n"])
        Wn = PolyMap.from_json(data["p_n_witness"])
        ok = W.check_inverse() and maps_ideal_onto(W, p, p_n) and verify_witness(Wn, p_n, "y")
        return ok, "gamma maps (p, v) onto (p_n, v) and p_n is an x-variable"
    return verify_witness(W, p, data.get("coordinate", "y")), "alpha(coordinate) = p and alpha o alpha^-1 = id"


@main.command("verify")
@click.argument("witness", type=click.Path(exists=True, dir_okay=False))
@click.argument("source")
@common
def verify_cmd(witness, source, as_json, degree_bound, nilpotency_bound, seed, witness_out, timings):
    """Check a witness file against p."""
    def go():
        p = read_input(source)
        with open(witness) as fh:
            data = json.load(fh)
        try:
            ok, what = verify_file(data, p)
        except (AutomError, KeyError) as exc:
            ok, what = False, f"malformed witness: {exc}"
        ctx = _ctx(degree_bound, nilpotency_bound, seed, timings)
        if as_json:
            click.echo(dump(_report("verify", p, ctx, {"ok": ok, "checked": what})))
        else:
            click.echo("OK" if ok else "FAIL")
        return 0 if ok else 1
    sys.exit(_run(go))


# ---------------------------------------------------------------- corpus

CORPUS = [
    ("russell", "classify", "x^2*u + x + y^2 + z^3", "ExoticC3"),
    ("koras-russell", "classify", "(x^2 + y^3)*u + x + z^2", "ExoticC3"),
    ("xy", "classify", "x*y*u + y + x*z", "IsomorphicC3"),
    ("p2", "classify", "x*y^2*u + y + x^2*z + x*y*z^2", "IsomorphicC3"),
    ("p2-residual", "residual", "x*y^2*u + y + x^2*z + x*y*z^2", "Yes"),
    ("russell-residual", "residual", "x^2*u + x + y^2 + z^3", "No"),
    ("p1", "rectify", "x*y^2*u + y + x*z + x*y*z^2", "XVariable"),
    ("p2", "rectify", "x*y^2*u + y + x^2*z + x*y*z^2", "OneStable"),
    ("p3", "rectify", "y + x*(x*z + y*(y*u + x^2*z^2))", "XVariable"),
    ("russell", "certify", "x^2*u + x + y^2 + z^3", "Pres3"),
    ("koras-russell", "certify", "(x^2 + y^3)*u + x + z^2", "Forme"),
    ("two-points", "classify", "x*u + y^2 - 1", "NotAcyclic"),
    ("singular", "classify", "x*u + y^2 + z^2", "Singular"),
    ("reducible", "classify", "x*u + x*z", "Reducible"),
]


def corpus_entry(kind, expr, degree_bound=12):
    from .classify import classify, residual_x_variable
    from .lnd import exoticity_certificate
    from .rectify import rectify
    p = parse(expr)
    f, g = split_fg(p)
    if kind == "classify":
        return classify(f, g, degree_bound=degree_bound).outcome.value
    if kind == "residual":
        return residual_x_variable(f, g, degree_bound=degree_bound).outcome.value
    if kind == "rectify":
        res = rectify(f, g)
        if res.witness is not None and res.kind.value == "XVariable":
            assert verify_witness(res.witness, p, "y")
        return res.kind.value
    cert = exoticity_certificate(f, g)
    return getattr(cert, "kind", "NotApplicable")


@main.command("corpus")
@common
def corpus_cmd(as_json, degree_bound, nilpotency_bound, seed, witness_out, timings):
    """Run the built-in examples and print a pass/fail table."""
    def go():
        rows = []
        for name, kind, expr, want in CORPUS:
            try:
                got = corpus_entry(kind, expr, degree_bound)
            except Exception as exc:
                got = f"error: {type(exc).__name__}"
            rows.append({"name": name, "command": kind, "input": str(parse(expr)), "expected": want,
                         "got": got, "pass": got == want})
        ok = all(r["pass"] for r in rows)
        if as_json:
            click.echo(dump({"schema": SCHEMA, "version": __version__, "entries": rows, "all_pass": ok}))
        else:
            w = max(len(r["name"]) for r in rows)
            for r in rows:
                mark = "pass" if r["pass"] else "FAIL"
                click.echo(f"{mark}  {r['name']:<{w}}  {r['command']:<9} {r['expected']:<13} {r['got']}")
        return 0 if ok else 1
    sys.exit(_run(go))


if __name__ == "__main__":
    main()
