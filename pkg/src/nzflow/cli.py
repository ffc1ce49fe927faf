"""Command-line surface: build groups and graphs, find/verify flows, run the
family constructions, and sweep parameter campaigns.

Exit codes: 0 success/found/all-pass, 1 not-found/failed, 2 parameter or
capacity errors (with a machine-readable {"error": ...} object on stderr).
"""

from __future__ import annotations

import functools
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import click

from . import jsonio
from .errors import NZFlowError
from .flows import Z3Flow, oracle_nz3, verify
from .graphs import ConnectionMultiset, Multigraph, cayley
from .groups import FiniteGroup, family_i, family_ii, group_from_json_obj, is_prime
from .pseudoforest import flow_from_certificate, search_certificate
from . import constructions as cons


def _fail(exc: NZFlowError):
    sys.stderr.write(jsonio.dumps({"error": {"code": exc.code, "message": str(exc)}}))
    sys.exit(2)


def _guard(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except NZFlowError as exc:
            _fail(exc)
    return wrapper


def _emit(obj, out: str | None):
    text = jsonio.dumps(obj)
    if out:
        Path(out).write_text(text)
    else:
        click.echo(text, nl=False)


@click.group()
def main():
    """Nowhere-zero Z3-flow toolkit."""


# -- group ----------------------------------------------------------------


@main.group()
def group():
    """Construct groups and write them as JSON."""


@group.command("family-i")
@click.option("--p", required=True, type=int)
@click.option("--k", required=True, type=int)
@click.option("--r", required=True, type=int)
@click.option("--out", type=click.Path())
@_guard
def group_family_i(p, k, r, out):
    _emit(family_i(p, k, r).to_json_obj(), out)


@group.command("family-ii")
@click.option("--p", required=True, type=int)
@click.option("--s", required=True, type=int)
@click.option("--out", type=click.Path())
@_guard
def group_family_ii(p, s, out):
    _emit(family_ii(p, s).to_json_obj(), out)


@group.command("table")
@click.option("--file", "file_", required=True, type=click.Path(exists=True))
@click.option("--out", type=click.Path())
@_guard
def group_table(file_, out):
    _emit(group_from_json_obj(jsonio.read(file_)).to_json_obj(), out)


# -- cayley ---------------------------------------------------------------


def parse_connection(group: FiniteGroup, text: str) -> ConnectionMultiset:
    """Parse 'x,a,a^-1,y,y^-1' words over the designated generators
    (tokens x, a, y, ay with an optional ^-1; repetition builds the
    multiset).  Table groups accept element indices instead."""
    from .errors import ParameterError

    entries: dict = {}
    for raw in text.split(","):
        token = raw.strip()
        if not token:
            continue
        invert = token.endswith("^-1")
        base = token[:-3] if invert else token
        if base.isdigit():
            if not hasattr(group, "element"):
                raise ParameterError(f"numeric token {token!r} needs a table group")
            elt = group.element(int(base))
        elif base == "x":
            elt = group.x
        elif base == "a":
            elt = group.a
        elif base == "y":
            elt = group.y
        elif base == "ay":
            elt = group.a * group.y
        else:
            raise ParameterError(f"unknown generator token {token!r}")
        if invert:
            elt = elt.inv()
        entries[elt] = entries.get(elt, 0) + 1
    return ConnectionMultiset(group, entries)


@main.command("cayley")
@click.option("--group", "group_path", required=True, type=click.Path(exists=True))
@click.option("--connection", required=True)
@click.option("--out", type=click.Path())
@click.option("--dot", "dot_path", type=click.Path())
@_guard
def cayley_cmd(group_path, connection, out, dot_path):
    grp = group_from_json_obj(jsonio.read(group_path))
    graph = cayley(grp, parse_connection(grp, connection))
    _emit(graph.to_json_obj(), out)
    if dot_path:
        Path(dot_path).write_text(graph.to_dot())


# -- flow -----------------------------------------------------------------


@main.group()
def flow():
    """Verify or search for Z3-flows on graph JSON files."""


@flow.command("verify")
@click.option("--graph", "graph_path", required=True, type=click.Path(exists=True))
@click.option("--flow", "flow_path", required=True, type=click.Path(exists=True))
@_guard
def flow_verify(graph_path, flow_path):
    graph = Multigraph.from_json_obj(jsonio.read(graph_path))
    zf = Z3Flow.from_json_obj(jsonio.read(flow_path))
    result = verify(graph, zf)
    click.echo(jsonio.dumps({
        "valid": result.valid,
        "nowhere_zero": result.nowhere_zero,
        "violations": [str(v) for v in result.violations],
    }), nl=False)
    sys.exit(0 if result.valid and result.nowhere_zero else 1)


@flow.command("find")
@click.option("--graph", "graph_path", required=True, type=click.Path(exists=True))
@click.option("--method", type=click.Choice(["oracle", "certificate"]),
              default="oracle")
@click.option("--out", type=click.Path())
@_guard
def flow_find(graph_path, method, out):
    graph = Multigraph.from_json_obj(jsonio.read(graph_path))
    if method == "oracle":
        zf = oracle_nz3(graph)
    else:
        cert = search_certificate(graph)
        zf = None if cert is None else flow_from_certificate(graph, cert)
    if zf is None:
        click.echo("NONE")
        sys.exit(1)
    _emit(zf.to_json_obj(), out)
    sys.exit(0)


# -- construct ------------------------------------------------------------


def _spec_from_options(family: str, p, k, r, s) -> cons.GammaSpec:
    from .errors import ParameterError

    if family in ("gamma1", "gamma2"):
        if p is None or k is None or r is None:
            raise ParameterError(f"{family} requires --p, --k and --r")
        return cons.GammaSpec(family, p=p, k=k, r=r)
    if family in ("gamma3", "gamma4"):
        if p is None or s is None:
            raise ParameterError(f"{family} requires --p and --s")
        return cons.GammaSpec(family, p=p, s=s)
    raise ParameterError(f"unknown family {family!r}")


def construct_case(family: str, p=None, k=None, r=None, s=None) -> dict:
    """Build one construction case; returns {graph, flow, certificate?,
    report} JSON objects."""
    checks = []

    def check(name, value):
        checks.append({"name": name, "pass": bool(value)})
        return value

    if family == "a4":
        graph = cons.a4_counterexample()
        check("vertices=12", graph.num_vertices() == 12)
        check("edges=30", graph.num_edges() == 30)
        check("5-valent", graph.is_regular(5))
        simple = cons.a4_simple_subgraph()
        check("simple subgraph 3-valent", simple.is_regular(3))
        check("simple subgraph non-bipartite", not simple.is_bipartite())
        report = {"construction": "a4", "params": {}, "checks": checks}
        return {"graph": graph.to_json_obj(), "report": report}

    spec = _spec_from_options(family, p, k, r, s)
    graph = cons.build_gamma(spec)
    cert_obj = None
    if family == "gamma1":
        zf = cons.gamma1_flow(spec.p, spec.k, spec.r)
    else:
        if family == "gamma2":
            cert = cons.gamma2_certificate(spec.p, spec.k, spec.r)
        elif family == "gamma3":
            pair = cons.gamma3_sigma(spec.p, spec.s)
            cert = cons.lift_sigma_certificate(pair.graph, pair)
        else:
            cert = (cons.gamma4_direct(spec.p)
                    if spec.s % spec.p == spec.p - 1
                    else cons.sigma_certificate(spec))
        cert_obj = cert.to_json_obj()
        zf = flow_from_certificate(graph, cert)
    result = verify(graph, zf)
    check("flow valid", result.valid)
    check("flow nowhere-zero", result.nowhere_zero)
    report = {"construction": family, "params": spec.params(), "checks": checks}
    out = {"graph": graph.to_json_obj(), "flow": zf.to_json_obj(), "report": report}
    if cert_obj is not None:
        out["certificate"] = cert_obj
    if family == "gamma1":
        _, plan = cons.gamma1_plan(spec.p, spec.k, spec.r)
        out["plan"] = plan_to_json(plan)
    return out


def plan_to_json(plan) -> dict:
    return {
        "t": plan.t,
        "components": [
            {
                "vertices": {f"{pos},{side}": v.name
                             for (pos, side), v in sorted(comp.vert_at.items())},
                "rungs": [comp.rung_id_at[pos] for pos in range(comp.t)],
                "rails": {f"{pos},{side}": comp.rail_id_at[(pos, side)]
                          for pos in range(comp.t) for side in (0, 1)},
            }
            for comp in plan.components
        ],
        "lambda_edges": sorted(plan.lam.edges),
        "lambda_flow": plan.lam_flow.to_json_obj(),
    }


@main.command("construct")
@click.argument("family",
                type=click.Choice(["gamma1", "gamma2", "gamma3", "gamma4", "a4"]))
@click.option("--p", type=int)
@click.option("--k", type=int)
@click.option("--r", type=int)
@click.option("--s", type=int)
@click.option("--out-dir", required=True, type=click.Path())
@_guard
def construct(family, p, k, r, s, out_dir):
    artifacts = construct_case(family, p=p, k=k, r=r, s=s)
    outdir = Path(out_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    for name, obj in artifacts.items():
        jsonio.write(outdir / f"{name}.json", obj)
    ok = all(c["pass"] for c in artifacts["report"]["checks"])
    click.echo(jsonio.dumps(artifacts["report"]), nl=False)
    sys.exit(0 if ok else 1)


# -- campaign ---------------------------------------------------------------


def _campaign_cases(families: list[str], p_max: int, k_set: list[int]) -> list[dict]:
    cases = []
    primes = [p for p in range(5, p_max + 1) if is_prime(p)]
    for family in families:
        for p in primes:
            if family in ("gamma1", "gamma2"):
                for k in k_set:
                    if k % 2 == 0 or k % p == 0:
                        continue
                    for r in range(1, p):
                        if pow(r, 3 * k, p) == 1:
                            cases.append({"family": family, "p": p, "k": k, "r": r})
            else:
                for s in range(1, p):
                    cases.append({"family": family, "p": p, "s": s})
    cases.sort(key=lambda c: (c["family"], c["p"], c.get("k", 0),
                              c.get("r", 0), c.get("s", 0)))
    return cases


def _case_key(case: dict) -> tuple:
    return (case["family"], case["p"], case.get("k", 0),
            case.get("r", 0), case.get("s", 0))


def run_campaign_case(case: dict, spot_check: bool = False) -> dict:
    row = dict(case)
    started = time.monotonic()
    try:
        artifacts = construct_case(case["family"], p=case["p"], k=case.get("k"),
                                   r=case.get("r"), s=case.get("s"))
        checks = artifacts["report"]["checks"]
        row["construction"] = "ok"
        row["verification"] = "pass" if all(c["pass"] for c in checks) else "fail"
        if spot_check:
            row["spot_check"] = "pass" if _spot_check(case, artifacts) else "fail"
    except NZFlowError as exc:
        row["construction"] = f"error[{exc.code}]: {exc}"
        row["verification"] = "skipped"
    row["wall_ms"] = int((time.monotonic() - started) * 1000)
    return row


def _spot_check(case: dict, artifacts: dict) -> bool:
    """Independent re-derivation: certificate existence is confirmed by the
    generic component-matching completion over the constructed partition;
    gamma1 instead re-checks one spanning ladder against the oracle."""
    from .pseudoforest import certificate_for_partition

    family = case["family"]
    if family == "a4":
        return oracle_nz3(cons.a4_counterexample()) is None
    spec = _spec_from_options(family, case["p"], case.get("k"),
                              case.get("r"), case.get("s"))
    graph = cons.build_gamma(spec)
    if family == "gamma1":
        _, plan = cons.gamma1_plan(spec.p, spec.k, spec.r)
        comp = plan.components[0]
        sub = graph.subgraph_with_edges(comp.edge_ids(), spanning=False)
        # an odd circular ladder admits no nowhere-zero Z3-flow
        return oracle_nz3(sub) is None
    cert_obj = artifacts["certificate"]
    names = {v.name: v for v in graph.vertices}
    U = [names[u] for u in cert_obj["U"]]
    W = [names[w] for w in cert_obj["W"]]
    return certificate_for_partition(graph, U, W) is not None


@main.command("campaign")
@click.option("--families", default="gamma1,gamma2,gamma3,gamma4")
@click.option("--p-max", default=13, type=int)
@click.option("--k-set", default="1,5")
@click.option("--oracle-spot-check", "spot", default=0, type=int)
@click.option("--deterministic", is_flag=True)
@click.option("--jobs", default=1, type=int)
@click.option("--out", type=click.Path())
@_guard
def campaign(families, p_max, k_set, spot, deterministic, jobs, out):
    family_list = [f.strip() for f in families.split(",") if f.strip()]
    k_list = [int(v) for v in k_set.split(",") if v.strip()]
    cases = _campaign_cases(family_list, p_max, k_list)
    flagged = [dict(c, _spot=(i < spot)) for i, c in enumerate(cases)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_run_case_tuple,
                                 [(c, c.pop("_spot")) for c in flagged]))
    else:
        rows = [run_campaign_case(c, c.pop("_spot")) for c in flagged]
    rows.sort(key=_case_key)
    if deterministic:
        for row in rows:
            row["wall_ms"] = None
    passed = sum(1 for row in rows if row["verification"] == "pass"
                 and row.get("spot_check", "pass") == "pass")
    report = {
        "cases": rows,
        "aggregate": {"total": len(rows), "passed": passed,
                      "failed": len(rows) - passed},
    }
    _emit(report, out)
    sys.exit(0 if passed == len(rows) else 1)


def _run_case_tuple(args):
    case, spot = args
    return run_campaign_case(case, spot)


if __name__ == "__main__":
    main()
