"""Command-line front end.

Subcommands: analyze, curve, certify, walks, extend. Exit codes: 0 success,
2 usage/validation, 3 numerical failure, 4 not-applicable regime. Output is
deterministic: fixed sign conventions upstream and 17-significant-digit
float formatting here.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from . import certify as cert
from . import dynamics as dyn
from . import walks
from .errors import (
    DivergenceError,
    EdgeListParseError,
    GraphValidationError,
    InconclusiveError,
    LoopwalkError,
    NotApplicableError,
    NumericalError,
    UsageError,
    WorkCapExceededError,
)
from .graph import max_degree, parse_edge_list, vertex_pair
from .spectral import eigendecompose_symmetric, gershgorin_split
from .walks import INFINITY

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3
EXIT_NOT_APPLICABLE = 4


def _fmt(x):
    """Round-trip floats through 17 significant digits for stable output."""
    if isinstance(x, float):
        if math.isinf(x):
            return "infinity"
        return float(f"{x:.17g}")
    return x


def _emit(text: str, output) -> None:
    if output in (None, "-"):
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(output, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")


def _load(args):
    with open(args.graph) as fh:
        g = parse_edge_list(fh.read())
    pair = vertex_pair(g, args.u, args.v)
    return g, pair


def _json(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True)


def cmd_analyze(args) -> int:
    g, pair = _load(args)
    m = max_degree(g)
    cres = walks.cospectrality(g, pair)
    cls = walks.classify_tunneling(cres.c, pair.d)
    h = dyn.build_hamiltonian(g, pair, args.Q)
    spec = eigendecompose_symmetric(h.matrix)
    split = gershgorin_split(spec, args.Q, m)
    t_max = dyn.default_t_max(args.Q, m, pair.d)
    report = dyn.fidelity_search(spec, pair, t_max)
    gap, t0, p_t0 = report.gap, report.t0, report.p_t0
    if dyn.needs_high_precision(spec):
        gap, t0, p_t0 = dyn.readout_mp(h)
    payload = {
        "schema": 1,
        "m": m,
        "d": pair.d,
        "cospectrality": "infinity" if cres.is_infinite else int(cres.c),
        "tunneling_class": cls.value,
        "Q": _fmt(float(args.Q)),
        "gap": _fmt(gap),
        "t0": _fmt(t0),
        "p_t0": _fmt(p_t0),
        "t_star": _fmt(report.t_star),
        "p_star": _fmt(max(report.p_star, p_t0)),
        "grid_resolution": _fmt(report.grid_resolution),
        "gershgorin": {
            "applicable": split.applicable,
            "n_top": split.n_top,
            "n_bulk": split.n_bulk,
            "margin": _fmt(split.margin),
            "reason": split.reason,
        },
    }
    _emit(_json(payload), args.output)
    return EXIT_OK


def cmd_certify(args) -> int:
    g, pair = _load(args)
    if not 0 < args.epsilon < 1:
        raise UsageError(f"--epsilon must lie in (0, 1), got {args.epsilon}")
    try:
        report = cert.certify_instance(g, pair, args.epsilon, delta=args.delta)
    except NotApplicableError as exc:
        cres = walks.cospectrality(g, pair)
        cls = walks.classify_tunneling(cres.c, pair.d)
        _emit(_json({"schema": 1, "tunneling_class": cls.value, "error": str(exc)}),
              args.output)
        return EXIT_NOT_APPLICABLE
    payload = report.to_dict()
    payload["checks"] = [
        {k: _fmt(v) for k, v in chk.items()} for chk in payload["checks"]
    ]
    payload["fingerprint"] = {k: _fmt(v) for k, v in payload["fingerprint"].items()}
    _emit(_json(payload), args.output)
    return EXIT_OK if report.all_passed else EXIT_NUMERICAL


def cmd_curve(args) -> int:
    g, pair = _load(args)
    try:
        q_values = [float(tok) for tok in args.q_list.split(",") if tok.strip()]
    except ValueError:
        raise UsageError(f"--q-list must be comma-separated reals, got {args.q_list!r}")
    if not q_values:
        raise UsageError("--q-list must contain at least one value")
    rows = dyn.fidelity_curve(g, pair, q_values)
    _emit(dyn.curve_csv(rows), args.output)
    return EXIT_OK


def cmd_walks(args) -> int:
    g, pair = _load(args)
    if args.K < 1:
        raise UsageError("-K must be >= 1")
    table = walks.walk_table(g, pair, args.K)
    _emit(table.to_json(), args.output)
    return EXIT_OK


def cmd_extend(args) -> int:
    g, pair = _load(args)
    construction = cert.construct_q_for_lambda(g, pair, args.lam, args.rel_tol)
    # scale (mu, nu) so the larger-magnitude entry is exactly 1
    scale = max(abs(construction.mu), abs(construction.nu))
    mu, nu = construction.mu / scale, construction.nu / scale
    ext = cert.extend_eigenvector(g, pair, args.lam, mu, nu, args.rel_tol,
                                  Q=construction.Q)
    payload = {
        "schema": 1,
        "lambda": _fmt(float(args.lam)),
        "Q": _fmt(construction.Q),
        "rho": _fmt(construction.rho),
        "mu": _fmt(mu),
        "nu": _fmt(nu),
        "phi": [_fmt(float(x)) for x in ext.phi],
        "residual": _fmt(ext.residual),
    }
    _emit(_json(payload), args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="loopwalk",
        description="State-transfer analysis of loop-weighted quantum walks on graphs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("-g", "--graph", required=True, help="edge-list file")
        p.add_argument("-u", type=int, required=True, help="source vertex")
        p.add_argument("-v", type=int, required=True, help="target vertex")
        p.add_argument("-o", "--output", default=None, help="output path (default stdout)")

    p = sub.add_parser("analyze", help="fidelity/readout report at a given Q")
    common(p)
    p.add_argument("-Q", type=float, required=True, help="loop weight")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("certify", help="run every certificate at Q derived from epsilon")
    common(p)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--delta", type=float, default=0.05)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("curve", help="fidelity curve over a list of Q values (CSV)")
    common(p)
    p.add_argument("--q-list", required=True, help="comma-separated Q values")
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("walks", help="avoiding-walk count table (JSON)")
    common(p)
    p.add_argument("-K", type=int, required=True, help="maximum walk length")
    p.set_defaults(func=cmd_walks)

    p = sub.add_parser("extend", help="inverse construction: Q and eigenvector from lambda")
    common(p)
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--rel-tol", dest="rel_tol", type=float, default=1e-12)
    p.set_defaults(func=cmd_extend)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (EdgeListParseError, GraphValidationError, UsageError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericalError, DivergenceError, WorkCapExceededError, InconclusiveError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except NotApplicableError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_APPLICABLE
    except LoopwalkError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
