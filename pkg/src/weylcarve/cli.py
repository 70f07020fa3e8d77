"""Command-line front end: ``carve unitary``, ``carve siegel-check`` and
``carve dump-projector``.

Exit codes: 0 certified pass, 1 oracle mismatch or failed check, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .carve import carve_siegel_checks, carve_unitary
from .endoalg import (
    choose_m,
    choose_z,
    choose_z_rational,
    projector_q,
    projector_qprime,
    theta,
    young_action,
)
from .errors import CarveError, OracleMismatch, PreconditionError
from .exactnum import QuadElem
from .repspace import ModelV0, dump_linmap, exterior_module
from .symalg import young_idempotent
from .weights import Case, Weight, partition_of

EXIT_PASS, EXIT_FAIL, EXIT_PRECONDITION = 0, 1, 2


@dataclass
class RunConfig:
    command: str
    case: Case
    g: int | None = None
    s: int | None = None
    weights: tuple[str, ...] = ()
    p: int | None = None
    disc: int = 1
    cap: int | None = None
    out: str | None = None
    mode: str = "integral"
    jobs: int = 1

    def validate(self):
        for name in ("g", "s", "p", "disc", "cap", "jobs"):
            v = getattr(self, name)
            if v is not None and v < 1:
                raise PreconditionError(f"--{name} must be positive, got {v}",
                                        hypothesis=f"requires --{name} >= 1")


def _positive(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=True) + "\n"


def _emit(text: str, out: str | None):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _error_record(exc: CarveError) -> dict:
    return {"error": type(exc).__name__, "hypothesis": exc.hypothesis, "message": str(exc)}


def _parse_weight(text: str, g: int | None) -> Weight:
    a = Weight.parse(text)
    if g is not None and a.g != g:
        raise PreconditionError(f"weight {text!r} has {a.g} entries but --g is {g}",
                                hypothesis="requires g entries in the weight")
    return a


# --- unitary -----------------------------------------------------------------

def _carve_one(args) -> tuple[int, dict]:
    """Run one weight; never raises, so a batch keeps going."""
    text, g, p, disc, mode, cap = args
    try:
        a = _parse_weight(text, g)
        report = carve_unitary(a, p, disc, mode, cap)
    except OracleMismatch as exc:
        body = exc.report.to_dict() if exc.report is not None else {"weight": text}
        body["oracle_mismatch"] = str(exc)
        return EXIT_FAIL, body
    except CarveError as exc:
        return EXIT_PRECONDITION, {"weight": text, **_error_record(exc)}
    return (EXIT_PASS if report.passed else EXIT_FAIL), report.to_dict()


def cmd_carve_unitary(cfg: RunConfig) -> int:
    cfg.validate()
    p = cfg.p if cfg.mode == "integral" or cfg.p is not None else None
    tasks = [(w, cfg.g, p, cfg.disc, cfg.mode, cfg.cap) for w in cfg.weights]
    if cfg.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(_carve_one, tasks))
    else:
        results = [_carve_one(t) for t in tasks]
    for code, body in results:
        if code == EXIT_PRECONDITION:
            print(f"error: {body['weight']}: {body['hypothesis']} ({body['message']})",
                  file=sys.stderr)
    bodies = [b for _, b in results]
    _emit(_dumps(bodies[0] if len(bodies) == 1 else bodies), cfg.out)
    return max(code for code, _ in results)


# --- siegel ------------------------------------------------------------------

def cmd_siegel_check(cfg: RunConfig) -> int:
    cfg.validate()
    report = carve_siegel_checks(cfg.g, cfg.s, cfg.p, cfg.cap)
    _emit(_dumps(report.to_dict()), cfg.out)
    return EXIT_PASS if report.passed else EXIT_FAIL


# --- dump ----------------------------------------------------------------------

def build_projector(kind: str, ns: argparse.Namespace):
    """The LinMap named by ``kind`` for the dump command."""
    cap = ns.cap
    if kind == "theta":
        sp = exterior_module(ModelV0(Case.SIEGEL, ns.g), ns.s, cap)
        return theta(ns.i, ns.j, sp).map
    if kind in ("P", "C"):
        if not ns.weight:
            raise PreconditionError("--weight is required", hypothesis="requires a weight")
        a = _parse_weight(ns.weight[0], ns.g)
        if kind == "P":
            return carve_unitary(a, ns.p, ns.disc, ns.mode, cap).P
        lam, s = partition_of(a)
        sp = exterior_module(ModelV0(Case.UNITARY, a.g, ns.disc), s, cap)
        return young_action(young_idempotent(lam)[0], sp).map
    sp = exterior_module(ModelV0(Case.UNITARY, ns.g, ns.disc), ns.s, cap)
    if kind == "q":
        if ns.m is not None:
            m = ns.m
        elif ns.p is not None:
            m = choose_m(ns.p, ns.g)
        else:
            raise PreconditionError("q needs --m or --p", hypothesis="requires m or p")
        return projector_q(m, sp, ns.p)[0].map
    if kind == "qprime":
        if ns.z is not None:
            x, y = (int(t) for t in ns.z.split(","))
            z = QuadElem(x, y, ns.disc)
        elif ns.p is not None and ns.mode == "integral":
            z = choose_z(ns.disc, ns.p, ns.s).z
        else:
            z = choose_z_rational(ns.disc, ns.s).z
        return projector_qprime(z, sp, ns.p)[0].map
    raise ValueError(f"unknown projector kind {kind!r}")


def cmd_dump_projector(ns: argparse.Namespace) -> int:
    m = build_projector(ns.kind, ns)
    _emit(dump_linmap(m), ns.out)
    return EXIT_PASS


# --- argument parsing ------------------------------------------------------------

def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="carve",
        description="Carve V(a) + V(a*) out of exterior powers by exact projectors.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, g_required=True):
        p.add_argument("--g", type=_positive, required=g_required)
        p.add_argument("--cap", type=_positive, default=None,
                       help="basis-size cap (default: $WEYL_CARVE_CAP or 2^20)")
        p.add_argument("--out", default=None, help="output file (default: stdout)")

    u = sub.add_parser("unitary", help="carve and certify unitary weights")
    common(u, g_required=False)
    u.add_argument("--weight", action="append", required=True,
                   help='weight "a1,...,ag;c"; repeat for a batch')
    u.add_argument("--p", type=_positive, default=None)
    u.add_argument("--disc", type=_positive, default=1, help="d in Q(sqrt(-d))")
    u.add_argument("--mode", choices=("integral", "rational"), default="integral")
    u.add_argument("--jobs", type=_positive, default=1)

    s = sub.add_parser("siegel-check", help="verify the Siegel operator identities")
    common(s)
    s.add_argument("--s", type=_positive, required=True)
    s.add_argument("--p", type=_positive, default=7)

    d = sub.add_parser("dump-projector", help="write a projector as a sparse matrix")
    common(d, g_required=False)
    d.add_argument("--kind", choices=("q", "qprime", "P", "C", "theta"), required=True)
    d.add_argument("--s", type=_positive, default=None)
    d.add_argument("--weight", action="append", default=None)
    d.add_argument("--p", type=_positive, default=None)
    d.add_argument("--m", type=int, default=None, help="primitive root for q")
    d.add_argument("--z", default=None, help='z as "x,y" meaning x + y sqrt(-d)')
    d.add_argument("--disc", type=_positive, default=1)
    d.add_argument("--mode", choices=("integral", "rational"), default="integral")
    d.add_argument("--i", type=int, default=1)
    d.add_argument("--j", type=int, default=2)
    return parser


def main(argv=None) -> int:
    ns = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if ns.command == "unitary":
            cfg = RunConfig("unitary", Case.UNITARY, g=ns.g, weights=tuple(ns.weight), p=ns.p,
                            disc=ns.disc, cap=ns.cap, out=ns.out, mode=ns.mode, jobs=ns.jobs)
            return cmd_carve_unitary(cfg)
        if ns.command == "siegel-check":
            cfg = RunConfig("siegel-check", Case.SIEGEL, g=ns.g, s=ns.s, p=ns.p,
                            cap=ns.cap, out=ns.out)
            return cmd_siegel_check(cfg)
        if ns.kind in ("q", "qprime", "theta") and (ns.g is None or ns.s is None):
            raise PreconditionError(f"--kind {ns.kind} needs --g and --s",
                                    hypothesis="requires --g and --s")
        return cmd_dump_projector(ns)
    except OracleMismatch as exc:
        print(f"oracle mismatch: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except CarveError as exc:
        print(f"error: {exc.hypothesis} ({exc})", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
