"""Command-line front end.

Subcommands: ``reproduce`` (full report of every tracked value), ``bound``
(one computation), ``check`` (ensemble diagnostics), ``gallery`` (named
objects), ``ur-test`` (randomized relation suites), ``moe`` (game bounds).
Every flag can also be supplied through an ``OBCAST_``-prefixed environment
variable, e.g. ``OBCAST_SEED=7``.

Exit codes: 0 all checks pass, 1 usage or input error, 2 internal failure,
3 a tracked check failed.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

from . import broadcast, moe, qpv
from .discrimination import SolverSettings, p_postinfo
from .ensembles import (
    GopEnsemble,
    PostInfoEnsemble,
    from_json_dict,
    gallery,
    gallery_names,
    global_orthogonality_check,
    induced_postinfo,
    qubit_qudit_form_check,
    to_json_dict,
    _decode_vector,
)
from .errors import InternalInconsistency, SolverFailure
from .reporting import reports_to_csv, reports_to_json
from .reproduce import run_reproduce
from .sampling import case_rng, random_ket
from .uncertainty import SuperpositionSpec, ur_pair_bound

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INTERNAL = 2
EXIT_FAILED = 3


def _env_default(name: str, fallback, cast):
    raw = os.environ.get(f"OBCAST_{name}")
    if raw is None:
        return fallback
    try:
        return cast(raw)
    except ValueError:
        raise SystemExit(f"invalid OBCAST_{name}={raw!r}")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="obcast", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=_env_default("SEED", 42, int))
        p.add_argument("--trials", type=int, default=_env_default("TRIALS", None, int))
        p.add_argument(
            "--tol-gap",
            type=float,
            default=_env_default("TOL_GAP", 1e-7, float),
            help="certified duality-gap tolerance for discrimination solves",
        )
        p.add_argument(
            "--tol-primal",
            type=float,
            default=_env_default("TOL_PRIMAL", 1e-6, float),
            help="agreement tolerance when two routes are compared",
        )
        p.add_argument(
            "--tol-eig",
            type=float,
            default=_env_default("TOL_EIG", 1e-10, float),
            help="PSD clamp / rank threshold for eigenvalue-based checks",
        )

    rep = sub.add_parser("reproduce", help="recompute every tracked value and emit a report")
    common(rep)
    rep.add_argument("--format", choices=("json", "csv"), default=_env_default("FORMAT", "json", str))
    rep.add_argument("--out", type=Path, default=_env_default("OUT", None, Path))
    rep.add_argument("--only", default=_env_default("ONLY", None, str), help="substring filter on case ids")
    rep.add_argument("--jobs", type=int, default=_env_default("JOBS", 1, int))
    rep.add_argument("--quiet", action="store_true")

    bnd = sub.add_parser("bound", help="compute one bound for a gallery entry or ensemble file")
    common(bnd)
    src = bnd.add_mutually_exclusive_group(required=True)
    src.add_argument("--gallery", dest="gallery_name")
    src.add_argument("--file", type=Path)
    bnd.add_argument("--method", choices=("postinfo", "thm4", "prop4", "disk", "moe"), required=True)

    chk = sub.add_parser("check", help="validate an ensemble and decide broadcast feasibility")
    common(chk)
    src = chk.add_mutually_exclusive_group(required=True)
    src.add_argument("--gallery", dest="gallery_name")
    src.add_argument("--file", type=Path)

    gal = sub.add_parser("gallery", help="list gallery names or dump one object as JSON")
    gal.add_argument("name", nargs="?")

    urt = sub.add_parser("ur-test", help="run the randomized uncertainty-relation suite")
    common(urt)

    mg = sub.add_parser("moe", help="game-route bounds for a named game")
    common(mg)
    mg.add_argument("--game", choices=("bb84", "obb"), required=True)
    return parser


def _settings(args) -> SolverSettings:
    return SolverSettings(gap_tol=args.tol_gap, psd_tol=args.tol_eig)


def _load_source(args):
    """(name, parsed object or raw dict) for --gallery / --file inputs."""
    if args.gallery_name:
        return args.gallery_name, gallery(args.gallery_name)
    raw = json.loads(args.file.read_text())
    return str(args.file), raw


def _as_object(payload):
    return from_json_dict(payload) if isinstance(payload, dict) else payload


def _print_record(record: dict) -> None:
    print(json.dumps(record, sort_keys=True))


def _cmd_reproduce(args) -> int:
    reports = run_reproduce(
        seed=args.seed,
        jobs=args.jobs,
        only=args.only,
        trials=args.trials,
        settings=_settings(args),
    )
    if not args.quiet:
        for r in reports:
            status = "PASS" if r.passed else "FAIL"
            expected = "-" if r.expected is None else f"{r.expected!r}"
            print(f"{status} {r.id}: computed={r.computed!r} expected={expected} [{r.certificate}]")
    text = reports_to_json(reports) if args.format == "json" else reports_to_csv(reports)
    out = args.out or Path(f"obcast-report.{args.format}")
    out.write_text(text)
    if not args.quiet:
        failed = [r for r in reports if not r.passed]
        print(f"{len(reports)} cases, {len(reports) - len(failed)} passed -> {out}")
    gate = [r for r in reports if r.certificate != "heuristic" and not r.passed]
    return EXIT_FAILED if gate else EXIT_OK


def _postinfo_view(obj):
    if isinstance(obj, PostInfoEnsemble):
        return obj
    if isinstance(obj, GopEnsemble):
        for side in ("b", "a"):
            try:
                return induced_postinfo(obj, classical_side=side)
            except ValueError:
                continue
    raise ValueError("no classical side to reduce on; provide a post-information ensemble")


_THM4_INSTANCES = {
    "bb84": lambda: qpv.bb84_family_instance(math.pi / 2),
    "shifts": qpv.shifts_instance,
}

_DISK_PROGRAMS = {
    "obb": qpv.obb_disk_program,
    "qq-tilde": qpv.qq_tilde_disk_program,
    "qq": qpv.qq_tilde_disk_program,  # via the certified one-sided unitary equivalence
}


def _cmd_bound(args) -> int:
    name, payload = _load_source(args)
    settings = _settings(args)
    if args.method == "postinfo":
        ens = _postinfo_view(_as_object(payload))
        result = p_postinfo(ens, settings)
        _print_record(
            {
                "id": f"postinfo:{name}",
                "computed": result.value,
                "certificate": "dual-certified",
                "gap": result.certificate.gap,
            }
        )
        return EXIT_OK
    if args.method == "thm4":
        if name.startswith("gen-bb84"):
            theta = _gen_bb84_angle(name)
            inst = qpv.bb84_family_instance(theta)
        elif name in _THM4_INSTANCES:
            inst = _THM4_INSTANCES[name]()
        else:
            raise ValueError(f"no four-state overlap data known for {name!r}")
        eps = qpv.thm4_min_epsilon(inst)
        _print_record({"id": f"thm4:{name}", "computed": eps, "certificate": "analytic"})
        return EXIT_OK
    if args.method == "prop4":
        if name.startswith("gen-bb84"):
            theta = _gen_bb84_angle(name)
        elif name == "bb84":
            theta = math.pi / 2
        else:
            raise ValueError(f"no program parameters known for {name!r}")
        spec = SuperpositionSpec(theta, 0.0, theta - math.pi, 0.0)
        result = qpv.prop4_solve(0.5, 0.5, 0.5, spec)
        _print_record({"id": f"prop4:{name}", "computed": result.bound, "certificate": "heuristic"})
        return EXIT_OK
    if args.method == "disk":
        if name not in _DISK_PROGRAMS:
            raise ValueError(f"no coupled-disk program known for {name!r}")
        solution = qpv.disk_program_solve(_DISK_PROGRAMS[name]())
        _print_record({"id": f"disk:{name}", "computed": solution.bound, "certificate": solution.certificate})
        return EXIT_OK
    if args.method == "moe":
        if name == "obb":
            report = moe.example_go_trivial()
            _print_record({"id": "moe:obb", "computed": report.copy_strategy_bound, "certificate": "exact"})
            return EXIT_OK
        if name == "bb84" or name.startswith("gen-bb84"):
            bound = moe.classical_copy_permutation_bound(moe.game_bb84())
            _print_record({"id": f"moe:{name}", "computed": bound, "certificate": "exact"})
            return EXIT_OK
        raise ValueError(f"no game route known for {name!r} (try the 'moe' subcommand)")
    raise ValueError(f"unknown method {args.method!r}")


def _gen_bb84_angle(name: str) -> float:
    from .ensembles import _GEN_BB84, _parse_angle

    m = _GEN_BB84.match(name)
    if not m:
        raise ValueError(f"cannot parse {name!r}")
    return _parse_angle(m.group("theta"))


def _cmd_check(args) -> int:
    name, payload = _load_source(args)
    settings = _settings(args)
    if isinstance(payload, dict) and payload.get("kind") == "gop":
        a = [_decode_vector(pair[0]) for pair in payload["states"]]
        b = [_decode_vector(pair[1]) for pair in payload["states"]]
        ortho = global_orthogonality_check(a, b)
        if not ortho.ok:
            print(
                f"orthogonality: VIOLATED at pair {ortho.worst_pair} "
                f"(deviation {ortho.max_violation:.3e})"
            )
            return EXIT_FAILED
        print(f"orthogonality: ok (max deviation {ortho.max_violation:.3e})")
    obj = _as_object(payload)
    if isinstance(obj, GopEnsemble):
        if args.gallery_name:
            ortho = global_orthogonality_check(obj.a_states, obj.b_states)
            print(f"orthogonality: ok (max deviation {ortho.max_violation:.3e})")
        form = qubit_qudit_form_check(obj)
        print(f"qubit-qudit form: {'fits' if form.fits else form.reason}")
        iso_name = {"cor4-six": "cor4-isometry", "thm2-eight": "thm2-isometry"}.get(args.gallery_name)
        try:
            ens = induced_postinfo(obj, classical_side="a")
        except ValueError:
            print("classical reduction: no classical side; stopping at the form check")
            return EXIT_OK
        if iso_name:
            report = broadcast.verify_orthogonality_broadcast(gallery(iso_name), ens)
            verdict = "verified" if report.ok else f"FAILED (overlap {report.max_overlap:.3e})"
            print(f"quantum-communication protocol ({iso_name}): {verdict}")
    else:
        if not isinstance(obj, PostInfoEnsemble):
            raise ValueError("check expects a post-information or product ensemble")
        ens = obj
        if args.gallery_name == "thm1-pairs":
            report = broadcast.verify_orthogonality_broadcast(gallery("thm1-isometry"), ens)
            verdict = "verified" if report.ok else f"FAILED (overlap {report.max_overlap:.3e})"
            print(f"quantum-communication protocol (thm1-isometry): {verdict}")
    cert = broadcast.kill_pattern_certificate(ens)
    if cert.certified_infeasible:
        print(f"kill-pattern certificate: infeasible ({len(cert.kernel_dims)} patterns, all kernels trivial)")
    else:
        alive = sum(1 for v in cert.kernel_dims.values() if v > 0)
        print(f"kill-pattern certificate: inconclusive ({alive} patterns with nontrivial kernels)")
    decision = broadcast.perfect_classical_broadcast_decision(ens, settings)
    if decision.feasible:
        print(
            f"classical broadcast: feasible (value {decision.value:.9f}, "
            f"witness violation {decision.witness_violation:.2e})"
        )
    else:
        print(f"classical broadcast: infeasible (optimal value {decision.value:.9f} < 1)")
    return EXIT_OK


def _cmd_gallery(args) -> int:
    if args.name is None:
        for name in gallery_names():
            print(name)
        return EXIT_OK
    obj = gallery(args.name)
    print(json.dumps(to_json_dict(obj), sort_keys=True, indent=2))
    return EXIT_OK


def _cmd_ur_test(args) -> int:
    rng = case_rng(args.seed, "cli-ur-test")
    trials = args.trials or 1000
    worst = -math.inf
    for _ in range(trials):
        da, db = int(rng.integers(2, 5)), int(rng.integers(2, 5))
        a0 = random_ket(rng, da * db)
        a1 = random_ket(rng, da * db)
        spec = SuperpositionSpec(
            theta=float(rng.uniform(0, 2 * math.pi)),
            phi=float(rng.uniform(0, 2 * math.pi)),
            omega=float(rng.uniform(0, 2 * math.pi)),
            phi_prime=float(rng.uniform(0, 2 * math.pi)),
        )
        lhs, rhs = ur_pair_bound(a0, a1, spec, (da, db))
        worst = max(worst, lhs - rhs)
    ok = worst <= 1e-9
    print(f"pair relation: {trials} trials, max(lhs - rhs) = {worst:.3e} -> {'PASS' if ok else 'FAIL'}")
    return EXIT_OK if ok else EXIT_FAILED


def _cmd_moe(args) -> int:
    if args.game == "bb84":
        game = moe.game_bb84()
        print(f"overlap constant: {moe.overlap_constant(game)!r}")
        print(f"permutation bound (classical-copy registers): {moe.classical_copy_permutation_bound(game)!r}")
        return EXIT_OK
    report = moe.example_go_trivial()
    print(f"overlap constant: {report.overlap_constant!r}")
    print(f"permutation bound (copying strategy): {report.copy_strategy_bound!r}")
    print(f"broadcast-route contrast: {report.contrast_bound!r}")
    return EXIT_OK


_COMMANDS = {
    "reproduce": _cmd_reproduce,
    "bound": _cmd_bound,
    "check": _cmd_check,
    "gallery": _cmd_gallery,
    "ur-test": _cmd_ur_test,
    "moe": _cmd_moe,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InternalInconsistency, SolverFailure) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # pragma: no cover - last-resort diagnostics
        print(f"unexpected error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
