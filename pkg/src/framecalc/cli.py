"""Command-line front end: deterministic JSON reports for every operation.

Subcommands: ring, witt, frame, display, zip, ortho, k3, deform, selftest.
Exit codes: 0 = success, 1 = a verification failed (the report carries a
witness), 2 = input error (bad spec, unknown command, budget exceeded).
Reports are emitted with sorted keys and fixed formatting, so the same spec
and seed always produce identical bytes.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from . import linalg, serialize
from .serialize import SchemaError, dumps
from .rings import prime_field
from .witt import WittRing, teichmuller, verschiebung, witt_frobenius
from .frames import (Thickening, WittFrame, ZipFrame, check_zip_projection,
                     frame_axiom_check)
from .displays import (Display, classify_fzips, classify_orbits, dual,
                       from_fzip, is_isomorphic_bruteforce, tensor, to_fzip,
                       twist, unit_display)
from .orthogonal import (GramNotSplit, OrthDisplay, classify_orth_orbits,
                         decompose, form_transform, normalize_gram,
                         standard_gram, verify_orth)
from .deformation import (hodge_lift_parameters, k3_deform, lift_display,
                          lift_orth_display, reduce_display,
                          reduce_witt_display)
from . import fixtures

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(ValueError):
    pass


def _load_spec(args, required=True):
    if args.spec is None:
        if required:
            raise InputError("this operation requires --spec <file>")
        return None
    try:
        with open(args.spec) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read spec: {exc}")
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {args.spec}: {exc}")


def _get(spec, key, where="spec"):
    if not isinstance(spec, dict) or key not in spec:
        raise InputError(f"{where}: missing required field {key!r}")
    return spec[key]


def _emit(args, report):
    text = dumps(report)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    if args.json or not args.out:
        sys.stdout.write(text if args.json else _summary(report))
    return EXIT_OK if report.get("passed", True) else EXIT_FAIL


def _summary(report, prefix=""):
    """Human-readable digest: shallow scalar fields, one per line."""
    lines = []
    for key in sorted(report):
        val = report[key]
        if isinstance(val, (bool, int, float, str)):
            lines.append(f"{prefix}{key}: {val}")
        elif isinstance(val, dict) and key in ("checks", "counts"):
            lines.append(f"{prefix}{key}:")
            lines.append(_summary(val, prefix + "  ").rstrip("\n") + "\n")
    return "".join(line if line.endswith("\n") else line + "\n"
                   for line in lines)


# ---------------------------------------------------------------------------
# ring
# ---------------------------------------------------------------------------

def cmd_ring(args):
    spec = _load_spec(args)
    ring = serialize.ring_from_dict(spec.get("ring", spec))
    rng = random.Random(args.seed)
    elems = [fixtures.rand_ring_elem(ring, rng) for _ in range(12)]
    failures = []
    for a in elems[:4]:
        for b in elems[4:8]:
            for c in elems[8:]:
                if (a + b) + c != a + (b + c) or (a * b) * c != a * (b * c):
                    failures.append("associativity")
                if a * (b + c) != a * b + a * c:
                    failures.append("distributivity")
                if a * b != b * a:
                    failures.append("commutativity")
    q = ring.field.q
    report = {
        "command": "ring",
        "ring": serialize.ring_to_dict(ring),
        "size": ring.size,
        "rank": len(ring.basis),
        "basis": [serialize.mono_to_str(ring.vars, m) for m in ring.basis],
        "units": (q - 1) * q ** (len(ring.basis) - 1),
        "failures": sorted(set(failures)),
        "passed": not failures,
    }
    return _emit(args, report)


# ---------------------------------------------------------------------------
# witt
# ---------------------------------------------------------------------------

def cmd_witt(args):
    spec = _load_spec(args)
    ring = serialize.ring_from_dict(_get(spec, "ring"))
    m = int(_get(spec, "m"))
    wring = WittRing(ring, m)
    op = args.op
    if op in ("add", "mul"):
        x = serialize.witt_from_list(wring, _get(spec, "x"))
        y = serialize.witt_from_list(wring, _get(spec, "y"))
        res = x + y if op == "add" else x * y
    elif op == "frob":
        if m < 2:
            raise InputError("frob lowers the length; need m >= 2")
        x = serialize.witt_from_list(wring, _get(spec, "x"))
        res = witt_frobenius(x)
    elif op == "v":
        x = serialize.witt_from_list(wring, _get(spec, "x"))
        res = verschiebung(x)
    else:  # teich
        a = serialize.elem_from_dict(ring, _get(spec, "a"))
        res = teichmuller(a, m)
    report = {
        "command": f"witt {op}",
        "ring": serialize.ring_to_dict(ring),
        "m": m,
        "result": serialize.witt_to_list(res),
        "passed": True,
    }
    return _emit(args, report)


# ---------------------------------------------------------------------------
# frame
# ---------------------------------------------------------------------------

def cmd_frame(args):
    spec = _load_spec(args, required=(args.op == "build"))
    if args.op == "build":
        frame = serialize.frame_from_dict(spec)
        report = {
            "command": "frame build",
            "frame": serialize.frame_to_dict(frame),
            "s0_size": frame.s0.size,
            "passed": True,
        }
        return _emit(args, report)
    frames = [serialize.frame_from_dict(spec)] if spec else fixtures.fixture_frames()
    budget = args.budget or 20000
    checks = {}
    witnesses = {}
    for frame in frames:
        name = repr(frame)
        res = frame_axiom_check(frame, budget=budget, seed=args.seed)
        ok = res["passed"]
        if frame.kind in ("witt", "relative"):
            proj = check_zip_projection(frame, budget=budget, seed=args.seed)
            ok = ok and proj["passed"]
            if not proj["passed"]:
                witnesses[name] = proj["failures"][:3]
        if not res["passed"]:
            witnesses[name] = res["failures"][:3]
        checks[name] = ok
    report = {
        "command": "frame check",
        "checks": checks,
        "witnesses": {k: [str(w) for w in v] for k, v in witnesses.items()},
        "passed": all(checks.values()),
    }
    return _emit(args, report)


# ---------------------------------------------------------------------------
# display
# ---------------------------------------------------------------------------

def cmd_display(args):
    spec = _load_spec(args)
    op = args.op
    cap = args.budget or 10 ** 7
    if op == "classify":
        frame = serialize.frame_from_dict(_get(spec, "frame"))
        mu = tuple(int(w) for w in _get(spec, "mu"))
        try:
            orbits = classify_orbits(frame, mu, cap)
        except ValueError as exc:
            raise InputError(f"budget exceeded: {exc}")
        reps = [serialize.display_to_dict(min(o, key=lambda d: str(d.phi)))
                for o in orbits]
        report = {
            "command": "display classify",
            "orbits": len(orbits),
            "orbit_sizes": sorted(len(o) for o in orbits),
            "representatives": reps,
            "passed": True,
        }
    elif op == "iso":
        d1 = serialize.display_from_dict(_get(spec, "first"))
        d2 = serialize.display_from_dict(_get(spec, "second"))
        report = {
            "command": "display iso",
            "isomorphic": is_isomorphic_bruteforce(d1, d2, cap),
            "passed": True,
        }
    elif op == "act":
        d = serialize.display_from_dict(_get(spec, "display"))
        g = serialize.graded_from_dict(d.frame, _get(spec, "element"), d.mu)
        report = {
            "command": "display act",
            "result": serialize.display_to_dict(d.act(g)),
            "passed": True,
        }
    elif op == "hodge":
        d = serialize.display_from_dict(_get(spec, "display"))
        filt = d.hodge_filtration()
        report = {
            "command": "display hodge",
            "filtration": {str(k): v for k, v in filt.items()},
            "passed": True,
        }
    elif op == "tensor":
        d1 = serialize.display_from_dict(_get(spec, "first"))
        d2 = serialize.display_from_dict(_get(spec, "second"))
        report = {
            "command": "display tensor",
            "result": serialize.display_to_dict(tensor(d1, d2)),
            "passed": True,
        }
    else:  # dual
        d = serialize.display_from_dict(_get(spec, "display"))
        report = {
            "command": "display dual",
            "result": serialize.display_to_dict(dual(d)),
            "passed": True,
        }
    return _emit(args, report)


# ---------------------------------------------------------------------------
# zip
# ---------------------------------------------------------------------------

def cmd_zip(args):
    spec = _load_spec(args)
    op = args.op
    if op == "to":
        d = serialize.display_from_dict(_get(spec, "display"))
        report = {
            "command": "zip to",
            "result": serialize.fzip_to_dict(to_fzip(d)),
            "passed": True,
        }
    elif op == "from":
        z = serialize.fzip_from_dict(_get(spec, "zip"))
        frame = serialize.frame_from_dict(_get(spec, "frame"))
        report = {
            "command": "zip from",
            "result": serialize.display_to_dict(from_fzip(z, frame)),
            "passed": True,
        }
    else:  # roundtrip
        d = serialize.display_from_dict(_get(spec, "display"))
        back = from_fzip(to_fzip(d), d.frame)
        ok = back == d
        report = {
            "command": "zip roundtrip",
            "roundtrip_identity": ok,
            "witness": None if ok else serialize.display_to_dict(back),
            "passed": ok,
        }
    return _emit(args, report)


# ---------------------------------------------------------------------------
# ortho / k3
# ---------------------------------------------------------------------------

def cmd_ortho(args):
    spec = _load_spec(args)
    op = args.op
    if op == "check":
        d = serialize.display_from_dict(_get(spec, "display"))
        ok = verify_orth(d)
        report = {"command": "ortho check", "orthogonal": ok, "passed": ok}
    elif op == "normalize":
        frame = serialize.frame_from_dict(_get(spec, "frame"))
        mu = tuple(int(w) for w in _get(spec, "mu"))
        if "gram" in spec:
            B = serialize.graded_from_dict(frame, spec["gram"], mu)
            grams = [B]
        else:
            rng = random.Random(args.seed)
            count = int(spec.get("count", 1))
            grams = [fixtures.rand_gram_perturbation(frame, mu, rng)
                     for _ in range(count)]
        results = []
        ok = True
        for B in grams:
            try:
                A = normalize_gram(B)
            except GramNotSplit as exc:
                results.append({"split": False, "witness": str(exc)})
                ok = False
                continue
            good = form_transform(B, A) == standard_gram(frame, mu)
            ok = ok and good
            results.append({"split": True, "verified": good,
                            "basis_change": serialize.graded_to_dict(A)})
        report = {"command": "ortho normalize", "results": results,
                  "count": len(grams), "passed": ok}
    else:  # classify
        frame = serialize.frame_from_dict(_get(spec, "frame"))
        mu = tuple(int(w) for w in _get(spec, "mu"))
        try:
            orbits = classify_orth_orbits(frame, mu, args.budget or 10 ** 7)
        except ValueError as exc:
            raise InputError(f"budget exceeded: {exc}")
        report = {
            "command": "ortho classify",
            "orbits": len(orbits),
            "orbit_sizes": sorted(len(o) for o in orbits),
            "passed": True,
        }
    return _emit(args, report)


def cmd_k3(args):
    spec = _load_spec(args)
    d = serialize.display_from_dict(_get(spec, "display"))
    shift = 1 if args.op == "pack" else -1
    t = twist(d, shift)
    out = serialize.display_to_dict(t)
    if args.op == "unpack":
        out["selfdual"] = verify_orth(OrthDisplay(t.frame, t.mu, t.phi,
                                                  check=False))
    report = {
        "command": f"k3 {args.op}",
        "result": out,
        "passed": True,
    }
    return _emit(args, report)


# ---------------------------------------------------------------------------
# deform
# ---------------------------------------------------------------------------

def _deform_inputs(args):
    spec = _load_spec(args, required=False)
    if spec is None:
        th, d = fixtures.k3_fixture() if args.op == "k3" else fixtures.gl2_fixture()
        return th, d, isinstance(d, OrthDisplay)
    ext = serialize.ext_from_dict(_get(spec, "ext"))
    m = int(spec.get("m", 2))
    th = Thickening(ext, m)
    selfdual = bool(spec.get("selfdual")) or args.op == "k3"
    desc = dict(_get(spec, "display"))
    desc.setdefault("selfdual", selfdual)
    d = serialize.display_from_dict(desc, frame=th.target)
    return th, d, selfdual


def cmd_deform(args):
    th, d, selfdual = _deform_inputs(args)
    if args.op == "lift":
        dhat = lift_orth_display(th, d) if selfdual else lift_display(th, d)
        ok = linalg.mat_eq(reduce_display(th, dhat).phi, d.phi)
        report = {
            "command": "deform lift",
            "lifted": serialize.display_to_dict(dhat),
            "reduces_to_input": ok,
            "passed": ok,
        }
    elif args.op == "hodge":
        params = list(hodge_lift_parameters(th.source, d.mu, orth=selfdual))
        ser = []
        for pr in params:
            if selfdual:
                ser.append([serialize.elem_to_dict(x) for x in pr])
            else:
                ser.append({f"{i},{j}": serialize.elem_to_dict(x)
                            for (i, j), x in pr.items()})
        expected = th.source.ext.j_size ** (d.n - 2 if selfdual else
                                            sum(1 for i in range(d.n)
                                                for j in range(d.n)
                                                if d.mu[j] - d.mu[i] >= 1))
        report = {
            "command": "deform hodge",
            "count": len(params),
            "expected": expected,
            "lifts": ser,
            "passed": len(params) == expected,
        }
    else:  # k3
        if not selfdual:
            raise InputError("deform k3 requires a self-dual display")
        deformations = k3_deform(th, d)
        transcript = []
        seen = set()
        ok = True
        for dd in deformations:
            orth = verify_orth(dd)
            red = linalg.mat_eq(
                reduce_witt_display(th.source.ext, th.target, dd).phi, d.phi)
            key = json.dumps(serialize.matrix_to_json(dd.frame.s0, dd.phi),
                             sort_keys=True)
            fresh = key not in seen
            seen.add(key)
            ok = ok and orth and red and fresh
            transcript.append({"orthogonal": orth, "reduces": red,
                               "distinct": fresh})
        expected = th.source.ext.j_size ** (d.n - 2)
        ok = ok and len(deformations) == expected
        report = {
            "command": "deform k3",
            "count": len(deformations),
            "expected": expected,
            "deformations": [serialize.display_to_dict(dd)
                             for dd in deformations],
            "transcript": transcript,
            "passed": ok,
        }
    return _emit(args, report)


# ---------------------------------------------------------------------------
# selftest
# ---------------------------------------------------------------------------

def cmd_selftest(args):
    rng = random.Random(args.seed)
    budget = args.budget or 20000
    checks = {}

    F2 = prime_field(2)
    w22 = WittRing(F2, 2)
    elems = list(w22.elements()) if hasattr(w22, "elements") else None
    if elems is None:
        elems = [w22.el([a, b]) for a in F2.elements() for b in F2.elements()]
    ok = True
    for x in elems:
        for y in elems:
            if x + y != y + x or x * y != y * x:
                ok = False
    for _ in range(100):
        x, y, z = (rng.choice(elems) for _ in range(3))
        if (x + y) + z != x + (y + z) or x * (y + z) != x * y + x * z:
            ok = False
    checks["witt_ring_axioms_W2_F2"] = ok

    F3 = prime_field(3)
    w23 = WittRing(F3, 2)
    acc, order = w23.one(), 1
    while not acc.is_zero():
        acc = acc + w23.one()
        order += 1
    checks["additive_order_W2_F3"] = (order == 9)

    for frame in fixtures.fixture_frames():
        res = frame_axiom_check(frame, budget=budget, seed=args.seed)
        checks[f"frame_axioms[{frame!r}]"] = res["passed"]

    zf = fixtures.fixture_frames()[1]  # zip frame of F_3
    ok = True
    for d in (unit_display(zf, 1, 0), unit_display(zf, 2, 1)):
        ok = ok and from_fzip(to_fzip(d), zf) == d
    checks["fzip_roundtrip_units"] = ok

    zf_f2 = ZipFrame(F2)
    orbits = classify_orbits(zf_f2, (1, 0))
    zips = classify_fzips(zf_f2, (1, 0))
    checks["orbit_count_F2"] = (len(orbits) == 2 == len(zips))

    wf = WittFrame(F3, 2)
    ok = True
    for _ in range(10):
        g = fixtures.rand_group_element(wf, (1, 0), rng)
        q, u = decompose(g)
        ok = ok and (q * u == g)
    checks["decompose_random"] = ok

    report = {
        "command": "selftest",
        "checks": checks,
        "passed": all(checks.values()),
    }
    return _emit(args, report)


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(
        prog="framecalc",
        description="Exact arithmetic for truncated Witt vectors, frames, "
                    "displays, and their deformations over finite local rings.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--spec", help="JSON input file")
    common.add_argument("--seed", type=int, default=0,
                        help="seed for sampled checks (default 0)")
    common.add_argument("--budget", type=int, default=None,
                        help="enumeration budget cap")
    common.add_argument("--out", help="write the JSON report to this file")
    common.add_argument("--json", action="store_true",
                        help="print the full JSON report to stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("ring", parents=[common]).set_defaults(func=cmd_ring)

    p = sub.add_parser("witt", parents=[common])
    p.add_argument("op", choices=["add", "mul", "frob", "v", "teich"])
    p.set_defaults(func=cmd_witt)

    p = sub.add_parser("frame", parents=[common])
    p.add_argument("op", choices=["build", "check"])
    p.set_defaults(func=cmd_frame)

    p = sub.add_parser("display", parents=[common])
    p.add_argument("op", choices=["act", "iso", "classify", "hodge",
                                  "tensor", "dual"])
    p.set_defaults(func=cmd_display)

    p = sub.add_parser("zip", parents=[common])
    p.add_argument("op", choices=["to", "from", "roundtrip"])
    p.set_defaults(func=cmd_zip)

    p = sub.add_parser("ortho", parents=[common])
    p.add_argument("op", choices=["check", "normalize", "classify"])
    p.set_defaults(func=cmd_ortho)

    p = sub.add_parser("k3", parents=[common])
    p.add_argument("op", choices=["pack", "unpack"])
    p.set_defaults(func=cmd_k3)

    p = sub.add_parser("deform", parents=[common])
    p.add_argument("op", choices=["lift", "hodge", "k3"])
    p.set_defaults(func=cmd_deform)

    sub.add_parser("selftest", parents=[common]).set_defaults(func=cmd_selftest)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, SchemaError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
