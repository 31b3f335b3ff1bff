"""Command-line audit batteries with machine-readable JSON verdicts.

Exit codes: 0 when every check passed, 2 when the batteries ran but some
check failed, 1 on usage or input errors.  Reports carry no timestamps, so
identical flags and seed produce byte-identical output.
"""

import argparse
import cmath
import json
import os
import sys

import numpy as np

from . import io as gio
from . import mickelsson as mk
from . import probes
from . import su2geom as sg
from . import transgress as tg
from . import u1ext as ue
from .errors import GerbelabError, SchemaError
from .loopcore import PathSU2, default_smoothing, fuse
from .su2geom import Calibration

TOOL_VERSION = "gerbelab 0.1.0"


class UsageError(Exception):
    pass


def _check(name, defect, tolerance, ref, extra=None):
    defect_c = complex(defect)
    entry = {
        "name": name,
        "defect_modulus": abs(defect_c),
        "defect_phase_turns": cmath.phase(defect_c) / (2.0 * cmath.pi),
        "tolerance": tolerance,
        "pass": bool(abs(defect_c) <= tolerance),
        "ref": ref,
    }
    if extra:
        entry.update(extra)
    return entry


def _ratio_defect(z):
    """Distance of a unit complex from 1, kept as a complex for phase info."""
    return z - 1.0


# ---------------------------------------------------------------------------
# calibration handling


def _calibration_path(args):
    env = os.environ.get("GERBELAB_CALIBRATION")
    if env:
        return env
    return getattr(args, "calibration", None)


def load_calibration(args, resolution=32):
    path = _calibration_path(args)
    if path and os.path.exists(path):
        data = gio.load_json(path)
        try:
            cal = Calibration(float(data["c_h"]), float(data["s_rho"]), int(data["resolution"]))
        except (KeyError, TypeError, ValueError):
            raise SchemaError("$", "calibration file must carry c_h, s_rho, resolution")
        # cheap spot check before trusting the cache
        if abs(sg.integrate_three_form(cal, 24) - 1.0) > 2e-2:
            cal = sg.calibrate(resolution)
            _store_calibration(cal, path)
        return cal
    cal = sg.calibrate(resolution)
    if path:
        _store_calibration(cal, path)
    return cal


def _store_calibration(cal, path):
    gio.dump_json(
        {"c_h": cal.c_h, "s_rho": cal.s_rho, "resolution": cal.resolution}, path
    )


# ---------------------------------------------------------------------------
# batteries


def _parse_params(args):
    try:
        a, b, c = (float(x) for x in args.params.split(","))
    except (AttributeError, ValueError):
        raise UsageError("--params expects three comma-separated reals")
    family = {"R": ue.R_FAMILY, "Z": ue.Z_FAMILY, "generic": ue.GENERIC}.get(args.family)
    if family is None:
        raise UsageError("--family must be R, Z or generic")
    try:
        return ue.CocycleParams(a, b, c, family)
    except ValueError as exc:
        raise UsageError(str(exc))


def battery_check_cocycle(args):
    params = _parse_params(args)
    n, seed, trials, tol = args.grid, args.seed, args.trials, args.tol or 1e-9
    rng = np.random.default_rng(seed)
    checks = []

    one = ue.random_loop(rng, n, winding=0, amp=0.0, base=0.0)
    checks.append(
        _check("normalization", _ratio_defect(ue.eta(params, one, one)), 1e-12,
               "normalized cocycle")
    )

    worst = 0.0 + 0.0j
    for _ in range(trials):
        t1, t2, t3 = (ue.random_loop(rng, n) for _ in range(3))
        d = _ratio_defect(ue.cocycle_defect(params, t1, t2, t3))
        if abs(d) > abs(worst):
            worst = d
    checks.append(_check("cocycle identity", worst, tol, "cocycle identity"))

    worst = 0.0 + 0.0j
    for _ in range(max(2, trials // 10)):
        t1, t2 = ue.random_loop(rng, n), ue.random_loop(rng, n)
        n1, n2 = t1.winding, t2.winding
        for z1 in (-2, -1, 1, 2):
            for z2 in (-1, 0, 2):
                measured = ue.shift_defect(params, t1, t2, z1, z2)
                predicted = cmath.exp(
                    2j
                    * cmath.pi
                    * (
                        params.alpha * z1 * n2
                        + params.beta * (n1 * z2 + n2 * z1)
                        + params.gamma * n1 * z2
                    )
                )
                d = measured / predicted - 1.0
                if abs(d) > abs(worst):
                    worst = d
    checks.append(
        _check("integer-shift law", worst, tol, "gauge-shift computation")
    )

    worst = 0.0 + 0.0j
    for _ in range(trials):
        t1, t2 = ue.random_loop(rng, n), ue.random_loop(rng, n)
        measured, predicted = ue.symmetry_defect(params, t1, t2)
        d = measured / predicted - 1.0
        if abs(d) > abs(worst):
            worst = d
    checks.append(_check("symmetry law", worst, tol, "symmetry law"))

    if params.alpha == 0.0 and params.gamma == 0.0:
        worst = 0.0 + 0.0j
        for _ in range(trials):
            t1, t2 = ue.random_loop(rng, n), ue.random_loop(rng, n)
            d = _ratio_defect(ue.eta(params, t1, t2) / ue.eta(params, t2, t1))
            if abs(d) > abs(worst):
                worst = d
        checks.append(
            _check("commutativity at alpha=gamma=0", worst, 1e-12,
                   "symmetric middle term")
        )

    # quadrature convergence: the value at n against the value at 2n
    t_fine = np.linspace(0.0, 1.0, 2 * n + 1)
    conv_worst = 0.0
    for _ in range(3):
        w1, w2 = int(rng.integers(-2, 3)), int(rng.integers(-2, 3))
        c1, c2 = rng.uniform(0, 1, 2)
        a1, a2 = rng.uniform(-0.2, 0.2, 4), rng.uniform(-0.2, 0.2, 4)

        def lift(tt, w, c, coeffs):
            vals = w * tt + c
            for k, amp in enumerate(coeffs, start=1):
                vals = vals + amp / (k * k) * np.sin(2 * np.pi * k * tt)
            return vals

        def eta_at(m):
            tt = np.linspace(0.0, 1.0, m + 1)
            l1 = ue.LoopU1(ue.RealLift.from_values(lift(tt, w1, c1, a1)))
            l2 = ue.LoopU1(ue.RealLift.from_values(lift(tt, w2, c2, a2)))
            return ue.eta(params, l1, l2)

        e_n = abs(eta_at(n) - eta_at(4 * n))
        e_2n = abs(eta_at(2 * n) - eta_at(4 * n))
        conv_worst = max(conv_worst, e_2n - e_n / 16.0)
    checks.append(
        _check("quadrature convergence", conv_worst, 5e-13,
               "spectral rule on smooth probes")
    )
    return checks, None


def battery_classify(args):
    params = _parse_params(args)
    report = ue.classify(params, n=args.grid, seed=args.seed)
    measured = report["disjoint_comm_defect"]
    predicted = report["disjoint_comm_predicted"]
    checks = [
        _check(
            "disjoint-commutativity defect matches exp(2 pi i alpha)",
            measured / predicted - 1.0,
            1e-6,
            "disjoint commutativity",
        ),
        _check(
            "gauge well-definedness matches the family",
            0.0 if report["well_defined"] == (params.family in (ue.R_FAMILY, ue.Z_FAMILY))
            else 1.0,
            0.5,
            "gauge-shift families",
        ),
    ]
    verdict = {
        "well_defined": report["well_defined"],
        "disjoint_commutative": report["disjoint_commutative"],
        "transgressivity_obstructed": report["transgressivity_obstructed"],
        "known_identity": report["known_identity"],
        "disjoint_comm_defect_phase_turns": cmath.phase(measured) / (2 * cmath.pi),
    }
    return checks, verdict


def battery_poincare(args):
    n, seed, trials = args.grid, args.seed, args.trials
    rng = np.random.default_rng(seed)
    params = ue.CocycleParams.z_family(-1, 0, 1)
    worst = 0.0 + 0.0j
    for _ in range(trials):
        t1, t2 = ue.random_loop(rng, n), ue.random_loop(rng, n)
        d = ue.poincare_holonomy(t1, t2) - ue.eta(params, t1, t2)
        if abs(d) > abs(worst):
            worst = d
    checks = [
        _check("bundle holonomy equals the (-1, 0, 1) cocycle", worst, 1e-12,
               "Poincare identification")
    ]
    t = np.linspace(0.0, 1.0, n + 1)
    lin = ue.LoopU1(ue.RealLift.from_values(t))
    checks.append(
        _check("holonomy at the linear pair", ue.poincare_holonomy(lin, lin) + 1.0,
               1e-12, "hand integration")
    )
    return checks, None


def battery_calibrate(args):
    cal = sg.calibrate(args.grid if args.grid >= 24 else 48)
    path = _calibration_path(args)
    if path:
        _store_calibration(cal, path)
    total = sg.integrate_three_form(cal, 48)
    checks = [
        _check("total integral of the 3-form", total - 1.0, 1e-3,
               "generator normalization",
               extra={"c_h": cal.c_h, "s_rho": cal.s_rho}),
    ]
    dh, drho = sg.simplicial_identity_defects(cal, n_samples=10, seed=args.seed)
    checks.append(_check("coboundary identity", dh, 1e-4, "coboundary of the 3-form"))
    checks.append(_check("simplicial 2-form identity", drho, 1e-6, "product 2-form cocycle"))
    return checks, None


def battery_wz(args):
    cal = load_calibration(args)
    if not args.sphere:
        raise UsageError("wz needs --sphere FILE")
    sphere = gio.sphere_from_json(gio.load_json(args.sphere))
    value = sg.wz_action(sphere, cal, seed=args.seed)
    checks = [
        _check("action computed", 0.0, 1.0, "Wess-Zumino term",
               extra={"value_turns": value})
    ]
    if args.grid_refine and args.grid_refine > 1:
        refined = sg.wz_action(sphere.refined(args.grid_refine), cal, seed=args.seed)
        d = cmath.exp(2j * cmath.pi * value) - cmath.exp(2j * cmath.pi * refined)
        checks.append(
            _check("refinement stability", d, 1e-2, "quadrature convergence",
                   extra={"refined_value_turns": refined})
        )
    return checks, None


def battery_mickelsson(args):
    cal = load_calibration(args)
    rng = np.random.default_rng(args.seed)
    which = args.check or "product"
    checks = []
    if which == "product":
        da, db, dc = (probes.random_disk(rng, amp=0.5) for _ in range(3))
        ea, eb, ec = (mk.MickElement(x, 1.0 + 0j) for x in (da, db, dc))
        lhs = mk.product(mk.product(ea, eb, cal), ec, cal)
        rhs = mk.product(ea, mk.product(eb, ec, cal), cal)
        checks.append(_check("associativity", lhs.z / rhs.z - 1.0, 2e-3,
                             "simplicial 2-form identity"))
        da2 = probes.perturbed_disk(rng, da)
        s = sg.wz_action(sg.glue_sphere(da, da2), cal)
        ea2 = mk.MickElement(da2, cmath.exp(-2j * cmath.pi * s))
        d = mk.equivalence_defect(mk.product(ea, eb, cal), mk.product(ea2, eb, cal), cal)
        checks.append(_check("well-definedness", d - 1.0, 5e-3, "coboundary identity"))
    elif which == "fusion":
        g1, g2, g3 = probes.path_triple_su2(rng, amp=0.5)
        d12 = probes.perturbed_disk(rng, probes.disk_from_boundary(fuse(g1, g2)), amp=0.4)
        d23 = probes.perturbed_disk(rng, probes.disk_from_boundary(fuse(g2, g3)), amp=0.4)
        d13 = probes.perturbed_disk(rng, probes.disk_from_boundary(fuse(g1, g3)), amp=0.4)
        e12 = mk.MickElement(d12, cmath.exp(0.4j))
        e23 = mk.MickElement(d23, cmath.exp(-0.9j))
        f1 = mk.fusion(e12, e23, d13, cal)
        f2 = mk.fusion(e12, e23, probes.perturbed_disk(rng, d13, amp=0.4), cal)
        checks.append(
            _check("choice independence", mk.equivalence_defect(f1, f2, cal) - 1.0,
                   5e-3, "fusion well-definedness")
        )
    elif which == "disjoint-comm":
        xi1, xi2 = probes.random_direction(rng), probes.random_direction(rng)
        t1 = probes.bump_loop_su2(xi1, (0.05, 0.45))
        t2 = probes.bump_loop_su2(xi2, (0.55, 0.95))
        from . import quat

        p1 = mk.MickElement(
            probes.perturbed_disk(rng, probes.disk_from_boundary(t1, base=quat.ONE)),
            cmath.exp(0.7j),
        )
        p2 = mk.MickElement(
            probes.perturbed_disk(rng, probes.disk_from_boundary(t2, base=quat.ONE)),
            cmath.exp(-0.2j),
        )
        d = mk.commutator_defect(p1, p2, ((0.05, 0.45), (0.55, 0.95)), cal)
        checks.append(_check("disjoint commutativity", d - 1.0, 1e-2,
                             "disjoint commutativity"))
    elif which == "can":
        g1, g2, _ = probes.path_triple_su2(rng, amp=0.5)
        can1 = mk.canonical_section(g1)
        f = mk.fusion(can1, can1, can1.phi, cal)
        checks.append(_check("idempotence", mk.equivalence_defect(f, can1, cal) - 1.0,
                             5e-3, "canonical section"))
        from . import quat

        prod = PathSU2.from_samples(
            quat.qmul(g1.samples, g2.samples), min(g1.collar, g2.collar)
        )
        lhs = mk.product(can1, mk.canonical_section(g2), cal)
        rhs = mk.canonical_section(prod)
        checks.append(_check("homomorphism", mk.equivalence_defect(lhs, rhs, cal) - 1.0,
                             5e-3, "canonical section"))
    elif which == "polwieg":
        worst = 0.0
        for _ in range(max(1, args.trials // 30)):
            s1 = probes.random_sphere(rng)
            s2 = probes.random_sphere(rng)
            worst = max(worst, mk.polyakov_wiegmann_defect(s1, s2, cal))
        checks.append(_check("product formula", worst, 5e-3, "Polyakov-Wiegmann"))
    elif which == "splitting":
        m = 256
        z = np.arange(m + 1) / m
        f = 0.7 * np.sin(2 * np.pi * z) + 0.3
        xi0 = probes.random_direction(rng)
        c1 = mk.splitting_central_component(f, xi0, cal)
        checks.append(_check("rank-one vanishing of the component", c1, 1e-3,
                             "rank-one vanishing"))
        k = m // 8
        frot = np.append(np.roll(f[:-1], -k), f[k])
        c2 = mk.splitting_central_component(frot, xi0, cal)
        checks.append(_check("rotation equivariance", c2 - c1, 1e-2,
                             "equivariant splitting"))
    else:
        raise UsageError(f"unknown mickelsson check {which!r}")
    return checks, None


def battery_transgress(args):
    rng = np.random.default_rng(args.seed)
    which = args.check or "splitting"
    form_name = args.form or "poincare"
    cal = load_calibration(args) if form_name == "su2rho" else None
    form = tg.builtin_form(form_name, cal)
    checks = []
    if which == "splitting":
        worst = 0.0
        for _ in range(3):
            if form.base == "T2":
                g1, g2 = probes.pair_family_t2(rng)
            else:
                g1, g2 = probes.pair_family_su2xsu2(rng)
            worst = max(worst, tg.path_splitting_defect(form, g1, g2))
        checks.append(_check("path splitting", worst, 1e-6, "path splitting"))
    elif which == "contractibility":
        phi = default_smoothing(256)
        worst = 0.0
        for _ in range(3):
            if form.base == "T2":
                p = probes.random_t2_path(rng)
            else:
                p = probes.su2xsu2_path(rng)
            worst = max(worst, tg.contractibility_defect(form, p, phi))
        tol = 1e-9 if form.base == "T2" else 1e-6
        checks.append(_check("contractibility", worst, tol, "rank-one retraction"))
    elif which == "multiplicativity":
        d = tg.multiplicativity_defect(form, rng)
        tol = 1e-12 if form.base == "T2" else 1e-6
        checks.append(_check("simplicial identity", d, tol, "multiplicative complex"))
    elif which == "curving":
        if form.base != "T2":
            raise UsageError("curving bigons are implemented over the 2-torus")
        phi = default_smoothing(256)
        worst = 0.0
        for _ in range(3):
            worst = max(worst, tg.curving_defect(form, probes.random_bigon(rng), phi))
        checks.append(_check("curving identity", worst, 1e-3, "regressed curving"))
    elif which == "reciprocity":
        checks, _ = battery_reciprocity(args)
    else:
        raise UsageError(f"unknown transgress check {which!r}")
    return checks, None


def battery_reciprocity(args):
    rng = np.random.default_rng(args.seed)
    poin = tg.builtin_form("poincare")
    checks = [
        _check("total torus integral", tg.form_total_integral_t2(poin) - 1.0, 1e-6,
               "unit pairing")
    ]
    r_count, m = 128, 256
    r = np.linspace(0.0, 1.0, r_count + 1)
    th = 2.0 * np.pi * np.arange(m) / m
    rad = 0.5 / np.sqrt(np.pi)
    f1 = 0.5 + rad * np.outer(r, np.cos(th))
    f2 = 0.5 + rad * np.outer(r, np.sin(th))
    e12 = tg.reciprocity_cocycle(poin, "disk", f1, f2)
    e21 = tg.reciprocity_cocycle(poin, "disk", f2, f1)
    asym = abs(e12 - e21)
    checks.append(
        _check("quarter-area disk asymmetry", 0.0 if asym > 0.1 else 1.0, 0.5,
               "skew symmetry", extra={"asymmetry": asym})
    )
    a = 2.0 * np.pi * np.arange(64) / 64

    def tmap():
        c = rng.uniform(-0.4, 0.4, 4)
        return (
            c[0] * np.sin(a)[:, None]
            + c[1] * np.cos(a)[None, :]
            + c[2] * np.sin(a)[:, None] * np.cos(a)[None, :]
            + c[3]
        )

    worst = 0.0
    for _ in range(args.trials // 10 or 3):
        p1, p2, p3 = tmap(), tmap(), tmap()
        e = lambda x, y: tg.reciprocity_exponent(poin, "torus", x, y)
        worst = max(worst, abs(e(p1 + p2, p3) + e(p1, p2) - e(p1, p2 + p3) - e(p2, p3)))
    checks.append(_check("surface 2-cocycle identity", worst, 1e-9,
                         "surface reciprocity"))
    return checks, None


BATTERIES = {
    "check-cocycle": battery_check_cocycle,
    "classify": battery_classify,
    "poincare": battery_poincare,
    "calibrate": battery_calibrate,
    "wz": battery_wz,
    "mickelsson": battery_mickelsson,
    "transgress": battery_transgress,
    "reciprocity": battery_reciprocity,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="gerbelab",
        description="Numerical audits of loop-group central extensions",
    )
    sub = parser.add_subparsers(dest="command")
    for name in BATTERIES:
        p = sub.add_parser(name)
        p.add_argument("--params", default="0,0,0")
        p.add_argument("--family", default="generic")
        p.add_argument("--grid", type=int, default=256)
        p.add_argument("--tol", type=float, default=None)
        p.add_argument("--trials", type=int, default=100)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=None)
        p.add_argument("--calibration", default=None)
        if name == "wz":
            p.add_argument("--sphere", default=None)
            p.add_argument("--grid-refine", type=int, default=0)
        if name in ("mickelsson", "transgress"):
            p.add_argument("--check", default=None)
        if name == "transgress":
            p.add_argument("--form", default="poincare")
    return parser


def _validate_config(args):
    n = args.grid
    if args.command == "calibrate":
        return
    if n < 64 or (n & (n - 1)) != 0:
        raise UsageError("--grid must be a power of two and at least 64")


def _merge_value_flags(argv):
    """Join '--params -1,0,1' into '--params=-1,0,1' for argparse."""
    out = []
    i = 0
    while i < len(argv):
        arg = argv[i]
        if arg == "--params" and i + 1 < len(argv):
            out.append(f"--params={argv[i + 1]}")
            i += 2
            continue
        out.append(arg)
        i += 1
    return out


def run(argv=None):
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    argv = _merge_value_flags(list(argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0,) else 0
    if not args.command:
        parser.print_help()
        return 1
    try:
        _validate_config(args)
        checks, verdict = BATTERIES[args.command](args)
    except (UsageError, SchemaError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except GerbelabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    report = {
        "tool_version": TOOL_VERSION,
        "config": {
            "command": args.command,
            "params": getattr(args, "params", None),
            "family": getattr(args, "family", None),
            "grid": args.grid,
            "trials": args.trials,
            "seed": args.seed,
        },
        "checks": checks,
    }
    if verdict is not None:
        report["verdict"] = verdict
    body = json.dumps(report, sort_keys=True, indent=2)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            f.write(body + "\n")
    print(body)
    return 0 if all(c["pass"] for c in checks) else 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
