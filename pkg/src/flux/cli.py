"""Command-line frontend.

Commands print deterministic JSON with sorted keys; ``theta verify`` and
``verify-all`` print one line per check unless asked for JSON.  Exit codes: 0 when every check passes, 1 when any
fails, 2 for bad options or configuration.
"""
from __future__ import annotations

import json
import sys
from fractions import Fraction

import click

from .acceptance import RunConfig, jsonable, reports_json, run_all, summary_line
from .errors import ConfigError, FluxError


class RationalType(click.ParamType):
    name = "p/q"

    def convert(self, value, param, ctx):
        if isinstance(value, Fraction):
            return value
        try:
            return Fraction(str(value))
        except (ValueError, ZeroDivisionError):
            self.fail(f"{value!r} is not a rational number", param, ctx)


class PositiveRational(RationalType):
    def convert(self, value, param, ctx):
        q = super().convert(value, param, ctx)
        if q <= 0:
            self.fail(f"{value!r} must be positive", param, ctx)
        return q


RATIONAL = RationalType()
POSITIVE = PositiveRational()


def _emit(doc, ok: bool = True):
    click.echo(json.dumps(jsonable(doc), indent=2, sort_keys=True))
    sys.exit(0 if ok else 1)


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
def cli():
    """Exact computations on the two-vertex quiver algebra, its deformations,
    and the torus mirror."""


# ---------------------------------------------------------------------------
# theta


@cli.group()
def theta():
    """Theta series identities and the unit torus quartic."""


@theta.command("verify")
@click.option("--identity", "names", multiple=True,
              help="Identity to check (repeatable); default all.")
@click.option("--hprec", type=POSITIVE, default=Fraction(10), show_default=True)
@click.option("--twindow", type=click.IntRange(min=1), default=14, show_default=True)
@click.option("--json", "as_json", is_flag=True, help="Full JSON instead of one line per identity.")
def theta_verify(names, hprec, twindow, as_json):
    """Check theta series identities to the given precision."""
    from .theta import IDENTITIES, theta_identity_check

    for n in names:
        if n not in IDENTITIES:
            raise click.BadParameter(f"unknown identity {n!r}; choose from {', '.join(IDENTITIES)}",
                                     param_hint="--identity")
    results = [theta_identity_check(n, hprec, twindow) for n in (names or IDENTITIES)]
    ok = all(r["pass"] for r in results)
    if as_json:
        _emit({"hprec": hprec, "twindow": twindow, "results": results, "pass": ok}, ok)
    for r in results:
        click.echo(f"{'PASS' if r['pass'] else 'FAIL'} {r['identity']}")
    sys.exit(0 if ok else 1)


@theta.command("p")
@click.option("--hprec", type=POSITIVE, default=Fraction(6), show_default=True)
def theta_p(hprec):
    """The five coefficients of the unit torus quartic."""
    from .theta import unit_torus_polynomial

    p = unit_torus_polynomial(hprec)
    _emit({"hprec": hprec, "monomials": [f"v1^{a} v2^{4 - a}" for a in range(5)],
           "coefficients": list(p.coeffs)})


# ---------------------------------------------------------------------------
# hh


@cli.group()
def hh():
    """Hochschild cohomology and Koszulness of Q."""


@hh.command("table")
@click.option("--imax", type=click.IntRange(min=0), default=4, show_default=True)
@click.option("--jmin", type=int, default=-2, show_default=True)
@click.option("--jmax", type=int, default=2, show_default=True)
@click.option("--direct", is_flag=True, help="Also compute from the reduced cochain complex.")
def hh_table_cmd(imax, jmin, jmax, direct):
    """Bigraded HH dimensions of Q."""
    from .quiver_hh import formal_structure, hh_direct, hh_table, quiver_q

    if jmin > jmax:
        raise click.BadParameter("jmin must not exceed jmax", param_hint="--jmin")
    Q = quiver_q()
    table = hh_table(Q, imax, jmin, jmax)
    doc = {"table": table}
    ok = True
    if direct:
        ops = formal_structure(Q)
        other = {(i, j): hh_direct(ops, i + j, i=i) for (i, j) in table}
        doc["direct"] = other
        doc["agree"] = ok = other == table
    _emit(doc, ok)


@hh.command("koszul-check")
@click.option("--dmax", type=click.IntRange(min=1), default=8, show_default=True)
@click.option("--doubled", is_flag=True, help="Use the grading-doubled algebra.")
def hh_koszul_check(dmax, doubled):
    """Koszul dual sanity checks up to a degree bound."""
    from .quiver_hh import koszul_acyclicity, quiver_q

    Q = quiver_q()
    r = koszul_acyclicity(Q.doubled() if doubled else Q, dmax)
    _emit({"dmax": dmax, "doubled": doubled, "koszul": r.koszul, "exact": r.exact,
           "one_sided_exact": r.printed_exact}, r.koszul)


# ---------------------------------------------------------------------------
# qp


def _quartic(spec: str, hprec):
    from .theta import unit_torus_polynomial

    if spec == "unit":
        return unit_torus_polynomial(hprec)
    if spec == "zero":
        return [0] * 5
    try:
        coeffs = [Fraction(c) for c in spec.split(",")]
    except ValueError:
        raise click.BadParameter("expected unit, zero or five comma-separated rationals",
                                 param_hint="--p") from None
    if len(coeffs) != 5:
        raise click.BadParameter("a quartic needs five coefficients", param_hint="--p")
    return coeffs


@cli.group()
def qp():
    """The A-infinity deformation Q_p and cones over it."""


@qp.command("build")
@click.option("--p", "pspec", default="unit", show_default=True,
              help="unit, zero, or c0,c1,c2,c3,c4 (c_a multiplies v1^a v2^(4-a)).")
@click.option("--arity", type=click.IntRange(min=3), default=7, show_default=True)
@click.option("--hprec", type=POSITIVE, default=Fraction(6), show_default=True)
def qp_build(pspec, arity, hprec):
    """Build Q_p from a quartic and check the A-infinity relations."""
    from .ainf_tw import build_Qp

    s, res = build_Qp(_quartic(pspec, hprec), arity)
    ok = not any(res.values())
    _emit({"p": pspec, "arity": arity,
           "residuals": {d: {"count": r.count, "norm": r.norm, "worst": r.worst}
                         for d, r in res.items()},
           "nonzero_operations": sorted(s.ops.arities()), "pass": ok}, ok)


@qp.command("cone")
@click.option("--u", "u_exp", type=RATIONAL, default=Fraction(1, 3), show_default=True,
              help="Exponent e of the point u = h^e.")
@click.option("--check", "checks", default="split,ring,gamma", show_default=True)
@click.option("--hprec", type=POSITIVE, default=Fraction(6), show_default=True)
def qp_cone(u_exp, checks, hprec):
    """Cone object at the point u = h^e, with structure checks."""
    from .ainf_tw import ConeObject, build_qp, cone_endo_ring, gamma_report, splits
    from .novikov import NovikovScalar
    from .theta import theta_eval, unit_torus_polynomial

    wanted = [c for c in checks.split(",") if c]
    bad = set(wanted) - {"split", "ring", "gamma", "products"}
    if bad:
        raise click.BadParameter(f"unknown checks {sorted(bad)}", param_hint="--check")
    u = NovikovScalar.monomial(1, u_exp)
    S = build_qp(unit_torus_polynomial(hprec))
    C = ConeObject(S, (theta_eval(2, u, hprec, 0), theta_eval(2, u, hprec, 1)))
    doc, ok = {"u": u, "p_of_v": C.p_of_v()}, True
    if "split" in wanted:
        s = splits(C)
        doc["split"] = {"splits": s.splits, "idempotent_exact": s.idempotent_exact,
                        "orthogonal": s.orthogonal, "coefficient": s.coefficient}
        ok &= s.splits and s.idempotent_exact and s.orthogonal
    if "ring" in wanted:
        R = cone_endo_ring(C)
        doc["ring"] = {"t_squared_is_pv": R.t_squared_is_pv, "local": R.local}
        ok &= R.t_squared_is_pv
    if "gamma" in wanted:
        doc["gamma"] = g = gamma_report(C)
        ok &= all(g.values())
    if "products" in wanted:
        from .ainf_tw import cone_product_report
        doc["products"] = r = cone_product_report(C)
        ok &= all(v for k, v in r.items() if not k.endswith("coefficient"))
    doc["pass"] = ok
    _emit(doc, ok)


# ---------------------------------------------------------------------------
# family


@cli.group()
def family():
    """The cone family over the mirror curve."""


@family.command("verify")
@click.option("--hprec", type=POSITIVE, default=Fraction(6), show_default=True)
@click.option("--with-g1", is_flag=True, help="Also compare both first-order Hochschild generators.")
def family_verify(hprec, with_g1):
    """Check the cone family and its deformation class."""
    from .family import deformation_class_check

    r = deformation_class_check(hprec)
    doc = {"hprec": hprec, **r}
    ok = r["pass"]
    if with_g1:
        from fractions import Fraction as F

        from .ainf_tw import cone, gamma_report
        g = gamma_report(cone((F(3), F(2)), [1, 2, 3, 5, 7]))
        doc["generators"] = g
        ok &= all(g.values())
    click.echo(("PASS" if ok else "FAIL") + " deformation class", err=True)
    _emit(doc, ok)


# ---------------------------------------------------------------------------
# torus


PRODUCTS = ["z2w1", "z2w2", "y1z2", "mu3-white", "mu3-black", "mu4"]


@cli.group()
def torus():
    """Polygon counts on the two-torus."""


@torus.command("count")
@click.option("--product", type=click.Choice(PRODUCTS), required=True)
@click.option("--m0", type=RATIONAL, default=Fraction(1, 3), show_default=True)
@click.option("--hprec", type=POSITIVE, default=Fraction(10, 4), show_default=True)
@click.option("--twindow", type=click.IntRange(min=1), default=8, show_default=True)
@click.option("--witnesses", type=click.Path(dir_okay=False, writable=True),
              help="Write every counted polygon to this JSON file.")
def torus_count_cmd(product, m0, hprec, twindow, witnesses):
    """Count polygons contributing to one product."""
    from .torus_count import count_product

    series, wit = count_product(product, m0, hprec, twindow)
    if witnesses:
        with open(witnesses, "w") as fh:
            json.dump([w.to_json() for w in wit], fh, indent=2, sort_keys=True)
    _emit({"product": product, "m0": m0, "hprec": hprec, "twindow": twindow,
           "series": {k: v.to_json() if hasattr(v, "to_json") else v for k, v in series.items()},
           "text": {k: v for k, v in series.items()}, "polygons": len(wit)})


@torus.command("identities")
@click.option("--m0", type=RATIONAL, default=Fraction(1, 3), show_default=True)
@click.option("--hprec", type=POSITIVE, default=Fraction(10, 4), show_default=True)
def torus_identities_cmd(m0, hprec):
    """Check the torus product identities."""
    from .torus_count import torus_identities

    r = torus_identities(m0, hprec)
    _emit({k: v for k, v in r.items() if k != "series"}, r["pass"])


# ---------------------------------------------------------------------------
# extensions


@cli.group()
def ext():
    """Mapping tori, Clifford idempotents and the toy quantum ring."""


@ext.command("mt")
@click.option("--d0", type=int, default=0, show_default=True)
@click.option("--d1", type=int, default=2, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True,
              help="Seed for the randomized differential checks.")
def ext_mt(d0, d1, seed):
    """Mapping-torus checks over the point, exterior and interval bases."""
    from .extensions import (exterior_base, interval_base, les_h0_dimension, mt_checks,
                             mt_h0_dimension, point_base)

    bases = {"point": point_base(), "exterior": exterior_base(Fraction(2)),
             "interval": interval_base()}
    checks = {n: mt_checks(b, seed=seed, trials=20) for n, b in bases.items()}
    les = {n: les_h0_dimension(b) for n, b in bases.items()}
    ok = all(all(c.values()) for c in checks.values())
    _emit({"d0": d0, "d1": d1, "h0_dimension": mt_h0_dimension(d0, d1),
           "checks": checks, "les_h0_identity": les, "pass": ok}, ok)


@ext.command("clifford")
@click.option("--r", "r", type=click.IntRange(min=2), default=4, show_default=True)
def ext_clifford(r):
    """Clifford relations and idempotents in rank r."""
    from .extensions import clifford_confluence, clifford_idempotents, hessian_matches_clifford

    if r % 2:
        raise click.BadParameter("minimal idempotents need r even", param_hint="--r")
    order = 12 if r == 4 else None
    cl = clifford_idempotents(r, order) if order else clifford_idempotents(r)
    doc = {k: v for k, v in cl.items() if k != "idempotents"}
    doc["confluent"] = clifford_confluence(r)
    if r == 4:
        doc["hessian_matches"] = hessian_matches_clifford(r)["pass"]
    ok = all(doc[k] for k in ("idempotent", "orthogonal", "sum_is_one", "confluent"))
    doc["pass"] = ok
    _emit(doc, ok)


@ext.command("qh")
@click.option("--r", "r", type=click.IntRange(min=2), default=4, show_default=True)
def ext_qh(r):
    """The toy quantum ring in rank r."""
    from .extensions import toy_quantum_checks

    res = toy_quantum_checks(r)
    _emit(res, res["pass"])


# ---------------------------------------------------------------------------
# acceptance


@cli.command("verify-all")
@click.option("--json", "json_path", type=click.Path(dir_okay=False, writable=True),
              help="Write the full report to this file ('-' for stdout).")
@click.option("--hprec", type=POSITIVE, default=Fraction(10), show_default=True)
@click.option("--twindow", type=click.IntRange(min=1), default=14, show_default=True)
@click.option("--only", multiple=True, help="Run only this criterion id (repeatable).")
@click.option("--jobs", type=click.IntRange(min=1), default=1, show_default=True)
def verify_all(json_path, hprec, twindow, only, jobs):
    """Run every acceptance criterion in order."""
    try:
        cfg = RunConfig(h_precision=hprec, t_window=twindow, only=tuple(only), jobs=jobs)
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(2)
    reports = run_all(cfg)
    text = reports_json(reports, cfg)
    if json_path == "-":
        click.echo(text)
    else:
        for r in reports:
            click.echo(summary_line(r))
        if json_path:
            with open(json_path, "w") as fh:
                fh.write(text + "\n")
    sys.exit(0 if all(r.ok for r in reports) else 1)


def run(argv=None) -> int:
    """Run the command line and return its exit code."""
    try:
        cli.main(args=argv, prog_name="flux", standalone_mode=False)
    except SystemExit as exc:
        return int(exc.code or 0)
    except click.UsageError as exc:
        exc.show()
        return 2
    except click.Abort:
        return 2
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        return 2
    except FluxError as exc:
        click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
        return 1
    return 0


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":  # pragma: no cover
    main()
