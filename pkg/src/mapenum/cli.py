"""mapenum command line.

Exit codes: 0 success, 2 invalid input, 3 verification failure, 4 resource cap.
"""

from __future__ import annotations

import csv
import io
import json
import sys
from fractions import Fraction

import click
import mpmath

from . import center_manifold as cmm
from . import conjectures as cj
from . import genfun as gf
from . import oracle as orc
from . import painleve as pl
from .errors import CapExceededError, MapEnumError, QuadratureError
from .exact import to_rational

EXIT_VALIDATION = 2
EXIT_VERIFY = 3
EXIT_CAP = 4

ROUTES = ("oracle", "recurrence", "band", "hypergeom", "g5-closed-form", "trivalent")
ORBIT_SYSTEMS = ("dp1", "dp1-sfu", "mixed", "mixed-sfuzw", "qrt-cubic", "planar-restricted")
CM_ALIASES = {"dp1": "dp1-sfu", "mixed": "mixed-sfuzw"}
CM_SYSTEMS = tuple(sorted(pl.SYSTEMS)) + tuple(CM_ALIASES)
SUITES = ("conjecture1", "bernoulli", "commutation", "r-vector", "route-equivalence", "cm-match", "interlacing")


def parse_range(text: str | None, default: tuple[int, int] | None = None) -> list[int]:
    """'5' -> [5], '1..12' -> [1..12], '2,4,6' -> [2, 4, 6]."""
    if text is None:
        if default is None:
            return []
        return list(range(default[0], default[1] + 1))
    out = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..")
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    return out


def _fail(msg: str, code: int = EXIT_VALIDATION):
    click.echo(f"error: {msg}", err=True)
    sys.exit(code)


def _emit(text: str, output: str | None):
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=not text.endswith("\n"))


def _table(rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rows, indent=2) + "\n"
    if not rows:
        return ""
    buf = io.StringIO()
    cols = list(rows[0])
    for r in rows:
        cols += [k for k in r if k not in cols]
    w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


@click.group()
@click.version_option(package_name="mapenum")
def main():
    """Exact map enumeration, recurrence dynamics and identity checks."""


# ---------------------------------------------------------------------------
# count
# ---------------------------------------------------------------------------


def _route_counts(route: str, g: int | None, js: list[int], nu, seed, valences, connected, cap, workers):
    """{(g, j): labeled count} for one route."""
    out = {}
    if route == "oracle":
        sets = [tuple(valences)] if valences else [tuple([int(2 * nu)] * j) for j in js]
        if not valences and Fraction(2 * nu).denominator != 1:
            raise MapEnumError("oracle needs integer valence 2*nu")
        for vals in sets:
            hist = orc.enumerate_matchings_by_genus(vals, connected_only=connected, cap=cap, workers=workers)
            for genus, c in hist.counts.items():
                if g is None or genus == g:
                    out[(genus, len(vals))] = Fraction(c)
        return out
    if route in ("recurrence", "band", "hypergeom"):
        if seed is None:
            raise click.UsageError(f"route '{route}' needs generating-function data (--seed FILE)")
        data = gf.GeneratingFunctionData.load(seed)
        for j in js:
            if route == "hypergeom":
                out[(data.g, j)] = gf.hypergeom_count(data, j)
            elif route == "recurrence":
                out[(data.g, j)] = gf.count_from_q(gf.q_orbit(data.q1(), j))
            else:
                out[(data.g, j)] = gf.count_contraction(gf.band_seed(data), j)
        return out
    if route == "g5-closed-form":
        for j in js:
            out[(5, j)] = gf.closed_form_g5(j)
        return out
    if route == "trivalent":
        genera = [g] if g is not None else [0, 1, 2]
        for genus in genera:
            counts = gf.trivalent_counts(genus, max(js))
            for j in js:
                out[(genus, j)] = counts[j - 1]
        return out
    raise click.UsageError(f"unknown route {route}")


@main.command()
@click.option("--route", "routes", multiple=True, type=click.Choice(ROUTES), required=True,
              help="Counting route; repeat to cross-check routes.")
@click.option("--genus", type=int, default=None)
@click.option("--j", "jspec", default=None, help="Vertex counts: 5, 1..12 or 2,4,6.")
@click.option("--nu", default=None, help="Half the valence (2 for 4-valent, 3/2 for trivalent).")
@click.option("--valences", default=None, help="Oracle vertex valences, e.g. 4 or 3,3.")
@click.option("--connected/--all-pairings", default=True)
@click.option("--seed", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Generating-function data JSON (genus, nu, C, q0, V1_band).")
@click.option("--unlabeled", is_flag=True, help="Divide by (2 nu)^j j!.")
@click.option("--cap", type=int, default=orc.DEFAULT_DART_CAP, show_default=True, help="Oracle dart cap.")
@click.option("--workers", type=int, default=1)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv")
@click.option("--output", "-o", default=None)
def count(routes, genus, jspec, nu, valences, connected, seed, unlabeled, cap, workers, fmt, output):
    """Map counts N(g, j) by one or more routes."""
    try:
        vals = [int(v) for v in valences.split(",")] if valences else None
        if "trivalent" in routes and nu is None:
            nu = Fraction(3, 2)
        elif "g5-closed-form" in routes and nu is None:
            nu = Fraction(2)
        nu = to_rational(nu) if nu is not None else None
        if vals:
            js = [len(vals)]
            if nu is None and len(set(vals)) == 1:
                nu = Fraction(vals[0], 2)
        else:
            js = parse_range(jspec, (1, 8))
        if seed is not None and nu is None:
            nu = Fraction(gf.GeneratingFunctionData.load(seed).nu)
        if not js or min(js) < 1:
            raise click.UsageError("--j must name vertex counts >= 1")
        if "oracle" in routes and vals is None and nu is None:
            raise click.UsageError("oracle route needs --valences or --nu")
        results = {r: _route_counts(r, genus, js, nu, seed, vals, connected, cap, workers) for r in routes}
    except CapExceededError as exc:
        _fail(str(exc), EXIT_CAP)
    except click.UsageError:
        raise
    except (MapEnumError, ValueError, KeyError) as exc:
        _fail(str(exc))
    keys = sorted(set().union(*[set(v) for v in results.values()]))
    rows = []
    mismatch = False
    for g_, j in keys:
        vals_here = {r: results[r].get((g_, j)) for r in routes}
        first = next(v for v in vals_here.values() if v is not None)
        row = {"genus": g_, "j": j, "labeled_count": str(first)}
        if nu is not None:
            row["unlabeled_count"] = str(orc.labeled_to_unlabeled(first, j, nu))
        if len(routes) > 1:
            for r, v in vals_here.items():
                row[r] = "" if v is None else str(v)
            present = [v for v in vals_here.values() if v is not None]
            equal = len(set(present)) == 1 and len(present) == len(routes)
            row["cross_check"] = "equal" if equal else "unequal"
            mismatch |= not equal
        if unlabeled and nu is not None:
            row["count"] = row["unlabeled_count"]
        rows.append(row)
    _emit(_table(rows, fmt), output)
    if mismatch:
        sys.exit(EXIT_VERIFY)


# ---------------------------------------------------------------------------
# series
# ---------------------------------------------------------------------------


@main.command()
@click.option("--kind", type=click.Choice(["z0", "trivalent-z0", "eg", "trivalent-eg"]), default="z0")
@click.option("--nu", type=int, default=2)
@click.option("--genus", type=int, default=0)
@click.option("--order", type=int, default=8)
@click.option("--seed", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv")
@click.option("--output", "-o", default=None)
def series(kind, nu, genus, order, seed, fmt, output):
    """Taylor coefficients in t of z0 or e_g."""
    try:
        if kind == "z0":
            s = gf.z0_series(nu, order)
        elif kind == "trivalent-z0":
            s = gf.trivalent_z0_series(order)
        elif kind == "trivalent-eg":
            s = gf.trivalent_eg_series(genus, order)
        else:
            if seed is None:
                raise click.UsageError("--kind eg needs --seed FILE")
            data = gf.GeneratingFunctionData.load(seed)
            s = gf.eg_eval(data, gf.z0_series(data.nu, order))
    except click.UsageError:
        raise
    except (MapEnumError, ValueError) as exc:
        _fail(str(exc))
    rows = [{"k": k, "coefficient": str(c)} for k, c in enumerate(s.coeffs)]
    _emit(_table(rows, fmt), output)


# ---------------------------------------------------------------------------
# orbit
# ---------------------------------------------------------------------------


def _params(N, r, t3, t4, system):
    if system in ("dp1", "dp1-sfu"):
        return pl.WeightParams.quartic(N, r)
    return pl.WeightParams(N=N, t3=t3, t4=t4)


def _val(text):
    if text is None:
        return None
    return pl._num(text)


@main.command()
@click.option("--system", type=click.Choice(ORBIT_SYSTEMS), required=True)
@click.option("--N", "N", default="1")
@click.option("--r", default="1", help="Quartic coefficient (dp1 systems).")
@click.option("--t3", default="1")
@click.option("--t4", default="1")
@click.option("--steps", type=int, default=100)
@click.option("--precision", type=int, default=None, envvar="MAPENUM_PRECISION",
              help="Digits; 800 for Freud orbits, 64 otherwise. Env: MAPENUM_PRECISION.")
@click.option("--seed-file", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Orbit JSON whose first state is the seed.")
@click.option("--x", "x0", default=None)
@click.option("--y", "y0", default=None)
@click.option("--z", "z0", default=None)
@click.option("--w", "w0", default=None)
@click.option("--s", "s0", default=None)
@click.option("--f", "f0", default=None)
@click.option("--u", "u0", default=None)
@click.option("--a", "a0", default=None)
@click.option("--n", "n0", type=int, default=None)
@click.option("--freeze-n", type=int, default=None, help="qrt-cubic: hold the index fixed.")
@click.option("--cm", "cm_file", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Center-manifold JSON; appends a distance column.")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv")
@click.option("--output", "-o", default=None)
def orbit(system, N, r, t3, t4, steps, precision, seed_file, x0, y0, z0, w0, s0, f0, u0, a0, n0,
          freeze_n, cm_file, fmt, output):
    """Iterate a recurrence; the dp1/mixed default seed is the Freud orbit."""
    if precision is not None and precision < 16:
        raise click.BadParameter("precision must be at least 16 digits", param_hint="--precision")
    try:
        if system == "planar-restricted":
            if s0 is None or f0 is None:
                raise click.UsageError("planar-restricted needs --s and --f")
            pts, events = pl.planar_orbit(_val(s0), _val(f0), steps)
            rows = [{"n": k, "s": str(s), "f": str(f)} for k, (s, f) in enumerate(pts)]
            if fmt == "json":
                _emit(json.dumps({"system": system, "states": rows, "events": events}, indent=2) + "\n", output)
            else:
                _emit(_table(rows, "csv"), output)
            for ev in events:
                click.echo(f"singularity: {ev['denominator']} = 0 after step {ev['n']}", err=True)
            return
        p = _params(N, r, t3, t4, system)
        manual = any(v is not None for v in (x0, s0, a0))
        prec = precision
        if seed_file:
            _, seed, prec_file = pl.load_seed(seed_file)
            prec = prec or prec_file
        elif manual:
            prec = prec or pl.EXPLORE_DPS
            with mpmath.workdps(prec):
                seed = _manual_seed(system, x0, y0, z0, w0, s0, f0, u0, a0, n0)
        else:
            prec = prec or pl.FREUD_DPS
            if system == "qrt-cubic":
                raise click.UsageError("qrt-cubic has no canonical seed; pass --a, --x and --n")
            kind = "quartic" if system.startswith("dp1") else "mixed"
            seed = pl.freud_seed(p, prec, kind)
            if system == "dp1-sfu":
                with mpmath.workdps(prec):
                    seed = pl.sfu_transform(seed, p)
            elif system == "mixed-sfuzw":
                with mpmath.workdps(prec):
                    seed = pl.mixed_transform(seed, p)
        if system == "qrt-cubic" and freeze_n is not None:
            states = [seed]
            events = []
            for _ in range(steps):
                try:
                    states.append(pl.qrt_autonomous_step(states[-1], p, freeze_n))
                except pl.PoleError as exc:
                    events.append({"n": states[-1].n, "event": "pole", "denominator": exc.denominator})
                    break
            rec = pl.OrbitRecord(system, states, prec, p.snapshot(), events)
        else:
            rec = pl.iterate_orbit(system, seed, p, steps, prec)
        extra = None
        if cm_file:
            cm = cmm.CMExpansion.from_json(open(cm_file).read())
            comp = rec
            if system in ("dp1", "mixed"):
                comp = pl.to_compactified(rec, p)
            extra = {"cm_distance": cmm.orbit_distance(comp, cm, p)}
    except QuadratureError as exc:
        _fail(f"seed computation failed: {exc}")
    except click.UsageError:
        raise
    except (MapEnumError, ValueError, KeyError) as exc:
        _fail(str(exc))
    if fmt == "json":
        text = rec.to_json()
        if extra:
            data = json.loads(text)
            data["cm_distance"] = [mpmath.nstr(v, 20) for v in extra["cm_distance"]]
            text = json.dumps(data, indent=2)
        _emit(text + "\n", output)
    else:
        _emit(rec.to_csv(extra), output)
    for ev in rec.events:
        click.echo(f"singularity: {ev['denominator']} = 0 at n = {ev['n']}", err=True)


def _manual_seed(system, x0, y0, z0, w0, s0, f0, u0, a0, n0):
    n0 = 1 if n0 is None else n0
    zero = Fraction(0)

    def v(t):
        return zero if t is None else _val(t)

    if system == "dp1":
        return pl.DP1State(v(x0), v(y0), n0)
    if system == "dp1-sfu":
        return pl.SFUState(v(s0), v(f0), v(u0), n0)
    if system == "mixed":
        return pl.MixedState(v(x0), v(y0), v(z0), v(w0), n0)
    if system == "mixed-sfuzw":
        return pl.MixedSFUZWState(v(s0), v(f0), v(u0), v(z0), v(w0), n0)
    if system == "qrt-cubic":
        return pl.QRTState(v(a0), v(x0), n0)
    raise click.UsageError(f"no manual seed for {system}")


# ---------------------------------------------------------------------------
# center manifold
# ---------------------------------------------------------------------------


@main.command()
@click.option("--system", type=click.Choice(CM_SYSTEMS), default="dp1-sfu")
@click.option("--order", type=int, default=4)
@click.option("--numeric", is_flag=True, help="Substitute N, r/t3/t4 instead of keeping gamma, zeta, eta.")
@click.option("--N", "N", default="1")
@click.option("--r", default="1")
@click.option("--t3", default="1")
@click.option("--t4", default="1")
@click.option("--invert", type=int, default=None, help="Also expand x_n to this order in n^(-1/2) (CSV).")
@click.option("--precision", type=int, default=50)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="json")
@click.option("--output", "-o", default=None)
def cm(system, order, numeric, N, r, t3, t4, invert, precision, fmt, output):
    """Center-manifold expansion at the fixed point at infinity."""
    system = CM_ALIASES.get(system, system)
    try:
        p = _params(N, r, t3, t4, "dp1" if system == "dp1-sfu" else "mixed")
        if invert is not None:
            exp = cmm.cm_expand(system, max(order, invert + 1), params=p.symbols())
            _emit(cmm.invert_to_n(exp, p, invert, precision).to_csv(), output)
            return
        params = p.symbols() if numeric else None
        exp = cmm.cm_expand(system, order, params=params)
    except (MapEnumError, ValueError) as exc:
        _fail(str(exc))
    _emit((exp.to_json() + "\n") if fmt == "json" else exp.to_csv(), output)


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


@main.command()
@click.option("--suite", type=click.Choice(SUITES), required=True)
@click.option("--gmax", type=int, default=None)
@click.option("--g", "gspec", default=None, help="Genus range, e.g. 2..7.")
@click.option("--lmax", type=int, default=20)
@click.option("--jmax", type=int, default=None)
@click.option("--samples", type=int, default=50)
@click.option("--rng-seed", type=int, default=0)
@click.option("--system", type=click.Choice(CM_SYSTEMS), default="dp1-sfu")
@click.option("--order", type=int, default=4)
@click.option("--polys", type=click.Path(exists=True, dir_okay=False), default=None,
              help="JSON list of coefficient lists (highest degree first).")
@click.option("--full", is_flag=True, help="Include every case in the report.")
@click.option("--output", "-o", default=None)
def verify(suite, gmax, gspec, lmax, jmax, samples, rng_seed, system, order, polys, full, output):
    """Run a verification suite; exit 3 on any failing case."""
    system = CM_ALIASES.get(system, system)
    try:
        if suite == "conjecture1":
            rep = cj.conjecture1_check(lmax, gmax or 20, jmax or 20)
        elif suite == "bernoulli":
            rep = cj.cg_bernoulli_check(gmax or 100)
        elif suite == "commutation":
            rep = cj.commutation_check(parse_range(gspec, (2, 7)), jmax or 10)
        elif suite == "r-vector":
            rep = cj.r_vector_check(parse_range(gspec, (2, 7)), jmax or 10)
        elif suite == "route-equivalence":
            rep = cj.route_equivalence_check(parse_range(gspec, (2, 5)), jmax or 12, samples, rng_seed)
        elif suite == "cm-match":
            rep = cj.cm_match_check(system, order)
        else:
            if polys is None:
                raise click.UsageError("interlacing needs --polys FILE")
            rep = cj.interlacing_check(cj.load_polynomials(open(polys).read()))
    except click.UsageError:
        raise
    except (MapEnumError, ValueError) as exc:
        _fail(str(exc))
    _emit(rep.to_json(full) + "\n", output)
    if not rep.passed:
        sys.exit(EXIT_VERIFY)


# ---------------------------------------------------------------------------
# ratios
# ---------------------------------------------------------------------------


def _read_counts(path: str) -> dict[int, Fraction]:
    with open(path) as fh:
        return {int(row["j"]): to_rational(row["count"]) for row in csv.DictReader(fh)}


@main.command()
@click.option("--counts", type=click.Path(exists=True, dir_okay=False), required=True,
              help="CSV with columns j,count.")
@click.option("--reference", type=click.Path(exists=True, dir_okay=False), required=True,
              help="CSV with columns j,count for the comparison sequence.")
@click.option("--precision", type=int, default=30)
@click.option("--output", "-o", default=None)
def ratios(counts, reference, precision, output):
    """Ratio data N(j)/N_ref(j) for plotting."""
    rows = []
    for j, q in cj.count_ratios(_read_counts(counts), _read_counts(reference)):
        with mpmath.workdps(precision):
            dec = mpmath.nstr(mpmath.mpf(q.numerator) / q.denominator, precision)
        rows.append({"j": j, "ratio": str(q), "decimal": dec})
    _emit(_table(rows, "csv"), output)


if __name__ == "__main__":
    main()
