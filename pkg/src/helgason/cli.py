"""Command-line front end.

Subcommands cover the pipeline stages: ``phantom`` samples a field on a
dense grid, ``radon`` writes sinogram CSVs, ``bargmann`` evaluates the
weighted transform directly or from plane-integral data, ``stability``
runs one end-to-end experiment and emits its report plus plot data, and
``verify`` runs the acceptance suites.

Exit codes are stable across commands: 0 success, 1 I/O failure,
2 validation failure, 3 regression (failed acceptance or calibration
mismatch).  Reports carry no timestamps; identical inputs against the same
constants version produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from .bargmann import ComplexPoint, sb_from_radon_weighted, sb_weighted
from .errors import CalibrationError, ValidationError
from .phantoms import PhantomSpec, make_phantom
from .radon import Sinogram, radon
from .stability import ExperimentConfig, run_experiment

EXIT_OK = 0
EXIT_IO = 1
EXIT_VALIDATION = 2
EXIT_REGRESSION = 3

_MAX_EXP = 709.0  # largest exponent exp() takes to a finite double


def _load_json(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON: {exc}") from exc


def _parse_coords(text: str) -> np.ndarray:
    try:
        return np.asarray([float(v) for v in text.split(",")], dtype=float)
    except ValueError as exc:
        raise ValidationError(f"malformed coordinate list {text!r}") from exc


def cmd_phantom(args) -> int:
    data = _load_json(args.spec)
    if isinstance(data, dict) and "phantom" in data:
        # a full experiment config: honor its hypotheses before reuse
        try:
            lam, p = float(data["lambda"]), float(data["p"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"malformed experiment config: {exc}") from exc
        if lam * p >= 1.0:
            raise ValidationError(
                f"hypothesis violation: lambda * p must be < 1, got {lam * p}"
            )
        spec = PhantomSpec.from_json_dict(data["phantom"])
    else:
        spec = PhantomSpec.from_json_dict(data)
    f = make_phantom(spec)
    n = args.n
    if n < 2:
        raise ValidationError(f"grid needs at least 2 samples per axis, got {n}")
    axes = [
        np.linspace(c - f.support_radius, c + f.support_radius, n)
        for c in f.support_center
    ]
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=1)
    vals = f(pts)
    header = ",".join(f"x{k + 1}" for k in range(f.dim)) + ",value"
    body = np.column_stack([pts, vals])
    np.savetxt(args.out, body, fmt="%.17g", delimiter=",",
               header=header, comments="")
    return EXIT_OK


def cmd_radon(args) -> int:
    spec = PhantomSpec.from_json_dict(_load_json(args.spec))
    f = make_phantom(spec)
    y0 = _parse_coords(args.y0)
    if args.ndir is not None and args.ndir < 1:
        raise ValidationError(f"need at least one direction, got {args.ndir}")
    g = radon(f, y0, n_s=args.ns, n_dir=args.ndir, s_max=args.smax)
    g.write_csv(args.out)
    return EXIT_OK


def cmd_bargmann(args) -> int:
    if not (args.h > 0):
        raise ValidationError(f"h must be positive, got {args.h}")
    h = float(args.h)
    if args.mode == "direct":
        if not args.field:
            raise ValidationError("--mode direct requires --field")
        f = make_phantom(PhantomSpec.from_json_dict(_load_json(args.field)))
        dim = f.dim
    else:
        if not args.sino:
            raise ValidationError("--mode radon requires --sino")
        g = Sinogram.read_csv(args.sino)
        dim = g.dim

    with open(args.points, "r", encoding="utf-8") as fh:
        lines = [ln for ln in fh.read().splitlines() if ln.strip()]

    rows = []
    for ln in lines:
        try:
            doc = json.loads(ln)
            re = np.asarray([float(v) for v in doc["re"]], dtype=float)
            im = np.asarray([float(v) for v in doc["im"]], dtype=float)
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"malformed point line {ln!r}: {exc}") from exc
        if re.shape != (dim,) or im.shape != (dim,):
            raise ValidationError(
                f"point dimension differs from the {dim}-dimensional input"
            )
        zeta = ComplexPoint(re, im)
        if args.mode == "direct":
            wv = sb_weighted(f, zeta, h)
        else:
            wv = sb_from_radon_weighted(g, zeta, h)
        # the unweighted value overflows once |im|^2/2h passes the exponent
        # range; report null there, the weighted value is always finite
        arg = float(im @ im) / (2.0 * h)
        if arg <= _MAX_EXP:
            value = wv * math.exp(arg)
            v_re, v_im = float(value.real), float(value.imag)
            if not (math.isfinite(v_re) and math.isfinite(v_im)):
                v_re = v_im = None
        else:
            v_re = v_im = None
        rows.append({
            "re": [float(v) for v in re],
            "im": [float(v) for v in im],
            "h": h,
            "value_re": v_re,
            "value_im": v_im,
            "weighted_re": float(wv.real),
            "weighted_im": float(wv.imag),
        })
    with open(args.out, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row) + "\n")
    return EXIT_OK


_PLOT_SCRIPT = """\
#!/usr/bin/env python3
\"\"\"Render the stability plot data written next to this script.\"\"\"

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

here = Path(__file__).resolve().parent


def read(name):
    with open(here / name, newline="") as fh:
        return list(csv.DictReader(fh))


point = read("stability_point.csv")
fig, ax = plt.subplots()
for row in point:
    ax.loglog([float(row["abs_log_I"])], [float(row["measured_lp_G"])],
              "o", label="measured")
    ax.loglog([float(row["abs_log_I"])], [float(row["bound_thm25"])],
              "s", label="bound")
ax.set_xlabel("|log I|")
ax.set_ylabel("local p-norm")
ax.legend()
fig.savefig(here / "stability_point.png", dpi=150)

decay = read("decay_curve.csv")
fig, ax = plt.subplots()
inv_h = [1.0 / float(r["h"]) for r in decay]
ax.semilogy(inv_h, [float(r["weighted"]) for r in decay], "o-",
            label="weighted transform")
ax.semilogy(inv_h, [float(r["bound"]) for r in decay], "s--", label="bound")
ax.set_xlabel("1/h")
ax.set_ylabel("magnitude")
ax.legend()
fig.savefig(here / "decay_curve.png", dpi=150)

deconv = read("deconv_curve.csv")
fig, ax = plt.subplots()
hs = [float(r["h"]) for r in deconv]
ax.semilogy(hs, [float(r["measured"]) for r in deconv], "o-", label="measured")
ax.semilogy(hs, [float(r["bound"]) for r in deconv], "s--", label="bound")
ax.set_xlabel("h")
ax.set_ylabel("local p-norm")
ax.legend()
fig.savefig(here / "deconv_curve.png", dpi=150)
"""


def _write_plot_data(rep, plots_dir: Path) -> None:
    plots_dir.mkdir(parents=True, exist_ok=True)
    if rep.I > 0.0 and rep.I != 1.0:
        abs_log_i = abs(math.log(rep.I))
    else:
        abs_log_i = math.inf
    with open(plots_dir / "stability_point.csv", "w", encoding="utf-8") as fh:
        fh.write("abs_log_I,measured_lp_G,bound_thm25\n")
        fh.write(f"{abs_log_i:.17g},{rep.measured_lp_G:.17g},{rep.bound_thm25:.17g}\n")
    with open(plots_dir / "decay_curve.csv", "w", encoding="utf-8") as fh:
        fh.write("h,weighted,bound,admissible\n")
        for row in rep.decay_curve:
            fh.write(f"{row['h']:.17g},{row['weighted']:.17g},"
                     f"{row['bound']:.17g},{int(row['admissible'])}\n")
    with open(plots_dir / "deconv_curve.csv", "w", encoding="utf-8") as fh:
        fh.write("h,measured,bound\n")
        for row in rep.deconv_curve:
            fh.write(f"{row['h']:.17g},{row['measured']:.17g},{row['bound']:.17g}\n")
    with open(plots_dir / "plot_curves.py", "w", encoding="utf-8") as fh:
        fh.write(_PLOT_SCRIPT)


def cmd_stability(args) -> int:
    config = ExperimentConfig.from_json_dict(_load_json(args.config))
    rep = run_experiment(config)
    doc = rep.to_json_dict()
    with open(args.report, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(doc, indent=2) + "\n")
    if args.plots:
        _write_plot_data(rep, Path(args.plots))
    return EXIT_OK


def cmd_verify(args) -> int:
    from . import acceptance

    rep = acceptance.run_suite(args.suite)
    for c in rep["criteria"]:
        status = "PASS" if c["passed"] else "FAIL"
        print(f"criterion {c['id']} ({c['name']}): {status}")
    print(f"suite {rep['suite']}: {'PASS' if rep['passed'] else 'FAIL'} "
          f"(constants {rep['constants_version']})")
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(json.dumps(rep, indent=2) + "\n")
    return EXIT_OK if rep["passed"] else EXIT_REGRESSION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="helgason",
        description="Restricted plane-integral transforms and their stability bounds.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("phantom", help="sample a phantom on a dense grid")
    p.add_argument("--spec", required=True, help="phantom spec JSON (or experiment config)")
    p.add_argument("--out", required=True, help="output CSV path")
    p.add_argument("--n", type=int, default=65, help="samples per axis (default 65)")
    p.set_defaults(func=cmd_phantom)

    p = sub.add_parser("radon", help="write a sinogram CSV")
    p.add_argument("--spec", required=True, help="phantom spec JSON")
    p.add_argument("--y0", required=True, help="reference point, comma separated")
    p.add_argument("--ns", type=int, default=257, help="offset samples (default 257)")
    p.add_argument("--ndir", type=int, default=None, help="direction count")
    p.add_argument("--smax", type=float, default=None, help="offset range override")
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(func=cmd_radon)

    p = sub.add_parser("bargmann", help="evaluate the weighted transform at points")
    p.add_argument("--mode", choices=("direct", "radon"), required=True)
    p.add_argument("--field", help="phantom spec JSON (direct mode)")
    p.add_argument("--sino", help="sinogram CSV (radon mode)")
    p.add_argument("--points", required=True, help="JSONL of {re: [...], im: [...]}")
    p.add_argument("--h", type=float, required=True, help="scale parameter")
    p.add_argument("--out", required=True, help="output JSONL path")
    p.set_defaults(func=cmd_bargmann)

    p = sub.add_parser("stability", help="run one stability experiment")
    p.add_argument("--config", required=True, help="experiment config JSON")
    p.add_argument("--report", required=True, help="report JSON output path")
    p.add_argument("--plots", help="directory for plot data and generator script")
    p.set_defaults(func=cmd_stability)

    p = sub.add_parser("verify", help="run the acceptance suite")
    p.add_argument("--suite", choices=("smoke", "full"), default="smoke")
    p.add_argument("--report", help="optional report JSON output path")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except CalibrationError as exc:
        print(f"calibration mismatch: {exc}", file=sys.stderr)
        return EXIT_REGRESSION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    raise SystemExit(main())
