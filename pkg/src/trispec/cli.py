"""Command-line harness: sampling runs, transform evaluations, profile
diagnostics, and the cross-method validation suite.

Every command writes its outputs into --out together with a manifest
embedding the resolved configuration and package version, so any output
file can be reproduced bit-exactly from its manifest.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

import trispec
from trispec.core import EntryDistribution, SeedSpec, measure_from_samples
from trispec.ensembles import sample_alpha, sample_deformed, sample_simple, trace_power, word_trace
from trispec.eigensolve import eigenvalues
from trispec.pathmoments import joint_moment, limit_moment, mixture_moment, word_from_letters
from trispec.reference_laws import bernoulli_limit, bernoulli_transform_heuristic
from trispec.sigmaseq import (
    mesh,
    parse_sigma_target,
    quantile_profile,
    sigma_from_csv,
    sigma_to_csv,
    tail_second_moment,
    target_measure,
    w1_to_target,
)
from trispec.stieltjes import (
    arcsine_transform,
    compose_transform,
    default_eta,
    empirical_transform,
    grid_from_function,
    grid_from_measure,
    invert_density,
    particle_fixpoint,
    semicircle_transform,
)
from trispec.validation import SCENARIOS, run_scenarios

FLOAT_FMT = "%.17g"


def _write_json(path: Path, payload) -> None:
    try:
        path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    except OSError as exc:
        raise SystemExit(f"cannot write {path}: {exc}")


def _write_manifest(outdir: Path, command: str, config: dict) -> None:
    clean = {k: v for k, v in config.items() if k not in ("func", "config")}
    _write_json(outdir / "manifest.json", {
        "package": "trispec",
        "version": trispec.__version__,
        "command": command,
        "config": clean,
    })


def _outdir(config: dict) -> Path:
    out = Path(config.get("out") or ".")
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise SystemExit(f"cannot create output directory {out}: {exc}")
    return out


def _law(config: dict, key: str = "law") -> EntryDistribution:
    spec = config.get(key)
    if not spec:
        raise SystemExit(f"missing --{key.replace('_', '-')}")
    try:
        return EntryDistribution.parse(spec if isinstance(spec, str) else spec[0])
    except (ValueError, OSError) as exc:
        raise SystemExit(f"bad law spec {spec!r}: {exc}")


def _parse_z_list(config: dict) -> list[complex]:
    raw = config.get("z") or ["0,2"]
    out = []
    for item in raw:
        re_s, _, im_s = str(item).partition(",")
        out.append(complex(float(re_s), float(im_s)))
    return out


def _sigma_for(config: dict, n: int):
    if config.get("sigma_csv"):
        s = sigma_from_csv(config["sigma_csv"])
        if len(s) != n - 1:
            raise SystemExit(f"sigma CSV has {len(s)} values, need {n - 1}")
        return s
    if config.get("sigma_target"):
        qfn, _, _ = parse_sigma_target(config["sigma_target"])
        return quantile_profile(n, qfn)
    return None


def _sample_matrix(config: dict, n: int, law, seed: SeedSpec):
    sigma = _sigma_for(config, n)
    if sigma is not None:
        return sample_deformed(n, law, None, sigma, seed)
    alpha = float(config.get("alpha") or 0.0)
    if alpha:
        return sample_alpha(n, alpha, law, seed)
    return sample_simple(n, law, seed)


# -- commands -------------------------------------------------------------


def cmd_sample_esd(config: dict) -> int:
    n = int(config["n"])
    law = _law(config)
    replicas = int(config.get("replicas") or 1)
    seed = int(config.get("seed") or 0)
    tol = float(config.get("tol") or 1e-8)
    out = _outdir(config)
    fmt = config.get("format") or "csv"

    all_moments = []
    pooled = []
    for r in range(replicas):
        m = _sample_matrix(config, n, law, SeedSpec(seed, r))
        ev = eigenvalues(m, tol).eigenvalues
        pooled.append(ev)
        all_moments.append({f"m{k}": float(np.mean(ev**k)) for k in range(1, 9)})
        path = out / f"eigenvalues_r{r:03d}.{fmt}"
        if fmt == "json":
            _write_json(path, ev.tolist())
        else:
            np.savetxt(path, ev, fmt=FLOAT_FMT)
    ev_all = np.concatenate(pooled)
    edges = np.linspace(float(ev_all.min()), float(ev_all.max()), 101)
    counts, _ = np.histogram(ev_all, bins=edges)
    _write_json(out / "histogram.json", {
        "bin_edges": edges.tolist(),
        "counts": counts.tolist(),
        "replica_moments": all_moments,
        "pooled_moments": {f"m{k}": float(np.mean(ev_all**k)) for k in range(1, 9)},
    })
    _write_manifest(out, "sample-esd", config)
    print(f"wrote {replicas} eigenvalue file(s) to {out}")
    return 0


def cmd_moments(config: dict) -> int:
    n = int(config["n"])
    law = _law(config)
    replicas = int(config.get("replicas") or 20)
    k_max = int(config.get("k_max") or 8)
    seed = int(config.get("seed") or 0)
    alpha = float(config.get("alpha") or 0.0)
    out = _outdir(config)

    mix_target = None
    if config.get("sigma_target"):
        qfn, bounded, label = parse_sigma_target(config["sigma_target"])
        if not bounded:
            raise SystemExit(
                f"sigma target {label} is unbounded: the mixture moment route "
                "requires a bounded profile law (simulate via sample-esd instead)")
        mix_target = target_measure(qfn, 100_000)

    sims: dict[int, list[float]] = {k: [] for k in range(2, k_max + 1, 2)}
    for r in range(replicas):
        m = _sample_matrix(config, n, law, SeedSpec(seed, r))
        for k in sims:
            sims[k].append(trace_power(m, k))
    table = {}
    for k, vals in sims.items():
        if mix_target is not None:
            pred = mixture_moment(k, law.moment, mix_target.moment)
        else:
            pred = limit_moment(k, law.moment, alpha)
        arr = np.asarray(vals)
        table[str(k)] = {
            "predicted": float(pred),
            "simulated_mean": float(arr.mean()),
            "stderr": float(arr.std(ddof=1) / math.sqrt(arr.size)) if arr.size > 1 else 0.0,
        }
    _write_json(out / "moments.json", table)
    _write_manifest(out, "moments", config)
    print(json.dumps(table, indent=2, sort_keys=True))
    return 0


def cmd_fixpoint(config: dict) -> int:
    law = _law(config)
    population = int(config.get("population") or 100_000)
    iters = int(config.get("iters") or 200)
    samples = int(config.get("mc_samples") or 200_000)
    seed = int(config.get("seed") or 0)
    out = _outdir(config)

    rows = ["z_re,z_im,mean_re,mean_im,composed_re,composed_im,composed_stderr,"
            "final_w1,generations"]
    traces = {}
    for i, z in enumerate(_parse_z_list(config)):
        r1 = particle_fixpoint(law, z, population, iters, SeedSpec(seed, 3 * i))
        r2 = particle_fixpoint(law, z, population, iters, SeedSpec(seed, 3 * i + 1))
        comp = compose_transform(r1.population, r2.population, law, samples,
                                 SeedSpec(seed, 3 * i + 2))
        mean = r1.population.mean()
        rows.append(",".join(FLOAT_FMT % v for v in (
            z.real, z.imag, mean.real, mean.imag, comp.value.real, comp.value.imag,
            comp.stderr, r1.final_w1)) + f",{r1.population.generation}")
        traces[f"{z.real},{z.imag}"] = list(r1.w1_trace)
    (out / "fixpoint.csv").write_text("\n".join(rows) + "\n")
    _write_json(out / "traces.json", traces)
    _write_manifest(out, "fixpoint", config)
    print("\n".join(rows))
    return 0


def cmd_density(config: dict) -> int:
    source = config.get("source") or "semicircle:2"
    points = int(config.get("points") or 1001)
    out = _outdir(config)
    kind, _, rest = source.partition(":")
    if kind in ("semicircle", "arcsine"):
        r = float(rest or 2.0)
        eta = float(config.get("eta") or default_eta(r, closed_form=True))
        xs = np.linspace(-r - 1.0, r + 1.0, points)
        fn = semicircle_transform if kind == "semicircle" else arcsine_transform
        grid = grid_from_function(lambda z: fn(z, r), xs, eta)
    elif kind == "esd":
        data = np.loadtxt(rest, dtype=float, ndmin=1)
        mu = measure_from_samples(data)
        lo, hi = mu.support()
        scale = max(hi - lo, 1e-6) / 2.0
        eta = float(config.get("eta") or default_eta(scale, closed_form=False))
        xs = np.linspace(lo - 0.5, hi + 0.5, points)
        grid = grid_from_measure(mu, xs, eta)
    elif kind == "bernoulli":
        p_s, _, k_s = rest.partition(",")
        series = bernoulli_limit(float(p_s), int(k_s or 60))
        eta = float(config.get("eta") or default_eta(2.0, closed_form=False))
        xs = np.linspace(-2.5, 2.5, points)
        grid = grid_from_measure(series.measure, xs, eta)
    else:
        raise SystemExit(f"unknown density source {source!r}")
    res = invert_density(grid)
    lines = ["x,density"] + [f"{FLOAT_FMT % x},{FLOAT_FMT % d}"
                             for x, d in zip(res.xs, res.density)]
    (out / "density.csv").write_text("\n".join(lines) + "\n")
    _write_json(out / "mass.json", {"trapezoidal_mass": res.mass, "eta": eta})
    _write_manifest(out, "density", config)
    print(f"density on {points} points, trapezoidal mass {res.mass:.4f}")
    return 0


def cmd_sigma(config: dict) -> int:
    n = int(config["n"])
    out = _outdir(config)
    tail_ms = [float(v) for v in (config.get("tail_m") or [1.0, 5.0])]
    diagnostics: dict = {}
    if config.get("sigma_csv"):
        prof = sigma_from_csv(config["sigma_csv"])
        target_label = None
    else:
        spec = config.get("sigma_target") or "uniform:0,1"
        qfn, bounded, target_label = parse_sigma_target(spec)
        prof = quantile_profile(n, qfn)
        diagnostics["w1_to_target"] = w1_to_target(prof, qfn)
        diagnostics["target_bounded"] = bounded
    sigma_to_csv(prof, out / "sigma.csv")
    diagnostics.update({
        "n": prof.N,
        "target": target_label,
        "mesh": mesh(prof),
        "mesh_bound_1_over_log": 1.0 / math.log(prof.N + 1),
        "sup_abs_sigma": prof.sup_abs(),
        "padding_fraction": prof.padding_fraction,
        "second_moment": tail_second_moment(prof, 0.0),
        "tail_second_moments": {str(m): tail_second_moment(prof, m) for m in tail_ms},
    })
    _write_json(out / "diagnostics.json", diagnostics)
    _write_manifest(out, "sigma", config)
    print(json.dumps(diagnostics, indent=2, sort_keys=True))
    return 0


def cmd_bernoulli(config: dict) -> int:
    p = float(config.get("p") or 0.5)
    trunc = int(config.get("trunc_k") or 60)
    out = _outdir(config)
    series = bernoulli_limit(p, trunc)
    lines = ["location,weight"] + [
        f"{FLOAT_FMT % x},{FLOAT_FMT % w}"
        for x, w in zip(series.measure.locations, series.measure.weights)
    ]
    (out / "series.csv").write_text("\n".join(lines) + "\n")
    heuristic = {}
    for z in (1j, 1 + 1j):
        s_series = empirical_transform(series.measure, z)
        s_guess = bernoulli_transform_heuristic(z, p)
        heuristic[f"{z.real},{z.imag}"] = {
            "series": [s_series.real, s_series.imag],
            "three_term_guess": [s_guess.real, s_guess.imag],
            "abs_difference": abs(s_series - s_guess),
        }
    _write_json(out / "diagnostics.json", {
        "p": p,
        "truncation": trunc,
        "remainder_mass": series.remainder_mass,
        "zero_mass_series": series.zero_mass_series,
        "zero_mass_total": series.zero_mass_total(),
        "atoms": series.measure.size,
        "three_term_guess_comparison": heuristic,
    })
    _write_manifest(out, "bernoulli", config)
    print(f"series with {series.measure.size} atoms, remainder {series.remainder_mass:.3g}")
    return 0


def cmd_joint_moments(config: dict) -> int:
    word = word_from_letters(config.get("word") or "XYXY")
    specs = config.get("law") or []
    if len(specs) < word.n_colors:
        raise SystemExit(f"word uses {word.n_colors} colors; pass --law that many times")
    laws = [EntryDistribution.parse(s) for s in specs[:word.n_colors]]
    n = int(config["n"])
    replicas = int(config.get("replicas") or 20)
    seed = int(config.get("seed") or 0)
    out = _outdir(config)

    pred = joint_moment(word, [law.moment for law in laws])
    sims = []
    for r in range(replicas):
        mats = {c: sample_simple(n, laws[c - 1], SeedSpec(seed, replicas * (c - 1) + r))
                for c in range(1, word.n_colors + 1)}
        sims.append(word_trace([mats[c] for c in word.colors]))
    arr = np.asarray(sims)
    payload = {
        "word": "".join(str(c) for c in word.colors),
        "predicted": float(pred),
        "simulated_mean": float(arr.mean()),
        "stderr": float(arr.std(ddof=1) / math.sqrt(arr.size)) if arr.size > 1 else 0.0,
    }
    _write_json(out / "joint.json", payload)
    _write_manifest(out, "joint-moments", config)
    print(json.dumps(payload, indent=2, sort_keys=True))
    return 0


def cmd_validate(config: dict) -> int:
    names = config.get("scenario")
    if names is None:
        names = sorted(SCENARIOS)
    tol_override = config.get("tolerance")
    try:
        report = run_scenarios(
            names,
            quick=bool(config.get("quick")),
            tolerance_override=None if tol_override is None else float(tol_override),
        )
    except ValueError as exc:
        raise SystemExit(str(exc))
    out = _outdir(config)
    _write_json(out / "report.json", report.to_jsonable())
    _write_manifest(out, "validate", config)
    for row in report.rows:
        print(row.line())
    print(f"overall: {'PASS' if report.passed else 'FAIL'}")
    return 0 if report.passed else 1


# -- argument plumbing ----------------------------------------------------


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON file with defaults for any flag")
    p.add_argument("--seed", type=int, help="master seed (default 0)")
    p.add_argument("--out", help="output directory (default .)")
    p.add_argument("--format", choices=("csv", "json"), help="vector output format")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trispec",
        description="Limiting spectral distributions of random tridiagonal ensembles",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample-esd", help="sample matrices and write eigenvalue files")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--law", action="append", help="e.g. constant:1, gaussian:0,1")
    p.add_argument("--alpha", type=float)
    p.add_argument("--sigma-csv", dest="sigma_csv")
    p.add_argument("--sigma-target", dest="sigma_target")
    p.add_argument("--replicas", type=int)
    p.add_argument("--tol", type=float, help="eigensolver tolerance (default 1e-8)")
    p.set_defaults(func=cmd_sample_esd)

    p = sub.add_parser("moments", help="limit moments vs simulated traces")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--law", action="append")
    p.add_argument("--alpha", type=float)
    p.add_argument("--sigma-target", dest="sigma_target",
                   help="bounded target for the mixture moment route")
    p.add_argument("--k-max", dest="k_max", type=int)
    p.add_argument("--replicas", type=int)
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("fixpoint", help="particle fixed point and composed transform")
    p.add_argument("--law", action="append")
    p.add_argument("--z", action="append", help="repeatable re,im")
    p.add_argument("--population", type=int)
    p.add_argument("--iters", type=int)
    p.add_argument("--mc-samples", dest="mc_samples", type=int)
    p.set_defaults(func=cmd_fixpoint)

    p = sub.add_parser("density", help="Stieltjes inversion of a transform source")
    p.add_argument("--source", help="semicircle:r | arcsine:r | esd:file.csv | bernoulli:p,K")
    p.add_argument("--eta", type=float)
    p.add_argument("--points", type=int)
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("sigma", help="build a deformation profile with diagnostics")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--sigma-target", dest="sigma_target",
                   help="uniform:a,b | exponential:rate | pareto:scale,shape | "
                        "constant:c | empirical:file.csv")
    p.add_argument("--sigma-csv", dest="sigma_csv", help="diagnose an external profile")
    p.add_argument("--tail-m", dest="tail_m", action="append", type=float)
    p.set_defaults(func=cmd_sigma)

    p = sub.add_parser("bernoulli", help="truncated Bernoulli block-mixture law")
    p.add_argument("--p", type=float)
    p.add_argument("--trunc-k", dest="trunc_k", type=int)
    p.set_defaults(func=cmd_bernoulli)

    p = sub.add_parser("joint-moments", help="colored-word joint moments vs simulation")
    p.add_argument("--word", help="letters, e.g. XYXY")
    p.add_argument("--law", action="append", help="one per color, in order")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--replicas", type=int)
    p.set_defaults(func=cmd_joint_moments)

    p = sub.add_parser("validate", help="run cross-method validation scenarios")
    p.add_argument("--scenario", action="append",
                   help=f"repeatable; default all of {sorted(SCENARIOS)}")
    p.add_argument("--quick", action="store_true",
                   help="smoke-test sizes instead of acceptance scale")
    p.add_argument("--tolerance", type=float,
                   help="override every row tolerance (0 forces failures)")
    p.set_defaults(func=cmd_validate)

    for sp in sub.choices.values():
        _add_common(sp)
    return parser


def _resolve_config(args: argparse.Namespace) -> dict:
    config = {}
    if getattr(args, "config", None):
        try:
            config = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise SystemExit(f"cannot read config {args.config}: {exc}")
        if not isinstance(config, dict):
            raise SystemExit("config file must hold a JSON object")
    for key, value in vars(args).items():
        if value is not None and value is not False:
            config[key] = value
    return config


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    config = _resolve_config(args)
    return args.func(config)


if __name__ == "__main__":
    sys.exit(main())
