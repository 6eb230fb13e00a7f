"""Command-line interface.

Subcommands: ``gen-bank``, ``analyze``, ``gen-masks``, ``stats``, ``bench``
and ``replay``. Every command writes a JSON manifest next to its outputs;
``replay <manifest>`` re-runs the command with the recorded parameters.
"""

from __future__ import annotations

import argparse
import datetime
import json
import os
import sys
import zlib
from pathlib import Path

import numpy as np

from . import __version__
from .bank import PROFILES, build_bank, load_bank, save_bank
from .bench import benchmark, red_iteration_profile
from .exceptions import ColorMaskError, InvalidParameterError
from .io import (
    histogram_image,
    log_scaled,
    mask_image,
    write_json,
    write_masks_csv,
    write_png,
    write_radial_csv,
    write_rows,
)
from .masking import STRATEGIES, MaskConfig, generate
from .noise import COLORS, ColorSpec
from .spectral import DEFAULT_CUTS, band_energy, mean_periodogram, radial_average
from .stats import compute_stats

MANIFEST_NAME = "manifest.json"
MASK_COLORS = ("red", "green", "blue", "purple")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(2, f"error: usage: {message}\n")


def derive_seed(master: int, name: str) -> int:
    """Deterministic 32-bit sub-seed for subsystem ``name``."""
    ss = np.random.SeedSequence([int(master), zlib.crc32(name.encode())])
    return int(ss.generate_state(1, np.uint32)[0])


def _spec_from_args(args, color=None):
    return ColorSpec.for_kind(
        color or args.color, args.sigma, args.sigma1, args.sigma2, args.red_iterations
    )


def _default_out(command):
    stamp = datetime.datetime.now().strftime("%Y%m%d-%H%M%S")
    return str(Path("runs") / f"{command}-{stamp}")


def _write_manifest(path, args, outputs):
    params = {k: v for k, v in vars(args).items() if k != "func"}
    manifest = {
        "command": args.command,
        "params": params,
        "seed": params.get("seed"),
        "version": __version__,
        "outputs": [str(p) for p in outputs],
    }
    write_json(path, manifest)
    return manifest


def _out_dir(args):
    if args.out is None:
        args.out = _default_out(args.command)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


# -- commands ---------------------------------------------------------------


def cmd_gen_bank(args):
    if args.profile:
        args.count = args.count or PROFILES[args.profile]["count"]
        args.side = args.side or PROFILES[args.profile]["side"]
    args.count = args.count or PROFILES["mini"]["count"]
    args.side = args.side or PROFILES["mini"]["side"]
    if args.out is None:
        args.out = _default_out("gen-bank") + ".cnbk"
    spec = _spec_from_args(args)
    bank = build_bank(spec, args.count, args.side, args.seed, args.threads)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    save_bank(bank, out)
    _write_manifest(Path(str(out) + ".manifest.json"), args, [out])
    print(f"wrote {out} ({bank.count} x {bank.side}x{bank.side} {spec.kind}, {out.stat().st_size} bytes)")


def cmd_analyze(args):
    if not os.path.exists(args.bank):
        raise FileNotFoundError(f"bank file not found: {args.bank}")
    bank = load_bank(args.bank)
    n = bank.count if args.limit is None else min(args.limit, bank.count)
    num_bins = args.bins or max(2, min(32, bank.side // 8))
    power = np.zeros((bank.side, bank.side))
    for start in range(0, n, 64):
        chunk = bank.patterns[start : min(start + 64, n)].astype(np.float64)
        power += mean_periodogram(chunk) * len(chunk)
    power /= n
    radial = radial_average(power, num_bins)
    bands = band_energy(power, args.low_cut, args.high_cut)

    out = _out_dir(args)
    files = [out / "radial.csv", out / "bands.json", out / "periodogram.png"]
    write_radial_csv(files[0], radial)
    used = radial.counts > 0
    mp = radial.mean_power[used]
    write_json(files[1], {
        "color": bank.spec.kind,
        "patterns": n,
        "low_cut": bands.low_cut,
        "high_cut": bands.high_cut,
        "energy_low": bands.energy_low,
        "energy_mid": bands.energy_mid,
        "energy_high": bands.energy_high,
        "total_power": bands.total_power,
        "dominant_band": max(("low", "mid", "high"), key=lambda b: getattr(bands, f"energy_{b}")),
        "radial_max_rel_deviation": float(np.abs(mp - mp.mean()).max() / mp.mean()) if mp.mean() > 0 else 0.0,
    })
    write_png(files[2], log_scaled(power))
    _write_manifest(out / MANIFEST_NAME, args, files)
    print(f"{bank.spec.kind}: low={bands.energy_low:.4f} mid={bands.energy_mid:.4f} "
          f"high={bands.energy_high:.4f} -> {out}")


def cmd_gen_masks(args):
    cfg = MaskConfig(args.patches, args.ratio, args.batch, args.strategy)
    bank = None
    if cfg.strategy == "color":
        if args.bank is None:
            raise InvalidParameterError("--strategy color requires --bank")
        if not os.path.exists(args.bank):
            raise FileNotFoundError(f"bank file not found: {args.bank}")
        bank = load_bank(args.bank)
    mb = generate(cfg, bank, derive_seed(args.seed, "masks"), args.threads)

    out = _out_dir(args)
    files = [out / "masks.csv", out / "ids_keep.csv", out / "ids_restore.csv", out / "meta.json"]
    write_masks_csv(files[0], mb.mask)
    write_rows(files[1], None, mb.ids_keep.tolist())
    write_rows(files[2], None, mb.ids_restore.tolist())
    write_json(files[3], {
        "strategy": cfg.strategy,
        "seed": args.seed,
        "ratio": cfg.mask_ratio,
        "P": cfg.num_patches,
        "B": cfg.batch_size,
        "len_keep": cfg.len_keep,
        "bank": args.bank,
    })
    for b in range(min(args.png_limit, cfg.batch_size)):
        path = out / f"mask_{b:05d}.png"
        write_png(path, mask_image(mb.mask[b], cfg.side))
        files.append(path)
    _write_manifest(out / MANIFEST_NAME, args, files)
    print(f"{cfg.batch_size} {cfg.strategy} masks, {cfg.num_masked}/{cfg.num_patches} masked per row -> {out}")


def cmd_stats(args):
    strategies = args.strategies.split(",")
    for s in strategies:
        if s not in MASK_COLORS and s not in ("random", "block", "grid"):
            raise InvalidParameterError(f"unknown strategy {s!r}")
    report = {}
    hist_rows = []
    for s in strategies:
        bank = None
        strategy = s
        if s in MASK_COLORS:
            strategy = "color"
            if args.bank_dir:
                path = Path(args.bank_dir) / f"{s}.cnbk"
                if not path.exists():
                    raise FileNotFoundError(f"bank file not found: {path}")
                bank = load_bank(path)
            else:
                spec = ColorSpec.for_kind(s)
                bank = build_bank(spec, args.bank_count, args.bank_side,
                                  derive_seed(args.seed, f"bank-{s}"), args.threads)
        cfg = MaskConfig(args.patches, args.ratio, args.rows, strategy)
        mb = generate(cfg, bank, derive_seed(args.seed, f"stats-{s}"), args.threads)
        st = compute_stats(mb)
        report[s] = st.to_dict()
        hist_rows.append(st.cluster_sizes)

    out = _out_dir(args)
    files = [out / "stats.json", out / "stats.csv", out / "cluster_hist.png"]
    write_json(files[0], report)
    write_rows(files[1], ("strategy", "mean_cluster", "max_cluster", "coverage_chi2", "rows"), (
        (s, repr(r["mean_cluster"]), r["max_cluster"], repr(r["coverage_chi2"]), r["num_rows"])
        for s, r in report.items()
    ))
    # one band per strategy, log-count bars
    write_png(files[2], np.vstack([histogram_image(np.log1p(h), 40) for h in hist_rows]))
    _write_manifest(out / MANIFEST_NAME, args, files)
    for s, r in report.items():
        print(f"{s:8s} mean_cluster={r['mean_cluster']:.3f} max_cluster={r['max_cluster']} "
              f"chi2={r['coverage_chi2']:.2f}")


def cmd_bench(args):
    if args.iterations < 1:
        raise InvalidParameterError(f"--iterations must be >= 1, got {args.iterations}")
    if args.bank:
        if not os.path.exists(args.bank):
            raise FileNotFoundError(f"bank file not found: {args.bank}")
        bank = load_bank(args.bank)
    else:
        bank = build_bank(ColorSpec.for_kind(args.color), args.bank_count, args.bank_side,
                          derive_seed(args.seed, "bank"), args.threads)
    report = benchmark(bank, args.batch, args.patches, args.ratio, args.iterations,
                       derive_seed(args.seed, "bench"))
    report["red_low_band_by_iterations"] = red_iteration_profile()
    out = _out_dir(args)
    path = out / "bench.json"
    write_json(path, report)
    _write_manifest(out / MANIFEST_NAME, args, [path])
    print(f"color: {report['color_masks_per_second']:.0f} masks/s, "
          f"random: {report['random_masks_per_second']:.0f} masks/s, "
          f"time ratio {report['time_ratio']:.3f}")


def cmd_replay(args):
    with open(args.manifest) as fh:
        manifest = json.load(fh)
    params = dict(manifest["params"])
    if args.out is not None:
        params["out"] = args.out
    ns = argparse.Namespace(**params)
    ns.func = COMMANDS[manifest["command"]]
    ns.func(ns)


COMMANDS = {
    "gen-bank": cmd_gen_bank,
    "analyze": cmd_analyze,
    "gen-masks": cmd_gen_masks,
    "stats": cmd_stats,
    "bench": cmd_bench,
    "replay": cmd_replay,
}


def _add_sigma_flags(p):
    p.add_argument("--sigma", type=float, default=None, help="blur width for red/blue (default 2.0)")
    p.add_argument("--sigma1", type=float, default=None, help="weak blur for green/purple (default 1.0)")
    p.add_argument("--sigma2", type=float, default=None, help="strong blur for green/purple (default 4.0)")
    p.add_argument("--red-iterations", type=int, default=None, help="blur+normalize rounds for red (default 3)")


def build_parser():
    parser = _Parser(prog="colormask", description="Color-noise patch masks for masked image modeling.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen-bank", help="precompute a noise bank")
    p.add_argument("--color", choices=COLORS, default="green")
    _add_sigma_flags(p)
    p.add_argument("--profile", choices=sorted(PROFILES), default=None)
    p.add_argument("--count", type=int, default=None)
    p.add_argument("--side", type=int, default=None)
    p.add_argument("--seed", type=int, default=0, help="seed of pattern 0; pattern i uses seed+i")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_gen_bank)

    p = sub.add_parser("analyze", help="seed-averaged spectra of a bank")
    p.add_argument("bank")
    p.add_argument("--bins", type=int, default=None)
    p.add_argument("--low-cut", type=float, default=DEFAULT_CUTS[0])
    p.add_argument("--high-cut", type=float, default=DEFAULT_CUTS[1])
    p.add_argument("--limit", type=int, default=None, help="use only the first N patterns")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("gen-masks", help="generate a batch of masks")
    p.add_argument("--strategy", choices=STRATEGIES, default="color")
    p.add_argument("--bank", default=None)
    p.add_argument("--ratio", type=float, default=0.75)
    p.add_argument("--batch", type=int, default=8)
    p.add_argument("--patches", type=int, default=196)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--png-limit", type=int, default=16)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_gen_masks)

    p = sub.add_parser("stats", help="cluster and coverage statistics per strategy")
    p.add_argument("--strategies", default="red,green,blue,purple,random,block,grid")
    p.add_argument("--rows", type=int, default=1000)
    p.add_argument("--ratio", type=float, default=0.75)
    p.add_argument("--patches", type=int, default=196)
    p.add_argument("--bank-dir", default=None, help="directory holding <color>.cnbk banks")
    p.add_argument("--bank-count", type=int, default=256)
    p.add_argument("--bank-side", type=int, default=256)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("bench", help="color vs random masking throughput")
    p.add_argument("--bank", default=None)
    p.add_argument("--color", choices=MASK_COLORS, default="green")
    p.add_argument("--bank-count", type=int, default=256)
    p.add_argument("--bank-side", type=int, default=256)
    p.add_argument("--batch", type=int, default=4096)
    p.add_argument("--patches", type=int, default=196)
    p.add_argument("--ratio", type=float, default=0.75)
    p.add_argument("--iterations", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("replay", help="re-run a command from its manifest")
    p.add_argument("manifest")
    p.add_argument("--out", default=None, help="write outputs here instead of the recorded path")
    p.set_defaults(func=cmd_replay)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except ColorMaskError as exc:
        print(f"error: {exc.code}: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: file-not-found: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
