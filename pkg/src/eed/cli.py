"""Command-line front end: sweeps, regime reports, diversity limits, figures.

CSV conventions, fixed so downstream plotting is scriptable:
  - column order is pinned (see HEADER); absent quantities are empty
    fields, never zeros
  - floats carry 12 significant digits
  - rho = 10**(snr_db/10)
  - lines starting with '#' are comments: a fixed three-line preamble,
    per-figure block markers, and warnings about noisy estimates
  - estimates whose relative standard error exceeds 5% get a warning
    line right after their row

Asymptotic columns (ed_asy, inf_asy) are the high-SNR laws evaluated
verbatim: at low SNR they can exceed ps or, on the log-rho branch at
0 dB, hit zero. Monte Carlo distortion columns always lie in (0, ps].

Exit codes: 0 ok, 2 usage or configuration, 3 math domain, 4 I/O.
EED_THREADS caps the worker threads used for sampling; results never
depend on it.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from contextlib import contextmanager
from dataclasses import dataclass, replace

from .asymptotic import extend_to_L, infinite_l_asymptotic
from .channel import (CorrelationSpec, SystemConfig, classify_regime,
                      correlation_eigenvalues, transit_point)
from .errors import ConfigError, DomainError
from .montecarlo import SampleSpec, estimate_eed, infinite_l_bound_mc

HEADER = ("snr_db,rho,L,regime,s,delta,mu_ln,log_rho_power,"
          "ed_asy,ed_mc,ed_mc_stderr,inf_mc,inf_asy,n_samples")

_PREAMBLE = (
    "# rho = 10**(snr_db/10)\n"
    "# mu_ln is the natural log of the asymptotic coefficient; the log-rho factor, "
    "when present, is a natural log\n"
    "# capacity-derived values are per two-dimensional channel use; "
    "per-bandwidth scaling is not applied\n"
)

_COLUMNS = HEADER.split(",")

_EMIT_CHOICES = ("mc", "asy", "inf_mc", "inf_asy")

# config-file keys and how to coerce their values; names match the flags
_FILE_TYPES = {
    "nt": int, "nr": int, "eta": float, "ps": float, "l": str,
    "snr_db": str, "samples": int, "seed": int, "streams": int,
    "corr": str, "emit": str, "out": str, "out_dir": str,
}


def _fmt(x: float) -> str:
    return "%.12g" % x


@dataclass(frozen=True)
class SweepRequest:
    config: SystemConfig
    snr_grid: tuple
    l_values: tuple
    corr: CorrelationSpec
    sample: SampleSpec
    emit: tuple


def _parse_snr_grid(text: str) -> tuple:
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"snr grid must be start:stop:step, got {text!r}")
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError:
        raise ConfigError(f"snr grid values must be numbers, got {text!r}") from None
    if not (math.isfinite(start) and math.isfinite(stop) and math.isfinite(step)):
        raise ConfigError(f"snr grid values must be finite, got {text!r}")
    if step <= 0:
        raise ConfigError(f"snr grid step must be > 0, got {step}")
    if stop < start:
        raise ConfigError(f"snr grid is empty: stop {stop} < start {start}")
    grid = []
    k = 0
    while True:
        v = start + k * step
        if v > stop + 1e-9:
            break
        grid.append(v)
        k += 1
    return tuple(grid)


def _parse_l_values(text: str) -> tuple:
    try:
        vals = tuple(int(p) for p in text.split(","))
    except ValueError:
        raise ConfigError(f"l values must be comma-separated integers, got {text!r}") from None
    if not vals:
        raise ConfigError("l values must be non-empty")
    return vals


def _parse_corr(text: str) -> CorrelationSpec:
    if text == "identity":
        return CorrelationSpec.identity()
    if text.startswith("exponential:"):
        try:
            r = float(text.split(":", 1)[1])
        except ValueError:
            raise ConfigError(f"bad exponential correlation parameter in {text!r}") from None
        return CorrelationSpec.exponential(r)
    if text.startswith("explicit:"):
        try:
            eig = tuple(float(p) for p in text.split(":", 1)[1].split(","))
        except ValueError:
            raise ConfigError(f"bad explicit eigenvalues in {text!r}") from None
        return CorrelationSpec.explicit(eig)
    raise ConfigError(
        f"correlation must be identity, exponential:r or explicit:e1,e2,..., got {text!r}")


def _parse_emit(text: str) -> tuple:
    out = []
    for part in text.split(","):
        part = part.strip()
        if part not in _EMIT_CHOICES:
            raise ConfigError(f"emit must be a subset of {','.join(_EMIT_CHOICES)}, got {part!r}")
        if part not in out:
            out.append(part)
    if not out:
        raise ConfigError("emit must name at least one output")
    return tuple(out)


def _row(fields: dict) -> str:
    return ",".join(fields.get(c, "") for c in _COLUMNS)


def _write_preamble(stream) -> None:
    stream.write(_PREAMBLE)
    stream.write(HEADER + "\n")


def _sweep_body(req: SweepRequest, stream) -> None:
    """Data rows for one sweep: per (snr, L) rows, then one diversity-limit
    row per snr point (L field empty) when inf outputs are requested."""
    sig = correlation_eigenvalues(req.corr, req.config.n_min)
    want_inf = [e for e in req.emit if e in ("inf_mc", "inf_asy")]
    inf_law = infinite_l_asymptotic(req.config, sig) if "inf_asy" in req.emit else None
    for snr in req.snr_grid:
        rho = 10.0 ** (snr / 10.0)
        for l in req.l_values:
            cfg = replace(req.config, l=l)
            reg = classify_regime(cfg)
            fields = {"snr_db": _fmt(snr), "rho": _fmt(rho), "L": str(l),
                      "regime": reg.kind.value,
                      "s": "" if reg.s is None else str(reg.s)}
            warnings = []
            if "asy" in req.emit:
                asy = extend_to_L(cfg, req.corr)
                fields["delta"] = _fmt(asy.delta)
                fields["mu_ln"] = _fmt(asy.mu_coeff.ln_magnitude)
                fields["log_rho_power"] = str(asy.log_rho_power)
                try:
                    fields["ed_asy"] = _fmt(asy.evaluate(rho))
                except OverflowError:
                    warnings.append(
                        f"ed_asy outside double range at snr_db={_fmt(snr)}, L={l}")
            if "mc" in req.emit:
                est = estimate_eed(cfg, req.corr, rho, req.sample)
                fields["ed_mc"] = _fmt(est.mean)
                fields["ed_mc_stderr"] = _fmt(est.std_error)
                fields["n_samples"] = str(est.n_samples)
                if est.std_error > 0.05 * est.mean:
                    warnings.append(
                        f"ed_mc relative std error {est.std_error / est.mean:.3g} "
                        f"at snr_db={_fmt(snr)}, L={l}")
            stream.write(_row(fields) + "\n")
            for w in warnings:
                stream.write(f"# warning: {w}\n")
        if want_inf:
            fields = {"snr_db": _fmt(snr), "rho": _fmt(rho)}
            warnings = []
            if "inf_mc" in req.emit:
                est = infinite_l_bound_mc(req.config, req.corr, rho, req.sample)
                fields["inf_mc"] = _fmt(est.mean)
                fields["n_samples"] = str(est.n_samples)
                if est.std_error > 0.05 * est.mean:
                    warnings.append(
                        f"inf_mc relative std error {est.std_error / est.mean:.3g} "
                        f"at snr_db={_fmt(snr)}")
            if inf_law is not None:
                try:
                    fields["inf_asy"] = _fmt(inf_law.evaluate(rho))
                except OverflowError:
                    warnings.append(
                        f"inf_asy outside double range at snr_db={_fmt(snr)}")
            stream.write(_row(fields) + "\n")
            for w in warnings:
                stream.write(f"# warning: {w}\n")


def cmd_sweep(req: SweepRequest, stream) -> int:
    _write_preamble(stream)
    _sweep_body(req, stream)
    return 0


def cmd_regime(config: SystemConfig, stream) -> int:
    reg = classify_regime(config)
    lstar = transit_point(config)
    parts = [reg.kind.value, f"beta={_fmt(reg.beta)}"]
    if reg.s is not None:
        parts.append(f"s={reg.s}")
    parts.append(f"L*={lstar}")
    parts.append(f"L>=L*: {'yes' if config.l >= lstar else 'no'}")
    stream.write(", ".join(parts) + "\n")
    return 0


def cmd_limit(config: SystemConfig, corr: CorrelationSpec, snr_grid: tuple,
              sample: SampleSpec, stream) -> int:
    req = SweepRequest(config, snr_grid, (), corr, sample, ("inf_mc", "inf_asy"))
    _write_preamble(stream)
    _sweep_body(req, stream)
    return 0


def cmd_figures(out_dir: str, sample: SampleSpec) -> int:
    base = SystemConfig(nt=4, nr=2, eta=0.2, l=1, ps=1.0)
    ident = CorrelationSpec.identity()
    ls = (1, 2, 3, 4, 8)
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "fig1.csv"), "w") as f:
        cmd_sweep(SweepRequest(base, _parse_snr_grid("0:40:5"), ls, ident,
                               sample, ("mc", "inf_mc")), f)
    with open(os.path.join(out_dir, "fig2.csv"), "w") as f:
        cmd_sweep(SweepRequest(base, _parse_snr_grid("0:40:2"), ls, ident,
                               sample, ("asy", "inf_asy")), f)
    with open(os.path.join(out_dir, "fig3.csv"), "w") as f:
        _write_preamble(f)
        for r in (0.0, 0.3, 0.5, 0.7, 0.9):
            f.write(f"# r={_fmt(r)}\n")
            corr = ident if r == 0.0 else CorrelationSpec.exponential(r)
            _sweep_body(SweepRequest(base, _parse_snr_grid("0:40:2"), (4,),
                                     corr, sample, ("asy",)), f)
    return 0


@contextmanager
def _out_stream(path):
    if path is None:
        yield sys.stdout
    else:
        f = open(path, "w")
        try:
            yield f
        finally:
            f.close()


def _read_config_file(path: str) -> list:
    with open(path) as f:
        text = f.read()
    entries = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"config file line must be key=value, got {raw!r}")
        key, value = line.split("=", 1)
        entries.append((key.strip().replace("-", "_"), value.strip()))
    return entries


def _apply_config_file(args: argparse.Namespace, argv) -> None:
    """Merge a flat key=value file under explicit flags: a key only takes
    effect when its flag is absent from the command line."""
    if getattr(args, "config", None) is None:
        return
    given = set()
    for tok in argv:
        if tok.startswith("--"):
            given.add(tok[2:].split("=", 1)[0].replace("-", "_"))
    for key, value in _read_config_file(args.config):
        if key not in _FILE_TYPES:
            raise ConfigError(f"unknown config file key {key!r}")
        if not hasattr(args, key) or key in given:
            continue
        try:
            setattr(args, key, _FILE_TYPES[key](value))
        except ValueError:
            raise ConfigError(f"bad value for config key {key!r}: {value!r}") from None


def _require(args: argparse.Namespace, names) -> None:
    for name in names:
        if getattr(args, name) is None:
            raise ConfigError(f"--{name.replace('_', '-')} is required "
                              f"(flag or config file)")


def _config_from_args(args: argparse.Namespace, l: int = 1) -> SystemConfig:
    return SystemConfig(nt=args.nt, nr=args.nr, eta=args.eta,
                        l=l, ps=getattr(args, "ps", 1.0))


def _sample_from_args(args: argparse.Namespace) -> SampleSpec:
    return SampleSpec(seed=args.seed, n_samples=args.samples, n_streams=args.streams)


def _add_system_flags(p: argparse.ArgumentParser, with_ps: bool = True) -> None:
    p.add_argument("--nt", type=int, default=None, help="transmit antennas (1..8)")
    p.add_argument("--nr", type=int, default=None, help="receive antennas (1..8)")
    p.add_argument("--eta", type=float, default=None,
                   help="source-to-channel bandwidth ratio, decimal")
    if with_ps:
        p.add_argument("--ps", type=float, default=1.0, help="source power (default 1)")


def _add_sample_flags(p: argparse.ArgumentParser, default_samples: int) -> None:
    p.add_argument("--samples", type=int, default=default_samples,
                   help=f"Monte Carlo draws (default {default_samples})")
    p.add_argument("--seed", type=int, default=42, help="base RNG seed (default 42)")
    p.add_argument("--streams", type=int, default=4,
                   help="independent sampling streams (default 4); results are "
                        "a function of (seed, streams) only")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eed",
        description="Expected end-to-end distortion of an analog source over a "
                    "wideband MIMO channel: Monte Carlo estimates, high-SNR "
                    "asymptotics, and the frequency-diversity limit.",
        epilog="SNR is given in dB and converted as rho = 10**(snr_db/10). "
               "EED_THREADS caps sampling threads without changing results.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="CSV over an SNR grid and diversity orders")
    _add_system_flags(p)
    p.add_argument("--l", type=str, default="1", help="comma-separated diversity orders")
    p.add_argument("--snr-db", type=str, default="0:40:5", help="grid start:stop:step in dB")
    _add_sample_flags(p, 100000)
    p.add_argument("--corr", type=str, default="identity",
                   help="identity | exponential:r | explicit:e1,e2,...")
    p.add_argument("--emit", type=str, default="mc,asy",
                   help="subset of mc,asy,inf_mc,inf_asy")
    p.add_argument("--out", type=str, default=None, help="output file (default stdout)")
    p.add_argument("--config", type=str, default=None, help="flat key=value defaults file")
    p.set_defaults(func=_run_sweep)

    p = sub.add_parser("regime", help="SCBR regime report for one configuration")
    _add_system_flags(p, with_ps=False)
    p.add_argument("--l", type=int, default=1, help="diversity order (default 1)")
    p.add_argument("--config", type=str, default=None, help="flat key=value defaults file")
    p.set_defaults(func=_run_regime)

    p = sub.add_parser("limit", help="infinite-diversity bound vs its asymptote")
    _add_system_flags(p)
    p.add_argument("--snr-db", type=str, default="0:40:5", help="grid start:stop:step in dB")
    _add_sample_flags(p, 100000)
    p.add_argument("--corr", type=str, default="identity",
                   help="identity | exponential:r | explicit:e1,e2,...")
    p.add_argument("--out", type=str, default=None, help="output file (default stdout)")
    p.add_argument("--config", type=str, default=None, help="flat key=value defaults file")
    p.set_defaults(func=_run_limit)

    p = sub.add_parser("figures", help="write fig1.csv, fig2.csv, fig3.csv")
    p.add_argument("--out-dir", type=str, default=".", help="target directory (default .)")
    _add_sample_flags(p, 200000)
    p.set_defaults(func=_run_figures)
    return parser


def _run_sweep(args: argparse.Namespace, argv) -> int:
    _apply_config_file(args, argv)
    _require(args, ("nt", "nr", "eta"))
    req = SweepRequest(config=_config_from_args(args),
                       snr_grid=_parse_snr_grid(args.snr_db),
                       l_values=_parse_l_values(args.l if isinstance(args.l, str) else str(args.l)),
                       corr=_parse_corr(args.corr),
                       sample=_sample_from_args(args),
                       emit=_parse_emit(args.emit))
    for l in req.l_values:
        replace(req.config, l=l)  # validates the range before any sampling
    with _out_stream(args.out) as stream:
        return cmd_sweep(req, stream)


def _run_regime(args: argparse.Namespace, argv) -> int:
    _apply_config_file(args, argv)
    _require(args, ("nt", "nr", "eta"))
    try:
        l = int(args.l)
    except ValueError:
        raise ConfigError(f"regime needs a single integer l, got {args.l!r}") from None
    return cmd_regime(_config_from_args(args, l=l), sys.stdout)


def _run_limit(args: argparse.Namespace, argv) -> int:
    _apply_config_file(args, argv)
    _require(args, ("nt", "nr", "eta"))
    config = _config_from_args(args)
    with _out_stream(args.out) as stream:
        return cmd_limit(config, _parse_corr(args.corr), _parse_snr_grid(args.snr_db),
                         _sample_from_args(args), stream)


def _run_figures(args: argparse.Namespace, argv) -> int:
    return cmd_figures(args.out_dir, _sample_from_args(args))


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        return args.func(args, argv)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
