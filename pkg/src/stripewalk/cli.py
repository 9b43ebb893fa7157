"""Command-line front end: reproducible runs, reports, and plot-ready data.

Configuration is a flat ``key = value`` text file (``#`` comments allowed);
complex numbers are written as ``re,im`` pairs, lists are whitespace
separated.  Every output file carries the sha256 of the canonical config
echo, and re-running a config reproduces byte-identical numeric payloads
(the pipeline is deterministic; no randomness is used anywhere).

Subcommands: simulate | spectrum | kato | limits | characteristics |
oracle-check | sweep.  Exit status is 0 exactly when every check requested
by the subcommand passes its stated tolerance.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from . import __version__
from .coin import Coin, make_coin, make_hadamard
from .walker import (
    band_field,
    evolve,
    init_band_vector,
    init_product,
    measure,
    oqrw_reference,
    qw1d_reference,
    step,
    stripe_for_width,
)
from .spectral import (
    build_w,
    eig,
    kato_reduction,
    minimal_poly_residual,
    char_poly_residual,
    minimality_witness,
    perturbed_projection_check,
)
from .limits import (
    SIDE_VARIANCE,
    SIDE_VARIANCE_CUMULANT,
    LimitProfile,
    limit_coefficients,
    limit_profiles,
    mode_masses,
    mode_windows,
    scaled_cdf_distance,
)
from .characteristics import (
    SUPPORT_THRESHOLDS,
    decay_exponent,
    height_ratio,
    n_crit,
    run_series,
    tail_exponent,
)

FLOAT_FMT = "%.17g"  # full round-trip precision for regression comparisons


# --------------------------------------------------------------------------
# configuration
# --------------------------------------------------------------------------


@dataclass
class RunConfig:
    """Flat run configuration with explicit defaults.

    ``coin`` is either the preset "hadamard" or "custom" with the four
    entries given; ``m`` selects the standard stripe placement unless both
    ``s`` and ``t`` are set.  ``init`` is "product" (spinor g, coin applied
    once), "band" (explicit 4M vector, v ascending), or "mixed" (the
    half-half LL/RR cell at v = 0).
    """

    coin: str = "hadamard"
    coin_a: complex = 0j
    coin_b: complex = 0j
    coin_c: complex = 0j
    coin_d: complex = 0j
    m: int = 2
    s: int = 1  # s > t means "unset": fall back to width-m placement
    t: int = 0
    init: str = "product"
    g: tuple[complex, ...] = (1 + 0j, 0j)
    band: tuple[complex, ...] = ()
    steps: int = 100
    snapshots: tuple[int, ...] = ()
    emit_band_field: bool = False
    emit_normalized: bool = True
    delta: float = 0.3
    support_threshold: float = 1e-12
    ncrit_tol: float = 1e-12
    ncrit_nmax: int = 0  # 0: choose 4 m + 40 per stripe width
    w_coeff: float = 4.0
    kgrid: int = 64
    mlist: tuple[int, ...] = (1, 2, 3, 5, 10)
    fit_lo: int = 0  # 0: upper half of the run
    fit_hi: int = 0
    conservation_tol: float = 1e-10
    imag_tol: float = 1e-12

    def stripe(self) -> tuple[int, int]:
        if self.s <= self.t:
            return self.s, self.t
        return stripe_for_width(self.m)

    def width(self) -> int:
        s, t = self.stripe()
        return t - s + 1

    def coin_obj(self) -> Coin:
        if self.coin == "hadamard":
            return make_hadamard()
        if self.coin == "custom":
            return make_coin(self.coin_a, self.coin_b, self.coin_c, self.coin_d)
        raise ValueError(f"unknown coin preset {self.coin!r}")

    def snapshot_times(self) -> tuple[int, ...]:
        return self.snapshots if self.snapshots else (self.steps,)


def _format_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, complex):
        return f"{v.real!r},{v.imag!r}"
    if isinstance(v, tuple):
        return " ".join(_format_value(x) for x in v)
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _parse_complex(text: str) -> complex:
    re_s, im_s = text.split(",")
    return complex(float(re_s), float(im_s))


#: Element type of each tuple-valued config field.
_TUPLE_FIELDS = {"g": complex, "band": complex, "snapshots": int, "mlist": int}


def _parse_value(name: str, text: str, template):
    if name in _TUPLE_FIELDS:
        parts = text.split()
        if _TUPLE_FIELDS[name] is complex:
            return tuple(_parse_complex(p) for p in parts)
        return tuple(int(p) for p in parts)
    if isinstance(template, bool):
        if text.lower() not in ("true", "false"):
            raise ValueError(f"{name}: expected true/false, got {text!r}")
        return text.lower() == "true"
    if isinstance(template, complex) and not isinstance(template, bool):
        return _parse_complex(text)
    if isinstance(template, int):
        return int(text)
    if isinstance(template, float):
        return float(text)
    return text


def config_to_text(cfg: RunConfig) -> str:
    """Canonical echo: every field explicit, one per line, field order fixed."""
    lines = [f"{f.name} = {_format_value(getattr(cfg, f.name))}" for f in fields(cfg)]
    return "\n".join(lines) + "\n"


def config_from_text(text: str) -> RunConfig:
    cfg = RunConfig()
    known = {f.name: f for f in fields(cfg)}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"malformed config line: {raw!r}")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if key not in known:
            raise ValueError(f"unknown config key {key!r}")
        setattr(cfg, key, _parse_value(key, val, getattr(cfg, key)))
    return cfg


def load_config(path: str | None, overrides: dict) -> RunConfig:
    cfg = config_from_text(Path(path).read_text()) if path else RunConfig()
    for key, val in overrides.items():
        if val is not None:
            setattr(cfg, key, val)
    return cfg


def config_hash(cfg: RunConfig) -> str:
    return hashlib.sha256(config_to_text(cfg).encode()).hexdigest()


# --------------------------------------------------------------------------
# output helpers
# --------------------------------------------------------------------------


def _write_csv(path: Path, header: str, rows, digest: str) -> None:
    with open(path, "w") as fh:
        fh.write(f"# config_sha256={digest}\n")
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(FLOAT_FMT % v if isinstance(v, float) else str(v) for v in row))
            fh.write("\n")


def _write_json(path: Path, payload: dict, digest: str) -> None:
    payload = {"config_sha256": digest, "version": __version__, **payload}
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=1, sort_keys=True)
        fh.write("\n")


def _complex_matrix(m: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m)]


def _complex_vector(v: np.ndarray) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(v)]


def _initial_state(cfg: RunConfig, n_max: int):
    coin = cfg.coin_obj()
    s, t = cfg.stripe()
    if cfg.init == "product":
        g = np.asarray(cfg.g, dtype=complex)
        return init_product(coin, g / np.linalg.norm(g), s, t, n_max)
    if cfg.init == "mixed":
        data = np.zeros((t - s + 1, 4), dtype=complex)
        data[-s] = [0.5, 0.0, 0.0, 0.5]
        return init_band_vector(coin, data, s, t, n_max)
    if cfg.init == "band":
        m = t - s + 1
        data = np.asarray(cfg.band, dtype=complex)
        if data.size != 4 * m:
            raise ValueError(f"band init needs {4 * m} complex entries, got {data.size}")
        return init_band_vector(coin, data.reshape(m, 4), s, t, n_max)
    raise ValueError(f"unknown init {cfg.init!r}")


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------


def cmd_simulate(cfg: RunConfig, out: Path) -> int:
    digest = config_hash(cfg)
    snapshots = sorted(set(cfg.snapshot_times()))
    if snapshots[0] < 1 or snapshots[-1] > cfg.steps:
        raise ValueError("snapshots must lie in [1, steps]")
    state = _initial_state(cfg, cfg.steps)
    total0 = measure(state).total()
    failures: list[str] = []
    sum_drift = 0.0
    max_imag = 0.0
    norm_trace = []
    done = 0
    for n_snap in snapshots:
        state = evolve(state, n_snap - done)
        done = n_snap
        mu = measure(state)
        xs = mu.positions()
        _write_csv(
            out / f"measure_n{n_snap}.csv",
            "n,x,re_mu,im_mu",
            (
                (n_snap, int(x), float(v.real), float(v.imag))
                for x, v in zip(xs, mu.values)
            ),
            digest,
        )
        if cfg.emit_normalized:
            _write_csv(
                out / f"normalized_n{n_snap}.csv",
                "xbar,n_times_mu",
                (
                    (float(x / n_snap), float(n_snap * v.real))
                    for x, v in zip(xs, mu.values)
                ),
                digest,
            )
        if cfg.emit_band_field:
            field = band_field(state)
            _write_csv(
                out / f"band_n{n_snap}.csv",
                "n,x,y,re,im",
                (
                    (n_snap, x, y, float(v.real), float(v.imag))
                    for (x, y), v in sorted(field.items())
                ),
                digest,
            )
        drift = abs(mu.total() - total0)
        sum_drift = max(sum_drift, drift)
        max_imag = max(max_imag, mu.max_abs_imag())
        norm_trace.append([n_snap, state.norm()])
        if drift > cfg.conservation_tol:
            failures.append(f"measure sum drift {drift:.3e} at n={n_snap}")
    # The conjugate-mirror symmetry forcing a real measure on symmetric
    # stripes holds for product and mixed starts; arbitrary band vectors
    # may legitimately carry imaginary parts, which are only recorded.
    if cfg.width() % 2 == 1 and cfg.init != "band" and max_imag > cfg.imag_tol:
        failures.append(f"odd-width imaginary residue {max_imag:.3e}")
    s, t = cfg.stripe()
    _write_json(
        out / "provenance.json",
        {
            "config": config_to_text(cfg),
            "command": "simulate",
            "stripe": [s, t],
            "initial_measure_total": [total0.real, total0.imag],
            "max_abs_imag": max_imag,
            "measure_sum_drift": sum_drift,
            "norm_trace": norm_trace,
            "failures": failures,
            "deterministic": True,
        },
        digest,
    )
    for msg in failures:
        print(f"FAIL simulate: {msg}", file=sys.stderr)
    return 1 if failures else 0


def cmd_spectrum(cfg: RunConfig, out: Path) -> int:
    digest = config_hash(cfg)
    coin = cfg.coin_obj()
    s, t = cfg.stripe()
    m = t - s + 1
    if cfg.kgrid < 2:
        raise ValueError("kgrid must be >= 2")
    failures = []
    rows = []
    for i in range(cfg.kgrid):
        k = 2.0 * math.pi * i / cfg.kgrid
        values = eig(build_w(coin, s, t, k)).values
        for lam in sorted(values, key=lambda z: (-abs(z), z.real, z.imag)):
            rows.append((m, float(k), float(lam.real), float(lam.imag), float(abs(lam))))
            if abs(lam) > 1.0 + 1e-10:
                failures.append(f"|lambda| = {abs(lam)} > 1 + 1e-10 at k={k}")
    _write_csv(out / "spectrum.csv", "M,k,re_lambda,im_lambda,abs_lambda", rows, digest)
    for msg in failures:
        print(f"FAIL spectrum: {msg}", file=sys.stderr)
    return 1 if failures else 0


def cmd_kato(cfg: RunConfig, out: Path) -> int:
    digest = config_hash(cfg)
    coin = cfg.coin_obj()
    s, t = cfg.stripe()
    red = kato_reduction(coin, s, t)
    eye = np.eye(red.pi.shape[0])
    checks = {
        "pi_idempotent": float(np.max(np.abs(red.pi @ red.pi - red.pi))),
        "pi_hermitian": float(np.max(np.abs(red.pi - red.pi.conj().T))),
        "pi_rank": float(np.trace(red.pi).real),
        "r_skew_hermitian": float(np.max(np.abs(red.r + red.r.conj().T))),
        "minimal_poly_residual": minimal_poly_residual(coin, s, t),
        "char_poly_residual": char_poly_residual(coin, s, t),
        "minimality_witness": minimality_witness(coin, s, t),
        "eigvec_residuals": [
            float(np.linalg.norm(red.r @ v - lam * v))
            for lam, v in zip(red.eigenvalues, red.vectors)
        ],
    }
    projections = []
    for d in (1e-1, 1e-2, 1e-3):
        rep = perturbed_projection_check(d, coin, s, t)
        projections.append(
            {
                "delta": rep["delta"],
                "matched_eigenvalues": [[z.real, z.imag] for z in map(complex, rep["eigenvalues"])],
                "residuals": rep["residuals"],
            }
        )
    failures = []
    if checks["pi_idempotent"] > 1e-12 or checks["pi_hermitian"] > 1e-12:
        failures.append("projection is not an orthogonal projection to 1e-12")
    if abs(checks["pi_rank"] - 3.0) > 1e-10:
        failures.append(f"projection rank {checks['pi_rank']} != 3")
    if checks["r_skew_hermitian"] > 1e-12:
        failures.append("reduced generator is not skew-Hermitian to 1e-12")
    if checks["minimal_poly_residual"] > 1e-12:
        failures.append("minimal polynomial residual above 1e-12")
    if checks["minimality_witness"] < 0.1:
        failures.append("minimality witness below 0.1")
    if max(checks["eigvec_residuals"]) > 1e-12:
        failures.append("reduced eigenpair residual above 1e-12")
    _write_json(
        out / "kato.json",
        {
            "command": "kato",
            "stripe": [s, t],
            "pi": _complex_matrix(red.pi),
            "t1": _complex_matrix(red.t1),
            "r": _complex_matrix(red.r),
            "onb": [_complex_vector(p) for p in red.onb],
            "eigenvalues": _complex_vector(red.eigenvalues),
            "eigenvectors": [_complex_vector(v) for v in red.vectors],
            "checks": checks,
            "perturbed_projections": projections,
            "failures": failures,
        },
        digest,
    )
    for msg in failures:
        print(f"FAIL kato: {msg}", file=sys.stderr)
    return 1 if failures else 0


def cmd_limits(cfg: RunConfig, out: Path) -> int:
    digest = config_hash(cfg)
    coin = cfg.coin_obj()
    s, t = cfg.stripe()
    n = cfg.steps
    if cfg.init != "product":
        raise ValueError(
            "the limits command compares against product-start mode weights; "
            "set init = product"
        )
    state = _initial_state(cfg, n)
    cell_spinor = coin.matrix @ (np.asarray(cfg.g, dtype=complex))
    cell_spinor /= np.linalg.norm(cell_spinor)
    c_minus, c_zero, c_plus = limit_coefficients(cell_spinor)
    state = evolve(state, n)
    mu = measure(state)
    masses = mode_masses(mu, cfg.w_coeff)
    profiles = limit_profiles(cell_spinor)
    distances = {}
    distances_cumulant = {}
    for p in profiles:
        distances[p.mode] = scaled_cdf_distance(mu, p, cfg.w_coeff)
        var = p.variance if p.mode == "center" else SIDE_VARIANCE_CUMULANT
        q = LimitProfile(p.mode, p.weight, p.speed, var)
        distances_cumulant[p.mode] = scaled_cdf_distance(mu, q, cfg.w_coeff)
    windows = mode_windows(n, cfg.w_coeff)
    expected = (c_minus.real, c_zero.real, c_plus.real)
    failures = []
    for name, got, want in zip(("left", "center", "right"), masses, expected):
        if abs(got - want) > 0.02:
            failures.append(f"{name} mass {got:.4f} vs {want:.4f} (tol 0.02)")
    nonreal = abs(np.conj(cell_spinor[0]) * cell_spinor[1] - (np.conj(cell_spinor[0]) * cell_spinor[1]).real) > 1e-14
    _write_json(
        out / "limits.json",
        {
            "command": "limits",
            "n": n,
            "coefficients": {
                "c_minus": [c_minus.real, c_minus.imag],
                "c_zero": [c_zero.real, c_zero.imag],
                "c_plus": [c_plus.real, c_plus.imag],
                "nonreal_flag": bool(nonreal),
            },
            "masses": {"left": masses[0], "center": masses[1], "right": masses[2]},
            "windows": {
                "w_coeff": cfg.w_coeff,
                "left": list(windows[0]),
                "center": list(windows[1]),
                "right": list(windows[2]),
            },
            "cdf_distances": distances,
            "cdf_distances_corrected_side_variance": distances_cumulant,
            "side_variances": {
                "stated": SIDE_VARIANCE,
                "second_order_cumulant": SIDE_VARIANCE_CUMULANT,
            },
            "max_abs_imag": mu.max_abs_imag(),
            "failures": failures,
        },
        digest,
    )
    for msg in failures:
        print(f"FAIL limits: {msg}", file=sys.stderr)
    return 1 if failures else 0


def _characteristics_row(args) -> tuple[list, dict]:
    cfg_text, m = args
    cfg = config_from_text(cfg_text)
    coin = cfg.coin_obj()
    n = cfg.steps
    g = np.asarray(cfg.g, dtype=complex)
    g = g / np.linalg.norm(g)
    series = run_series(coin, m, n, g=g, delta=cfg.delta)
    lo = cfg.fit_lo or n // 2
    hi = cfg.fit_hi or n
    nmax = cfg.ncrit_nmax or 4 * m + 40
    nc = n_crit(coin, m, nmax, tol=cfg.ncrit_tol, g=g)
    sel = series.slice_window(lo, hi)
    xmax = float(np.nanmean(series.peak_xbar[sel]))
    ratio = height_ratio(series, lo, hi)
    gamma = tail_exponent(series, (lo, hi), cfg.support_threshold)
    r_center = decay_exponent(series, "center", (lo, hi))
    r_side = decay_exponent(series, "side", (lo, hi))
    row = [m, nc, xmax, ratio, gamma.slope, r_center.slope, r_side.slope]
    sidecar = {
        "M": m,
        "n": n,
        "n_crit": {"value": nc, "n_max": nmax, "tol": cfg.ncrit_tol},
        "fit_window": [lo, hi],
        "delta": cfg.delta,
        "support_threshold": cfg.support_threshold,
        "support_thresholds_recorded": list(SUPPORT_THRESHOLDS),
        "gamma": {
            "slope": gamma.slope,
            "rms_residual": gamma.rms_residual,
            "used_window": list(gamma.used_window),
            "oscillating": gamma.oscillating,
            "sensitivity": gamma.sensitivity,
        },
        "r_center": {"slope": r_center.slope, "rms_residual": r_center.rms_residual},
        "r_side": {"slope": r_side.slope, "rms_residual": r_side.rms_residual},
        "max_sum_deviation": float(np.max(np.abs(series.sum_re - series.sum_re[0]))),
        "max_abs_imag": float(np.max(series.max_abs_im)),
    }
    return row, sidecar


def cmd_characteristics(cfg: RunConfig, out: Path, workers: int = 1) -> int:
    digest = config_hash(cfg)
    jobs = [(config_to_text(cfg), m) for m in cfg.mlist]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_characteristics_row, jobs))
    else:
        results = [_characteristics_row(j) for j in jobs]
    rows = [r for r, _ in results]
    _write_csv(
        out / "characteristics.csv",
        "M,n_crit,xmax,ratio,gamma,r_center,r_side",
        (
            (int(r[0]), int(r[1]), *(float(v) for v in r[2:]))
            for r in rows
        ),
        digest,
    )
    _write_json(
        out / "characteristics.json",
        {"command": "characteristics", "per_m": [sc for _, sc in results]},
        digest,
    )
    return 0


def cmd_oracle_check(cfg: RunConfig, out: Path) -> int:
    digest = config_hash(cfg)
    coin = cfg.coin_obj()
    report = {}
    failures = []
    # Unitary-limit suite: untouched stripe reproduces the plain walk.
    n = 50
    worst_qw = 0.0
    for g in (np.array([1.0, 0.0]), np.array([1.0, 1.0]) / math.sqrt(2)):
        state = init_product(coin, g, -n, n, n)
        ref_prev = None
        for j in range(1, n + 1):
            state = step(state)
            got = measure(state).values
            ref = qw1d_reference(coin, g, j)
            worst_qw = max(worst_qw, float(np.max(np.abs(got - ref))))
    report["unitary_limit_max_abs_diff"] = worst_qw
    if worst_qw > 1e-12:
        failures.append(f"unitary-limit oracle deviation {worst_qw:.3e}")
    # Classical-limit suite: width 1 reproduces the dissipative recursion.
    n = 500
    worst_cl = 0.0
    worst_neg = 0.0
    worst_sum = 0.0
    for g in (np.array([1.0, 0.0]), np.array([1.0, 1.0]) / math.sqrt(2)):
        state = init_product(coin, g, 0, 0, n)
        state = evolve(state, n)
        got = measure(state).values
        ref = oqrw_reference(coin, g, n)
        worst_cl = max(worst_cl, float(np.max(np.abs(got - ref))))
        worst_neg = min(worst_neg, float(got.real.min()))
        worst_sum = max(worst_sum, abs(got.sum() - 1.0))
    report["classical_limit_max_abs_diff"] = worst_cl
    report["classical_limit_min_value"] = worst_neg
    report["classical_limit_sum_deviation"] = worst_sum
    if worst_cl > 1e-12:
        failures.append(f"classical-limit oracle deviation {worst_cl:.3e}")
    if worst_neg < -1e-12 or worst_sum > 1e-12:
        failures.append("classical-limit positivity/normalization violated")
    _write_json(
        out / "oracle_check.json",
        {"command": "oracle-check", **report, "failures": failures},
        digest,
    )
    for msg in failures:
        print(f"FAIL oracle-check: {msg}", file=sys.stderr)
    return 1 if failures else 0


def cmd_sweep(cfg: RunConfig, out: Path) -> int:
    digest = config_hash(cfg)
    n = cfg.steps
    for m in cfg.mlist:
        sub = config_from_text(config_to_text(cfg))
        sub.m, sub.s, sub.t = m, 1, 0  # s > t resets to the width-m placement
        state = _initial_state(sub, n)
        state = evolve(state, n)
        mu = measure(state)
        xs = mu.positions()
        _write_csv(
            out / f"measure_M{m}_n{n}.csv",
            "n,x,re_mu,im_mu",
            ((n, int(x), float(v.real), float(v.imag)) for x, v in zip(xs, mu.values)),
            digest,
        )
        _write_csv(
            out / f"normalized_M{m}_n{n}.csv",
            "xbar,n_times_mu",
            ((float(x / n), float(n * v.real)) for x, v in zip(xs, mu.values)),
            digest,
        )
    _write_json(out / "provenance.json", {"command": "sweep", "config": config_to_text(cfg)}, digest)
    return 0


# --------------------------------------------------------------------------
# entry point
# --------------------------------------------------------------------------


class _NoRandomGuard:
    """With --seedless, poison numpy's RNG entry points for the run."""

    _names = ("random", "rand", "randn", "randint", "choice", "seed", "normal", "uniform")

    def __enter__(self):
        def _raise(*_a, **_k):
            raise RuntimeError("randomness is forbidden in a --seedless run")

        self._saved = [(np.random, n, getattr(np.random, n)) for n in self._names]
        for mod, name, _ in self._saved:
            setattr(mod, name, _raise)
        return self

    def __exit__(self, *exc):
        for mod, name, fn in self._saved:
            setattr(mod, name, fn)
        return False


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stripewalk",
        description="Simulate and analyze the stripe-cut quantum walk.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("simulate", "spectrum", "kato", "limits", "characteristics", "oracle-check", "sweep"):
        p = sub.add_parser(name)
        p.add_argument("--config", default=None, help="flat key=value config file")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--workers", type=int, default=1, help="parallel sweep jobs")
        p.add_argument(
            "--seedless",
            action="store_true",
            help="assert that the run draws no randomness",
        )
        p.add_argument("--steps", type=int, default=None, help="override steps")
        p.add_argument("--m", type=int, default=None, help="override stripe width")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = load_config(args.config, {"steps": args.steps, "m": args.m})
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    dispatch = {
        "simulate": lambda: cmd_simulate(cfg, out),
        "spectrum": lambda: cmd_spectrum(cfg, out),
        "kato": lambda: cmd_kato(cfg, out),
        "limits": lambda: cmd_limits(cfg, out),
        "characteristics": lambda: cmd_characteristics(cfg, out, args.workers),
        "oracle-check": lambda: cmd_oracle_check(cfg, out),
        "sweep": lambda: cmd_sweep(cfg, out),
    }
    runner = dispatch[args.command]
    if args.seedless:
        with _NoRandomGuard():
            return runner()
    return runner()


if __name__ == "__main__":
    sys.exit(main())
