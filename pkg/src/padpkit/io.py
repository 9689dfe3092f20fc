"""File formats: scenario JSON, binary PADP exchange, CSV results, manifests.

Angles and delays carry explicit units in key names (``_deg``, ``_ns``,
``_hz``, ``_db``); everything is converted to radians/seconds/linear at the
boundary.  Output files are byte-deterministic for a given input + seed:
manifests carry input hashes, seeds and the package version, never
timestamps.
"""

import hashlib
import json
from dataclasses import dataclass

import numpy as np

from ._version import __version__
from .antenna import AntennaPattern, load_pattern_csv
from .estimation import Method
from .synthesis import ArrayConfig, MpcTruth, Padp, SoundingConfig

PADP_MAGIC = "padpkit-padp"


class ScenarioError(ValueError):
    """Scenario file failed validation; message names the offending field."""


@dataclass(frozen=True)
class Scenario:
    sounding: SoundingConfig
    array: ArrayConfig
    pattern: AntennaPattern
    mpcs: tuple
    experiment: dict
    sha256: str


def sha256_bytes(data):
    return hashlib.sha256(data).hexdigest()


def _need(obj, key, kind, path):
    if key not in obj:
        raise ScenarioError(f"{path}.{key}: missing required field")
    val = obj[key]
    if kind is float and isinstance(val, (int, float)) and not isinstance(val, bool):
        return float(val)
    if kind is int and isinstance(val, int) and not isinstance(val, bool):
        return val
    if isinstance(val, kind) and not isinstance(val, bool):
        return val
    raise ScenarioError(f"{path}.{key}: expected {kind.__name__}, got {type(val).__name__}")


def parse_scenario(text, base_dir=None):
    """Parse and validate a scenario JSON document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}")
    if not isinstance(doc, dict):
        raise ScenarioError("top level: expected an object")

    snd = _need(doc, "sounding", dict, "$")
    cfg = SoundingConfig(
        fc=_need(snd, "fc_hz", float, "sounding"),
        bw=_need(snd, "bw_hz", float, "sounding"),
        k=_need(snd, "k", int, "sounding"),
        pu=float(snd.get("pu", 1.0)),
        sigma2=float(snd.get("sigma2", 0.0)),
        g_tx=float(snd.get("g_tx", 1.0)),
    )

    arr_doc = _need(doc, "array", dict, "$")
    arr = ArrayConfig(m=_need(arr_doc, "m", int, "array"))

    pat_doc = _need(doc, "pattern", dict, "$")
    kind = _need(pat_doc, "kind", str, "pattern")
    if kind == "gaussian":
        g_max_db = _need(pat_doc, "g_max_db", float, "pattern")
        hpbw_deg = _need(pat_doc, "hpbw_deg", float, "pattern")
        pattern = AntennaPattern.gaussian(10.0 ** (g_max_db / 10.0), np.radians(hpbw_deg))
    elif kind == "tabulated":
        table_path = _need(pat_doc, "table_path", str, "pattern")
        if base_dir is not None:
            table_path = str(base_dir / table_path)
        hpbw = pat_doc.get("hpbw_deg")
        pattern = load_pattern_csv(table_path, hpbw=np.radians(hpbw) if hpbw else None)
    else:
        raise ScenarioError(f"pattern.kind: expected 'gaussian' or 'tabulated', got {kind!r}")

    mpcs_doc = _need(doc, "mpcs", list, "$")
    if not mpcs_doc:
        raise ScenarioError("mpcs: must contain at least one entry")
    mpcs = []
    for i, entry in enumerate(mpcs_doc):
        if not isinstance(entry, dict):
            raise ScenarioError(f"mpcs[{i}]: expected an object")
        path = f"mpcs[{i}]"
        try:
            mpcs.append(
                MpcTruth(
                    alpha=_need(entry, "alpha", float, path),
                    phase=np.radians(_need(entry, "phase_deg", float, path)),
                    tau=_need(entry, "tau_ns", float, path) * 1e-9,
                    phi=np.radians(_need(entry, "phi_deg", float, path)),
                )
            )
        except ValueError as exc:
            raise ScenarioError(f"{path}: {exc}") from exc

    experiment = doc.get("experiment", {})
    if not isinstance(experiment, dict):
        raise ScenarioError("experiment: expected an object")
    return Scenario(
        sounding=cfg,
        array=arr,
        pattern=pattern,
        mpcs=tuple(mpcs),
        experiment=experiment,
        sha256=sha256_bytes(text.encode() if isinstance(text, str) else text),
    )


def load_scenario(path):
    from pathlib import Path

    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ScenarioError(f"{path}: {exc}") from exc
    try:
        return parse_scenario(text, base_dir=p.parent)
    except ScenarioError as exc:
        raise ScenarioError(f"{path}: {exc}") from exc


def build_manifest(seed=None, inputs=None, config=None):
    return {
        "tool": "padpkit",
        "version": __version__,
        "seed": seed,
        "inputs": inputs or {},
        "config": config or {},
    }


def write_manifest_sidecar(out_path, manifest):
    path = str(out_path) + ".manifest.json"
    with open(path, "w") as fh:
        json.dump(manifest, fh, sort_keys=True, indent=2)
        fh.write("\n")
    return path


def write_padp(path, padp, manifest=None, scale="linear"):
    """Write a PADP file: one JSON header line, then row-major float64 LE.

    ``scale`` selects the stored payload unit ('linear' or 'db'); reading
    converts back to linear, so linear payloads round-trip losslessly.
    """
    if scale not in ("linear", "db"):
        raise ValueError("scale must be 'linear' or 'db'")
    m, k = padp.values.shape
    header = {
        "format": PADP_MAGIC,
        "version": 1,
        "m": m,
        "k": k,
        "asi_deg": float(np.degrees(padp.asi)),
        "delay_step_ns": padp.delta_tau * 1e9,
        "scale": scale,
        "manifest": manifest or {},
    }
    payload = padp.values
    if scale == "db":
        payload = 10.0 * np.log10(np.maximum(payload, np.finfo(np.float64).tiny))
    with open(path, "wb") as fh:
        fh.write(json.dumps(header, sort_keys=True).encode())
        fh.write(b"\n")
        fh.write(np.ascontiguousarray(payload, dtype="<f8").tobytes())


def read_padp(path):
    """Read a PADP file back into a (Padp, header) pair (no complex spectra)."""
    with open(path, "rb") as fh:
        header_line = fh.readline()
        blob = fh.read()
    try:
        header = json.loads(header_line)
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: bad PADP header: {exc}") from exc
    if header.get("format") != PADP_MAGIC:
        raise ValueError(f"{path}: not a PADP file (format={header.get('format')!r})")
    m, k = int(header["m"]), int(header["k"])
    values = np.frombuffer(blob, dtype="<f8")
    if values.size != m * k:
        raise ValueError(f"{path}: payload has {values.size} values, header says {m}x{k}")
    values = values.reshape(m, k).astype(np.float64)
    if header.get("scale") == "db":
        values = 10.0 ** (values / 10.0)
    if not np.all(np.isfinite(values)):
        raise ValueError(f"{path}: payload contains non-finite values")
    angles = 2.0 * np.pi * np.arange(m) / m
    delays = np.arange(k) * float(header["delay_step_ns"]) * 1e-9
    return Padp(values=values, angles=angles, delays=delays), header


def _fmt(x):
    if x is None:
        return ""
    if isinstance(x, float):
        if np.isnan(x):
            return "nan"
        return f"{x:.12g}"
    return str(x)


def _write_csv(path, columns, rows):
    with open(path, "w", newline="") as fh:
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def write_estimates_csv(path, estimates):
    """Estimates table: method, tau_ns, phi_deg, power_db, chi_hat, eps_deg, flags."""
    rows = []
    for e in sorted(estimates, key=lambda e: (e.method.value, e.tau, e.phi)):
        rows.append(
            (
                e.method.value,
                e.tau * 1e9,
                float(np.degrees(e.phi)),
                10.0 * np.log10(e.power) if e.power > 0 else -np.inf,
                e.chi_hat,
                float(np.degrees(e.eps)) if e.eps is not None else None,
                "clamped" if e.clamped else "",
            )
        )
    _write_csv(path, ["method", "tau_ns", "phi_deg", "power_db", "chi_hat", "eps_deg", "flags"], rows)


def write_crlb_csv(path, sweep_variable, entries):
    """CRLB sweep table; one row per (sweep value, arrival).

    The first six columns are the stable schema; ``mpc`` (arrival index)
    and ``flags`` are appended for multi-arrival sweeps.
    """
    rows = []
    for value, report in entries:
        n = report.values.shape[0]
        for l in range(n):
            rows.append(
                (
                    sweep_variable,
                    value,
                    float(np.degrees(np.sqrt(report.values[l, 2]))),
                    float(np.sqrt(report.values[l, 0])),
                    float(np.sqrt(report.values[l, 3]) * 1e9),
                    report.cond,
                    l,
                    "singular" if report.flagged else "",
                )
            )
    _write_csv(
        path,
        [
            "sweep_variable",
            "value",
            "sqrt_crlb_phi_deg",
            "sqrt_crlb_alpha",
            "sqrt_crlb_tau_ns",
            "cond_fim",
            "mpc",
            "flags",
        ],
        rows,
    )


def write_sweep_csv(path, sweep_rows):
    """Monte Carlo sweep table matching the run_sweep output."""
    rows = [
        (
            r.sweep_value,
            r.method.value,
            r.param,
            r.stats.rmsee,
            r.stats.mean_err,
            r.stats.mc_stderr,
            r.sqrt_crlb,
            r.stats.misses,
        )
        for r in sweep_rows
    ]
    _write_csv(
        path,
        ["sweep_value", "method", "param", "rmsee", "mean_err", "mc_stderr", "sqrt_crlb", "misses"],
        rows,
    )


def write_offset_csv(path, study):
    """Offset-study table: per (method, param) summary statistics."""
    rows = []
    for method, params in study.items():
        for param, stats in params.items():
            rows.append(
                (
                    method.value,
                    param,
                    stats.n,
                    stats.rmsee,
                    stats.mean_err,
                    stats.mean_abs_err,
                    stats.misses,
                )
            )
    _write_csv(
        path,
        ["method", "param", "n", "rmsee", "mean_err", "mean_abs_err", "misses"],
        rows,
    )


def parse_methods(spec):
    """Parse a comma-separated method list ('o1,o2,haed,haed+')."""
    out = []
    for name in spec.split(","):
        name = name.strip().lower()
        if not name:
            continue
        try:
            out.append(Method(name))
        except ValueError:
            valid = ", ".join(m.value for m in Method)
            raise ValueError(f"unknown method {name!r} (valid: {valid})")
    if not out:
        raise ValueError("no methods given")
    return out
