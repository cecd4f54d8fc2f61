"""Command-line front end.

    ostrovsky wave      --p 1 [--c 1.05]
    ostrovsky spectrum  --p 1 --N 128
    ostrovsky pseudo    --p 1 --N 256 --window -0.8 0.8 -2 2 --res 60
    ostrovsky halfline  classify --mu 0.5
    ostrovsky pointspec --p 1 --lam 0 0.2 0.5j
    ostrovsky evolve    --mode nonlinear --init peaked_perturbed --p 1 --M 1024 --T 20
    ostrovsky report

Options may also come from ``--config file.json``; explicit flags win.
Exit status: 0 success, 1 numerical or I/O failure (diagnostics JSON on
stderr and in the output directory), 2 invalid configuration.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np

from . import emit

STRIP = {1: np.pi / 6, 2: np.pi / 4}


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    command: str = ""
    action: str = "classify"
    p: int = 1
    c: float | None = None
    N: int = 128
    M: int = 1024
    kappa: float = 0.0
    window: list = field(default_factory=lambda: [-0.8, 0.8, -2.0, 2.0])
    res: list = field(default_factory=lambda: [33, 17])
    eps: float = 0.02
    operator: str = "A"
    mu: str = "0.5"
    lam: list = field(default_factory=lambda: ["0"])
    mode: str = "nonlinear"
    init: str = "peaked_perturbed"
    amplitude: float = 0.01
    dt: float | None = None
    T: float = 10.0
    seed: int | None = None
    n_samples: int = 512
    out: str = "out"

    def validate(self):
        if self.p not in (1, 2):
            raise ConfigError("p must be 1 or 2")
        if self.N < 1 or self.M < 8:
            raise ConfigError("N and M must be positive")
        if abs(self.kappa) > 0.5:
            raise ConfigError("kappa must lie in [-1/2, 1/2]")
        if len(self.window) != 4 or self.window[0] >= self.window[1] or self.window[2] >= self.window[3]:
            raise ConfigError("window must be re_min re_max im_min im_max")
        if len(self.res) == 1:
            self.res = [self.res[0], self.res[0]]
        if min(self.res) < 8:
            raise ConfigError("resolution must be at least 8 per axis")
        if self.eps <= 0 or self.T <= 0:
            raise ConfigError("eps and T must be positive")
        if self.operator not in ("A", "A0"):
            raise ConfigError("operator must be A or A0")
        if self.command == "evolve":
            if self.mode not in ("linear", "nonlinear"):
                raise ConfigError("mode must be linear or nonlinear")
            if (self.mode == "linear" or self.init == "random_zero_mean") and self.seed is None:
                raise ConfigError("randomized runs need --seed")
        if self.command == "halfline" and self.action not in ("classify", "resolvent", "constraints"):
            raise ConfigError("halfline action must be classify, resolvent or constraints")
        for s in self.lam + [self.mu]:
            _complex(s)
        return self


def _complex(s) -> complex:
    try:
        return complex(str(s).replace(" ", ""))
    except ValueError:
        raise ConfigError(f"not a complex number: {s!r}") from None


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ostrovsky", description=__doc__.split("\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)
    S = argparse.SUPPRESS

    def common(sp):
        sp.add_argument("--config", help="JSON file with default options", default=S)
        sp.add_argument("--out", help="output directory (default: out)", default=S)
        sp.add_argument("--p", type=int, choices=(1, 2), default=S, help="nonlinearity power")

    sp = sub.add_parser("wave", help="peaked or smooth travelling-wave profile")
    common(sp)
    sp.add_argument("--c", type=float, default=S, help="speed of a smooth wave (omit for peaked)")
    sp.add_argument("--n-samples", dest="n_samples", type=int, default=S)

    sp = sub.add_parser("spectrum", help="eigenvalues of the Galerkin matrix")
    common(sp)
    for a, t in (("--N", int), ("--kappa", float), ("--c", float)):
        sp.add_argument(a, type=t, default=S)
    sp.add_argument("--operator", choices=("A", "A0"), default=S)

    sp = sub.add_parser("pseudo", help="pseudospectrum field with SVG portrait")
    common(sp)
    for a, t in (("--N", int), ("--kappa", float), ("--c", float), ("--eps", float)):
        sp.add_argument(a, type=t, default=S)
    sp.add_argument("--window", type=float, nargs=4, metavar=("RE0", "RE1", "IM0", "IM1"), default=S)
    sp.add_argument("--res", type=int, nargs="+", default=S, help="points per axis (one or two ints)")
    sp.add_argument("--operator", choices=("A", "A0"), default=S)

    sp = sub.add_parser("halfline", help="line-operator oracles")
    common(sp)
    sp.add_argument("action", choices=("classify", "resolvent", "constraints"))
    sp.add_argument("--mu", default=S, help="complex spectral parameter, e.g. 0.5 or 2+1j")

    sp = sub.add_parser("pointspec", help="point-spectrum scan")
    common(sp)
    sp.add_argument("--lam", nargs="+", default=S, help="complex lambda values")

    sp = sub.add_parser("evolve", help="linear or nonlinear time evolution")
    common(sp)
    sp.add_argument("--mode", choices=("linear", "nonlinear"), default=S)
    sp.add_argument("--init", choices=("peaked_perturbed", "smooth_wave", "small_cosine", "random_zero_mean",
                                       "eigenvector"), default=S)
    for a, t in (("--N", int), ("--M", int), ("--c", float), ("--amplitude", float), ("--dt", float),
                 ("--T", float), ("--seed", int)):
        sp.add_argument(a, type=t, default=S)

    sp = sub.add_parser("report", help="pseudospectral portraits for p=1 and p=2")
    common(sp)
    for a, t in (("--N", int), ("--eps", float)):
        sp.add_argument(a, type=t, default=S)
    sp.add_argument("--res", type=int, nargs="+", default=S)
    return ap


def make_config(ns: argparse.Namespace) -> ExperimentConfig:
    opts = {}
    cfg_path = getattr(ns, "config", None)
    if cfg_path:
        try:
            opts.update(json.loads(Path(cfg_path).read_text()))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {cfg_path}: {exc}") from None
    opts.update({k: v for k, v in vars(ns).items() if k != "config"})
    known = {f.name for f in fields(ExperimentConfig)}
    unknown = set(opts) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    return ExperimentConfig(**opts).validate()


# --- runners -----------------------------------------------------------------

def _profile(cfg):
    from .waves import smooth_wave_solve
    if cfg.c is None:
        return f"peaked:{cfg.p}"
    return smooth_wave_solve(cfg.c, cfg.p, n_samples=max(cfg.n_samples, 4 * cfg.N))


def _matrix(cfg):
    from .spectral_ops import assemble_operator
    return assemble_operator(_profile(cfg), cfg.N, cfg.kappa, include_K=cfg.operator == "A")


def run_wave(cfg, out):
    from .waves import peaked_profile, smooth_wave_solve
    prof = peaked_profile(cfg.p, cfg.n_samples) if cfg.c is None else smooth_wave_solve(cfg.c, cfg.p, n_samples=cfg.n_samples)
    emit.write_csv(out / "wave.csv", ["z", "u"], zip(prof.grid, prof.values))
    summary = {"p": prof.p, "c": prof.c, "kind": prof.kind, "mean": prof.mean(),
               "max": float(prof.values.max()), **{k: v for k, v in prof.info.items()}}
    emit.write_json(out / "wave.json", summary)
    return summary


def run_spectrum(cfg, out):
    from .spectra import eigenvalues
    res = eigenvalues(_matrix(cfg))
    emit.write_csv(out / "spectrum.csv", ["re", "im", "residual"], emit.spectrum_rows(res))
    return {"count": len(res.eigenvalues), "abscissa": res.abscissa, "max_residual": float(res.residuals.max())}


def _pseudo(cfg, out, stem):
    from .spectra import pseudospectrum_field, strip_estimate
    w = cfg.window
    fld = pseudospectrum_field(_matrix(cfg), (w[0], w[1]), (w[2], w[3]), tuple(cfg.res))
    emit.write_csv(out / f"{stem}.csv", ["re", "im", "sigma_min"], emit.field_rows(fld))
    b = STRIP[cfg.p]
    emit.field_svg(fld, out / f"{stem}.svg", guides=(-b, b),
                   title=f"σmin(A − λ), p={cfg.p}, N={cfg.N}, κ={cfg.kappa:g}")
    est = strip_estimate(fld, cfg.eps)
    return {"strip_estimate": est, "eps": cfg.eps, "predicted": [-b, b],
            "min_sigma": float(fld.sigma_min.min())}


def run_pseudo(cfg, out):
    return _pseudo(cfg, out, "pseudo")


def run_halfline(cfg, out):
    from . import halfline as hl
    mu = _complex(cfg.mu)
    if cfg.action == "classify":
        return {"mu": mu, "region": hl.classify_mu(mu).region}
    f = hl.HalflineFunction.from_callable(lambda y: np.tanh(y) / np.cosh(y))
    if cfg.action == "resolvent":
        w = hl.resolvent_solve(mu, f)
        ratio = w.norm() / f.norm()
        emit.write_csv(out / "resolvent.csv", ["y", "re_w", "im_w"],
                       zip(w.grid[::100], w.values.real[::100], w.values.imag[::100]))
        return {"mu": mu, "residual": w.residual, "norm_ratio": ratio, "bound": hl.bound_constant(mu)}
    primary, secondary = hl.residual_constraints(mu, f)
    return {"mu": mu, "primary": primary, "secondary": secondary}


def run_pointspec(cfg, out):
    from .pointspec import point_spectrum_scan
    lams = [_complex(s) for s in cfg.lam]
    adm, details = point_spectrum_scan(lams, cfg.p)
    rows = [(l.real, l.imag, int(l in adm), len(details[l]["members"])) for l in lams]
    emit.write_csv(out / "pointspec.csv", ["re", "im", "admissible", "domain_members"], rows)
    return {"admissible": adm}


def run_evolve(cfg, out):
    from . import evolution as ev
    if cfg.mode == "linear":
        from .spectral_ops import FourierVector, assemble_operator
        from .spectra import eigenvalues
        A = assemble_operator(f"peaked:{cfg.p}", cfg.N)
        if cfg.init == "eigenvector":
            s = eigenvalues(A)
            _, v = s.nearest(s.eigenvalues[np.argmax(s.eigenvalues.real)])
            v0 = FourierVector(cfg.N, v)
        else:
            v0 = ev.make_initial_data("random_zero_mean", {"N": cfg.N}, seed=cfg.seed)
        tr = ev.evolve_linear(A, v0, cfg.T, cfg.dt)
        emit.write_csv(out / "trace.csv", ["t", "norm"], zip(tr.times, tr.norms))
        return {"fitted_rate": tr.fitted_rate, "overflow": tr.overflow, "predicted_bound": STRIP[cfg.p]}
    params = {"p": cfg.p, "M": cfg.M, "amplitude": cfg.amplitude}
    if cfg.init == "smooth_wave":
        params["c"] = cfg.c if cfg.c is not None else 1.05
    u0 = ev.make_initial_data(cfg.init, params, cfg.seed)
    tr = ev.evolve_nonlinear(u0, cfg.p, cfg.T, cfg.dt)
    emit.write_csv(out / "trace.csv", ["t", "norm", "max_slope"],
                   zip(tr.times, tr.norms, tr.diagnostics["slopes"]))
    return {"breaking_time": tr.breaking_time, "l2_drift": tr.diagnostics["l2_drift"],
            "max_mean": tr.diagnostics["max_mean"]}


def run_report(cfg, out):
    summary = {}
    for p in (1, 2):
        sub = ExperimentConfig(**{**asdict(cfg), "p": p, "c": None, "kappa": 0.0, "operator": "A"})
        summary[f"p{p}"] = _pseudo(sub, out, f"portrait_p{p}")
    emit.write_json(out / "report.json", summary)
    return summary


RUNNERS = {"wave": run_wave, "spectrum": run_spectrum, "pseudo": run_pseudo, "halfline": run_halfline,
           "pointspec": run_pointspec, "evolve": run_evolve, "report": run_report}


def run(command: str, cfg: ExperimentConfig):
    cfg.command = command
    cfg.validate()
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    result = RUNNERS[command](cfg, out)
    emit.write_sidecar(out / f"{command}", asdict(cfg), {"seconds": time.perf_counter() - t0})
    return result


def _fail(code, kind, exc, out=None):
    diag = {"error": kind, "type": type(exc).__name__, "message": str(exc)}
    diag.update(getattr(exc, "diagnostics", {}) or {})
    if hasattr(exc, "residual"):
        diag["residual"] = exc.residual
    text = json.dumps(emit._jsonable(diag), sort_keys=True)
    print(text, file=sys.stderr)
    if out is not None and code == 1:
        try:
            emit.write_json(Path(out) / "diagnostics.json", diag)
        except OSError:
            pass
    return code


def main(argv=None) -> int:
    ap = build_parser()
    ns = ap.parse_args(argv)  # argparse exits with status 2 on usage errors
    try:
        cfg = make_config(ns)
        cfg.command = ns.command
        cfg.validate()
    except (ConfigError, TypeError) as exc:
        return _fail(2, "invalid configuration", exc)
    try:
        result = run(ns.command, cfg)
    except (ValueError, KeyError) as exc:
        return _fail(2, "invalid configuration", exc)
    except (RuntimeError, ArithmeticError, np.linalg.LinAlgError, OSError) as exc:
        return _fail(1, "numerical or I/O failure", exc, cfg.out)
    print(json.dumps(emit._jsonable(result), sort_keys=True))
    return 0


if __name__ == "__main__":
    sys.exit(main())
