"""Sweeps, time series and analytic tables, written as reproducible CSV."""

from __future__ import annotations

import csv
import io
import itertools
import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .config import ConfigError, RunConfig
from .darkstates import (
    bright_energies,
    bright_population,
    dark_decay_rate,
    dark_populations,
    ladder_coupling,
    ladder_coupling_limit,
    qn_rn,
)
from .hilbert import basis_ket, ket2dm
from .model import SystemParams, hamiltonian, liouvillian
from .observables import concurrence_2x2, evaluate
from .solvers import IntegrationError, evolve, evolve_unitary, solve_auto, steady_state
from .strongdrive import (
    TruncationTailError,
    cat_ket,
    cat_projection,
    cat_state,
    coherent_embed,
    eff_hamiltonian_strong,
    time_for_rotation,
)

log = logging.getLogger(__name__)


@dataclass
class SweepResult:
    """A table with ``#``-prefixed metadata, rendered as CSV by :meth:`to_csv`."""

    kind: str
    header: list[str]
    rows: list[tuple] = field(default_factory=list)
    metadata: list[tuple[str, object]] = field(default_factory=list)
    axes: list[str] = field(default_factory=list)
    errors: list[str] = field(default_factory=list)

    @property
    def failed(self) -> bool:
        return bool(self.errors)

    def column(self, name: str) -> np.ndarray:
        """Numeric column with empty cells as ``nan``."""
        j = self.header.index(name)
        return np.array([np.nan if r[j] is None or r[j] == "" else r[j] for r in self.rows], dtype=float)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(f"# darkladder {__version__} {self.kind}\n")
        for key, value in self.metadata:
            buf.write(f"# {key} = {json.dumps(value)}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.header)
        for row in self.rows:
            writer.writerow([_cell(v) for v in row])
        return buf.getvalue()

    def write(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(self.to_csv())


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))  # shortest round-trip form
    return str(value)


# -- steady-state sweeps ---------------------------------------------------


def _ladder_undefined(p: SystemParams) -> bool:
    return p.g == 0 and p.omega23 == 0


def point_observables(rho: np.ndarray, p: SystemParams, names) -> dict:
    obs = evaluate(rho).as_dict()
    out = {}
    for name in names:
        if name in obs:
            out[name] = obs[name]
        elif name == "bright_population":
            out[name] = None if _ladder_undefined(p) else bright_population(rho, p)
        elif name.startswith("dark_p"):
            n = int(name[len("dark_p"):])
            defined = n <= p.n_max and (n == 0 or not _ladder_undefined(p))
            out[name] = float(dark_populations(rho, p, n)[n]) if defined else None
        else:
            raise KeyError(name)
    return out


def _solve_point(task):
    p, n_max, outputs = task
    try:
        if n_max is None:
            n_used, rho = solve_auto(p)
        else:
            p = p.replace(n_max=n_max)
            n_used, rho = n_max, steady_state(liouvillian(p))
        values = point_observables(rho, p.replace(n_max=n_used), outputs)
        return [values[o] for o in outputs], n_used, None
    except Exception as exc:  # noqa: BLE001 - isolated per grid point
        return [None] * len(outputs), None, f"{type(exc).__name__}: {exc}"


def run_sweep(config: RunConfig, workers: int = 1) -> SweepResult:
    """Steady-state observables on the configured 1D or 2D grid.

    Grid points are independent; with ``workers > 1`` they are farmed out to
    a process pool and collected back in grid order, so the output does not
    depend on the worker count.
    """
    if len(config.axes) not in (1, 2):
        raise ConfigError("a sweep needs one or two axes")
    outputs = sorted(config.outputs)
    names = [a.name for a in config.axes]
    grid = list(itertools.product(*(a.values() for a in config.axes)))
    tasks = [(config.params.replace(**dict(zip(names, pt))), config.n_max, outputs) for pt in grid]

    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_solve_point, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    else:
        results = [_solve_point(t) for t in tasks]

    res = SweepResult("sweep", names + outputs + ["n_max", "error"], metadata=config.resolved_items(), axes=names)
    for pt, (values, n_used, err) in zip(grid, results):
        res.rows.append(tuple(float(x) for x in pt) + tuple(values) + (n_used, err))
        if err:
            res.errors.append(f"{dict(zip(names, map(float, pt)))}: {err}")
    return res


# -- time evolution ---------------------------------------------------------


def _fixed_n_max(config: RunConfig) -> int:
    if config.n_max is not None:
        return config.n_max
    from .solvers import auto_truncate

    return auto_truncate(config.params)


def run_timeevo(config: RunConfig) -> SweepResult:
    """Master-equation evolution from ``|initial.level, initial.photons>``.

    Columns: ``t``, ``n_photon``, ``p33``, ``dark_p0..``, and with
    ``strong_regime`` the population ``fidelity_cat`` of the analytic cat
    state (expressed in the frame of the full Hamiltonian).
    """
    if config.time is None:
        raise ConfigError("timeevo needs time.t1 and time.n_steps")
    p = config.params.replace(n_max=_fixed_n_max(config))
    spec = p.spec
    level, photons = config.initial
    if photons > spec.n_max:
        raise ConfigError(f"initial.photons={photons} exceeds n_max={spec.n_max}")
    if config.strong_regime and p.omega12 <= 0:
        raise ConfigError("strong_regime needs params.omega12 > 0")
    n_dark = min(config.dark_states, spec.n_max + 1)
    rho0 = ket2dm(basis_ket(level, photons, spec))

    header = ["t", "n_photon", "p33"] + [f"dark_p{n}" for n in range(n_dark)]
    if config.strong_regime:
        header.append("fidelity_cat")
    items = config.resolved_items() + [("n_max_used", spec.n_max)]
    res = SweepResult("timeevo", header, metadata=items, axes=["t"])

    times = config.time.times
    try:
        states = evolve(p, rho0, config.time)
    except IntegrationError as exc:
        states = exc.states
        res.errors.append(f"{exc} (last good t={exc.last_time})")

    for t, rho in zip(times, states):
        obs = evaluate(rho)
        row = [float(t), obs.n_photon, obs.p33]
        row += _dark_cells(rho, p, n_dark)
        if config.strong_regime:
            psi = cat_ket(cat_state(t, p), spec, p)
            row.append(float(np.real(psi.conj() @ rho @ psi)))
        res.rows.append(tuple(row))
    return res


def _dark_cells(rho, p: SystemParams, count: int) -> list:
    if count == 0:
        return []
    if _ladder_undefined(p):
        # only |1,0> is singled out when both couplings vanish
        return [float(dark_populations(rho, p, 0)[0])] + [None] * (count - 1)
    return [float(x) for x in dark_populations(rho, p, count - 1)]


# -- analytic tables --------------------------------------------------------


def run_darkstate_report(p: SystemParams) -> SweepResult:
    """Closed-form ladder data for ``n = 0..n_max``."""
    header = ["n", "q", "r", "decay_rate", "e_plus", "e_minus", "ladder_coupling", "ladder_coupling_limit"]
    items = [(f"params.{k}", v) for k, v in _param_items(p)]
    res = SweepResult("darkstates", header, metadata=items, axes=["n"])
    degenerate = p.g == 0 and p.omega23 == 0
    for n in range(p.n_max + 1):
        if n == 0:
            q, r = 1.0, 0.0
        elif degenerate:
            q = r = None
        else:
            q, r = qn_rn(n, p.g, p.omega23)
        rate = dark_decay_rate(n, p) if n >= 1 else None
        ep, em = bright_energies(n, p) if n >= 1 else (None, None)
        link = None if degenerate else ladder_coupling(n, p)
        limit = None if (n > 0 and p.g == 0) else ladder_coupling_limit(n, p)
        res.rows.append((n, q, r, rate, ep, em, link, limit))
    return res


def _param_items(p: SystemParams):
    from dataclasses import fields

    for f in fields(p):
        v = getattr(p, f.name)
        yield f.name, ("auto" if v is None else v)


def cat_n_max(p: SystemParams, start: int = 8) -> int:
    """Smallest truncation (>= ``start``) holding coherent states up to ``|alpha| = 2 W23/g``."""
    from .hilbert import HilbertSpec

    amp = 2 * p.omega23 / p.g
    for n_max in range(start, 200):
        try:
            coherent_embed(amp, HilbertSpec(n_max))
            return n_max
        except TruncationTailError:
            continue
    raise ConfigError(f"cat amplitude {amp:g} too large for Fock truncation")


def run_catscan(config: RunConfig) -> SweepResult:
    """Analytic cat state against numerical evolution over a grid of rotation angles.

    ``fidelity_effective`` evolves ``|1,0>`` under the strong-drive effective
    Hamiltonian; ``fidelity_model`` under the full model (unitary when all
    rates vanish, otherwise the master equation), compared in the same frame.
    """
    p0 = config.params
    if p0.omega12 <= 0 or p0.g <= 0:
        raise ConfigError("catscan needs params.omega12 > 0 and params.g > 0")
    p = p0.replace(n_max=config.n_max if config.n_max is not None else cat_n_max(p0))
    spec = p.spec
    theta_axis = config.theta
    thetas = theta_axis.values() if theta_axis is not None else np.linspace(0.0, np.pi, 33)
    times = np.array([time_for_rotation(th, p) for th in thetas])

    psi0 = basis_ket(1, 0, spec)
    eff_states = evolve_unitary(eff_hamiltonian_strong(p, spec), psi0, times)
    dissipative = p.kappa > 0 or p.gamma31 > 0 or p.gamma32 > 0
    errors = []
    if dissipative:
        from .solvers import TimeGrid

        if times[0] != 0.0 or not np.allclose(np.diff(times), times[1] - times[0]):
            raise ConfigError("dissipative catscan needs an evenly spaced theta grid starting at 0")
        try:
            model_states = evolve(p, ket2dm(psi0), TimeGrid(0.0, float(times[-1]), len(times) - 1))
        except IntegrationError as exc:
            model_states = exc.states
            errors.append(f"{exc} (last good t={exc.last_time})")
    else:
        model_states = evolve_unitary(hamiltonian(p), psi0, times)

    header = [
        "theta_rot", "t", "phi",
        "alpha_plus_re", "alpha_plus_im", "alpha_minus_re", "alpha_minus_im",
        "p_detect_1", "p_detect_2", "fidelity_effective", "fidelity_model",
    ]
    items = config.resolved_items() + [("n_max_used", spec.n_max)]
    res = SweepResult("catscan", header, metadata=items, axes=["theta_rot"], errors=errors)
    for i, (th, t) in enumerate(zip(thetas, times)):
        snap = cat_state(t, p)
        rot = cat_ket(snap, spec)
        lab = cat_ket(snap, spec, p)
        f_eff = abs(np.vdot(rot, eff_states[i])) ** 2
        if i >= len(model_states):
            f_mod = None
        elif dissipative:
            f_mod = float(np.real(lab.conj() @ model_states[i] @ lab))
        else:
            f_mod = abs(np.vdot(lab, model_states[i])) ** 2
        p1, _ = cat_projection(snap, 1, spec)
        p2, _ = cat_projection(snap, 2, spec)
        res.rows.append((
            float(th), float(t), snap.phi,
            snap.alpha_plus.real, snap.alpha_plus.imag, snap.alpha_minus.real, snap.alpha_minus.imag,
            p1, p2, float(f_eff), None if f_mod is None else float(f_mod),
        ))
    return res


__all__ = [
    "SweepResult",
    "concurrence_2x2",
    "point_observables",
    "run_catscan",
    "run_darkstate_report",
    "run_sweep",
    "run_timeevo",
]
