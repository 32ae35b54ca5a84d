"""Parameter sweeps that regenerate the data behind the CPF figures.

A :class:`SweepSpec` varies one parameter of a scenario template and
evaluates the requested outputs for one or more sources. Results are long
format CSV rows ``axis,source,metric,value``.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .analytics import (
    CpfScenario,
    bounds_from_fidelity,
    hypothesis_trace_distance,
    scenario_fidelity,
)
from .receiver import (
    CLICK_MODELS,
    ReceiverModel,
    click_prob_coherent,
    click_prob_fock,
    p_error_minmax,
    simulate_receiver,
)
from .sources import Coherent, Fock, GenBipartite, make_source

AXES = ("M", "gamma0", "gamma1", "N", "a")
OUTPUTS = ("bounds", "receiver_analytic", "receiver_mc", "fidelity", "trace_distance")
RECEIVER_SOURCES = ("coherent", "fock")


@dataclass(frozen=True)
class SweepSpec:
    scenario: CpfScenario
    sweep_axis: str
    axis_values: tuple
    outputs: tuple[str, ...] = ("bounds",)
    sources: tuple[str, ...] = ()
    label: str = ""
    trials: int = 100_000
    seed: int = 0
    click_model: str = "exactly_one"

    def __post_init__(self):
        if self.sweep_axis not in AXES:
            raise ValueError(f"sweep_axis must be one of {AXES}, got {self.sweep_axis!r}")
        values = tuple(self.axis_values)
        if not values:
            raise ValueError("axis_values must not be empty")
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ValueError("axis_values must be strictly increasing")
        if self.sweep_axis in ("M", "N"):
            if any(float(v) != int(v) for v in values):
                raise ValueError(f"{self.sweep_axis} values must be integers")
            values = tuple(int(v) for v in values)
        object.__setattr__(self, "axis_values", values)
        bad = set(self.outputs) - set(OUTPUTS)
        if bad or not self.outputs:
            raise ValueError(f"outputs must be a non-empty subset of {OUTPUTS}, got {list(self.outputs)}")
        if self.click_model not in CLICK_MODELS:
            raise ValueError(f"click_model must be one of {CLICK_MODELS}")
        if self.trials < 1:
            raise ValueError("trials must be positive")
        # build every point once so incompatible axis/source combinations fail early
        for src in self.source_list():
            for v in values:
                point_scenario(self, src, v)
            if {"receiver_analytic", "receiver_mc"} & set(self.outputs) and src.kind not in RECEIVER_SOURCES:
                raise ValueError(f"receiver outputs need a coherent or fock source, got {src.kind}")

    def source_list(self) -> list:
        if not self.sources:
            return [self.scenario.source]
        return [make_source(name) if isinstance(name, str) else name for name in self.sources]

    def source_label(self, src) -> str:
        return f"{src.kind}[{self.label}]" if self.label else src.kind


def point_scenario(spec: SweepSpec, source, value) -> CpfScenario:
    base = spec.scenario.replace(source=source)
    axis = spec.sweep_axis
    if axis == "M":
        return base.replace(m_uses=int(value))
    if axis == "N":
        return base.replace(n_boxes=int(value))
    if axis == "gamma0":
        return base.replace(gamma0=float(value))
    if axis == "gamma1":
        return base.replace(gamma1=float(value))
    if not isinstance(source, GenBipartite):
        raise ValueError(f"axis 'a' only applies to gen_bipartite, not {source.kind}")
    return base.replace(source=GenBipartite(float(value)))


def receiver_model(scenario: CpfScenario, click_model: str = "exactly_one") -> ReceiverModel:
    src = scenario.source
    if isinstance(src, Coherent):
        pt = click_prob_coherent(scenario.gamma1, src.n_bar, click_model)
        pr = click_prob_coherent(scenario.gamma0, src.n_bar, click_model)
    elif isinstance(src, Fock):
        pt, pr = click_prob_fock(scenario.gamma1), click_prob_fock(scenario.gamma0)
    else:
        raise ValueError(f"no photon-counting model for {src.kind}")
    return ReceiverModel.from_probs(pt, pr)


Row = tuple[float, str, str, float]


def _rows_for_source(spec: SweepSpec, src) -> Iterable[Row]:
    fid_cache: dict = {}
    label = spec.source_label(src)
    for index, value in enumerate(spec.axis_values):
        sc = point_scenario(spec, src, value)
        if "bounds" in spec.outputs or "fidelity" in spec.outputs:
            # fidelity does not depend on M, so a sweep over M reuses it
            key = (sc.n_boxes, sc.gamma0, sc.gamma1, sc.source)
            if key not in fid_cache:
                fid_cache[key] = scenario_fidelity(sc)
            F = fid_cache[key]
            if "fidelity" in spec.outputs:
                yield value, label, "fidelity", F
            if "bounds" in spec.outputs:
                b = bounds_from_fidelity(sc.source, sc.n_boxes, sc.m_uses, F)
                yield value, label, "lower", b.lower
                yield value, label, "upper", b.upper
        if "trace_distance" in spec.outputs:
            yield value, label, "trace_distance", hypothesis_trace_distance(sc)
        if {"receiver_analytic", "receiver_mc"} & set(spec.outputs):
            model = receiver_model(sc, spec.click_model)
            if "receiver_analytic" in spec.outputs:
                yield value, label, "receiver_err", p_error_minmax(sc.n_boxes, sc.m_uses, model)
            if "receiver_mc" in spec.outputs:
                # one independent stream per (source, axis point)
                seed = _mix((spec.seed, index, RECEIVER_SOURCES.index(src.kind)))
                sim = simulate_receiver(sc.n_boxes, sc.m_uses, model, spec.trials, seed)
                yield value, label, "receiver_mc_err", sim.p_err_estimate
                yield value, label, "receiver_mc_stderr", sim.std_error


def _mix(parts: tuple[int, ...]) -> int:
    return int(np.random.SeedSequence(parts).generate_state(1, np.uint64)[0])


def evaluate(specs: Iterable[SweepSpec]) -> list[Row]:
    """All rows for ``specs``, sorted by source, metric and axis value."""
    rows = [row for spec in specs for src in spec.source_list() for row in _rows_for_source(spec, src)]
    rows.sort(key=lambda r: (r[1], r[2], r[0]))
    return rows


def format_csv(rows: list[Row]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["axis", "source", "metric", "value"])
    for axis, source, metric, value in rows:
        writer.writerow([f"{axis:.12g}", source, metric, f"{value:.12g}"])
    return buf.getvalue()


def advantage_summary(rows: list[Row]) -> list[str]:
    """Axis points where a quantum upper bound or receiver error beats the coherent lower bound."""
    table: dict[tuple[str, str], dict[float, float]] = {}
    for axis, source, metric, value in rows:
        table.setdefault((source, metric), {})[axis] = value
    lines = []
    classical = {s: v for (s, m), v in table.items() if m == "lower" and s.startswith("coherent")}
    for c_label, c_lower in sorted(classical.items()):
        suffix = c_label[len("coherent"):]
        for (source, metric), values in sorted(table.items()):
            if source.startswith("coherent") or not source.endswith(suffix):
                continue
            if metric not in ("upper", "receiver_err"):
                continue
            wins = [x for x, v in sorted(values.items()) if x in c_lower and v < c_lower[x]]
            what = "upper bound" if metric == "upper" else "receiver error"
            if wins:
                lines.append(
                    f"{source} {what} < {c_label} lower bound at {len(wins)}/{len(values)} points "
                    f"(axis {wins[0]:.6g} .. {wins[-1]:.6g})"
                )
            else:
                lines.append(f"{source} {what} never below {c_label} lower bound")
    return lines


def run(specs: SweepSpec | Iterable[SweepSpec], out_path) -> list[str]:
    """Evaluate ``specs``, write the CSV to ``out_path`` and return summary lines."""
    if isinstance(specs, SweepSpec):
        specs = [specs]
    rows = evaluate(specs)
    text = format_csv(rows)
    with open(out_path, "w", newline="") as fh:
        fh.write(text)
    return advantage_summary(rows)


@dataclass(frozen=True)
class Verdict:
    quantum_upper: float
    classical_lower: float
    advantage: bool
    minimal_m: int | None
    m_max: int

    def report(self, scenario: CpfScenario) -> str:
        src = scenario.source.kind
        head = (
            f"{src} N={scenario.n_boxes} M={scenario.m_uses} gamma0={scenario.gamma0:g} gamma1={scenario.gamma1:g}\n"
            f"  quantum upper bound   U = {self.quantum_upper:.12g}\n"
            f"  coherent lower bound  L = {self.classical_lower:.12g}\n"
            f"  advantage (U < L): {self.advantage}\n"
        )
        if self.minimal_m is None:
            return head + f"  minimal M with advantage: none found up to M_max={self.m_max}"
        return head + f"  minimal M with advantage: {self.minimal_m}"


def verdict(scenario: CpfScenario, m_max: int = 1000) -> Verdict:
    """Compare a quantum source with the ``n_bar = 1`` coherent benchmark."""
    classical = scenario.replace(source=Coherent(1.0))
    F_q = scenario_fidelity(scenario)
    F_c = scenario_fidelity(classical)
    N = scenario.n_boxes

    def pair(M: int) -> tuple[float, float]:
        u = bounds_from_fidelity(scenario.source, N, M, F_q).upper
        lo = bounds_from_fidelity(classical.source, N, M, F_c).lower
        return u, lo

    u, lo = pair(scenario.m_uses)
    minimal = next((M for M in range(m_max + 1) if pair(M)[0] < pair(M)[1]), None)
    return Verdict(u, lo, u < lo, minimal, m_max)


def _grid(lo: float, hi: float, step: float) -> tuple[float, ...]:
    n = int(round((hi - lo) / step))
    return tuple(round(lo + i * step, 10) for i in range(n + 1))


FIVE_SOURCES = ("coherent", "fock", "ghz", "biphoton_si", "biphoton_if")


def _bounds_preset(gamma0: float, gamma1: float, m_values) -> list[SweepSpec]:
    sc = CpfScenario(4, 1, gamma0, gamma1, Fock())
    return [SweepSpec(sc, "M", tuple(m_values), ("bounds", "fidelity"), FIVE_SOURCES)]


def _fig2() -> list[SweepSpec]:
    specs = []
    for g1 in (0.55, 0.65, 0.75, 0.85):
        g0 = round(g1 + 0.1, 10)
        sc = CpfScenario(4, 1, g0, g1, GenBipartite(0.0))
        specs.append(
            SweepSpec(sc, "a", _grid(0.0, 1.0, 0.01), ("fidelity", "trace_distance"), label=f"gamma1={g1:g}")
        )
    return specs


def _fig5(trials: int, seed: int) -> list[SweepSpec]:
    sc = CpfScenario(10, 10, 0.0, 0.0, Fock())
    outputs = ("bounds", "receiver_analytic", "receiver_mc")
    return [SweepSpec(sc, "gamma0", _grid(0.0, 1.0, 0.05), outputs, RECEIVER_SOURCES, trials=trials, seed=seed)]


def _fig6(gamma0: float, trials: int, seed: int) -> list[SweepSpec]:
    sc = CpfScenario(2, 100, gamma0, 0.2, Fock())
    outputs = ("bounds", "receiver_analytic", "receiver_mc")
    return [SweepSpec(sc, "N", tuple(range(2, 31)), outputs, RECEIVER_SOURCES, trials=trials, seed=seed)]


PRESETS = ("fig2", "fig3i", "fig3ii", "fig4i", "fig4ii", "fig5", "fig6i", "fig6ii")


def preset(name: str, trials: int = 100_000, seed: int = 0) -> list[SweepSpec]:
    """Built-in sweeps named after the figures they regenerate."""
    if name == "fig2":
        return _fig2()
    if name == "fig3i":
        return _bounds_preset(0.2, 0.0, range(1, 31))
    if name == "fig3ii":
        return _bounds_preset(0.8, 0.0, range(1, 31))
    if name == "fig4i":
        return _bounds_preset(0.21, 0.2, range(1, 1001))
    if name == "fig4ii":
        return _bounds_preset(0.81, 0.8, range(1, 1001))
    if name == "fig5":
        return _fig5(trials, seed)
    if name == "fig6i":
        return _fig6(0.8, trials, seed)
    if name == "fig6ii":
        return _fig6(0.3, trials, seed)
    raise ValueError(f"unknown preset {name!r}; choose from {PRESETS}")


def spec_from_dict(cfg: dict) -> SweepSpec:
    """Build a :class:`SweepSpec` from a JSON-style mapping.

    ``scenario`` holds ``n_boxes``, ``m_uses``, ``gamma0``, ``gamma1``,
    ``source`` (a kind name) and optional ``source_params``; the remaining
    keys mirror the :class:`SweepSpec` fields.
    """
    try:
        sc = dict(cfg["scenario"])
        source = make_source(sc.pop("source", "fock"), **sc.pop("source_params", {}))
        scenario = CpfScenario(source=source, **sc)
        return SweepSpec(
            scenario=scenario,
            sweep_axis=cfg["sweep_axis"],
            axis_values=tuple(cfg["axis_values"]),
            outputs=tuple(cfg.get("outputs", ("bounds",))),
            sources=tuple(cfg.get("sources", ())),
            label=cfg.get("label", ""),
            trials=int(cfg.get("trials", 100_000)),
            seed=int(cfg.get("seed", 0)),
            click_model=cfg.get("click_model", "exactly_one"),
        )
    except (KeyError, TypeError) as exc:
        raise ValueError(f"invalid sweep config: {exc}") from exc
