"""Command-line harness: reproducible experiment runs emitted as CSV or JSON.

Every subcommand builds a ``RecordSet`` through ``run_scenario`` and writes it
with ``emit``; identical configurations produce byte-identical output.  Exit
codes: 0 success, 2 usage error, 3 numeric failure.
"""

from __future__ import annotations

import functools
import math
import os
import sys
from dataclasses import dataclass, fields

import click
import numpy as np

from . import __version__, kernels
from .dynamics import (
    PerturbedWalk,
    average_probability,
    closed_form_probability,
    coherence,
    cycle_variance,
    evolve,
    ipr,
    localized_state,
    probability_distribution,
    star_periodicity,
)
from .errors import NumericError
from .fisher import (
    ProbeSpec,
    build_probe,
    crb_monte_carlo,
    fi_position,
    qfi_fidelity_limit,
    qfi_variance_formula,
)
from .graphs import GraphFamily, build_family, frobenius_delta, laplacian, read_edge_list
from .records import RecordSet
from .spectra import (
    EigvecChoice,
    max_qfi_graph_predicate,
    spectrum_closed_form,
    spectrum_numeric,
)

DEFAULT_T_RANGE = (0.0, 10.0, 0.01)
DEFAULT_LAM_RANGE = (-1.0, 1.0, 0.01)

_BASIS_WORDS = {
    "plus": "complex_plus",
    "minus": "complex_minus",
    "cos": "real_cos",
    "sin": "real_sin",
}


@dataclass(frozen=True)
class ScenarioConfig:
    """Validated bundle of everything a subcommand run depends on."""

    family: str | None = None
    n: int | None = None
    parts: tuple[int, int] | None = None
    edge_list: str | None = None
    lam: float = 0.0
    lam_range: tuple[float, float, float] | None = None
    t: float | None = None
    t_range: tuple[float, float, float] | None = None
    start: int = 0
    probe: ProbeSpec = ProbeSpec()
    method: str = "variance"
    mode: str = "finite_difference"
    numeric: bool = False
    n_samples: int = 10_000
    n_trials: int = 200
    seed: int = 0
    fmt: str = "csv"
    display_offset: int = 0

    def __post_init__(self):
        for rng in (self.lam_range, self.t_range):
            if rng is not None:
                lo, hi, step = rng
                if step <= 0:
                    raise click.UsageError(f"grid step must be > 0, got {step}")
                if hi < lo:
                    raise click.UsageError(f"empty grid [{lo}, {hi}]")
                if not (math.isfinite(lo) and math.isfinite(hi)):
                    raise click.UsageError("grid bounds must be finite")

    def describe(self) -> str:
        parts = []
        for f in fields(self):
            value = getattr(self, f.name)
            if value is None or f.name == "fmt":
                continue
            if f.name == "probe":
                value = probe_to_string(value)
            parts.append(f"{f.name}={value}")
        return " ".join(parts)


def grid(spec: tuple[float, float, float]) -> np.ndarray:
    lo, hi, step = spec
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return lo + step * np.arange(count)


def parse_probe(text: str) -> ProbeSpec:
    """Probe grammar: ``localized[:V]`` or ``max[:BASIS][:l=IDX][:phase=RAD]``."""
    tokens = text.split(":")
    head = tokens[0]
    if head == "localized":
        vertex = 0
        if len(tokens) > 1:
            if len(tokens) > 2:
                raise click.UsageError(f"bad probe spec {text!r}")
            try:
                vertex = int(tokens[1])
            except ValueError:
                raise click.UsageError(f"bad vertex in probe spec {text!r}")
        return ProbeSpec("localized", vertex=vertex)
    if head == "max":
        basis = "complex_plus"
        index = None
        phase = 0.0
        for token in tokens[1:]:
            if token in _BASIS_WORDS:
                basis = _BASIS_WORDS[token]
            elif token.startswith("l="):
                index = int(token[2:])
            elif token.startswith("phase="):
                phase = float(token[6:])
            else:
                raise click.UsageError(f"bad probe token {token!r} in {text!r}")
        return ProbeSpec("max_qfi", choice=EigvecChoice(basis, index), phase=phase)
    raise click.UsageError(f"probe must start with 'localized' or 'max', got {text!r}")


def probe_to_string(probe: ProbeSpec) -> str:
    if probe.kind == "localized":
        return f"localized:{probe.vertex}"
    choice = probe.choice or EigvecChoice()
    word = {v: k for k, v in _BASIS_WORDS.items()}[choice.basis]
    out = f"max:{word}"
    if choice.index is not None:
        out += f":l={choice.index}"
    if probe.phase:
        out += f":phase={probe.phase!r}"
    return out


def _graph_from_cfg(cfg: ScenarioConfig):
    if cfg.edge_list is not None:
        return read_edge_list(cfg.edge_list), None
    if cfg.family is None or cfg.n is None:
        raise click.UsageError("need --family and --n, or --edge-list")
    family = GraphFamily(cfg.family, cfg.n, cfg.parts)
    return build_family(family), family


def _walk_from_cfg(cfg: ScenarioConfig, lam: float | None = None) -> PerturbedWalk:
    lam = cfg.lam if lam is None else lam
    graph, family = _graph_from_cfg(cfg)
    if family is not None and family.kind in ("cycle", "complete", "star") and not cfg.numeric:
        return PerturbedWalk.from_family(
            family.kind, family.n, lam, cfg.probe.choice, family.parts
        )
    walk = PerturbedWalk.from_graph(graph, lam)
    if family is not None:
        walk = PerturbedWalk(walk.graph, walk.lam, walk.spectrum, family)
    return walk


def _t_grid(cfg: ScenarioConfig) -> np.ndarray:
    if cfg.t is not None:
        return np.array([cfg.t])
    return grid(cfg.t_range or DEFAULT_T_RANGE)


def _lam_grid(cfg: ScenarioConfig) -> np.ndarray:
    if cfg.lam_range is not None:
        return grid(cfg.lam_range)
    return np.array([cfg.lam])


def _metadata(cmd: str, cfg: ScenarioConfig, with_seed: bool = False) -> dict[str, str]:
    meta = {"command": f"ctqw {cmd} {cfg.describe()}", "version": __version__}
    if with_seed:
        meta["seed"] = str(cfg.seed)
    return meta


# ---------------------------------------------------------------- scenarios


def _scenario_spectrum(cfg: ScenarioConfig) -> RecordSet:
    graph, family = _graph_from_cfg(cfg)
    if family is not None and family.kind in ("cycle", "complete", "star") and not cfg.numeric:
        spectrum = spectrum_closed_form(family, cfg.probe.choice)
    else:
        spectrum = spectrum_numeric(laplacian(graph))
    out = RecordSet(["level", "eigenvalue", "multiplicity"], metadata=_metadata("spectrum", cfg))
    for level, (value, mult) in enumerate(spectrum.levels):
        out.append(level, value, mult)
    return out


def _scenario_evolve(cfg: ScenarioConfig) -> RecordSet:
    walk = _walk_from_cfg(cfg)
    psi0 = localized_state(walk.n, cfg.start)
    out = RecordSet(
        ["t", "vertex", "amp_re", "amp_im", "prob"], metadata=_metadata("evolve", cfg)
    )
    for t in _t_grid(cfg):
        psi = evolve(walk, psi0, float(t))
        for k in range(walk.n):
            amp = psi.amplitudes[k]
            out.append(float(t), k + cfg.display_offset, float(amp.real), float(amp.imag),
                       float(abs(amp) ** 2))
    return out


def _scenario_prob(cfg: ScenarioConfig) -> RecordSet:
    walk = _walk_from_cfg(cfg)
    kind = walk.family.kind if walk.family is not None else None
    use_closed = kind in ("cycle", "complete", "star") and (kind != "star" or cfg.start in (0, 1))
    psi0 = localized_state(walk.n, cfg.start)
    out = RecordSet(["t", "vertex", "prob"], metadata=_metadata("prob", cfg))
    for t in _t_grid(cfg):
        if use_closed:
            row = [
                closed_form_probability(kind, walk.n, walk.lam, cfg.start, k, float(t))
                for k in range(walk.n)
            ]
        else:
            row = probability_distribution(evolve(walk, psi0, float(t))).p.tolist()
        for k, p in enumerate(row):
            out.append(float(t), k + cfg.display_offset, float(p))
    return out


def _scenario_avg_prob(cfg: ScenarioConfig) -> RecordSet:
    walk = _walk_from_cfg(cfg)
    dist = average_probability(walk, localized_state(walk.n, cfg.start))
    out = RecordSet(["vertex", "prob_avg"], metadata=_metadata("avg-prob", cfg))
    for k in range(walk.n):
        out.append(k + cfg.display_offset, float(dist.p[k]))
    return out


def _scenario_ipr(cfg: ScenarioConfig) -> RecordSet:
    walk = _walk_from_cfg(cfg)
    psi0 = localized_state(walk.n, cfg.start)
    out = RecordSet(["t", "ipr"], metadata=_metadata("ipr", cfg))
    for t in _t_grid(cfg):
        out.append(float(t), ipr(probability_distribution(evolve(walk, psi0, float(t)))))
    return out


def _scenario_coherence(cfg: ScenarioConfig) -> RecordSet:
    walk = _walk_from_cfg(cfg)
    psi0 = localized_state(walk.n, cfg.start)
    out = RecordSet(["t", "coherence"], metadata=_metadata("coherence", cfg))
    for t in _t_grid(cfg):
        out.append(float(t), coherence(evolve(walk, psi0, float(t))))
    return out


def _scenario_variance(cfg: ScenarioConfig) -> RecordSet:
    if cfg.family != "cycle" or cfg.n is None:
        raise click.UsageError("variance needs --family cycle and --n")
    out = RecordSet(
        ["t", "empirical", "model", "wavefront_warning"],
        metadata=_metadata("variance", cfg),
    )
    start = cfg.start if cfg.start else cfg.n // 2
    warned = False
    for t in _t_grid(cfg):
        result = cycle_variance(cfg.n, cfg.lam, float(t), start)
        out.append(float(t), result.empirical, result.short_time_model,
                   int(result.wavefront_warning))
        if result.wavefront_warning and not warned:
            click.echo(f"warning: wavefront reached the extreme vertices at t={t}", err=True)
            warned = True
    return out


def _scenario_period(cfg: ScenarioConfig) -> RecordSet:
    if cfg.n is None:
        raise click.UsageError("period needs --n")
    out = RecordSet(
        ["n", "lam", "periodic", "p_num", "p_den", "q_num", "q_den", "period", "special_case"],
        metadata=_metadata("period", cfg),
    )
    for lam in _lam_grid(cfg):
        rep = star_periodicity(cfg.n, float(lam))
        out.append(
            cfg.n,
            float(lam),
            int(rep.periodic),
            rep.p.numerator if rep.p is not None else 0,
            rep.p.denominator if rep.p is not None else 0,
            rep.q.numerator if rep.q is not None else 0,
            rep.q.denominator if rep.q is not None else 0,
            rep.period if rep.period is not None else float("nan"),
            rep.special_case or "none",
        )
    return out


def _scenario_qfi(cfg: ScenarioConfig) -> RecordSet:
    walk = _walk_from_cfg(cfg)
    psi0 = build_probe(walk, cfg.probe)
    out = RecordSet(["t", "lam", "qfi"], metadata=_metadata("qfi", cfg))
    for t in _t_grid(cfg):
        if cfg.method == "fidelity":
            value = qfi_fidelity_limit(walk, psi0, float(t))
        else:
            value = qfi_variance_formula(walk, psi0, float(t))
        out.append(float(t), walk.lam, value)
    return out


def _scenario_fi(cfg: ScenarioConfig) -> RecordSet:
    out = RecordSet(["t", "lam", "fi", "qfi"], metadata=_metadata("fi", cfg))
    walk = _walk_from_cfg(cfg)
    psi0 = build_probe(walk, cfg.probe)
    for t in _t_grid(cfg):
        qfi = qfi_variance_formula(walk, psi0, float(t))
        for lam in _lam_grid(cfg):
            fi = fi_position(walk, cfg.probe, float(t), lam=float(lam), mode=cfg.mode)
            out.append(float(t), float(lam), fi, qfi)
    return out


def _scenario_maxqfi_check(cfg: ScenarioConfig) -> RecordSet:
    graph, family = _graph_from_cfg(cfg)
    label = family.kind if family is not None else os.path.basename(cfg.edge_list or "graph")
    is_max, mu_top = max_qfi_graph_predicate(graph)
    out = RecordSet(["graph", "n", "is_max", "mu_top"], metadata=_metadata("maxqfi-check", cfg))
    out.append(label, graph.n, int(is_max), mu_top)
    return out


def _scenario_frobenius(cfg: ScenarioConfig) -> RecordSet:
    graph, family = _graph_from_cfg(cfg)
    label = family.kind if family is not None else os.path.basename(cfg.edge_list or "graph")
    out = RecordSet(["graph", "n", "frobenius_delta"], metadata=_metadata("frobenius", cfg))
    out.append(label, graph.n, frobenius_delta(graph))
    return out


def _scenario_estimate(cfg: ScenarioConfig) -> RecordSet:
    walk = _walk_from_cfg(cfg)
    if cfg.t is None:
        raise click.UsageError("estimate needs --t")
    report = crb_monte_carlo(
        walk, cfg.probe, cfg.t, cfg.lam, cfg.n_samples, cfg.n_trials, cfg.seed
    )
    out = RecordSet(
        [
            "n_samples",
            "n_trials",
            "estimator_variance",
            "crb_classical",
            "crb_quantum",
            "variance_over_crb",
        ],
        metadata=_metadata("estimate", cfg, with_seed=True),
    )
    out.append(
        report.n_samples,
        report.n_trials,
        report.estimator_variance,
        report.crb_classical,
        report.crb_quantum,
        report.estimator_variance / report.crb_classical,
    )
    return out


_SCENARIOS = {
    "spectrum": _scenario_spectrum,
    "evolve": _scenario_evolve,
    "prob": _scenario_prob,
    "avg-prob": _scenario_avg_prob,
    "ipr": _scenario_ipr,
    "coherence": _scenario_coherence,
    "variance": _scenario_variance,
    "period": _scenario_period,
    "qfi": _scenario_qfi,
    "fi": _scenario_fi,
    "maxqfi-check": _scenario_maxqfi_check,
    "frobenius": _scenario_frobenius,
    "estimate": _scenario_estimate,
}


def run_scenario(cmd: str, cfg: ScenarioConfig) -> RecordSet:
    """Execute one subcommand worth of work and return its table."""
    if cmd.startswith("figure:"):
        return run_figure(cmd.split(":", 1)[1], cfg)
    if cmd not in _SCENARIOS:
        raise click.UsageError(f"unknown scenario {cmd!r}")
    return _SCENARIOS[cmd](cfg)


def emit(records: RecordSet, fmt: str, path: str | None) -> None:
    """Write a RecordSet as CSV or JSON to a file or stdout."""
    text = records.to_csv() if fmt == "csv" else records.to_json()
    if path is None:
        click.echo(text, nl=False)
        return
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise click.ClickException(f"cannot write {path}: {exc}") from exc


# ---------------------------------------------------------------- figures


def _figure_cfg(cfg: ScenarioConfig, **overrides) -> ScenarioConfig:
    base = {f.name: getattr(cfg, f.name) for f in fields(cfg)}
    base.update(overrides)
    return ScenarioConfig(**base)


def _fig_prob_map(cfg, kind, n, lam, start):
    sub = _figure_cfg(cfg, family=kind, n=n, lam=lam, start=start)
    return _scenario_prob(sub)


def _fig_lambda_map(cfg):
    # ring order 100, start mid, one snapshot over the coupling grid
    n, start, t = 100, 50, 4.0
    lams = grid(DEFAULT_LAM_RANGE)
    out = RecordSet(["t", "vertex", "lam", "prob"], metadata=_metadata("figure:fig3", cfg))
    rows = np.empty((len(lams), n))
    for i, lam in enumerate(lams):
        walk = PerturbedWalk.from_family("cycle", n, float(lam))
        psi = evolve(walk, localized_state(n, start), t)
        rows[i] = probability_distribution(psi).p
    for k in range(n):
        for i, lam in enumerate(lams):
            out.append(t, k + cfg.display_offset, float(lam), float(rows[i, k]))
    return out


def _fig_ipr_multi(cfg, kind, ns, lam, start_of):
    out = RecordSet(["t", "n", "ipr"], metadata=_metadata(f"figure:ipr-{kind}", cfg))
    ts = grid(DEFAULT_T_RANGE)
    curves = {}
    for n in ns:
        walk = PerturbedWalk.from_family(kind, n, lam)
        psi0 = localized_state(n, start_of(n))
        curves[n] = [
            ipr(probability_distribution(evolve(walk, psi0, float(t)))) for t in ts
        ]
    for i, t in enumerate(ts):
        for n in ns:
            out.append(float(t), n, curves[n][i])
    return out


def _fig_coherence_multi(cfg, kind, n, lams, start):
    out = RecordSet(["t", "lam", "coherence"], metadata=_metadata(f"figure:coh-{kind}", cfg))
    ts = grid(DEFAULT_T_RANGE)
    walks = {lam: PerturbedWalk.from_family(kind, n, lam) for lam in lams}
    for t in ts:
        for lam in lams:
            psi = evolve(walks[lam], localized_state(n, start), float(t))
            out.append(float(t), lam, coherence(psi))
    return out


def _fig_fisher(cfg, kind, n, probes, lams, mode, fig_id):
    out = RecordSet(
        ["t", "lam", "probe", "fi", "qfi"], metadata=_metadata(f"figure:{fig_id}", cfg)
    )
    ts = grid(DEFAULT_T_RANGE)
    for probe_label, probe in probes:
        walk = PerturbedWalk.from_family(kind, n, 0.0, probe.choice)
        psi0 = build_probe(walk, probe)
        for t in ts:
            qfi = qfi_variance_formula(walk, psi0, float(t))
            for lam in lams:
                fi = fi_position(walk, probe, float(t), lam=lam, mode=mode)
                out.append(float(t), lam, probe_label, fi, qfi)
    return out


_FI_LAMS = (-0.5, -0.25, 0.0, 0.2, 0.5)


def run_figure(fig_id: str, cfg: ScenarioConfig) -> RecordSet:
    """Reproduce one of the canned datasets; ids are documented in the README."""
    n5 = 5
    if fig_id == "fig2":
        return _fig_prob_map(cfg, "cycle", n5, 0.2, start=2)
    if fig_id == "fig3":
        return _fig_lambda_map(cfg)
    if fig_id == "fig4":
        return _fig_ipr_multi(cfg, "cycle", (5, 10, 20, 50), 0.2, lambda n: 0)
    if fig_id == "fig5":
        return _fig_coherence_multi(cfg, "cycle", n5, (-1.0, -0.5, -0.25, 0.0, 0.2, 0.5, 1.0), 0)
    if fig_id == "fig6":
        return _fig_prob_map(cfg, "complete", n5, 0.2, start=0)
    if fig_id == "fig7":
        return _fig_ipr_multi(cfg, "complete", (3, 4, 5, 10, 20), 0.2, lambda n: 0)
    if fig_id == "fig8":
        return _fig_coherence_multi(cfg, "complete", n5, (-0.2, -0.1, 0.0, 0.2, 0.5), 0)
    if fig_id == "fig9":
        return _fig_prob_map(cfg, "star", n5, 0.2, start=1)
    if fig_id == "fig10":
        return _fig_ipr_multi(cfg, "star", (3, 4, 5, 10, 20), 0.2, lambda n: min(1, n - 1))
    if fig_id == "fig11":
        return _fig_coherence_multi(cfg, "star", n5, (-1.0, -0.2, -1.0 / 6.0, 0.0, 0.2), 1)
    if fig_id == "fig12":
        return _fig_fisher(cfg, "cycle", n5, [("localized", ProbeSpec("localized", 0))],
                           _FI_LAMS, "finite_difference", fig_id)
    if fig_id == "fig13":
        return _fig_fisher(cfg, "complete", n5, [("localized", ProbeSpec("localized", 0))],
                           (-0.5, 0.0, 0.2, 0.5), "analytic", fig_id)
    if fig_id == "fig14":
        return _fig_fisher(cfg, "star", n5, [("localized", ProbeSpec("localized", 1))],
                           _FI_LAMS, "finite_difference", fig_id)
    if fig_id == "fig15":
        probes = [
            ("max-cos", ProbeSpec("max_qfi", choice=EigvecChoice("real_cos"))),
            ("max-sin", ProbeSpec("max_qfi", choice=EigvecChoice("real_sin"))),
        ]
        return _fig_fisher(cfg, "cycle", n5, probes, _FI_LAMS, "analytic", fig_id)
    if fig_id == "fig16":
        probes = [
            ("max-l1", ProbeSpec("max_qfi", choice=EigvecChoice(index=1))),
            ("max-l4", ProbeSpec("max_qfi", choice=EigvecChoice(index=4))),
        ]
        return _fig_fisher(cfg, "complete", n5, probes, (-0.5, 0.0, 0.2, 0.5), "analytic", fig_id)
    raise click.UsageError(f"unknown figure id {fig_id!r}; known: fig2..fig16")


# ---------------------------------------------------------------- click shell


def _numeric_guard(f):
    @functools.wraps(f)
    def wrapper(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except NumericError as exc:
            click.echo(f"numeric failure: {exc}", err=True)
            sys.exit(3)

    return wrapper


def _common_options(f):
    options = [
        click.option("--family", type=click.Choice(
            ["cycle", "complete", "star", "path", "wheel", "complete_bipartite"]),
            default=None, help="Named graph family."),
        click.option("--n", type=int, default=None, help="Vertex count."),
        click.option("--parts", type=str, default=None,
                     help="Bipartite part sizes 'a,b' (complete_bipartite only)."),
        click.option("--edge-list", type=click.Path(exists=True, dir_okay=False),
                     default=None, help="Edge-list file instead of a family."),
        click.option("--lam", type=float, default=0.0, show_default=True,
                     help="Coupling of the quadratic term."),
        click.option("--lam-range", type=(float, float, float), default=None,
                     help="Coupling grid: START STOP STEP."),
        click.option("--t", type=float, default=None, help="Single time."),
        click.option("--t-range", type=(float, float, float), default=None,
                     help="Time grid: START STOP STEP (default 0 10 0.01)."),
        click.option("--start", type=int, default=0, show_default=True,
                     help="Start vertex of the walker."),
        click.option("--probe", "probe_text", type=str, default="localized:0",
                     show_default=True,
                     help="Probe: localized[:V] or max[:plus|minus|cos|sin][:l=IDX][:phase=RAD]."),
        click.option("--numeric", is_flag=True, default=False,
                     help="Force the numeric eigensolver even for named families."),
        click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv",
                     show_default=True),
        click.option("--out", type=click.Path(dir_okay=False, writable=True), default=None,
                     help="Output path (default stdout)."),
        click.option("--display-offset", type=int, default=0, show_default=True,
                     help="Added to vertex indices on output only."),
    ]
    for option in reversed(options):
        f = option(f)
    return f


def _build_cfg(kwargs, **extra) -> tuple[ScenarioConfig, str | None]:
    parts = kwargs.pop("parts")
    if parts is not None:
        try:
            a, b = (int(x) for x in parts.split(","))
        except ValueError:
            raise click.UsageError(f"bad --parts {parts!r}; expected 'a,b'")
        parts = (a, b)
    probe = parse_probe(kwargs.pop("probe_text"))
    out = kwargs.pop("out")
    cfg = ScenarioConfig(
        family=kwargs.pop("family"),
        n=kwargs.pop("n"),
        parts=parts,
        edge_list=kwargs.pop("edge_list"),
        lam=kwargs.pop("lam"),
        lam_range=kwargs.pop("lam_range"),
        t=kwargs.pop("t"),
        t_range=kwargs.pop("t_range"),
        start=kwargs.pop("start"),
        probe=probe,
        numeric=kwargs.pop("numeric"),
        fmt=kwargs.pop("fmt"),
        display_offset=kwargs.pop("display_offset"),
        **extra,
    )
    return cfg, out


@click.group()
@click.version_option(version=__version__, prog_name="ctqw")
def cli():
    """Quantum walks with a quadratic Laplacian perturbation."""
    threads = os.environ.get("CTQW_THREADS")
    if threads:
        try:
            cap = int(threads)
        except ValueError:
            raise click.UsageError(f"CTQW_THREADS must be an integer, got {threads!r}")
        if cap < 1:
            raise click.UsageError(f"CTQW_THREADS must be >= 1, got {cap}")
        if kernels.NUMBA_ENABLED:
            import numba

            numba.set_num_threads(min(cap, numba.get_num_threads()))


def _register_plain(name: str) -> None:
    @cli.command(name)
    @_common_options
    @_numeric_guard
    def _cmd(_scenario=name, **kwargs):
        cfg, out = _build_cfg(kwargs)
        records = run_scenario(_scenario, cfg)
        emit(records, cfg.fmt, out)

    _cmd.__name__ = name.replace("-", "_")


for _name in ("spectrum", "evolve", "prob", "avg-prob", "ipr", "coherence",
              "variance", "period", "maxqfi-check", "frobenius"):
    _register_plain(_name)


@cli.command("qfi")
@_common_options
@click.option("--method", type=click.Choice(["variance", "fidelity"]), default="variance",
              show_default=True, help="Variance formula or fidelity-quotient route.")
@_numeric_guard
def _qfi_cmd(method, **kwargs):
    cfg, out = _build_cfg(kwargs, method=method)
    emit(run_scenario("qfi", cfg), cfg.fmt, out)


@cli.command("fi")
@_common_options
@click.option("--mode", type=click.Choice(["analytic", "finite_difference"]),
              default="finite_difference", show_default=True)
@_numeric_guard
def _fi_cmd(mode, **kwargs):
    cfg, out = _build_cfg(kwargs, mode=mode)
    emit(run_scenario("fi", cfg), cfg.fmt, out)


@cli.command("estimate")
@_common_options
@click.option("--n-samples", type=int, default=10_000, show_default=True)
@click.option("--n-trials", type=int, default=200, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@_numeric_guard
def _estimate_cmd(n_samples, n_trials, seed, **kwargs):
    cfg, out = _build_cfg(kwargs, n_samples=n_samples, n_trials=n_trials, seed=seed)
    emit(run_scenario("estimate", cfg), cfg.fmt, out)


@cli.command("figure")
@click.argument("fig_id")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv",
              show_default=True)
@click.option("--out", type=click.Path(dir_okay=False, writable=True), default=None)
@click.option("--display-offset", type=int, default=0, show_default=True)
@_numeric_guard
def _figure_cmd(fig_id, fmt, out, display_offset):
    """Emit the dataset behind a canned figure id (fig2..fig16, see README)."""
    cfg = ScenarioConfig(fmt=fmt, display_offset=display_offset)
    emit(run_figure(fig_id, cfg), fmt, out)


def main():
    cli()


if __name__ == "__main__":
    main()
