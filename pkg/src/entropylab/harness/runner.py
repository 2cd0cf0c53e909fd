"""Experiment execution: dispatch a validated config to the engines.

A run produces a RunReport: one CaseRecord per computed case, plus named
verdicts over groups of cases.  Everything that enters the report is a
deterministic function of the config and the engine version; wall-clock
timings are collected on the side and never mix into report bytes.
"""

from __future__ import annotations

import hashlib
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .. import __version__ as ENGINE_VERSION
from ..findim import (
    VectorStateData,
    build_algebra,
    check_entropy_identity,
    cyclic_group_unitaries,
    entropy_additivity_chain,
    entropy_difference_identity,
    group_average_expectation,
    kosaki_index,
    random_chain_instance,
    random_difference_instance,
    random_faithful_state,
    random_unitary,
    relative_entropy_spatial,
    relative_entropy_umegaki,
    symmetric_group_unitaries,
)
from ..lattice import (
    LatticeCircle,
    RegionSpec,
    central_charge_fit,
    cross_ratio,
    cross_ratio_collapse,
    entropy_deficit,
    equal_eta_family,
    finite_size_extrapolate,
    ground_state_correlations,
    lattice_region,
    product_state_relative_entropy,
    region_entropy,
    rotated_region,
    shrink_experiment,
    two_dimensional_deficit,
)
from .config import ConfigError, ExperimentConfig

__all__ = ["CaseRecord", "Verdict", "RunReport", "config_hash", "run_experiment"]


@dataclass(frozen=True)
class CaseRecord:
    case_id: str
    inputs: dict
    values: dict
    residual: float | None = None
    tolerance: float | None = None
    passed: bool | None = None


@dataclass(frozen=True)
class Verdict:
    name: str
    passed: bool
    detail: str
    case_ids: tuple[str, ...]


@dataclass
class RunReport:
    kind: str
    seed: int
    config_echo: dict
    config_hash: str
    engine_version: str
    cases: list[CaseRecord]
    verdicts: list[Verdict]
    pass_vacuous: bool = False
    timings: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts)

    def failing_case_ids(self) -> list[str]:
        explicit = [c.case_id for c in self.cases if c.passed is False]
        for verdict in self.verdicts:
            if not verdict.passed:
                explicit.extend(
                    cid for cid in verdict.case_ids if cid not in explicit
                )
        return explicit

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "seed": self.seed,
            "config": self.config_echo,
            "config_hash": self.config_hash,
            "engine_version": self.engine_version,
            "cases": [asdict(c) for c in self.cases],
            "verdicts": [asdict(v) for v in self.verdicts],
            "pass_vacuous": self.pass_vacuous,
            "passed": self.passed,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "RunReport":
        cases = [CaseRecord(**c) for c in payload["cases"]]
        verdicts = [
            Verdict(
                name=v["name"],
                passed=v["passed"],
                detail=v["detail"],
                case_ids=tuple(v["case_ids"]),
            )
            for v in payload["verdicts"]
        ]
        return cls(
            kind=payload["kind"],
            seed=payload["seed"],
            config_echo=payload["config"],
            config_hash=payload["config_hash"],
            engine_version=payload["engine_version"],
            cases=cases,
            verdicts=verdicts,
            pass_vacuous=payload["pass_vacuous"],
        )


def config_hash(config: ExperimentConfig) -> str:
    """Hash of the effective config plus the engine version."""
    canon = json.dumps(config.echo(), sort_keys=True, separators=(",", ":"))
    digest = hashlib.sha256()
    digest.update(canon.encode("utf-8"))
    digest.update(b"\n")
    digest.update(ENGINE_VERSION.encode("utf-8"))
    return digest.hexdigest()


def _map_ordered(fn, items, jobs: int) -> list:
    if jobs <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def run_experiment(config: ExperimentConfig, jobs: int = 1) -> RunReport:
    runner = _RUNNERS.get(config.kind)
    if runner is None:
        raise ConfigError(f"no runner for kind '{config.kind}'")
    start = time.perf_counter()
    cases, verdicts, timings = runner(config, jobs)
    timings["total_seconds"] = time.perf_counter() - start
    return RunReport(
        kind=config.kind,
        seed=config.seed,
        config_echo=config.echo(),
        config_hash=config_hash(config),
        engine_version=ENGINE_VERSION,
        cases=cases,
        verdicts=verdicts,
        pass_vacuous=not cases,
        timings=timings,
    )


def _spec_from(arcs: tuple[tuple[float, float], ...]) -> RegionSpec:
    try:
        return RegionSpec(arcs)
    except ValueError as exc:
        raise ConfigError(f"invalid arcs: {exc}") from None


def _residual_case(case_id, inputs, values, residual, tol) -> CaseRecord:
    return CaseRecord(
        case_id=case_id,
        inputs=inputs,
        values=values,
        residual=residual,
        tolerance=tol,
        passed=residual <= tol,
    )


def _group_verdict(name: str, cases: list[CaseRecord], detail: str = "") -> Verdict:
    passed = all(c.passed for c in cases if c.passed is not None)
    worst = max((c.residual for c in cases if c.residual is not None), default=0.0)
    text = detail or f"worst residual {worst:.3e}"
    return Verdict(
        name=name,
        passed=passed,
        detail=text,
        case_ids=tuple(c.case_id for c in cases),
    )


# ---------------------------------------------------------------------------
# findim-suite


def _run_findim(config: ExperimentConfig, jobs: int):
    n = config.instances
    timings: dict = {}
    cases: list[CaseRecord] = []
    verdicts: list[Verdict] = []

    def clocked(label, fn):
        t0 = time.perf_counter()
        result = fn()
        timings[label] = time.perf_counter() - t0
        return result

    def araki_case(k: int) -> CaseRecord:
        rng = np.random.default_rng([config.seed, 1, k])
        shapes = [(2, 2), (3, 2), (2, 3), (4, 2), (3, 3), (2, 4), (4, 4), (3, 5)]
        a, b = shapes[k % len(shapes)]
        alg = build_algebra([(a, b)]).conjugated(random_unitary(a * b, rng))
        v = rng.normal(size=a * b) + 1j * rng.normal(size=a * b)
        omega = VectorStateData(alg, v / np.linalg.norm(v))
        sigma = random_faithful_state(alg, rng)
        spatial = relative_entropy_spatial(omega, sigma)
        trace_form = relative_entropy_umegaki(omega.state(), sigma)
        return _residual_case(
            f"araki-{k:03d}",
            {"block": [a, b]},
            {"spatial": spatial, "trace_form": trace_form},
            abs(spatial - trace_form),
            1e-8,
        )

    araki = clocked("araki", lambda: _map_ordered(araki_case, list(range(n)), jobs))
    cases.extend(araki)
    verdicts.append(_group_verdict("spatial-equals-trace-form", araki))

    def difference_case(k: int) -> CaseRecord:
        rng = np.random.default_rng([config.seed, 2, k])
        side = (2, 3, 4)[k % 3]
        rep = entropy_difference_identity(random_difference_instance(rng, side=side))
        return _residual_case(
            f"difference-{k:03d}",
            {"side": side},
            {"s1": rep.s1, "s2": rep.s2, "s12": rep.s12},
            rep.residual,
            1e-6,
        )

    diff = clocked("difference", lambda: _map_ordered(difference_case, list(range(n)), jobs))
    cases.extend(diff)
    verdicts.append(_group_verdict("expectation-difference-identity", diff))

    def chain_case(k: int) -> CaseRecord:
        rng = np.random.default_rng([config.seed, 3, k])
        rep = entropy_additivity_chain(random_chain_instance(rng))
        return _residual_case(
            f"chain-{k:03d}",
            {},
            {"composed": rep.s_composed, "f2": rep.s_f2, "f1": rep.s_f1},
            rep.residual,
            1e-6,
        )

    chain_count = max(n // 2, 5)
    chain = clocked("chain", lambda: _map_ordered(chain_case, list(range(chain_count)), jobs))
    cases.extend(chain)
    verdicts.append(_group_verdict("expectation-additivity-chain", chain))

    def identity_case(which: int) -> CaseRecord:
        rng = np.random.default_rng([config.seed, 4, which])
        rep = check_entropy_identity(which, rng)
        values = {
            k: [float(x) for x in v] if isinstance(v, tuple) else float(v)
            for k, v in rep.values.items()
        }
        return _residual_case(
            f"identity-{which}", {"which": which}, values, rep.residual, rep.tolerance
        )

    idents = clocked("identities", lambda: [identity_case(w) for w in range(1, 6)])
    cases.extend(idents)
    verdicts.append(_group_verdict("relative-entropy-identities", idents))

    def index_cases() -> list[CaseRecord]:
        out = []
        sx = np.array([[0, 1], [1, 0]], dtype=complex)
        flip = np.kron(sx, sx)
        targets = [
            ("cyclic-2", build_algebra([(4, 1)]), [np.eye(4, dtype=complex), flip], 2.0),
            ("cyclic-3", build_algebra([(3, 1)]), cyclic_group_unitaries(3), 3.0),
            ("symmetric-3", build_algebra([(6, 1)]), symmetric_group_unitaries(3), 6.0),
        ]
        for label, algebra, units, want in targets:
            exp = group_average_expectation(algebra, units)
            got = float(kosaki_index(exp))
            out.append(
                _residual_case(
                    f"index-{label}",
                    {"group_order": want},
                    {"index": got},
                    abs(got - want),
                    1e-9,
                )
            )
        return out

    idx = clocked("index", index_cases)
    cases.extend(idx)
    verdicts.append(_group_verdict("group-fixed-point-index", idx))

    return cases, verdicts, timings


# ---------------------------------------------------------------------------
# fermion experiments


def _run_duality(config: ExperimentConfig, jobs: int):
    spec = _spec_from(config.arcs)
    arc_flag = config.r_convention == "arc"
    tol = config.effective_tolerance
    timings: dict = {}

    def one(n: int):
        t0 = time.perf_counter()
        rep = entropy_deficit(ground_state_correlations(n), spec, config.c, arc_flag)
        return rep, time.perf_counter() - t0

    results = _map_ordered(one, list(config.sizes), jobs)
    cases = []
    for n, (rep, seconds) in zip(config.sizes, results):
        timings[f"N={n}"] = seconds
        cases.append(
            CaseRecord(
                case_id=f"duality-N{n}",
                inputs={"N": n, "c": config.c, "r_convention": config.r_convention},
                values={
                    "S_I": rep.s_region,
                    "S_Icomp": rep.s_complement,
                    "eta": rep.eta,
                    "G_I": rep.g_region,
                    "G_Icomp": rep.g_complement,
                    "D": rep.deficit,
                    "mu": rep.mu,
                    "D_hat": rep.dual_deficit,
                },
                residual=abs(rep.deficit),
                tolerance=None,
                passed=None,
            )
        )
    verdicts = []
    deficits = [abs(c.values["D"]) for c in cases]
    ids = tuple(c.case_id for c in cases)
    if len(cases) >= 2:
        decreasing = all(b < a for a, b in zip(deficits, deficits[1:]))
        verdicts.append(
            Verdict(
                name="deficit-magnitude-decreasing",
                passed=decreasing,
                detail=f"|D| sequence {['%.3e' % d for d in deficits]}",
                case_ids=ids,
            )
        )
    if len(cases) >= 3:
        ext = finite_size_extrapolate(
            [(n, c.values["D"]) for n, c in zip(config.sizes, cases)]
        )
        cases.append(
            CaseRecord(
                case_id="duality-extrapolation",
                inputs={"model": "v + a/N + b/N^2", "constituents": list(ids)},
                values={"D_inf": ext.value, "max_fit_residual": ext.max_residual},
                residual=abs(ext.value),
                tolerance=tol,
                passed=abs(ext.value) <= tol,
            )
        )
        verdicts.append(
            Verdict(
                name="deficit-extrapolates-to-zero",
                passed=abs(ext.value) <= tol,
                detail=f"|D_inf| = {abs(ext.value):.3e} vs {tol:.1e}",
                case_ids=ids + ("duality-extrapolation",),
            )
        )
    else:
        verdicts.append(
            Verdict(
                name="deficit-within-tolerance",
                passed=all(d <= tol for d in deficits),
                detail=f"max |D| = {max(deficits):.3e} vs {tol:.1e}",
                case_ids=ids,
            )
        )
    return cases, verdicts, timings


def _run_sweep(config: ExperimentConfig, jobs: int):
    if len(config.arcs) != 2:
        raise ConfigError("cross-ratio-sweep expects exactly 2 base arcs")
    (a1, b1), (a2, _) = _spec_from(config.arcs).arcs
    timings: dict = {}

    work = [(n, length) for n in config.sizes for length in config.sweep_lengths]

    def one(item):
        n, length = item
        spec = RegionSpec([(a1, b1), (a2, a2 + length)])
        corr = ground_state_correlations(n)
        eta = cross_ratio(spec, config.r_convention == "arc")
        value = product_state_relative_entropy(corr, spec)
        return eta, value

    t0 = time.perf_counter()
    results = _map_ordered(one, work, jobs)
    timings["sweep"] = time.perf_counter() - t0
    cases = []
    for (n, length), (eta, value) in zip(work, results):
        cases.append(
            CaseRecord(
                case_id=f"sweep-N{n}-l{length:g}",
                inputs={"N": n, "second_arc_length": length},
                values={"eta": eta, "S_product": value},
                residual=max(0.0, -value),
                tolerance=config.effective_tolerance,
                passed=value >= -config.effective_tolerance,
            )
        )
    verdicts = [
        _group_verdict(
            "product-relative-entropy-nonnegative",
            cases,
            detail=f"min S = {min((c.values['S_product'] for c in cases), default=0.0):.3e}",
        )
    ]
    return cases, verdicts, timings


def _run_cfit(config: ExperimentConfig, jobs: int):
    tol = config.effective_tolerance
    timings: dict = {}

    def one(n: int):
        t0 = time.perf_counter()
        corr = ground_state_correlations(n)
        lengths = list(config.lengths) or [
            n // 16, n // 8, 3 * n // 16, n // 4, 3 * n // 8, n // 2
        ]
        entropies = [region_entropy(corr, np.arange(l)) for l in lengths]
        fit = central_charge_fit(lengths, entropies, n)
        return fit, lengths, time.perf_counter() - t0

    results = _map_ordered(one, list(config.sizes), jobs)
    cases = []
    for n, (fit, lengths, seconds) in zip(config.sizes, results):
        timings[f"N={n}"] = seconds
        cases.append(
            _residual_case(
                f"cfit-N{n}",
                {"N": n, "lengths": lengths},
                {
                    "c_hat": fit.c_hat,
                    "intercept": fit.intercept,
                    "fit_residual_norm": fit.residual_norm,
                },
                abs(fit.c_hat - 1.0),
                tol,
            )
        )
    verdicts = [
        _group_verdict(
            "central-charge-near-one",
            cases,
            detail=f"c_hat at largest N: {cases[-1].values['c_hat']:.6f}",
        )
    ]
    return cases, verdicts, timings


def _run_shrink(config: ExperimentConfig, jobs: int):
    spec = _spec_from(config.arcs)
    tol = config.effective_tolerance
    timings: dict = {}
    cases = []
    verdicts = []
    for n in config.sizes:
        t0 = time.perf_counter()
        report = shrink_experiment(
            ground_state_correlations(n), spec, config.arc_index, list(config.schedule)
        )
        timings[f"N={n}"] = time.perf_counter() - t0
        ids = []
        for k, step in enumerate(report.steps):
            cid = f"shrink-N{n}-step{k:02d}"
            ids.append(cid)
            cases.append(
                CaseRecord(
                    case_id=cid,
                    inputs={"N": n, "length": step.length, "sites": step.sites_in_arc},
                    values={
                        "S_product": step.value,
                        "target": report.target,
                        "gap": step.gap,
                    },
                    residual=abs(step.gap),
                    tolerance=None,
                    passed=None,
                )
            )
        final_gap = abs(report.gaps[-1])
        verdicts.append(
            Verdict(
                name=f"shrink-gap-closes-N{n}",
                passed=report.eventually_monotone and final_gap <= tol,
                detail=(
                    f"final gap {final_gap:.3e} vs {tol:.1e}, "
                    f"monotone from step {report.monotone_from}"
                ),
                case_ids=tuple(ids),
            )
        )
    return cases, verdicts, timings


def _run_collapse(config: ExperimentConfig, jobs: int):
    spec = _spec_from(config.arcs)
    if len(spec.arcs) != 2:
        raise ConfigError("collapse expects a two-arc region")
    rng = np.random.default_rng([config.seed, 10])
    family = equal_eta_family(spec, config.family_size, rng)
    tol = config.effective_tolerance
    timings: dict = {}

    def one(n: int):
        t0 = time.perf_counter()
        rep = cross_ratio_collapse(
            ground_state_correlations(n), family,
            use_arc_length=config.r_convention == "arc",
        )
        return rep, time.perf_counter() - t0

    results = _map_ordered(one, list(config.sizes), jobs)
    largest = max(config.sizes)
    cases = []
    for n, (rep, seconds) in zip(config.sizes, results):
        timings[f"N={n}"] = seconds
        values = {"eta": rep.eta, "spread": rep.spread}
        for j, v in enumerate(rep.values):
            values[f"S_geometry{j}"] = v
        # The tolerance binds at the largest size; the smaller sizes are
        # there to exhibit the trend.
        cases.append(
            CaseRecord(
                case_id=f"collapse-N{n}",
                inputs={"N": n, "family_size": len(family)},
                values=values,
                residual=rep.spread,
                tolerance=tol if n == largest else None,
                passed=rep.spread <= tol if n == largest else None,
            )
        )
    verdicts = [
        _group_verdict(
            "equal-eta-values-collapse",
            cases,
            detail=f"spread {cases[-1].values['spread']:.3e} vs {tol:.1e} at N={largest}",
        )
    ]
    spreads = [c.values["spread"] for c in cases]
    if len(spreads) >= 2:
        verdicts.append(
            Verdict(
                name="collapse-spread-decreasing",
                passed=all(b < a for a, b in zip(spreads, spreads[1:])),
                detail=f"spreads {['%.3e' % s for s in spreads]}",
                case_ids=tuple(c.case_id for c in cases),
            )
        )
    return cases, verdicts, timings


def _run_twod(config: ExperimentConfig, jobs: int):
    left = _spec_from(config.arcs)
    right = _spec_from(config.right_arcs)
    arc_flag = config.r_convention == "arc"
    tol = config.effective_tolerance
    timings: dict = {}

    def one(n: int):
        t0 = time.perf_counter()
        corr = ground_state_correlations(n)
        rep_l = entropy_deficit(corr, left, config.c, arc_flag)
        rep_r = entropy_deficit(corr, right, config.c, arc_flag)
        combined = two_dimensional_deficit(rep_l, rep_r)
        return rep_l, rep_r, combined, time.perf_counter() - t0

    results = _map_ordered(one, list(config.sizes), jobs)
    cases = []
    additivity_ok = True
    for n, (rep_l, rep_r, combined, seconds) in zip(config.sizes, results):
        timings[f"N={n}"] = seconds
        exact = combined.deficit == rep_l.deficit + rep_r.deficit
        additivity_ok = additivity_ok and exact
        cases.append(
            CaseRecord(
                case_id=f"twod-N{n}",
                inputs={"N": n, "c": config.c},
                values={
                    "D_left": rep_l.deficit,
                    "D_right": rep_r.deficit,
                    "D_2d": combined.deficit,
                    "G_2d": combined.g_region,
                },
                residual=abs(combined.deficit),
                tolerance=None,
                passed=None,
            )
        )
    ids = tuple(c.case_id for c in cases)
    verdicts = [
        Verdict(
            name="two-d-additivity-exact",
            passed=additivity_ok,
            detail="D_2d equals D_left + D_right bitwise",
            case_ids=ids,
        )
    ]
    if len(cases) >= 3:
        ext = finite_size_extrapolate(
            [(n, c.values["D_2d"]) for n, c in zip(config.sizes, cases)]
        )
        cases.append(
            CaseRecord(
                case_id="twod-extrapolation",
                inputs={"model": "v + a/N + b/N^2", "constituents": list(ids)},
                values={"D_inf": ext.value, "max_fit_residual": ext.max_residual},
                residual=abs(ext.value),
                tolerance=tol,
                passed=abs(ext.value) <= tol,
            )
        )
        verdicts.append(
            Verdict(
                name="two-d-deficit-extrapolates-to-zero",
                passed=abs(ext.value) <= tol,
                detail=f"|D_2d,inf| = {abs(ext.value):.3e} vs {tol:.1e}",
                case_ids=ids + ("twod-extrapolation",),
            )
        )
    else:
        worst = max((abs(c.values["D_2d"]) for c in cases), default=0.0)
        verdicts.append(
            Verdict(
                name="two-d-deficit-within-tolerance",
                passed=worst <= tol,
                detail=f"max |D_2d| = {worst:.3e} vs {tol:.1e}",
                case_ids=ids,
            )
        )
    return cases, verdicts, timings


_RUNNERS = {
    "findim-suite": _run_findim,
    "duality": _run_duality,
    "cross-ratio-sweep": _run_sweep,
    "c-fit": _run_cfit,
    "shrink": _run_shrink,
    "collapse": _run_collapse,
    "two-d": _run_twod,
}
