# app/suites/reassemble_suite.py

import click

from app.core.errors import DomainError
from app.models.scene_model import ReassemblySpec, WordPattern
from app.schemas.config_schemas import RunConfig
from app.schemas.report_schemas import SuiteReport
from app.suites.common import CheckList, str_list, suite_command
from app.utils.freeness import alternating_patterns, bias_slope, commutant_dimension, freeness_test
from app.utils.reassembly import build_reassembly, corner_defect
from app.utils.rmt import partition_defect
from app.utils.streams import StreamFactory

BIAS_PATTERN = WordPattern(tags=(1, 2, 1, 2))


def _spec(config: RunConfig, n: int | None = None) -> ReassemblySpec:
    n = n or config.n
    if config.traces is not None and n == config.n:
        return ReassemblySpec(n=n, traces=tuple(config.traces), unitary_mode=config.unitary_mode)
    return ReassemblySpec.default(n, config.unitary_mode)


def run_reassemble(config: RunConfig) -> SuiteReport:
    """Free reassemblies: invariants, freeness of the reassembled families, generation and finite-N bias."""
    config.require_trials()
    checks = CheckList()
    streams = StreamFactory(config.seed).child("reassemble")
    rule = config.rule()
    spec = _spec(config)
    N = config.N

    with checks.guard("build"):
        reassembly = build_reassembly(spec, N, streams.child("scene"))
        scene = reassembly.scene
        ps = [scene[f"P{i + 1}"] for i in range(spec.n)]
        us = [scene[f"U{i + 1}"] for i in range(spec.n)]
        checks.at_most("partition_of_unity", partition_defect(ps, us), 1e-8)
        defects = scene.invariant_defects()
        checks.at_most("scene_invariants", max(defects.values()), 1e-10)
        if spec.n == 2:
            checks.at_most("corner_u_p12_u_equals_p21", corner_defect(reassembly), 1e-8)
        if "Wint" in scene:
            checks.flag("intertwiner", True, detail="w conjugates the two reassemblies")

        # ---------- freeness ----------
        max_length = config.max_length or (6 if spec.n == 2 else 5)
        families = [reassembly.family_sampler(i) for i in range(spec.n)]
        checks.add(
            freeness_test(
                scene,
                families,
                alternating_patterns(spec.n, max_length),
                config.trials,
                streams=streams,
                rule=rule,
                label="reassembled",
            )
        )
        originals = [reassembly.factor_sampler(i) for i in range(2)]
        checks.add(
            freeness_test(scene, originals, [BIAS_PATTERN], config.trials, streams=streams, rule=rule, label="original")
        )
        if config.controls:
            control = freeness_test(
                scene,
                [families[0], families[0]],
                [WordPattern(tags=(1, 2))],
                config.trials,
                streams=streams,
                rule=rule,
                label="reassembled-self",
            )
            checks.add(control, expect_pass=False)

    _generation(checks, config, spec)
    _bias(checks, config)
    return checks.report("reassemble", config)


def _generation(checks: CheckList, config: RunConfig, spec: ReassemblySpec) -> None:
    n_gen = config.generation_N
    try:
        spec.ranks(n_gen)
    except DomainError as exc:
        checks.flag("generation", False, detail=str(exc))
        return
    dims = []
    with checks.guard("generation"):
        for s in range(config.generation_seeds):
            streams = StreamFactory(config.seed).child(f"generation-{s}")
            reassembly = build_reassembly(
                ReassemblySpec(n=spec.n, traces=spec.traces, unitary_mode="structured"), n_gen, streams
            )
            dims.append(commutant_dimension(reassembly.generators(streams("generators"))))
        checks.flag(
            "generation",
            all(d == 1 for d in dims),
            value=max(dims),
            expected=1,
            detail=f"{len(dims)} seeds at N={n_gen}",
        )


def _bias(checks: CheckList, config: RunConfig) -> None:
    spec = ReassemblySpec.default(2, "structured")
    means = []
    with checks.guard("bias_slope"):
        for size in config.bias_sizes:
            streams = StreamFactory(config.seed).child(f"bias-{size}")
            reassembly = build_reassembly(spec, size, streams)
            report = freeness_test(
                reassembly.scene,
                [reassembly.factor_sampler(0), reassembly.factor_sampler(1)],
                [BIAS_PATTERN],
                config.trials,
                streams=streams,
                label="bias",
            )
            means.append(report.rows[0].mean_abs_trace)
        slope = bias_slope(config.bias_sizes, means)
        checks.flag("bias_slope", -1.5 <= slope <= -0.5, value=slope, expected="[-1.5, -0.5]")


command = suite_command(
    "reassemble",
    run_reassemble,
    extra=[
        click.option("--traces", callback=str_list, help="Comma-separated traces of p_1..p_n."),
        click.option("--unitary-mode", type=click.Choice(["haar", "structured"]), help="Second choice of unitaries."),
    ],
)
