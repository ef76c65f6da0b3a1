from app.suites import (
    convolve_suite,
    exact_trace_suite,
    two_proj_suite,
    reassemble_suite,
    radial_suite,
    weak_fc_suite,
    semicircular_suite,
)

# subcommand name -> suite module, in the order `all` runs them
SUITE_MODULES = {
    "convolve": convolve_suite,
    "exact-trace": exact_trace_suite,
    "two-proj": two_proj_suite,
    "reassemble": reassemble_suite,
    "radial": radial_suite,
    "weak-fc": weak_fc_suite,
    "semicircular": semicircular_suite,
}

RUNNERS = {
    "convolve": convolve_suite.run_convolve,
    "exact-trace": exact_trace_suite.run_exact_trace,
    "two-proj": two_proj_suite.run_two_proj,
    "reassemble": reassemble_suite.run_reassemble,
    "radial": radial_suite.run_radial,
    "weak-fc": weak_fc_suite.run_weak_fc,
    "semicircular": semicircular_suite.run_semicircular,
}
