from .problem_utils import (
    CompiledProblem,
    ProblemSpec,
    ProblemSpecError,
    compile_problem,
    effective_settings,
    load_problem_spec,
)

__all__ = [
    "CompiledProblem",
    "ProblemSpec",
    "ProblemSpecError",
    "compile_problem",
    "effective_settings",
    "load_problem_spec",
]
