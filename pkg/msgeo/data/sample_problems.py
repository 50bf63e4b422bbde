"""
Built-in sample problems

Each sample is a problem file shipped in ``msgeo/data/problems`` and can be
passed to the CLI as ``sample:<name>``.
"""
from ..errors import ProblemFileError
from .problem_file import PROBLEMS_DIR

sample_problems = {
    "klein-gordon": "Klein-Gordon field, n = 2, m = 1, mass parameter m0",
    "klein-gordon-1d": "Klein-Gordon field on a one-dimensional base",
    "harmonic-oscillator": "Mechanics: L = qdot^2/2 - q^2/2, with its solving connection",
    "free-particle": "Mechanics: L = qdot^2/2, with a point of N_L",
    "laplace": "Dirichlet energy, n = 2, m = 1",
    "model-3-2": "Canonical model V x Lambda^2 V*, dim V = 3",
    "symplectic-plane": "The form dx1^dx2 on Q^2",
    "field-model": "Multimomentum 3-form at a point, with W and E for darboux --horizontal",
}


def get_sample_problem_names():
    """Return the names of all built-in samples"""
    return sorted(sample_problems)


def sample_problem_path(name):
    """Path of a built-in sample; raises ProblemFileError for unknown names"""
    if name not in sample_problems:
        known = ", ".join(get_sample_problem_names())
        raise ProblemFileError(f"unknown sample '{name}' (known: {known})", f"sample:{name}")
    return PROBLEMS_DIR / f"{name}.toml"
