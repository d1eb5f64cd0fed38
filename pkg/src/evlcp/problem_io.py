"""JSON problem files.

Schema::

    {"n": int, "k": int,
     "M": [[[row-major n x n]], ... k+1 blocks],
     "q": [[n], ... k+1 parts],
     "vlcp": bool}
"""
import json

import numpy as np

from .model import EvlcpProblem


class ProblemFormatError(ValueError):
    pass


def problem_to_dict(P):
    return {
        "n": P.n,
        "k": P.k,
        "M": P.M.tolist(),
        "q": P.q.tolist(),
        "vlcp": bool(P.vlcp),
    }


def problem_from_dict(data, name=""):
    try:
        n, k = int(data["n"]), int(data["k"])
        M = np.array(data["M"], dtype=float)
        q = np.array(data["q"], dtype=float)
        vlcp = bool(data.get("vlcp", False))
    except (KeyError, TypeError, ValueError) as exc:
        raise ProblemFormatError(f"malformed problem: {exc}") from exc
    if M.shape != (k + 1, n, n) or q.shape != (k + 1, n):
        raise ProblemFormatError(
            f"declared n={n}, k={k} but M has shape {M.shape} and q has shape {q.shape}"
        )
    try:
        return EvlcpProblem(M, q, vlcp=vlcp, name=name)
    except ValueError as exc:
        raise ProblemFormatError(str(exc)) from exc


def load_problem(path):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ProblemFormatError(f"cannot read {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ProblemFormatError("problem file must contain a JSON object")
    return problem_from_dict(data, name=str(path))


def save_problem(P, path):
    with open(path, "w") as fh:
        json.dump(problem_to_dict(P), fh, indent=1)
        fh.write("\n")
