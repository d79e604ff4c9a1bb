"""Most-likely path extraction from per-tick evidence.

Joint decoding via log-space dynamic programming; zero-probability
transitions are hard constraints, so decoded paths stay on the motion
kernel's support. brute_force_decode enumerates every location sequence and
exists as the independent check on the DP; both break score ties toward the
lexicographically smallest path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AllPathsZeroError, InstanceTooLargeError, ValidationError

BRUTE_FORCE_CAP = 10**6


@dataclass(frozen=True)
class DecodedPath:
    agent: int
    day: int
    path: tuple[int, ...]
    log_score: float


def _log(arr: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.log(arr)


def _as_inputs(initial, kernel, evidence):
    initial = np.asarray(initial, dtype=np.float64)
    kernel = np.asarray(kernel, dtype=np.float64)
    evidence = np.asarray(evidence, dtype=np.float64)
    if evidence.ndim != 2 or evidence.shape[0] == 0:
        raise ValidationError("evidence must be a nonempty (ticks, locations) array")
    n = initial.shape[0]
    if kernel.shape != (n, n) or evidence.shape[1] != n:
        raise ValidationError("initial, kernel, and evidence dimensions disagree")
    return initial, kernel, evidence


def viterbi_decode(initial, kernel, evidence, agent: int = 0, day: int = 0) -> DecodedPath:
    """Argmax path over initial * transitions * evidence, in log space.

    Suffix scores are computed backward, then the path is rebuilt greedily
    from the front taking the lowest location id among optimal choices, which
    yields the lexicographically smallest optimal path.
    """
    initial, kernel, evidence = _as_inputs(initial, kernel, evidence)
    T, n = evidence.shape
    log_init = _log(initial)
    log_k = _log(kernel)
    log_ev = _log(evidence)

    suffix = np.empty((T, n))
    suffix[T - 1] = log_ev[T - 1]
    with np.errstate(invalid="ignore"):
        for t in range(T - 2, -1, -1):
            # suffix[t][i] = ev[t][i] + max_j (K[i,j] + suffix[t+1][j])
            suffix[t] = log_ev[t] + np.max(log_k + suffix[t + 1][None, :], axis=1)

    head = log_init + suffix[0]
    best = float(head.max())
    if not np.isfinite(best):
        raise AllPathsZeroError("no path has positive probability")
    path = [int(head.argmax())]
    for t in range(1, T):
        step = log_k[path[-1]] + suffix[t]
        path.append(int(step.argmax()))
    return DecodedPath(agent=agent, day=day, path=tuple(path), log_score=best)


def brute_force_decode(initial, kernel, evidence, agent: int = 0, day: int = 0) -> DecodedPath:
    """Enumerate every location sequence; same tie-break as viterbi_decode.

    The full score tensor is materialized (flat index order is exactly
    lexicographic path order, and argmax takes the first maximum), capped at
    BRUTE_FORCE_CAP paths.
    """
    initial, kernel, evidence = _as_inputs(initial, kernel, evidence)
    T, n = evidence.shape
    if n**T > BRUTE_FORCE_CAP:
        raise InstanceTooLargeError(f"{n}^{T} paths exceed the enumeration cap")
    log_k = _log(kernel)
    log_ev = _log(evidence)

    scores = _log(initial) + log_ev[0]
    with np.errstate(invalid="ignore"):
        for t in range(1, T):
            scores = scores[..., None] + (log_k + log_ev[t][None, :])
    flat = scores.reshape(-1)
    best_idx = int(flat.argmax())
    best = float(flat[best_idx])
    if not np.isfinite(best):
        raise AllPathsZeroError("no path has positive probability")
    path = np.unravel_index(best_idx, (n,) * T)
    return DecodedPath(agent=agent, day=day, path=tuple(int(x) for x in path), log_score=best)
