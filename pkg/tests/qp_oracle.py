"""Independent dense QP oracle for checking the SMO trainer.

Solves the soft-margin dual max sum(a) - 0.5 a'Qa subject to 0 <= a <= C,
y'a = 0, by accelerated projected gradient ascent with an exact projection
onto the box-hyperplane intersection (bisection on the hyperplane
multiplier).  Deliberately shares no code with the trainer.
"""

import numpy as np


def project(v, y, c, iters=60):
    """Euclidean projection of v onto {0 <= a <= c, y'a = 0}."""

    def clipped(lam):
        return np.clip(v - lam * y, 0.0, c)

    # y'clipped(lam) is non-increasing in lam; bracket then bisect.
    span = np.abs(v).max() + c + 1.0
    lo, hi = -span, span
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if y @ clipped(mid) > 0:
            lo = mid
        else:
            hi = mid
    return clipped(0.5 * (lo + hi))


def solve_dual(Z, y, c, max_iter=20_000, stall_tol=1e-13):
    """Returns (alphas, dual objective) at convergence.

    Projected gradient with Nesterov momentum; the momentum sequence is
    restarted whenever it overshoots (objective dips), which keeps the
    iteration monotone at checkpoint granularity.
    """
    Z = np.asarray(Z, dtype=float)
    y = np.asarray(y, dtype=float)
    n = len(y)
    Q = (y[:, None] * Z) @ (y[:, None] * Z).T
    step = 1.0 / max(np.linalg.eigvalsh(Q).max(), 1e-9)

    def objective(a):
        return a.sum() - 0.5 * a @ Q @ a

    a = np.zeros(n)
    v = a.copy()
    tk = 1.0
    best = -np.inf
    stall = 0
    for k in range(max_iter):
        a_new = project(v + step * (1.0 - Q @ v), y, c)
        tn = 0.5 * (1.0 + np.sqrt(1.0 + 4.0 * tk * tk))
        v = a_new + ((tk - 1.0) / tn) * (a_new - a)
        a, tk = a_new, tn
        if k % 50 == 49:
            cur = objective(a)
            if cur < best:  # momentum overshoot: restart
                v = a.copy()
                tk = 1.0
            if cur - best <= stall_tol * max(1.0, abs(cur)):
                stall += 1
                if stall >= 3:
                    break
            else:
                stall = 0
            best = max(best, cur)
    return a, objective(a)
