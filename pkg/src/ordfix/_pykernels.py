"""Pure-Python fallback for the scan kernels.

Same signatures and the same first-witness order (lexicographic) as the
compiled module, so either backend can serve every caller.
"""
import numpy as np


def triangle_violation(dist):
    d = np.asarray(dist, dtype=np.float64)
    n = d.shape[0]
    for i in range(n):
        # bad[j, k] <=> d[i, k] > d[i, j] + d[j, k]
        bad = d[i][None, :] > d[i][:, None] + d
        if bad.any():
            j, k = np.argwhere(bad)[0]
            return (i, int(j), int(k))
    return None


def transitivity_violation(rel):
    r = np.asarray(rel, dtype=bool)
    n = r.shape[0]
    for i in range(n):
        for j in np.flatnonzero(r[i]):
            bad = r[j] & ~r[i]
            if bad.any():
                return (i, int(j), int(np.flatnonzero(bad)[0]))
    return None


def floyd_warshall(dist):
    d = np.array(dist, dtype=np.float64, copy=True)
    n = d.shape[0]
    for k in range(n):
        via = d[:, k][:, None] + d[k, :][None, :]
        np.minimum(d, via, out=d)
    return d


def transitive_closure(rel):
    r = np.array(rel, dtype=bool, copy=True)
    n = r.shape[0]
    for k in range(n):
        r |= r[:, k][:, None] & r[k, :][None, :]
    return r


def linear_contraction_violation(dist, selfmap, mask, alpha, slack):
    d = np.asarray(dist, dtype=np.float64)
    t = np.asarray(selfmap, dtype=np.int64)
    m = np.asarray(mask, dtype=bool)
    image = d[np.ix_(t, t)]
    bad = m & (image > alpha * d + slack)
    checked = int(m.sum())
    if bad.any():
        i, j = np.argwhere(bad)[0]
        # count only pairs scanned up to and including the witness
        flat = int(i) * d.shape[0] + int(j)
        return (int(i), int(j), int(m.ravel()[: flat + 1].sum()))
    return (-1, -1, checked)


def maia_series(dist, selfmap, lam, terms):
    d = np.asarray(dist, dtype=np.float64)
    t = np.asarray(selfmap, dtype=np.int64)
    n = d.shape[0]
    x = np.repeat(np.arange(n), n)
    y = np.tile(np.arange(n), n)
    acc = np.zeros(n * n)
    weight = 1.0
    for _ in range(int(terms)):
        live = x != y
        if not live.any():
            break
        acc[live] += weight * d[x[live], y[live]]
        weight *= lam
        x = t[x]
        y = t[y]
    return acc.reshape(n, n)
