"""Hot inner loops, each with a numba kernel and a numpy fallback.

Two loops dominate runtime: the linear oracle scan for the correction
function and the permutation search inside graph canonical forms.  The
public entry points (`last_violator`, `best_permutation`) dispatch to the
jitted kernel when numba is active and to the numpy version otherwise.
Both paths are always importable so the benchmark can compare them.
"""

import numpy as np

from ._accel import HAVE_NUMBA, njit

# Guard for int64 products in the scan kernels.
INT64_SAFE = 2**62
# Below this many terms a plain loop beats array setup and jit dispatch.
SMALL_SCAN = 4096


def _last_violator_loop(p, num, den, n0, cutoff):
    # largest n in [1, cutoff] with num*(n - n0) <= den*floor(log_p n), else 0
    last = 0
    k = 0
    nxt = p
    for n in range(1, cutoff + 1):
        if n == nxt:
            k += 1
            nxt *= p
        if num * (n - n0) <= den * k:
            last = n
    return last


def last_violator_numpy(p, num, den, n0, cutoff):
    n = np.arange(1, cutoff + 1, dtype=np.int64)
    k = np.zeros(cutoff, dtype=np.int64)
    pk = p
    while pk <= cutoff:
        k += n >= pk
        pk *= p
    bad = np.flatnonzero(num * (n - n0) <= den * k)
    return int(bad[-1]) + 1 if bad.size else 0


def _best_permutation_loop(mat, perms):
    # row-major upper triangle (diagonal included) of mat[perm][:, perm]
    nperm, size = perms.shape
    best = 0
    for t in range(1, nperm):
        decided = False
        for i in range(size):
            for j in range(i, size):
                a = mat[perms[t, i], perms[t, j]]
                b = mat[perms[best, i], perms[best, j]]
                if a != b:
                    if a < b:
                        best = t
                    decided = True
                    break
            if decided:
                break
    return best


def best_permutation_numpy(mat, perms):
    size = mat.shape[0]
    iu, ju = np.triu_indices(size)
    keys = mat[perms[:, iu], perms[:, ju]]
    # lexsort treats the last key as primary
    order = np.lexsort(keys.T[::-1])
    return int(order[0])


last_violator_jit = njit(_last_violator_loop) if HAVE_NUMBA else None
best_permutation_jit = njit(_best_permutation_loop) if HAVE_NUMBA else None


def last_violator(p, num, den, n0, cutoff):
    """Largest ``n <= cutoff`` violating ``num/den * (n - n0) > floor(log_p n)``.

    Returns 0 when there is no violator.  Falls back to exact Python integers
    whenever an intermediate product could overflow int64.
    """
    width = max(abs(num) * (cutoff + abs(n0)), abs(den) * (cutoff.bit_length() + 1))
    if width >= INT64_SAFE or cutoff < SMALL_SCAN:
        return _last_violator_loop(p, num, den, n0, cutoff)
    if HAVE_NUMBA:
        return int(last_violator_jit(p, num, den, n0, cutoff))
    return last_violator_numpy(p, num, den, n0, cutoff)


def best_permutation(mat, perms):
    """Index of the permutation giving the lexicographically least upper triangle."""
    if perms.shape[0] == 1:
        return 0
    if HAVE_NUMBA:
        return int(best_permutation_jit(mat, perms))
    return best_permutation_numpy(mat, perms)
