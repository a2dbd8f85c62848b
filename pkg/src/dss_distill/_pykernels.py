"""Pure-Python (numpy) versions of the hot kernels.

``jacobi_eigh`` runs the same cyclic Jacobi iteration as the compiled
kernel but applies each round of a round-robin pivot schedule at once:
pivot pairs within a round are disjoint, so their rotations commute and
can be applied as vectorized updates of the pivot rows and columns.
"""

import numpy as np


def _round_robin(n):
    """Rounds of disjoint ``(p, q)`` pairs covering every pair exactly once."""
    players = list(range(n)) if n % 2 == 0 else list(range(n)) + [None]
    m = len(players)
    rounds = []
    for _ in range(m - 1):
        pairs = []
        for i in range(m // 2):
            p, q = players[i], players[m - 1 - i]
            if p is not None and q is not None:
                pairs.append((min(p, q), max(p, q)))
        rounds.append(np.array(pairs, dtype=np.intp).reshape(-1, 2))
        players = [players[0]] + [players[-1]] + players[1:-1]
    return rounds


def jacobi_eigh(a, eps=1e-15, max_sweeps=100):
    """Return ``(w, V)`` with ``a = V diag(w) V^H``; ``w`` is unsorted."""
    a = np.array(a, dtype=np.complex128, copy=True)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    if n < 2:
        return a.diagonal().real.copy(), v
    fro2 = float(np.sum(np.abs(a) ** 2))
    tiny = 1e-17 * np.sqrt(fro2)
    rounds = _round_robin(n)
    upper = np.triu_indices(n, 1)
    for _ in range(max_sweeps):
        off2 = float(np.sum(np.abs(a[upper]) ** 2))
        if off2 <= eps * eps * fro2 or off2 == 0.0:
            break
        for pairs in rounds:
            p, q = pairs[:, 0], pairs[:, 1]
            apq = a[p, q]
            mag = np.abs(apq)
            act = mag > tiny
            if not act.any():
                continue
            p, q, apq, mag = p[act], q[act], apq[act], mag[act]
            w = np.conj(apq) / mag
            zeta = (a[q, q].real - a[p, p].real) / (2.0 * mag)
            t = np.where(zeta >= 0.0, 1.0, -1.0) / (np.abs(zeta) + np.sqrt(1.0 + zeta * zeta))
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            sw, cw = s * w, c * w
            ap, aq = a[:, p], a[:, q]
            a[:, p], a[:, q] = ap * c - aq * sw, ap * s + aq * cw
            ap, aq = a[p, :], a[q, :]
            a[p, :] = c[:, None] * ap - np.conj(sw)[:, None] * aq
            a[q, :] = s[:, None] * ap + np.conj(cw)[:, None] * aq
            a[p, q] = 0.0
            a[q, p] = 0.0
            vp, vq = v[:, p], v[:, q]
            v[:, p], v[:, q] = vp * c - vq * sw, vp * s + vq * cw
        a = 0.5 * (a + a.conj().T)
    return a.diagonal().real.copy(), v


def block_scan(rho, dim_b, subs_a, subs_b):
    """Trace and squared Frobenius norm of every block ``S_A x S_B``.

    ``subs_a`` is ``(KA, ma)`` and ``subs_b`` is ``(KB, mb)``; both outputs
    have shape ``(KA, KB)``.
    """
    rho = np.asarray(rho, dtype=np.complex128)
    subs_a = np.asarray(subs_a, dtype=np.intp)
    subs_b = np.asarray(subs_b, dtype=np.intp)
    dim_a = rho.shape[0] // dim_b
    r4 = rho.reshape(dim_a, dim_b, dim_a, dim_b)
    ka, kb = len(subs_a), len(subs_b)
    prob = np.empty((ka, kb))
    frob = np.empty((ka, kb))
    diag = rho.diagonal().real.reshape(dim_a, dim_b)
    for ia, sa in enumerate(subs_a):
        # (b, b', a, a') slab for this S_A, then gather all S_B at once
        slab = r4[sa][:, :, sa].transpose(1, 3, 0, 2)
        blocks = slab[subs_b[:, :, None], subs_b[:, None, :]]
        frob[ia] = np.sum(np.abs(blocks) ** 2, axis=(1, 2, 3, 4))
        prob[ia] = diag[sa][:, subs_b].sum(axis=(0, 2))
    return prob, frob
