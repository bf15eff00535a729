"""Compiled event loops for the N^2-speeded dynamics.

All kernels share the same structure: category rates maintained as counters
and O(1)-updatable index sets, exponential waiting times, exact recording at
scheduled macroscopic times (the state is right-continuous, so a snapshot
taken between events uses the current state), and an exactly accumulated
time integral of the origin occupation indicator.

Counter slots (int64[8]):
    0 zero-range moves, 1 boundary events, 2 exclusion moves,
    3 left-edge events, 4 right-edge events, 5 translation overflow.
"""

from __future__ import annotations

import numpy as np
from numba import njit

U = np.uint64
_GOLDEN = U(0x9E3779B97F4A7C15)
_MIX1 = U(0xBF58476D1CE4E5B9)
_MIX2 = U(0x94D049BB133111EB)
_INV = 2.0**-53

C_ZR, C_BOUNDARY, C_EX, C_LEDGE, C_REDGE, C_OVERFLOW = 0, 1, 2, 3, 4, 5


@njit(inline="always")
def _u01(state):
    state = state + _GOLDEN
    z = state
    z = (z ^ (z >> U(30))) * _MIX1
    z = (z ^ (z >> U(27))) * _MIX2
    z = z ^ (z >> U(31))
    return state, (np.float64(z >> U(11)) + 0.5) * _INV


@njit(inline="always")
def _set_add(items, pos, n, idx):
    if pos[idx] < 0:
        items[n] = idx
        pos[idx] = n
        n += 1
    return n


@njit(inline="always")
def _set_remove(items, pos, n, idx):
    p = pos[idx]
    if p >= 0:
        last = items[n - 1]
        items[p] = last
        pos[last] = p
        pos[idx] = -1
        n -= 1
    return n


@njit(cache=True, nogil=True)
def run_coupled_kernel(
    eta,
    xi,
    x0,
    n_scale,
    rb,
    obs_times,
    seed,
    eta_snaps,
    xi_snaps,
    x_snaps,
    ig_snaps,
    ov_snaps,
    counters,
):
    """Coupled generator: zero-range on [-Lz, 0], boundary jump, exclusion.

    With ``xi`` empty and ``rb = 0`` this is the reflected zero-range chain.
    """
    n2 = float(n_scale) * float(n_scale)
    m = eta.size  # sites -Lz .. 0
    site0 = m - 1
    le = xi.size
    nb = le - 1 if le > 0 else 0

    # bulk active set: indices 1..m-2 (both jump directions available)
    act_items = np.empty(m, dtype=np.int64)
    act_pos = np.full(m, -1, dtype=np.int64)
    n_act = 0
    for i in range(1, m - 1):
        if eta[i] > 0:
            n_act = _set_add(act_items, act_pos, n_act, i)
    a_edge = 1.0 if eta[0] > 0 else 0.0
    a_origin = 1.0 if eta[site0] > 0 else 0.0

    s10_items = np.empty(max(nb, 1), dtype=np.int64)
    s10_pos = np.full(max(nb, 1), -1, dtype=np.int64)
    s01_items = np.empty(max(nb, 1), dtype=np.int64)
    s01_pos = np.full(max(nb, 1), -1, dtype=np.int64)
    n10 = 0
    n01 = 0
    for b in range(nb):
        if xi[b] == 1 and xi[b + 1] == 0:
            n10 = _set_add(s10_items, s10_pos, n10, b)
        elif xi[b] == 0 and xi[b + 1] == 1:
            n01 = _set_add(s01_items, s01_pos, n01, b)

    st = U(seed)
    t = 0.0
    ig = 0.0
    x_count = x0
    k = 0
    n_obs = obs_times.size

    while True:
        tot = n_act + 0.5 * a_edge + (0.5 + rb) * a_origin + 0.5 * (n10 + n01)
        if tot > 0.0:
            st, u = _u01(st)
            t_next = t + (-np.log(u) / (n2 * tot))
        else:
            t_next = np.inf
        g0 = 1.0 if eta[site0] > 0 else 0.0
        while k < n_obs and obs_times[k] <= t_next:
            eta_snaps[k] = eta
            if le > 0:
                xi_snaps[k] = xi
            x_snaps[k] = x_count
            ig_snaps[k] = ig + g0 * (obs_times[k] - t)
            ov_snaps[k] = counters[C_OVERFLOW]
            k += 1
        if k >= n_obs or tot == 0.0:
            break
        ig += g0 * (t_next - t)
        t = t_next

        st, u = _u01(st)
        r = u * tot
        if r < n_act:
            # bulk zero-range move
            st, u2 = _u01(st)
            i = act_items[np.int64(u2 * n_act)]
            st, u3 = _u01(st)
            j = i - 1 if u3 < 0.5 else i + 1
            eta[i] -= 1
            if eta[i] == 0:
                n_act = _set_remove(act_items, act_pos, n_act, i)
            eta[j] += 1
            if eta[j] == 1:
                if j == 0:
                    a_edge = 1.0
                elif j == site0:
                    a_origin = 1.0
                else:
                    n_act = _set_add(act_items, act_pos, n_act, j)
            if j == 0 or i == 0:
                counters[C_LEDGE] += 1
            counters[C_ZR] += 1
            continue
        r -= n_act
        if r < 0.5 * a_edge:
            # left edge site hops right
            eta[0] -= 1
            if eta[0] == 0:
                a_edge = 0.0
            eta[1] += 1
            if eta[1] == 1:
                if 1 == site0:
                    a_origin = 1.0
                else:
                    n_act = _set_add(act_items, act_pos, n_act, 1)
            counters[C_ZR] += 1
            counters[C_LEDGE] += 1
            continue
        r -= 0.5 * a_edge
        if r < (0.5 + rb) * a_origin:
            st, u2 = _u01(st)
            if u2 < 0.5 / (0.5 + rb):
                # origin hops left into the bulk
                eta[site0] -= 1
                if eta[site0] == 0:
                    a_origin = 0.0
                j = site0 - 1
                eta[j] += 1
                if eta[j] == 1:
                    if j == 0:
                        a_edge = 1.0
                    else:
                        n_act = _set_add(act_items, act_pos, n_act, j)
                counters[C_ZR] += 1
                if j == 0:
                    counters[C_LEDGE] += 1
            else:
                # boundary event: particle leaves, exclusion side translates
                eta[site0] -= 1
                if eta[site0] == 0:
                    a_origin = 0.0
                x_count += 1
                counters[C_BOUNDARY] += 1
                if le > 0:
                    if xi[le - 1] == 1:
                        counters[C_OVERFLOW] += 1
                        counters[C_REDGE] += 1
                    for b in range(le - 1, 0, -1):
                        xi[b] = xi[b - 1]
                    xi[0] = 0
                    # rebuild bond sets after the shift
                    for b in range(nb):
                        s10_pos[b] = -1
                        s01_pos[b] = -1
                    n10 = 0
                    n01 = 0
                    for b in range(nb):
                        if xi[b] == 1 and xi[b + 1] == 0:
                            n10 = _set_add(s10_items, s10_pos, n10, b)
                        elif xi[b] == 0 and xi[b + 1] == 1:
                            n01 = _set_add(s01_items, s01_pos, n01, b)
            continue
        r -= (0.5 + rb) * a_origin
        if r < 0.5 * n10 and n10 > 0:
            st, u2 = _u01(st)
            b = s10_items[np.int64(u2 * n10)]
            xi[b] = 0
            xi[b + 1] = 1
        elif n01 > 0:
            st, u2 = _u01(st)
            b = s01_items[np.int64(u2 * n01)]
            xi[b] = 1
            xi[b + 1] = 0
        else:
            continue  # rounding fell past the last class; measure-zero skip
        # refresh memberships of the touched bonds b-1, b, b+1
        for bb in range(b - 1, b + 2):
            if 0 <= bb < nb:
                want10 = xi[bb] == 1 and xi[bb + 1] == 0
                want01 = xi[bb] == 0 and xi[bb + 1] == 1
                if want10:
                    n10 = _set_add(s10_items, s10_pos, n10, bb)
                else:
                    n10 = _set_remove(s10_items, s10_pos, n10, bb)
                if want01:
                    n01 = _set_add(s01_items, s01_pos, n01, bb)
                else:
                    n01 = _set_remove(s01_items, s01_pos, n01, bb)
        counters[C_EX] += 1
        if b == nb - 1:
            counters[C_REDGE] += 1

    return t


@njit(cache=True, nogil=True)
def run_fullline_kernel(
    eta,
    lo,
    x0,
    n_scale,
    obs_times,
    seed,
    eta_snaps,
    x_snaps,
    counters,
):
    """Full-line zero-range with the forbidden 1 -> 0 jump (surface dynamics).

    Every admissible jump fires at rate N^2/2 (the spin-flip rate); a jump
    0 -> 1 increments the crossing counter (the origin column drops by one).
    """
    n2 = float(n_scale) * float(n_scale)
    m = eta.size  # sites lo .. lo+m-1
    hi = lo + m - 1
    i_site0 = -lo
    i_site1 = 1 - lo

    # full-weight set: sites with both directions available, half-weight
    # sites: lo (right only), 1 (right only), hi (left only)
    full_items = np.empty(m, dtype=np.int64)
    full_pos = np.full(m, -1, dtype=np.int64)
    n_full = 0
    for i in range(1, m - 1):
        if i != i_site1 and eta[i] > 0:
            n_full = _set_add(full_items, full_pos, n_full, i)
    h_first = 1.0 if eta[0] > 0 else 0.0
    h_one = 1.0 if 0 < i_site1 < m - 1 and eta[i_site1] > 0 else 0.0
    h_last = 1.0 if eta[m - 1] > 0 else 0.0

    st = U(seed)
    t = 0.0
    x_count = x0
    k = 0
    n_obs = obs_times.size

    while True:
        tot = n_full + 0.5 * (h_first + h_one + h_last)
        if tot > 0.0:
            st, u = _u01(st)
            t_next = t + (-np.log(u) / (n2 * tot))
        else:
            t_next = np.inf
        while k < n_obs and obs_times[k] <= t_next:
            eta_snaps[k] = eta
            x_snaps[k] = x_count
            k += 1
        if k >= n_obs or tot == 0.0:
            break
        t = t_next

        st, u = _u01(st)
        r = u * tot
        if r < n_full:
            st, u2 = _u01(st)
            i = full_items[np.int64(u2 * n_full)]
            st, u3 = _u01(st)
            j = i - 1 if u3 < 0.5 else i + 1
        elif r < n_full + 0.5 * h_first:
            i = 0
            j = 1
        elif r < n_full + 0.5 * (h_first + h_one):
            i = i_site1
            j = i + 1
        else:
            i = m - 1
            j = m - 2
        # apply jump i -> j
        eta[i] -= 1
        if eta[i] == 0:
            if i == 0:
                h_first = 0.0
            elif i == m - 1:
                h_last = 0.0
            elif i == i_site1:
                h_one = 0.0
            else:
                n_full = _set_remove(full_items, full_pos, n_full, i)
        eta[j] += 1
        if eta[j] == 1:
            if j == 0:
                h_first = 1.0
            elif j == m - 1:
                h_last = 1.0
            elif j == i_site1:
                h_one = 1.0
            else:
                n_full = _set_add(full_items, full_pos, n_full, j)
        if i == i_site0 and j == i_site0 + 1:
            x_count += 1
            counters[C_BOUNDARY] += 1
        counters[C_ZR] += 1
        if i == 0 or j == 0 or i == m - 1 or j == m - 1:
            counters[C_LEDGE] += 1

    return t


@njit(inline="always")
def _refresh_bond(b, items, pos, ns, xa, xb):
    """Recompute the six basic-coupling move classes of one bond.

    Class order: 0 matched right, 1 xa-only right, 2 xb-only right,
    3 matched left, 4 xa-only left, 5 xb-only left.
    """
    ra = xa[b] == 1 and xa[b + 1] == 0
    rb_ = xb[b] == 1 and xb[b + 1] == 0
    la = xa[b] == 0 and xa[b + 1] == 1
    lb = xb[b] == 0 and xb[b + 1] == 1
    if ra and rb_:
        ns[0] = _set_add(items[0], pos[0], ns[0], b)
    else:
        ns[0] = _set_remove(items[0], pos[0], ns[0], b)
    if ra and not rb_:
        ns[1] = _set_add(items[1], pos[1], ns[1], b)
    else:
        ns[1] = _set_remove(items[1], pos[1], ns[1], b)
    if rb_ and not ra:
        ns[2] = _set_add(items[2], pos[2], ns[2], b)
    else:
        ns[2] = _set_remove(items[2], pos[2], ns[2], b)
    if la and lb:
        ns[3] = _set_add(items[3], pos[3], ns[3], b)
    else:
        ns[3] = _set_remove(items[3], pos[3], ns[3], b)
    if la and not lb:
        ns[4] = _set_add(items[4], pos[4], ns[4], b)
    else:
        ns[4] = _set_remove(items[4], pos[4], ns[4], b)
    if lb and not la:
        ns[5] = _set_add(items[5], pos[5], ns[5], b)
    else:
        ns[5] = _set_remove(items[5], pos[5], ns[5], b)


@njit(cache=True, nogil=True)
def run_pair_kernel(
    eta,
    xa,
    xb,
    labels_a,
    labels_b,
    stirring,
    n_scale,
    rb,
    obs_times,
    seed,
    xa_snaps,
    xb_snaps,
    la_snaps,
    lb_snaps,
    x_snaps,
    viol_snaps,
    counters,
):
    """Two exclusion copies driven by one dissipative side.

    basic mode (stirring=0): matched moves where both copies can move, solo
    moves otherwise; preserves pointwise order of ordered initial pairs.
    stirring mode (stirring=1): every bond exchanges the contents (values and
    particle labels) of both copies at rate 1/2, realizing both marginals
    with a common site-permutation flow.

    Boundary events translate both copies (and labels).  ``viol`` tracks
    #sites with xa > xb exactly, updated incrementally; counters[8] holds
    the running maximum over the whole path, counters[6]/[7] the per-copy
    translation overflow counts.
    """
    n2 = float(n_scale) * float(n_scale)
    m = eta.size
    site0 = m - 1
    le = xa.size
    nb = le - 1

    act_items = np.empty(m, dtype=np.int64)
    act_pos = np.full(m, -1, dtype=np.int64)
    n_act = 0
    for i in range(1, m - 1):
        if eta[i] > 0:
            n_act = _set_add(act_items, act_pos, n_act, i)
    a_edge = 1.0 if eta[0] > 0 else 0.0
    a_origin = 1.0 if eta[site0] > 0 else 0.0

    # six bond sets for the basic coupling (unused when stirring)
    items = np.empty((6, max(nb, 1)), dtype=np.int64)
    pos = np.full((6, max(nb, 1)), -1, dtype=np.int64)
    ns = np.zeros(6, dtype=np.int64)
    if stirring == 0:
        for b in range(nb):
            _refresh_bond(b, items, pos, ns, xa, xb)

    viol = 0
    for s in range(le):
        if xa[s] > xb[s]:
            viol += 1

    st = U(seed)
    t = 0.0
    x_count = 0
    k = 0
    n_obs = obs_times.size

    while True:
        zr_tot = n_act + 0.5 * a_edge + (0.5 + rb) * a_origin
        if stirring == 1:
            ex_tot = 0.5 * nb
        else:
            ex_tot = 0.5 * (ns[0] + ns[1] + ns[2] + ns[3] + ns[4] + ns[5])
        tot = zr_tot + ex_tot
        if tot > 0.0:
            st, u = _u01(st)
            t_next = t + (-np.log(u) / (n2 * tot))
        else:
            t_next = np.inf
        while k < n_obs and obs_times[k] <= t_next:
            xa_snaps[k] = xa
            xb_snaps[k] = xb
            la_snaps[k] = labels_a
            lb_snaps[k] = labels_b
            x_snaps[k] = x_count
            viol_snaps[k] = viol
            k += 1
        if k >= n_obs or tot == 0.0:
            break
        t = t_next

        st, u = _u01(st)
        r = u * tot
        if r < n_act:
            st, u2 = _u01(st)
            i = act_items[np.int64(u2 * n_act)]
            st, u3 = _u01(st)
            j = i - 1 if u3 < 0.5 else i + 1
            eta[i] -= 1
            if eta[i] == 0:
                n_act = _set_remove(act_items, act_pos, n_act, i)
            eta[j] += 1
            if eta[j] == 1:
                if j == 0:
                    a_edge = 1.0
                elif j == site0:
                    a_origin = 1.0
                else:
                    n_act = _set_add(act_items, act_pos, n_act, j)
            counters[C_ZR] += 1
            continue
        r -= n_act
        if r < 0.5 * a_edge:
            eta[0] -= 1
            if eta[0] == 0:
                a_edge = 0.0
            eta[1] += 1
            if eta[1] == 1:
                if 1 == site0:
                    a_origin = 1.0
                else:
                    n_act = _set_add(act_items, act_pos, n_act, 1)
            counters[C_ZR] += 1
            continue
        r -= 0.5 * a_edge
        if r < (0.5 + rb) * a_origin:
            st, u2 = _u01(st)
            if u2 < 0.5 / (0.5 + rb):
                eta[site0] -= 1
                if eta[site0] == 0:
                    a_origin = 0.0
                j = site0 - 1
                eta[j] += 1
                if eta[j] == 1:
                    if j == 0:
                        a_edge = 1.0
                    else:
                        n_act = _set_add(act_items, act_pos, n_act, j)
                counters[C_ZR] += 1
            else:
                eta[site0] -= 1
                if eta[site0] == 0:
                    a_origin = 0.0
                x_count += 1
                counters[C_BOUNDARY] += 1
                if xa[le - 1] == 1:
                    counters[6] += 1
                if xb[le - 1] == 1:
                    counters[7] += 1
                if xa[le - 1] == 1 or xb[le - 1] == 1:
                    counters[C_OVERFLOW] += 1
                for s in range(le - 1, 0, -1):
                    xa[s] = xa[s - 1]
                    xb[s] = xb[s - 1]
                    labels_a[s] = labels_a[s - 1]
                    labels_b[s] = labels_b[s - 1]
                xa[0] = 0
                xb[0] = 0
                labels_a[0] = -1
                labels_b[0] = -1
                if stirring == 0:
                    for b in range(nb):
                        _refresh_bond(b, items, pos, ns, xa, xb)
                viol = 0
                for s in range(le):
                    if xa[s] > xb[s]:
                        viol += 1
                if viol > counters[8]:
                    counters[8] = viol
            continue
        r -= (0.5 + rb) * a_origin

        if stirring == 1:
            st, u2 = _u01(st)
            b = np.int64(u2 * nb)
            # remove the touched sites' order contribution, swap, re-add
            for s in range(b, b + 2):
                if xa[s] > xb[s]:
                    viol -= 1
            xa[b], xa[b + 1] = xa[b + 1], xa[b]
            xb[b], xb[b + 1] = xb[b + 1], xb[b]
            labels_a[b], labels_a[b + 1] = labels_a[b + 1], labels_a[b]
            labels_b[b], labels_b[b + 1] = labels_b[b + 1], labels_b[b]
            for s in range(b, b + 2):
                if xa[s] > xb[s]:
                    viol += 1
            if viol > counters[8]:
                counters[8] = viol
            counters[C_EX] += 1
            continue

        # basic coupling: walk the six classes
        cls = -1
        for c in range(6):
            if r < 0.5 * ns[c]:
                cls = c
                break
            r -= 0.5 * ns[c]
        if cls < 0 or ns[cls] == 0:
            continue  # rounding fell past the last class; measure-zero skip
        st, u2 = _u01(st)
        b = items[cls][np.int64(u2 * ns[cls])]
        move_a = cls == 0 or cls == 1 or cls == 3 or cls == 4
        move_b = cls == 0 or cls == 2 or cls == 3 or cls == 5
        if cls <= 2:
            src, dst = b, b + 1
        else:
            src, dst = b + 1, b
        for s in range(b, b + 2):
            if xa[s] > xb[s]:
                viol -= 1
        if move_a:
            xa[src], xa[dst] = 0, 1
            labels_a[dst] = labels_a[src]
            labels_a[src] = -1
        if move_b:
            xb[src], xb[dst] = 0, 1
            labels_b[dst] = labels_b[src]
            labels_b[src] = -1
        for s in range(b, b + 2):
            if xa[s] > xb[s]:
                viol += 1
        if viol > counters[8]:
            counters[8] = viol
        for bb in range(b - 1, b + 2):
            if 0 <= bb < nb:
                _refresh_bond(bb, items, pos, ns, xa, xb)
        counters[C_EX] += 1

    return t
