"""Combinatorial R matrix, local energy, and intrinsic/total energies.

For a pair of crystals (B, B') the R matrix is the unique bijection
B (x) B' -> B' (x) B fixing the pair of maximal elements and commuting
with every e_i and f_i.  The local energy H is its integer companion:
constant along classical edges, stepping by one along a 0-edge exactly
when e_0 acts on the same side of an element and of its R image (up for
the left side, down for the right side, normalized to 0 on the maximal
pair).  Both are computed once per crystal pair by walking the entire
tensor product from the maximal pair; the walk doubles as a proof that
the product is connected, otherwise R is not defined and we raise.
"""

from collections import deque

from .crystal import (CrystalError, TensorElement, _eps_acting_factor,
                      _phi_acting_factor)

# {(id(left), id(right)): (left, right, table)}; crystal refs keep ids alive
_tables = {}


def _step(xt, i, lower):
    """Apply f_i (lower) or e_i to a two-factor element.

    Returns (image, acting position) or (None, None)."""
    scan = _phi_acting_factor if lower else _eps_acting_factor
    total, pos = scan(xt, i)
    if total == 0:
        return None, None
    c, b = xt.crystals[pos], xt.nodes[pos]
    nxt = c.f(i, b) if lower else c.e(i, b)
    if nxt is None:
        raise CrystalError(f"signature points at factor {pos} but the local "
                           f"operator is undefined on {c.display(b)!r}")
    return xt.replace(pos, nxt), pos


def _pair_table(left, right):
    """{(a, b): ((b~, a~), h)} over all of left (x) right."""
    key = (id(left), id(right))
    hit = _tables.get(key)
    if hit is not None:
        return hit[2]
    if left.cartan is not right.cartan:
        raise CrystalError("crystals live over different affine types")
    ul, ur = left.maximal_element(), right.maximal_element()
    seed = (ul, ur)
    table = {seed: ((ur, ul), 0)}
    queue = deque([seed])
    while queue:
        pair = queue.popleft()
        image, h = table[pair]
        xt = TensorElement((left, right), pair)
        yt = TensorElement((right, left), image)
        for i in left.index_set:
            for lower in (False, True):
                nx, px = _step(xt, i, lower)
                ny, py = _step(yt, i, lower)
                if (nx is None) != (ny is None):
                    raise CrystalError(
                        f"{left.name} (x) {right.name}: {i}-edge exists on "
                        f"only one side of the R pairing at {xt!r}")
                if nx is None:
                    continue
                nh = h
                if i == 0:
                    # e_0 on matching sides moves h; for a lowering step the
                    # matching side is read off the same edge
                    if px == py == 0:
                        nh = h - 1 if lower else h + 1
                    elif px == py == 1:
                        nh = h + 1 if lower else h - 1
                got = (ny.nodes, nh)
                known = table.get(nx.nodes)
                if known is None:
                    table[nx.nodes] = got
                    queue.append(nx.nodes)
                elif known != got:
                    raise CrystalError(
                        f"{left.name} (x) {right.name}: R/energy propagation "
                        f"is inconsistent at {nx!r}")
    if len(table) != len(left) * len(right):
        raise CrystalError(f"{left.name} (x) {right.name} is not connected; "
                           f"R is undefined")
    _tables[key] = (left, right, table)
    return table


def _lookup(x):
    if len(x) != 2:
        raise CrystalError("R and H act on two-factor elements")
    left, right = x.crystals
    return _pair_table(left, right)[x.nodes]


def combinatorial_R(x):
    """R(a (x) b) as an element of the swapped product."""
    (bt, at), _ = _lookup(x)
    return TensorElement((x.crystals[1], x.crystals[0]), (bt, at))


def local_energy(x):
    """H(a (x) b), normalized to 0 on the maximal pair."""
    return _lookup(x)[1]


def b_sharp(crystal):
    """The phi-concentrated element of minimal level.

    phi(b) = phi_0(b) Lambda_0 can hold for several elements (the trivial
    classical component and the classical lowest, say); the level of such
    an element is proportional to phi_0, so the minimum picks the right one.
    """
    hits = [b for b in crystal.nodes
            if all(crystal.phi(i, b) == 0
                   for i in crystal.index_set if i != 0)]
    if not hits:
        raise CrystalError(f"{crystal.name}: no phi = level * Lambda_0 "
                           f"element")
    best = min(crystal.phi(0, b) for b in hits)
    hits = [b for b in hits if crystal.phi(0, b) == best]
    if len(hits) != 1:
        raise CrystalError(f"{crystal.name}: {len(hits)} candidates for the "
                           f"phi = level * Lambda_0 element")
    return hits[0]


def intrinsic_energy(crystal, b):
    """D(b) = H(b (x) b#) - H(u (x) b#)."""
    sharp = b_sharp(crystal)
    table = _pair_table(crystal, crystal)
    return (table[(b, sharp)][1]
            - table[(crystal.maximal_element(), sharp)][1])


def _swap_pair(factors, idx):
    """Replace factors idx, idx+1 by their R image; returns local h."""
    (cl, nl), (cr, nr) = factors[idx], factors[idx + 1]
    (bt, at), h = _pair_table(cl, cr)[(nl, nr)]
    factors[idx] = (cr, bt)
    factors[idx + 1] = (cl, at)
    return h


def energy(x):
    """Total energy of a tensor element.

    Factors are numbered 1..N from the right.  For each pair j < k the
    k-th factor is carried leftward next to the j-th by R swaps and the
    local energy of that pair is accumulated; for each j the factors
    right of j are swapped away and the intrinsic energy of the factor
    landing rightmost is added.
    """
    n = len(x)
    base = list(zip(x.crystals, x.nodes))
    total = 0
    for j in range(1, n):
        for k in range(j + 1, n + 1):
            cur = base.copy()
            for m in range(k - 1, j, -1):
                _swap_pair(cur, n - m - 1)
            li = n - j - 1
            (cl, nl), (cr, nr) = cur[li], cur[li + 1]
            total += _pair_table(cl, cr)[(nl, nr)][1]
    for j in range(1, n + 1):
        cur = base.copy()
        for m in range(j - 1, 0, -1):
            _swap_pair(cur, n - m - 1)
        c, b = cur[-1]
        total += intrinsic_energy(c, b)
    return total


def energy_pairs(x):
    """sum of m * H(c_m (x) c_{m+1}) over display positions m = 1..N-1.

    Agrees with energy() on products of a single crystal whose factors
    have trivial intrinsic energy (single-column/minuscule cases)."""
    total = 0
    for m in range(1, len(x)):
        total += m * local_energy(x.slice(m - 1, m + 1))
    return total
