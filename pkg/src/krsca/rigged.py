"""Rigged configurations with gamma-scaled vacancy numbers.

A configuration assigns to every classical node i a partition nu^{(i)}
whose rows carry integer riggings bounded by the vacancy numbers of the
ambient tensor shape.  The module provides the classical crystal
operators on riggings, the weight and cocharge statistics, the rigging
complementation theta, the soliton evolution A_s acting on the riggings
of the distinguished node, and the decoupling map that deletes nu^{(r)}
and reinterprets what is left over the reduced type.
"""

from fractions import Fraction

from .cartan import build_affine_type, decoupled_type, parse_label
from .crystal import CrystalError


def _ops_supported(cartan):
    """Classical crystal operators exist except for the two families of
    twisted A-type with even superscript."""
    letter, nn, twist, dagger = parse_label(cartan.family_label)
    return not (letter == "A" and twist == 2 and (nn % 2 == 0 or dagger))


def _is_dagger(cartan):
    return parse_label(cartan.family_label)[3]


class TensorShape:
    """Multiset of B^{r,s} factors over one ambient affine type, stored
    as multiplicities L[(r, s)]."""

    def __init__(self, cartan, factors=(), multiplicities=None):
        if isinstance(cartan, str):
            cartan = build_affine_type(cartan)
        self.cartan = cartan
        L = {}
        if multiplicities:
            for (r, s), c in multiplicities.items():
                if c:
                    L[(r, s)] = L.get((r, s), 0) + c
        for r, s in factors:
            L[(r, s)] = L.get((r, s), 0) + 1
        for (r, s), c in L.items():
            if r not in cartan.classical_index_set:
                raise CrystalError(f"B^{{{r},{s}}}: bad node for "
                                   f"{cartan.family_label}")
            if s < 1 or c < 0:
                raise CrystalError(f"bad factor B^{{{r},{s}}} x {c}")
        self.L = {k: c for k, c in sorted(L.items()) if c}

    @classmethod
    def uniform(cls, cartan, r, count, s=1):
        return cls(cartan, [(r, s)] * count)

    def multiplicity(self, r, s):
        return self.L.get((r, s), 0)

    def node_lengths(self, r):
        """{s: count} over the factors attached to node r."""
        return {s: c for (rr, s), c in self.L.items() if rr == r}

    def nodes(self):
        return sorted({r for r, _ in self.L})

    def add(self, r, s, count=1):
        L = dict(self.L)
        L[(r, s)] = L.get((r, s), 0) + count
        return TensorShape(self.cartan, multiplicities=L)

    def factor_count(self):
        return sum(self.L.values())

    def __eq__(self, other):
        return (isinstance(other, TensorShape)
                and self.cartan.family_label == other.cartan.family_label
                and self.L == other.L)

    def __hash__(self):
        return hash((self.cartan.family_label, tuple(sorted(self.L.items()))))

    def __repr__(self):
        parts = [f"B^{{{r},{s}}}" + (f"x{c}" if c > 1 else "")
                 for (r, s), c in sorted(self.L.items())]
        return f"<shape {self.cartan.family_label} " + " ".join(parts) + ">"


def _rigging_ok(cartan, i, ell, x):
    """Integrality of a rigging; the dagger family allows halves on the
    last node at odd lengths."""
    if isinstance(x, int):
        return True
    x = Fraction(x)
    if x.denominator == 1:
        return True
    return (x.denominator == 2 and _is_dagger(cartan)
            and i == cartan.n and ell % 2 == 1)


def _norm(x):
    x = Fraction(x)
    return int(x) if x.denominator == 1 else x


class RiggedConfiguration:
    """rows: {i: ((length, rigging), ...)} sorted longest row first,
    larger rigging first among equal lengths."""

    def __init__(self, shape, rows=None):
        self.shape = shape
        cartan = shape.cartan
        clean = {}
        for i, pairs in (rows or {}).items():
            if i not in cartan.classical_index_set:
                raise CrystalError(f"node {i} outside the classical diagram")
            pairs = tuple(pairs)
            for ell, x in pairs:
                if ell < 1:
                    raise CrystalError(f"row of length {ell} at node {i}")
                if not _rigging_ok(cartan, i, ell, x):
                    raise CrystalError(f"non-integral rigging {x} at "
                                       f"node {i}")
            if pairs:
                clean[i] = tuple(sorted(((ell, _norm(x)) for ell, x in pairs),
                                        key=lambda p: (-p[0], -p[1])))
        self.rows = clean

    @property
    def cartan(self):
        return self.shape.cartan

    def node_rows(self, i):
        return self.rows.get(i, ())

    def partition(self, i):
        return tuple(ell for ell, _ in self.node_rows(i))

    def m(self, i, ell):
        return sum(1 for l, _ in self.node_rows(i) if l == ell)

    def riggings(self, i, ell=None):
        if ell is None:
            return tuple(x for _, x in self.node_rows(i))
        return tuple(x for l, x in self.node_rows(i) if l == ell)

    def is_empty(self):
        return not self.rows

    def with_rows(self, i, pairs):
        rows = dict(self.rows)
        if pairs:
            rows[i] = tuple(pairs)
        else:
            rows.pop(i, None)
        return RiggedConfiguration(self.shape, rows)

    def data(self):
        return tuple(sorted((i, r) for i, r in self.rows.items()))

    def __eq__(self, other):
        return (isinstance(other, RiggedConfiguration)
                and self.shape == other.shape
                and self.rows == other.rows)

    def __hash__(self):
        return hash((self.shape, self.data()))

    def __repr__(self):
        if self.is_empty():
            return f"<rc empty over {self.shape!r}>"
        bits = []
        for i, pairs in self.data():
            cells = " ".join(f"{ell}:{x}" for ell, x in pairs)
            bits.append(f"nu({i})=[{cells}]")
        return "<rc " + " ".join(bits) + ">"


# ---------------------------------------------------------------------------
# vacancy numbers

def _pair_term(cartan, i, ell, j, k):
    """(A_ij / gamma_j) * min(modgamma_i * ell, modgamma_j * k)."""
    gm = cartan.gamma
    mg = cartan.modgamma
    return (Fraction(cartan.a(i, j), gm[j])
            * min(mg[i] * ell, mg[j] * k))


def _as_number(total, cartan, i, what):
    if total.denominator == 1:
        return int(total)
    if total.denominator == 2 and _is_dagger(cartan) and i == cartan.n:
        return total
    raise CrystalError(f"non-integer {what} {total} at node {i}: "
                       f"inconsistent gamma data")


def vacancy_number(rc, i, ell):
    """p_ell^{(i)}: shape contribution at node i minus the scaled
    pairing with all configuration rows."""
    cartan = rc.cartan
    total = Fraction(0)
    for s, cnt in rc.shape.node_lengths(i).items():
        total += cnt * min(ell, s)
    for j in cartan.classical_index_set:
        for k, _ in rc.node_rows(j):
            total -= _pair_term(cartan, i, ell, j, k)
    return _as_number(total, cartan, i, "vacancy")


def modified_vacancy_P(rc, a, ell):
    """The shape-free part of the vacancy number at node a."""
    cartan = rc.cartan
    total = Fraction(0)
    for j in cartan.classical_index_set:
        for k, _ in rc.node_rows(j):
            total -= _pair_term(cartan, a, ell, j, k)
    return _as_number(total, cartan, a, "modified vacancy")


def rc_validate(rc):
    """Riggings must not exceed their vacancy numbers."""
    for i, pairs in rc.rows.items():
        for ell, x in pairs:
            p = vacancy_number(rc, i, ell)
            if x > p:
                raise CrystalError(f"rigging {x} exceeds vacancy {p} at "
                                   f"node {i}, length {ell}")
    return rc


def is_highest_weight(rc):
    return all(x >= 0 for pairs in rc.rows.values() for _, x in pairs)


# ---------------------------------------------------------------------------
# classical crystal operators

def _guard_ops(rc):
    if not _ops_supported(rc.cartan):
        raise CrystalError(f"{rc.cartan.family_label}: crystal operators "
                           f"on rigged configurations are not defined")


def _retag(rc, i, new_pairs, touched):
    """Rebuild the configuration after the row change at node i so that
    every untouched row in EVERY partition keeps its corigging; growing
    or shrinking nu^(i) moves the vacancy numbers at adjacent nodes too.

    new_pairs lists (length, rigging) for the rows whose rigging is
    already final (the changed row); touched marks the index of the
    changed row in the OLD row list at node i (None for a created row)."""
    old_p = {}
    for j in rc.cartan.classical_index_set:
        for ell, _ in rc.node_rows(j):
            if (j, ell) not in old_p:
                old_p[(j, ell)] = vacancy_number(rc, j, ell)
    tentative = rc.with_rows(i, new_pairs
                             + tuple(p for k, p in enumerate(rc.node_rows(i))
                                     if k != touched))
    rows = {}
    for j in rc.cartan.classical_index_set:
        if j == i:
            fixed = list(new_pairs)
            skip = touched
        else:
            fixed = []
            skip = None
        for k, (ell, x) in enumerate(rc.node_rows(j)):
            if k == skip:
                continue
            p_new = vacancy_number(tentative, j, ell)
            fixed.append((ell, x + p_new - old_p[(j, ell)]))
        if fixed:
            rows[j] = tuple(fixed)
    return RiggedConfiguration(rc.shape, rows)


def rc_e(rc, i):
    """Remove a box from the smallest row with minimal rigging; absent
    when the minimum (against the virtual empty row) is zero."""
    _guard_ops(rc)
    pairs = rc.node_rows(i)
    x = min([0] + [rig for _, rig in pairs])
    if x == 0:
        return None
    sel = min((ell for ell, rig in pairs if rig == x))
    idx = max(k for k, (ell, rig) in enumerate(pairs)
              if ell == sel and rig == x)
    new = ((sel - 1, x + 1),) if sel > 1 else ()
    out = _retag(rc, i, new, idx)
    if sel > 1:
        p = vacancy_number(out, i, sel - 1)
        if x + 1 > p:
            raise CrystalError(f"raising at node {i} broke validity")
    return out


def rc_f(rc, i):
    """Add a box to the largest row with minimal rigging (a new length-1
    row when the minimum is the virtual zero); absent when the new
    rigging would overflow the new vacancy number."""
    _guard_ops(rc)
    pairs = rc.node_rows(i)
    x = min([0] + [rig for _, rig in pairs])
    cands = [ell for ell, rig in pairs if rig == x]
    if x == 0 and not cands:
        sel, idx = 0, None
    else:
        sel = max(cands)
        idx = min(k for k, (ell, rig) in enumerate(pairs)
                  if ell == sel and rig == x)
    out = _retag(rc, i, ((sel + 1, x - 1),), idx)
    if x - 1 > vacancy_number(out, i, sel + 1):
        return None
    return out


def rc_weight(rc):
    """Coroot pairings of sum_ell ell (L_ell^{(i)} w_i - m_ell^{(i)} a_i)."""
    cartan = rc.cartan
    cls = cartan.classical_index_set
    out = []
    for j in cls:
        val = sum(s * c for s, c in rc.shape.node_lengths(j).items())
        for i in cls:
            for ell, _ in rc.node_rows(i):
                val -= ell * cartan.a(j, i)
        out.append(val)
    return tuple(out)


def cocharge(rc):
    """Pairing term over all row pairs plus the dual-scaled rigging sum."""
    cartan = rc.cartan
    cls = cartan.classical_index_set
    td = cartan.t_dual
    total = Fraction(0)
    for i in cls:
        for ell, x in rc.node_rows(i):
            total += td[i] * Fraction(x)
            for j in cls:
                for k, _ in rc.node_rows(j):
                    total += Fraction(td[i], 2) * _pair_term(cartan, i, ell,
                                                             j, k)
    return _norm(total)


def theta(rc):
    """Replace every rigging by its corigging on the highest-weight
    representative, transported back along the recorded lowering word."""
    word = []
    cur = rc
    if not is_highest_weight(rc):
        if not _ops_supported(rc.cartan):
            raise CrystalError("theta needs a highest-weight input for "
                               f"{rc.cartan.family_label}")
        while not is_highest_weight(cur):
            for i in rc.cartan.classical_index_set:
                up = rc_e(cur, i)
                if up is not None:
                    word.append(i)
                    cur = up
                    break
            else:
                raise CrystalError("no raising move on a non-highest rc")
    flipped = cur
    for i in cur.rows:
        flipped = flipped.with_rows(
            i, [(ell, vacancy_number(cur, i, ell) - x)
                for ell, x in cur.node_rows(i)])
    for i in reversed(word):
        flipped = rc_f(flipped, i)
        if flipped is None:
            raise CrystalError("lowering word left the rc family")
    return flipped


# ---------------------------------------------------------------------------
# soliton evolution on riggings

def evolution_A(rc, s, r=None):
    """Add min(length, s) to every rigging at the distinguished node and
    record one extra B^{r,s} factor in the shape, which keeps the result
    valid without renormalizing."""
    if r is None:
        nodes = rc.shape.nodes()
        if len(nodes) != 1:
            raise CrystalError(f"ambiguous evolution node among {nodes}")
        r = nodes[0]
    bumped = [(ell, x + min(ell, s)) for ell, x in rc.node_rows(r)]
    out = RiggedConfiguration(rc.shape.add(r, s), dict(rc.rows))
    return out.with_rows(r, bumped)


# ---------------------------------------------------------------------------
# decoupling

def _component_shape(component, mu):
    """Tensor shape of the reduced type carrying one block of factors
    per deleted row, split by the capacity of the reduced node."""
    cap = component.capacity
    rp = component.local_r_prime
    factors = []
    for m in mu:
        if cap.denominator == 1:
            parts = (int(cap) * m,)
        elif cap == Fraction(1, 2):
            parts = (m // 2, m - m // 2)
        elif cap == Fraction(1, 3):
            rem = m % 3
            parts = (m // 3, m // 3 + (1 if rem >= 1 else 0),
                     m // 3 + (1 if rem == 2 else 0))
        else:
            raise CrystalError(f"unsupported capacity {cap}")
        factors.extend((rp, s) for s in parts if s)
    return TensorShape(build_affine_type(component.label), factors)


class DecoupledRC:
    """One rigged configuration per reduced component."""

    def __init__(self, dtype, parts):
        self.dtype = dtype
        self.parts = tuple(parts)

    def __repr__(self):
        inner = "; ".join(f"{c.label}: {rc!r}" for c, rc in self.parts)
        return f"<decoupled {inner}>"


def decouple_B(rc, r=None):
    """Delete nu^{(r)} and reinterpret the remaining nodes over the
    reduced type, with the deleted rows turned into tensor factors; the
    vacancy numbers away from node r must be unchanged."""
    if r is None:
        nodes = rc.shape.nodes()
        if len(nodes) != 1:
            raise CrystalError(f"ambiguous node among {nodes}")
        r = nodes[0]
    cartan = rc.cartan
    for s in rc.shape.node_lengths(r):
        if s != 1:
            raise CrystalError("decoupling needs single-column factors")
    dtype = decoupled_type(cartan.family_label, r)
    mu = rc.partition(r)
    parts = []
    for comp in dtype.components:
        shape = _component_shape(comp, mu)
        rows = {comp.node_map[i]: rc.node_rows(i)
                for i in comp.ambient_nodes if rc.node_rows(i)}
        local = RiggedConfiguration(shape, rows)
        for i in comp.ambient_nodes:
            for ell in sorted({l for l, _ in rc.node_rows(i)} | {1}):
                before = vacancy_number(rc, i, ell)
                after = vacancy_number(local, comp.node_map[i], ell)
                if before != after:
                    raise CrystalError(
                        f"vacancy mismatch at node {i}, length {ell}: "
                        f"{before} ambient vs {after} reduced")
        rc_validate(local)
        parts.append((comp, local))
    return DecoupledRC(dtype, parts)


# ---------------------------------------------------------------------------
# rendering

def render_rc(rc):
    """One block per node: vacancy number, the row drawn in cells, and
    the rigging."""
    cartan = rc.cartan
    lines = []
    for i in cartan.classical_index_set:
        pairs = rc.node_rows(i)
        lines.append(f"nu({i}):" + ("  (empty)" if not pairs else ""))
        for ell, x in pairs:
            p = vacancy_number(rc, i, ell)
            lines.append(f"  {p:>3} | {'[]' * ell:<12} | {x}")
    return "\n".join(lines)


def render_rc_machine(rc):
    """One line per row: node, length, rigging."""
    lines = []
    for i, pairs in rc.data():
        for ell, x in pairs:
            lines.append(f"{i} {ell} {x}")
    return "\n".join(lines)
