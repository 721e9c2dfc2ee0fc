"""Bijection between rigged configurations and one-column tensor products.

phi peels factors off the left end of (B^{r,1})^{(x)N}.  Each factor is the
endpoint of a lowering walk that starts at the classical highest weight
vector of B^{r,1} and consumes one box from a row of nu^{(i)} for every f_i
step; the consumed boxes are then removed, changed rows are re-riggged to be
singular for the smaller configuration, and the next factor starts fresh.
phi_inverse runs the mirror image, growing rows along a raising walk into
the classical highest weight vector and certifying each insertion by
replaying the forward walk.

Two walk disciplines cover the one-column crystals handled here:

* minuscule: every weight of B^{r,1} is extremal.  A single selection
  ladder runs through the walk (row lengths never decrease), every selected
  row is fresh and singular, and the walk stops when no singular row of
  admissible length remains.

* adjoint-like: B^{r,1} has a trivial classical summand {E} next to the
  root-space component, with zero weight elements y_i sitting between the
  positive and negative halves.  The ladder is tracked per node, a selected
  row stays "locked" and may be consumed again box by box on the way down,
  and near-singular rows (rigging one below the vacancy) become selectable
  exactly when the i-string through the current vector is long enough.
  Termination on a zero weight vector emits E when the step into it took a
  singular row and y_i when it took a near-singular one.
"""

from .crystal import CrystalError, TensorElement
from .rigged import RiggedConfiguration, TensorShape, vacancy_number

__all__ = ["phi", "phi_inverse", "column_flavor"]

# Tunable gates for re-consuming a locked row in the rising phase.  Values:
# "always", "never", "p_le_0" (vacancy at the shortened length <= 0),
# "singular_red" (rigging equals that vacancy), "valid" (rigging <= it).
RULES = {
    "lock_positive": "p_le_0",
    "fresh_negative": "len_eq_t",  # fresh rows after the crossing
    "node_order": "largest",       # tie break across nodes at equal length
    "quasi_eager": True,
}


def _gate(rule, rig, p_red):
    if rule == "always":
        return True
    if rule == "never":
        return False
    if rule == "p_le_0":
        return p_red <= 0
    if rule == "singular_red":
        return rig == p_red
    if rule == "valid":
        return rig <= p_red
    raise ValueError(f"unknown lock rule {rule!r}")


def column_flavor(crystal):
    """Classify a one-column crystal for the walk: minuscule or adjoint.

    Returns ("minuscule", None) or ("adjoint", trivial_element).  Raises for
    columns that need the generic carrier realization instead.
    """
    classical = [i for i in crystal.index_set if i != 0]
    zeros = [b for b in crystal.nodes
             if all(w == 0 for w in crystal.classical_weight(b))]
    if not zeros:
        return "minuscule", None
    trivial = [b for b in zeros
               if all(crystal.phi(i, b) == 0 and crystal.eps(i, b) == 0
                      for i in classical)]
    # adjoint-like: one trivial summand, every other zero weight vector on
    # an i-string of shape x(a_i) -> y_i -> x(-a_i)
    if len(trivial) == 1 and all(
            b in trivial or any(crystal.phi(i, b) == 1 and
                                crystal.eps(i, b) == 1 for i in classical)
            for b in zeros):
        return "adjoint", trivial[0]
    raise CrystalError(f"{crystal.name}: walk requires a minuscule or "
                       f"adjoint-like column")


class _Row:
    __slots__ = ("node", "length", "rig", "consumed", "origin")

    def __init__(self, node, length, rig):
        self.node = node
        self.length = length
        self.rig = rig
        self.consumed = 0
        self.origin = None      # "s" or "q" once selected


class _FactorWalk:
    """One lowering walk; consumes boxes from a copy of the row data."""

    def __init__(self, rc, crystal, flavor, trivial, chain):
        self.rc = rc
        self.crystal = crystal
        self.adjoint = flavor == "adjoint"
        self.trivial = trivial
        self.chain = chain
        self.classical = [i for i in crystal.index_set if i != 0]
        self.rows = {i: [_Row(i, l, x) for l, x in rc.rows.get(i, ())]
                     for i in self.classical}
        self._pv = {}
        self.threshold = {i: 1 for i in self.classical}
        self.global_threshold = 1
        self.crossed = False
        self.cross_origin = None
        self.wall = None        # crossing row that must re-lock or stop
        self.steps = []

    def vacancy(self, i, l):
        key = (i, l)
        if key not in self._pv:
            self._pv[key] = vacancy_number(self.rc, i, l)
        return self._pv[key]

    def _tmin(self, i):
        # a chain column threads one ladder through the whole walk; a
        # branching column keeps an independent ladder per node
        if self.adjoint and not self.chain:
            return self.threshold[i]
        return self.global_threshold

    def _eager_quasi(self, row):
        """rigging == p - 1 and no unselected row of that length beats it."""
        p = self.vacancy(row.node, row.length)
        if row.rig != p - 1:
            return False
        best = max(r.rig for r in self.rows[row.node]
                   if r.length == row.length and r.consumed == 0)
        return best == p - 1

    def _fresh_negative_ok(self, row, tmin):
        rule = RULES["fresh_negative"]
        if rule == "never":
            return False
        if rule == "ladder":
            return True
        if rule == "len_eq_t":
            return self.chain and row.length == tmin
        if rule == "len_eq_t_both":
            return row.length == tmin
        raise ValueError(f"unknown fresh rule {rule!r}")

    def _candidates(self, b):
        out = []
        for i in self.classical:
            nb = self.crystal.f(i, b)
            if nb is None:
                continue
            crossing = self.adjoint and all(
                w == 0 for w in self.crystal.classical_weight(nb))
            tmin = self._tmin(i)
            for row in self.rows[i]:
                if row.length < tmin:
                    continue
                if self.wall is not None and row is not self.wall:
                    continue
                if row.consumed == 0:
                    p = self.vacancy(i, row.length)
                    if row.rig == p:
                        if not self.crossed or self._fresh_negative_ok(
                                row, tmin):
                            out.append((i, nb, row, "s", crossing))
                    elif (self.adjoint and not self.crossed
                          and row.rig == p - 1
                          and self.crystal.phi(i, b) >= 2
                          and (not RULES["quasi_eager"]
                               or self._eager_quasi(row))):
                        out.append((i, nb, row, "q", crossing))
                elif self.adjoint and row.consumed < row.length:
                    if row.origin == "q":
                        if crossing:
                            out.append((i, nb, row, "lq", crossing))
                        continue
                    p_red = self.vacancy(i, row.length - row.consumed)
                    if crossing:
                        ok = row.rig <= p_red <= 0
                    elif self.crossed:
                        # second box of a row is free on the way down; a
                        # third only exists on branching columns, where it
                        # needs the reduced vacancy to close
                        if row.consumed < 2:
                            ok = True
                        else:
                            ok = not self.chain and p_red <= 0
                    else:
                        ok = _gate(RULES["lock_positive"], row.rig, p_red)
                    if ok:
                        out.append((i, nb, row, "ls", crossing))
        return out

    def run(self, start):
        b = start
        while True:
            cands = self._candidates(b)
            if not cands:
                break
            sign = -1 if RULES["node_order"] == "largest" else 1

            def rank(c):
                # fresh singular rows win; a re-locked row is the move of
                # last resort on a step into the zero weight layer, where a
                # near-singular row would end the walk instead
                if c[3] == "ls" and c[4]:
                    return 2
                return 1 if c[3] in ("q", "lq") else 0

            i, nb, row, kind, crossing = min(
                cands, key=lambda c: (rank(c), c[2].length, sign * c[0],
                                      0 if c[3] in ("s", "q") else 1))
            row.consumed += 1
            if row.origin is None:
                row.origin = "q" if kind == "q" else "s"
            self.threshold[i] = max(self.threshold[i], row.length)
            self.global_threshold = max(self.global_threshold, row.length)
            self.steps.append((i, row.length, kind))
            b = nb
            self.wall = None
            if crossing:
                self.crossed = True
                self.cross_origin = row.origin
                if row.origin == "q":
                    break
                # leaving the zero weight layer again must continue the
                # crossing row, otherwise the walk ends here
                self.wall = row
        if (self.adjoint and self.cross_origin == "s"
                and all(w == 0 for w in self.crystal.classical_weight(b))):
            return self.trivial
        return b

    def reduced_rows(self):
        """Row data after removal: (rows dict, set of changed (i, length))."""
        out = {}
        changed = []
        for i in self.classical:
            keep = []
            for row in self.rows[i]:
                nl = row.length - row.consumed
                if nl == 0:
                    continue
                if row.consumed:
                    changed.append((i, len(keep)))
                    keep.append([nl, None])
                else:
                    keep.append([nl, row.rig])
            if keep:
                out[i] = keep
        return out, changed


def _uniform_column(shape):
    """(r, count) for a shape made of copies of one single-column factor."""
    if len(shape.L) != 1:
        raise CrystalError("walk requires identical factors")
    (r, s), count = next(iter(shape.L.items()))
    if s != 1:
        raise CrystalError("walk requires single-column factors")
    return r, count


def _reduce(rc, walk):
    """Build the configuration left after a factor walk."""
    r, count = _uniform_column(rc.shape)
    shape = TensorShape(rc.shape.cartan, [(r, 1)] * (count - 1))
    rows, changed = walk.reduced_rows()
    # first pass with zero riggings to measure the new vacancies
    probe = RiggedConfiguration(shape, {
        i: tuple((l, 0) for l, _ in rs) for i, rs in rows.items()})
    for i, idx in changed:
        rows[i][idx][1] = vacancy_number(probe, i, rows[i][idx][0])
    return RiggedConfiguration(shape, {
        i: tuple((l, x) for l, x in rs) for i, rs in rows.items()})


def _is_chain(crystal):
    """True when no vertex has two outgoing classical arrows."""
    classical = [i for i in crystal.index_set if i != 0]
    return all(sum(1 for i in classical
                   if crystal.f(i, b) is not None) <= 1
               for b in crystal.nodes)


def phi(rc, crystal, trace=None):
    """Map a rigged configuration to its tensor product element."""
    flavor, trivial = column_flavor(crystal)
    chain = _is_chain(crystal)
    _, n = _uniform_column(rc.shape)
    emitted = []
    cur = rc
    for _ in range(n):
        walk = _FactorWalk(cur, crystal, flavor, trivial, chain)
        b = walk.run(crystal.maximal_element())
        emitted.append(b)
        if trace is not None:
            trace.append((crystal.display(b), list(walk.steps)))
        cur = _reduce(cur, walk)
    return TensorElement((crystal,) * n, tuple(emitted))
