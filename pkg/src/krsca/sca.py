"""Vacuum-padded automaton states and their time evolution.

A state is a finite window of a semi-infinite word over B^{r,1}; every
factor to the left of the window is the vacuum u(B^{r,1}).  The window
keeps its right edge fixed: evolution preserves the absolute position of
each factor, so a block moving left shows up as trailing vacua.

Time evolution by width ell threads the maximal element of B^{r,ell}
through the word from the right; each swap is one application of the
combinatorial R matrix, and the pass keeps extending into the implicit
vacuum padding until the carrier returns to its initial value.  The sum
of the local energies of all swaps is the state energy for that width.
"""

from .crystal import CrystalError
from .energy import _pair_table
from .kr import get_kr_crystal


class SCAState:
    """crystal: the B^{r,1} the word lives over; nodes: factors left to
    right.  Leading vacuum factors are trimmed (they are implicit)."""

    def __init__(self, crystal, nodes):
        vac = crystal.maximal_element()
        nodes = list(nodes)
        while nodes and nodes[0] == vac:
            nodes.pop(0)
        self.crystal = crystal
        self.nodes = tuple(nodes)

    def __eq__(self, other):
        return (isinstance(other, SCAState)
                and self.crystal is other.crystal
                and self.nodes == other.nodes)

    def __hash__(self):
        return hash(self.nodes)

    def __len__(self):
        return len(self.nodes)

    def __repr__(self):
        cells = " ".join(self.crystal.display(b) for b in self.nodes)
        return f"<state ... {cells}>"

    def displays(self):
        return [self.crystal.display(b) for b in self.nodes]

    @classmethod
    def from_displays(cls, crystal, labels):
        nodes = []
        for lab in labels:
            b = crystal.node_by_display(lab)
            if b is None:
                raise CrystalError(f"unknown cell {lab!r} in {crystal.name}")
            nodes.append(b)
        return cls(crystal, nodes)


def _carrier_for(crystal, ell):
    cartan = crystal.cartan
    return get_kr_crystal(cartan.family_label, crystal.r, ell)


def mass(state):
    """Total r-weight of the window: an upper bound for soliton lengths."""
    vac = state.crystal.maximal_element()
    return sum(soliton_units(state.crystal, b)
               for b in state.nodes if b != vac)


def _carrier_pass(state, carrier_crystal):
    """One right-to-left sweep; returns (new nodes, energy)."""
    B = state.crystal
    table = _pair_table(B, carrier_crystal)
    u1 = B.maximal_element()
    uc = carrier_crystal.maximal_element()
    carrier = uc
    out = []
    energy = 0
    for b in reversed(state.nodes):
        (carrier, nb), h = table[(b, carrier)]
        out.append(nb)
        energy += h
    guard = 10 * (len(state.nodes) + len(carrier_crystal.nodes) + 10)
    while carrier != uc:
        (carrier, nb), h = table[(u1, carrier)]
        out.append(nb)
        energy += h
        guard -= 1
        if guard < 0:
            raise CrystalError(f"carrier of {carrier_crystal.name} does not "
                               f"return to the vacuum")
    return out[::-1], energy


# hook installed by the rigged-configuration layer for types without an
# analytic carrier family; signature (state, ell) -> SCAState
_rc_evolution = None


def time_evolution(state, ell=None):
    """T_ell(state); ell = None means wide enough to act as T_infinity."""
    if ell is None:
        ell = mass(state) + 1
    try:
        carrier_crystal = _carrier_for(state.crystal, ell)
    except (ValueError, CrystalError):
        if _rc_evolution is None:
            raise
        return _rc_evolution(state, ell)
    nodes, _ = _carrier_pass(state, carrier_crystal)
    return SCAState(state.crystal, nodes)


def state_energy(state, ell):
    """E_ell: total local energy of one carrier sweep."""
    _, energy = _carrier_pass(state, _carrier_for(state.crystal, ell))
    return energy


def adjacent_energy(state):
    """E_1 as the sum of H over adjacent pairs, vacuum-padded both ends."""
    B = state.crystal
    table = _pair_table(B, B)
    u1 = B.maximal_element()
    word = [u1, *state.nodes, u1]
    return sum(table[(word[k], word[k + 1])][1] for k in range(len(word) - 1))


def soliton_units(crystal, b):
    """Number of r-colored raising steps from b to the maximal element;
    1 for the extra weight-zero node (which has no classical raising)."""
    if crystal.display(b) == "E":
        return 1
    classical = [i for i in crystal.index_set if i != 0]
    count = 0
    cur = b
    steps = 0
    while cur != crystal.maximal_element():
        for i in classical:
            up = crystal.e(i, cur)
            if up is not None:
                count += 1 if i == crystal.r else 0
                cur = up
                break
        else:
            raise CrystalError(f"{crystal.display(b)!r} cannot be raised to "
                               f"the maximal element")
        steps += 1
        if steps > len(crystal.nodes):
            raise CrystalError("raising walk does not terminate")
    return count


class Soliton:
    """A maximal non-vacuum block of a state.

    position: absolute position of the block's rightmost factor, counted
    as 0 for the rightmost window factor and decreasing leftward."""

    def __init__(self, crystal, nodes, position):
        self.crystal = crystal
        self.nodes = tuple(nodes)
        self.position = position
        self.length = sum(soliton_units(crystal, b) for b in nodes)
        block = SCAState.__new__(SCAState)
        block.crystal = crystal
        block.nodes = self.nodes
        vac = crystal.maximal_element()
        fr = crystal.f(crystal.r, vac)
        table = _pair_table(crystal, crystal)
        self.is_soliton = (adjacent_energy(block) == table[(fr, vac)][1])

    def displays(self):
        return [self.crystal.display(b) for b in self.nodes]

    def __repr__(self):
        tag = "" if self.is_soliton else " (not a soliton)"
        return (f"<block {' '.join(self.displays())} at {self.position}, "
                f"length {self.length}{tag}>")


def detect_solitons(state):
    """(blocks, interacting): maximal non-vacuum blocks right to left.

    interacting is True when some block fails the minimal-energy test or
    two blocks are separated by fewer vacua than the longest length."""
    vac = state.crystal.maximal_element()
    blocks = []
    run = []
    for pos, b in enumerate(state.nodes):
        if b == vac:
            if run:
                blocks.append((run, pos - 1))
                run = []
        else:
            run.append(b)
    if run:
        blocks.append((run, len(state.nodes) - 1))
    n = len(state.nodes)
    sols = [Soliton(state.crystal, nodes, end - (n - 1))
            for nodes, end in blocks]
    sols.reverse()
    interacting = any(not s.is_soliton for s in sols)
    if not interacting and len(sols) > 1:
        longest = max(s.length for s in sols)
        for right, left in zip(sols, sols[1:]):
            gap = (right.position - len(right.nodes)) - left.position
            if gap < longest:
                interacting = True
    return sols, interacting


def render_rows(states, width, separator=" "):
    """Fixed-window rows, right edges aligned; raises if a window is too
    narrow to hold a state."""
    rows = []
    for state in states:
        cells = state.displays()
        pad = width - len(cells)
        if pad < 0:
            raise CrystalError(f"window of width {width} cannot hold "
                               f"{len(cells)} factors")
        vac = state.crystal.display(state.crystal.maximal_element())
        rows.append(separator.join([vac] * pad + cells))
    return rows
