"""Seminormal crystals: finite graphs, tensor products, and graph utilities.

A crystal is stored as an explicit finite edge-colored digraph.  Weights are
kept as coroot pairing vectors over the full affine index set, so every
formula below only ever needs <alpha_i^vee, wt(b)>.

Tensor elements are displayed left to right as b_L (x) ... (x) b_1; the
rightmost factor acts first.  For i acting on b2 (x) b1:

    e_i goes left  iff eps_i(b2) >  phi_i(b1)
    f_i goes left  iff eps_i(b2) >= phi_i(b1)

equivalently via the signature rule: each factor contributes the block
-^{phi_i} +^{eps_i}, "+-" pairs cancel, e_i acts on the leftmost surviving +
and f_i on the rightmost surviving -.
"""

from itertools import product


class CrystalError(Exception):
    """Crystal data violates the seminormal axioms or is malformed."""


class Crystal:
    """A finite seminormal crystal over an affine index set.

    nodes: ordered hashable identifiers.
    f_edges: {i: {node: node}} successor maps; e_i is the inverse of f_i.
    weights: {node: tuple of <alpha_i^vee, wt>} over the full index set.
    displays: optional {node: str} labels used by renderers and the CLI.
    """

    def __init__(self, cartan, r, s, nodes, f_edges, weights, displays=None,
                 name=None):
        self.cartan = cartan
        self.r = r
        self.s = s
        self.index_set = cartan.index_set
        self.nodes = list(nodes)
        self._f = {i: dict(f_edges.get(i, {})) for i in self.index_set}
        self._e = {}
        for i in self.index_set:
            inv = {}
            for src, dst in self._f[i].items():
                if dst in inv:
                    raise CrystalError(f"f_{i} is not injective at {dst!r}")
                inv[dst] = src
            self._e[i] = inv
        self._weights = dict(weights)
        if displays is None:
            displays = {b: str(b) for b in self.nodes}
        self.displays = dict(displays)
        self.name = name or f"{cartan.family_label} B^{{{r},{s}}}"
        self._by_display = None
        self._eps_cache = {}
        self._phi_cache = {}
        self._maximal = None

    def __repr__(self):
        return f"<Crystal {self.name}, {len(self.nodes)} nodes>"

    def __len__(self):
        return len(self.nodes)

    def f(self, i, b):
        return self._f[i].get(b)

    def e(self, i, b):
        return self._e[i].get(b)

    def weight(self, b):
        return self._weights[b]

    def classical_weight(self, b):
        return self._weights[b][1:]

    def display(self, b):
        return self.displays[b]

    def node_by_display(self, label):
        if self._by_display is None:
            self._by_display = {}
            for b in self.nodes:
                self._by_display.setdefault(self.displays[b], b)
        return self._by_display.get(label)

    def _walk(self, step, cache, i, b):
        # fill the cache along the whole i-string in one pass
        chain = [b]
        cur = b
        while True:
            if (i, cur) in cache:
                chain.pop()
                base = cache[(i, cur)]
                break
            nxt = step[i].get(cur)
            if nxt is None:
                chain.pop()
                base = cache[(i, cur)] = 0
                break
            cur = nxt
            if cur == b:
                raise CrystalError(f"{i}-string through {b!r} is cyclic")
            chain.append(cur)
        for k, node in enumerate(reversed(chain), start=1):
            cache[(i, node)] = base + k
        return cache[(i, b)]

    def eps(self, i, b):
        if (i, b) in self._eps_cache:
            return self._eps_cache[(i, b)]
        return self._walk(self._e, self._eps_cache, i, b)

    def phi(self, i, b):
        if (i, b) in self._phi_cache:
            return self._phi_cache[(i, b)]
        return self._walk(self._f, self._phi_cache, i, b)

    def validate(self):
        """Check the seminormal axiom at every node and index."""
        for b in self.nodes:
            w = self._weights[b]
            if len(w) != len(self.index_set):
                raise CrystalError(f"weight of {b!r} has wrong length")
            for i in self.index_set:
                if self.phi(i, b) - self.eps(i, b) != w[i]:
                    raise CrystalError(
                        f"seminormal axiom fails at node {self.displays[b]!r}"
                        f" index {i}: phi-eps = "
                        f"{self.phi(i, b) - self.eps(i, b)} != {w[i]}")
        for i in self.index_set:
            for src, dst in self._f[i].items():
                for x in (src, dst):
                    if x not in self._weights:
                        raise CrystalError(f"edge {i}: {src!r}->{dst!r} "
                                           f"references unknown node {x!r}")
                ws, wd = self._weights[src], self._weights[dst]
                for j in self.index_set:
                    if wd[j] != ws[j] - self.cartan.a(j, i):
                        raise CrystalError(
                            f"f_{i} edge {self.displays[src]}->"
                            f"{self.displays[dst]} does not shift the weight "
                            f"by -alpha_{i}")
        return self

    def maximal_element(self):
        """The unique node of classical weight s*varpi_r."""
        if self._maximal is None:
            target = tuple(self.s if i == self.r else 0
                           for i in self.index_set if i != 0)
            hits = [b for b in self.nodes if self.classical_weight(b) == target]
            if len(hits) != 1:
                raise CrystalError(
                    f"{self.name}: {len(hits)} nodes of classical weight "
                    f"{self.s}*varpi_{self.r}, expected exactly one")
            self._maximal = hits[0]
        return self._maximal

    def minimal_element(self):
        """The lowest element of the top classical component."""
        b = self.maximal_element()
        moved = True
        while moved:
            moved = False
            for i in self.index_set:
                if i == 0:
                    continue
                nxt = self.f(i, b)
                if nxt is not None:
                    b = nxt
                    moved = True
        return b

    def is_connected(self, indices=None):
        if not self.nodes:
            return True
        indices = self.index_set if indices is None else indices
        seen = {self.nodes[0]}
        stack = [self.nodes[0]]
        while stack:
            x = stack.pop()
            for i in indices:
                for y in (self.f(i, x), self.e(i, x)):
                    if y is not None and y not in seen:
                        seen.add(y)
                        stack.append(y)
        return len(seen) == len(self.nodes)


class TensorElement:
    """An ordered tensor product of crystal nodes, leftmost factor first."""

    __slots__ = ("crystals", "nodes")

    def __init__(self, crystals, nodes):
        if len(crystals) != len(nodes) or not nodes:
            raise CrystalError("factor count mismatch or empty tensor")
        self.crystals = tuple(crystals)
        self.nodes = tuple(nodes)

    def __eq__(self, other):
        return (isinstance(other, TensorElement)
                and self.nodes == other.nodes
                and all(a is b for a, b in zip(self.crystals, other.crystals)))

    def __hash__(self):
        return hash(self.nodes)

    def __len__(self):
        return len(self.nodes)

    def __repr__(self):
        return " (x) ".join(c.display(b)
                            for c, b in zip(self.crystals, self.nodes))

    def weight(self):
        idx = self.crystals[0].index_set
        tot = [0] * len(idx)
        for c, b in zip(self.crystals, self.nodes):
            w = c.weight(b)
            for k in range(len(tot)):
                tot[k] += w[k]
        return tuple(tot)

    def replace(self, pos, node):
        nodes = list(self.nodes)
        nodes[pos] = node
        return TensorElement(self.crystals, nodes)

    def slice(self, start, stop):
        return TensorElement(self.crystals[start:stop], self.nodes[start:stop])


def tensor_eps_phi(x, i):
    """(eps_i, phi_i) of a tensor element, folded right to left."""
    eps = phi = wpair = 0
    first = True
    for c, b in zip(reversed(x.crystals), reversed(x.nodes)):
        eb, pb = c.eps(i, b), c.phi(i, b)
        if first:
            eps, phi, wpair = eb, pb, pb - eb
            first = False
            continue
        eps = max(eps, eb - wpair)
        phi = max(pb, phi + (pb - eb))
        wpair += pb - eb
    return eps, phi


def _eps_acting_factor(x, i):
    """(eps_i, leftmost factor position holding a surviving +)."""
    unmatched_minus = 0
    total = 0
    pos = None
    for p in range(len(x.nodes) - 1, -1, -1):
        c, b = x.crystals[p], x.nodes[p]
        eb, pb = c.eps(i, b), c.phi(i, b)
        survive = eb - unmatched_minus
        if survive > 0:
            total += survive
            pos = p
            unmatched_minus = 0
        else:
            unmatched_minus -= eb
        unmatched_minus += pb
    return total, pos


def _phi_acting_factor(x, i):
    """(phi_i, rightmost factor position holding a surviving -)."""
    unmatched_plus = 0
    total = 0
    pos = None
    for p in range(len(x.nodes)):
        c, b = x.crystals[p], x.nodes[p]
        eb, pb = c.eps(i, b), c.phi(i, b)
        survive = pb - unmatched_plus
        if survive > 0:
            total += survive
            pos = p
            unmatched_plus = 0
        else:
            unmatched_plus -= pb
        unmatched_plus += eb
    return total, pos


def signature_word(x, i):
    """The literal unreduced signature as a list of (position, sign) pairs."""
    word = []
    for p, (c, b) in enumerate(zip(x.crystals, x.nodes)):
        word.extend((p, "-") for _ in range(c.phi(i, b)))
        word.extend((p, "+") for _ in range(c.eps(i, b)))
    return word


def reduce_signature(word):
    """Delete "+-" pairs repeatedly; the test oracle for the folded scans."""
    stack = []
    for item in word:
        if stack and stack[-1][1] == "+" and item[1] == "-":
            stack.pop()
        else:
            stack.append(item)
    return stack


def apply_e(x, i):
    """e_i on a tensor element, or None when eps_i(x) = 0."""
    _check_index(x, i)
    total, pos = _eps_acting_factor(x, i)
    if total == 0:
        return None
    c, b = x.crystals[pos], x.nodes[pos]
    up = c.e(i, b)
    if up is None:
        raise CrystalError(f"signature points at factor {pos} but e_{i} "
                           f"is undefined on {c.display(b)!r}")
    return x.replace(pos, up)


def apply_f(x, i):
    """f_i on a tensor element, or None when phi_i(x) = 0."""
    _check_index(x, i)
    total, pos = _phi_acting_factor(x, i)
    if total == 0:
        return None
    c, b = x.crystals[pos], x.nodes[pos]
    down = c.f(i, b)
    if down is None:
        raise CrystalError(f"signature points at factor {pos} but f_{i} "
                           f"is undefined on {c.display(b)!r}")
    return x.replace(pos, down)


def tensor_eps(x, i):
    return _eps_acting_factor(x, i)[0]


def tensor_phi(x, i):
    return _phi_acting_factor(x, i)[0]


def _check_index(x, i):
    if i not in x.crystals[0].index_set:
        raise CrystalError(f"index {i} outside the index set "
                           f"{x.crystals[0].index_set}")


def all_tensor_elements(crystals):
    """Every element of the tensor product, in lexicographic node order."""
    crystals = tuple(crystals)
    for combo in product(*(c.nodes for c in crystals)):
        yield TensorElement(crystals, combo)


def _elements(obj):
    if isinstance(obj, Crystal):
        return iter(obj.nodes), obj
    return all_tensor_elements(obj), tuple(obj)


def _op(obj, x, i, lower):
    if isinstance(obj, Crystal):
        return obj.f(i, x) if lower else obj.e(i, x)
    return apply_f(x, i) if lower else apply_e(x, i)


def _index_set(obj):
    return obj.index_set if isinstance(obj, Crystal) else obj[0].index_set


def highest_weight_elements(obj, indices):
    """All x with e_i x absent for every i in indices, in storage order."""
    out = []
    elems, obj = _elements(obj)
    for x in elems:
        if all(_op(obj, x, i, lower=False) is None for i in indices):
            out.append(x)
    return out


def classical_components(obj):
    """Partition into I_0-components as (highest weight element, members)."""
    elems, obj = _elements(obj)
    indices = [i for i in _index_set(obj) if i != 0]
    seen = set()
    comps = []
    for x in elems:
        if x in seen:
            continue
        comp = {x}
        stack = [x]
        while stack:
            y = stack.pop()
            for i in indices:
                for z in (_op(obj, y, i, True), _op(obj, y, i, False)):
                    if z is not None and z not in comp:
                        comp.add(z)
                        stack.append(z)
        seen |= comp
        hw = [y for y in comp
              if all(_op(obj, y, i, False) is None for i in indices)]
        if len(hw) != 1:
            raise CrystalError(
                f"component of size {len(comp)} has {len(hw)} highest weight "
                f"elements, expected exactly one")
        comps.append((hw[0], comp))
    return comps


def minuscule_word(crystal, b, indices=None):
    """The word over {i, -i} with phi_i(b)=1 resp. eps_i(b)=1."""
    if indices is None:
        indices = [i for i in crystal.index_set if i != 0]
    letters = []
    for i in indices:
        e, p = crystal.eps(i, b), crystal.phi(i, b)
        if e > 1 or p > 1:
            raise CrystalError(f"node {crystal.display(b)!r} has an i-string "
                               f"of length > 1; not minuscule")
        if e:
            letters.append(f"-{i}")
        if p:
            letters.append(f"{i}")
    return " ".join(letters)


def find_isomorphism(src, dst, anchors=None):
    """A weight-preserving bijection commuting with all e_i/f_i, or None.

    src/dst are crystals or tuples of crystals (tensor products).  anchors,
    when given, is a seed pair (x, y); otherwise candidates for the image of
    the first element of src are tried in storage order.
    """
    idx = _index_set(src)
    if tuple(_index_set(dst)) != tuple(idx):
        return None
    src_elems = list(_elements(src)[0])
    dst_elems = list(_elements(dst)[0])
    if len(src_elems) != len(dst_elems):
        return None

    def profile(obj, x):
        if isinstance(obj, Crystal):
            w = obj.weight(x)
            ep = tuple((obj.eps(i, x), obj.phi(i, x)) for i in idx)
        else:
            w = x.weight()
            ep = tuple((tensor_eps(x, i), tensor_phi(x, i)) for i in idx)
        return w, ep

    def attempt(x0, y0):
        mapping = {x0: y0}
        stack = [x0]
        while stack:
            x = stack.pop()
            y = mapping[x]
            for i in idx:
                for lower in (True, False):
                    nx = _op(src, x, i, lower)
                    ny = _op(dst, y, i, lower)
                    if (nx is None) != (ny is None):
                        return None
                    if nx is None:
                        continue
                    if nx in mapping:
                        if mapping[nx] != ny:
                            return None
                    else:
                        mapping[nx] = ny
                        stack.append(nx)
        if len(mapping) != len(src_elems):
            return None
        if len(set(mapping.values())) != len(mapping):
            return None
        for x, y in mapping.items():
            if profile(src, x) != profile(dst, y):
                return None
        return mapping

    if anchors is not None:
        return attempt(*anchors)
    x0 = src_elems[0]
    want = profile(src, x0)
    for y0 in dst_elems:
        if profile(dst, y0) == want:
            result = attempt(x0, y0)
            if result is not None:
                return result
    return None
