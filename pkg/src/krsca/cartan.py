"""Affine Cartan data: matrices, marks, comarks, gamma scalings, decoupling.

Families are named by compact labels like "A3(1)", "C3(1)", "D5(2)", "A4(2)",
"A4(2)*" (the reversed-numbering twin of A4(2)), "D4(3)".  Node 0 is always
the affine node; classical nodes are 1..n.  Numbering conventions:

  A_n(1)   cycle 0-1-...-n-0
  B_n(1)   0 and 1 attached to 2; short node n
  C_n(1)   0=>1-...-(n-1)<=n (0 and n long)
  D_n(1)   0 attached to 2; fork n-1, n at n-2
  E_6(1)   chain 1-3-4-5-6, node 2 on 4, 0 on 2 (Bourbaki)
  E_7(1)   chain 1-3-4-5-6-7, 2 on 4, 0 on 1
  E_8(1)   chain 1-3-4-5-6-7-8, 2 on 4, 0 on 8
  F_4(1)   0-1-2=>3-4 (1,2 long; 3,4 short)
  G_2(1)   0-2=>1 with triple edge (1 short, 2 long)
  A_2n(2)  0<=1-...-(n-1)<=n (double arrows point at 0 and at n-1... see matrix)
  A_2n(2)* same matrix with node order reversed
  A_2n-1(2) 0 and 1 attached to 2; node n long
  D_n+1(2) 0<=1-...-(n-1)=>n (0 and n short)
  E_6(2)   0-1-2<=3-4 (classical F_4 reversed: local B_3/C_3 tails)
  D_4(3)   0-1<=2 triple (classical G_2, node 1 short)
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
import re

__all__ = [
    "AffineCartanData", "DecoupledComponent", "DecoupledType",
    "build_affine_type", "parse_label", "decoupled_type",
]


def _kernel_vector(matrix):
    """Primitive positive integer kernel vector of an integer matrix (dim 1)."""
    m = len(matrix)
    a = [[Fraction(x) for x in row] for row in matrix]
    piv_cols = []
    r = 0
    for c in range(m):
        piv = next((i for i in range(r, m) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        a[r] = [x / a[r][c] for x in a[r]]
        for i in range(m):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        piv_cols.append(c)
        r += 1
    free = [c for c in range(m) if c not in piv_cols]
    if len(free) != 1:
        raise ValueError("kernel is not one dimensional")
    fc = free[0]
    v = [Fraction(0)] * m
    v[fc] = Fraction(1)
    for row, pc in zip(a, piv_cols):
        v[pc] = -row[fc]
    lcm = 1
    for x in v:
        lcm = lcm * x.denominator // _gcd(lcm, x.denominator)
    ints = [int(x * lcm) for x in v]
    g = 0
    for x in ints:
        g = _gcd(g, abs(x))
    ints = [x // g for x in ints]
    if any(x <= 0 for x in ints):
        ints = [-x for x in ints]
    if any(x <= 0 for x in ints):
        raise ValueError("kernel vector is not sign definite")
    return tuple(ints)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _symmetrizer(matrix):
    """d_i > 0 with d_i A_ij = d_j A_ji, normalised so min d_i = 1."""
    m = len(matrix)
    d = [None] * m
    d[0] = Fraction(1)
    queue = [0]
    while queue:
        i = queue.pop()
        for j in range(m):
            if i != j and matrix[i][j] != 0 and d[j] is None:
                d[j] = d[i] * Fraction(matrix[i][j], matrix[j][i])
                queue.append(j)
    if any(x is None for x in d):
        raise ValueError("Cartan matrix is not connected")
    lo = min(d)
    return tuple(x / lo for x in d)


@dataclass(frozen=True)
class AffineCartanData:
    """One affine family instance: matrix plus all derived integer data."""
    family_label: str
    letter: str
    twist: int
    dagger: bool
    n: int
    index_set: tuple
    cartan_matrix: tuple
    kac_labels: tuple          # c_i, A c = 0
    dual_kac_labels: tuple     # c^vee_i, c^vee A = 0
    t_dual: tuple              # max(c^vee_i / c_i, c_0)
    gamma: tuple
    modgamma: tuple

    @property
    def classical_index_set(self):
        return self.index_set[1:]

    def a(self, i, j):
        return self.cartan_matrix[i][j]

    @property
    def zero_neighbors(self):
        return tuple(j for j in self.classical_index_set if self.a(0, j) != 0)

    def classical_matrix(self):
        idx = self.classical_index_set
        return tuple(tuple(self.a(i, j) for j in idx) for i in idx)

    def classical_symmetrizer(self):
        """d_i for i in 1..n, normalised so the short roots have d = 1."""
        d = _symmetrizer(self.classical_matrix())
        return {i: d[k] for k, i in enumerate(self.classical_index_set)}


_LABEL_RE = re.compile(r"^([A-G])(\d+)\((\d)\)(\*?)$")


def parse_label(label):
    m = _LABEL_RE.match(label)
    if not m:
        raise ValueError(f"bad type label: {label!r}")
    letter, n, twist, dag = m.group(1), int(m.group(2)), int(m.group(3)), bool(m.group(4))
    return letter, n, twist, dag


def _blank(m):
    return [[2 if i == j else 0 for j in range(m)] for i in range(m)]


def _edge(a, i, j, aij, aji):
    a[i][j] = aij
    a[j][i] = aji


def _untwisted_matrix(letter, n):
    if letter == "A":
        a = _blank(n + 1)
        if n == 1:
            _edge(a, 0, 1, -2, -2)
        else:
            for i in range(n):
                _edge(a, i, i + 1, -1, -1)
            _edge(a, 0, n, -1, -1)
        return a
    if letter == "B":
        if n < 2:
            raise ValueError("B needs n >= 2")
        a = _blank(n + 1)
        _edge(a, 0, 2, -1, -2 if n == 2 else -1)
        for i in range(1, n - 1):
            _edge(a, i, i + 1, -1, -1)
        _edge(a, n - 1, n, -1, -2)
        return a
    if letter == "C":
        if n < 2:
            raise ValueError("C needs n >= 2")
        a = _blank(n + 1)
        _edge(a, 0, 1, -1, -2)
        for i in range(1, n - 1):
            _edge(a, i, i + 1, -1, -1)
        _edge(a, n - 1, n, -2, -1)
        return a
    if letter == "D":
        if n < 4:
            raise ValueError("D needs n >= 4")
        a = _blank(n + 1)
        _edge(a, 0, 2, -1, -1)
        for i in range(1, n - 1):
            _edge(a, i, i + 1, -1, -1)
        _edge(a, n - 2, n, -1, -1)
        return a
    if letter == "E":
        chain = {6: [1, 3, 4, 5, 6], 7: [1, 3, 4, 5, 6, 7], 8: [1, 3, 4, 5, 6, 7, 8]}[n]
        a = _blank(n + 1)
        for i, j in zip(chain, chain[1:]):
            _edge(a, i, j, -1, -1)
        _edge(a, 2, 4, -1, -1)
        zero_at = {6: 2, 7: 1, 8: 8}[n]
        _edge(a, 0, zero_at, -1, -1)
        return a
    if letter == "F":
        if n != 4:
            raise ValueError("F needs n = 4")
        a = _blank(5)
        _edge(a, 0, 1, -1, -1)
        _edge(a, 1, 2, -1, -1)
        _edge(a, 2, 3, -1, -2)
        _edge(a, 3, 4, -1, -1)
        return a
    if letter == "G":
        if n != 2:
            raise ValueError("G needs n = 2")
        a = _blank(3)
        _edge(a, 0, 2, -1, -1)
        _edge(a, 1, 2, -3, -1)
        return a
    raise ValueError(f"unknown untwisted letter {letter}")


def _twisted_matrix(letter, n, twist, dagger):
    if letter == "A" and twist == 2 and n % 2 == 0:
        # A_{2m}(2) with m = n // 2, nodes 0..m
        m = n // 2
        a = _blank(m + 1)
        if m == 1:
            _edge(a, 0, 1, -4, -1)
        else:
            _edge(a, 0, 1, -2, -1)
            for i in range(1, m - 1):
                _edge(a, i, i + 1, -1, -1)
            _edge(a, m - 1, m, -2, -1)
        if dagger:
            a = [[a[m - i][m - j] for j in range(m + 1)] for i in range(m + 1)]
        return a, m
    if letter == "A" and twist == 2 and n % 2 == 1:
        # A_{2m-1}(2) with m = (n+1)//2 >= 3, classical C_m
        m = (n + 1) // 2
        if m < 3:
            raise ValueError("A_{2m-1}(2) needs m >= 3")
        a = _blank(m + 1)
        _edge(a, 0, 2, -1, -1)
        _edge(a, 1, 2, -1, -1)
        for i in range(2, m - 1):
            _edge(a, i, i + 1, -1, -1)
        _edge(a, m - 1, m, -2, -1)
        return a, m
    if letter == "D" and twist == 2:
        # D_{m+1}(2) with m = n - 1, classical B_m
        m = n - 1
        if m < 2:
            raise ValueError("D_{m+1}(2) needs m >= 2")
        a = _blank(m + 1)
        _edge(a, 0, 1, -2, -1)
        for i in range(1, m - 1):
            _edge(a, i, i + 1, -1, -1)
        _edge(a, m - 1, m, -1, -2)
        return a, m
    if letter == "E" and n == 6 and twist == 2:
        a = _blank(5)
        _edge(a, 0, 1, -1, -1)
        _edge(a, 1, 2, -1, -1)
        _edge(a, 2, 3, -2, -1)
        _edge(a, 3, 4, -1, -1)
        return a, 4
    if letter == "D" and n == 4 and twist == 3:
        a = _blank(3)
        _edge(a, 0, 1, -1, -1)
        _edge(a, 1, 2, -3, -1)
        return a, 2
    raise ValueError(f"unsupported twisted type {letter}{n}({twist})")


@lru_cache(maxsize=None)
def build_affine_type(label):
    """Build the full Cartan datum for a family label like "C3(1)"."""
    letter, nn, twist, dagger = parse_label(label)
    if twist == 1:
        if dagger:
            raise ValueError("dagger only applies to A_2n(2)")
        matrix = _untwisted_matrix(letter, nn)
        n = nn
    else:
        matrix, n = _twisted_matrix(letter, nn, twist, dagger)
    matrix = tuple(tuple(row) for row in matrix)
    c = _kernel_vector(matrix)
    cv = _kernel_vector([list(col) for col in zip(*matrix)])
    for i in range(n + 1):
        assert sum(matrix[i][j] * c[j] for j in range(n + 1)) == 0
        assert sum(cv[i2] * matrix[i2][i] for i2 in range(n + 1)) == 0
    assert cv[0] == 1 or (dagger and cv[0] == 2)
    t_dual = tuple(int(max(Fraction(cv[i], c[i]), c[0])) for i in range(n + 1))
    gamma = _gamma(letter, n, twist, dagger, matrix)
    modgamma = list(gamma)
    if letter == "A" and twist == 2 and not dagger:
        modgamma[n] = 1
    if letter == "A" and twist == 2 and dagger:
        modgamma[n] = 2
    return AffineCartanData(
        family_label=label, letter=letter, twist=twist, dagger=dagger, n=n,
        index_set=tuple(range(n + 1)), cartan_matrix=matrix,
        kac_labels=c, dual_kac_labels=cv, t_dual=t_dual,
        gamma=tuple(gamma), modgamma=tuple(modgamma),
    )


def _gamma(letter, n, twist, dagger, matrix):
    if twist == 1:
        d = _symmetrizer(matrix)
        assert all(x.denominator == 1 for x in d)
        return [int(x) for x in d]
    if letter == "A" and twist == 2 and n >= 1 and not dagger and _is_a2even(matrix):
        return [1] * n + [2]
    if letter == "A" and twist == 2 and dagger:
        return [2] + [1] * n
    # dual untwisted twisted families: A_{2m-1}(2), D_{m+1}(2), E_6(2), D_4(3)
    return [1] * (n + 1)


def _is_a2even(matrix):
    return matrix[0][1] in (-2, -4)


@dataclass(frozen=True)
class DecoupledComponent:
    """One affine component of the decoupled type at node r."""
    label: str
    n: int
    ambient_nodes: tuple     # ambient node of local index k is ambient_nodes[k-1]
    r_prime: int             # the ambient node adjacent to r inside this component
    capacity: Fraction       # modgamma_r / gamma_{r'}

    @property
    def node_map(self):
        return {amb: k + 1 for k, amb in enumerate(self.ambient_nodes)}

    @property
    def local_r_prime(self):
        return self.node_map[self.r_prime]

    def cartan(self):
        return build_affine_type(self.label)


@dataclass(frozen=True)
class DecoupledType:
    family_label: str
    r: int
    components: tuple


_STD_CLASSICAL = {}


def _std_classical(letter, m):
    """Classical Cartan matrix of type letter_m with nodes 1..m (0-indexed here)."""
    key = (letter, m)
    if key in _STD_CLASSICAL:
        return _STD_CLASSICAL[key]
    a = _blank(m)
    if letter == "A":
        for i in range(m - 1):
            _edge(a, i, i + 1, -1, -1)
    elif letter == "B":
        for i in range(m - 2):
            _edge(a, i, i + 1, -1, -1)
        _edge(a, m - 2, m - 1, -1, -2)
    elif letter == "C":
        for i in range(m - 2):
            _edge(a, i, i + 1, -1, -1)
        _edge(a, m - 2, m - 1, -2, -1)
    elif letter == "D":
        for i in range(m - 3):
            _edge(a, i, i + 1, -1, -1)
        _edge(a, m - 3, m - 2, -1, -1)
        _edge(a, m - 3, m - 1, -1, -1)
    elif letter == "E":
        chain = {6: [0, 2, 3, 4, 5], 7: [0, 2, 3, 4, 5, 6]}[m]
        for i, j in zip(chain, chain[1:]):
            _edge(a, i, j, -1, -1)
        _edge(a, 1, 3, -1, -1)
    elif letter == "G":
        _edge(a, 0, 1, -3, -1)
    else:
        raise ValueError(letter)
    t = tuple(tuple(row) for row in a)
    _STD_CLASSICAL[key] = t
    return t


def _orderings(nodes, adj):
    """Candidate canonical orderings of a Dynkin component (path or D/E shape)."""
    deg = {v: len([w for w in adj[v] if w in nodes]) for v in nodes}
    if len(nodes) == 1:
        return [list(nodes)]
    branch = [v for v in nodes if deg[v] == 3]
    outs = []
    if not branch:
        ends = [v for v in nodes if deg[v] == 1]
        for e in ends:
            order, prev, cur = [e], None, e
            while len(order) < len(nodes):
                nxt = next(w for w in adj[cur] if w in nodes and w != prev)
                order.append(nxt)
                prev, cur = cur, nxt
            outs.append(order)
        return outs
    b = branch[0]
    arms = []
    for s in adj[b]:
        if s not in nodes:
            continue
        arm, prev, cur = [s], b, s
        while True:
            nxt = [w for w in adj[cur] if w in nodes and w != prev]
            if not nxt:
                break
            arm.append(nxt[0])
            prev, cur = cur, nxt[0]
        arms.append(arm)
    arms.sort(key=len)
    # D shape: two length-1 fork arms; E shape: arms of length 1, 2, >=2
    if len(arms[0]) == 1 and len(arms[1]) == 1:
        tail = arms[2][::-1]
        f1, f2 = arms[0][0], arms[1][0]
        outs.append(tail + [b, f1, f2])
        outs.append(tail + [b, f2, f1])
        return outs
    # E_6 / E_7 component: chain then the length-1 arm in Bourbaki slot 2
    short, mid, long_ = arms
    for c1, c2 in ((mid, long_), (long_, mid)):
        order = c1[::-1] + [b] + c2
        full = [order[0]] + [short[0]] + order[1:]
        outs.append(full)
    return outs


def _classify(nodes, amb_matrix, adj, r):
    """Classify one component; return (letter, m, ordered ambient nodes)."""
    m = len(nodes)
    letters = ["A", "B", "C", "D", "E", "G"]
    for order in _orderings(nodes, adj):
        sub = tuple(tuple(amb_matrix[i][j] for j in order) for i in order)
        for letter in letters:
            if letter == "D" and m < 4:
                continue
            if letter == "G" and m != 2:
                continue
            if letter in "BC" and m < 2:
                continue
            if letter == "E" and m not in (6, 7):
                continue
            try:
                if sub == _std_classical(letter, m):
                    return letter, m, order
            except (KeyError, ValueError):
                continue
    raise ValueError(f"cannot classify component {nodes}")


def _affinize(cart, letter, m, comp_nodes):
    """Affine label for a classical component inside the given ambient type.

    Returns (label, reverse_order).  The far tail of a twisted chain family
    stays in the ambient family; everything else affinizes per its arrows.
    """
    amb_letter, amb_nn, amb_twist, amb_dag = parse_label(cart.family_label)
    has_far_end = cart.n in comp_nodes
    if cart.twist == 1:
        if letter == "A":
            return f"A{m}(1)", False
        return f"{letter}{m}(1)", False
    if amb_letter == "A" and amb_twist == 2 and amb_nn % 2 == 0:
        # A_{2n}(2) or its dagger twin: the far tail stays in the family
        dag = "*" if amb_dag else ""
        if has_far_end and letter in ("A", "C"):
            return f"A{2 * m}(2){dag}", False
        if letter == "A":
            return f"A{m}(1)", False
        raise ValueError(f"no affinization for {letter}{m} inside {cart.family_label}")
    # dual untwisted world: A_{2m-1}(2), D_{m+1}(2), E_6(2), D_4(3)
    if letter == "A":
        if has_far_end and amb_letter == "A":
            # C_1 tail of A_{2n-1}(2)
            return "A1(1)", False
        if has_far_end and amb_letter == "D" and amb_twist == 2:
            # B_1 tail of D_{n+1}(2)
            return "A1(1)", False
        return f"A{m}(1)", False
    if letter == "B":
        return f"D{m + 1}(2)", False
    if letter == "C":
        if m == 2:
            return "D3(2)", True
        return f"A{2 * m - 1}(2)", False
    if letter == "G":
        return "D4(3)", False
    raise ValueError(f"no affinization for {letter}{m} inside {cart.family_label}")


def decoupled_type(label, r):
    """Components of the decoupled affine type at classical node r."""
    cart = build_affine_type(label)
    if r not in cart.classical_index_set:
        raise ValueError(f"r={r} not a classical node of {label}")
    nodes = [i for i in cart.classical_index_set if i != r]
    amb = cart.cartan_matrix
    adj = {i: [j for j in cart.classical_index_set if j != i and amb[i][j] != 0]
           for i in cart.classical_index_set}
    seen, comps = set(), []
    for v in nodes:
        if v in seen:
            continue
        comp, stack = set(), [v]
        while stack:
            x = stack.pop()
            if x in comp:
                continue
            comp.add(x)
            stack.extend(w for w in adj[x] if w != r and w not in comp)
        seen |= comp
        comps.append(comp)
    out = []
    for comp in sorted(comps, key=min):
        letter, m, order = _classify(comp, amb, adj, r)
        rps = [x for x in comp if x in adj[r]]
        if len(rps) != 1:
            raise ValueError(f"component {comp} touches r={r} at {rps}")
        rp = rps[0]
        if letter == "A" and order[0] > order[-1]:
            order = order[::-1]
        if letter == "D" and len(order) >= 4 and order[-2] == rp:
            # put the fork arm adjacent to r in the last (spin) slot
            order = order[:-2] + [order[-1], order[-2]]
        lab, rev = _affinize(cart, letter, m, comp)
        if rev:
            order = order[::-1]
        sub_cart = build_affine_type(lab)
        cap = Fraction(cart.modgamma[r], cart.gamma[rp])
        out.append(DecoupledComponent(label=lab, n=sub_cart.n,
                                      ambient_nodes=tuple(order),
                                      r_prime=rp, capacity=cap))
    return DecoupledType(family_label=label, r=r, components=tuple(out))
