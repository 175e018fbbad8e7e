"""
betweenness relations and quasi-trees: construction from linear orders and join-trees, the
axiom checker, medians, rooting, directions and the reconstruction of a linear order from its
betweenness and two anchors.

a finite relation is held as a boolean tensor b[x, y, z] over the node indices; lazy relations
are given by a predicate and a node enumerator and are checked on join-closed samples.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np
from loguru import logger

from src.errors import AmbiguityError, InvalidStructureError, NotAQuasiTreeError, UnknownNodeError
from src.order_core import Node, Poset, canonical
from src.settings import get_settings

AXIOMS = ("A1", "A2", "A3", "A4", "A5", "A6", "A7", "A7'")
AXIOM_TEXT = {
    "A1": "B(x,y,z) => x, y, z pairwise distinct",
    "A2": "B(x,y,z) => B(z,y,x)",
    "A3": "B(x,y,z) => not B(x,z,y)",
    "A4": "B(x,y,z) & B(y,z,u) => B(x,y,u) & B(x,z,u)",
    "A5": "B(x,y,z) & B(x,u,y) => B(x,u,z) & B(u,y,z)",
    "A6": "B(x,y,z) & B(x,u,z) => y = u or [B(x,u,y) & B(u,y,z)] or [B(x,y,u) & B(y,u,z)]",
    "A7": "distinct x, y, z lie on a line or have a median",
    "A7'": "distinct x, y, z lie on a line",
}
ON_A_LINE = "on_a_line"


class Betweenness:
    """
    a ternary relation on a set of nodes.

    args:
        nodes: the node set (finite), or None for a lazy relation
        triples: the triples (x, y, z) with B(x, y, z), finite case
        predicate: B as a function, lazy case
        enumerate_nodes: limit -> iterator over the nodes, lazy case
        join: optional join of an underlying join-tree; samples are closed under it
    """

    def __init__(
        self,
        nodes: Optional[Iterable[Node]] = None,
        triples: Iterable[Tuple[Node, Node, Node]] = (),
        predicate: Optional[Callable[[Node, Node, Node], bool]] = None,
        enumerate_nodes: Optional[Callable[[Optional[int]], Iterator[Node]]] = None,
        join: Optional[Callable[[Node, Node], Optional[Node]]] = None,
    ):
        self._predicate = predicate
        self._enumerate = enumerate_nodes
        self._join = join
        self.tensor: Optional[np.ndarray] = None
        if nodes is None:
            if predicate is None or enumerate_nodes is None:
                raise InvalidStructureError("a lazy betweenness needs a predicate and a node enumerator")
            self.nodes: Tuple[Node, ...] = ()
            self._index: Dict[Node, int] = {}
            return
        self.nodes = tuple(dict.fromkeys(nodes))
        self._index = {x: i for i, x in enumerate(self.nodes)}
        n = len(self.nodes)
        self.tensor = np.zeros((n, n, n), dtype=bool)
        for x, y, z in triples:
            self.tensor[self.index(x), self.index(y), self.index(z)] = True

    @classmethod
    def from_tensor(cls, nodes: Sequence[Node], tensor: np.ndarray) -> "Betweenness":
        s = cls(nodes)
        s.tensor = np.asarray(tensor, dtype=bool).copy()
        return s

    @property
    def is_lazy(self) -> bool:
        return self.tensor is None

    def __len__(self) -> int:
        if self.is_lazy:
            raise TypeError("a lazy betweenness has no length")
        return len(self.nodes)

    def __repr__(self) -> str:
        if self.is_lazy:
            return "Betweenness(lazy)"
        return f"Betweenness({len(self.nodes)} nodes, {int(self.tensor.sum())} triples)"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Betweenness):
            return NotImplemented
        if self.is_lazy or other.is_lazy:
            return self is other
        return set(self.nodes) == set(other.nodes) and self.triples() == other.triples()

    __hash__ = None  # type: ignore[assignment]

    def index(self, x: Node) -> int:
        try:
            return self._index[x]
        except KeyError:
            raise UnknownNodeError(x) from None

    def between(self, x: Node, y: Node, z: Node) -> bool:
        """B(x, y, z): y lies strictly between x and z."""
        if self.is_lazy:
            return bool(self._predicate(x, y, z))
        return bool(self.tensor[self.index(x), self.index(y), self.index(z)])

    __call__ = between

    def triples(self) -> FrozenSet[Tuple[Node, Node, Node]]:
        if self.is_lazy:
            raise TypeError("a lazy betweenness cannot list its triples")
        return frozenset((self.nodes[i], self.nodes[j], self.nodes[k]) for i, j, k in np.argwhere(self.tensor))

    def node_list(self, limit: Optional[int] = None) -> List[Node]:
        if self.is_lazy:
            return list(self._enumerate(limit))
        return list(self.nodes[:limit] if limit is not None else self.nodes)

    def interval(self, x: Node, y: Node) -> Tuple[Node, ...]:
        """[x, y]_B: x, y and the nodes between them (lazy relations: among a sample)."""
        if self.is_lazy:
            pool = self.sample(get_settings().describe_bound).nodes
            return tuple(dict.fromkeys([x, y] + [z for z in pool if self.between(x, z, y)]))
        inner = np.flatnonzero(self.tensor[self.index(x), :, self.index(y)])
        return tuple(dict.fromkeys([x, y] + [self.nodes[k] for k in inner]))

    def is_leaf(self, x: Node) -> bool:
        if self.is_lazy:
            raise TypeError("leaves of a lazy betweenness are not decidable from a sample")
        return not self.tensor[:, self.index(x), :].any()

    def restrict(self, subset: Iterable[Node]) -> "Betweenness":
        keep = [x for x in dict.fromkeys(subset)]
        if self.is_lazy:
            n = len(keep)
            t = np.zeros((n, n, n), dtype=bool)
            for i, x in enumerate(keep):
                for j, y in enumerate(keep):
                    for k, z in enumerate(keep):
                        if i != j and j != k and i != k:
                            t[i, j, k] = self._predicate(x, y, z)
            return Betweenness.from_tensor(keep, t)
        idx = [self.index(x) for x in keep]
        return Betweenness.from_tensor(keep, self.tensor[np.ix_(idx, idx, idx)])

    def sample(self, k: int) -> "Betweenness":
        """the first k nodes, closed under the join when one is known, as a finite relation."""
        if not self.is_lazy:
            return self.restrict(self.nodes[:k])
        picked = list(self._enumerate(k))
        if self._join is not None:
            seen = set(picked)
            frontier = list(picked)
            while frontier:
                fresh = []
                for x in frontier:
                    for y in list(seen):
                        j = self._join(x, y)
                        if j is not None and j not in seen:
                            seen.add(j)
                            picked.append(j)
                            fresh.append(j)
                frontier = fresh
        logger.debug(f"sampled {len(picked)} nodes of a lazy betweenness")
        return self.restrict(picked)


# construction


def betweenness_of_order(order: Sequence[Node]) -> Betweenness:
    """B_L of a linear order given least first; empty below three elements."""
    nodes = list(order)
    r = np.arange(len(nodes))
    lt = r[:, None] < r[None, :]
    t = (lt[:, :, None] & lt[None, :, :]) | (lt.T[:, :, None] & lt.T[None, :, :])
    return Betweenness.from_tensor(nodes, t)


def betweenness_of_join_tree(j: Union[Poset, object]) -> Betweenness:
    """
    B_J(x, y, z): x, y, z distinct and x < y <= x v z or z < y <= x v z.

    args:
        j: a finite join-tree (Poset) or a lazy one exposing nodes(limit), leq and join

    returns:
        Betweenness, finite for a Poset and lazy otherwise
    """
    if not isinstance(j, Poset):
        return _lazy_betweenness(j)
    if len(j) < 3:
        raise InvalidStructureError("a quasi-tree needs at least 3 nodes", len(j))
    if not j.is_join_tree():
        raise InvalidStructureError("order is not a join-tree")
    nodes = list(j.nodes)
    n = len(nodes)
    m = j.matrix
    joins = np.empty((n, n), dtype=np.intp)
    for a in range(n):
        for c in range(n):
            joins[a, c] = j.index(j.join(nodes[a], nodes[c]))
    strict = m & ~np.eye(n, dtype=bool)
    # below_join[x, y, z] = y <= x v z
    below_join = m[:, joins].transpose(1, 0, 2)
    t = (strict[:, :, None] | strict.T[None, :, :]) & below_join
    t &= _distinct(n)
    return Betweenness.from_tensor(nodes, t)


def _lazy_betweenness(j) -> Betweenness:
    def predicate(x: Node, y: Node, z: Node) -> bool:
        if x == y or y == z or x == z:
            return False
        top = j.join(x, z)
        if top is None or not j.leq(y, top):
            return False
        return (j.leq(x, y) and x != y) or (j.leq(z, y) and z != y)

    return Betweenness(predicate=predicate, enumerate_nodes=j.nodes, join=j.join)


def _distinct(n: int) -> np.ndarray:
    i = np.arange(n)
    return (i[:, None, None] != i[None, :, None]) & (i[None, :, None] != i[None, None, :]) & (i[:, None, None] != i[None, None, :])


# axioms


@dataclass
class AxiomReport:
    """per-axiom outcome; a failing axiom maps to its violating tuple of nodes."""

    failures: Dict[str, Optional[Tuple[Node, ...]]] = field(default_factory=dict)
    nodes: int = 0
    exhaustive: bool = True

    def ok(self, axiom: str) -> bool:
        return self.failures.get(axiom) is None

    @property
    def is_quasi_tree(self) -> bool:
        return self.nodes >= 3 and all(self.ok(a) for a in AXIOMS[:7])

    @property
    def is_linear(self) -> bool:
        return all(self.ok(a) for a in AXIOMS if a != "A7")

    def __str__(self) -> str:
        rows = []
        for a in AXIOMS:
            witness = self.failures.get(a)
            rows.append(f"{a:<3} pass" if witness is None else f"{a:<3} FAIL {witness}")
        scope = "exhaustive" if self.exhaustive else "sampled"
        rows.append(f"{scope} over {self.nodes} nodes")
        return "\n".join(rows)


def _violations(t: np.ndarray) -> Dict[str, np.ndarray]:
    """for each axiom, a boolean array over its quantified nodes marking violations."""
    n = t.shape[0]
    eye = np.eye(n, dtype=bool)
    xzy = t.transpose(0, 2, 1)  # [x, y, z] -> B(x, z, y)
    yxz = t.transpose(1, 0, 2)  # [x, y, z] -> B(y, x, z)
    tail = t.transpose(1, 2, 0)  # [a, b, c] -> B(c, a, b)
    distinct = _distinct(n)
    out: Dict[str, np.ndarray] = {}
    out["A1"] = t & ~distinct
    out["A2"] = t & ~t.transpose(2, 1, 0)
    out["A3"] = t & xzy
    # quadruples indexed [x, y, z, u]
    b_xyz = t[:, :, :, None]
    out["A4"] = b_xyz & t[None, :, :, :] & ~(t[:, :, None, :] & t[:, None, :, :])
    b_xuy = xzy[:, :, None, :]
    out["A5"] = b_xyz & b_xuy & ~(xzy[:, None, :, :] & tail[None, :, :, :])
    b_xuz = xzy[:, None, :, :]
    same = eye[None, :, None, :]
    left = xzy[:, :, None, :] & tail[None, :, :, :]
    right = t[:, :, None, :] & xzy[None, :, :, :]
    out["A6"] = b_xyz & b_xuz & ~(same | left | right)
    on_line = t | xzy | yxz
    out["A7'"] = distinct & ~on_line
    # witness w for [x, y, z]: B(x, w, y) & B(y, w, z) & B(x, w, z)
    median = (xzy[:, :, None, :] & xzy[None, :, :, :] & xzy[:, None, :, :]).any(axis=3)
    out["A7"] = distinct & ~on_line & ~median
    return out


def check_axioms(s: Betweenness, mode: str = "exhaustive", sample: Optional[int] = None, seed: Optional[int] = None) -> AxiomReport:
    """
    check the betweenness axioms.

    args:
        s: finite or lazy betweenness
        mode: "exhaustive" (every tuple) or "sampled" (tuples over a sample of nodes)
        sample: sample size, default from settings
        seed: sampling seed, default from settings

    returns:
        AxiomReport with a violating tuple per failing axiom; medians are searched among all
        nodes of a finite relation and in the join closure of the sample of a lazy one
    """
    settings = get_settings()
    size = settings.describe_bound if sample is None else sample
    if s.is_lazy:
        universe = s.sample(size)
        chosen = np.ones(len(universe.nodes), dtype=bool)
        exhaustive = False
    else:
        universe = s
        chosen = np.ones(len(s.nodes), dtype=bool)
        exhaustive = mode == "exhaustive" or size >= len(s.nodes)
        if not exhaustive:
            rng = np.random.default_rng(settings.seed if seed is None else seed)
            chosen[:] = False
            chosen[rng.choice(len(s.nodes), size=size, replace=False)] = True
    report = AxiomReport(nodes=len(universe.nodes) if exhaustive or s.is_lazy else int(chosen.sum()), exhaustive=exhaustive)
    for axiom, bad in _violations(universe.tensor).items():
        mask = bad
        for axis in range(bad.ndim):
            shape = [1] * bad.ndim
            shape[axis] = -1
            mask = mask & chosen.reshape(shape)
        hits = np.argwhere(mask)
        report.failures[axiom] = tuple(universe.nodes[i] for i in hits[0]) if len(hits) else None
    logger.debug(f"axioms checked on {report.nodes} nodes: {[a for a in AXIOMS if not report.ok(a)] or 'all pass'}")
    return report


def _require_quasi_tree(s: Betweenness) -> Betweenness:
    universe = s.sample(get_settings().describe_bound) if s.is_lazy else s
    report = check_axioms(universe)
    if not report.is_quasi_tree:
        failed = next((a for a in AXIOMS[:7] if not report.ok(a)), None)
        detail = f"{failed} fails at {report.failures[failed]}" if failed else "fewer than 3 nodes"
        raise NotAQuasiTreeError(f"not a quasi-tree: {detail}")
    return universe


# medians and rooting


def median(s: Betweenness, x: Node, y: Node, z: Node) -> Union[Node, str]:
    """
    M_S(x, y, z), or ON_A_LINE when the three nodes lie on a line.

    raises:
        NotAQuasiTreeError when no case or several witnesses apply
    """
    if len({x, y, z}) < 3:
        raise InvalidStructureError("median needs three distinct nodes", (x, y, z))
    if s.between(x, y, z) or s.between(x, z, y) or s.between(y, x, z):
        return ON_A_LINE
    universe = s.sample(get_settings().describe_bound) if s.is_lazy else s
    if s.is_lazy:
        universe = s.restrict(list(dict.fromkeys(list(universe.nodes) + [x, y, z])))
    t = universe.tensor
    i, j, k = universe.index(x), universe.index(y), universe.index(z)
    witnesses = np.flatnonzero(t[i, :, j] & t[j, :, k] & t[i, :, k])
    if len(witnesses) != 1:
        raise NotAQuasiTreeError(f"{len(witnesses)} median candidates for {(x, y, z)!r}")
    return universe.nodes[witnesses[0]]


def root_order(s: Betweenness, r: Node) -> Poset:
    """the join-tree rooted at r: x <=_r y iff y lies in [x, r]_B."""
    universe = _require_quasi_tree(s)
    n = len(universe.nodes)
    ri = universe.index(r)
    m = np.eye(n, dtype=bool) | universe.tensor[:, :, ri]
    m[:, ri] = True
    return Poset.from_matrix(list(universe.nodes), m)


def structure_quasi_tree(s: Betweenness, r: Node, enumeration: Optional[Sequence[Node]] = None):
    """root at r, then structure the rooted join-tree (binary trees get an SBJ structuring)."""
    from src.trees import structure, structure_forest

    p = root_order(s, r)
    if all(p.degree(x) <= 2 for x in p.nodes):
        return structure(p, enumeration)
    return structure_forest(p, enumeration)


# linear orders from betweenness


def z_predicate(s: Betweenness, a: Node, b: Node, x: Node, y: Node) -> bool:
    """the quantifier-free definition of x <_{a,b} y."""
    B = s.between
    if x == y:
        return False
    return (
        (B(x, a, b) and not B(y, x, a))
        or (x == a and not B(y, a, b))
        or (B(a, x, b) and not B(y, x, b))
        or (x == b and B(a, b, y))
        or (B(a, b, x) and B(b, x, y))
    )


def z_simplified(s: Betweenness, a: Node, b: Node, x: Node, y: Node) -> bool:
    """the definition without its clauses above b, valid when nothing lies beyond b."""
    B = s.between
    if x == y:
        return False
    return (B(x, a, b) and not B(y, x, a)) or (x == a and not B(y, a, b)) or (B(a, x, b) and not B(y, x, b))


def nothing_beyond(s: Betweenness, b: Node) -> bool:
    """no B(u, b, v) holds."""
    return s.is_leaf(b)


def order_from_betweenness(s: Betweenness, a: Node, b: Node, enumeration: Optional[Sequence[Node]] = None) -> Tuple[Node, ...]:
    """
    the unique linear order with a < b whose betweenness is s.

    args:
        s: a finite betweenness satisfying the linear axioms
        a, b: distinct anchors
        enumeration: insertion order of the other nodes, default the node order of s

    returns:
        the nodes, least first

    raises:
        NotAQuasiTreeError when an axiom fails, AmbiguityError when an insertion step is not unique
    """
    if a == b:
        raise InvalidStructureError("anchors must differ", a)
    for anchor in (a, b):
        s.index(anchor)
    report = check_axioms(s)
    if not report.is_linear:
        failed = next(ax for ax in AXIOMS if ax != "A7" and not report.ok(ax))
        raise NotAQuasiTreeError(f"not the betweenness of a linear order: {failed} fails at {report.failures[failed]}")
    order: List[Node] = [a, b]
    rest = [x for x in (enumeration if enumeration is not None else s.nodes) if x not in (a, b)]
    B = s.between
    for x in rest:
        inside = [k for k in range(len(order) - 1) if B(order[k], x, order[k + 1])]
        if inside:
            if len(inside) > 1:
                raise AmbiguityError(f"{x!r} fits between several consecutive pairs")
            order.insert(inside[0] + 1, x)
            continue
        if any(B(order[i], x, order[j]) for i in range(len(order)) for j in range(i + 1, len(order))):
            raise AmbiguityError(f"{x!r} lies between two nodes but between no consecutive pair")
        after = B(order[-2], order[-1], x)
        before = B(x, order[0], order[1])
        if after == before:
            raise AmbiguityError(f"{x!r} extends the order at {'both ends' if after else 'neither end'}")
        if after:
            order.append(x)
        else:
            order.insert(0, x)
    rank = {x: i for i, x in enumerate(order)}
    for x in order:
        for y in order:
            if (rank[x] < rank[y]) != z_predicate(s, a, b, x, y):
                raise AmbiguityError(f"quantifier-free definition disagrees on {(x, y)!r}")
    logger.debug(f"reconstructed a linear order on {len(order)} nodes")
    return tuple(order)


# directions


def directions_qt(s: Betweenness, x: Node) -> Tuple[FrozenSet[Node], ...]:
    """the classes of y ~_x z: same direction relative to x."""
    universe = s.sample(get_settings().describe_bound) if s.is_lazy else s
    t = universe.tensor
    xi = universe.index(x)
    r = t[:, :, xi]
    rel = r | r.T | ((r.astype(np.int32) @ r.T.astype(np.int32)) > 0)
    g = nx.Graph()
    others = [i for i in range(len(universe.nodes)) if i != xi]
    g.add_nodes_from(others)
    g.add_edges_from((int(i), int(k)) for i, k in np.argwhere(rel) if i != xi and k != xi and i != k)
    classes = [frozenset(universe.nodes[i] for i in comp) for comp in nx.connected_components(g)]
    return tuple(sorted(classes, key=lambda c: repr(canonical(c))))


def degree(s: Betweenness, x: Node) -> int:
    return len(directions_qt(s, x))


def is_subcubic(s: Betweenness) -> bool:
    universe = s.sample(get_settings().describe_bound) if s.is_lazy else s
    return all(degree(universe, x) <= 3 for x in universe.nodes)


def is_discrete(s: Betweenness) -> Optional[bool]:
    """finite quasi-trees are discrete; for lazy ones the answer is None (not decidable from a sample)."""
    if s.is_lazy:
        logger.warning("discreteness of a lazy quasi-tree cannot be certified from a sample")
        return None
    return True
