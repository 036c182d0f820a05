"""Independent reference computations for the frozen values in the unit tests.

Uses networkx for d-separation and a direct path enumeration for including paths.
Run: python3 tests/oracle/derive_values.py
"""
import itertools
import math

import networkx as nx

try:
    dsep = nx.is_d_separator
except AttributeError:
    dsep = nx.d_separated


def dag(edges, nodes=None):
    g = nx.DiGraph()
    g.add_nodes_from(nodes or [])
    g.add_edges_from(edges)
    return g


FIVE_NODE = [("A", "B"), ("B", "C"), ("C", "D"), ("D", "E"), ("A", "E"), ("A", "D"), ("A", "C")]


def first_separator(g, obs, a, b):
    rest = [v for v in obs if v not in (a, b)]
    for k in range(len(rest) + 1):
        for s in itertools.combinations(rest, k):
            if dsep(g, {a}, {b}, set(s)):
                return s
    return None


def including_kind(g, hidden, a, b):
    """Classify paths a..b whose observed interior nodes are colliders and whose
    colliders are ancestors of a or b."""
    anc = set(nx.ancestors(g, a)) | set(nx.ancestors(g, b)) | {a, b}
    u = g.to_undirected()
    kinds = set()
    for path in nx.all_simple_paths(u, a, b):
        ok = True
        for i in range(1, len(path) - 1):
            p, v, n = path[i - 1], path[i], path[i + 1]
            collider = g.has_edge(p, v) and g.has_edge(n, v)
            if collider and v not in anc:
                ok = False
            if not collider and v not in hidden:
                ok = False
        if not ok:
            continue
        into_a = g.has_edge(path[1], a)
        into_b = g.has_edge(path[-2], b)
        kinds.add((into_a, into_b))
    if (True, True) in kinds:
        return "into-into"
    if (False, True) in kinds:
        return "out-into"
    if (True, False) in kinds:
        return "into-out"
    return "none"


def fhd(edges, hidden):
    g = dag(edges)
    obs = sorted(v for v in g.nodes if v not in hidden)
    out = []
    for a, b in itertools.combinations(obs, 2):
        k = including_kind(g, hidden, a, b)
        if k != "none":
            out.append((a, b, k))
    return out


def acyclic_orientations(edges):
    count = 0
    for bits in itertools.product([0, 1], repeat=len(edges)):
        g = nx.DiGraph()
        for (a, b), flip in zip(edges, bits):
            g.add_edge(*((b, a) if flip else (a, b)))
        count += nx.is_directed_acyclic_graph(g)
    return count


def h2(p):
    return -(p * math.log(p) + (1 - p) * math.log(1 - p))


def main():
    g = dag(FIVE_NODE)
    print("five-node B,D | A,C separated:", dsep(g, {"B"}, {"D"}, {"A", "C"}))
    obs = sorted(g.nodes)
    for a, b in itertools.combinations(obs, 2):
        print("five-node separator", a, b, first_separator(g, obs, a, b))

    g4 = dag([("A", "B"), ("C", "B"), ("C", "D")])
    print("4-node connected given B for all S:",
          all(not dsep(g4, {"A"}, {"C"}, set(s)) for s in [("B",), ("B", "D")]))

    print("A->V->B kind:", including_kind(dag([("A", "V"), ("V", "B")]), set(), "A", "B"))
    print("fhd H->A,H->B,A->C:", fhd([("H", "A"), ("H", "B"), ("A", "C")], {"H"}))
    print("fhd H->A,H->B,B->C,A->C:", fhd([("H", "A"), ("H", "B"), ("B", "C"), ("A", "C")], {"H"}))
    print("fhd H->A,H->B,A->X,B->X:", fhd([("H", "A"), ("H", "B"), ("A", "X"), ("B", "X")], {"H"}))

    undirected = [("A", "B"), ("A", "C"), ("A", "D"), ("A", "E"), ("B", "C"), ("C", "D"), ("D", "E")]
    print("five-node acyclic orientations of 2^7:", acyclic_orientations(undirected))

    # chain A->B->C, fair A, P(B=A)=P(C=B)=0.9
    q = 0.9 * 0.9 + 0.1 * 0.1
    print("I(A;C) nats:", repr(math.log(2) - h2(q)), " P(C=A):", q)
    print("I(A;C|B) nats: 0.0")

    # labeled DAG counts (OEIS A003024)
    print("labeled DAGs n=1..5:", [1, 3, 25, 543, 29281], "sum", 1 + 3 + 25 + 543 + 29281)


if __name__ == "__main__":
    main()
