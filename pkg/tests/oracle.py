"""Literal set-enumeration versions of the proximity measures, for cross-checking."""

import math


def neighbor_sets(nodes, edges, directed, direction):
    nb = {v: set() for v in nodes}
    for u, v in edges:
        if u == v:
            continue
        if not directed:
            nb[u].add(v)
            nb[v].add(u)
        elif direction == "out":
            nb[u].add(v)
        else:
            nb[v].add(u)
    return nb


def measures(nb, v, w):
    L = nb
    common = L[v] & L[w]
    cn = len(common)
    ra = sum(1 / len(L[z]) for z in common if z != v and z != w and len(L[z]) > 0)
    aac = sum(1 / math.log(len(L[z])) for z in common if z != v and z != w and len(L[z]) > 1)
    union = L[v] | L[w]
    ji = cn / len(union) if union else 0.0
    pa = len(L[v]) * len(L[w])
    sd = 2 * cn / (len(L[v]) + len(L[w])) if (len(L[v]) + len(L[w])) else 0.0
    lo, hi = min(len(L[v]), len(L[w])), max(len(L[v]), len(L[w]))
    hpi = cn / lo if lo else 0.0
    hdi = cn / hi if hi else 0.0
    car = 0.0
    for z in common:
        if z == v or z == w or not L[z]:
            continue
        car += len(L[v] & L[w] & L[z]) / len(L[z])
    return {"CN": cn, "RA": ra, "AAC": aac, "JI": ji, "PA": pa, "SD": sd,
            "HPI": hpi, "HDI": hdi, "CAR": car}


ORDER = ("CN", "RA", "AAC", "JI", "PA", "SD", "HPI", "HDI", "CAR")


def feature_vector(nodes, edges, directed, v, w):
    if not directed:
        m = measures(neighbor_sets(nodes, edges, False, None), v, w)
        return [m[k] for k in ORDER]
    mi = measures(neighbor_sets(nodes, edges, True, "in"), v, w)
    mo = measures(neighbor_sets(nodes, edges, True, "out"), v, w)
    out = []
    for k in ORDER:
        out += [mi[k], mo[k]]
    return out


def all_vectors(nodes, edges, directed):
    """Feature vectors for every ordered (directed) or unordered pair, in index order."""
    if directed:
        views = [neighbor_sets(nodes, edges, True, d) for d in ("in", "out")]
        pairs = [(v, w) for v in nodes for w in nodes if v != w]
    else:
        views = [neighbor_sets(nodes, edges, False, None)]
        pairs = [(v, w) for i, v in enumerate(nodes) for w in nodes[i + 1:]]
    out = []
    for v, w in pairs:
        ms = [measures(nb, v, w) for nb in views]
        out.append([m[k] for k in ORDER for m in ms])
    return pairs, out
