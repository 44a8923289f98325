"""Independent reference computations whose results are frozen into the C++ tests."""
from fractions import Fraction
from itertools import product
from math import log2

T, F, U = "T", "F", "U"
FEATURES = ["sub.dept = res.dept", "sub.dept = CS", "res.dept = CS", "res.type = Handbook"]
ROWS = [("UTUT", T), ("TTTU", T), ("UTUU", F), ("UUUT", T), ("UUTU", F), ("UUUU", F)]


def leq(a, b):
    return all(x == y or x == U for x, y in zip(a, b))


def label_leq(a, b):
    return a == b or a == U


def violations(rows):
    return [(i, j) for i, (vi, li) in enumerate(rows) for j, (vj, lj) in enumerate(rows)
            if i != j and leq(vi, vj) and not label_leq(li, lj)]


def entropy(labels):
    n = len(labels)
    return -sum(labels.count(l) / n * log2(labels.count(l) / n) for l in set(labels)) if n else 0.0


def gain(rows, f):
    labels = [l for _, l in rows]
    rest = 0.0
    for t in (T, F, U):
        part = [l for v, l in rows if v[f] == t]
        rest += len(part) / len(rows) * entropy(part)
    return entropy(labels) - rest


NOT = {T: F, F: T, U: U}
RANK = {F: 0, U: 1, T: 2}


def conj(c, v):
    out = T
    for f, pos in c:
        x = v[f] if pos else NOT[v[f]]
        out = min(out, x, key=RANK.get)
    return out


def dnf(d, v):
    out = F
    for c in d:
        out = max(out, conj(c, v), key=RANK.get)
    return out


def jac(a, b):
    a, b = set(a), set(b)
    return Fraction(1) if not a and not b else Fraction(len(a & b), len(a | b))


# Conditions are (path, values, negated); rules are
# (subject type, subject conds, resource type, resource conds, constraints, actions).
def syn_atomic(a, b):
    if a[0] != b[0]:
        return Fraction(0)
    return (Fraction(a[2] == b[2]) + 1 + jac(a[1], b[1])) / 3


def syn_conds(a, b):
    if not a and not b:
        return Fraction(1)
    paths = {c[0] for c in a} | {c[0] for c in b}
    return sum((syn_atomic(x, y) for x in a for y in b), Fraction(0)) / len(paths)


def syn_rule(a, b):
    return (Fraction(a[0] == b[0]) + syn_conds(a[1], b[1]) + Fraction(a[2] == b[2]) +
            syn_conds(a[3], b[3]) + jac(a[4], b[4]) + jac(a[5], b[5])) / 6


def syn_policy(a, b):
    return sum((max(syn_rule(x, y) for y in b) for x in a), Fraction(0)) / len(a)


def main():
    print("example dataset violations (0-based, row order):", violations(ROWS))
    for f, name in enumerate(FEATURES):
        print(f"gain[{name}] = {gain(ROWS, f):.15f}")
    a = [[(0, False), (2, True)], [(2, True)]]
    b = [[(2, True)]]
    eq = all(dnf(a, v) == dnf(b, v) for v in product((T, F, U), repeat=3))
    print("{{!f1,f3},{f3}} == {{f3}} on all 27 vectors:", eq)
    # Naive policy meaning on the running example: 2 of the 3 authorizations.
    print("naive jaccard:", Fraction(2, 3))
    # WSC: conditions |p| + |values| (+1 negated); constraints |p1| + |p2| (+1 negated);
    # rules add |actions|.
    print("wsc dept=CS:", 1 + 1)
    print("wsc negated subject not in res.patient.COIs:", 0 + 2 + 1)
    print("wsc <Student,true,Document,type=Handbook,true,{read}>:", (1 + 1) + 1)
    print("wsc <Student,true,Document,true,dept=dept,{read}>:", (1 + 1) + 1)
    print("wsc <Employee,manager=true,Document,confidential=false,dept=project.dept,{approve}>:",
          (1 + 1) + (1 + 1) + (1 + 2) + 1)
    print("wsc <Employee,true,Document,true,projects>=scope,{edit,read}>:", (1 + 1) + 2)
    print("wsc <Student,dept in {CS,EE},Document,type!=Handbook,true,{read,write}>:",
          (1 + 2) + (1 + 1 + 1) + 2)

    print("jaccard {a,b} {b,c}:", jac("ab", "bc"))
    cs = ("dept", ("CS",), False)
    print("syn dept=CS vs dept in {CS,EE}:", syn_atomic(cs, ("dept", ("CS", "EE"), False)))
    print("syn conds {dept=CS} vs {type=Handbook}:", syn_conds([cs], [("type", ("Handbook",), False)]))
    r1 = ("Student", [], "Document", [], ["dept=dept"], ["read"])
    r2 = ("Student", [], "Document", [("type", ("Handbook",), False)], [], ["read"])
    r1w = ("Student", [], "Document", [], ["dept=dept"], ["read", "write"])
    print("syn rule r1 vs r1 with write:", syn_rule(r1, r1w))
    print("syn policy [r1] vs [r1,r2]:", syn_policy([r1], [r1, r2]))
    print("syn policy [r1,r2] vs [r1]:", syn_policy([r1, r2], [r1]))


if __name__ == "__main__":
    main()
