#!/usr/bin/env python3
"""Tiny DPLL solver speaking the SAT competition output format."""
import sys


def parse(path):
    clauses, cur, n = [], [], 0
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line[0] in "cp%":
                if line.startswith("p"):
                    n = int(line.split()[2])
                continue
            for tok in line.split():
                lit = int(tok)
                if lit == 0:
                    clauses.append(cur)
                    cur = []
                else:
                    cur.append(lit)
    return n, clauses


def dpll(clauses, assign):
    while True:
        unit = None
        for c in clauses:
            if any(assign.get(abs(l)) == (l > 0) for l in c):
                continue
            free = [l for l in c if abs(l) not in assign]
            if not free:
                return False
            if len(free) == 1:
                unit = free[0]
                break
        if unit is None:
            break
        assign[abs(unit)] = unit > 0
    for c in clauses:
        for l in c:
            if abs(l) not in assign:
                for value in (l > 0, l < 0):
                    trial = dict(assign)
                    trial[abs(l)] = value
                    if dpll(clauses, trial):
                        assign.clear()
                        assign.update(trial)
                        return True
                return False
    return True


def main():
    sys.setrecursionlimit(100000)
    n, clauses = parse(sys.argv[-1])
    assign = {}
    if dpll(clauses, assign):
        print("s SATISFIABLE")
        print("v " + " ".join(str(v if assign.get(v, False) else -v) for v in range(1, n + 1)) + " 0")
        sys.exit(10)
    print("s UNSATISFIABLE")
    sys.exit(20)


main()
