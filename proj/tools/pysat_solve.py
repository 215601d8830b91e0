#!/usr/bin/env python3
"""DIMACS solver shim over python-sat for machines without a native CDCL binary.

Prints competition-style `s` and `v` lines and exits 10 (SAT) or 20 (UNSAT).
The backend is picked with `--engine NAME` (any python-sat solver name).
"""
import argparse
import sys

from pysat.formula import CNF
from pysat.solvers import Solver


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--engine", default="cadical195")
    parser.add_argument("cnf")
    args = parser.parse_args()
    formula = CNF(from_file=args.cnf)
    with Solver(name=args.engine, bootstrap_with=formula.clauses) as s:
        if not s.solve():
            print("s UNSATISFIABLE")
            return 20
        model = s.get_model() or []
        seen = {abs(l) for l in model}
        model += [-v for v in range(1, formula.nv + 1) if v not in seen]
        print("s SATISFIABLE")
        print("v " + " ".join(str(l) for l in sorted(model, key=abs)) + " 0")
        return 10


if __name__ == "__main__":
    sys.exit(main())
