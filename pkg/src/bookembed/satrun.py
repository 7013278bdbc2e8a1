"""Minimal DIMACS front end for the solvers bundled with python-sat.

Usage: ``python -m bookembed.satrun [--solver NAME] FILE.cnf``. Prints the usual
``s``/``v`` lines so it can serve as an external solver command.
"""

import argparse
import sys

from pysat.formula import CNF
from pysat.solvers import Solver


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="bookembed.satrun")
    ap.add_argument("--solver", default="cadical195")
    ap.add_argument("path")
    args = ap.parse_args(argv)
    cnf = CNF(from_file=args.path)
    with Solver(name=args.solver, bootstrap_with=cnf.clauses) as s:
        sat = s.solve()
        model = s.get_model() if sat else None
    if not sat:
        print("s UNSATISFIABLE", flush=True)
        return 20
    print("s SATISFIABLE")
    known = {abs(x) for x in model}
    lits = list(model) + [-x for x in range(1, cnf.nv + 1) if x not in known]
    for i in range(0, len(lits), 20):
        print("v " + " ".join(map(str, lits[i : i + 20])))
    print("v 0", flush=True)
    return 10


if __name__ == "__main__":
    sys.exit(main())
