#!/usr/bin/env python3
"""Fallback MILP driver: parses an LP file (the subset this project emits)
and solves it with scipy's HiGHS backend.

Usage: milp_solve.py model.lp out.sol [time_limit_seconds]

The solution file carries a leading "status <s>" line followed by
"name value" rows for the nonzero variables.
"""

import sys

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp
from scipy.sparse import csr_matrix


def tokenize_terms(tokens):
    """Yields (coef, name) from ['+', '3', 'x', '-', 'y', ...]."""
    sign = 1.0
    coef = None
    for tok in tokens:
        if tok == "+":
            sign, coef = 1.0, None
        elif tok == "-":
            sign, coef = -1.0, None
        else:
            try:
                value = float(tok)
            except ValueError:
                yield (sign * (1.0 if coef is None else coef), tok)
                sign, coef = 1.0, None
                continue
            coef = value if coef is None else coef * value


def parse_lp(path):
    sections = {"minimize", "subject to", "bounds", "generals", "binaries", "end"}
    section = None
    objective = []
    constraints = []  # (terms, rel, rhs)
    bounds = {}
    binaries = set()
    with open(path) as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("\\"):
                continue
            low = line.lower()
            if low in sections:
                section = low
                continue
            if section == "minimize":
                body = line.split(":", 1)[1] if ":" in line else line
                objective.extend(tokenize_terms(body.split()))
            elif section == "subject to":
                body = line.split(":", 1)[1] if ":" in line else line
                toks = body.split()
                rel_pos = next(i for i, t in enumerate(toks) if t in ("<=", ">=", "="))
                terms = list(tokenize_terms(toks[:rel_pos]))
                rel = toks[rel_pos]
                rhs = float(toks[rel_pos + 1])
                constraints.append((terms, rel, rhs))
            elif section == "bounds":
                toks = line.split()
                if len(toks) == 3 and toks[1] == "=":
                    bounds[toks[0]] = (float(toks[2]), float(toks[2]))
                elif len(toks) == 5 and toks[1] == "<=" and toks[3] == "<=":
                    bounds[toks[2]] = (float(toks[0]), float(toks[4]))
                else:
                    raise ValueError("unsupported bounds line: " + line)
            elif section == "binaries":
                for name in line.split():
                    binaries.add(name)
                    bounds.setdefault(name, (0.0, 1.0))
            elif section == "generals":
                for name in line.split():
                    bounds.setdefault(name, (0.0, np.inf))
    return objective, constraints, bounds, binaries


def main():
    if len(sys.argv) < 3:
        print("usage: milp_solve.py model.lp out.sol [limit_seconds]", file=sys.stderr)
        return 2
    lp_path, sol_path = sys.argv[1], sys.argv[2]
    limit = float(sys.argv[3]) if len(sys.argv) > 3 else 300.0
    objective, constraints, bounds, binaries = parse_lp(lp_path)

    names = sorted(bounds)
    index = {n: i for i, n in enumerate(names)}
    for terms, _, _ in constraints:
        for _, n in terms:
            if n not in index:
                raise ValueError("constraint references unknown variable " + n)
    n = len(names)
    c = np.zeros(n)
    for coef, name in objective:
        c[index[name]] += coef
    lo = np.array([bounds[nm][0] for nm in names])
    hi = np.array([bounds[nm][1] for nm in names])

    rows, cols, vals, clo, chi = [], [], [], [], []
    for r, (terms, rel, rhs) in enumerate(constraints):
        for coef, name in terms:
            rows.append(r)
            cols.append(index[name])
            vals.append(coef)
        if rel == "<=":
            clo.append(-np.inf)
            chi.append(rhs)
        elif rel == ">=":
            clo.append(rhs)
            chi.append(np.inf)
        else:
            clo.append(rhs)
            chi.append(rhs)
    a_mat = csr_matrix((vals, (rows, cols)), shape=(len(constraints), n))

    res = milp(
        c=c,
        constraints=LinearConstraint(a_mat, np.array(clo), np.array(chi)),
        integrality=np.ones(n),
        bounds=Bounds(lo, hi),
        options={"time_limit": limit, "presolve": True},
    )

    if res.status == 0:
        status = "optimal"
    elif res.status == 2:
        status = "infeasible"
    elif res.status == 3:
        status = "unbounded"
    elif res.status == 1 and res.x is not None:
        status = "feasible"
    elif res.status == 1:
        status = "timeout"
    else:
        status = "unknown"

    with open(sol_path, "w") as out:
        out.write("status %s\n" % status)
        if res.x is not None:
            for name_, xi in zip(names, res.x):
                v = round(float(xi))
                if abs(float(xi) - v) > 1e-7:
                    v = float(xi)
                if v != 0:
                    out.write("%s %s\n" % (name_, v))
    return 0


if __name__ == "__main__":
    sys.exit(main())
