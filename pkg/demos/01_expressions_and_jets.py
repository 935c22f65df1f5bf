"""Expressions and exact second-order jets.

Every tensor component in this package is a closed-form expression over
the chart coordinates. This walk-through parses a few, evaluates them to
jets (value + gradient + Hessian) and sanity-checks the derivatives
against finite differences.

Run:  python demos/01_expressions_and_jets.py
"""

import numpy as np

from yamabe import EvalDomainError, eval_jet2, parse, render

coords = ["x", "y", "z"]

print("== parsing ==")
for text in ["z^2", "-32/z^2", "exp(x)*sin(y) + z^-4", "x^y"]:
    e = parse(text, coords)
    print(f"  {text:28s} -> {render(e)}")

print()
print("== jets ==")
e = parse("exp(x)*(x^3 + 2*x*y - z)", coords)
p = np.array([0.4, -0.3, 1.1])
jet = eval_jet2(e, p)
print(f"  f{tuple(p.tolist())} = {jet.value}")
print(f"  gradient = {jet.grad}")
print(f"  hessian  =\n{jet.hess}")
print(f"  hessian symmetric exactly: {np.array_equal(jet.hess, jet.hess.T)}")

print()
print("== cross-check against central finite differences ==")
h = 1e-5
for m in range(3):
    step = np.zeros(3)
    step[m] = h
    fd = (eval_jet2(e, p + step).value - eval_jet2(e, p - step).value) / (2 * h)
    print(f"  d/d{coords[m]}: jet {jet.grad[m]: .12f}   fd {fd: .12f}")

print()
print("== integer powers keep negative bases in the domain ==")
e = parse("z^-4", coords)
print(f"  z^-4 at z=-2: {eval_jet2(e, [0, 0, -2.0]).value}")
try:
    eval_jet2(parse("z^0.5", coords), [0, 0, -2.0])
except EvalDomainError as exc:
    print(f"  z^0.5 at z=-2 raises: {exc}")

print()
print("== domain errors name the offending subtree ==")
try:
    eval_jet2(parse("1/(x - y) + log(z)", coords), [1.0, 1.0, 2.0])
except EvalDomainError as exc:
    print(f"  {exc}")
