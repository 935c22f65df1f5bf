"""Curvature on coordinate charts: three classical pictures.

The hyperbolic plane (scalar curvature -2), the stereographic sphere
(+2), and the bundled 3-dimensional chart whose orthonormal frame
e1 = z^2 d_x, e2 = z^2 d_y, e3 = d_z gives scalar curvature -32/z^2.

Run:  python demos/02_curvature_tour.py
"""

import numpy as np

from yamabe import (
    curvature_at,
    frame_components_at,
    lie_bracket_at,
    load_zoo,
    sample_points,
)

print("== constant-curvature checks ==")
for name, expected in [("hyperbolic2", -2.0), ("sphere2", 2.0)]:
    config = load_zoo(name)
    pts = sample_points(config, seed=1, count=4)
    scalars = [curvature_at(config.metric, p).scalar for p in pts]
    print(f"  {name:12s} scalar curvature at 4 points: "
          + ", ".join(f"{s:+.12f}" for s in scalars)
          + f"   (expected {expected:+.1f})")

print()
print("== the bundled 3d example ==")
config = load_zoo("paper_sec5")
frame = config.frame
p = np.array([0.7, -1.2, 2.0])
z = p[2]
curv = curvature_at(config.metric, p)
print(f"  at z = {z}: scalar curvature = {curv.scalar:.12f} "
      f"(closed form -32/z^2 = {-32 / z**2:.12f})")

e = frame.matrix_at(p)
ricci_frame = e.T @ curv.ricci @ e
print(f"  frame Ricci diagonal: {np.diag(ricci_frame)}")
print(f"  closed form:          [{-10/z**2} {-10/z**2} {-12/z**2}]")

print()
print("  frame curvature values (component vectors in the frame):")
for (a, b, c), label in [((0, 1, 1), "R(e1,e2)e2"), ((0, 2, 2), "R(e1,e3)e3"),
                         ((0, 1, 2), "R(e1,e2)e3")]:
    v = np.einsum("lkij,k,i,j->l", curv.riemann, e[:, c], e[:, a], e[:, b])
    print(f"    {label} = {frame_components_at(frame, v, p)}")
print(f"    closed forms: -4/z^2 = {-4/z**2}, -6/z^2 = {-6/z**2}, and zero")

print()
print("== Lie brackets of the frame ==")
e1, e2, e3 = frame.vectors
out = lie_bracket_at(e1, e3, p)
print(f"  [e1, e3] at z={z}: coordinate components {out}")
print(f"  in the frame: {frame_components_at(frame, out, p)} "
      f"(closed form -(2/z) e1 with 2/z = {2/z})")
out = lie_bracket_at(e1, e2, p)
print(f"  [e1, e2] = {out}")
