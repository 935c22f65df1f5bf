"""Built-in manifold configurations.

Each entry is a complete config text in the same INI format accepted by
:func:`yamabe.config.load_config`, so the zoo doubles as format
documentation. Sampling boxes avoid each chart's singular locus and keep
the bundled vector fields nonzero.
"""

from __future__ import annotations

__all__ = ["ZOO_NAMES", "zoo_config_text"]


def _euclidean(names: tuple[str, ...]) -> str:
    coord_list = ", ".join(names)
    metric = "\n".join(f"{c}.{c} = 1" for c in names)
    position = "\n".join(f"{c} = {c}" for c in names)
    constant = "\n".join(f"{c} = 1" for c in names)
    boxes = "\n".join(f"box.{c} = 0.5, 2.5" for c in names)
    text = f"""\
[chart]
coordinates = {coord_list}

[metric]
{metric}

[field position]
{position}

[field constant]
{constant}

[oneform pi]
{names[-1]} = 1

[sampling]
{boxes}
count = 12
seed = 42

[soliton]
field = position
kind = conformal
connection = lc
pi = pi
p = 0
"""
    return text


_EUCLIDEAN3_EXTRA = """\
[field exp_position]
x = exp(x)*x
y = exp(x)*y
z = exp(x)*z

[field rotation]
x = -y
y = x
z = 0
"""

_HYPERBOLIC2 = """\
# upper half-plane, constant curvature -1
[chart]
coordinates = x, y
exclusion = y

[metric]
x.x = 1/y^2
y.y = 1/y^2

[field scaling]
y = y

[field position]
x = x
y = y

[oneform pi]
y = 1

[structure]
x.y = -1
y.x = 1

[sampling]
box.x = -2, 2
box.y = 0.5, 3
count = 12
seed = 42

[soliton]
field = scaling
kind = conformal
connection = lc
pi = pi
p = 0
"""

_SPHERE2 = """\
# stereographic chart of the unit sphere, constant curvature +1
[chart]
coordinates = x, y

[metric]
x.x = 4/(1 + x^2 + y^2)^2
y.y = 4/(1 + x^2 + y^2)^2

[field position]
x = x
y = y

[oneform pi]
x = 1

[structure]
x.y = -1
y.x = 1

[sampling]
box.x = 0.3, 1.8
box.y = 0.3, 1.8
count = 12
seed = 42

[soliton]
field = position
kind = star
connection = lc
p = 0
"""

_PAPER_SEC5 = """\
# three-dimensional chart with z != 0; the orthonormal frame below has
# e1 = z^2 d_x, e2 = z^2 d_y, e3 = d_z, so the coordinate metric is
# diag(z^-4, z^-4, 1)
[chart]
coordinates = x, y, z
exclusion = z

[metric]
x.x = z^-4
y.y = z^-4
z.z = 1

[frame e1]
x = z^2

[frame e2]
y = z^2

[frame e3]
z = 1

# Y, X, W have constant frame coefficients (1,2,3), (1,1,1), (7,1,1);
# chosen by direct search over small positive integers so that
#   g(X,W) = 9 != 0,
#   (a1*a2 + b1*b2)/c1 + c1*(b2/b1 - a2/a1 - 1) = 3 != 0,
#   3*c1*g(Y,W) + 3*c3*g(X,Y) - 2*c2*g(X,W) = 36 + 18 - 54 = 0 exactly.
[field Y]
x = z^2
y = 2*z^2
z = 3

[field X]
x = z^2
y = z^2
z = 1

[field W]
x = 7*z^2
y = z^2
z = 1

# the coordinate field d_z is genuinely torse-forming on this chart
[field vertical]
z = 1

[oneform pi]
z = 1

[sampling]
box.x = -2, 2
box.y = -2, 2
box.z = 0.5, 3
count = 20
seed = 42

[soliton]
field = Y
kind = conformal
connection = lc
pi = pi
p = 0
"""

_FLAT_R2_COMPLEX = """\
# flat plane carrying the standard rotation structure tensor
[chart]
coordinates = x, y

[metric]
x.x = 1
y.y = 1

[field position]
x = x
y = y

[field constant]
x = 1
y = 1

[oneform pi]
y = 1

[structure]
x.y = -1
y.x = 1

[sampling]
box.x = 0.5, 2.5
box.y = 0.5, 2.5
count = 12
seed = 42

[soliton]
field = position
kind = star
connection = lc
p = 0
"""


def _euclidean3() -> str:
    return _euclidean(("x", "y", "z")) + "\n" + _EUCLIDEAN3_EXTRA


_ZOO = {
    "euclidean2": lambda: _euclidean(("x", "y")),
    "euclidean3": _euclidean3,
    "euclidean4": lambda: _euclidean(("x", "y", "z", "w")),
    "hyperbolic2": lambda: _HYPERBOLIC2,
    "sphere2": lambda: _SPHERE2,
    "paper_sec5": lambda: _PAPER_SEC5,
    "flat_r2_complex": lambda: _FLAT_R2_COMPLEX,
}

ZOO_NAMES = tuple(sorted(_ZOO))


def zoo_config_text(name: str) -> str:
    try:
        return _ZOO[name]()
    except KeyError:
        raise KeyError(f"unknown zoo manifold {name!r}; available: {', '.join(ZOO_NAMES)}") from None
