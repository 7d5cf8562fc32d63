"""Linear finite-difference formulas on the periodic grid.

Scalar stencils live on the half-index lattice so the bracket builders
compose by plain convolution; offsets are integers counting half cells.
Only stencils whose offsets are all even (whole cells) can be applied to
a field or exported. A stencil carries a formal unit monomial dx^px dy^py
so coefficient maps stay exact rationals independent of the grid.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .grid import as_fraction


def _clean(coeffs):
    return {off: c for off, c in coeffs.items() if c != 0}


class ScalarStencil:
    """Finite map half-offset -> Fraction, times dx^px dy^py."""

    __slots__ = ("coeffs", "units")

    def __init__(self, coeffs, units=(0, 0)):
        self.coeffs = _clean({(int(a), int(b)): as_fraction(c) for (a, b), c in coeffs.items()})
        self.units = (int(units[0]), int(units[1]))

    def __repr__(self):
        return "ScalarStencil(%r, units=%r)" % (self.coeffs, self.units)

    def __eq__(self, other):
        if not isinstance(other, ScalarStencil):
            return NotImplemented
        if not self.coeffs and not other.coeffs:
            return True
        return self.coeffs == other.coeffs and self.units == other.units

    def __hash__(self):
        return hash((frozenset(self.coeffs.items()), self.units))

    def is_zero(self):
        return not self.coeffs

    def is_whole_cell(self):
        return all(a % 2 == 0 and b % 2 == 0 for a, b in self.coeffs)

    @property
    def cell_radius(self):
        if not self.coeffs:
            return 0
        m = max(max(abs(a), abs(b)) for a, b in self.coeffs)
        return (m + 1) // 2

    def cell_offsets(self):
        """Coefficient map in whole-cell offsets; only for whole-cell stencils."""
        if not self.is_whole_cell():
            raise ValueError("stencil sits on half-index positions")
        return {(a // 2, b // 2): c for (a, b), c in self.coeffs.items()}

    def __neg__(self):
        return ScalarStencil({off: -c for off, c in self.coeffs.items()}, self.units)

    def __add__(self, other):
        if not isinstance(other, ScalarStencil):
            return NotImplemented
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.units != other.units:
            raise ValueError("cannot add stencils with units %r and %r"
                             % (self.units, other.units))
        out = dict(self.coeffs)
        for off, c in other.coeffs.items():
            out[off] = out.get(off, Fraction(0)) + c
        return ScalarStencil(out, self.units)

    def __sub__(self, other):
        return self + (-other)

    def scaled(self, s):
        s = as_fraction(s)
        return ScalarStencil({off: c * s for off, c in self.coeffs.items()}, self.units)

    def with_units(self, px, py):
        return ScalarStencil(self.coeffs, (self.units[0] + px, self.units[1] + py))

    def compose(self, other):
        """Apply other first, then self; convolution of coefficient maps."""
        out = {}
        for (a1, b1), c1 in self.coeffs.items():
            for (a2, b2), c2 in other.coeffs.items():
                key = (a1 + a2, b1 + b2)
                out[key] = out.get(key, Fraction(0)) + c1 * c2
        return ScalarStencil(out, (self.units[0] + other.units[0],
                                   self.units[1] + other.units[1]))

    def weights(self, grid):
        """Whole-cell offsets with float weights, units bound to the grid."""
        unit = grid.dx_exact ** self.units[0] * grid.dy_exact ** self.units[1]
        return {off: float(c * unit) for off, c in self.cell_offsets().items()}

    def apply(self, arr, grid):
        arr = np.asarray(arr, dtype=float)
        if arr.shape != (grid.nx, grid.ny):
            raise ValueError("field shape %s does not match grid" % (arr.shape,))
        r = self.cell_radius
        if 2 * r + 1 > min(grid.nx, grid.ny):
            raise ValueError("grid too small for stencil radius %d" % r)
        out = np.zeros_like(arr)
        for (sx, sy), w in self.weights(grid).items():
            out += w * np.roll(arr, (-sx, -sy), axis=(0, 1))
        return out

    def to_symbol(self):
        from .laurent import LaurentPoly
        terms = {}
        px, py = self.units
        for (a, b), c in self.cell_offsets().items():
            terms[(a, b, px, py)] = c
        return LaurentPoly(terms)

    def to_json_dict(self):
        cells = self.cell_offsets()
        entries = [{"sx": sx, "sy": sy, "value": rational_string(c)}
                   for (sx, sy), c in sorted(cells.items())]
        return {"radius": self.cell_radius,
                "units": {"dx": self.units[0], "dy": self.units[1]},
                "entries": entries}


def rational_string(fr):
    """Exact decimal string when the denominator is 2^a 5^b, else 'num/den'."""
    fr = as_fraction(fr)
    den = fr.denominator
    two = five = 0
    while den % 2 == 0:
        den //= 2
        two += 1
    while den % 5 == 0:
        den //= 5
        five += 1
    if den != 1:
        return "%d/%d" % (fr.numerator, fr.denominator)
    shift = max(two, five)
    scaled = fr.numerator * 10 ** shift // fr.denominator
    if shift == 0:
        return "%d" % scaled
    s = "%0*d" % (shift + 1, abs(scaled))
    out = s[:-shift] + "." + s[-shift:]
    return "-" + out if scaled < 0 else out


def identity_stencil():
    return ScalarStencil({(0, 0): 1})


def zero_stencil():
    return ScalarStencil({})


def _axis_pair(axis, value_plus, value_minus):
    if axis in (0, "x"):
        return {(1, 0): value_plus, (-1, 0): value_minus}
    if axis in (1, "y"):
        return {(0, 1): value_plus, (0, -1): value_minus}
    raise ValueError("axis must be 0/'x' or 1/'y'")


def diff_half(axis):
    """[q]_{i+-1/2}: difference of the two neighbors half a cell away."""
    return ScalarStencil(_axis_pair(axis, 1, -1))


def sum_half(axis):
    """{q}_{i+-1/2}: sum of the two neighbors half a cell away."""
    return ScalarStencil(_axis_pair(axis, 1, 1))


def central_bracket(axis):
    """[q]_{i+-1}: q_{+1} - q_{-1}."""
    return diff_half(axis).compose(sum_half(axis))


def second_bracket(axis):
    """[[q]]_{i+-1/2}: q_{+1} - 2 q + q_{-1}."""
    return diff_half(axis).compose(diff_half(axis))


def smooth_bracket(axis):
    """{{q}}_{i+-1/2}: q_{+1} + 2 q + q_{-1}."""
    return sum_half(axis).compose(sum_half(axis))


@dataclass(frozen=True)
class VecStencilRow:
    """Row operator (bu, bv) acting on (u, v) and returning a scalar per cell."""

    bu: ScalarStencil
    bv: ScalarStencil

    def apply(self, u, v, grid):
        return self.bu.apply(u, grid) + self.bv.apply(v, grid)

    def apply_fields(self, field):
        return self.apply(field.u, field.v, field.grid)

    @property
    def cell_radius(self):
        return max(self.bu.cell_radius, self.bv.cell_radius)

    def scaled(self, s):
        return VecStencilRow(self.bu.scaled(s), self.bv.scaled(s))

    def __add__(self, other):
        return VecStencilRow(self.bu + other.bu, self.bv + other.bv)

    def to_symbol(self):
        from .laurent import LaurentRow
        return LaurentRow(self.bu.to_symbol(), self.bv.to_symbol())

    def to_json_dict(self):
        return {"bu": self.bu.to_json_dict(), "bv": self.bv.to_json_dict()}


def central_div():
    """[u]_{i+-1}/(2dx) + [v]_{j+-1}/(2dy)."""
    bu = central_bracket("x").scaled(Fraction(1, 2)).with_units(-1, 0)
    bv = central_bracket("y").scaled(Fraction(1, 2)).with_units(0, -1)
    return VecStencilRow(bu, bv)


def averaged_div():
    """{{[u]_{i+-1}}}_{j+-1/2}/(8dx) + [{{v}}_{i+-1/2}]_{j+-1}/(8dy)."""
    bu = smooth_bracket("y").compose(central_bracket("x")).scaled(Fraction(1, 8)).with_units(-1, 0)
    bv = smooth_bracket("x").compose(central_bracket("y")).scaled(Fraction(1, 8)).with_units(0, -1)
    return VecStencilRow(bu, bv)


def dimsplit_div(a3, c):
    """[u]_{i+-1}/(2dx) - (a3/c^2)[[u]]_{i+-1/2}/(2dx), plus the y mirror on v."""
    w = as_fraction(a3) / as_fraction(c) ** 2
    bu = (central_bracket("x") - second_bracket("x").scaled(w)).scaled(Fraction(1, 2)).with_units(-1, 0)
    bv = (central_bracket("y") - second_bracket("y").scaled(w)).scaled(Fraction(1, 2)).with_units(0, -1)
    return VecStencilRow(bu, bv)


def consistent_diffusion(c1, c2):
    """(c1/4)({{[[u]]_{i+-1/2}}}_{j+-1/2}/dx + [[v]_{i+-1}]_{j+-1}/dy)
    + (c2/4)([[u]_{i+-1}]_{j+-1}/dx + [[{{v}}_{i+-1/2}]]_{j+-1/2}/dy)."""
    c1 = as_fraction(c1)
    c2 = as_fraction(c2)
    qx_py = smooth_bracket("y").compose(second_bracket("x"))
    sx_sy = central_bracket("y").compose(central_bracket("x"))
    qy_px = smooth_bracket("x").compose(second_bracket("y"))
    bu = (qx_py.scaled(c1 / 4) + sx_sy.scaled(c2 / 4)).with_units(-1, 0)
    bv = (sx_sy.scaled(c1 / 4) + qy_px.scaled(c2 / 4)).with_units(0, -1)
    return VecStencilRow(bu, bv)


def curl_of(div_row):
    """Row for the substitution (u, v) -> (v, -u): bu(u)+bv(v) becomes -bv(u)+bu(v)."""
    return VecStencilRow(-div_row.bv, div_row.bu)


def central_curl():
    return curl_of(central_div())


def averaged_curl():
    return curl_of(averaged_div())


def dimsplit_vorticity(a3, c):
    return curl_of(dimsplit_div(a3, c))


class MatrixStencil:
    """Finite map cell offset -> 3x3 matrix alpha_S for one semi-discrete scheme.

    Coefficients absorb the 1/dx factors (units 1/time), so the stencil is
    bound to a grid. Exact Fraction entries are kept alongside cached float
    arrays; the floats are single roundings of the exact values.
    """

    def __init__(self, grid):
        self.grid = grid
        self.exact = {}
        self._floats = None

    def add_entry(self, row, col, offset, value):
        self._floats = None
        mat = self.exact.setdefault(tuple(offset), [[Fraction(0)] * 3 for _ in range(3)])
        mat[row][col] += as_fraction(value)

    def add_block(self, row, col, st, scale=1):
        """Fold scale * (scalar stencil) into entry (row, col), binding units."""
        scale = as_fraction(scale)
        unit = self.grid.dx_exact ** st.units[0] * self.grid.dy_exact ** st.units[1]
        for off, c in st.cell_offsets().items():
            self.add_entry(row, col, off, c * unit * scale)

    def add_matrix(self, offset, mat):
        for r in range(3):
            for c in range(3):
                if mat[r][c] != 0:
                    self.add_entry(r, c, offset, mat[r][c])

    def _prune(self):
        dead = [off for off, m in self.exact.items()
                if all(m[r][c] == 0 for r in range(3) for c in range(3))]
        for off in dead:
            del self.exact[off]

    @property
    def radius(self):
        self._prune()
        if not self.exact:
            return 0
        return max(max(abs(sx), abs(sy)) for sx, sy in self.exact)

    def float_blocks(self):
        if self._floats is None:
            self._prune()
            self._floats = {off: np.array([[float(x) for x in r] for r in m])
                            for off, m in sorted(self.exact.items())}
        return self._floats

    def apply_sum(self, q):
        """sum_S alpha_S q_{I+S} for q of shape (3, nx, ny)."""
        nx, ny = self.grid.nx, self.grid.ny
        if 2 * self.radius + 1 > min(nx, ny):
            raise ValueError("grid too small for stencil radius %d" % self.radius)
        out = np.zeros_like(q)
        for (sx, sy), mat in self.float_blocks().items():
            shifted = np.roll(q, (-sx, -sy), axis=(1, 2))
            out += (mat @ shifted.reshape(3, -1)).reshape(q.shape)
        return out

    def symbol(self, thx, thy):
        """sum_S alpha_S tx^sx ty^sy at tx = exp(i thx); the evolution matrix is -i times this."""
        out = np.zeros((3, 3), dtype=complex)
        for (sx, sy), mat in self.float_blocks().items():
            out += mat * np.exp(1j * (sx * thx + sy * thy))
        return out

    def exact_symbol(self):
        """3x3 nested list of LaurentPoly in (tx, ty); grid units already absorbed."""
        from .laurent import LaurentPoly
        self._prune()
        rows = [[dict() for _ in range(3)] for _ in range(3)]
        for (sx, sy), mat in self.exact.items():
            for r in range(3):
                for c in range(3):
                    if mat[r][c] != 0:
                        rows[r][c][(sx, sy, 0, 0)] = mat[r][c]
        return [[LaurentPoly(rows[r][c]) for c in range(3)] for r in range(3)]

    def to_json_dict(self):
        self._prune()
        entries = []
        for (sx, sy), mat in sorted(self.exact.items()):
            entries.append({"sx": sx, "sy": sy,
                            "matrix": [[rational_string(mat[r][c]) for c in range(3)]
                                       for r in range(3)]})
        return {"radius": self.radius, "entries": entries}
