"""Truncated formal power series with exact rational coefficients.

A series is ``q**offset * sum_k c_k q**(k/grid)`` where ``k >= 0`` runs over
grid indices and only exponents ``k/grid < order`` are known.  The offset is
an arbitrary rational (prefactors such as ``q**(-1/48)`` live there), so the
grid only has to describe the spacing of the power-series part.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Union

from .errors import DomainError, GridError

DEFAULT_GRID = 48

Rational = Union[int, Fraction]


def _frac(x: Rational | str) -> Fraction:
    return Fraction(x)


def _limit(order: Fraction, grid: int) -> int:
    # grid indices k with k/grid < order are exactly those with k < ceil(order*grid)
    return max(0, math.ceil(order * grid))


def _format(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class FormalSeries:
    """Immutable truncated series over the rationals.

    Multiplication truncates to the smaller relative order and adds offsets;
    grids of different operands are merged to their least common multiple.
    """

    __slots__ = ("_offset", "_order", "_grid", "_coeffs")

    def __init__(
        self,
        coefficients: Mapping[Rational, Rational] | None = None,
        *,
        order: Rational,
        offset: Rational = 0,
        grid: int = DEFAULT_GRID,
    ) -> None:
        if not isinstance(grid, int) or grid < 1:
            raise GridError(f"grid denominator must be a positive integer, got {grid!r}")
        order = _frac(order)
        if order < 0:
            raise DomainError(f"order must be >= 0, got {order}")
        coeffs: dict[int, Fraction] = {}
        for exponent, value in (coefficients or {}).items():
            exponent = _frac(exponent)
            k = exponent * grid
            if k.denominator != 1:
                raise GridError(f"exponent {exponent} is not on the grid (1/{grid})Z")
            if exponent < 0:
                raise DomainError(f"relative exponents must be >= 0, got {exponent}")
            value = _frac(value)
            if value and exponent < order:
                coeffs[int(k)] = value
        self._coeffs = coeffs
        self._offset = _frac(offset)
        self._order = order
        self._grid = grid

    @classmethod
    def _raw(cls, coeffs: dict[int, Fraction], order: Fraction, offset: Fraction, grid: int) -> FormalSeries:
        obj = cls.__new__(cls)
        obj._coeffs = {k: v for k, v in coeffs.items() if v}
        obj._order = order
        obj._offset = offset
        obj._grid = grid
        return obj

    @classmethod
    def one(cls, order: Rational, grid: int = DEFAULT_GRID) -> FormalSeries:
        return cls({0: 1}, order=order, grid=grid)

    @classmethod
    def monomial(cls, exponent: Rational, order: Rational, coefficient: Rational = 1,
                 grid: int = DEFAULT_GRID) -> FormalSeries:
        """``coefficient * q**exponent`` with the exponent carried in the offset."""
        return cls({0: coefficient}, order=order, offset=exponent, grid=grid)

    @classmethod
    def from_integer_list(cls, values: Iterable[Rational], *, step: int = 1, order: Rational | None = None,
                          offset: Rational = 0, grid: int = DEFAULT_GRID) -> FormalSeries:
        """Series whose i-th value is the coefficient of ``q**(i/step)``."""
        values = list(values)
        if grid % step:
            raise GridError(f"step 1/{step} is not on the grid (1/{grid})Z")
        if order is None:
            order = Fraction(len(values), step)
        scale = grid // step
        coeffs = {i * scale: _frac(v) for i, v in enumerate(values) if v}
        order = _frac(order)
        limit = _limit(order, grid)
        coeffs = {k: v for k, v in coeffs.items() if k < limit}
        return cls._raw(coeffs, order, _frac(offset), grid)

    # -- accessors -----------------------------------------------------

    @property
    def offset(self) -> Fraction:
        return self._offset

    @property
    def order(self) -> Fraction:
        return self._order

    @property
    def grid(self) -> int:
        return self._grid

    def terms(self) -> list[tuple[Fraction, Fraction]]:
        """Nonzero (relative exponent, coefficient) pairs in increasing exponent order."""
        return [(Fraction(k, self._grid), self._coeffs[k]) for k in sorted(self._coeffs)]

    def __getitem__(self, exponent: Rational) -> Fraction:
        """Coefficient of ``q**(offset + exponent)``."""
        exponent = _frac(exponent)
        if exponent >= self._order:
            raise IndexError(f"exponent {exponent} is beyond the truncation order {self._order}")
        k = exponent * self._grid
        if k.denominator != 1 or k < 0:
            return Fraction(0)
        return self._coeffs.get(int(k), Fraction(0))

    def coefficients(self, count: int | None = None, step: int = 1) -> list[Fraction]:
        """Coefficients of ``q**(offset + i/step)`` for ``i = 0 .. count-1``."""
        if count is None:
            count = _limit(self._order, step)
        return [self[Fraction(i, step)] for i in range(count)]

    def is_one(self) -> bool:
        return self._offset == 0 and self._coeffs == {0: Fraction(1)}

    def is_zero(self) -> bool:
        return not self._coeffs

    def __iter__(self) -> Iterator[tuple[Fraction, Fraction]]:
        return iter(self.terms())

    # -- structural helpers --------------------------------------------

    def regrid(self, grid: int) -> FormalSeries:
        """Same series described on the finer grid (1/grid)Z; ``grid`` must be a multiple."""
        if grid == self._grid:
            return self
        if grid % self._grid:
            raise GridError(f"cannot move from grid 1/{self._grid} to 1/{grid}")
        scale = grid // self._grid
        return FormalSeries._raw({k * scale: v for k, v in self._coeffs.items()},
                                 self._order, self._offset, grid)

    def truncate(self, order: Rational) -> FormalSeries:
        order = min(_frac(order), self._order)
        limit = _limit(order, self._grid)
        return FormalSeries._raw({k: v for k, v in self._coeffs.items() if k < limit},
                                 order, self._offset, self._grid)

    def substitute(self, factor: Rational) -> FormalSeries:
        """The series in ``q**factor`` (factor > 0); offset, exponents and order all scale."""
        factor = _frac(factor)
        if factor <= 0:
            raise DomainError(f"substitution factor must be > 0, got {factor}")
        grid = self._grid
        while any((Fraction(k, self._grid) * factor * grid).denominator != 1 for k in self._coeffs):
            grid *= factor.denominator
        coeffs = {int(Fraction(k, self._grid) * factor * grid): v for k, v in self._coeffs.items()}
        return FormalSeries._raw(coeffs, self._order * factor, self._offset * factor, grid)

    def shift(self, exponent: Rational) -> FormalSeries:
        """Multiply by ``q**exponent`` (the order is relative, so it is unchanged)."""
        return FormalSeries._raw(dict(self._coeffs), self._order, self._offset + _frac(exponent), self._grid)

    def _common(self, other: FormalSeries) -> tuple[FormalSeries, FormalSeries, int]:
        grid = math.lcm(self._grid, other._grid)
        return self.regrid(grid), other.regrid(grid), grid

    # -- ring operations -----------------------------------------------

    def __mul__(self, other: FormalSeries | Rational) -> FormalSeries:
        if isinstance(other, (int, Fraction)):
            c = _frac(other)
            return FormalSeries._raw({k: v * c for k, v in self._coeffs.items()},
                                     self._order, self._offset, self._grid)
        if not isinstance(other, FormalSeries):
            return NotImplemented
        a, b, grid = self._common(other)
        order = min(a._order, b._order)
        limit = _limit(order, grid)
        out: dict[int, Fraction] = {}
        b_items = sorted(b._coeffs.items())
        for ka, va in a._coeffs.items():
            if ka >= limit:
                continue
            for kb, vb in b_items:
                k = ka + kb
                if k >= limit:
                    break
                out[k] = out.get(k, 0) + va * vb
        return FormalSeries._raw(out, order, a._offset + b._offset, grid)

    __rmul__ = __mul__

    def _aligned(self, other: FormalSeries) -> tuple[dict[int, Fraction], dict[int, Fraction], Fraction, Fraction, int]:
        a, b, grid = self._common(other)
        base = min(a._offset, b._offset)
        shifts = []
        for s in (a, b):
            k = (s._offset - base) * grid
            if k.denominator != 1:
                raise GridError("offsets differ by an amount that is off the grid; cannot add")
            shifts.append(int(k))
        order = min(a._order + Fraction(shifts[0], grid), b._order + Fraction(shifts[1], grid))
        da = {k + shifts[0]: v for k, v in a._coeffs.items()}
        db = {k + shifts[1]: v for k, v in b._coeffs.items()}
        return da, db, base, order, grid

    def __add__(self, other: FormalSeries | Rational) -> FormalSeries:
        if isinstance(other, (int, Fraction)):
            other = FormalSeries({0: other}, order=self._order, grid=self._grid)
        if not isinstance(other, FormalSeries):
            return NotImplemented
        da, db, base, order, grid = self._aligned(other)
        limit = _limit(order, grid)
        out = {k: v for k, v in da.items() if k < limit}
        for k, v in db.items():
            if k < limit:
                out[k] = out.get(k, 0) + v
        return FormalSeries._raw(out, order, base, grid)

    __radd__ = __add__

    def __neg__(self) -> FormalSeries:
        return self * -1

    def __sub__(self, other: FormalSeries | Rational) -> FormalSeries:
        return self + (-other)

    def __rsub__(self, other: Rational) -> FormalSeries:
        return (-self) + other

    def inverse(self) -> FormalSeries:
        """Multiplicative inverse; the lowest nonzero term is factored into the offset."""
        if not self._coeffs:
            raise ZeroDivisionError("series has no known nonzero coefficient")
        k0 = min(self._coeffs)
        c0 = self._coeffs[k0]
        rel = {k - k0: v for k, v in self._coeffs.items()}
        step = 0
        for k in rel:
            step = math.gcd(step, k)
        step = step or 1
        order = self._order - Fraction(k0, self._grid)
        n = _limit(order * Fraction(self._grid, step), 1)
        a = sorted((k // step, v) for k, v in rel.items() if k)
        inv_c0 = 1 / c0
        b: list[Fraction] = []
        for i in range(n):
            acc = Fraction(1) if i == 0 else Fraction(0)
            for j, v in a:
                if j > i:
                    break
                acc -= v * b[i - j]
            b.append(acc * inv_c0)
        out = {i * step: v for i, v in enumerate(b) if v}
        return FormalSeries._raw(out, order, -self._offset - Fraction(k0, self._grid), self._grid)

    def __truediv__(self, other: FormalSeries | Rational) -> FormalSeries:
        if isinstance(other, (int, Fraction)):
            return self * (1 / _frac(other))
        if not isinstance(other, FormalSeries):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other: Rational) -> FormalSeries:
        return self.inverse() * other

    def __pow__(self, exponent: int) -> FormalSeries:
        if not isinstance(exponent, int):
            return NotImplemented
        base = self if exponent >= 0 else self.inverse()
        e = abs(exponent)
        result = FormalSeries._raw({0: Fraction(1)}, base._order, Fraction(0), base._grid)
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    # -- comparison, evaluation, serialization -------------------------

    def _canonical(self) -> tuple:
        terms = tuple((Fraction(k, self._grid), v) for k, v in sorted(self._coeffs.items()))
        return (self._offset, self._order, terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FormalSeries):
            return NotImplemented
        return self._canonical() == other._canonical()

    def __hash__(self) -> int:
        return hash(self._canonical())

    def agrees_with(self, other: FormalSeries) -> bool:
        """Equality of the known coefficients up to the smaller order."""
        diff = self - other
        return diff.is_zero()

    def evaluate(self, tau) -> complex:
        """Numeric value at tau (a ModularParameter or complex), powers taken as exp(2 pi i tau x)."""
        t = complex(getattr(tau, "tau", tau))
        if t.imag <= 0:
            raise DomainError("series evaluation needs Im tau > 0")
        two_pi_i_tau = 2j * math.pi * t
        total = 0j
        for k in sorted(self._coeffs, reverse=True):
            total += float(self._coeffs[k]) * cmath.exp(two_pi_i_tau * float(Fraction(k, self._grid)))
        return total * cmath.exp(two_pi_i_tau * float(self._offset))

    def to_json(self) -> dict:
        return {
            "grid_denominator": self._grid,
            "offset": _format(self._offset),
            "order": _format(self._order),
            "terms": [{"exponent": _format(e), "coefficient": _format(c)} for e, c in self.terms()],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> FormalSeries:
        coeffs = {Fraction(t["exponent"]): Fraction(t["coefficient"]) for t in data["terms"]}
        return cls(coeffs, order=Fraction(data["order"]), offset=Fraction(data["offset"]),
                   grid=int(data["grid_denominator"]))

    def __repr__(self) -> str:
        shown = ", ".join(f"{_format(e)}: {_format(c)}" for e, c in self.terms()[:8])
        more = ", ..." if len(self._coeffs) > 8 else ""
        return (f"FormalSeries(offset={_format(self._offset)}, order={_format(self._order)}, "
                f"grid={self._grid}, {{{shown}{more}}})")
