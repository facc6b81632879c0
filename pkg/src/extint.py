# src/extint.py — Extended Integers with Parity-Tagged Minus Infinity
"""
Integer statistics extended by three minus-infinity symbols.

    -inf      : the plain symbol used by crystals (epsilon, phi of T_lambda)
    -inf_ev   : even-tagged symbol used by beta_i when a_{i,tau(i)} = 2
    -inf_odd  : odd-tagged symbol used by beta_i when a_{i,tau(i)} = 2

Statistics are stored as plain Python ints or one of the three singletons.
Adding an integer to a tagged symbol flips the tag by the parity of the
integer. Every symbol is below every integer; -inf is below both tagged
symbols; the two tagged symbols are incomparable.
"""

import logging
from typing import Optional, Union

logger = logging.getLogger(__name__)


class IncomparableError(ValueError):
    """Raised when -inf_ev is ordered against -inf_odd."""


class NegInfinity:
    """
    One of the three minus-infinity symbols.

    Args:
        flavor: None for plain -inf, 0 for -inf_ev, 1 for -inf_odd.
    """

    __slots__ = ('flavor',)

    def __init__(self, flavor: Optional[int]):
        self.flavor = flavor

    def __repr__(self) -> str:
        return {None: '-inf', 0: '-inf_ev', 1: '-inf_odd'}[self.flavor]

    __str__ = __repr__

    def __hash__(self) -> int:
        return hash(('NegInfinity', self.flavor))

    def __eq__(self, other) -> bool:
        return isinstance(other, NegInfinity) and other.flavor == self.flavor

    def __ne__(self, other) -> bool:
        return not self == other

    # ─── arithmetic ───

    def __add__(self, other):
        if isinstance(other, bool) or not isinstance(other, (int, NegInfinity)):
            return NotImplemented
        if isinstance(other, NegInfinity):
            if self.flavor is None and other.flavor is None:
                return self
            raise ValueError(f"cannot add {self!r} and {other!r}")
        if self.flavor is None:
            return self
        return _BY_FLAVOR[(self.flavor + other) % 2]

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, bool) or not isinstance(other, int):
            return NotImplemented
        return self + (-other)

    # ─── ordering ───

    def _rank(self, other) -> int:
        """Return -1, 0, 1 comparing self to other."""
        if isinstance(other, int):
            return -1
        if not isinstance(other, NegInfinity):
            raise TypeError(f"cannot compare {self!r} with {type(other).__name__}")
        if self.flavor == other.flavor:
            return 0
        if self.flavor is None:
            return -1
        if other.flavor is None:
            return 1
        raise IncomparableError(f"{self!r} and {other!r} are incomparable")

    def __lt__(self, other) -> bool:
        return self._rank(other) < 0

    def __le__(self, other) -> bool:
        return self._rank(other) <= 0

    def __gt__(self, other) -> bool:
        return self._rank(other) > 0

    def __ge__(self, other) -> bool:
        return self._rank(other) >= 0


NEG_INF = NegInfinity(None)
NEG_INF_EV = NegInfinity(0)
NEG_INF_ODD = NegInfinity(1)

_BY_FLAVOR = {0: NEG_INF_EV, 1: NEG_INF_ODD}

ExtInt = Union[int, NegInfinity]


def is_finite(x: ExtInt) -> bool:
    return isinstance(x, int)


def parity(x: ExtInt) -> int:
    """
    Residue mod 2 of an integer or of a tagged symbol.

    Raises:
        ValueError: For plain -inf, which carries no parity.
    """
    if isinstance(x, int):
        return x % 2
    if x.flavor is None:
        raise ValueError("-inf has no parity")
    return x.flavor


def neg_inf_with_parity(bit: int) -> NegInfinity:
    return _BY_FLAVOR[bit % 2]


def ext_max(*values: ExtInt) -> ExtInt:
    """max() over extended integers (raises IncomparableError for ev vs odd)."""
    best = values[0]
    for v in values[1:]:
        if v > best:
            best = v
    return best


# ──────────────────────────────────────────────────────────────
# JSON encoding
# ──────────────────────────────────────────────────────────────

_FROM_TEXT = {'-inf': NEG_INF, '-inf_ev': NEG_INF_EV, '-inf_odd': NEG_INF_ODD}


def ext_to_json(x: ExtInt):
    return x if isinstance(x, int) else repr(x)


def ext_from_json(raw) -> ExtInt:
    if isinstance(raw, int) and not isinstance(raw, bool):
        return raw
    if raw in _FROM_TEXT:
        return _FROM_TEXT[raw]
    raise ValueError(f"Not an extended integer: {raw!r}")
