"""One-dimensional characters of GL_r built from |det| and sign(det).

A character ``(m, eps)`` sends a matrix ``A`` to ``|det A|^m * sign(det A)^eps``.
An isomorphism with matrix ``M`` acts on the associated line by
``chi(det M)``; the named constants below already carry the inverse that
turns the frame action into this pushforward, so that for instance the
doubling map acts by 1/2 on ``|dx|``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .symcore import DivisionByZeroError, LogSum, RatExpr


@dataclass(frozen=True)
class Character:
    m: int
    eps: int = 0

    def __post_init__(self):
        object.__setattr__(self, "eps", self.eps % 2)

    def __mul__(self, other: "Character") -> "Character":
        return Character(self.m + other.m, self.eps + other.eps)

    def inverse(self) -> "Character":
        return Character(-self.m, self.eps)

    def __pow__(self, k: int) -> "Character":
        return Character(self.m * k, self.eps * k)

    def is_trivial(self) -> bool:
        return self.m == 0 and self.eps == 0

    def to_json(self) -> dict:
        return {"m": self.m, "eps": self.eps}

    @classmethod
    def from_json(cls, data) -> "Character":
        if isinstance(data, str):
            return NAMED[data.lower()]
        eps = int(data.get("eps", 0))
        if eps not in (0, 1):
            raise ValueError("eps must be 0 or 1")
        return cls(int(data["m"]), eps)


TRIVIAL = Character(0, 0)
DENSITY = Character(-1, 0)
ORIENTATION = Character(0, 1)
LAMBDA_TOP_DUAL = Character(-1, 1)
VOLUME = LAMBDA_TOP_DUAL


def l_density(l: int) -> Character:
    return Character(-l, 0)


NAMED = {
    "trivial": TRIVIAL,
    "density": DENSITY,
    "orientation": ORIENTATION,
    "volume": VOLUME,
    "lambda-top-dual": LAMBDA_TOP_DUAL,
}


def char_mul(a: Character, b: Character) -> Character:
    return a * b


def char_inv(a: Character) -> Character:
    return a.inverse()


@dataclass(frozen=True)
class FormalScalar:
    """A nonzero real scalar ``exp(abs_part) * sign(sign_part)``.

    ``sign_part`` only contributes its pointwise sign.
    """

    abs_part: LogSum
    sign_part: RatExpr

    def __post_init__(self):
        if self.sign_part.is_zero():
            raise DivisionByZeroError("sign part of a formal scalar must be nonzero")

    @classmethod
    def one(cls) -> "FormalScalar":
        return cls(LogSum(), RatExpr.const(1))

    def __mul__(self, other: "FormalScalar") -> "FormalScalar":
        return FormalScalar(self.abs_part + other.abs_part, self.sign_part * other.sign_part)

    def subs(self, mapping) -> "FormalScalar":
        return FormalScalar(self.abs_part.subs(mapping), self.sign_part.subs(mapping))

    def to_json(self) -> dict:
        return {"abs": self.abs_part.to_json(), "sign": str(self.sign_part)}

    def __str__(self):
        return f"exp({self.abs_part}) * sign({self.sign_part})"


def char_apply(chi: Character, det_scalar) -> FormalScalar:
    """Scalar by which a map with determinant ``det_scalar`` acts on the chi-line."""
    det_scalar = RatExpr.coerce(det_scalar)
    if det_scalar.is_zero():
        raise DivisionByZeroError("determinant scalar must be nonzero")
    abs_part = LogSum.ln_abs(det_scalar, chi.m) if chi.m else LogSum()
    sign_part = det_scalar if chi.eps else RatExpr.const(1)
    return FormalScalar(abs_part, sign_part)


# the four canonical isomorphisms between transverse bundles, as character identities
CANONICAL_ISOMORPHISMS = (
    ("D^tr = V^tr (x) o^tr", DENSITY, VOLUME * ORIENTATION),
    ("V^tr = D^tr (x) o^tr", VOLUME, DENSITY * ORIENTATION),
    ("o^tr (x) o^tr = trivial", ORIENTATION * ORIENTATION, TRIVIAL),
    ("o^tr = (o^tr)*", ORIENTATION, ORIENTATION.inverse()),
)
