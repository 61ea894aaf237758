import math
from dataclasses import dataclass
from enum import Enum
from typing import Union

import numpy as np

# |q| below this is evaluated as the geometric mean
GEOMETRIC_EPS = 1e-9


class WelfareKind(Enum):
    EGALITARIAN = "egalitarian"  # q = -inf
    POWER = "power"
    NASH = "nash"  # q = 0
    UTILITARIAN = "utilitarian"  # q = 1


@dataclass(frozen=True)
class WelfareParam:
    """
        Exponent q of a Hölder-mean welfare metric, q in [-inf, 1].

        The exact cases q = -inf, 0 and 1 carry their own kind so that no float sentinel
        ever reaches the arithmetic.

        :param kind: which branch of the definition applies
        :param q: the exponent (-inf for the egalitarian case)
    """
    kind: WelfareKind
    q: float

    def __post_init__(self):
        if self.kind is WelfareKind.POWER and not (-math.inf < self.q < 1):
            raise ValueError(f"power welfare needs a finite q < 1, got {self.q}")

    @classmethod
    def of(cls, q: Union[float, int, str, "WelfareParam"]) -> "WelfareParam":
        if isinstance(q, WelfareParam):
            return q
        if isinstance(q, str):
            return cls.parse(q)
        q = float(q)
        if math.isnan(q):
            raise ValueError("q must not be NaN")
        if q > 1:
            raise ValueError(f"q={q} is in the unfair regime q > 1")
        if q == -math.inf:
            return cls(WelfareKind.EGALITARIAN, -math.inf)
        if q == 1:
            return cls(WelfareKind.UTILITARIAN, 1.0)
        if abs(q) < GEOMETRIC_EPS:
            return cls(WelfareKind.NASH, 0.0)
        return cls(WelfareKind.POWER, q)

    @classmethod
    def parse(cls, token: str) -> "WelfareParam":
        """
        Parse a CLI/config token: a finite decimal or the literal `-inf`
        """
        token = token.strip()
        if token.lower() == "-inf":
            return cls(WelfareKind.EGALITARIAN, -math.inf)
        try:
            value = float(token)
        except ValueError:
            raise ValueError(f"q must be a decimal or -inf, got {token!r}") from None
        if not math.isfinite(value):
            raise ValueError(f"q must be a decimal or -inf, got {token!r}")
        return cls.of(value)

    @property
    def is_egalitarian(self) -> bool:
        return self.kind is WelfareKind.EGALITARIAN

    @property
    def is_smooth(self) -> bool:
        return self.kind is not WelfareKind.EGALITARIAN

    def token(self) -> str:
        if self.is_egalitarian:
            return "-inf"
        return repr(float(self.q))

    def __str__(self):
        return self.token()


EGALITARIAN = WelfareParam(WelfareKind.EGALITARIAN, -math.inf)
NASH = WelfareParam(WelfareKind.NASH, 0.0)
UTILITARIAN = WelfareParam(WelfareKind.UTILITARIAN, 1.0)


def as_utility_vector(b) -> np.ndarray:
    b = np.asarray(b, dtype=np.float64)
    if b.ndim != 1 or b.size == 0:
        raise ValueError(f"utility vector must be a non-empty 1-d array, got shape {b.shape}")
    if np.any(b < 0) or not np.all(np.isfinite(b)):
        raise ValueError("utility vector must be finite and nonnegative")
    return b


def evaluate(param, b) -> float:
    """
    Hölder-mean welfare w_q(B), normalized so that w_q(u * 1) = u.

    :param param: WelfareParam (or anything WelfareParam.of accepts)
    :param b: nonnegative utility vector
    :return: the welfare value
    """
    param = WelfareParam.of(param)
    b = as_utility_vector(b)

    if param.kind is WelfareKind.EGALITARIAN:
        return float(b.min())
    if param.kind is WelfareKind.UTILITARIAN:
        return float(b.mean())

    lo = b.min()
    if param.kind is WelfareKind.NASH:
        if lo == 0:
            return 0.0
        return float(math.exp(np.log(b).mean()))

    q = param.q
    if q < 0:
        if lo == 0:
            return 0.0
        # (B/min)^q <= 1 for q < 0
        return float(lo * np.mean((b / lo) ** q) ** (1 / q))

    hi = b.max()
    if hi == 0:
        return 0.0
    return float(hi * np.mean((b / hi) ** q) ** (1 / q))


def gradient(param, b) -> np.ndarray:
    """
    Gradient of w_q at B for finite q.

    :param param: finite q in (-inf, 1]
    :param b: utility vector, strictly positive unless q = 1
    :return: n-vector of partial derivatives (all nonnegative)
    """
    param = WelfareParam.of(param)
    b = as_utility_vector(b)
    n = b.size

    if param.is_egalitarian:
        raise ValueError("the egalitarian welfare is not differentiable, use the LP solver")
    if param.kind is WelfareKind.UTILITARIAN:
        return np.full(n, 1 / n)
    if np.any(b <= 0):
        raise ValueError(f"gradient of w_q for q={param.q} needs strictly positive utilities")

    w = evaluate(param, b)
    if param.kind is WelfareKind.NASH:
        return w / (n * b)
    return (b / w) ** (param.q - 1) / n
