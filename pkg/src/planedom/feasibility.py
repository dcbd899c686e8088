"""Integer feasibility of the residual secant configurations.

A hypothetical point set of size q+k-1 whose long secants all have k-1 or k
points splits into at most two point types (alpha, beta) = number of k- and
(k-1)-secants through the point.  Double counting gives the number N of
k-secants and N' of (k-1)-secants; the dual standard equations over the
M = q^2-k+2 exterior points give sum p_i and sum C(p_i, 2); if every exterior
point sits on one or two long secants then

    F(q, k, beta0, b) = 2 sum C(p_i, 2) - 2 sum p_i + 2M

must vanish.  Everything here is exact ``Fraction``/``int`` arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction

from planedom.errors import NoBaseType, NotApplicable


def _choose2(x) -> Fraction:
    x = Fraction(x)
    return x * (x - 1) / 2


def _as_json(x):
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else str(x)
    return x


def k_values(q: int, all_k: bool = False) -> list[int]:
    """Secant sizes k with sqrt(q) < k <= sqrt(q)+1, i.e. floor(sqrt q)+1.

    ``all_k`` also admits the boundary value k = sqrt(q) for square q.
    """
    r = math.isqrt(q)
    ks = [r + 1]
    if all_k and r * r == q:
        ks.insert(0, r)
    return [k for k in ks if k >= 3]


def beta_max(q: int, k: int) -> Fraction:
    return Fraction(q + k - 2, k - 2)


def alpha_for(q: int, k: int, beta0: int) -> Fraction:
    """alpha with alpha(k-1) + beta(k-2) + 1 = q+k-1, possibly fractional."""
    return Fraction(q + k - 2 - beta0 * (k - 2), k - 1)


def point_types(q: int, k: int) -> list[tuple[int, int]]:
    """All nonnegative integer point types (alpha, beta), by increasing beta."""
    if k < 3:
        raise ValueError(f"k must be at least 3, got {k}")
    out = []
    for beta in range(0, int(beta_max(q, k)) + 1):
        alpha = alpha_for(q, k, beta)
        if alpha.denominator == 1 and alpha >= 0:
            out.append((int(alpha), beta))
    return out


@dataclass(frozen=True)
class Counts:
    alpha0: Fraction
    a: int
    N: Fraction
    N_prime: Fraction
    M: int
    sum_p: Fraction
    sum_choose2: Fraction


def counts(q: int, k: int, beta0: int, b: int) -> Counts:
    """Secant counts N, N', exterior count M and the two dual standard sums.

    The base type alpha0 is allowed to be fractional so F can be evaluated on
    the continuous parameter range; feasibility checks integrality separately.
    """
    if k < 3:
        raise ValueError(f"k must be at least 3, got {k}")
    if beta0 < 0 or beta0 > beta_max(q, k):
        raise NoBaseType(f"beta0={beta0} outside [0, {beta_max(q, k)}] for q={q}, k={k}")
    alpha0 = alpha_for(q, k, beta0)
    if alpha0 < 0:
        raise NoBaseType(f"no nonnegative alpha0 for q={q}, k={k}, beta0={beta0}")
    a = q + k - 1 - b
    N = (a * alpha0 + b * (alpha0 - k + 2)) / k
    N_prime = Fraction(a * beta0 + b * (beta0 + k - 1), k - 1)
    M = q * q - k + 2
    sum_p = N * (q + 1 - k) + N_prime * (q + 2 - k)
    sum_choose2 = _choose2(N + N_prime) - a * _choose2(alpha0 + beta0) - b * _choose2(alpha0 + beta0 + 1)
    return Counts(alpha0, a, N, N_prime, M, sum_p, sum_choose2)


def F(q: int, k: int, beta0: int, b: int) -> Fraction:
    c = counts(q, k, beta0, b)
    value = 2 * c.sum_choose2 - 2 * c.sum_p + 2 * c.M
    return int(value) if value.denominator == 1 else value


@dataclass(frozen=True)
class FeasibilityRecord:
    q: int
    k: int
    beta0: int
    b: int
    alpha0: Fraction
    a: int
    N: Fraction
    N_prime: Fraction
    M: int
    sum_p: Fraction
    sum_choose2: Fraction
    F: Fraction
    feasible: bool
    case_label: str | None = None

    def to_dict(self) -> dict:
        return {key: _as_json(val) for key, val in asdict(self).items()}


def _is_nonneg_int(x) -> bool:
    return Fraction(x).denominator == 1 and x >= 0


def evaluate(q: int, k: int, beta0: int, b: int) -> FeasibilityRecord:
    c = counts(q, k, beta0, b)
    value = 2 * c.sum_choose2 - 2 * c.sum_p + 2 * c.M
    feasible = (
        value == 0
        and _is_nonneg_int(c.N)
        and _is_nonneg_int(c.N_prime)
        and 0 <= b <= q + k - 1
        and _is_nonneg_int(c.alpha0)
        and (b == 0 or c.alpha0 - (k - 2) >= 0)
    )
    rec = FeasibilityRecord(
        q, k, beta0, b, c.alpha0, c.a, c.N, c.N_prime, c.M, c.sum_p, c.sum_choose2, value, feasible
    )
    if feasible:
        rec = FeasibilityRecord(**{**rec.__dict__, "case_label": case_classify(rec)})
    return rec


# (alpha0 - k, beta0, q as a function of k, residue r with k | 2b - r, N' - b)
_CASES = {
    "I.a": (-1, 1, lambda k: (k - 1) ** 2, 0, lambda k: k),
    "I.b": (0, 1, lambda k: k * (k - 1), 0, lambda k: k + 1),
    "I.c": (1, 1, lambda k: k * k - 1, 2, lambda k: k + 2),
    "II.a": (0, 0, lambda k: k * k - 2 * k + 2, 0, lambda k: 0),
    "II.b": (1, 0, lambda k: k * k - k + 1, 2, lambda k: 0),
}


def case_classify(record: FeasibilityRecord) -> str | None:
    """Label a record with the divisibility case it falls in, if any."""
    q, k, b = record.q, record.k, record.b
    for label, (da, beta0, qk, r, extra) in _CASES.items():
        if (
            record.alpha0 == k + da
            and record.beta0 == beta0
            and q == qk(k)
            and (2 * b - r) % k == 0
            and record.N_prime == b + extra(k)
        ):
            return label
    return None


def combinatorial_exclusion(record: FeasibilityRecord) -> bool:
    """True when two second-type points would need more (k-1)-secants than N'."""
    label = record.case_label or case_classify(record)
    if label not in ("I.a", "II.a") or record.b < 2:
        raise NotApplicable(f"exclusion needs a case I.a/II.a record with b >= 2 (got {label}, b={record.b})")
    return 2 * (record.k - 1) - 1 > record.N_prime


def scan(q_min: int, q_max: int, all_k: bool = False) -> list[FeasibilityRecord]:
    """Every integer-feasible (q, k, beta0, b) for q_min <= q <= q_max, in order."""
    if not 4 <= q_min <= q_max <= 200:
        raise ValueError(f"scan range must lie within [4, 200], got [{q_min}, {q_max}]")
    found = []
    for q in range(q_min, q_max + 1):
        for k in k_values(q, all_k):
            for beta0 in range(0, int(beta_max(q, k)) + 1):
                alpha0 = alpha_for(q, k, beta0)
                if alpha0.denominator != 1 or alpha0 < 0:
                    continue
                for b in range(0, q + k):
                    rec = evaluate(q, k, beta0, b)
                    if rec.feasible:
                        found.append(rec)
    return found
