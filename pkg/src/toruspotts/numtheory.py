"""Number theory and eigenvalue-amplitude formulas.

Levels, classes and irreps
--------------------------
At level l the admissible relabelings of the l marked blocks form the cyclic
group generated by the full cycle E = (1 2 ... l).  The power E**a splits
into d entangled cycles of equal length l/d where d = gcd(a, l), so the
conjugacy classes (taken inside the full symmetric group) are labeled by the
divisors d of l, written (d, n1) with n1 = l/d.  The group has l
one-dimensional irreps D_k (k = 1..l, k = l the identity rep) with character
exp(-2*pi*i*k*a/l) on E**a.

Amplitudes
----------
All amplitude-level quantities are exact polynomials in Q.  The two
independent routes implemented here are

* ``sector_amplitude``: the character route, a divisor sum of cycle-class
  weights against integer class character sums, and
* ``amplitude_closed_form``: the Moebius/totient closed form built from
  Chebyshev-style loop weights.

They agree polynomial-for-polynomial once the cross-topology term of the
closed form carries weight (Q-1) per class element rather than twice that;
``doubled_cross_term=True`` reproduces the doubled variant so the mismatch
can be exhibited explicitly.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import InternalCheckError
from .exact import PolyQ


@dataclass(frozen=True)
class ClassLabel:
    """Conjugacy class of cyclic relabelings: d cycles of length n1."""

    d: int
    n1: int

    def __post_init__(self) -> None:
        if self.d < 1 or self.n1 < 1:
            raise ValueError("class label needs positive cycle data")

    @property
    def level(self) -> int:
        return self.d * self.n1


@dataclass(frozen=True)
class IrrepLabel:
    """Irrep D_k of the cyclic group at level l; k = l is the identity rep."""

    l: int
    k: int

    def __post_init__(self) -> None:
        if not 1 <= self.k <= self.l:
            raise ValueError(f"irrep index {self.k} outside 1..{self.l}")


# ---------------------------------------------------------------------------
# classical arithmetic functions


def divisors(n: int) -> tuple[int, ...]:
    """All positive divisors of n, ascending."""
    if n < 1:
        raise ValueError("divisors() needs n >= 1")
    small: list[int] = []
    large: list[int] = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return tuple(small + large[::-1])


@lru_cache(maxsize=None)
def _factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization by trial division, (prime, multiplicity) pairs."""
    out: list[tuple[int, int]] = []
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            k = 0
            while m % p == 0:
                m //= p
                k += 1
            out.append((p, k))
        p += 1 if p == 2 else 2
    if m > 1:
        out.append((m, 1))
    return tuple(out)


def mobius(n: int) -> int:
    """Moebius function: parity of the prime count on squarefree n, else 0."""
    if n < 1:
        raise ValueError("mobius() needs n >= 1")
    if n == 1:
        return 1
    factors = _factorize(n)
    if any(k > 1 for _, k in factors):
        return 0
    return -1 if len(factors) % 2 else 1


def totient(n: int) -> int:
    """Euler totient: count of 1 <= m <= n coprime to n."""
    if n < 1:
        raise ValueError("totient() needs n >= 1")
    out = n
    for p, _ in _factorize(n):
        out -= out // p
    return out


def class_members(l: int, d: int) -> tuple[int, ...]:
    """Exponents a in 1..l with gcd(a, l) = d, ascending.

    E**a for these a make up the class (d, l/d); there are totient(l/d)
    of them, and the sets for all divisors d partition 1..l.
    """
    if l < 1:
        raise ValueError("class_members() needs l >= 1")
    if d < 1 or l % d:
        raise ValueError(f"{d} does not divide {l}")
    n1 = l // d
    return tuple(d * t for t in range(1, n1 + 1) if math.gcd(t, n1) == 1)


def class_character_sum(l: int, d: int, k: int) -> int:
    """Sum of exp(2*pi*i*k*a/l) over the class exponents a with gcd(a,l)=d.

    Always a rational integer; computed by the Moebius/totient closed form
    (``class_character_sum_numeric`` is the direct complex sum, kept as an
    independent self-check).  Symmetric under conjugation, so it equals the
    same sum with k replaced by -k.
    """
    if not 1 <= k <= l:
        raise ValueError(f"irrep index {k} outside 1..{l}")
    if d < 1 or l % d:
        raise ValueError(f"{d} does not divide {l}")
    m = l // math.gcd(k, l)
    c = m // math.gcd(m, d)
    value = Fraction(mobius(c) * totient(l // d), totient(c))
    if value.denominator != 1:
        raise InternalCheckError(
            f"class character sum not integral at (l={l}, d={d}, k={k})"
        )
    return int(value)


def class_character_sum_numeric(l: int, d: int, k: int) -> complex:
    """Direct complex-exponential evaluation of the class character sum."""
    return sum(cmath.exp(2j * cmath.pi * k * a / l) for a in class_members(l, d))


# ---------------------------------------------------------------------------
# loop weights and level sums


@lru_cache(maxsize=None)
def loop_weight(d: int) -> PolyQ:
    """Weight of a cluster loop winding d times, as a polynomial in Q.

    With sqrt(Q) = 2*cos(theta/2) this is 2*cos(d*theta), generated by the
    Chebyshev-style recurrence w_0 = 2, w_1 = Q - 2,
    w_{d+1} = (Q - 2) * w_d - w_{d-1}; degree d, integer coefficients.
    """
    if d < 0:
        raise ValueError("loop_weight() needs d >= 0")
    if d == 0:
        return PolyQ.constant(2)
    if d == 1:
        return PolyQ.of([-2, 1])
    return (PolyQ.of([-2, 1]) * loop_weight(d - 1)) - loop_weight(d - 2)


def loop_weight_cross(d: int) -> int:
    """The loop weight specialized to the cross-topology point: 2*(-1)**d."""
    if d < 0:
        raise ValueError("loop_weight_cross() needs d >= 0")
    return 2 if d % 2 == 0 else -2


def _loop_weight_binomial(d: int) -> PolyQ:
    """Loop weight from its explicit coefficients.

    Coefficient of Q**j is (-1)**(d-j) * (2d/(d+j)) * C(d+j, d-j), an
    integer equal to C(d+j, d-j) + C(d+j-1, d-j-1).  Used as the second,
    recurrence-free route to the same polynomial.
    """
    if d == 0:
        return PolyQ.constant(2)
    coeffs = []
    for j in range(d + 1):
        mag = math.comb(d + j, d - j)
        if d - j >= 1:
            mag += math.comb(d + j - 1, d - j - 1)
        coeffs.append(mag if (d - j) % 2 == 0 else -mag)
    return PolyQ.of(coeffs)


@lru_cache(maxsize=None)
def cycle_class_weight(l: int) -> PolyQ:
    """Weight carried by the class of l-fold entangled structures.

    Equal to loop_weight(l) + (-1)**l * (Q - 1); the binomial expansion and
    the Chebyshev recurrence are both evaluated and must agree exactly.
    Values: -1 at l = 1, and the full level amplitude sum for l >= 2.
    """
    if l < 1:
        raise ValueError("cycle_class_weight() needs l >= 1")
    tail = PolyQ.of([-1, 1])
    if l % 2:
        tail = -tail
    via_recurrence = loop_weight(l) + tail
    via_binomials = _loop_weight_binomial(l) + tail
    if via_recurrence != via_binomials:
        raise InternalCheckError(f"cycle class weight routes disagree at l={l}")
    return via_recurrence


def cycle_class_weight_term(l: int, j: int) -> PolyQ:
    """Degree-j monomial of cycle_class_weight(l)."""
    if j < 0 or j > l:
        raise ValueError(f"term index {j} outside 0..{l}")
    return cycle_class_weight(l).term(j)


@lru_cache(maxsize=None)
def level_amplitude_sum(l: int) -> PolyQ:
    """Sum of all eigenvalue amplitudes at level l, as a polynomial in Q.

    Two published branches: the alternating binomial sum with the
    (-1)**l * (Q - 1) tail for l >= 2, and the plain alternating binomial
    sum for l <= 2.  They overlap at l = 2 and must agree there, which is
    asserted rather than assumed.
    """
    if l < 0:
        raise ValueError("level_amplitude_sum() needs l >= 0")
    if l <= 2:
        low = PolyQ.of(
            [
                math.comb(l + j, l - j) * (1 if (l - j) % 2 == 0 else -1)
                for j in range(l + 1)
            ]
        )
        if l == 2 and low != cycle_class_weight(2):
            raise InternalCheckError("level sum branches disagree at l=2")
        return low
    return cycle_class_weight(l)


def level_amplitude_term(l: int, j: int) -> PolyQ:
    """Degree-j monomial of level_amplitude_sum(l).

    For l >= 2 the (-1)**l * (Q - 1) tail lands degreewise on the j = 0 and
    j = 1 terms, which is exactly the split the restricted partition
    function reconstructions need.
    """
    if j < 0 or j > l:
        raise ValueError(f"term index {j} outside 0..{l}")
    return level_amplitude_sum(l).term(j)


# ---------------------------------------------------------------------------
# sector amplitudes, two routes


def sector_amplitude(l: int, k: int | None = None) -> PolyQ:
    """Amplitude of the (l, D_k) sector via the character route.

    For l >= 2 this is (1/l) * sum over divisors d of l of
    cycle_class_weight(d) * class_character_sum(l, d, k).  Levels 0 and 1
    have a single amplitude each: 1 and Q - 1.  Depends on k only through
    gcd(k, l).
    """
    if l < 0:
        raise ValueError("sector_amplitude() needs l >= 0")
    if l == 0:
        return PolyQ.one()
    if k is None or not 1 <= k <= l:
        raise ValueError(f"irrep index {k} outside 1..{l}")
    if l == 1:
        return PolyQ.of([-1, 1])
    acc = PolyQ.zero()
    for d in divisors(l):
        acc = acc + cycle_class_weight(d) * class_character_sum(l, d, k)
    return acc.scale(Fraction(1, l))


def sector_amplitude_term(l: int, k: int, j: int) -> PolyQ:
    """Per-j piece of the sector amplitude (the j-th restricted sector).

    (1/l) * [level_amplitude_term(l, j) + sum over proper divisors d of
    cycle_class_weight_term(d, j) * class_character_sum(l, d, k)].  Summing
    over j recovers sector_amplitude; summing over k recovers
    level_amplitude_term.
    """
    if l < 1:
        raise ValueError("sector_amplitude_term() needs l >= 1")
    if not 1 <= k <= l:
        raise ValueError(f"irrep index {k} outside 1..{l}")
    if j < 0 or j > l:
        raise ValueError(f"term index {j} outside 0..{l}")
    acc = level_amplitude_term(l, j)
    for d in divisors(l):
        if d == l:
            continue
        if j <= d:
            acc = acc + cycle_class_weight_term(d, j) * class_character_sum(l, d, k)
    return acc.scale(Fraction(1, l))


def amplitude_closed_form(
    l: int, m: int, *, doubled_cross_term: bool = False
) -> PolyQ:
    """Amplitude at level l for divisor label m via the closed form.

    The divisor sum runs over d | l with rational coefficient
    mobius(m/(m gcd d)) * totient(l/d) / (l * totient(m/(m gcd d))),
    weighting loop_weight(d); the cross-topology correction multiplies the
    same coefficients at the 2*(-1)**d specialization by (Q - 1)/2.  With
    ``doubled_cross_term=True`` the correction is doubled, the variant that
    breaks the sum rule (off by exactly Q - 1 at l = 2, m = 2).

    The divisor label m corresponds to the irreps D_k with l/gcd(k, l) = m;
    m = 1 is the identity rep.
    """
    if l < 2:
        raise ValueError("amplitude_closed_form() needs l >= 2")
    if m < 1 or l % m:
        raise ValueError(f"{m} does not divide {l}")
    main = PolyQ.zero()
    cross_factor = Fraction(0)
    for d in divisors(l):
        c = m // math.gcd(m, d)
        coeff = Fraction(mobius(c) * totient(l // d), l * totient(c))
        main = main + loop_weight(d).scale(coeff)
        cross_factor += coeff * loop_weight_cross(d)
    qm1 = PolyQ.of([-1, 1])
    cross = qm1.scale(cross_factor / 2)
    if doubled_cross_term:
        cross = qm1.scale(cross_factor)
    return main + cross


def sum_of_sector_amplitudes(l: int) -> PolyQ:
    """Sum of the l (not necessarily distinct) sector amplitudes at level l.

    Equals level_amplitude_sum(l); the equality is one of the verified sum
    rules, so this function performs the naive sum rather than shortcutting.
    """
    if l < 0:
        raise ValueError("needs l >= 0")
    if l == 0:
        return PolyQ.one()
    acc = PolyQ.zero()
    for k in range(1, l + 1):
        acc = acc + sector_amplitude(l, k)
    return acc


def divisor_for_irrep(l: int, k: int) -> int:
    """Divisor label m = l/gcd(k, l) of the irrep D_k."""
    if not 1 <= k <= l:
        raise ValueError(f"irrep index {k} outside 1..{l}")
    return l // math.gcd(k, l)


def irrep_for_divisor(l: int, m: int) -> int:
    """A representative irrep index k with divisor label m (k = l/m)."""
    if m < 1 or l % m:
        raise ValueError(f"{m} does not divide {l}")
    return l // m


def amplitude_table(l: int) -> dict[int, PolyQ]:
    """Distinct amplitudes at level l keyed by divisor label m."""
    if l == 0:
        return {1: PolyQ.one()}
    return {m: sector_amplitude(l, irrep_for_divisor(l, m)) for m in divisors(l)}


# ---------------------------------------------------------------------------
# connectivity-state dimension


def annulus_state_count(width: int, marks: int) -> int:
    """Number of annulus connectivity states on ``width`` points with
    ``marks`` marked blocks.

    Closed form: Catalan(width) at marks = 0, C(2*width - 1, width - 1) at
    marks = 1, and C(2*width, width - marks) for marks >= 2; zero above the
    width.
    """
    if width < 0 or marks < 0:
        raise ValueError("needs width >= 0 and marks >= 0")
    if marks > width:
        return 0
    if marks == 0:
        return math.comb(2 * width, width) // (width + 1)
    if marks == 1:
        return math.comb(2 * width - 1, width - 1)
    return math.comb(2 * width, width - marks)
