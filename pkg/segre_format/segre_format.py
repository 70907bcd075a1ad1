import logging
import math
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple
from typing_extensions import TypedDict

from exceptions import FormatError, PreconditionError

LOGGER = logging.getLogger(__name__)


class Format(TypedDict):
    """
    Combinatorial signature of a Segre-Veronese variety, i.e. of the
    embedding of P^{r_1} x ... x P^{r_n} by sections of multidegree d.

    Attributes:
        n (int): The number of factors.
        r (List[int]): The factor dimensions r_i.
        d (List[int]): The multidegree, ascending when all r_i are equal
            and the format was normalized.
        original_d (List[int]): The multidegree as it was given.
    """
    n: int
    r: List[int]
    d: List[int]
    original_d: List[int]


class PerfectCase(TypedDict):
    """
    A format together with the k for which the ambient space exactly fits
    (k+1) spans of tangent spaces.

    Attributes:
        format (Format): The format.
        k (int): ncoeff(format) = (sum(r) + 1)(k + 1).
        nu_expected (str): One of "unique", "multiple", "unknown".
        assumption1_ok (bool): Whether the extra degree assumption of the
            three-factor family holds (True for the other families).
    """
    format: Format
    k: int
    nu_expected: str
    assumption1_ok: bool


class WeaklySchedule(TypedDict):
    """
    Degeneration schedule for the ordinary double point criterion.

    Attributes:
        s (int): The number of double points.
        h0 (int): Maximum number of double points placed on the divisor D.
        t0 (int): Number of degeneration steps, 1 <= s - t0 h0 <= h0.
        degree_ok (bool): Whether d_{n+1} >= t0 + 3.
        head_degrees_ok (bool): Whether d_i >= 2 for the first n factors.
    """
    s: int
    h0: int
    t0: int
    degree_ok: bool
    head_degrees_ok: bool


NU_UNIQUE = "unique"
NU_MULTIPLE = "multiple"
NU_UNKNOWN = "unknown"


class SegreFormat:
    """
    Provides static methods for building formats and for the counts attached
    to them. All counts are exact Python integers.

    Static Methods:
        create: Validates and builds a Format.
        parse: Builds a Format from the "r=..;d=.." grammar.
        label: Returns the canonical string of a Format.
        binomial: Exact binomial coefficient.
        ncoeff: Number of multihomogeneous monomials of the format.
        ambient_tensor_dim: Projective dimension M of the tensor space.
        perfect_k: The k of the perfect case, if any.
        nef_check: The nef inequality from the Noether-Fano argument.
        theorem_two_degree_bound: Whether d_1 >= r + 1.
        head: The first n factors of an (n+1)-factor format.
        with_last_degree: Same format with the last degree replaced.
        h0: floor(ncoeff(head) / (sum(r_head) + 1)).
        horace_bounds: The (h, l) upper bounds of a Horace step.
        weakly_schedule: The (s, h0, t0) schedule of the double point
            criterion.
    """
    @staticmethod
    def create(
        r: Sequence[int],
        d: Sequence[int],
        normalize: bool = True,
        allow_zero: bool = False
        ) -> Format:
        """
        Validates and builds a Format.

        Parameters:
            r (Sequence[int]): The factor dimensions.
            d (Sequence[int]): The multidegree.
            normalize (bool): Sort d ascending when all r_i are equal.
            allow_zero (bool): Accept degree 0 factors (used for residual
                systems of the Horace method).

        Returns:
            Format: The format.

        Raises:
            FormatError: If the lengths differ or an entry is out of range.
        """
        r = [int(x) for x in r]
        d = [int(x) for x in d]
        if len(r) == 0 or len(r) != len(d):
            raise FormatError(
                f"Failed to build format: r={r} and d={d} must be non-empty "
                "and of equal length."
                )
        if any(x < 1 for x in r):
            raise FormatError(f"Failed to build format: r={r} has entries < 1.")
        lowest = 0 if allow_zero else 1
        if any(x < lowest for x in d):
            raise FormatError(
                f"Failed to build format: d={d} has entries < {lowest}."
                )
        sorted_d = sorted(d) if normalize and len(set(r)) == 1 else list(d)
        fmt: Format = {
            "n": len(r),
            "r": r,
            "d": sorted_d,
            "original_d": list(d),
        }
        if SegreFormat.ncoeff(fmt) < 2 and not allow_zero:
            raise FormatError(
                f"Failed to build format: {SegreFormat.label(fmt)} has fewer "
                "than two monomials."
                )
        return fmt

    @staticmethod
    def parse(text: str, normalize: bool = True) -> Format:
        """
        Builds a Format from its canonical string "r=1,1;d=4,5".

        Parameters:
            text (str): The format string.
            normalize (bool): Sort d ascending when all r_i are equal.

        Returns:
            Format: The format.

        Raises:
            FormatError: If the string does not follow the grammar.
        """
        fields = {}
        for part in text.replace(" ", "").split(";"):
            if not part:
                continue
            key, sep, value = part.partition("=")
            if not sep or key not in ("r", "d") or key in fields:
                raise FormatError(f"Failed to parse format: {text!r}")
            try:
                fields[key] = [int(x) for x in value.split(",")]
            except ValueError as e:
                raise FormatError(
                    f"Failed to parse format: {text!r}"
                    ).with_traceback(e.__traceback__)
        if set(fields) != {"r", "d"}:
            raise FormatError(f"Failed to parse format: {text!r} needs r= and d=")
        return SegreFormat.create(fields["r"], fields["d"], normalize)

    @staticmethod
    def label(fmt: Format) -> str:
        """
        Returns the canonical string of a Format.
        """
        return "r={};d={}".format(
            ",".join(str(x) for x in fmt["r"]),
            ",".join(str(x) for x in fmt["d"])
            )

    @staticmethod
    def binomial(a: int, b: int) -> int:
        """
        Exact binomial coefficient C(a, b), 0 when b > a.

        Raises:
            ValueError: If a or b is negative.
        """
        if a < 0 or b < 0:
            raise ValueError(f"Failed to compute C({a}, {b}): negative input.")
        return math.comb(a, b)

    @staticmethod
    def ncoeff(fmt: Format) -> int:
        """
        Returns prod_i C(r_i + d_i, r_i), i.e. N + 1.
        """
        return math.prod(
            SegreFormat.binomial(r + d, r) for (r, d) in zip(fmt["r"], fmt["d"])
            )

    @staticmethod
    def ambient_tensor_dim(fmt: Format) -> int:
        """
        Returns M = prod_i (r_i + 1)^{d_i} - 1, the projective dimension of
        the space of all (not necessarily symmetric) tensors.
        """
        return math.prod((r + 1) ** d for (r, d) in zip(fmt["r"], fmt["d"])) - 1

    @staticmethod
    def perfect_k(fmt: Format) -> Optional[int]:
        """
        Returns k such that ncoeff = (sum(r) + 1)(k + 1) with k + 1 >= 2.

        Returns:
            Optional[int]: k, or None when the division is not exact.

        Raises:
            FormatError: If the r_i are not all equal or sum(r) < 2.
        """
        if len(set(fmt["r"])) != 1:
            raise FormatError(
                f"Failed to compute perfect k: {SegreFormat.label(fmt)} has "
                "unequal factor dimensions."
                )
        width = sum(fmt["r"]) + 1
        if width < 3:
            raise FormatError(
                f"Failed to compute perfect k: {SegreFormat.label(fmt)} has "
                "n r < 2."
                )
        quotient, remainder = divmod(SegreFormat.ncoeff(fmt), width)
        if remainder != 0 or quotient < 2:
            return None
        return quotient - 1

    @staticmethod
    def nef_check(fmt: Format) -> bool:
        """
        Checks -(r+1) + d_i / mu >= 0 for every i, with mu = d_1 / (r+1),
        in exact arithmetic. Unsorted degrees are normalized first.

        Raises:
            FormatError: If the r_i are not all equal.
        """
        if len(set(fmt["r"])) != 1:
            raise FormatError(
                f"Failed to check nef inequality: {SegreFormat.label(fmt)} "
                "has unequal factor dimensions."
                )
        r = fmt["r"][0]
        d = sorted(fmt["d"])
        if d != list(fmt["d"]):
            LOGGER.debug("nef_check: normalized d=%s to %s", fmt["d"], d)
        mu = Fraction(d[0], r + 1)
        return all(-(r + 1) + Fraction(di) / mu >= 0 for di in d)

    @staticmethod
    def theorem_two_degree_bound(fmt: Format) -> bool:
        """
        Returns True when all r_i are equal to r and min(d) >= r + 1.
        """
        return len(set(fmt["r"])) == 1 and min(fmt["d"]) >= fmt["r"][0] + 1

    @staticmethod
    def head(fmt: Format) -> Format:
        """
        Returns the first n factors of an (n+1)-factor format whose last
        factor is P^1.

        Raises:
            PreconditionError: If the format has one factor or the last
                factor is not P^1.
        """
        if fmt["n"] < 2 or fmt["r"][-1] != 1:
            raise PreconditionError(
                f"Failed to split {SegreFormat.label(fmt)}: the last factor "
                "must be P^1 after at least one other factor."
                )
        return SegreFormat.create(
            fmt["r"][:-1], fmt["d"][:-1], normalize=False, allow_zero=True
            )

    @staticmethod
    def with_last_degree(fmt: Format, degree: int) -> Format:
        """
        Returns the same format with d_{n} replaced, keeping factor order.
        """
        return SegreFormat.create(
            fmt["r"], fmt["d"][:-1] + [degree], normalize=False, allow_zero=True
            )

    @staticmethod
    def h0(fmt: Format) -> int:
        """
        Returns floor(ncoeff(head) / (sum(r_head) + 1)) for an (n+1)-factor
        format.
        """
        head = SegreFormat.head(fmt)
        return SegreFormat.ncoeff(head) // (sum(head["r"]) + 1)

    @staticmethod
    def horace_bounds(fmt: Format) -> Tuple[int, int]:
        """
        Returns the upper bounds (h_max, l_max) of a Horace step on an
        (n+1)-factor format.
        """
        head = SegreFormat.head(fmt)
        h_max = SegreFormat.h0(fmt)
        l_max = SegreFormat.ncoeff(head) * (fmt["d"][-1] + 1) \
            // (sum(head["r"]) + 2) - h_max
        return h_max, l_max

    @staticmethod
    def weakly_schedule(fmt: Format, s: int) -> WeaklySchedule:
        """
        Computes h0 and the unique t0 with 1 <= s - t0 h0 <= h0.

        Parameters:
            fmt (Format): An (n+1)-factor format whose last factor is P^1.
            s (int): The number of double points.

        Returns:
            WeaklySchedule: The schedule, with the threshold flags.

        Raises:
            PreconditionError: If s is out of range or h0 = 0.
        """
        head = SegreFormat.head(fmt)
        s_max = SegreFormat.ncoeff(fmt) // (sum(head["r"]) + 2)
        if s < 1 or s > s_max:
            raise PreconditionError(
                f"Failed to build schedule: s={s} outside [1, {s_max}] for "
                f"{SegreFormat.label(fmt)}."
                )
        h0 = SegreFormat.h0(fmt)
        if h0 < 1:
            raise PreconditionError(
                f"Failed to build schedule: h0 = 0 for {SegreFormat.label(fmt)}."
                )
        t0 = (s - 1) // h0
        schedule: WeaklySchedule = {
            "s": s,
            "h0": h0,
            "t0": t0,
            "degree_ok": fmt["d"][-1] >= t0 + 3,
            "head_degrees_ok": all(x >= 2 for x in head["d"]),
        }
        return schedule
