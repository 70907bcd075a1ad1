import itertools
import logging
from typing import Dict, List, Union

from exceptions import PreconditionError
from segre_format import (
    PerfectCase,
    SegreFormat,
    NU_MULTIPLE,
    NU_UNIQUE,
    NU_UNKNOWN
)

LOGGER = logging.getLogger(__name__)

# Shorthand of the three-factor condition that omits the (d_3+1) factor
THREE_FACTOR_SHORTHAND = "(d_1+1)(d_2+1)=4(k+1)"


class PerfectCaseEnumerator:
    """
    Provides static methods listing the perfect cases of the families for
    which the decomposition count is known or claimed.

    Static Methods:
        enumerate_theorem_one: Forms of degree d in r+1 variables with
            (k+1)(r+1) = C(r+d, r).
        enumerate_theorem_two: Sorted multidegrees over (P^r)^n with
            prod C(r+d_i, r) = (nr+1)(k+1) and d_1 >= r+1.
        enumerate_corollary_two: (d_1, d_2) over P^1 x P^1.
        enumerate_corollary_three: (d_1, d_2, d_3) over (P^1)^3 with the
            extra degree assumption.
        table_rows: Flattens cases into CSV rows.
    """
    @staticmethod
    def enumerate_theorem_one(dmax: int) -> List[PerfectCase]:
        """
        Lists (r, d) with d > r > 1, d <= dmax and (k+1)(r+1) = C(r+d, r).
        Only (r, d) = (2, 5) is expected to be unique.
        """
        cases = []
        for d in range(3, dmax + 1):
            for r in range(2, d):
                fmt = SegreFormat.create([r], [d])
                k = SegreFormat.perfect_k(fmt)
                if k is None:
                    continue
                case: PerfectCase = {
                    "format": fmt,
                    "k": k,
                    "nu_expected": NU_UNIQUE if (r, d) == (2, 5) else NU_MULTIPLE,
                    "assumption1_ok": True,
                }
                cases.append(case)
        return cases

    @staticmethod
    def enumerate_theorem_two(n: int, r: int, dmax: int) -> List[PerfectCase]:
        """
        Lists sorted d with r+1 <= d_1 <= ... <= d_n <= dmax whose format is
        a perfect case. Whether the hypotheses hold is left to the pipeline.

        Raises:
            PreconditionError: If n r < 2.
        """
        if n * r < 2:
            raise PreconditionError(
                f"Failed to enumerate: n={n}, r={r} gives n r < 2."
                )
        cases = []
        for d in itertools.combinations_with_replacement(
            range(r + 1, dmax + 1), n
            ):
            fmt = SegreFormat.create([r] * n, d)
            k = SegreFormat.perfect_k(fmt)
            if k is None:
                continue
            case: PerfectCase = {
                "format": fmt,
                "k": k,
                "nu_expected": NU_UNKNOWN,
                "assumption1_ok": True,
            }
            cases.append(case)
        return cases

    @staticmethod
    def enumerate_corollary_two(dmax: int) -> List[PerfectCase]:
        """
        Lists (d_1, d_2) with 4 <= d_1 <= d_2 <= dmax and
        (d_1+1)(d_2+1) = 3(k+1).

        Raises:
            PreconditionError: If dmax < 4.
        """
        if dmax < 4:
            raise PreconditionError(f"Failed to enumerate: dmax={dmax} < 4.")
        cases = []
        for d1 in range(4, dmax + 1):
            for d2 in range(d1, dmax + 1):
                quotient, remainder = divmod((d1 + 1) * (d2 + 1), 3)
                if remainder != 0:
                    continue
                case: PerfectCase = {
                    "format": SegreFormat.create([1, 1], [d1, d2]),
                    "k": quotient - 1,
                    "nu_expected": NU_MULTIPLE,
                    "assumption1_ok": True,
                }
                cases.append(case)
        return cases

    @staticmethod
    def enumerate_corollary_three(
        dmax: int, require_assumption: bool = True
        ) -> List[PerfectCase]:
        """
        Lists (d_1, d_2, d_3) with 3 <= d_1 <= d_2 <= d_3 <= dmax,
        (d_1+1)(d_2+1)(d_3+1) = 4(k+1) and
        k+1 <= (d_3 - 2) [(d_1+1)(d_2+1) / 3].

        The shorthand (d_1+1)(d_2+1)=4(k+1) omits the factor (d_3+1); the
        full three-factor product is the one consistent with
        ncoeff = (nr+1)(k+1).

        Parameters:
            dmax (int): Largest degree.
            require_assumption (bool): Skip cases failing the degree
                assumption; when False they are kept with
                assumption1_ok = False.

        Raises:
            PreconditionError: If dmax < 3.
        """
        if dmax < 3:
            raise PreconditionError(f"Failed to enumerate: dmax={dmax} < 3.")
        LOGGER.info(
            "Three-factor enumeration uses (d_1+1)(d_2+1)(d_3+1)=4(k+1), not "
            "the shorthand %s", THREE_FACTOR_SHORTHAND
            )
        cases = []
        for (d1, d2, d3) in itertools.combinations_with_replacement(
            range(3, dmax + 1), 3
            ):
            quotient, remainder = divmod((d1 + 1) * (d2 + 1) * (d3 + 1), 4)
            if remainder != 0:
                continue
            assumption_ok = quotient <= (d3 - 2) * ((d1 + 1) * (d2 + 1) // 3)
            if require_assumption and not assumption_ok:
                continue
            case: PerfectCase = {
                "format": SegreFormat.create([1, 1, 1], [d1, d2, d3]),
                "k": quotient - 1,
                "nu_expected": NU_MULTIPLE,
                "assumption1_ok": assumption_ok,
            }
            cases.append(case)
        return cases

    @staticmethod
    def table_rows(cases: List[PerfectCase]) -> List[Dict[str, Union[int, str]]]:
        """
        Flattens cases into rows with columns n, r, d1..dn, k, ncoeff,
        assumption1_ok.
        """
        rows = []
        for case in cases:
            fmt = case["format"]
            row: Dict[str, Union[int, str]] = {
                "n": fmt["n"],
                "r": ",".join(str(x) for x in fmt["r"]),
            }
            for (i, d) in enumerate(fmt["d"]):
                row[f"d{i + 1}"] = d
            row["k"] = case["k"]
            row["ncoeff"] = SegreFormat.ncoeff(fmt)
            row["assumption1_ok"] = str(case["assumption1_ok"]).lower()
            rows.append(row)
        return rows
