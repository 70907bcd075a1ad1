from typing import List, Optional, Union
from fractions import Fraction
from typing_extensions import TypedDict

from segre_format import Format

Scalar = Union[int, Fraction, complex]


class PointConfig(TypedDict):
    """
    Points on a product of projective spaces, each stored in the affine
    chart where the last homogeneous coordinate of every factor is 1.

    Attributes:
        format (Format): The format whose factors the points live on.
        points (List[List[List[Scalar]]]): One entry per point, holding one
            list of r_i affine coordinates per factor.
        kind (str): The scalar kind ("prime", "rational" or "complex").
        prime (Optional[int]): The modulus when kind is "prime".
        on_divisor (bool): Whether all points share the same last-factor
            coordinate, i.e. lie on one divisor of type (0, ..., 0, 1).
    """
    format: Format
    points: List[List[List[Scalar]]]
    kind: str
    prime: Optional[int]
    on_divisor: bool

