import cmath
import math
from fractions import Fraction
from typing import List, Optional

import numpy as np

from constants import (
    DEFAULT_PRIME,
    POINT_MATCH_TOL,
    SCALAR_COMPLEX,
    SCALAR_PRIME,
    SCALAR_RATIONAL
)
from exceptions import PreconditionError
from segre_format import Format
from .point_config import PointConfig, Scalar


class PointSampler:
    """
    Provides static methods drawing random points in the affine chart and
    converting them to homogeneous coordinates.

    Static Methods:
        random_scalar: Draws one chart-interior scalar of a given kind.
        random_points: Draws general points of a format.
        divisor_points: Draws general points sharing the last-factor
            coordinate.
        homogeneous: Homogeneous coordinates of one point.
        restrict_to_head: Drops the last factor of every point.
        concat: Joins point lists of the same kind.
        has_collisions: Whether two points coincide.
        fubini_study_distance: Distance between two complex points.
    """
    @staticmethod
    def random_scalar(
        rng: np.random.Generator, kind: str, prime: Optional[int] = None
        ) -> Scalar:
        """
        Draws a uniform element of [1, p-1] (prime), a small nonzero
        rational, or a complex number uniform in the unit disc.
        """
        if kind == SCALAR_PRIME:
            return int(rng.integers(1, prime or DEFAULT_PRIME))
        if kind == SCALAR_RATIONAL:
            sign = 1 if rng.random() < 0.5 else -1
            return Fraction(
                sign * int(rng.integers(1, 1000)), int(rng.integers(1, 100))
                )
        if kind == SCALAR_COMPLEX:
            radius = math.sqrt(rng.random())
            return cmath.rect(radius, 2.0 * math.pi * rng.random())
        raise PreconditionError(f"Failed to draw scalar: unknown kind {kind!r}")

    @staticmethod
    def random_points(
        fmt: Format,
        count: int,
        rng: np.random.Generator,
        kind: str = SCALAR_PRIME,
        prime: Optional[int] = DEFAULT_PRIME
        ) -> PointConfig:
        """
        Draws count general points of the format.

        Parameters:
            fmt (Format): The format.
            count (int): The number of points.
            rng (np.random.Generator): The random stream.
            kind (str): The scalar kind.
            prime (Optional[int]): The modulus for the prime kind.

        Returns:
            PointConfig: The points.
        """
        points = [
            [
                [PointSampler.random_scalar(rng, kind, prime) for _ in range(r)]
                for r in fmt["r"]
            ]
            for _ in range(count)
        ]
        config: PointConfig = {
            "format": fmt,
            "points": points,
            "kind": kind,
            "prime": prime if kind == SCALAR_PRIME else None,
            "on_divisor": False,
        }
        return config

    @staticmethod
    def divisor_points(
        fmt: Format,
        count: int,
        rng: np.random.Generator,
        kind: str = SCALAR_PRIME,
        prime: Optional[int] = DEFAULT_PRIME,
        last_coordinate: Optional[List[Scalar]] = None
        ) -> PointConfig:
        """
        Draws count general points on a divisor D of type (0, ..., 0, 1):
        all points share the coordinate of the last factor.

        Parameters:
            last_coordinate (Optional[List[Scalar]]): The coordinate
                defining D; drawn at random when omitted.
        """
        config = PointSampler.random_points(fmt, count, rng, kind, prime)
        if last_coordinate is None:
            last_coordinate = [
                PointSampler.random_scalar(rng, kind, prime)
                for _ in range(fmt["r"][-1])
            ]
        for point in config["points"]:
            point[-1] = list(last_coordinate)
        config["on_divisor"] = True
        return config

    @staticmethod
    def homogeneous(point: List[List[Scalar]], kind: str) -> List[List[Scalar]]:
        """
        Returns the homogeneous coordinates of a point: the affine
        coordinates of every factor followed by 1.
        """
        one: Scalar = 1
        if kind == SCALAR_RATIONAL:
            one = Fraction(1)
        elif kind == SCALAR_COMPLEX:
            one = complex(1.0)
        return [list(coords) + [one] for coords in point]

    @staticmethod
    def restrict_to_head(config: PointConfig, head: Format) -> PointConfig:
        """
        Drops the last factor of every point, giving points of D identified
        with the product of the first n factors.
        """
        restricted: PointConfig = {
            "format": head,
            "points": [point[:-1] for point in config["points"]],
            "kind": config["kind"],
            "prime": config["prime"],
            "on_divisor": False,
        }
        return restricted

    @staticmethod
    def concat(fmt: Format, configs: List[PointConfig]) -> PointConfig:
        """
        Joins the points of several configurations of the same kind.
        """
        points = []
        for config in configs:
            points.extend(config["points"])
        joined: PointConfig = {
            "format": fmt,
            "points": points,
            "kind": configs[0]["kind"] if configs else SCALAR_PRIME,
            "prime": configs[0]["prime"] if configs else DEFAULT_PRIME,
            "on_divisor": False,
        }
        return joined

    @staticmethod
    def has_collisions(config: PointConfig) -> bool:
        """
        Checks whether two points of the configuration coincide.
        """
        if config["kind"] == SCALAR_COMPLEX:
            points = config["points"]
            for a in range(len(points)):
                for b in range(a + 1, len(points)):
                    if PointSampler.fubini_study_distance(
                        PointSampler.homogeneous(points[a], SCALAR_COMPLEX),
                        PointSampler.homogeneous(points[b], SCALAR_COMPLEX)
                        ) < POINT_MATCH_TOL:
                        return True
            return False
        keys = {
            tuple(tuple(coords) for coords in point)
            for point in config["points"]
        }
        return len(keys) < len(config["points"])

    @staticmethod
    def fubini_study_distance(
        x: List[List[complex]], y: List[List[complex]]
        ) -> float:
        """
        Returns the largest per-factor Fubini-Study angle between two
        points given in homogeneous coordinates.
        """
        distance = 0.0
        for (u, v) in zip(x, y):
            u = np.asarray(u, dtype=complex)
            v = np.asarray(v, dtype=complex)
            cosine = abs(np.vdot(u, v)) / (np.linalg.norm(u) * np.linalg.norm(v))
            distance = max(distance, math.acos(min(1.0, cosine)))
        return distance
