import csv
import json
import os
from fractions import Fraction
from typing import Any, Dict, List, TextIO

import numpy as np

from constants import SCALAR_COMPLEX, SCALAR_PRIME, SCALAR_RATIONAL
from exceptions import FormatError
from multipoly import MultiPoly, Section
from segre_format import SegreFormat


class FileDataIO:
    """
    Provides statics methods for reading tensors from JSON files and for
    writing reports as JSON or CSV. This class is responsible for the
    conversion of numpy, complex and Fraction values and for handling
    file exceptions.

    Static Methods:
        to_jsonable: Converts a report into plain JSON values.
        dumps: Deterministic JSON text of a report.
        write_json: Writes a report as JSON.
        write_csv_rows: Writes flat rows as CSV to a stream.
        write_csv: Writes flat rows as a CSV file.
        save_tensor: Writes a section as a tensor file.
        load_tensor_from_json: Reads a section from a tensor file.
        load_tensor: Validates file existence and handles exceptions
            thrown by load_tensor_from_json.
    """
    @staticmethod
    def to_jsonable(value: Any) -> Any:
        """
        Recursively converts numpy arrays and scalars, complex numbers
        (as [re, im]) and Fractions (as "a/b") into JSON values.
        """
        if isinstance(value, dict):
            return {str(k): FileDataIO.to_jsonable(v) for (k, v) in value.items()}
        if isinstance(value, (list, tuple)):
            return [FileDataIO.to_jsonable(v) for v in value]
        if isinstance(value, np.ndarray):
            return [FileDataIO.to_jsonable(v) for v in value.tolist()]
        if isinstance(value, (bool, np.bool_)):
            return bool(value)
        if isinstance(value, (int, np.integer)):
            return int(value)
        if isinstance(value, (float, np.floating)):
            return float(value)
        if isinstance(value, (complex, np.complexfloating)):
            return [float(value.real), float(value.imag)]
        if isinstance(value, Fraction):
            return f"{value.numerator}/{value.denominator}"
        return value

    @staticmethod
    def dumps(payload: Any) -> str:
        return json.dumps(FileDataIO.to_jsonable(payload), sort_keys=True, indent=2)

    @staticmethod
    def write_json(filename: str, payload: Any) -> None:
        """
        Writes a report with sorted keys, so identical reports are
        byte-identical.

        Raises:
            Exception: If the file cannot be written.
        """
        try:
            with open(filename, "w") as json_file:
                json_file.write(FileDataIO.dumps(payload))
                json_file.write("\n")
        except OSError as e:
            raise Exception(
                f"Failed to write report to {filename}."
                ).with_traceback(e.__traceback__)

    @staticmethod
    def write_csv_rows(stream: TextIO, rows: List[Dict[str, Any]]) -> None:
        """
        Writes rows to an open stream. Columns are those of the first row,
        followed by the new columns of later rows in order of appearance.
        """
        columns: List[str] = []
        for row in rows:
            for column in row:
                if column not in columns:
                    columns.append(column)
        csv_writer = csv.DictWriter(stream, fieldnames=columns)
        csv_writer.writeheader()
        for row in rows:
            csv_writer.writerow(
                {k: FileDataIO.to_jsonable(v) for (k, v) in row.items()}
                )

    @staticmethod
    def write_csv(filename: str, rows: List[Dict[str, Any]]) -> None:
        """
        Raises:
            Exception: If the file cannot be written.
        """
        try:
            with open(filename, "w", newline="") as csv_file:
                FileDataIO.write_csv_rows(csv_file, rows)
        except OSError as e:
            raise Exception(
                f"Failed to write rows to {filename}."
                ).with_traceback(e.__traceback__)

    @staticmethod
    def save_tensor(filename: str, section: Section) -> None:
        """
        Writes a section as {n, r, d, format, scalar_kind, prime,
        coefficients}.
        """
        fmt = section["format"]
        FileDataIO.write_json(filename, {
            "n": fmt["n"],
            "r": fmt["r"],
            "d": fmt["d"],
            "format": SegreFormat.label(fmt),
            "scalar_kind": section["kind"],
            "prime": section["prime"],
            "coefficients": section["coeffs"],
        })

    @staticmethod
    def load_tensor_from_json(filename: str) -> Section:
        """
        Reads a tensor file written by save_tensor.

        Parameters:
            filename (str): The path of the file.

        Returns:
            Section: The section, in the declared scalar kind.

        Raises:
            FormatError: If a field is missing or malformed.
        """
        with open(filename, "r") as json_file:
            data = json.load(json_file)
        for field in ("r", "d", "scalar_kind", "coefficients"):
            if field not in data:
                raise FormatError(
                    f"Failed to read tensor in {filename}: missing field {field!r}."
                    )
        fmt = SegreFormat.create(data["r"], data["d"], normalize=False)
        kind = data["scalar_kind"]
        raw = data["coefficients"]
        if kind == SCALAR_COMPLEX:
            coeffs = [complex(re, im) for (re, im) in raw]
        elif kind == SCALAR_RATIONAL:
            coeffs = [Fraction(v) for v in raw]
        elif kind == SCALAR_PRIME:
            if not isinstance(data.get("prime"), int):
                raise FormatError(
                    f"Failed to read tensor in {filename}: scalar kind "
                    f"{kind!r} needs an integer 'prime' field."
                    )
            coeffs = [int(v) for v in raw]
        else:
            raise FormatError(
                f"Failed to read tensor in {filename}: unknown scalar kind {kind!r}."
                )
        return MultiPoly.section(fmt, coeffs, kind, data.get("prime"))

    @staticmethod
    def load_tensor(filename: str) -> Section:
        """
        Validates file existence and handles exceptions thrown by
        "load_tensor_from_json".

        Parameters:
            filename (str): The path of the file.

        Returns:
            Section: The section.

        Raises:
            FormatError: If the content is malformed.
            Exception: If the file is missing or unreadable.
        """
        if not os.path.exists(filename):
            raise Exception(f"Failed to access file: {filename}")
        try:
            section = FileDataIO.load_tensor_from_json(filename)
        except FormatError:
            raise
        except Exception as e:
            raise Exception(
                f"Failed to read tensor in {filename}."
                ).with_traceback(e.__traceback__)
        return section
