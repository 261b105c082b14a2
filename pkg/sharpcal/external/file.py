"""Define File IO classes

Scenario documents and probe configurations are read from JSON files; reports
are written as JSON or CSV. Writes go to a temporary file in the target
directory which then replaces the target, so readers never see a partial
report.
"""

import hashlib
import json
import logging
import os
import tempfile

import pandas as pd

from sharpcal.base.errors import ArgumentError, ParseError
from sharpcal.external.external import External
from sharpcal.util import to_jsonable


logger = logging.getLogger(__name__)

FORMATS = ("json", "csv")


def file_digest(path):
    """sha256 hex digest of a file's bytes"""
    sha = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 16), b""):
            sha.update(chunk)
    return sha.hexdigest()


def dump_json(doc):
    """Serialize a document the way every report is written"""
    return json.dumps(to_jsonable(doc), sort_keys=True, indent=2) + "\n"


def csv_text(frame, comment=None):
    """CSV text of a table, led by a "# " comment line when given

    Read it back with pandas.read_csv(..., comment="#").
    """
    text = frame.to_csv(index=False)
    if comment is None:
        return text
    if "\n" in comment:
        raise ValueError("csv comments must fit on one line")
    return f"# {comment}\n{text}"


class JsonInFile(External):
    """Read a JSON document from a file

    Attributes:
        _connection (str): path to the input file.
    """

    _connection: str

    def __init__(self, in_file):
        """Initialize instance and check in_file

        Raises:
            ArgumentError: if the path does not exist.
            TypeError: if in_file is not a string.
        """
        super().__init__()
        if not isinstance(in_file, (str, os.PathLike)):
            raise TypeError(f"in_file must be a path to the input file, not \
{type(in_file)}")
        in_file = os.fspath(in_file)
        if not os.path.exists(in_file):
            raise ArgumentError(f"specified path {in_file} does not exist")
        self._connection = in_file

    def request(self, **kwargs):
        """Parse the file

        Raises:
            ParseError: if the file is not valid JSON.
        """
        try:
            with open(self._connection) as f:
                return json.load(f)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{self._connection} is not valid JSON: {exc}") \
                from exc

    def digest(self):
        return file_digest(self._connection)


class ReportFile(External):
    """Write reports to a file atomically

    Attributes:
        _connection (str): path to the output file.
        fmt (str): "json" or "csv".
    """

    _connection: str

    def __init__(self, out_file, fmt=None):
        super().__init__()
        out_file = os.fspath(out_file)
        fmt = fmt or os.path.splitext(out_file)[1].lstrip(".").lower() \
            or "json"
        if fmt not in FORMATS:
            raise ArgumentError(f"format must be one of {FORMATS}, not {fmt}")
        self._connection = out_file
        self.fmt = fmt

    def request(self, **kwargs):
        """Write the query onto the file

        Args:
            **kwargs: Request arguments
                query: dict for JSON output or DataFrame for CSV output.
                comment: optional single line written as "# comment" above
                    the CSV header.
        """
        query = kwargs["query"]
        if self.fmt == "json":
            text = dump_json(query)
        elif isinstance(query, pd.DataFrame):
            text = csv_text(query, kwargs.get("comment"))
        else:
            raise TypeError(f"csv output needs a DataFrame, not \
{type(query)}")

        self.write_text(text)
        return self._connection

    def write_text(self, text):
        target = os.path.abspath(self._connection)
        directory = os.path.dirname(target)
        os.makedirs(directory, exist_ok=True)

        fd, tmp = tempfile.mkstemp(dir=directory, prefix=".sharpcal-")
        try:
            with os.fdopen(fd, "w", newline="") as f:
                f.write(text)
            os.chmod(tmp, 0o644)
            os.replace(tmp, target)
        except BaseException:
            if os.path.exists(tmp):
                os.remove(tmp)
            raise

        logger.debug("wrote %s", target)
