"""Error hierarchy shared across the pipeline.

DataError covers everything caused by bad input data (malformed files,
inconsistent vector collections, impossible parameter combinations given
the data). The CLI maps DataError to exit code 2 and usage problems to 1.
"""


class DataError(Exception):
    """Input data is malformed or inconsistent."""


class ParseError(DataError):
    """A posts file could not be parsed; message names the location."""


class VectorFormatError(DataError):
    """A vector file violates the SOCV format or its invariants."""


class GraphFloorError(DataError):
    """Requested clustering threshold lies below the stored edge floor."""


class UndefinedMetricError(DataError):
    """A validity index is undefined for the given partition.

    The message is the human-readable reason recorded in reports.
    """
