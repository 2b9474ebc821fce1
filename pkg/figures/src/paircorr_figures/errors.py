"""Error taxonomy for figure rendering."""


class FigureError(Exception):
    """Base class for all rendering failures."""


class SchemaError(FigureError, ValueError):
    """The input file does not carry the pair-histogram CSV schema."""


class DensityError(FigureError, ValueError):
    """The histogram does not integrate to 1, so a density overlay is meaningless."""
