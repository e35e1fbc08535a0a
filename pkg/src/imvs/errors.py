"""Exception hierarchy shared by every stage of the pipeline."""


class IMError(Exception):
    """Base class; ``stage`` names the pipeline step that failed."""

    stage = "imvs"


class DataError(IMError, ValueError):
    stage = "data"


class TooFewRows(IMError, ValueError):
    stage = "fit"


class SingularDesign(IMError, ValueError):
    stage = "fit"


class DegenerateResidual(IMError, ValueError):
    stage = "fit"


class CholeskyFailure(IMError, ValueError):
    stage = "fdist"


class DimensionMismatch(IMError, ValueError):
    stage = "im"
