"""Exception types shared across the package."""


class GerbelabError(Exception):
    pass


class ResolutionError(GerbelabError):
    """Sampled data too coarse to be interpreted unambiguously."""


class EndpointMismatch(GerbelabError):
    """Paths that should share endpoints do not."""


class NotOrientationPreserving(GerbelabError):
    """A circle reparameterization is not an orientation-preserving diffeo."""


class AntipodeError(GerbelabError):
    """Quaternion logarithm requested too close to -1."""


class CalibrationDiverged(GerbelabError):
    """The 3-form normalization integral did not stabilize under refinement."""


class TranslationSearchFailed(GerbelabError):
    """No left translation moved a sphere map away from the antipode."""


class BoundaryMismatch(GerbelabError):
    """Disk boundaries / cap rims that should agree do not."""


class SeamMismatch(GerbelabError):
    """Trisection seams disagree beyond tolerance."""


class NotThin(GerbelabError):
    """A homotopy required to be thin has rank defect above tolerance."""


class SupportOverlap(GerbelabError):
    """Loops required to have disjoint supports overlap."""


class StepTooLarge(GerbelabError):
    """Finite-difference step produced inconsistent derivative estimates."""


class GridMismatch(GerbelabError):
    """Sampled objects live on incompatible grids."""


class EndpointDrift(GerbelabError):
    """A family of path pairs stopped sharing endpoints."""


class UnknownForm(GerbelabError):
    """Requested built-in differential form does not exist."""


class SchemaError(GerbelabError):
    """Malformed JSON input; carries the path to the offending field."""

    def __init__(self, path, message):
        self.path = path
        super().__init__(f"{path}: {message}")
