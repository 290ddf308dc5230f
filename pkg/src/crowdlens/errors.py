"""Exception hierarchy.

``ParseError`` subclasses map to CLI exit code 2; every other
``CrowdlensError`` maps to exit code 3 (invariant violation).
"""


class CrowdlensError(Exception):
    """Base class for all crowdlens errors."""


# ---------------------------------------------------------------------------
# tracking file parsing / normalization (exit code 2)
# ---------------------------------------------------------------------------

class ParseError(CrowdlensError):
    pass


class MalformedHeader(ParseError):
    pass


class NonMonotonicFrames(ParseError):
    def __init__(self, ped_id, message=None):
        self.ped_id = ped_id
        super().__init__(message or f"frames not strictly increasing for pedestrian {ped_id}")


class NonFinitePosition(ParseError):
    def __init__(self, row, message=None):
        self.row = row
        super().__init__(message or f"non-finite position at row {row}")


class EmptyScene(ParseError):
    pass


# ---------------------------------------------------------------------------
# geometry / transforms
# ---------------------------------------------------------------------------

class SingularTransform(CrowdlensError):
    pass


class PointAtInfinity(CrowdlensError):
    pass


class TooFewSamples(CrowdlensError):
    pass


class TrackLost(CrowdlensError):
    """Gap between consecutive samples too long to interpolate."""

    def __init__(self, ped_id, gap, limit):
        self.ped_id = ped_id
        self.gap = gap
        self.limit = limit
        super().__init__(f"pedestrian {ped_id}: gap of {gap} frames exceeds limit {limit}")


# ---------------------------------------------------------------------------
# feature computation
# ---------------------------------------------------------------------------

class FrameAbsent(CrowdlensError):
    pass


class PedestrianAbsent(CrowdlensError):
    pass


class FrameMismatch(CrowdlensError):
    pass


class NoFrames(CrowdlensError):
    pass


class NegativeSpeed(CrowdlensError):
    pass


# ---------------------------------------------------------------------------
# personality / emotion scoring
# ---------------------------------------------------------------------------

class EmptyRegistryFactor(CrowdlensError):
    def __init__(self, factor):
        self.factor = factor
        super().__init__(f"item registry has no equations for factor {factor}")


class RegistryError(CrowdlensError):
    """Registry file failed to parse or validate."""


class TraitUnavailable(CrowdlensError):
    pass


# ---------------------------------------------------------------------------
# scene classification / reporting
# ---------------------------------------------------------------------------

class IncompleteAnalyses(CrowdlensError):
    pass


class PedestrianMissing(CrowdlensError):
    def __init__(self, ped_id, scene_id=None):
        self.ped_id = ped_id
        self.scene_id = scene_id
        where = f" in scene {scene_id}" if scene_id else ""
        super().__init__(f"pedestrian {ped_id} not found{where}")


# ---------------------------------------------------------------------------
# service
# ---------------------------------------------------------------------------

class StoreUnavailable(CrowdlensError):
    pass


class UnknownScene(CrowdlensError):
    pass


class FrameOutOfRange(CrowdlensError):
    pass


class UnknownSession(CrowdlensError):
    pass
