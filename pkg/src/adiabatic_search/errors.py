class AdiabaticSearchError(Exception):
    pass


class DimensionError(AdiabaticSearchError, ValueError):
    """Index out of range or mismatched dimensions."""


class PhaseError(AdiabaticSearchError, ValueError):
    """Relative phase requested between orthogonal states."""


class HermitianError(AdiabaticSearchError, ValueError):
    pass


class StepControlError(AdiabaticSearchError, ValueError):
    pass


class NormalizationError(AdiabaticSearchError, ValueError):
    pass


class ReferenceDriftError(AdiabaticSearchError, RuntimeError):
    """The reference evolution left the initial ground state's ray."""


class ConfigError(AdiabaticSearchError, ValueError):
    """Invalid experiment configuration. ``problems`` lists every failure found."""

    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))
