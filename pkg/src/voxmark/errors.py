"""
Errors Module - voxmark
-----------------------
Exception hierarchy shared by every stage. Each class carries the process exit
code the CLI reports for it: 1 for input and IO problems, 2 for analyses that
cannot proceed on the data they were given.
"""


class VoxmarkError(Exception):
    exit_code = 1


# ── Input / IO (exit 1) ───────────────────────────────────────────────────────
class InputError(VoxmarkError):
    exit_code = 1


class AudioFileNotFound(InputError, FileNotFoundError):
    pass


class MalformedWav(InputError, ValueError):
    pass


class UnsupportedFormat(InputError, ValueError):
    pass


class MalformedManifest(InputError, ValueError):
    pass


class DuplicateId(MalformedManifest):
    pass


class MixedSampleRates(MalformedManifest):
    pass


class ConfigError(InputError, ValueError):
    pass


# ── Analysis (exit 2) ─────────────────────────────────────────────────────────
class AnalysisError(VoxmarkError):
    exit_code = 2


class OutOfRange(AnalysisError, ValueError):
    pass


class InvalidSpec(AnalysisError, ValueError):
    pass


class ClipTooShort(AnalysisError, ValueError):
    pass


class NoSpeechDetected(AnalysisError):
    pass


class NoVoicedRegion(AnalysisError):
    pass


class TooFewRows(AnalysisError, ValueError):
    pass


class DegenerateGenderGroup(AnalysisError, ValueError):
    pass


class UnknownGender(AnalysisError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else ""


class TooFewSamples(AnalysisError, ValueError):
    pass


class DegenerateInput(AnalysisError, ValueError):
    pass


class ZeroVariance(AnalysisError, ValueError):
    pass


class LengthMismatch(AnalysisError, ValueError):
    pass


class EmptyTrainingSet(AnalysisError, ValueError):
    pass


class UntrainedModel(AnalysisError):
    pass


class NonConvergence(AnalysisError):
    def __init__(self, message, iterations=None, residual=None):
        super().__init__(message)
        self.iterations = iterations
        self.residual = residual

    def __reduce__(self):
        return type(self), (self.args[0], self.iterations, self.residual)


class SingularKernel(AnalysisError):
    pass


class TooManyRows(AnalysisError, ValueError):
    pass


class TooFewGroups(AnalysisError, ValueError):
    pass


class SingleClass(AnalysisError, ValueError):
    pass


class MissingUtteranceLabels(AnalysisError, ValueError):
    pass


class FoldError(AnalysisError):
    """A model failed on one cross-validation fold."""

    def __init__(self, model, fold, cause):
        super().__init__(f"model '{model}' failed on fold {fold}: {cause}")
        self.model = model
        self.fold = fold
        self.cause = cause

    def __reduce__(self):
        return type(self), (self.model, self.fold, self.cause)
