"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Raised when input data violates a documented invariant."""


class ManifestError(ValidationError):
    """Raised when a corpus manifest fails validation; names the offender."""


class CheckpointIntegrityError(RuntimeError):
    """Raised when a checkpoint file fails its checksum or is malformed."""


class CheckpointMismatchError(RuntimeError):
    """Raised when a checkpoint's configuration hash does not match the model."""


class TrainingDiverged(RuntimeError):
    """Raised when a training step produces a non-finite loss."""
