"""Exception types shared across the package."""


class AvatarDmError(Exception):
    """Base class for all package errors."""


class ModelError(AvatarDmError):
    """A dialogue model file is malformed or violates probability constraints."""


class DegenerateObservation(AvatarDmError):
    """The observation has zero likelihood under the model, so the belief
    update normalizer is undefined. The caller owns the recovery policy."""


class InsufficientHistory(AvatarDmError):
    """The belief series is too short to transform (fewer than 2 samples)."""


class OutOfRange(AvatarDmError):
    """A scalar input lies outside its documented domain."""


class EmptyInput(AvatarDmError):
    """An utterance was empty or whitespace only."""


class AllZeroWeights(AvatarDmError):
    """Every rule weight is zero, so the weighted centroid is undefined."""


class LexiconError(AvatarDmError):
    """The sentiment lexicon file is malformed."""


class OntologyError(AvatarDmError):
    """Base class for ontology validation failures."""


class CycleDetected(OntologyError):
    """The child relation contains a cycle."""


class DanglingReference(OntologyError):
    """A node references an id that does not exist."""


class AsymmetricConflict(OntologyError):
    """A conflict edge is declared in only one direction."""


class SessionEnded(AvatarDmError):
    """step() was called on a session that already reached its goal state."""
