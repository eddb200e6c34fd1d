class DomainError(ValueError):
    """An argument falls outside the domain an operation is defined on."""


class GeneratorError(RuntimeError):
    """A seeded generator could not produce a sample that passes its
    own membership self-check."""
