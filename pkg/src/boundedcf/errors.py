"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class UnfactoredError(DomainError):
    """Factoring gave up before the cofactor was fully split.

    ``partial`` maps the primes found so far to their exponents and
    ``cofactor`` is the unresolved remainder.
    """

    def __init__(self, n, partial, cofactor):
        super().__init__(f"could not finish factoring {n}; cofactor {cofactor} remains")
        self.n = n
        self.partial = partial
        self.cofactor = cofactor


class CertificationError(RuntimeError):
    """A construction produced an object that failed its own check."""
