"""Exception hierarchy shared by all folint modules."""


class FolintError(Exception):
    """Base class for everything this package raises on purpose."""


class MixedFields(FolintError):
    """Two values from distinct number fields were combined."""


class UnsupportedExtension(FolintError):
    """A computation would need a second independent field extension
    (or a tower), which this package does not build."""


class ZeroPolynomial(FolintError):
    """Operation requires a nonzero polynomial."""


class FactorDegreeCap(FolintError):
    """Univariate factorization exceeded the configured degree cap."""


class InhomogeneousInput(FolintError):
    """A polynomial that must be homogeneous is not."""


class EulerViolation(FolintError):
    """X*A + Y*B + Z*C does not vanish identically."""


class NotCoprime(FolintError):
    """Two polynomials share a non-constant common factor."""


class UnequalDegrees(FolintError):
    """Pencil generators must be homogeneous of the same degree."""


class DegenerateFoliation(FolintError):
    """The foliation has a non-isolated singularity or a Milnor number > 1."""


class NonIsolated(FolintError):
    """Colength computation failed to stabilize below the jet cap."""


class SingularJacobian(FolintError):
    """Eigenvalue extraction requires an invertible linear part."""


class AmbiguousChain(FolintError):
    """A blow-up produced an unexpected number of continuation points."""


class NotReduced(FolintError):
    """A germ that must be reduced (squarefree) is not."""


class NotSquarefreeExtension(FolintError):
    """The declared extension polynomial is not irreducible over Q."""


class BasePointCollision(FolintError):
    """A reduced singularity lies on every member of the pencil."""


class ParseError(FolintError):
    """Input text did not match the foliation-file grammar."""

    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        if line is not None:
            message = f"line {line}, col {col}: {message}"
        super().__init__(message)
