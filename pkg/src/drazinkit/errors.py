"""Exception types shared across the toolkit."""


class DrazinKitError(Exception):
    """Base class for every error raised by this package."""


class ShapeMismatchError(DrazinKitError):
    """Operands are not conformable."""


class KernelMismatchError(DrazinKitError):
    """Operands live in different scalar kernels (exact vs float)."""


class SingularMatrixError(DrazinKitError):
    """Matrix is rank deficient where an inverse was required."""


class ExactKernelUnsupportedError(DrazinKitError):
    """Operation needs floating arithmetic (eigenvalues, singular values)."""


class IllConditionedBasisError(DrazinKitError):
    """Float-kernel change of basis too ill-conditioned to trust; retry exactly."""


class NotInClassError(DrazinKitError):
    """A precondition of the form 'operator belongs to class X' failed."""


class EigenFailureError(DrazinKitError):
    """Eigendecomposition did not converge or cannot be certified."""


class NotCommutingError(DrazinKitError):
    """Required commutator is not zero within tolerance."""


class HypothesisViolatedError(DrazinKitError):
    """An intertwining hypothesis does not hold for the given instance."""


class NotIntertwiningError(DrazinKitError):
    """S·X differs from X·T beyond tolerance."""


class NotInvertibleError(DrazinKitError):
    """Intertwiner must be invertible in finite dimension."""


class IndexTooHighError(DrazinKitError):
    """Operation requires Drazin index at most 1 (simple pole)."""


class CouplingNotAdmissibleError(DrazinKitError):
    """Coupling block has a nonzero forbidden component."""


class NonOrthogonalBasisError(DrazinKitError):
    """Core and nilpotent basis columns are not mutually orthogonal."""


class UnsatisfiableSpecError(DrazinKitError):
    """Generator parameters are mutually incompatible."""


class SchemaError(DrazinKitError):
    """Malformed JSON input (matrix, triple, manifest or sidecar)."""
