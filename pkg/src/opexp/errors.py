"""Exception hierarchy shared by every opexp module."""


class OpexpError(Exception):
    """Base class for all errors raised by opexp."""


class DimensionMismatchError(OpexpError, ValueError):
    def __init__(self, left: int, right: int, op: str = "operation"):
        self.left = left
        self.right = right
        super().__init__(f"{op}: dimension mismatch ({left} vs {right})")


class MatrixFormatError(OpexpError, ValueError):
    """Malformed matrix data (wrong shape, non-finite entries, bad JSON)."""


class NotNormalError(OpexpError, ValueError):
    def __init__(self, residual: float, tol: float):
        self.residual = residual
        self.tol = tol
        super().__init__(
            f"matrix is not normal: comm_residual(T, T*) = {residual:.3e} > {tol:.1e}"
        )


class NotHermitianError(OpexpError, ValueError):
    def __init__(self, residual: float, tol: float):
        self.residual = residual
        self.tol = tol
        super().__init__(f"matrix is not Hermitian: ||H - H*||_F = {residual:.3e} > {tol:.3e}")


class ConvergenceError(OpexpError, ArithmeticError):
    def __init__(self, off_norm: float, sweeps: int):
        self.off_norm = off_norm
        self.sweeps = sweeps
        super().__init__(
            f"Jacobi iteration did not converge in {sweeps} sweeps "
            f"(off-diagonal Frobenius mass {off_norm:.3e})"
        )


class ExpOverflowError(OpexpError, OverflowError):
    """The squaring phase of the matrix exponential left the double range."""


class GeneratorError(OpexpError, RuntimeError):
    """A random construction could not be completed (resampling budget spent,
    impossible request)."""
