"""Named verdicts and residual magnitudes produced by every checking operation."""

from __future__ import annotations

from .matrices import Matrix, Tolerance, residual_of


class Report:
    """Paired verdict/residual maps plus the kernel that produced them.

    Invariant: every verdict has a matching residual, and a verdict is true
    exactly when its residual passed the tolerance it was checked against.
    Structural (non-residual) verdicts carry residual 0.0 or 1.0.
    """

    def __init__(self, kernel: str):
        self.kernel = kernel
        self.verdicts: dict[str, bool] = {}
        self.residuals: dict[str, float] = {}
        self.notes: dict[str, str] = {}

    def check_zero(self, name: str, diff: Matrix, tol: Tolerance,
                   scale: float = 1.0) -> bool:
        """Record whether a difference matrix vanishes (within tol·scale in float)."""
        residual, ok = residual_of(diff, tol, scale)
        self.verdicts[name] = ok
        self.residuals[name] = residual
        return ok

    def check_flag(self, name: str, ok: bool) -> bool:
        self.verdicts[name] = ok
        self.residuals[name] = 0.0 if ok else 1.0
        return ok

    def check_value(self, name: str, residual: float, tol: Tolerance,
                    scale: float = 1.0) -> bool:
        ok = tol.passes(residual, scale)
        self.verdicts[name] = ok
        self.residuals[name] = residual
        return ok

    def ok(self) -> bool:
        return all(self.verdicts.values())

    def merge(self, other: "Report", prefix: str = "") -> None:
        for k, v in other.verdicts.items():
            self.verdicts[prefix + k] = v
            self.residuals[prefix + k] = other.residuals[k]

    def to_json(self) -> dict:
        out = {
            "verdicts": dict(self.verdicts),
            "residuals": dict(self.residuals),
            "kernel": self.kernel,
        }
        if self.notes:
            out["notes"] = dict(self.notes)
        return out

    def __repr__(self):
        bits = ", ".join(f"{k}={'ok' if v else 'FAIL'}" for k, v in self.verdicts.items())
        return f"Report({self.kernel}: {bits})"
