"""Exception types shared across the package."""

from __future__ import annotations


class ShockLabError(Exception):
    """Base class for all shocklab errors."""


class NonPhysicalState(ShockLabError):
    """Density or pressure lost positivity.

    Raised when primitive recovery produces rho <= 0 or p <= 0.  The solver
    annotates `where`, `iteration` and `time` before propagating so the CLI
    can report the offending cell and dump a diagnostic snapshot.
    """

    def __init__(self, message, where=None, iteration=None, time=None):
        super().__init__(message)
        self.where = where
        self.iteration = iteration
        self.time = time

    def __str__(self):
        parts = [super().__str__()]
        if self.where is not None:
            parts.append(f"cell={self.where}")
        if self.iteration is not None:
            parts.append(f"iteration={self.iteration}")
        if self.time is not None:
            parts.append(f"t={self.time:.6g}")
        return " ".join(parts)


class DegenerateFan(ShockLabError):
    """Left and right wave-speed estimates coincide (S_R - S_L ~ 0)."""


class UnsupportedFamily(ShockLabError):
    """The requested scheme family does not support this analysis."""


class ZeroBaseVelocity(ShockLabError):
    """The Lyapunov weights diverge at zero base transverse velocity."""


class SubsonicShock(ShockLabError):
    """Normal-shock relations require a shock Mach number above one."""


class UnknownCase(ShockLabError):
    """No instability metric is defined for this case name."""


class ConfigError(ShockLabError):
    """Malformed run configuration."""

    def __init__(self, message, line=None, key=None):
        super().__init__(message)
        self.line = line
        self.key = key

    def __str__(self):
        prefix = ""
        if self.line is not None:
            prefix += f"line {self.line}: "
        if self.key is not None:
            prefix += f"key '{self.key}': "
        return prefix + super().__str__()
