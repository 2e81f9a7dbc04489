"""Exception hierarchy.

Every error raised for mathematically invalid input derives from
``DomainError``; the command line maps these to exit status 1.  Malformed
text or JSON raises ``ParseError`` (exit status 2).
"""

from __future__ import annotations


class DomainError(Exception):
    """Input is well formed but the requested computation is undefined."""

    code = "domain_error"

    def __init__(self, message: str, **detail: object) -> None:
        super().__init__(message)
        self.detail = detail

    def to_json(self) -> dict:
        out: dict = {"error": self.code, "message": str(self)}
        if self.detail:
            out["detail"] = self.detail
        return out


class ParseError(ValueError):
    """Malformed scalar text, JSON document or command line."""


class SingularMatrix(DomainError):
    code = "singular_matrix"


class DegenerateSpan(DomainError):
    code = "degenerate_span"


class SameClass(DomainError):
    code = "same_class"


class NoStableLattice(DomainError):
    code = "no_stable_lattice"


class WindowUnstable(DomainError):
    code = "window_unstable"


class RankNotSupported(DomainError):
    code = "not_implemented"


class RankDeficient(DomainError):
    code = "rank_deficient"


class TilingFailure(DomainError):
    code = "tiling_failure"


class OverlapViolation(DomainError):
    code = "overlap_violation"


class IndeterminateCR(DomainError):
    code = "indeterminate_cross_ratio"


class WitnessInvalid(DomainError):
    code = "witness_invalid"


class NotConvex(DomainError):
    code = "not_convex"


class MissingStable(DomainError):
    code = "missing_stable"


class TrivialQuotient(DomainError):
    code = "trivial_quotient"
