"""Exception hierarchy.

Every error carries a stable module-qualified ``code`` so the CLI can report
failures uniformly (``core.parse-error``, ``ramsey.budget-exceeded``, ...).
"""


class RamseyKitError(Exception):
    code = "ramseykit.error"


# -- core-structures ---------------------------------------------------------

class SignatureError(RamseyKitError):
    code = "core.bad-signature"


class SignatureMismatch(RamseyKitError):
    code = "core.signature-mismatch"


class OutOfUniverse(RamseyKitError):
    code = "core.out-of-universe"


class NoOrder(RamseyKitError):
    code = "core.no-order"


class NotIncreasing(RamseyKitError):
    code = "core.not-increasing"


class NotClosed(RamseyKitError):
    """Element set not closed under the host's functions."""
    code = "core.not-closed"


class CanonicalizationLimit(RamseyKitError):
    """Unordered canonical form requested for a structure too large to permute."""
    code = "core.canonicalization-limit"


class ParseError(RamseyKitError):
    code = "core.parse-error"

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" at line {line}" + (f", column {column}" if column is not None else "")
        super().__init__(message + where)


# -- tree-kit ----------------------------------------------------------------

class MeetNotClosed(RamseyKitError):
    code = "tree.meet-not-closed"


class NotMeetClosed(RamseyKitError):
    code = "tree.marks-not-meet-closed"


class LevelExceedsM(RamseyKitError):
    code = "tree.level-exceeds-m"


class NotInTreeAge(RamseyKitError):
    """Structure admits no embedding into any full tree of the allowed shape."""
    code = "tree.not-in-tree-age"


# -- types-logic -------------------------------------------------------------

class ArityMismatch(RamseyKitError):
    code = "logic.arity-mismatch"


class LengthMismatch(RamseyKitError):
    code = "logic.length-mismatch"


class FormulaParseError(ParseError):
    code = "logic.formula-parse-error"


# -- ramsey-engine -----------------------------------------------------------

class BudgetExceeded(RamseyKitError):
    code = "ramsey.budget-exceeded"


class ColoringIncomplete(RamseyKitError):
    code = "ramsey.coloring-incomplete"


# -- homogenizer -------------------------------------------------------------

class TypeNotRealized(RamseyKitError):
    code = "homogenize.type-not-realized"


class NoHomogeneousCopy(RamseyKitError):
    """The finite index was too small to carry out a homogenization round."""
    code = "homogenize.no-homogeneous-copy"


class VerificationFailed(RamseyKitError):
    """A result failed its own literal-by-literal re-verification."""
    code = "homogenize.verification-failed"
