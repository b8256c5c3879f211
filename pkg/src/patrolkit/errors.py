"""Exception types shared across the package.

Every error carries a stable machine-readable ``code`` that the CLI
diagnostics and the service error bodies expose verbatim.
"""


class PatrolError(Exception):
    code = "error"


class MalformedDocument(PatrolError):
    code = "malformed_document"


class DuplicateId(PatrolError):
    code = "duplicate_id"


class UnknownReference(PatrolError):
    code = "unknown_reference"


class RowNotStochastic(PatrolError):
    code = "row_not_stochastic"

    def __init__(self, node_id: str, total: float):
        super().__init__(
            f"outgoing probabilities of node {node_id!r} sum to {total!r}, expected 1"
        )
        self.node_id = node_id
        self.total = total


class NotIrreducible(PatrolError):
    code = "not_irreducible"


class NoConvergence(PatrolError):
    code = "no_convergence"


class Cancelled(PatrolError):
    code = "cancelled"


class OrderMismatch(PatrolError):
    code = "order_mismatch"


class Unreachable(PatrolError):
    code = "unreachable"


class CursorOutOfRange(PatrolError):
    code = "cursor_out_of_range"


class SessionNotFound(PatrolError):
    code = "session_not_found"
