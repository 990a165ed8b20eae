"""Pure-Python batch crossing test; the reference for the compiled kernel."""

from .errors import DegenerateConfiguration
from .sphere import Arc, arcs_cross


def first_crossing(starts, ends, majors, p, q, major, eps):
    """Index of the first arc crossing ``(p, q, major)``; -1 if none, -2 if degenerate."""
    try:
        query = Arc(tuple(p), tuple(q), bool(major))
    except DegenerateConfiguration:
        return -2
    for i, (a, b, m) in enumerate(zip(starts, ends, majors)):
        try:
            if arcs_cross(query, Arc(tuple(a), tuple(b), bool(m)), eps):
                return i
        except DegenerateConfiguration:
            return -2
    return -1
