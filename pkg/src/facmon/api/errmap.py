"""Deterministic mapping from domain error codes to HTTP statuses.

Conventions: UNKNOWN_* lookups are 404; uniqueness and state conflicts are
409; validation failures (INVALID_*, EMPTY_*, malformed values) are 422;
credential problems are 401; permission denials 403. Server-side config and
storage faults surface as 500.
"""

from __future__ import annotations

EXPLICIT_STATUS = {
    "INVALID_CREDENTIALS": 401,
    "ACCOUNT_INACTIVE": 401,
    "UNAUTHENTICATED": 401,
    "FORBIDDEN": 403,
    "PAYLOAD_TOO_LARGE": 413,
    # state conflicts
    "SAME_LOCATION": 409,
    "WRONG_STATE": 409,
    "ILLEGAL_TRANSITION": 409,
    "CONFLICT": 409,
    "CONSTRAINT_VIOLATION": 409,
    "ALREADY_SEEDED": 409,
    "ALREADY_COMPLETED": 409,
    "REPAIR_ALREADY_OPEN": 409,
    "NOT_DAMAGED": 409,
    "TERMINAL_ITEM": 409,
    # validation failures without the INVALID_/EMPTY_ prefix
    "TOO_LONG": 422,
    "WEAK_PASSWORD": 422,
    "MISSING_WORK_UNIT": 422,
    "UNSUPPORTED_MEDIA_TYPE": 422,
    "HEADER_MISMATCH": 422,
    # server-side faults
    "CONFIG_ERROR": 500,
    "HTTP_ERROR": 500,
    "BIND_FAILURE": 500,
    "DATA_DIR_UNWRITABLE": 500,
    "DATA_DIR_LOCKED": 500,
    "STORE_CLOSED": 500,
    "UNKNOWN_PERMISSION": 500,
}

PREFIX_STATUS = (
    ("UNKNOWN_", 404),
    ("DUPLICATE_", 409),
    ("INVALID_", 422),
    ("EMPTY_", 422),
)


def status_for(code: str) -> int:
    if code in EXPLICIT_STATUS:
        return EXPLICIT_STATUS[code]
    for prefix, status in PREFIX_STATUS:
        if code.startswith(prefix):
            return status
    return 500
