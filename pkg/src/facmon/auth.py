"""User accounts, credential checks, sessions, and the role permission matrix.

Passwords are stored only as salted scrypt digests in a self-describing
string format (``scrypt$N$r$p$salt$hash``), so cost parameters can be tuned
without invalidating existing accounts. Credential failures are reported with
a single INVALID_CREDENTIALS error whether the username or the password was
wrong, to resist account enumeration.
"""

from __future__ import annotations

import hashlib
import hmac
import re
import secrets
from datetime import datetime, timedelta, timezone
from typing import Callable, Iterable

from . import records
from .domain import Role
from .errors import bail
from .storage import AuditDraft, Store, Write

PASSWORD_MIN = 8
SESSION_TOKEN_BYTES = 32  # 256-bit tokens
DEFAULT_SESSION_TTL_HOURS = 8

# Every permission key a route or operation can ask for. The matrix below is
# total over this set.
PERMISSIONS = frozenset(
    {
        "reference.read",
        "reference.write",
        "item.register",
        "item.read",
        "item.transfer",
        "item.status",
        "photo.upload",
        "photo.read",
        "repair.open",
        "repair.complete",
        "finding.submit",
        "finding.read",
        "finding.follow_up",
        "finding.resolve",
        "report.read",
        "export.read",
        "user.manage",
        "audit.read",
    }
)

# Facilities admins operate everything; work units report findings and read
# within their own scope; leadership consumes reports and read views. Reads
# for WORK_UNIT are additionally scoped to own records/assigned locations by
# the query layers.
ROLE_PERMISSIONS: dict[Role, frozenset[str]] = {
    Role.FACILITIES_ADMIN: PERMISSIONS,
    Role.WORK_UNIT: frozenset(
        {"finding.submit", "finding.read", "item.read", "photo.upload", "photo.read"}
    ),
    Role.LEADERSHIP: frozenset(
        {"report.read", "export.read", "item.read", "finding.read", "photo.read"}
    ),
}


def allowed(role: Role, permission: str) -> bool:
    """Total allow/deny decision for a (role, permission) pair."""
    if permission not in PERMISSIONS:
        raise bail("UNKNOWN_PERMISSION", f"no permission key {permission!r}")
    return permission in ROLE_PERMISSIONS[Role(role)]


def hash_password(password: str, *, n: int = 2**14, r: int = 8, p: int = 1) -> str:
    salt = secrets.token_bytes(16)
    digest = hashlib.scrypt(
        password.encode("utf-8"), salt=salt, n=n, r=r, p=p, maxmem=128 * 1024 * 1024
    )
    return f"scrypt${n}${r}${p}${salt.hex()}${digest.hex()}"


def verify_password(password: str, stored: str) -> bool:
    try:
        scheme, n, r, p, salt_hex, digest_hex = stored.split("$")
        if scheme != "scrypt":
            return False
        expected = bytes.fromhex(digest_hex)
        actual = hashlib.scrypt(
            password.encode("utf-8"),
            salt=bytes.fromhex(salt_hex),
            n=int(n),
            r=int(r),
            p=int(p),
            dklen=len(expected),
            maxmem=128 * 1024 * 1024,
        )
    except (ValueError, TypeError):
        return False
    return hmac.compare_digest(actual, expected)


_USERNAME_RE = re.compile(r"^[a-z0-9_]{3,32}$")


def _valid_username(username: str) -> bool:
    return _USERNAME_RE.match(username) is not None


class AuthService:
    """Account and session operations over the shared store."""

    def __init__(
        self,
        store: Store,
        *,
        session_ttl_hours: float = DEFAULT_SESSION_TTL_HOURS,
        scrypt_n: int = 2**14,
        scrypt_r: int = 8,
        scrypt_p: int = 1,
        clock: Callable[[], datetime] | None = None,
    ):
        self.store = store
        self.session_ttl_hours = session_ttl_hours
        self._scrypt = {"n": scrypt_n, "r": scrypt_r, "p": scrypt_p}
        self.clock = clock or (lambda: datetime.now(timezone.utc))

    # -- accounts ------------------------------------------------------------

    def add_user(
        self,
        username: str,
        password: str,
        role: Role | str,
        work_unit: str | None = None,
        locations: Iterable[tuple[str, str]] = (),
        actor: str = "system",
    ) -> dict:
        role = Role(role)
        if not _valid_username(username):
            raise bail(
                "INVALID_USERNAME",
                "username must be 3-32 chars of lowercase letters, digits or underscore",
            )
        if len(password) < PASSWORD_MIN:
            raise bail("WEAK_PASSWORD", f"password must be at least {PASSWORD_MIN} chars")
        if role is Role.WORK_UNIT and not work_unit:
            raise bail("MISSING_WORK_UNIT", "WORK_UNIT users need a work_unit_name")
        if role is not Role.WORK_UNIT and work_unit:
            raise bail("INVALID_WORK_UNIT", f"role {role.value} does not take a work unit name")
        state = self.store.state
        if records.user_by_username(state, username) is not None:
            raise bail("DUPLICATE_USERNAME", f"username {username!r} already exists")
        assigned = []
        for campus_code, location_code in locations:
            loc = records.location_by_address(state, campus_code, location_code)
            if loc is None:
                raise bail("UNKNOWN_LOCATION", f"no location {campus_code}/{location_code}")
            assigned.append(loc["id"])
        user = {
            "id": records.new_id(),
            "username": username,
            "password_digest": hash_password(password, **self._scrypt),
            "role": role.value,
            "work_unit_name": work_unit,
            "assigned_locations": assigned,
            "active": True,
        }
        write = Write(records.USER, user["id"], user)
        self.store.commit(
            [write], [AuditDraft(actor, "user.manage", records.USER, user["id"], None, user)]
        )
        return user

    def list_users(self) -> list[dict]:
        return sorted((u for _, u in self.store.state.all(records.USER)), key=lambda u: u["username"])

    def get_user(self, user_id: str) -> dict | None:
        return self.store.state.get(records.USER, user_id)

    def deactivate_user(self, username: str, actor: str = "system") -> dict:
        state = self.store.state
        user = records.user_by_username(state, username)
        if user is None:
            raise bail("UNKNOWN_USER", f"no user {username!r}")
        updated = {**user, "active": False}
        self.store.commit(
            [Write(records.USER, user["id"], updated, state.version(records.USER, user["id"]))],
            [AuditDraft(actor, "user.manage", records.USER, user["id"], user, updated)],
        )
        return updated

    # -- sessions --------------------------------------------------------------

    def authenticate(self, username: str, password: str) -> dict:
        """Verify credentials and issue a session. Returns the session record."""
        user = records.user_by_username(self.store.state, username)
        if user is None or not verify_password(password, user["password_digest"]):
            raise bail("INVALID_CREDENTIALS", "username or password is incorrect")
        if not user["active"]:
            raise bail("ACCOUNT_INACTIVE", "account is deactivated")
        now = self.clock()
        session = {
            "token": secrets.token_urlsafe(SESSION_TOKEN_BYTES),
            "user_id": user["id"],
            "issued_at": now.isoformat(),
            "expires_at": (now + timedelta(hours=self.session_ttl_hours)).isoformat(),
        }
        self.store.commit(
            [Write(records.SESSION, session["token"], session)],
            [AuditDraft(user["id"], "auth.login", records.SESSION, session["token"], None, session)],
        )
        return session

    def authorize(self, token: str | None, permission: str) -> dict:
        """Resolve a live session and check the permission matrix.

        Returns the acting user record (for audit attribution).
        """
        if not token:
            raise bail("UNAUTHENTICATED", "missing bearer token")
        session = self.store.state.find_unique(records.SESSION, token)
        if session is None:
            raise bail("UNAUTHENTICATED", "unknown session token")
        if self.clock() > datetime.fromisoformat(session["expires_at"]):
            raise bail("UNAUTHENTICATED", "session expired")
        user = self.store.state.get(records.USER, session["user_id"])
        if user is None or not user["active"]:
            raise bail("UNAUTHENTICATED", "account is no longer active")
        if not allowed(Role(user["role"]), permission):
            raise bail(
                "FORBIDDEN",
                f"role {user['role']} may not perform {permission}",
                permission=permission,
            )
        return user
