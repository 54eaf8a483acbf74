"""Accounts, sessions, and the permission matrix."""

from datetime import datetime, timedelta, timezone

import pytest

from facmon import records
from facmon.auth import (
    PERMISSIONS,
    ROLE_PERMISSIONS,
    allowed,
    hash_password,
    verify_password,
)
from facmon.domain import Role
from facmon.errors import DomainError


def err_code(fn, *args, **kwargs):
    with pytest.raises(DomainError) as exc:
        fn(*args, **kwargs)
    return exc.value.code


class TestPasswordDigests:
    def test_round_trip(self):
        digest = hash_password("s3cret-pw!", n=2**4)
        assert verify_password("s3cret-pw!", digest)
        assert not verify_password("wrong", digest)

    def test_digest_format_self_describing(self):
        digest = hash_password("s3cret-pw!", n=2**5, r=4, p=2)
        scheme, n, r, p, salt, dk = digest.split("$")
        assert scheme == "scrypt" and (n, r, p) == ("32", "4", "2")
        # params embedded in the digest, so verification survives config changes
        assert verify_password("s3cret-pw!", digest)

    def test_salted(self):
        assert hash_password("same", n=2**4) != hash_password("same", n=2**4)

    def test_garbage_digest_rejected(self):
        assert not verify_password("pw", "not-a-digest")
        assert not verify_password("pw", "md5$1$2$3$zz$zz")


class TestAccounts:
    def test_add_user(self, backend):
        user = backend.auth.add_user("bpm_admin", "password1", Role.FACILITIES_ADMIN)
        assert user["role"] == "FACILITIES_ADMIN"
        assert "password1" not in str(user)

    def test_duplicate_username(self, backend):
        backend.auth.add_user("bpm_admin", "password1", Role.FACILITIES_ADMIN)
        assert (
            err_code(backend.auth.add_user, "bpm_admin", "password2", Role.LEADERSHIP)
            == "DUPLICATE_USERNAME"
        )

    def test_weak_password(self, backend):
        assert err_code(backend.auth.add_user, "user_a", "short", Role.LEADERSHIP) == "WEAK_PASSWORD"

    def test_work_unit_requires_unit_name(self, backend):
        assert err_code(backend.auth.add_user, "unit_a", "password1", Role.WORK_UNIT) == "MISSING_WORK_UNIT"
        user = backend.auth.add_user("unit_b", "password1", Role.WORK_UNIT, work_unit="Perpustakaan")
        assert user["work_unit_name"] == "Perpustakaan"

    def test_work_unit_name_rejected_for_other_roles(self, backend):
        assert (
            err_code(backend.auth.add_user, "lead_a", "password1", Role.LEADERSHIP, work_unit="X")
            == "INVALID_WORK_UNIT"
        )

    def test_username_charset(self, backend):
        for bad in ("ab", "Admin", "a b", "x" * 33, "héllo"):
            assert err_code(backend.auth.add_user, bad, "password1", Role.LEADERSHIP) == "INVALID_USERNAME"

    def test_deactivate(self, backend):
        backend.auth.add_user("bpm_admin", "password1", Role.FACILITIES_ADMIN)
        backend.auth.deactivate_user("bpm_admin")
        assert err_code(backend.auth.authenticate, "bpm_admin", "password1") == "ACCOUNT_INACTIVE"


class TestSessions:
    def test_login_and_authorize(self, backend):
        backend.auth.add_user("bpm_admin", "password1", Role.FACILITIES_ADMIN)
        session = backend.auth.authenticate("bpm_admin", "password1")
        user = backend.auth.authorize(session["token"], "item.register")
        assert user["username"] == "bpm_admin"

    def test_uniform_credential_error(self, backend):
        backend.auth.add_user("bpm_admin", "password1", Role.FACILITIES_ADMIN)
        wrong_pw = err_code(backend.auth.authenticate, "bpm_admin", "nope-nope")
        unknown_user = err_code(backend.auth.authenticate, "ghost", "nope-nope")
        assert wrong_pw == unknown_user == "INVALID_CREDENTIALS"

    def test_token_entropy(self, backend):
        backend.auth.add_user("bpm_admin", "password1", Role.FACILITIES_ADMIN)
        token = backend.auth.authenticate("bpm_admin", "password1")["token"]
        assert len(token) >= 32  # >= 128 bits before encoding

    def test_missing_or_bogus_token(self, backend):
        assert err_code(backend.auth.authorize, None, "item.read") == "UNAUTHENTICATED"
        assert err_code(backend.auth.authorize, "bogus", "item.read") == "UNAUTHENTICATED"

    def test_expired_session(self, tmp_path):
        from conftest import make_config
        from facmon.core import Backend

        now = [datetime(2018, 6, 1, 8, 0, tzinfo=timezone.utc)]
        backend = Backend(make_config(tmp_path), clock=lambda: now[0])
        try:
            backend.auth.add_user("bpm_admin", "password1", Role.FACILITIES_ADMIN)
            token = backend.auth.authenticate("bpm_admin", "password1")["token"]
            assert backend.auth.authorize(token, "item.read")["username"] == "bpm_admin"
            now[0] += timedelta(hours=8, seconds=1)
            assert err_code(backend.auth.authorize, token, "item.read") == "UNAUTHENTICATED"
        finally:
            backend.close()

    def test_forbidden_by_matrix(self, backend):
        backend.auth.add_user("pimpinan", "password1", Role.LEADERSHIP)
        token = backend.auth.authenticate("pimpinan", "password1")["token"]
        assert backend.auth.authorize(token, "report.read")["role"] == "LEADERSHIP"
        assert err_code(backend.auth.authorize, token, "item.register") == "FORBIDDEN"

    def test_deactivated_user_loses_live_session(self, backend):
        backend.auth.add_user("unit_x", "password1", Role.WORK_UNIT, work_unit="X")
        token = backend.auth.authenticate("unit_x", "password1")["token"]
        backend.auth.deactivate_user("unit_x")
        assert err_code(backend.auth.authorize, token, "finding.submit") == "UNAUTHENTICATED"


# Expected decision for every (role, permission) pair, restated as the oracle.
FULL_MATRIX = {
    "FACILITIES_ADMIN": sorted(PERMISSIONS),
    "WORK_UNIT": ["finding.read", "finding.submit", "item.read", "photo.read", "photo.upload"],
    "LEADERSHIP": ["export.read", "finding.read", "item.read", "photo.read", "report.read"],
}


class TestPermissionMatrix:
    def test_matrix_is_total(self):
        for role in Role:
            for permission in PERMISSIONS:
                assert isinstance(allowed(role, permission), bool)

    @pytest.mark.parametrize("role", list(Role))
    def test_matrix_matches_expected(self, role):
        granted = sorted(p for p in PERMISSIONS if allowed(role, p))
        assert granted == FULL_MATRIX[role.value]

    def test_unknown_permission_rejected(self):
        assert err_code(allowed, Role.FACILITIES_ADMIN, "nonsense.key") == "UNKNOWN_PERMISSION"

    def test_roles_cover_matrix(self):
        assert set(ROLE_PERMISSIONS) == set(Role)


class TestNoCleartextPasswords:
    def test_password_absent_from_all_artifacts(self, backend):
        secret = "S3cret-pw-xyz!"
        backend.auth.add_user("bpm_admin", secret, Role.FACILITIES_ADMIN)
        backend.auth.authenticate("bpm_admin", secret)
        # storage files
        for path in backend.store.data_dir.rglob("*"):
            if path.is_file():
                assert secret.encode() not in path.read_bytes(), path
        # audit entries
        for entry in backend.store.audit_all():
            assert secret not in str(entry.before) + str(entry.after)
        # stored user record
        user = records.user_by_username(backend.store.state, "bpm_admin")
        assert secret not in str(user)
