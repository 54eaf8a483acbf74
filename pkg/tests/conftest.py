"""Shared fixtures: a fast-crypto backend over a temp data dir, plus a seeded one."""

import pytest

from facmon.config import AppConfig
from facmon.core import Backend, seed_demo


def make_config(tmp_path, **overrides) -> AppConfig:
    # low scrypt cost: tests create many users and sessions
    defaults = dict(data_dir=tmp_path / "data", scrypt_n=2**4, scrypt_r=8, scrypt_p=1)
    defaults.update(overrides)
    return AppConfig(**defaults)


@pytest.fixture
def backend(tmp_path):
    b = Backend(make_config(tmp_path))
    yield b
    b.close()


@pytest.fixture
def seeded(tmp_path):
    b = Backend(make_config(tmp_path))
    seed_demo(b, demo_password="demo-pass-1")
    yield b
    b.close()
