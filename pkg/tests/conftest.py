from __future__ import annotations

import pytest

from modalcad.bindings import default_keymap
from modalcad.lexicon import default_lexicon


@pytest.fixture(scope="session")
def lexicon():
    return default_lexicon()


@pytest.fixture(scope="session")
def keymap():
    return default_keymap()
