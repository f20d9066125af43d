"""Run the acceptance gate and print one PASS/FAIL line per criterion."""

import pathlib
import sys

import pytest

if __name__ == "__main__":
    here = pathlib.Path(__file__).resolve().parent.parent
    sys.exit(pytest.main(["-q", str(here / "tests" / "test_acceptance.py")]))
