import os
import subprocess
import sys

import pytest

from gptcheck import eps, tolerance


def _python(code, **env):
    full = {**os.environ, **env}
    return subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, env=full)


def test_default_and_override():
    assert eps() == 1e-9
    with tolerance(1e-6):
        assert eps() == 1e-6
        with tolerance(1e-12):
            assert eps() == 1e-12
        assert eps() == 1e-6
    assert eps() == 1e-9


@pytest.mark.parametrize("bad", [0.0, 1e-15, 1e-2])
def test_out_of_range(bad):
    with pytest.raises(ValueError):
        with tolerance(bad):
            pass


def test_environment_variable():
    proc = _python("import gptcheck; print(gptcheck.eps())", GPTCHECK_TOLERANCE="1e-7")
    assert proc.stdout.strip() == "1e-07"


def test_pure_python_fallback_selected():
    proc = _python("import gptcheck.lp as lp; print(lp.BACKEND)", GPTCHECK_PURE_PYTHON="1")
    assert proc.stdout.strip() == "python"
