import os
import random
import subprocess
import sys

import pytest

from lconvex import _kernels_py, kernels, mcmf
from lconvex.gridconvex import NotMidpointClosed, is_lconvex
from oracles import random_tree_table

compiled = pytest.importorskip("lconvex._kernels", reason="compiled kernels not built")


def with_backend(monkeypatch, impl, fn):
    monkeypatch.setattr(kernels, "_impl", impl)
    return fn()


def _answer(grid, g):
    try:
        return is_lconvex(grid, g)
    except NotMidpointClosed:
        return "open"


@pytest.mark.parametrize("seed", range(30))
def test_midpoint_kernel_backends_agree(monkeypatch, seed):
    grid, g = random_tree_table(random.Random(seed))
    a = with_backend(monkeypatch, _kernels_py, lambda: _answer(grid, g))
    b = with_backend(monkeypatch, compiled, lambda: _answer(grid, g))
    assert a == b


@pytest.mark.parametrize("seed", range(8))
def test_potential_kernel_backends_agree(monkeypatch, seed):
    rng = random.Random(seed)
    inst = mcmf.random_instance(rng, rng.randint(3, 5), rng.randint(2, 3))
    a = with_backend(monkeypatch, _kernels_py, lambda: mcmf.dual_brute_force(inst, 3))
    b = with_backend(monkeypatch, compiled, lambda: mcmf.dual_brute_force(inst, 3))
    assert a == b


def test_environment_forces_fallback():
    code = "from lconvex import kernels; print(kernels.BACKEND)"
    env = dict(os.environ, LCONVEX_KERNELS="python")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
    env.pop("LCONVEX_KERNELS")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "compiled"
