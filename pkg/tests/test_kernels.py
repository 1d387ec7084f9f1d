import os
import pathlib
import subprocess
import sys

import numpy as np
import pytest

from tvglearn import _kernels

_SRC = str(pathlib.Path(__file__).resolve().parents[1] / "src")


def _env_with(**extra):
    env = dict(os.environ, **extra)
    env["PYTHONPATH"] = _SRC + os.pathsep + env.get("PYTHONPATH", "")
    return env


class TestTwinEquivalence:
    def test_pairwise_sq_dists(self):
        rng = np.random.default_rng(0)
        for _ in range(30):
            n = int(rng.integers(2, 15))
            s = int(rng.integers(1, 20))
            x = rng.normal(size=(n, s))
            fast = _kernels.pairwise_sq_dists(x)
            plain = _kernels.pairwise_sq_dists_numpy(x)
            np.testing.assert_allclose(fast, plain, rtol=1e-12, atol=1e-14)

    def test_capped_simplex_project(self):
        rng = np.random.default_rng(1)
        for _ in range(100):
            m = int(rng.integers(1, 40))
            k = float(rng.uniform(0.01, m))
            w = rng.normal(0.0, 2.0, size=m)
            out_a, kappa_a, _ = _kernels.capped_simplex_project(w, k, 1e-10)
            out_b, kappa_b, _ = _kernels.capped_simplex_project_numpy(w, k, 1e-10)
            np.testing.assert_allclose(out_a, out_b, atol=1e-12)
            assert kappa_a == pytest.approx(kappa_b, abs=1e-12)

    def test_flat_case_agreement(self):
        out_a, kappa_a, _ = _kernels.capped_simplex_project(
            np.array([5.0, -3.0]), 1.0, 1e-10
        )
        out_b, kappa_b, _ = _kernels.capped_simplex_project_numpy(
            np.array([5.0, -3.0]), 1.0, 1e-10
        )
        np.testing.assert_array_equal(out_a, out_b)
        assert kappa_a == kappa_b == pytest.approx(0.5)


class TestEnvFlagFallback:
    def test_disable_flag_selects_numpy_path(self):
        code = (
            "from tvglearn import _kernels\n"
            "assert not _kernels.USING_NUMBA\n"
            "assert _kernels.pairwise_sq_dists is _kernels.pairwise_sq_dists_numpy\n"
        )
        subprocess.run(
            [sys.executable, "-c", code],
            check=True,
            env=_env_with(TVGLEARN_DISABLE_NUMBA="1"),
        )

    def test_fit_runs_on_numpy_path(self):
        code = (
            "import numpy as np\n"
            "import tvglearn as tg\n"
            "rng = np.random.default_rng(0)\n"
            "cfg = tg.SolverConfig(k_budget=2.0, window_len=6, gamma=0.1, max_iter=20)\n"
            "w_seq, x, report = tg.fit_dynamic(rng.normal(size=(4, 12)), cfg)\n"
            "assert np.isfinite(report.final_objective)\n"
            "assert w_seq.shape == (2, 6)\n"
        )
        subprocess.run(
            [sys.executable, "-c", code],
            check=True,
            env=_env_with(TVGLEARN_DISABLE_NUMBA="1"),
        )
