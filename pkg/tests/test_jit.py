"""The numba kernels and the pure-numpy fallback must agree."""

import json
import os
import subprocess
import sys

import numpy as np
import pytest

SCRIPT = r"""
import json
from learndyn import DynamicsModel, simulate
from learndyn._jit import NUMBA_ENABLED
from learndyn.lti import StateSpaceSiso
from learndyn.signals import SampledSignal, example1_signal, example3_signal
import numpy as np

t = np.linspace(0, 3, 31)
sampled = SampledSignal(t, np.column_stack([np.sin(t), np.cos(t), 0.3 * t]))
pred = StateSpaceSiso([[0.0, 1.0], [-3.0, -4.0]], [0.0, 1.0], [2.0, 1.0])
cases = [("rd", example1_signal()), ("bnn", example1_signal()), ("smith", example1_signal()),
         ("tp", example1_signal()), ("exrd", example3_signal()), ("anticipatory", example3_signal()),
         ("oracle_rd", example3_signal()), ("predictive_exrd", sampled), ("predictive_rd", sampled)]
out = {"numba": NUMBA_ENABLED}
for kind, sig in cases:
    kw = {"predictor": pred} if kind == "predictive_rd" else {}
    traj = simulate(DynamicsModel(kind, sig.n, **kw), sig, 3.0, 0.01)
    out[kind] = traj.states[-1].tolist() + [traj.cum_reward[-1]]
print(json.dumps(out))
"""


def run(flag):
    env = dict(os.environ, LEARNDYN_NUMBA=flag)
    res = subprocess.run([sys.executable, "-c", SCRIPT], env=env, capture_output=True, text=True, check=True)
    return json.loads(res.stdout.strip().splitlines()[-1])


def test_fallback_matches_numba():
    pytest.importorskip("numba")
    fast, slow = run("1"), run("0")
    assert fast.pop("numba") is True
    assert slow.pop("numba") is False
    for kind in fast:
        np.testing.assert_allclose(fast[kind], slow[kind], rtol=1e-12, atol=1e-13, err_msg=kind)
