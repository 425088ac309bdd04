# Copyright 2026 The adiatherm Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import json
import math

import pytest

import adiatherm as at


def test_entropy_helpers():
    assert at.s0_of_beta0(0.0) == pytest.approx(math.log(2.0))
    assert at.entropy_from_x(-0.921) == pytest.approx(0.1665, abs=5e-4)
    assert at.predicted_noisy_entropy(1.2, 1.0) == pytest.approx(at.s0_of_beta0(1.2))
    with pytest.raises(ValueError):
        at.entropy_from_x(1.5)


def test_beta_from_observables():
    b = at.beta_from_observables(
        at.Measured(-2.334, 0.0186), at.Measured(-2.0279, 0.0161), at.Measured(-0.921, 0.0028), at.Measured(-0.846, 0.0026)
    )
    assert b.temperature == pytest.approx(2.562, abs=0.03)
    assert b.temperature_error == pytest.approx(0.256, abs=0.05)


def test_ising_ground_energy():
    h = at.ising_1d(6, -1.0, 1.0, 0.0, True)
    assert len(h) == 12
    # Critical ring of 6 spins: E0 = -2 sum_k |cos(k/2)| over antiperiodic k.
    ks = [math.pi * (2 * m + 1) / 6 for m in range(6)]
    exact = -sum(abs(math.cos(k / 2)) for k in ks)
    assert at.lowest_eigenvalues(h, 1)[0] == pytest.approx(2 * exact, rel=1e-10)


def test_thermal_prep_noiseless_entropy_is_conserved():
    cfg = at.ThermalPrepConfig()
    cfg.setup.lattice = at.Lattice.ring(6)
    cfg.setup.schedule.steps = 20
    cfg.setup.schedule.h0_sign = at.aligned_h0_sign(cfg.setup.schedule.target.h_x)
    cfg.beta0_grid = [0.0, 0.5, 1.0, 1.5]
    res = at.run_thermal_prep(cfg)
    assert len(res.records) == 4
    for r in res.records:
        assert r.S == pytest.approx(at.s0_of_beta0(r.beta0), abs=1e-8)
    energies = [r.E for r in res.records]
    assert all(b < a for a, b in zip(energies, energies[1:]))


def test_capacity_error():
    with pytest.raises(MemoryError):
        cfg = at.ThermalPrepConfig()
        cfg.setup.lattice = at.Lattice.ring(14)
        cfg.beta0_grid = [0.5, 1.0, 1.5]
        at.run_thermal_prep(cfg)


def test_run_command_writes_outputs(tmp_path):
    resolved = at.run("perturb-scaling", {"n_list": [4], "t_count": 9, "fit_t_min": 1, "lambdas": [1, 2]}, tmp_path)
    assert resolved["n_list"] == [4]
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["command"] == "perturb-scaling"
    assert (tmp_path / "slopes.csv").exists()
    with pytest.raises(ValueError):
        at.run("perturb-scaling", {"unknown": 1}, tmp_path)
    assert "table1" in at.command_names()
