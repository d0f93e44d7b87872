# Copyright 2026 The paulimit Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import json

import numpy as np
import pytest

import paulimit as pm


def sylvester(n):
    w = np.array([[1.0]])
    for _ in range(n):
        w = np.block([[w, w], [w, -w]])
    return w


def test_fwht_matches_dense_walsh():
    rng = np.random.default_rng(0)
    for n in range(1, 6):
        v = rng.normal(size=2**n)
        np.testing.assert_allclose(pm.fwht(v), sylvester(n) @ v, atol=1e-12)
        np.testing.assert_allclose(pm.fwht_inverse(pm.fwht(v)), v, atol=1e-12)
    with pytest.raises(ValueError):
        pm.fwht([1.0, 2.0, 3.0])


def test_simplex_projection_and_permutation():
    np.testing.assert_allclose(pm.simplex_project([0.5, 0.7, -0.2]), [0.4, 0.6, 0.0], atol=1e-12)
    np.testing.assert_array_equal(pm.xor_permute([0.1, 0.2, 0.3, 0.4], 1), [0.2, 0.1, 0.4, 0.3])


def test_clifford_group():
    for g in range(24):
        assert pm.compose(g, pm.inverse(g)) == 0
        assert pm.compose(0, g) == g
    h = pm.clifford_unitary(1)
    np.testing.assert_allclose(np.abs(h), np.full((2, 2), 2**-0.5), atol=1e-12)
    c = pm.sample_identity_circuit(3, 10, 5)
    assert len(c["layers"]) == 10 and len(c["inverse"]) == 3
    assert c == pm.sample_identity_circuit(3, 10, 5)
    for q in range(3):
        u = np.eye(2)
        for layer in c["layers"]:
            u = pm.clifford_unitary(layer[q]) @ u
        u = pm.clifford_unitary(c["inverse"][q]) @ u
        assert abs(abs(np.trace(u)) - 2) < 1e-9


def test_characterize_predict_and_mitigate():
    truth = pm.preset(2, "iid_bitflip:0.01", readout=0.02)
    inputs = [0, 1, 2, 3]
    train = list(range(1, 21))
    records = pm.generate_dataset(truth, train, 40, inputs, seed=3)
    assert len(records) == 20 * 40 * 4
    model = pm.estimate_model(records, 2, inputs, train)
    assert np.abs(model.p(0) - truth.rates).sum() < 0.02

    q = pm.predict(model, 30, 1)
    assert abs(q.sum() - 1) < 1e-12
    assert pm.jsd(q, truth.exact_distribution(30, 1)) < 0.01

    Q, cond = pm.build_Q(model, 30)
    assert Q.shape == (4, 4) and np.isfinite(cond)
    x = pm.mitigate(Q, Q[:, 2])
    np.testing.assert_allclose(x, [0, 0, 1, 0], atol=1e-9)

    test = pm.generate_dataset(truth, [0, 30], 20, inputs, seed=4)
    rows = pm.evaluate(test, 2, model, [30], inputs)
    summary = {r["method"]: r["mean_jsd"] for r in rows if r["input"] is None}
    assert set(summary) == {"unmitigated", "MEM", "proposed"}
    assert summary["proposed"] < summary["unmitigated"]
    np.testing.assert_allclose(pm.mem_build(test, 2).sum(axis=0), np.ones(4), atol=1e-12)


def test_coverage_error_is_raised():
    truth = pm.preset(1, "iid_bitflip:0.02")
    records = pm.generate_dataset(truth, [1, 2], 2, [0], shots=16)
    with pytest.raises(pm.CoverageError):
        pm.estimate_model(records, 1, [0], [1, 2, 3])


def test_rb_fit():
    survival = {m: 0.5 * 0.98**m + 0.5 for m in range(1, 101)}
    fit = pm.rb_fit(survival, 1)
    assert abs(fit["alpha"] - 0.98) < 1e-6
    assert fit["r"] == (1 - fit["alpha"]) / 2


def test_dataset_round_trip_and_cli(tmp_path):
    truth = pm.preset(2, "spam_only:0.03")
    records = pm.generate_dataset(truth, [0], 3, [0, 3], shots=64, seed=1)
    path = tmp_path / "data.jsonl"
    pm.write_dataset(str(path), records, 2)
    loaded, n = pm.read_dataset(str(path))
    assert n == 2 and [r.counts for r in loaded] == [r.counts for r in records]
    first = json.loads(path.read_text().splitlines()[0])
    assert set(first) == {"depth", "input", "seq", "shots", "counts"}

    code, out, err = pm.run_cli(
        ["simulate", "--preset", "iid_bitflip:0.02", "--n", "2", "--depths", "1..3", "--K", "4", "--out",
         str(tmp_path / "sim")])
    assert code == 0, err
    assert (tmp_path / "sim" / "dataset.jsonl").exists()
    assert pm.run_cli(["simulate", "--preset", "bogus"])[0] == 2
